"""Bivariate Student distributions with integer degrees of freedom.

The unit-scale density is ``(nu / 2pi) (x1^2 + x2^2 + 1)^(-(2 + nu) / 2)``.
Since ``dw = (x1^2 + x2^2 + 1)^(-3/2) dx`` and ``w3 = (x1^2 + x2^2 + 1)^(-1/2)``,
its kernel equals ``w3^(nu - 1) dw`` on the hemisphere. Polygon masses are
therefore estimated as ``(nu / 2pi) * Omega * E[w3^(nu - 1)]`` with directions
uniform over the subtended solid angle ``Omega``. At ``nu = 1`` the weight is
identically one and the estimate is the exact Cauchy mass.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from projcauchy import rng
from projcauchy.cauchy_distributions import TWO_PI, integrate_cauchy_std
from projcauchy.errors import InvalidArgumentError
from projcauchy.polygons import PlanePolygon
from projcauchy.projective_geometry import projection_jacobian
from projcauchy.spherical_polygon import SphericalPolygon, sample_spherical_polygon


@dataclass(frozen=True)
class MCEstimate:
    value: float
    std_error: float
    n: int


def check_dof(nu):
    if isinstance(nu, bool) or not isinstance(nu, (int, np.integer)):
        raise InvalidArgumentError(f"degrees of freedom must be an integer, got {nu!r}")
    if nu < 1:
        raise InvalidArgumentError(f"degrees of freedom must be >= 1, got {nu}")
    return int(nu)


def student_pdf(x, nu):
    nu = check_dof(nu)
    if nu == 1:
        kernel = projection_jacobian(x)
    else:
        x = np.asarray(x, dtype=float)
        kernel = projection_jacobian(x) ** ((2.0 + nu) / 3.0)
    value = kernel * nu / TWO_PI
    return float(value) if np.ndim(value) == 0 else value


def _chunk_moments(sphere, nu, seed, stream, count):
    """(count, mean, M2) of the weight w3^(nu - 1) over ``count`` uniform directions."""
    if count == 0:
        return 0, 0.0, 0.0
    w = sample_spherical_polygon(sphere, rng.uniform_pairs(seed, count, stream))
    weights = w[:, 2] ** (nu - 1)
    mean = float(np.sum(weights) / count)
    m2 = float(np.sum((weights - mean) ** 2))
    return count, mean, m2


def _combine(parts):
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in parts:
        if nb == 0:
            continue
        total = n + nb
        delta = mb - mean
        mean = (n * mean + nb * mb) / total if n else mb
        m2 = m2 + m2b + delta * delta * n * nb / total
        n = total
    return n, mean, m2


def integrate_student_mc(poly, nu, n, seed, workers=1):
    """Monte Carlo mass of the unit-scale Student-nu distribution inside a convex polygon.

    The ``n`` draws are split into ``workers`` contiguous chunks; chunk ``k``
    uses RNG stream ``k`` of ``seed`` (see :mod:`projcauchy.rng`). Results are
    deterministic for a fixed ``(seed, workers)``.

    Returns
    -------
    MCEstimate
        ``value`` and its standard error. With ``nu = 1`` the value equals
        :func:`integrate_cauchy_std` exactly and the error is zero.
    """
    nu = check_dof(nu)
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
        raise InvalidArgumentError(f"sample count must be a positive integer, got {n!r}")
    if isinstance(workers, bool) or not isinstance(workers, (int, np.integer)) or workers < 1:
        raise InvalidArgumentError(f"worker count must be a positive integer, got {workers!r}")
    poly = poly if isinstance(poly, PlanePolygon) else PlanePolygon(poly)
    poly.require_convex()
    sphere = SphericalPolygon.from_plane(poly)
    mass = integrate_cauchy_std(poly)

    counts = rng.split_counts(int(n), int(workers))
    jobs = [(sphere, nu, seed, k, c) for k, c in enumerate(counts)]
    if workers == 1:
        parts = [_chunk_moments(*jobs[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _chunk_moments(*job), jobs))
    total, mean, m2 = _combine(parts)

    value = mass * (nu * mean)
    if nu == 1:
        std_error = 0.0
    elif total > 1:
        std_error = mass * nu * float(np.sqrt(m2 / (total - 1) / total))
    else:
        std_error = float("nan")
    return MCEstimate(value=float(value), std_error=std_error, n=total)
