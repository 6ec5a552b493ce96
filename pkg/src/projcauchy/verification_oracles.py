"""Brute-force oracles: adaptive quadrature over polygons, rejection sampling,
binned chi-square tests.

This module deliberately avoids the solid-angle and spherical-sampling code so
that it can check those routes independently.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaincc

from projcauchy import rng
from projcauchy.errors import (
    BudgetExceededError,
    ImpracticalBoundError,
    InvalidArgumentError,
    InvalidBinningError,
    InvalidBoundError,
)
from projcauchy.polygons import PlanePolygon, subdivide_triangle

DEFAULT_BUDGET = 10**7
MIN_EXPECTED_COUNT = 5.0
# keeps rejection draws off the streams used by the spherical sampler for the same seed
REJECTION_STREAM = 0x52454A454354
MIN_ACCEPTANCE = 1e-6

# Radon's 7-point, degree-5 symmetric rule: barycentric nodes and weights (sum 1)
_S15 = np.sqrt(15.0)
_A1, _B1 = (6.0 - _S15) / 21.0, (9.0 + 2.0 * _S15) / 21.0
_A2, _B2 = (6.0 + _S15) / 21.0, (9.0 - 2.0 * _S15) / 21.0
_W1, _W2 = (155.0 - _S15) / 1200.0, (155.0 + _S15) / 1200.0
_BARY = np.array(
    [
        [1 / 3, 1 / 3, 1 / 3],
        [_A1, _A1, _B1], [_A1, _B1, _A1], [_B1, _A1, _A1],
        [_A2, _A2, _B2], [_A2, _B2, _A2], [_B2, _A2, _A2],
    ]
)
_WEIGHTS = np.array([9.0 / 40.0, _W1, _W1, _W1, _W2, _W2, _W2])


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int


@dataclass(frozen=True)
class GofReport:
    statistic: float
    dof: int
    p_value: float
    bin_counts: list = field(default_factory=list)  # (expected, observed) per bin


@dataclass(frozen=True)
class HomogeneityReport:
    statistic: float
    dof: int
    p_value: float
    counts_a: np.ndarray
    counts_b: np.ndarray


def _tri_areas(tris):
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 0]
    return 0.5 * np.abs(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])


def _apply_rule(f, tris):
    pts = np.einsum("qk,tkd->tqd", _BARY, tris)
    vals = np.asarray(f(pts.reshape(-1, 2)), dtype=float).reshape(len(tris), len(_BARY))
    if not np.all(np.isfinite(vals)):
        raise InvalidArgumentError("integrand returned a non-finite value inside the polygon")
    return _tri_areas(tris) * (vals @ _WEIGHTS)


def _children(tris):
    a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
    ab, bc, ca = 0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)
    # children of triangle i sit at rows 4i .. 4i+3
    return np.stack(
        [
            np.stack([a, ab, ca], axis=1),
            np.stack([ab, b, bc], axis=1),
            np.stack([ca, bc, c], axis=1),
            np.stack([ab, bc, ca], axis=1),
        ],
        axis=1,
    ).reshape(-1, 3, 2)


def quadrature_integrate(f, poly, tol=1e-10, max_evaluations=DEFAULT_BUDGET):
    """Adaptive integral of ``f`` over a polygon.

    The polygon is ear-clipped into triangles. Each triangle is compared with
    the sum over its four midpoint children (Radon's degree-5 rule on both);
    it is accepted once the difference is below ``tol`` times its share of the
    polygon area, otherwise the children are refined in turn.

    Parameters
    ----------
    f : callable
        Vectorized integrand mapping points of shape (n, 2) to values (n,).
    poly : PlanePolygon or array_like
    tol : float
        Absolute error target for the whole polygon.
    max_evaluations : int
        Evaluation budget; exceeding it raises :class:`BudgetExceededError`
        whose ``best`` attribute holds the partial :class:`QuadratureResult`.
    """
    if not tol > 0:
        raise InvalidArgumentError(f"tolerance must be positive, got {tol}")
    poly = poly if isinstance(poly, PlanePolygon) else PlanePolygon(poly)
    tris = poly.triangulate()
    total_area = float(np.sum(_tri_areas(tris)))
    est = _apply_rule(f, tris)
    evaluations = len(tris) * len(_BARY)
    value = 0.0
    error = 0.0
    while len(tris):
        kids = _children(tris)
        if evaluations + len(kids) * len(_BARY) > max_evaluations:
            best = QuadratureResult(value + float(np.sum(est)), error + float(np.sum(np.abs(est))), evaluations)
            raise BudgetExceededError(
                f"quadrature did not reach tol={tol:g} within {max_evaluations} evaluations", best=best
            )
        kid_est = _apply_rule(f, kids)
        evaluations += len(kids) * len(_BARY)
        refined = kid_est.reshape(-1, 4).sum(axis=1)
        err = np.abs(refined - est)
        done = err <= tol * _tri_areas(tris) / total_area
        value += float(np.sum(refined[done]))
        error += float(np.sum(err[done]))
        keep = np.repeat(~done, 4)
        tris = kids[keep]
        est = kid_est[keep]
    return QuadratureResult(value, error, evaluations)


def rejection_sample(f, poly, bound, seed, n, batch=65536):
    """``n`` points distributed as ``f`` restricted to ``poly``.

    Proposals are uniform in the bounding box; a proposal ``x`` is kept when
    it lies in the polygon and ``U * bound < f(x)``.

    Raises
    ------
    InvalidBoundError
        If any evaluated density exceeds ``bound``.
    ImpracticalBoundError
        If fewer than one proposal in a million is accepted.
    """
    if not bound > 0:
        raise InvalidArgumentError(f"bound must be positive, got {bound}")
    poly = poly if isinstance(poly, PlanePolygon) else PlanePolygon(poly)
    gen = rng.generator(seed, REJECTION_STREAM)
    lo, hi = poly.bounding_box()
    out = []
    accepted = 0
    proposed = 0
    while accepted < n:
        x = lo + (hi - lo) * gen.random((batch, 2))
        u = gen.random(batch)
        inside = poly.contains(x, tol=0.0)
        fx = np.asarray(f(x[inside]), dtype=float)
        if np.any(fx > bound):
            raise InvalidBoundError(f"density {float(fx.max())!r} exceeds the supplied bound {bound!r}")
        keep = u[inside] * bound < fx
        out.append(x[inside][keep])
        accepted += int(np.sum(keep))
        proposed += batch
        if proposed >= 10**6 and accepted < MIN_ACCEPTANCE * proposed:
            raise ImpracticalBoundError(f"acceptance rate {accepted / proposed:.2e} is below {MIN_ACCEPTANCE:g}")
    return np.concatenate(out)[:n]


def _as_bins(bins):
    return [b if isinstance(b, PlanePolygon) else PlanePolygon(b) for b in bins]


def bin_counts(samples, bins):
    """Count samples per bin, each sample going to the first bin that contains it."""
    samples = np.atleast_2d(np.asarray(samples, dtype=float))
    bins = _as_bins(bins)
    counts = np.zeros(len(bins), dtype=np.int64)
    remaining = samples
    for k, b in enumerate(bins):
        inside = b.contains(remaining)
        counts[k] = int(np.sum(inside))
        remaining = remaining[~inside]
    if len(remaining):
        raise InvalidBinningError(f"{len(remaining)} samples fall outside every bin; bins must cover the domain")
    return counts


def chi_square_gof(samples, bins, masses):
    """Pearson goodness-of-fit of binned samples against per-bin masses.

    Masses are renormalized to sum to one, so raw polygon masses can be passed
    directly. Degrees of freedom are ``len(bins) - 1``.
    """
    masses = np.asarray(masses, dtype=float)
    if len(masses) != len(bins):
        raise InvalidBinningError(f"{len(bins)} bins but {len(masses)} masses")
    if np.any(masses < 0) or not masses.sum() > 0:
        raise InvalidBinningError("bin masses must be non-negative with a positive total")
    observed = bin_counts(samples, bins)
    n = int(observed.sum())
    expected = n * masses / masses.sum()
    if np.any(expected < MIN_EXPECTED_COUNT):
        k = int(np.argmin(expected))
        raise InvalidBinningError(f"bin {k} expects {expected[k]:.3g} < {MIN_EXPECTED_COUNT:g} samples")
    statistic = float(np.sum((observed - expected) ** 2 / expected))
    dof = len(bins) - 1
    return GofReport(
        statistic=statistic,
        dof=dof,
        p_value=chi_square_sf(statistic, dof),
        bin_counts=[(float(e), int(o)) for e, o in zip(expected, observed)],
    )


def chi_square_two_sample(samples_a, samples_b, bins):
    """Binned chi-square test that two samples share one distribution."""
    ca = bin_counts(samples_a, bins)
    cb = bin_counts(samples_b, bins)
    table = np.stack([ca, cb]).astype(float)
    pooled = table.sum(axis=0)
    if np.any(pooled == 0):
        raise InvalidBinningError("a bin is empty in both samples")
    expected = np.outer(table.sum(axis=1), pooled) / table.sum()
    if np.any(expected < MIN_EXPECTED_COUNT):
        raise InvalidBinningError(f"a bin expects fewer than {MIN_EXPECTED_COUNT:g} samples")
    statistic = float(np.sum((table - expected) ** 2 / expected))
    dof = len(bins) - 1
    return HomogeneityReport(statistic, dof, chi_square_sf(statistic, dof), ca, cb)


def chi_square_sf(statistic, dof):
    """Upper-tail chi-square probability via the regularized incomplete gamma."""
    return float(gammaincc(0.5 * dof, 0.5 * statistic))


def triangle_bins(poly, levels=2):
    """Partition a polygon into triangles: ear clipping, then ``levels`` midpoint splits.

    A triangle at ``levels=2`` gives the 16 sub-triangle bins used by the tests.
    """
    poly = poly if isinstance(poly, PlanePolygon) else PlanePolygon(poly)
    return [PlanePolygon(t) for tri in poly.triangulate() for t in subdivide_triangle(tri, levels)]
