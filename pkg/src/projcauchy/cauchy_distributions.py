"""Standard and location-scale-correlation (LSC) bivariate projective-Cauchy
distributions, with exact integration and simulation over polygons.

Integration over a polygon is its subtended solid angle divided by 2*pi.
Simulation draws a uniform direction inside that solid angle and projects it
back to the plane. The LSC family reduces to the standard case by pulling the
polygon back through the inverse LSC map, which is linear and so maps polygons
to polygons.
"""

from dataclasses import dataclass

import numpy as np

from projcauchy.errors import InvalidArgumentError
from projcauchy.polygons import PlanePolygon, square
from projcauchy.projective_geometry import as_plane_points, hemisphere_to_plane, projection_jacobian
from projcauchy.spherical_polygon import SphericalPolygon, sample_spherical_polygon, solid_angle_polygon

TWO_PI = 2.0 * np.pi
# stand-in for the whole plane when simulating without truncation
FULL_PLANE_HALF_WIDTH = 1e9


@dataclass(frozen=True)
class LSCParams:
    """Location ``(a1, a2)``, scale ``(b1, b2) > 0`` and correlation ``rho`` in (-1, 1)."""

    a1: float = 0.0
    a2: float = 0.0
    b1: float = 1.0
    b2: float = 1.0
    rho: float = 0.0

    def __post_init__(self):
        values = (self.a1, self.a2, self.b1, self.b2, self.rho)
        if not all(np.isfinite(v) for v in values):
            raise InvalidArgumentError(f"LSC parameters must be finite, got {values}")
        if not (self.b1 > 0 and self.b2 > 0):
            raise InvalidArgumentError(f"scales must be positive, got b1={self.b1}, b2={self.b2}")
        if not -1.0 < self.rho < 1.0:
            raise InvalidArgumentError(f"correlation must lie strictly inside (-1, 1), got {self.rho}")

    @classmethod
    def parse(cls, text):
        """Parse ``"a1,a2,b1,b2,rho"``."""
        try:
            values = [float(t) for t in text.split(",")]
        except ValueError:
            raise InvalidArgumentError(f"cannot parse LSC parameters from {text!r}") from None
        if len(values) != 5:
            raise InvalidArgumentError(f"expected 5 comma-separated LSC parameters, got {len(values)}")
        return cls(*values)

    def as_dict(self):
        return {"a1": self.a1, "a2": self.a2, "b1": self.b1, "b2": self.b2, "rho": self.rho}

    @property
    def is_identity(self):
        return self == LSCParams()


def _check_params(p):
    if not isinstance(p, LSCParams):
        raise InvalidArgumentError(f"expected LSCParams, got {type(p).__name__}")
    return p


def _as_polygon(poly):
    return poly if isinstance(poly, PlanePolygon) else PlanePolygon(poly)


def _scalar(value):
    return float(value) if np.ndim(value) == 0 else value


def cauchy_std_pdf(x):
    """Standard bivariate density ``(1 / 2pi) (x1^2 + x2^2 + 1)^(-3/2)``."""
    return _scalar(projection_jacobian(x) / TWO_PI)


def lsc_forward(x, p):
    """Map standard variates to LSC variates: ``(b1 x1 + a1, b2 [rho x1 + x2 sqrt(1 - rho^2)] + a2)``."""
    p = _check_params(p)
    x = as_plane_points(x)
    x1, x2 = x[..., 0], x[..., 1]
    y1 = p.b1 * x1 + p.a1
    y2 = p.b2 * (p.rho * x1 + x2 * np.sqrt(1.0 - p.rho * p.rho)) + p.a2
    return np.stack([y1, y2], axis=-1)


def lsc_backward(x, p):
    """Inverse of :func:`lsc_forward`."""
    p = _check_params(p)
    x = as_plane_points(x)
    d1 = x[..., 0] - p.a1
    d2 = x[..., 1] - p.a2
    y1 = d1 / p.b1
    y2 = (p.b1 * d2 - p.rho * p.b2 * d1) / (p.b1 * p.b2 * np.sqrt(1.0 - p.rho * p.rho))
    return np.stack([y1, y2], axis=-1)


def lsc_jacobian(p):
    """Constant area distortion of :func:`lsc_backward`: ``1 / (b1 b2 sqrt(1 - rho^2))``."""
    p = _check_params(p)
    return 1.0 / (p.b1 * p.b2 * np.sqrt(1.0 - p.rho * p.rho))


def cauchy_elliptic_pdf(x, p):
    """LSC density as the standard density at the pulled-back point times the constant Jacobian."""
    return _scalar(projection_jacobian(lsc_backward(x, p)) / TWO_PI * lsc_jacobian(p))


def cauchy_elliptic_pdf_closed_form(x, p):
    """Same density via the quadratic form ``z``.

    ``f = (1 + z / (1 - rho^2))^(-3/2) / (2 pi b1 b2 sqrt(1 - rho^2))`` with
    ``z = d1^2/b1^2 + d2^2/b2^2 - 2 rho d1 d2 / (b1 b2)``.
    """
    p = _check_params(p)
    x = as_plane_points(x)
    d1 = (x[..., 0] - p.a1) / p.b1
    d2 = (x[..., 1] - p.a2) / p.b2
    one_m_rho2 = 1.0 - p.rho * p.rho
    z = d1 * d1 + d2 * d2 - 2.0 * p.rho * d1 * d2
    value = (1.0 + z / one_m_rho2) ** -1.5 / (TWO_PI * p.b1 * p.b2 * np.sqrt(one_m_rho2))
    return _scalar(value)


def truncated_pdf(x, poly, p=None):
    """Density renormalized to ``poly`` (zero outside)."""
    poly = _as_polygon(poly)
    if p is None:
        f, mass = cauchy_std_pdf(x), integrate_cauchy_std(poly)
    else:
        f, mass = cauchy_elliptic_pdf(x, p), integrate_cauchy_elliptic(poly, p)
    return _scalar(np.where(poly.contains(x), f / mass, 0.0))


def integrate_cauchy_std(poly):
    """Probability mass of the standard distribution inside ``poly``: solid angle / 2pi."""
    poly = _as_polygon(poly)
    return solid_angle_polygon(SphericalPolygon.from_plane(poly)) / TWO_PI


def simulate_cauchy_std(poly, u):
    """Standard variate(s) truncated to a convex polygon, one per uniform pair.

    Raises
    ------
    UnsupportedGeometryError
        If ``poly`` is not convex.
    """
    poly = _as_polygon(poly)
    return hemisphere_to_plane(sample_spherical_polygon(SphericalPolygon.from_plane(poly), u))


def simulate_cauchy_full(u):
    """Untruncated standard variates, drawn over a square of half-width 1e9."""
    return simulate_cauchy_std(square(FULL_PLANE_HALF_WIDTH), u)


def integrate_cauchy_elliptic(poly, p):
    """Mass of the LSC distribution inside ``poly``."""
    poly = _as_polygon(poly)
    return integrate_cauchy_std(poly.map_vertices(lambda v: lsc_backward(v, p)))


def simulate_cauchy_elliptic(poly, p, u):
    """LSC variate(s) truncated to ``poly``; the pulled-back polygon must be convex."""
    poly = _as_polygon(poly)
    std_poly = poly.map_vertices(lambda v: lsc_backward(v, p))
    return lsc_forward(simulate_cauchy_std(std_poly, u), p)
