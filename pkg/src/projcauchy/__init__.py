"""Integration and exact simulation of bivariate projective-Cauchy distributions
over polygons, by way of solid angles on the unit hemisphere."""

from projcauchy.cauchy_distributions import (
    LSCParams,
    cauchy_elliptic_pdf,
    cauchy_elliptic_pdf_closed_form,
    cauchy_std_pdf,
    integrate_cauchy_elliptic,
    integrate_cauchy_std,
    lsc_backward,
    lsc_forward,
    lsc_jacobian,
    simulate_cauchy_elliptic,
    simulate_cauchy_full,
    simulate_cauchy_std,
)
from projcauchy.errors import (
    BudgetExceededError,
    DegenerateGeometryError,
    DomainError,
    ImpracticalBoundError,
    InvalidArgumentError,
    InvalidBinningError,
    InvalidBoundError,
    ProjCauchyError,
    UnsupportedGeometryError,
)
from projcauchy.polygons import PlanePolygon, regular_polygon, square
from projcauchy.projective_geometry import (
    hemisphere_to_plane,
    plane_to_hemisphere,
    projection_jacobian,
)
from projcauchy.spherical_polygon import (
    SphericalPolygon,
    interior_angles,
    sample_spherical_polygon,
    sample_spherical_triangle,
    solid_angle_girard,
    solid_angle_polygon,
    solid_angle_triangle_stable,
)
from projcauchy.student_extension import MCEstimate, integrate_student_mc, student_pdf

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "DegenerateGeometryError",
    "DomainError",
    "ImpracticalBoundError",
    "InvalidArgumentError",
    "InvalidBinningError",
    "InvalidBoundError",
    "LSCParams",
    "MCEstimate",
    "PlanePolygon",
    "ProjCauchyError",
    "SphericalPolygon",
    "UnsupportedGeometryError",
    "cauchy_elliptic_pdf",
    "cauchy_elliptic_pdf_closed_form",
    "cauchy_std_pdf",
    "hemisphere_to_plane",
    "integrate_cauchy_elliptic",
    "integrate_cauchy_std",
    "integrate_student_mc",
    "interior_angles",
    "lsc_backward",
    "lsc_forward",
    "lsc_jacobian",
    "plane_to_hemisphere",
    "projection_jacobian",
    "regular_polygon",
    "sample_spherical_polygon",
    "sample_spherical_triangle",
    "simulate_cauchy_elliptic",
    "simulate_cauchy_full",
    "simulate_cauchy_std",
    "solid_angle_girard",
    "solid_angle_polygon",
    "solid_angle_triangle_stable",
    "square",
    "student_pdf",
]
