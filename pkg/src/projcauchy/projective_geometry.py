"""Projection pair between the plane x3 = 1 and the open upper unit hemisphere.

Plane points are arrays of shape ``(..., 2)`` holding ``(x1, x2)``; the third
homogeneous coordinate is implicitly 1. Directions are arrays of shape
``(..., 3)`` with unit norm and strictly positive third component.
"""

import numpy as np

from projcauchy.errors import DomainError, InvalidArgumentError

UNIT_NORM_TOL = 1e-12
RENORMALIZE_TOL = 1e-9
# squaring beyond this overflows float64
MAX_COORDINATE = 1e150


def as_plane_points(x):
    """Validate plane coordinates and return them as a float array of shape (..., 2)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (2,):
        raise InvalidArgumentError(f"plane points need a trailing axis of length 2, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidArgumentError("plane point coordinates must be finite")
    if np.any(np.abs(x) > MAX_COORDINATE):
        raise InvalidArgumentError(f"plane point coordinates must not exceed {MAX_COORDINATE:g} in magnitude")
    return x


def as_unit_directions(w):
    """Validate directions on the open upper hemisphere.

    Vectors whose norm is within 1e-9 of one are renormalized; anything further
    off is rejected, as is any vector with a non-positive third component.
    """
    w = np.asarray(w, dtype=float)
    if w.shape[-1:] != (3,):
        raise InvalidArgumentError(f"directions need a trailing axis of length 3, got shape {w.shape}")
    if not np.all(np.isfinite(w)):
        raise InvalidArgumentError("direction components must be finite")
    norm = np.linalg.norm(w, axis=-1, keepdims=True)
    if np.any(np.abs(norm - 1.0) > RENORMALIZE_TOL):
        raise InvalidArgumentError("direction is not of unit norm")
    if np.any(w[..., 2] <= 0.0):
        raise DomainError("direction is not on the open upper hemisphere (w3 <= 0)")
    if np.any(np.abs(norm - 1.0) > UNIT_NORM_TOL):
        w = w / norm
    return w


def plane_to_hemisphere(x):
    """Map plane points to unit directions: ``(x1, x2, 1) / ||(x1, x2, 1)||``."""
    x = as_plane_points(x)
    h = np.concatenate([x, np.ones(x.shape[:-1] + (1,))], axis=-1)
    return h / np.linalg.norm(h, axis=-1, keepdims=True)


def hemisphere_to_plane(w):
    """Map directions on the open upper hemisphere to the plane: ``(w1/w3, w2/w3)``.

    Raises
    ------
    DomainError
        If any direction has ``w3 <= 0``; such points project to infinity or
        below the plane.
    """
    w = as_unit_directions(w)
    return w[..., :2] / w[..., 2:3]


def projection_jacobian(x):
    """Solid angle per unit plane area at ``x``: ``(x1^2 + x2^2 + 1)^(-3/2)``."""
    x = as_plane_points(x)
    r2 = np.sum(x * x, axis=-1)
    return (r2 + 1.0) ** -1.5
