"""Spherical polygons on the open upper hemisphere: solid angles and uniform sampling.

Two solid-angle routes are kept side by side. ``solid_angle_girard`` sums the
interior angles (spherical excess). ``solid_angle_triangle_stable`` uses the
half-angle arctangent of the triple product and is the default for
triangles and fans. Both are written in terms of vertex differences, which are
exact for nearby vertices and keep slivers accurate.
"""

from dataclasses import dataclass

import numpy as np

from projcauchy.errors import DegenerateGeometryError, InvalidArgumentError
from projcauchy.polygons import PlanePolygon, check_simple, signed_area
from projcauchy.projective_geometry import as_unit_directions, plane_to_hemisphere

VERTEX_TOL = 1e-12
# triangles below this solid angle (sr) are treated as empty
MIN_SOLID_ANGLE = 1e-15


@dataclass(frozen=True, eq=False)
class SphericalPolygon:
    """Ordered unit-vector vertices on the open upper hemisphere, stored CCW.

    Because every vertex has ``w3 > 0``, great-circle edges project to straight
    segments on the plane ``x3 = 1``; simplicity and orientation are checked on
    that projection.
    """

    vertices: np.ndarray

    def __post_init__(self):
        w = as_unit_directions(self.vertices)
        if w.ndim != 2 or len(w) < 3:
            raise InvalidArgumentError("a spherical polygon needs at least 3 vertices")
        nxt = np.roll(w, -1, axis=0)
        if np.any(np.linalg.norm(nxt - w, axis=1) < VERTEX_TOL):
            raise DegenerateGeometryError("consecutive vertices coincide")
        if np.any(np.linalg.norm(nxt + w, axis=1) < VERTEX_TOL):
            raise DegenerateGeometryError("consecutive vertices are antipodal")
        flat = w[:, :2] / w[:, 2:3]
        check_simple(flat)
        if signed_area(flat) < 0:
            w = w[::-1]
        w = np.array(w, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "vertices", w)

    @classmethod
    def from_plane(cls, poly):
        return cls(plane_to_hemisphere(poly.vertices))

    def __len__(self):
        return len(self.vertices)

    def plane_polygon(self):
        w = self.vertices
        return PlanePolygon(w[:, :2] / w[:, 2:3])

    def fan(self):
        """Fan triangles anchored at the first vertex, shape (N-2, 3, 3)."""
        w = self.vertices
        k = np.arange(1, len(w) - 1)
        return np.stack([np.broadcast_to(w[0], (len(k), 3)), w[k], w[k + 1]], axis=1)


def _as_spherical(poly):
    if isinstance(poly, SphericalPolygon):
        return poly
    if isinstance(poly, PlanePolygon):
        return SphericalPolygon.from_plane(poly)
    return SphericalPolygon(poly)


def _unit(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _edge_normals(w):
    """Unit normals of the great-circle planes through consecutive vertices.

    ``w_i x (w_{i+1} - w_i)`` equals ``w_i x w_{i+1}`` but stays accurate when
    the two vertices are close.
    """
    d = np.roll(w, -1, axis=0) - w
    n = np.cross(w, d)
    norm = np.linalg.norm(n, axis=1)
    if np.any(norm < VERTEX_TOL * VERTEX_TOL):
        raise DegenerateGeometryError("degenerate edge: consecutive vertices coincide")
    return n / norm[:, None]


def _turning_angles(w):
    n = _edge_normals(w)
    n_prev = np.roll(n, 1, axis=0)
    return np.arctan2(np.sum(w * np.cross(n_prev, n), axis=1), np.sum(n_prev * n, axis=1))


def interior_angles(poly):
    """Interior angle at every vertex, each in (0, 2*pi).

    The angle at vertex n is the dihedral angle between the great-circle planes
    through (v[n-1], v[n]) and (v[n], v[n+1]); it is computed as pi minus the
    signed turning angle, so reflex vertices come out above pi.
    """
    w = _as_spherical(poly).vertices
    return np.pi - _turning_angles(w)


def solid_angle_girard(poly):
    """Spherical excess: sum of interior angles minus (N - 2) * pi."""
    w = _as_spherical(poly).vertices
    # sum(pi - turn) - (N - 2) pi, with the pi terms cancelled analytically
    return float(2.0 * np.pi - np.sum(_turning_angles(w)))


def _signed_triangle_solid_angle(a, b, c):
    """Signed solid angle of triangle(s) a, b, c, broadcasting over leading axes."""
    a, b, c = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a, b, c)))
    # det[a, b, c] is invariant under cyclic rotation; rotate so the shortest
    # edge is b -> c and use det[a, b - a, c - b], which keeps slivers accurate
    lab = np.linalg.norm(b - a, axis=-1)
    lbc = np.linalg.norm(c - b, axis=-1)
    lca = np.linalg.norm(a - c, axis=-1)
    shortest = np.argmin(np.stack([lbc, lca, lab], axis=-1), axis=-1)[..., None]
    p = np.where(shortest == 0, a, np.where(shortest == 1, b, c))
    q = np.where(shortest == 0, b, np.where(shortest == 1, c, a))
    r = np.where(shortest == 0, c, np.where(shortest == 1, a, b))
    triple = np.sum(p * np.cross(q - p, r - q), axis=-1)
    denom = 1.0 + np.sum(a * b, axis=-1) + np.sum(b * c, axis=-1) + np.sum(c * a, axis=-1)
    return 2.0 * np.arctan2(triple, denom)


def solid_angle_triangle_stable(a, b, c):
    """Solid angle of the spherical triangle (a, b, c), CCW seen from outside.

    ``2 * atan2(a . (b x c), 1 + a.b + b.c + c.a)``; zero for coincident or
    collinear vertices.
    """
    a, b, c = (as_unit_directions(x) for x in (a, b, c))
    omega = _signed_triangle_solid_angle(a, b, c)
    omega = np.where(np.abs(omega) < MIN_SOLID_ANGLE, 0.0, omega)
    return float(omega) if np.ndim(omega) == 0 else omega


def solid_angle_polygon(poly):
    """Solid angle of a spherical polygon (magnitude, steradians).

    Triangles go straight to the stable formula. Larger polygons sum the signed
    solid angles of the fan anchored at the first vertex, which is valid for
    non-convex simple polygons as well.
    """
    sp = _as_spherical(poly)
    w = sp.vertices
    if len(w) == 3:
        return solid_angle_triangle_stable(w[0], w[1], w[2])
    fan = sp.fan()
    total = float(np.sum(_signed_triangle_solid_angle(fan[:, 0], fan[:, 1], fan[:, 2])))
    return abs(total)


def _as_uniform_pairs(u):
    u = np.asarray(u, dtype=float)
    if u.shape[-1:] != (2,):
        raise InvalidArgumentError(f"uniform pairs need a trailing axis of length 2, got shape {u.shape}")
    if np.any((u < 0.0) | (u >= 1.0)) or not np.all(np.isfinite(u)):
        raise InvalidArgumentError("uniform pair components must lie in [0, 1)")
    return u


def sampling_labels(a, b, c):
    """Cyclic relabelling used by the triangle sampler: ``b`` opposite the longest edge.

    The sampler sweeps sub-triangles (a, b, c_hat) with c_hat moving along
    edge (a, c). If (a, b) were close to a half great circle every such
    sub-triangle would be nearly a lune of one fixed area, and an interior
    angle near pi at ``a`` makes the first stage divide by ~0. Placing the
    longest edge at (c, a) avoids both, since the largest angle sits opposite
    the longest edge. Orientation is preserved.
    """
    lengths = [np.linalg.norm(a - c), np.linalg.norm(b - a), np.linalg.norm(c - b)]
    k = int(np.argmax(lengths))
    return [(a, b, c), (b, c, a), (c, a, b)][k]


def _sample_triangle(a, b, c, omega, u1, u2):
    """Stratified area-preserving map from the unit square onto triangle (a, b, c).

    Arvo's construction: u1 picks the sub-triangle (a, b, c_hat) of area
    u1 * omega, u2 then picks a point on the arc from b to c_hat. Vertices are
    first relabelled by :func:`sampling_labels`.
    """
    a, b, c = sampling_labels(a, b, c)
    n_ab = _unit(np.cross(a, b - a))
    n_ca = _unit(np.cross(c, a - c))
    # interior angle at a between the planes (c, a) and (a, b)
    turn = np.arctan2(np.dot(a, np.cross(n_ca, n_ab)), np.dot(n_ca, n_ab))
    alpha = np.pi - turn
    cos_alpha, sin_alpha = np.cos(alpha), np.sin(alpha)

    area_hat = u1 * omega
    s = np.sin(area_hat - alpha)
    t = np.cos(area_hat - alpha)
    uu = t - cos_alpha
    vv = s + sin_alpha * np.dot(a, b)
    q = ((vv * t - uu * s) * cos_alpha - vv) / ((vv * s + uu * t) * sin_alpha)
    q = np.clip(q, -1.0, 1.0)

    d = c - a
    perp_c = _unit(d - np.dot(d, a) * a)
    c_hat = q[:, None] * a + np.sqrt((1.0 - q) * (1.0 + q))[:, None] * perp_c[None, :]

    e = c_hat - b
    one_minus_cos = 0.5 * np.sum(e * e, axis=1)
    one_minus_z = u2 * one_minus_cos
    z = 1.0 - one_minus_z
    perp = e - np.sum(e * b, axis=1)[:, None] * b
    norm = np.linalg.norm(perp, axis=1)
    safe = np.where(norm > 0.0, norm, 1.0)
    perp = perp / safe[:, None]
    root = np.sqrt(np.clip(one_minus_z * (1.0 + z), 0.0, None))
    p = z[:, None] * b + root[:, None] * perp
    return _unit(p)


def sample_spherical_triangle(a, b, c, u):
    """Uniform (density 1/omega per steradian) sample on the spherical triangle (a, b, c).

    Parameters
    ----------
    a, b, c : array_like, shape (3,)
        CCW unit vertices on the open upper hemisphere.
    u : array_like, shape (2,) or (n, 2)
        Uniform pairs in [0, 1)^2. The map is a bijection from the open unit
        square onto the triangle, so stratified inputs stay stratified.

    Returns
    -------
    numpy.ndarray
        Directions of shape (3,) or (n, 3). ``u = (0, 0)`` maps to the vertex
        opposite the longest edge (see :func:`sampling_labels`).
    """
    a, b, c = (as_unit_directions(x) for x in (a, b, c))
    u = _as_uniform_pairs(u)
    omega = float(_signed_triangle_solid_angle(a, b, c))
    if omega < MIN_SOLID_ANGLE:
        raise DegenerateGeometryError(
            f"triangle solid angle {omega:.3e} sr is too small (or negative: clockwise) to sample"
        )
    uu = np.atleast_2d(u)
    out = _sample_triangle(a, b, c, omega, uu[:, 0], uu[:, 1])
    return out[0] if u.ndim == 1 else out


def fan_strata(poly):
    """Fan triangles and their cumulative solid-angle fractions."""
    sp = _as_spherical(poly)
    fan = sp.fan()
    omegas = _signed_triangle_solid_angle(fan[:, 0], fan[:, 1], fan[:, 2])
    omegas = np.where(omegas < MIN_SOLID_ANGLE, 0.0, omegas)
    total = float(np.sum(omegas))
    if total < MIN_SOLID_ANGLE:
        raise DegenerateGeometryError("polygon has zero solid angle")
    cdf = np.cumsum(omegas) / total
    cdf[-1] = 1.0
    return fan, omegas, cdf


def sample_spherical_polygon(poly, u):
    """Uniform sample on a convex spherical polygon.

    u1 selects a fan triangle with probability proportional to its solid angle
    (half-open intervals ``[c_{k-1}, c_k)``), is rescaled within that stratum,
    and the pair is handed to the triangle sampler.

    Raises
    ------
    UnsupportedGeometryError
        For non-convex polygons.
    """
    sp = _as_spherical(poly)
    sp.plane_polygon().require_convex()
    u = _as_uniform_pairs(u)
    uu = np.atleast_2d(u)
    fan, omegas, cdf = fan_strata(sp)
    k = np.minimum(np.searchsorted(cdf, uu[:, 0], side="right"), len(cdf) - 1)
    lo = np.concatenate([[0.0], cdf[:-1]])[k]
    width = cdf[k] - lo
    u1 = np.clip((uu[:, 0] - lo) / width, 0.0, np.nextafter(1.0, 0.0))
    out = np.empty((len(uu), 3))
    for j in np.unique(k):
        sel = k == j
        out[sel] = _sample_triangle(fan[j, 0], fan[j, 1], fan[j, 2], omegas[j], u1[sel], uu[sel, 1])
    return out[0] if u.ndim == 1 else out
