"""Planar polygon geometry: validation, orientation, containment, triangulation.

Nothing here touches the sphere, so the quadrature and rejection oracles can
depend on this module without depending on the solid-angle code they check.
"""

from dataclasses import dataclass

import numpy as np

from projcauchy.errors import DegenerateGeometryError, InvalidArgumentError, UnsupportedGeometryError
from projcauchy.projective_geometry import as_plane_points

CONTAINMENT_TOL = 1e-12
# |signed area| below this fraction of the squared extent counts as collinear
COLLINEAR_REL_TOL = 1e-14


def cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def signed_area(vertices):
    v = np.asarray(vertices, dtype=float)
    w = np.roll(v, -1, axis=0)
    return 0.5 * float(np.sum(v[:, 0] * w[:, 1] - w[:, 0] * v[:, 1]))


def _segments_intersect(p, q, r, s):
    """Vectorized closed-segment intersection of pq (single) against rs (arrays)."""
    d = q - p
    o1 = cross2(d, r - p)
    o2 = cross2(d, s - p)
    e = s - r
    o3 = cross2(e, p - r)
    o4 = cross2(e, q - r)
    hit = (o1 * o2 <= 0) & (o3 * o4 <= 0)
    collinear = (o1 == 0) & (o2 == 0)
    if np.any(collinear):
        lo = np.minimum(p, q)
        hi = np.maximum(p, q)
        overlap = np.all((np.maximum(r, s) >= lo) & (np.minimum(r, s) <= hi), axis=-1)
        hit = np.where(collinear, overlap, hit)
    return hit


def check_simple(vertices):
    """Raise unless the closed vertex chain is a simple polygon."""
    v = np.asarray(vertices, dtype=float)
    n = len(v)
    nxt = np.roll(v, -1, axis=0)
    edges = nxt - v
    if np.any(np.all(edges == 0.0, axis=1)):
        k = int(np.flatnonzero(np.all(edges == 0.0, axis=1))[0])
        raise DegenerateGeometryError(f"repeated consecutive vertex at index {k}")
    # adjacent edges may only share their common vertex: reject 180-degree fold-backs
    e_next = np.roll(edges, -1, axis=0)
    folds = (cross2(edges, e_next) == 0.0) & (np.sum(edges * e_next, axis=1) < 0.0)
    if np.any(folds):
        k = (int(np.flatnonzero(folds)[0]) + 1) % n
        raise DegenerateGeometryError(f"polygon folds back on itself (collinear edges) at vertex {k}")
    for i in range(n - 2):
        # edges i+2 .. n-1, excluding the edge adjacent to edge i through vertex 0
        stop = n - 1 if i == 0 else n
        if stop <= i + 2:
            continue
        hit = _segments_intersect(v[i], nxt[i], v[i + 2:stop], nxt[i + 2:stop])
        if np.any(hit):
            j = i + 2 + int(np.flatnonzero(hit)[0])
            raise InvalidArgumentError(f"polygon is not simple: edge {i} crosses edge {j}")


@dataclass(frozen=True, eq=False)
class PlanePolygon:
    """A simple polygon in the plane, stored counter-clockwise.

    Input in clockwise order is reversed on construction. Collinear or
    self-intersecting vertex chains are rejected.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = as_plane_points(self.vertices)
        if v.ndim != 2 or len(v) < 3:
            raise InvalidArgumentError("a polygon needs at least 3 vertices")
        check_simple(v)
        area = signed_area(v)
        extent = float(np.max(np.ptp(v, axis=0)))
        if abs(area) <= COLLINEAR_REL_TOL * extent * extent:
            raise DegenerateGeometryError("polygon has (numerically) zero area; vertices are collinear")
        if area < 0:
            v = v[::-1]
        v = np.array(v, dtype=float)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def __len__(self):
        return len(self.vertices)

    def __repr__(self):
        return f"PlanePolygon({self.vertices.tolist()!r})"

    @property
    def area(self):
        return signed_area(self.vertices)

    def edge_turns(self):
        """Cross product of consecutive edges at each vertex (negative = reflex)."""
        v = self.vertices
        e_in = v - np.roll(v, 1, axis=0)
        e_out = np.roll(v, -1, axis=0) - v
        return cross2(e_in, e_out)

    def reflex_vertices(self):
        turns = self.edge_turns()
        v = self.vertices
        scale = np.linalg.norm(v - np.roll(v, 1, axis=0), axis=1) * np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
        return np.flatnonzero(turns < -COLLINEAR_REL_TOL * scale)

    def is_convex(self):
        return len(self.reflex_vertices()) == 0

    def require_convex(self):
        bad = self.reflex_vertices()
        if len(bad):
            k = int(bad[0])
            raise UnsupportedGeometryError(
                f"polygon is not convex: reflex vertex {k} at {self.vertices[k].tolist()}"
            )

    def map_vertices(self, fn):
        """Polygon with ``fn`` applied vertex-wise (``fn`` maps (N, 2) -> (N, 2))."""
        return PlanePolygon(fn(self.vertices))

    def bounding_box(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def contains(self, points, tol=CONTAINMENT_TOL):
        """Boolean mask of points inside or on the boundary (within ``tol``).

        Convex polygons use the signed-area half-plane test with distances
        allowed down to ``-tol * (1 + |p|)``; other polygons use even-odd
        crossing plus the same boundary tolerance.
        """
        p = np.asarray(points, dtype=float)
        single = p.ndim == 1
        p = np.atleast_2d(p)
        v = self.vertices
        edges = np.roll(v, -1, axis=0) - v
        lengths = np.linalg.norm(edges, axis=1)
        # signed distance of every point to every edge line, shape (n_points, n_edges)
        dist = cross2(edges[None, :, :], p[:, None, :] - v[None, :, :]) / lengths[None, :]
        slack = tol * (1.0 + np.linalg.norm(p, axis=1))[:, None]
        if self.is_convex():
            inside = np.all(dist >= -slack, axis=1)
        else:
            inside = _crossing_parity(p, v) | _near_boundary(p, v, edges, lengths, slack)
        return bool(inside[0]) if single else inside

    def fan_triangles(self):
        """Triangles (v0, vk, vk+1), k = 1..N-2, shape (N-2, 3, 2)."""
        v = self.vertices
        k = np.arange(1, len(v) - 1)
        return np.stack([np.broadcast_to(v[0], (len(k), 2)), v[k], v[k + 1]], axis=1)

    def triangulate(self):
        """Ear-clipping triangulation, shape (N-2, 3, 2), each triangle CCW."""
        return self.vertices[ear_clip(self.vertices)]


def _crossing_parity(p, v):
    a = v[None, :, :]
    b = np.roll(v, -1, axis=0)[None, :, :]
    px = p[:, None, 0]
    py = p[:, None, 1]
    straddle = (a[..., 1] > py) != (b[..., 1] > py)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_cross = a[..., 0] + (py - a[..., 1]) * (b[..., 0] - a[..., 0]) / (b[..., 1] - a[..., 1])
    hits = straddle & (px < x_cross)
    return (np.sum(hits, axis=1) % 2) == 1


def _near_boundary(p, v, edges, lengths, slack):
    rel = p[:, None, :] - v[None, :, :]
    t = np.clip(np.sum(rel * edges[None], axis=-1) / lengths[None] ** 2, 0.0, 1.0)
    closest = v[None] + t[..., None] * edges[None]
    d = np.linalg.norm(p[:, None, :] - closest, axis=-1)
    return np.any(d <= slack, axis=1)


def ear_clip(vertices):
    """Indices (N-2, 3) of an ear-clipping triangulation of a simple CCW polygon."""
    v = np.asarray(vertices, dtype=float)
    idx = list(range(len(v)))
    tris = []
    while len(idx) > 3:
        m = len(idx)
        for k in range(m):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % m]
            a, b, c = v[i0], v[i1], v[i2]
            if cross2(b - a, c - b) <= 0.0:
                continue
            others = [j for j in idx if j not in (i0, i1, i2)]
            if others and np.any(_in_triangle(v[others], a, b, c)):
                continue
            tris.append((i0, i1, i2))
            del idx[k]
            break
        else:
            raise DegenerateGeometryError("ear clipping found no ear; polygon is degenerate or not simple")
    tris.append(tuple(idx))
    return np.array(tris, dtype=int)


def _in_triangle(p, a, b, c):
    d1 = cross2(b - a, p - a)
    d2 = cross2(c - b, p - b)
    d3 = cross2(a - c, p - c)
    return (d1 >= 0) & (d2 >= 0) & (d3 >= 0)


def subdivide_triangle(tri, levels=1):
    """Split a triangle into 4**levels congruent sub-triangles by edge midpoints."""
    tris = np.asarray(tri, dtype=float)[None]
    for _ in range(levels):
        a, b, c = tris[:, 0], tris[:, 1], tris[:, 2]
        ab, bc, ca = 0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)
        tris = np.concatenate(
            [
                np.stack([a, ab, ca], axis=1),
                np.stack([ab, b, bc], axis=1),
                np.stack([ca, bc, c], axis=1),
                np.stack([ab, bc, ca], axis=1),
            ]
        )
    return tris


def regular_polygon(n, radius=1.0, center=(0.0, 0.0)):
    t = 2.0 * np.pi * np.arange(n) / n
    return PlanePolygon(np.column_stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)]))


def square(half_width):
    h = float(half_width)
    return PlanePolygon([[-h, -h], [h, -h], [h, h], [-h, h]])
