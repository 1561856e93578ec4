"""Convex polygons in the (R_y, R_z) rate plane.

Regions are stored as canonical vertex lists: counterclockwise, starting
at the lexicographically smallest vertex, with duplicate and collinear
vertices removed.  A single vertex is a point region, two vertices a
segment.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

COLLINEAR_TOL = 1e-12
DUP_TOL = 1e-12


class RatePair(NamedTuple):
    r_y: float
    r_z: float


class BoundTriple(NamedTuple):
    """Caps on R_y, R_z and R_y + R_z."""

    a: float
    b: float
    c: float


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> np.ndarray:
    """Monotone-chain hull, counterclockwise from the lexicographic minimum.

    Points closer than ``DUP_TOL`` are merged and vertices whose turn is
    within ``COLLINEAR_TOL`` of straight are dropped.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise ValueError("convex hull of an empty point set")
    pts = np.unique(pts, axis=0)
    pts = [tuple(p) for p in pts]
    dedup = [pts[0]]
    for p in pts[1:]:
        if abs(p[0] - dedup[-1][0]) > DUP_TOL or abs(p[1] - dedup[-1][1]) > DUP_TOL:
            dedup.append(p)
    pts = dedup
    if len(pts) <= 2:
        if len(pts) == 2 and np.hypot(pts[1][0] - pts[0][0], pts[1][1] - pts[0][1]) <= DUP_TOL:
            pts = pts[:1]
        return np.array(pts, dtype=float)

    def half(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= COLLINEAR_TOL:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    return np.array(hull, dtype=float)


def _clean(v: float) -> float:
    # keeps CSV output free of "-0.000000000"
    return 0.0 if abs(v) < 5e-10 else float(v)


@dataclass(frozen=True, eq=False)
class ConvexRegion2D:
    """Convex polygon with canonical vertex order.

    ``meta`` carries free-form annotations (for example the estimate
    marker on searched outer regions); it does not take part in equality.
    """

    vertices: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        v = convex_hull(self.vertices)
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @classmethod
    def from_points(cls, points, meta=None) -> "ConvexRegion2D":
        return cls(np.asarray(points, dtype=float), dict(meta or {}))

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, ConvexRegion2D):
            return NotImplemented
        return (self.vertices.shape == other.vertices.shape
                and bool(np.all(np.abs(self.vertices - other.vertices) <= 1e-9)))

    def __repr__(self):
        pts = ", ".join(f"({x:.6g}, {y:.6g})" for x, y in self.vertices)
        return f"ConvexRegion2D([{pts}])"

    @property
    def area(self) -> float:
        v = self.vertices
        if len(v) < 3:
            return 0.0
        x, y = v[:, 0], v[:, 1]
        return float(0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("r_y,r_z\n")
        for x, y in self.vertices:
            buf.write(f"{_clean(x):.9f},{_clean(y):.9f}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ConvexRegion2D":
        lines = [ln.strip() for ln in text.strip().splitlines()]
        if not lines or lines[0] != "r_y,r_z":
            raise ValueError("region CSV must start with the header 'r_y,r_z'")
        pts = [tuple(float(t) for t in ln.split(",")) for ln in lines[1:] if ln]
        return cls.from_points(pts)

    def max_r_z(self, r_y: float) -> float:
        """Largest R_z in the region at the given R_y (nan if the line misses it)."""
        v = self.vertices
        if len(v) == 1:
            return float(v[0, 1]) if abs(v[0, 0] - r_y) <= 1e-12 else float("nan")
        best = -np.inf
        m = len(v)
        for i in range(m if m > 2 else 1):
            p, q = v[i], v[(i + 1) % m]
            lo, hi = min(p[0], q[0]), max(p[0], q[0])
            if r_y < lo - 1e-12 or r_y > hi + 1e-12:
                continue
            if abs(q[0] - p[0]) <= 1e-15:
                best = max(best, p[1], q[1])
            else:
                t = (r_y - p[0]) / (q[0] - p[0])
                best = max(best, p[1] + t * (q[1] - p[1]))
        return float(best) if np.isfinite(best) else float("nan")


def polytope_from_triple(t: BoundTriple | Sequence[float]) -> ConvexRegion2D:
    """{0 <= R_y <= a, 0 <= R_z <= max(b, 0), R_y + R_z <= c} as a polygon."""
    a, b, c = (float(x) for x in t)
    if c <= 0 or a < 0:
        return ConvexRegion2D.from_points([(0.0, 0.0)])
    b = max(b, 0.0)
    rect = [(0.0, 0.0), (a, 0.0), (a, b), (0.0, b)]
    return ConvexRegion2D.from_points(clip_halfplane(rect, (1.0, 1.0), c))


def clip_halfplane(poly, normal, offset) -> list[tuple[float, float]]:
    """Clip a convex polygon (vertex list in order) to ``normal . p <= offset``."""
    nx, ny = normal
    out = []
    m = len(poly)
    for i in range(m):
        p, q = poly[i], poly[(i + 1) % m]
        fp = nx * p[0] + ny * p[1] - offset
        fq = nx * q[0] + ny * q[1] - offset
        if fp <= 0:
            out.append(tuple(p))
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def triple_vertices(a, b, c) -> np.ndarray:
    """Candidate vertices of many triple polytopes at once.

    Returns an array of shape ``(..., 5, 2)``; infeasible candidates are
    replaced by the origin, so the hull of all rows equals the union hull
    of the polytopes.
    """
    a, b, c = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a, b, c)))
    empty = (c <= 0) | (a < 0)
    a = np.where(empty, 0.0, a)
    bp = np.where(empty, 0.0, np.maximum(b, 0.0))
    c = np.where(empty, 0.0, c)
    zeros = np.zeros_like(a)
    ry_max = np.minimum(a, c)
    rz_max = np.minimum(bp, c)
    # sum line meets R_z = b+ and R_y = a, clipped into the box
    corner1 = np.stack([np.clip(c - bp, 0.0, a), np.minimum(bp, c)], axis=-1)
    corner2 = np.stack([np.minimum(a, c), np.clip(c - a, 0.0, bp)], axis=-1)
    return np.stack([
        np.stack([zeros, zeros], axis=-1),
        np.stack([ry_max, zeros], axis=-1),
        np.stack([zeros, rz_max], axis=-1),
        corner1,
        corner2,
    ], axis=-2)


def triple_support(a, b, c, w_y: float, w_z: float) -> np.ndarray:
    """Vectorized support value of triple polytopes in direction (w_y, w_z)."""
    v = triple_vertices(a, b, c)
    return (v[..., 0] * w_y + v[..., 1] * w_z).max(axis=-1)


def union_hull(parts: Iterable[ConvexRegion2D]) -> ConvexRegion2D:
    parts = list(parts)
    if not parts:
        raise ValueError("union_hull needs at least one region")
    return ConvexRegion2D.from_points(np.concatenate([p.vertices for p in parts]))


def hull_of_triples(triples) -> ConvexRegion2D:
    """Union hull of the polytopes of an ``(N, 3)`` array of triples."""
    t = np.asarray(triples, dtype=float).reshape(-1, 3)
    pts = triple_vertices(t[:, 0], t[:, 1], t[:, 2]).reshape(-1, 2)
    return ConvexRegion2D.from_points(pts)


def support_value(region: ConvexRegion2D, w_y: float, w_z: float) -> float:
    if w_y == 0 and w_z == 0:
        raise ValueError("support_value needs a nonzero weight vector")
    v = region.vertices
    return float(np.max(v[:, 0] * w_y + v[:, 1] * w_z))


def distance_to_region(region: ConvexRegion2D, p) -> float:
    """Euclidean distance from point ``p`` to the region (0 inside)."""
    p = np.asarray(p, dtype=float)
    v = region.vertices
    m = len(v)
    if m == 1:
        return float(np.hypot(*(p - v[0])))
    if m >= 3:
        edges = np.roll(v, -1, axis=0) - v
        rel = p - v
        cross = edges[:, 0] * rel[:, 1] - edges[:, 1] * rel[:, 0]
        if np.all(cross >= 0):
            return 0.0
    best = np.inf
    for i in range(m if m > 2 else 1):
        s, e = v[i], v[(i + 1) % m]
        d = e - s
        t = np.clip(np.dot(p - s, d) / np.dot(d, d), 0.0, 1.0)
        best = min(best, float(np.hypot(*(p - s - t * d))))
    return best


def contains(region: ConvexRegion2D, p, tol: float = 1e-10) -> bool:
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    return distance_to_region(region, p) <= tol


def hausdorff(r1: ConvexRegion2D, r2: ConvexRegion2D) -> float:
    """Hausdorff distance between two convex polygons.

    For convex sets the farthest point of one from the other is a vertex,
    so checking vertices is exact.
    """
    d12 = max(distance_to_region(r2, v) for v in r1.vertices)
    d21 = max(distance_to_region(r1, v) for v in r2.vertices)
    return max(d12, d21)


def region_contains(outer: ConvexRegion2D, inner: ConvexRegion2D, tol: float) -> bool:
    return all(contains(outer, v, tol) for v in inner.vertices)
