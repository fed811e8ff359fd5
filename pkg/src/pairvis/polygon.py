"""Validated simple polygon with counter-clockwise boundary."""

from __future__ import annotations

import math
from functools import cached_property

import numpy as np

from .errors import DuplicateVertices, NotSimple, TooFewVertices
from .predicates import Point, on_segment, orient, segments_intersect, sub


class SimplePolygon:
    """Simple polygon, vertices in counter-clockwise order, boundary included.

    Instances are immutable after construction; build them through
    :func:`validate_and_normalize`.
    """

    __slots__ = ("vertices", "n", "__dict__")

    def __init__(self, vertices: tuple[Point, ...]):
        self.vertices = vertices
        self.n = len(vertices)

    def vertex(self, i: int) -> Point:
        return self.vertices[i % self.n]

    def edge(self, i: int) -> tuple[Point, Point]:
        """Directed boundary edge i: vertex i -> vertex i+1."""
        return self.vertices[i % self.n], self.vertices[(i + 1) % self.n]

    @cached_property
    def as_array(self) -> np.ndarray:
        return np.asarray(self.vertices, dtype=float)

    @cached_property
    def area(self) -> float:
        v = self.as_array
        x, y = v[:, 0], v[:, 1]
        return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))

    @cached_property
    def diameter(self) -> float:
        v = self.as_array
        w = v.max(axis=0) - v.min(axis=0)
        return float(math.hypot(w[0], w[1]))

    @cached_property
    def reflex(self) -> tuple[bool, ...]:
        """reflex[i]: interior angle at vertex i exceeds pi."""
        vs = self.vertices
        n = self.n
        return tuple(
            orient(vs[i - 1], vs[i], vs[(i + 1) % n]) < 0 for i in range(n)
        )

    def is_reflex(self, i: int) -> bool:
        return self.reflex[i % self.n]

    def interior_cone_contains(self, i: int, d: Point, closed: bool = True) -> bool:
        """Direction d at vertex i points into the polygon (closed: boundary dirs count).

        The interior cone at v spans, counter-clockwise, from the outgoing
        edge direction to the incoming edge's reverse direction.  All tests
        are exact and phrased on original coordinates.
        """
        from .predicates import line_side

        v = self.vertex(i)
        nxt = self.vertex(i + 1)
        prv = self.vertex(i - 1)
        sa = -line_side(v, d, nxt)   # sign of cross(outgoing, d)
        sb = -line_side(v, d, prv)   # sign of cross(reverse-incoming, d)
        if not closed and (sa == 0 or sb == 0):
            return False
        if orient(v, nxt, prv) >= 0:
            # convex-or-straight wedge: need d left of a and right of b
            return sa >= 0 and sb <= 0
        # reflex wedge: excluded only if strictly right of a and left of b
        return not (sa < 0 and sb > 0)

    def interior_cone_contains_point(self, i: int, target: Point) -> bool:
        """The segment from vertex i toward target starts inside the closed
        polygon; exact, phrased entirely on original coordinates."""
        v = self.vertex(i)
        nxt = self.vertex(i + 1)
        prv = self.vertex(i - 1)
        sa = orient(v, nxt, target)
        sb = orient(v, prv, target)
        if orient(v, nxt, prv) >= 0:
            return sa >= 0 and sb <= 0
        return not (sa < 0 and sb > 0)

    def boundary_arc(self, start_edge: int, end_edge: int) -> list[int]:
        """Vertex indices strictly inside the ccw boundary arc from a point on
        edge start_edge to a point on edge end_edge."""
        out = []
        i = (start_edge + 1) % self.n
        stop = (end_edge + 1) % self.n
        while i != stop:
            out.append(i)
            i = (i + 1) % self.n
        return out

    def __repr__(self):
        return f"SimplePolygon(n={self.n})"


def _find_self_intersection(verts: list[Point]) -> tuple[int, int] | None:
    """Exact self-intersection test; returns a witness edge pair or None.

    A sweep over x-sorted edge boxes prunes candidate pairs; surviving pairs
    are decided with exact predicates.  Adjacent edges are allowed to share
    exactly their common endpoint.
    """
    n = len(verts)
    arr = np.asarray(verts, dtype=float)
    nxt = np.roll(arr, -1, axis=0)
    xmin = np.minimum(arr[:, 0], nxt[:, 0])
    xmax = np.maximum(arr[:, 0], nxt[:, 0])
    ymin = np.minimum(arr[:, 1], nxt[:, 1])
    ymax = np.maximum(arr[:, 1], nxt[:, 1])
    order = np.argsort(xmin, kind="stable")

    active: list[int] = []
    for idx in order:
        i = int(idx)
        keep = []
        for j in active:
            if xmax[j] < xmin[i]:
                continue
            keep.append(j)
            if ymin[i] > ymax[j] or ymin[j] > ymax[i]:
                continue
            lo, hi = (i, j) if i < j else (j, i)
            a, b = verts[lo], verts[(lo + 1) % n]
            c, d = verts[hi], verts[(hi + 1) % n]
            if (lo + 1) % n == hi:  # consecutive: may touch at b == c only
                if orient(a, b, d) == 0 and on_segment(d, a, b) and d != b:
                    return (lo, hi)
                if orient(c, d, a) == 0 and on_segment(a, c, d) and a != c:
                    return (lo, hi)
            elif lo == 0 and hi == n - 1:  # wrap-around consecutive pair
                if orient(c, d, b) == 0 and on_segment(b, c, d) and b != d:
                    return (hi, lo)
                if orient(a, b, c) == 0 and on_segment(c, a, b) and c != a:
                    return (hi, lo)
            elif segments_intersect(a, b, c, d).kind != "none":
                return (lo, hi)
        keep.append(i)
        active = keep
    return None


def signed_area(verts) -> float:
    total = 0.0
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i]
        x1, y1 = verts[(i + 1) % n]
        total += x0 * y1 - x1 * y0
    return 0.5 * total


def validate_and_normalize(raw) -> SimplePolygon:
    """Build a SimplePolygon from a raw vertex sequence.

    Clockwise input is reversed; consecutive duplicates are rejected; a
    self-intersecting boundary raises NotSimple with a witness edge pair.
    """
    verts = [(float(x), float(y)) for x, y in raw]
    if len(verts) < 3:
        raise TooFewVertices(f"need at least 3 vertices, got {len(verts)}")
    for x, y in verts:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise TooFewVertices("coordinates must be finite")
    n = len(verts)
    for i in range(n):
        if verts[i] == verts[(i + 1) % n]:
            raise DuplicateVertices(i)
    witness = _find_self_intersection(verts)
    if witness is not None:
        raise NotSimple(*witness)
    if signed_area(verts) < 0.0:
        verts.reverse()
    return SimplePolygon(tuple(verts))
