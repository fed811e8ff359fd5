"""Exact planar predicates and small vector helpers.

Predicates (orientation, intersection classification) are decided exactly: a
floating-point filter handles the overwhelming majority of calls and a
rational fallback (exact, since binary doubles are dyadic rationals) settles
the near-degenerate ones.  Constructions (intersection points, distances)
are best-effort floating point.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

Point = tuple[float, float]

# Relative error of the 3-product orientation determinant, following the
# standard "fast + static filter" scheme.
_ORIENT_FILTER = 3.3306690621773724e-16


class Orientation(enum.IntEnum):
    CCW = 1
    COLLINEAR = 0
    CW = -1


def orient_sign(ax, ay, bx, by, cx, cy) -> int:
    """Sign of the signed area of triangle abc: +1 ccw, -1 cw, 0 collinear."""
    detleft = (ax - cx) * (by - cy)
    detright = (ay - cy) * (bx - cx)
    det = detleft - detright
    if detleft > 0.0:
        if detright <= 0.0:
            return 1
        detsum = detleft + detright
    elif detleft < 0.0:
        if detright >= 0.0:
            return -1
        detsum = -detleft - detright
    else:
        if det > 0.0:
            return 1
        if det < 0.0:
            return -1
        return 0
    if abs(det) > _ORIENT_FILTER * detsum:
        return 1 if det > 0.0 else -1
    return _orient_exact(ax, ay, bx, by, cx, cy)


def _orient_exact(ax, ay, bx, by, cx, cy) -> int:
    det = (Fraction(ax) - Fraction(cx)) * (Fraction(by) - Fraction(cy)) - (
        Fraction(ay) - Fraction(cy)
    ) * (Fraction(bx) - Fraction(cx))
    if det > 0:
        return 1
    if det < 0:
        return -1
    return 0


def orientation(p: Point, q: Point, r: Point) -> Orientation:
    """Exact orientation of the ordered triple (p, q, r)."""
    return Orientation(orient_sign(p[0], p[1], q[0], q[1], r[0], r[1]))


def orient(p: Point, q: Point, r: Point) -> int:
    return orient_sign(p[0], p[1], q[0], q[1], r[0], r[1])


def dot_sign(ax, ay, bx, by) -> int:
    """Exact sign of the dot product a.b (floats)."""
    p1 = ax * bx
    p2 = ay * by
    s = p1 + p2
    if abs(s) > _ORIENT_FILTER * (abs(p1) + abs(p2)):
        return 1 if s > 0.0 else -1
    exact = Fraction(ax) * Fraction(bx) + Fraction(ay) * Fraction(by)
    if exact > 0:
        return 1
    if exact < 0:
        return -1
    return 0


def line_side(o: Point, d: Point, p: Point) -> int:
    """Exact side of p relative to the directed line through o with direction d.

    +1 left, -1 right, 0 on the line.  Phrased on original coordinates so no
    constructed point (o + d) is involved.
    """
    t1 = d[0] * (p[1] - o[1])
    t2 = d[1] * (p[0] - o[0])
    det = t1 - t2
    if abs(det) > 8.9e-16 * (abs(t1) + abs(t2)):
        return 1 if det > 0.0 else -1
    exact = Fraction(d[0]) * (Fraction(p[1]) - Fraction(o[1])) - Fraction(d[1]) * (
        Fraction(p[0]) - Fraction(o[0])
    )
    if exact > 0:
        return 1
    if exact < 0:
        return -1
    return 0


def dir_dot_sign(base: Point, p: Point, o: Point, t: Point) -> int:
    """Exact sign of (p - base) . (t - o): forwardness along the direction
    defined by the ordered point pair (o, t)."""
    t1 = (p[0] - base[0]) * (t[0] - o[0])
    t2 = (p[1] - base[1]) * (t[1] - o[1])
    s = t1 + t2
    if abs(s) > 8.9e-16 * (abs(t1) + abs(t2)):
        return 1 if s > 0.0 else -1
    exact = (Fraction(p[0]) - Fraction(base[0])) * (
        Fraction(t[0]) - Fraction(o[0])
    ) + (Fraction(p[1]) - Fraction(base[1])) * (Fraction(t[1]) - Fraction(o[1]))
    if exact > 0:
        return 1
    if exact < 0:
        return -1
    return 0


def dir_forward(o: Point, p: Point, d: Point) -> int:
    """Exact sign of (p - o) . d: is p ahead of o along direction d."""
    t1 = (p[0] - o[0]) * d[0]
    t2 = (p[1] - o[1]) * d[1]
    s = t1 + t2
    if abs(s) > 8.9e-16 * (abs(t1) + abs(t2)):
        return 1 if s > 0.0 else -1
    exact = (Fraction(p[0]) - Fraction(o[0])) * Fraction(d[0]) + (
        Fraction(p[1]) - Fraction(o[1])
    ) * Fraction(d[1])
    if exact > 0:
        return 1
    if exact < 0:
        return -1
    return 0


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def cross(a: Point, b: Point) -> float:
    return a[0] * b[1] - a[1] * b[0]


def dot(a: Point, b: Point) -> float:
    return a[0] * b[0] + a[1] * b[1]


def norm(a: Point) -> float:
    return math.hypot(a[0], a[1])


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """Exact: p lies on the closed segment ab (a == b means the point a)."""
    if orient(a, b, p) != 0:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def point_line_distance(p: Point, through: Point, direction: Point) -> float:
    """Distance from p to the line (through + t*direction); direction unit norm."""
    return abs(cross(sub(p, through), direction))


@dataclass(frozen=True)
class SegmentIntersection:
    """Classification of how two segments meet.

    kind is one of 'none', 'point', 'overlap'.  For 'point' the (possibly
    constructed) meeting point is in `point`; for 'overlap' the shared
    sub-segment is (point, point2).  Endpoint touches are 'point'.
    """

    kind: str
    point: Point | None = None
    point2: Point | None = None


def _collinear_overlap(a: Point, b: Point, c: Point, d: Point) -> SegmentIntersection:
    # All four points collinear; order along the dominant axis (exact compares).
    pts = sorted([("a", a), ("a", b), ("b", c), ("b", d)], key=lambda kv: kv[1])
    lo, hi = pts[1][1], pts[2][1]
    if lo == hi:
        return SegmentIntersection("point", lo)
    # The two middle points must belong to both segments for a true overlap.
    if max(min(a, b), min(c, d)) > min(max(a, b), max(c, d)):
        return SegmentIntersection("none")
    return SegmentIntersection("overlap", lo, hi)


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> SegmentIntersection:
    """Exact classification of segment ab versus segment cd."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)

    if o1 == 0 and o2 == 0:
        return _collinear_overlap(a, b, c, d)

    if o1 * o2 <= 0 and o3 * o4 <= 0:
        # Touching at an endpoint is reported with the exact endpoint.
        if o1 == 0 and on_segment(c, a, b):
            return SegmentIntersection("point", c)
        if o2 == 0 and on_segment(d, a, b):
            return SegmentIntersection("point", d)
        if o3 == 0 and on_segment(a, c, d):
            return SegmentIntersection("point", a)
        if o4 == 0 and on_segment(b, c, d):
            return SegmentIntersection("point", b)
        if o1 * o2 < 0 and o3 * o4 < 0:
            return SegmentIntersection("point", line_line_point(a, sub(b, a), c, sub(d, c)))
        return SegmentIntersection("none")
    return SegmentIntersection("none")


def segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Exact: the open interiors of ab and cd share a point."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    if o1 == 0 and o2 == 0:
        hit = _collinear_overlap(a, b, c, d)
        return hit.kind == "overlap"
    return o1 * o2 < 0 and o3 * o4 < 0


def line_line_point(p: Point, dp: Point, q: Point, dq: Point) -> Point:
    """Intersection of two non-parallel lines given as point + direction (float)."""
    denom = cross(dp, dq)
    t = cross(sub(q, p), dq) / denom
    return (p[0] + t * dp[0], p[1] + t * dp[1])


def ray_line_param(origin: Point, direction: Point, q: Point, m: Point) -> float:
    """Parameter t with origin + t*direction on the line (q + s*m); inf if parallel."""
    denom = cross(direction, m)
    if denom == 0.0:
        return math.inf
    return cross(sub(q, origin), m) / denom
