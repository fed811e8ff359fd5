"""Point location, ray shooting, visibility, and maximal chords.

All queries run as walks over the triangulation along an exact directed
line; every branch decision is an exact predicate, so grazing contacts
(rays through reflex vertices, segments along boundary edges) are handled
without epsilons.  Visibility is closed: touching the boundary counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalError, OutsidePolygon
from .polygon import SimplePolygon
from .predicates import (
    Point,
    dir_dot_sign,
    dir_forward,
    line_line_point,
    line_side,
    orient,
    sub,
)
from .triangulate import Triangulation


@dataclass(frozen=True)
class Location:
    """Where a point sits: 'interior', 'edge' (boundary edge), 'vertex', 'outside'."""

    kind: str
    tri: int = -1
    vertex: int = -1
    boundary_edge: int = -1

    @property
    def inside(self) -> bool:
        return self.kind != "outside"


@dataclass(frozen=True)
class RayHit:
    """First true exit of a ray from the polygon (grazes do not stop it)."""

    point: Point
    kind: str           # 'edge' or 'vertex'
    edge: int = -1      # polygon boundary edge index when kind == 'edge'
    vertex: int = -1    # polygon vertex index when kind == 'vertex'


@dataclass(frozen=True)
class Chord:
    """Maximal segment through `anchor` with direction `direction` inside P."""

    a: Point            # hit opposite to direction
    b: Point            # hit along direction
    anchor: Point
    direction: Point
    a_hit: RayHit = None
    b_hit: RayHit = None

    @property
    def length(self) -> float:
        import math

        return math.hypot(self.b[0] - self.a[0], self.b[1] - self.a[1])


def _corner_arrays(tri: Triangulation, poly: SimplePolygon):
    cache = getattr(tri, "_corners_cache", None)
    if cache is None:
        vs = poly.as_array
        idx = np.asarray(tri.triangles, dtype=np.int64)
        cache = vs[idx]  # (m, 3, 2)
        tri._corners_cache = cache
    return cache


def _classify_in_triangle(poly, tri, t, p) -> Location:
    a, b, c = tri.triangles[t]
    vs = poly.vertices
    sa = orient(vs[a], vs[b], p)
    sb = orient(vs[b], vs[c], p)
    sc = orient(vs[c], vs[a], p)
    if sa < 0 or sb < 0 or sc < 0:
        return Location("outside")
    zeros = [
        pair
        for s, pair in ((sa, (a, b)), (sb, (b, c)), (sc, (c, a)))
        if s == 0
    ]
    if not zeros:
        return Location("interior", tri=t)
    if len(zeros) >= 2:
        common = set(zeros[0]) & set(zeros[1])
        v = common.pop()
        return Location("vertex", tri=t, vertex=v)
    u, w = zeros[0]
    n = poly.n
    if (u + 1) % n == w:
        return Location("edge", tri=t, boundary_edge=u)
    if (w + 1) % n == u:
        return Location("edge", tri=t, boundary_edge=w)
    return Location("interior", tri=t)  # on an internal diagonal


def locate_point(
    poly: SimplePolygon, tri: Triangulation, p: Point, snap: bool = True
) -> Location:
    """Locate p in the triangulation; boundary incidences reported explicitly.

    With snap (default), a point failing the exact containment test by a
    relative margin below 1e-9 is attributed to its best triangle: boundary
    hit points are float constructions, so exact classification of them may
    miss by rounding dust.  Genuinely outside points still report outside.
    """
    corners = _corner_arrays(tri, poly)
    px, py = float(p[0]), float(p[1])
    ax, ay = corners[:, 0, 0], corners[:, 0, 1]
    bx, by = corners[:, 1, 0], corners[:, 1, 1]
    cx, cy = corners[:, 2, 0], corners[:, 2, 1]
    s1 = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
    s2 = (cx - bx) * (py - by) - (cy - by) * (px - bx)
    s3 = (ax - cx) * (py - cy) - (ay - cy) * (px - cx)
    scale = np.abs(s1) + np.abs(s2) + np.abs(s3) + 1e-300
    m = np.minimum(np.minimum(s1, s2), s3) / scale
    cand = np.nonzero(m > -1e-9)[0]
    for t in cand:
        loc = _classify_in_triangle(poly, tri, int(t), p)
        if loc.kind != "outside":
            return loc
    if snap and cand.size:
        t_best = int(cand[np.argmax(m[cand])])
        return Location("interior", tri=t_best)
    return Location("outside")


class _Walk:
    """State machine walking the triangulation along a directed exact line.

    The heading is either a float direction vector or, for exactness on
    vertex-defined rays, a through-point (optionally negated): predicates
    then run on original coordinates only.
    """

    __slots__ = ("poly", "tri", "origin", "d", "through", "neg", "state", "steps")

    def __init__(
        self,
        poly,
        tri,
        origin: Point,
        direction: Point | None,
        loc: Location,
        through: Point | None = None,
        away: bool = False,
    ):
        self.poly = poly
        self.tri = tri
        self.origin = origin
        self.through = through
        self.neg = -1 if away else 1
        if through is not None:
            direction = (
                self.neg * (through[0] - origin[0]),
                self.neg * (through[1] - origin[1]),
            )
        self.d = direction
        self.steps = 0
        self.state = self._initial_state(loc)

    def _side(self, p: Point) -> int:
        """Exact side of p relative to the directed heading line."""
        if self.through is not None:
            return self.neg * orient(self.origin, self.through, p)
        return line_side(self.origin, self.d, p)

    def _fwd(self, base: Point, p: Point) -> int:
        """Exact forwardness of p relative to base along the heading."""
        if self.through is not None:
            return self.neg * dir_dot_sign(base, p, self.origin, self.through)
        return dir_forward(base, p, self.d)

    # States:
    #   ('start', t)       at the origin, inside (or on the rim of) triangle t
    #   ('tri', t, a, b)   inside triangle t; a/b = left/right vertices of
    #                      the entry edge
    #   ('tri2', t, a, b)  inside triangle t with the exit edge already known
    #   ('vertex', v)      at vertex v
    #   ('exit_edge', i, t) ray leaves through boundary edge i of triangle t
    #   ('exit_vertex', v) ray leaves the polygon at vertex v
    def _initial_state(self, loc: Location):
        if loc.kind == "vertex":
            return ("vertex", loc.vertex)
        if loc.kind in ("interior", "edge"):
            return ("start", loc.tri)
        raise InternalError("walk started outside the polygon")

    def _enter_triangle_from_point(self, t: int) -> tuple:
        """Start state for an origin inside (or on the boundary of) triangle t.

        Decides the first exit locally; if the origin sits on an edge of t and
        the heading leaves t immediately, hops to the correct neighbor.
        """
        poly, tri, d, o = self.poly, self.tri, self.d, self.origin
        vs = poly.vertices
        corners = tri.triangles[t]
        # vertex on the forward ray with all others consistent is handled by
        # the generic scan below
        sides = [self._side(vs[v]) for v in corners]
        fwd = [self._fwd(o, vs[v]) for v in corners]
        # on-line forward corner: the segment from o to it stays in t
        for k in range(3):
            if sides[k] == 0 and fwd[k] > 0:
                return ("vertex", corners[k])
        # find ccw edge going from right side (-) to left side (+)
        for k in range(3):
            u, w = corners[(k + 1) % 3], corners[(k + 2) % 3]
            su, sw = sides[(k + 1) % 3], sides[(k + 2) % 3]
            if su < 0 and sw > 0:
                return self._cross_edge(t, u, w, sw_left=w, su_right=u)
        # remaining possibility: origin on an edge of t, heading along it
        for k in range(3):
            u, w = corners[(k + 1) % 3], corners[(k + 2) % 3]
            if (
                orient(vs[u], vs[w], o) == 0
                and self._side(vs[u]) == 0
                and self._side(vs[w]) == 0
            ):
                z = u if self._fwd(o, vs[u]) > 0 else w
                return ("vertex", z)
        raise InternalError("ray start not resolvable in its triangle")

    def _boundary_edge_exit(self, t, u, w):
        i = self._boundary_edge_index(u, w)
        return ("exit_edge", i, t)

    def _boundary_edge_index(self, u, w) -> int:
        n = self.poly.n
        if (u + 1) % n == w:
            return u
        if (w + 1) % n == u:
            return w
        raise InternalError("boundary edge without consecutive indices")

    def _cross_edge(self, t, u, w, sw_left, su_right):
        """Cross the edge {u, w} of triangle t (left endpoint sw_left)."""
        nb = self.tri.neighbor_across(t, u, w)
        if nb < 0:
            return self._boundary_edge_exit(t, u, w)
        return ("tri", nb, sw_left, su_right)

    def step(self):
        self.steps += 1
        if self.steps > 8 * max(len(self.tri.triangles), 4) + 64:
            raise InternalError("triangulation walk did not terminate")
        kind = self.state[0]
        if kind == "start":
            self.state = self._enter_triangle_from_point(self.state[1])
        elif kind == "tri":
            self.state = self._step_tri()
        elif kind == "vertex":
            self.state = self._step_vertex()
        else:
            raise InternalError("stepping a finished walk")

    def _step_tri(self):
        _, t, a, b = self.state
        poly, tri, o, d = self.poly, self.tri, self.origin, self.d
        vs = poly.vertices
        w = tri.third_corner(t, a, b)
        s = self._side(vs[w])
        if s == 0:
            return ("vertex", w)
        if s > 0:
            # w on the left: exit edge is (w-left, b-right)
            return self._cross_edge(t, w, b, sw_left=w, su_right=b)
        return self._cross_edge(t, a, w, sw_left=a, su_right=w)

    def _step_vertex(self):
        _, v = self.state
        poly, tri, d = self.poly, self.tri, self.d
        vs = poly.vertices
        pv = vs[v]
        # collinear edge travel: any incident triangulation edge along d
        best_z = -1
        for t in tri.vertex_tris[v]:
            for z in tri.triangles[t]:
                if z == v:
                    continue
                if self._side(vs[z]) == 0 and self._fwd(pv, vs[z]) > 0:
                    best_z = z
        if best_z >= 0:
            return ("vertex", best_z)
        # enter the incident triangle whose wedge strictly contains d
        for t in tri.vertex_tris[v]:
            ta, tb, tc = tri.triangles[t]
            if ta == v:
                a, b = tb, tc
            elif tb == v:
                a, b = tc, ta
            else:
                a, b = ta, tb
            # triangle (v, a, b) ccw: enter iff a strictly right, b strictly left
            if self._side(vs[a]) < 0 and self._side(vs[b]) > 0:
                nb = tri.neighbor_across(t, a, b)
                if nb < 0:
                    i = self._boundary_edge_index(a, b)
                    return ("exit_edge", i, t)
                # heading crosses the far edge (a right, b left) of t next; to
                # reuse the tri step we present t itself entered at the wedge
                return ("tri2", t, b, a)
            # wait-free grazing along a triangle edge was handled above
        return ("exit_vertex", v)

    def run(self, target: Point | None = None):
        """Advance until exit; with a target, stop early when it is reached.

        Returns ('reached', state) | ('exit_edge', i, t) | ('exit_vertex', v).
        """
        poly, tri = self.poly, self.tri
        vs = poly.vertices
        while True:
            st = self.state
            kind = st[0]
            if kind == "exit_edge" or kind == "exit_vertex":
                return st
            if target is not None and self._target_here(target):
                return ("reached", st)
            if kind == "tri2":
                # inside triangle t with known far edge: cross it directly
                _, t, left, right = st
                self.state = self._cross_edge(t, left, right, left, right)
                self.steps += 1
                continue
            self.step()

    def _target_here(self, q: Point) -> bool:
        st = self.state
        vs = self.poly.vertices
        if st[0] == "vertex":
            # the walked segment p..vertex lies in P; if the vertex is at or
            # beyond q along the heading, q was on that segment
            return vs[st[1]] == q or self._fwd(q, vs[st[1]]) >= 0
        if st[0] in ("tri", "tri2", "start"):
            t = st[1]
            a, b, c = self.tri.triangles[t]
            return (
                orient(vs[a], vs[b], q) >= 0
                and orient(vs[b], vs[c], q) >= 0
                and orient(vs[c], vs[a], q) >= 0
            )
        return False


def ray_shoot(
    poly: SimplePolygon,
    tri: Triangulation,
    origin: Point,
    direction: Point | None = None,
    loc: Location | None = None,
    through: Point | None = None,
    away: bool = False,
) -> RayHit:
    """First boundary point where the ray truly leaves P (grazes continue).

    The heading is either a float direction vector or an exact through-point
    (away=True shoots the opposite way).  A ray starting on the boundary and
    pointing outward exits at t = 0.
    """
    if through is None and (direction is None or direction == (0.0, 0.0)):
        raise ValueError("ray direction must be nonzero")
    if through == origin:
        raise ValueError("through point must differ from the origin")
    if loc is None:
        loc = locate_point(poly, tri, origin)
    if not loc.inside:
        raise OutsidePolygon(origin)
    walk = _Walk(poly, tri, origin, direction, loc, through=through, away=away)
    end = walk.run()
    if end[0] == "exit_vertex":
        v = end[1]
        return RayHit(poly.vertices[v], "vertex", vertex=v)
    _, i, _t = end
    a, b = poly.edge(i)
    if orient(a, b, origin) == 0:
        # outward start from the boundary: the exit is the origin itself
        from .predicates import on_segment

        if on_segment(origin, a, b):
            return RayHit(origin, "edge", edge=i)
    pt = line_line_point(origin, walk.d, a, sub(b, a))
    return RayHit(pt, "edge", edge=i)


def is_visible(
    poly: SimplePolygon,
    tri: Triangulation,
    p: Point,
    q: Point,
    loc_p: Location | None = None,
) -> bool:
    """True iff segment pq lies in P (closed: grazing the boundary counts)."""
    if loc_p is None:
        loc_p = locate_point(poly, tri, p)
    if not loc_p.inside:
        raise OutsidePolygon(p)
    if p == q:
        return True
    walk = _Walk(poly, tri, p, None, loc_p, through=q)
    end = walk.run(target=q)
    # every state is target-checked before an exit is taken, so any exit
    # means the ray left P strictly before reaching q
    return end[0] == "reached"


def maximal_chord(
    poly: SimplePolygon,
    tri: Triangulation,
    anchor: Point,
    direction: Point | None = None,
    loc: Location | None = None,
    through: Point | None = None,
) -> Chord:
    """Maximal segment in P through anchor along a direction or an exact
    through-point; side b lies along the heading, side a opposite."""
    if loc is None:
        loc = locate_point(poly, tri, anchor)
    if not loc.inside:
        raise OutsidePolygon(anchor)
    if through is not None:
        fwd = ray_shoot(poly, tri, anchor, loc=loc, through=through)
        back = ray_shoot(poly, tri, anchor, loc=loc, through=through, away=True)
        direction = sub(through, anchor)
    else:
        fwd = ray_shoot(poly, tri, anchor, direction, loc)
        back = ray_shoot(poly, tri, anchor, (-direction[0], -direction[1]), loc)
    return Chord(
        a=back.point, b=fwd.point, anchor=anchor, direction=direction,
        a_hit=back, b_hit=fwd,
    )
