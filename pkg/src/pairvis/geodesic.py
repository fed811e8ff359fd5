"""Geodesics inside a simple polygon: paths, trees, maps, segment distances.

Point-to-point paths run the funnel algorithm over the triangulation sleeve.
The shortest path tree is built by recursive funnel splitting over the dual
tree; the shortest path map extends tree edges to the boundary, yielding
triangular cells with a common geodesic predecessor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InternalError, OutsidePolygon
from .polygon import SimplePolygon
from .predicates import (
    Point,
    dist,
    on_segment,
    orient,
    ray_line_param,
    sub,
)
from .topology import Location, locate_point
from .triangulate import Triangulation


@dataclass(frozen=True)
class GeodesicPath:
    """Taut polyline from source to target; interior vertices are reflex."""

    points: tuple[Point, ...]
    length: float

    @staticmethod
    def from_points(points) -> "GeodesicPath":
        pts = tuple(points)
        total = 0.0
        for a, b in zip(pts, pts[1:]):
            total += dist(a, b)
        return GeodesicPath(pts, total)

    @property
    def source(self) -> Point:
        return self.points[0]

    @property
    def target(self) -> Point:
        return self.points[-1]


def _portal(tri: Triangulation, t_from: int, t_to: int) -> tuple[int, int]:
    """Shared edge of two adjacent triangles as (left, right) vertex indices,
    oriented for travel out of t_from into t_to."""
    tri_f = tri.triangles[t_from]
    for k in range(3):
        if tri.neighbors[t_from][k] == t_to:
            return tri_f[(k + 2) % 3], tri_f[(k + 1) % 3]
    raise InternalError("triangles are not adjacent")


def _funnel_rescan(start: Point, end: Point, portals: list[tuple[Point, Point]]):
    """Classic funnel with rescan after apex advance; exact orientation tests.

    Collinear configurations tighten (grazing contacts stay on the taut
    path boundary); ties prefer the counter-clockwise (left) side.
    """
    ports = portals + [(end, end)]
    path = [start]
    apex = pleft = pright = start
    apex_i = left_i = right_i = -1
    i = 0
    guard = 0
    while i < len(ports):
        guard += 1
        if guard > 8 * (len(ports) + 2) ** 2 + 64:
            raise InternalError("funnel did not converge")
        left, right = ports[i]
        if right != pright:
            if apex == pright or orient(apex, pright, right) >= 0:
                if apex == pright or apex == pleft or orient(apex, pleft, right) < 0:
                    pright = right
                    right_i = i
                else:
                    # right sweep crossed the left arm: advance apex
                    if path[-1] != pleft:
                        path.append(pleft)
                    apex = pleft
                    apex_i = left_i
                    pleft = pright = apex
                    left_i = right_i = apex_i
                    i = apex_i + 1
                    continue
        if left != pleft:
            if apex == pleft or orient(apex, pleft, left) <= 0:
                if apex == pleft or apex == pright or orient(apex, pright, left) > 0:
                    pleft = left
                    left_i = i
                else:
                    if path[-1] != pright:
                        path.append(pright)
                    apex = pright
                    apex_i = right_i
                    pleft = pright = apex
                    left_i = right_i = apex_i
                    i = apex_i + 1
                    continue
        i += 1
    if path[-1] != end:
        path.append(end)
    return path


def shortest_path(
    poly: SimplePolygon,
    tri: Triangulation,
    p: Point,
    q: Point,
    loc_p: Location | None = None,
    loc_q: Location | None = None,
) -> GeodesicPath:
    """Globally shortest polyline within P from p to q."""
    p = (float(p[0]), float(p[1]))
    q = (float(q[0]), float(q[1]))
    if loc_p is None:
        loc_p = locate_point(poly, tri, p)
    if not loc_p.inside:
        raise OutsidePolygon(p)
    if p == q:
        return GeodesicPath((p,), 0.0)
    if loc_q is None:
        loc_q = locate_point(poly, tri, q)
    if not loc_q.inside:
        raise OutsidePolygon(q)
    sleeve = tri.dual_path(loc_p.tri, loc_q.tri)
    vs = poly.vertices
    portals = []
    for a, b in zip(sleeve, sleeve[1:]):
        l_idx, r_idx = _portal(tri, a, b)
        portals.append((vs[l_idx], vs[r_idx]))
    raw = _funnel_rescan(p, q, portals)
    pts = [raw[0]]
    for pt in raw[1:]:
        if pt != pts[-1]:
            pts.append(pt)
    return GeodesicPath.from_points(pts)


# ---------------------------------------------------------------------------
# shortest path tree / map by funnel splitting

@dataclass(frozen=True)
class _Entry:
    """Funnel chain entry: a reached vertex with its geodesic bookkeeping."""

    point: Point
    vertex: int          # polygon vertex index; -1 for the source point
    dist: float
    parent: Point | None  # predecessor point on the geodesic (None at source)


@dataclass
class ShortestPathTree:
    """Geodesic predecessor and distance for every polygon vertex."""

    root: Point
    parent: list[int]        # parent vertex index, -1 when the root itself
    distance: list[float]
    parent_point: list[Point]

    _children: dict[int, list[int]] | None = field(default=None, repr=False)

    def children_of(self, v: int) -> list[int]:
        if self._children is None:
            ch: dict[int, list[int]] = {}
            for x, pv in enumerate(self.parent):
                ch.setdefault(pv, []).append(x)
            self._children = ch
        return self._children.get(v, [])

    def path_to(self, v: int) -> list[int]:
        """Vertex-index chain from v back to the root (root excluded)."""
        chain = [v]
        while self.parent[chain[-1]] >= 0:
            chain.append(self.parent[chain[-1]])
        return chain


@dataclass(frozen=True)
class SpmCell:
    """Triangular cell of the shortest path map with a common predecessor."""

    anchor: Point
    anchor_vertex: int       # -1 when the root is the predecessor
    prefix: float            # geodesic distance from the root to the anchor
    corners: tuple[Point, Point, Point]
    boundary_edge: int


@dataclass
class ShortestPathMap:
    root: Point
    cells: list[SpmCell]
    extensions: list[tuple[int, Point, Point, int]]  # (vertex, from, hit, edge)

    def locate_cell(self, p: Point) -> SpmCell:
        for cell in self.cells:
            a, b, c = cell.corners
            if orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0:
                return cell
        raise OutsidePolygon(p)

    def predecessor(self, p: Point) -> Point:
        return self.locate_cell(p).anchor


def _tangent_index(fun: list[_Entry], apex: int, w: Point) -> int:
    """Index of the funnel entry where the taut path to w attaches.

    Left arm entries (indices < apex) wrap counter-clockwise, right arm
    clockwise; the apex uses its two arm edges as the wedge.  Scanned from
    the left end so equal-length ties prefer the counter-clockwise side.
    """
    m = len(fun) - 1
    for j, e in enumerate(fun):
        pj = e.point
        if j < apex:  # left arm
            if e.parent is not None and orient(e.parent, pj, w) < 0:
                continue
            if j > 0 and orient(pj, fun[j - 1].point, w) > 0:
                continue
            return j
        if j > apex:  # right arm
            if e.parent is not None and orient(e.parent, pj, w) > 0:
                continue
            if j < m and orient(pj, fun[j + 1].point, w) < 0:
                continue
            return j
        # apex: wedge between the first edges of both arms
        if j > 0 and orient(pj, fun[j - 1].point, w) > 0:
            continue
        if j < m and orient(pj, fun[j + 1].point, w) < 0:
            continue
        return j
    raise InternalError("no taut attachment found during funnel split")


def build_spt(
    poly: SimplePolygon,
    tri: Triangulation,
    root: Point,
    _collect_funnels: bool = False,
):
    """Shortest path tree from root to every polygon vertex.

    Funnel-split DFS over the dual tree; each vertex is assigned exactly
    once, when its triangle fan is first entered.
    """
    root = (float(root[0]), float(root[1]))
    loc = locate_point(poly, tri, root)
    if not loc.inside:
        raise OutsidePolygon(root)
    n = poly.n
    vs = poly.vertices
    parent = [-3] * n
    distance = [math.inf] * n
    parent_point: list[Point | None] = [None] * n
    boundary_funnels = [] if _collect_funnels else None

    def assign(v: int, par_entry: _Entry):
        if parent[v] != -3:
            raise InternalError("vertex assigned twice in spt build")
        parent[v] = par_entry.vertex
        parent_point[v] = par_entry.point
        distance[v] = par_entry.dist + dist(vs[v], par_entry.point)

    t0 = loc.tri
    a0, b0, c0 = tri.triangles[t0]
    root_entry = _Entry(root, -1, 0.0, None)
    start_vertex = loc.vertex if loc.kind == "vertex" else -1
    for v in (a0, b0, c0):
        if v == start_vertex:
            parent[v] = -1
            parent_point[v] = root
            distance[v] = 0.0
        else:
            assign(v, root_entry)

    def entry_for(v: int) -> _Entry:
        return _Entry(vs[v], v, distance[v], parent_point[v])

    stack = []
    for k in range(3):
        t_next = tri.neighbors[t0][k]
        corners = tri.triangles[t0]
        u, w = corners[(k + 1) % 3], corners[(k + 2) % 3]
        if t_next < 0:
            if _collect_funnels:
                l_idx, r_idx = w, u  # boundary edge as seen from inside t0
                fun = [entry_for(l_idx), root_entry, entry_for(r_idx)]
                boundary_funnels.append((t0, l_idx, r_idx, fun, 1))
            continue
        l_idx, r_idx = _portal(tri, t0, t_next)
        fun = [entry_for(l_idx), root_entry, entry_for(r_idx)]
        stack.append((t0, t_next, l_idx, r_idx, fun, 1))

    while stack:
        t_prev, t_cur, l_idx, r_idx, fun, apex = stack.pop()
        w_idx = tri.third_corner(t_cur, l_idx, r_idx)
        wp = vs[w_idx]
        j = _tangent_index(fun, apex, wp)
        if parent[w_idx] == -3:
            assign(w_idx, fun[j])
        w_entry = entry_for(w_idx)
        # child funnels: left portion + w, and w + right portion
        fun_left = fun[: j + 1] + [w_entry]
        apex_left = min(apex, j)
        fun_right = [w_entry] + fun[j:]
        apex_right = max(apex, j) - j + 1
        for (ca, cb, cfun, capex) in (
            (l_idx, w_idx, fun_left, apex_left),
            (w_idx, r_idx, fun_right, apex_right),
        ):
            t_next = tri.neighbor_across(t_cur, ca, cb)
            if t_next == t_prev:
                continue
            if t_next < 0:
                if _collect_funnels:
                    pl, pr = _boundary_orientation(poly, ca, cb)
                    if pl == ca:
                        boundary_funnels.append((t_cur, ca, cb, cfun, capex))
                    else:
                        flipped = list(reversed(cfun))
                        boundary_funnels.append(
                            (t_cur, cb, ca, flipped, len(cfun) - 1 - capex)
                        )
                continue
            pl, pr = _portal(tri, t_cur, t_next)
            if pl == ca:
                stack.append((t_cur, t_next, ca, cb, cfun, capex))
            else:
                flipped = list(reversed(cfun))
                stack.append(
                    (t_cur, t_next, cb, ca, flipped, len(cfun) - 1 - capex)
                )

    for v in range(n):
        if parent[v] == -3:
            raise InternalError("spt build left a vertex unassigned")
    spt = ShortestPathTree(root, parent, distance, parent_point)
    if _collect_funnels:
        return spt, boundary_funnels
    return spt


def _boundary_orientation(poly: SimplePolygon, a: int, b: int) -> tuple[int, int]:
    """Order a boundary-edge vertex pair along the polygon direction."""
    n = poly.n
    if (a + 1) % n == b:
        return a, b
    if (b + 1) % n == a:
        return b, a
    raise InternalError("not a boundary edge")


def build_spm(poly: SimplePolygon, tri: Triangulation, root: Point) -> ShortestPathMap:
    """Shortest path map of root: predecessor-labelled triangular cells.

    For each boundary edge, the funnel reaching it is cut by the extensions
    of its chain edges (the map's extension edges); consecutive hits bound
    one cell per interior chain vertex.
    """
    spt, funnels = build_spt(poly, tri, root, _collect_funnels=True)
    vs = poly.vertices
    cells: list[SpmCell] = []
    extensions: list[tuple[int, Point, Point, int]] = []
    for (_t, a_idx, b_idx, fun, apex) in funnels:
        pa, pb = vs[a_idx], vs[b_idx]
        edge_index = a_idx
        owners, hits, windows = _funnel_cells_on_segment(fun, apex, pa, pb)
        seg_dir = sub(pb, pa)
        for k, j in enumerate(owners):
            t0, t1 = hits[k], hits[k + 1]
            if t1 <= t0:
                continue
            anchor = fun[j]
            h0 = (pa[0] + t0 * seg_dir[0], pa[1] + t0 * seg_dir[1])
            h1 = (pa[0] + t1 * seg_dir[0], pa[1] + t1 * seg_dir[1])
            corners = (anchor.point, h0, h1)
            if orient(*corners) < 0:
                corners = (anchor.point, h1, h0)
            cells.append(
                SpmCell(anchor.point, anchor.vertex, anchor.dist, corners, edge_index)
            )
        for (wj, tpar) in windows:
            e = fun[wj]
            if e.vertex < 0 or e.parent is None or e.parent == e.point:
                continue
            hp = (pa[0] + tpar * seg_dir[0], pa[1] + tpar * seg_dir[1])
            extensions.append((e.vertex, e.parent, hp, edge_index))
    return ShortestPathMap(root, cells, extensions)


def _funnel_cells_on_segment(fun, apex, pa, pb):
    """Cut the funnel's base segment at chain-edge extensions.

    Returns (owners, hits, windows): owners[k] is the funnel-entry index
    whose cell is the k-th piece, hits are the piece boundaries as monotone
    parameters in [0, 1] along pa->pb, and windows pairs each interior
    boundary with the funnel entry whose chain-edge extension produced it.
    """
    m = len(fun) - 1
    seg_dir = sub(pb, pa)
    seg_len2 = seg_dir[0] ** 2 + seg_dir[1] ** 2
    start = 0 if apex == 0 else 1
    end = m if apex == m else m - 1
    owners = list(range(start, end + 1))
    hits = [0.0]
    windows: list[tuple[int, float]] = []
    for j in owners[:-1]:
        wj = j if j < apex else j + 1  # window separating cell j from cell j+1
        e = fun[wj]
        tpar = 1.0
        if e.parent is not None and e.parent != e.point:
            d = sub(e.point, e.parent)
            t = ray_line_param(e.point, d, pa, seg_dir)
            hx = None
            if math.isfinite(t):
                if t >= 0.0:
                    hx = (e.point[0] + t * d[0], e.point[1] + t * d[1])
                else:
                    # negative dust: the window source sits on the segment
                    hx = e.point
            else:
                # window parallel to the segment: collinear chain edges (a
                # chord through consecutive path vertices) cut at the source
                # itself; otherwise the window never lands
                if orient(pa, pb, e.point) == 0:
                    hx = e.point
                elif d[0] * seg_dir[0] + d[1] * seg_dir[1] < 0.0:
                    tpar = 0.0
            if hx is not None:
                tpar = (
                    (hx[0] - pa[0]) * seg_dir[0] + (hx[1] - pa[1]) * seg_dir[1]
                ) / seg_len2
        tpar = min(max(tpar, hits[-1]), 1.0)
        hits.append(tpar)
        windows.append((wj, tpar))
    hits.append(1.0)
    return owners, hits, windows


# ---------------------------------------------------------------------------
# geodesic distance from a point to a segment

@dataclass(frozen=True)
class SegmentDistanceResult:
    distance: float
    closest_point: Point
    anchor: Point            # last path vertex before the segment
    path: GeodesicPath

    @property
    def anchor_prefix(self) -> float:
        return self.path.length - dist(self.anchor, self.closest_point)


def distance_to_segment(
    poly: SimplePolygon,
    tri: Triangulation,
    p: Point,
    seg_a: Point,
    seg_b: Point,
) -> SegmentDistanceResult:
    """Minimum geodesic distance from p to any point of the segment.

    The funnel between pi(p, a) and pi(p, b) is cut at the chain-edge
    extensions; on each piece the last path vertex is fixed, so the
    minimum is a clamped perpendicular foot.
    """
    p = (float(p[0]), float(p[1]))
    if seg_a == seg_b:
        path = shortest_path(poly, tri, p, seg_a)
        return SegmentDistanceResult(
            path.length, seg_a, path.points[-2] if len(path.points) > 1 else p, path
        )
    if on_segment(p, seg_a, seg_b):
        return SegmentDistanceResult(0.0, p, p, GeodesicPath((p,), 0.0))
    path_a = shortest_path(poly, tri, p, seg_a)
    path_b = shortest_path(poly, tri, p, seg_b)
    pa, pb = path_a.points, path_b.points
    k = 0
    while k < len(pa) and k < len(pb) and pa[k] == pb[k]:
        k += 1
    apex_idx = k - 1
    if apex_idx < 0:
        raise InternalError("geodesics to segment endpoints share no source")

    prefix_a = [0.0]
    for x, y in zip(pa, pa[1:]):
        prefix_a.append(prefix_a[-1] + dist(x, y))
    prefix_b = [0.0]
    for x, y in zip(pb, pb[1:]):
        prefix_b.append(prefix_b[-1] + dist(x, y))

    # chain from seg_a's contact to seg_b's contact through the apex
    chain: list[_Entry] = []
    witness_idx: list[tuple[str, int]] = []
    for i in range(len(pa) - 1, apex_idx, -1):
        chain.append(_Entry(pa[i], -1, prefix_a[i], pa[i - 1]))
        witness_idx.append(("a", i))
    apex_parent = pa[apex_idx - 1] if apex_idx > 0 else None
    chain.append(_Entry(pa[apex_idx], -1, prefix_a[apex_idx], apex_parent))
    witness_idx.append(("a", apex_idx))
    apex_pos = len(chain) - 1
    for i in range(apex_idx + 1, len(pb)):
        chain.append(_Entry(pb[i], -1, prefix_b[i], pb[i - 1]))
        witness_idx.append(("b", i))

    owners, hits, _windows = _funnel_cells_on_segment(chain, apex_pos, seg_a, seg_b)
    seg_dir = sub(seg_b, seg_a)
    seg_len2 = seg_dir[0] ** 2 + seg_dir[1] ** 2
    best = None
    for k2, j in enumerate(owners):
        t0, t1 = hits[k2], hits[k2 + 1]
        e = chain[j]
        tf = (
            (e.point[0] - seg_a[0]) * seg_dir[0]
            + (e.point[1] - seg_a[1]) * seg_dir[1]
        ) / seg_len2
        tf = min(max(tf, t0), t1)
        foot = (seg_a[0] + tf * seg_dir[0], seg_a[1] + tf * seg_dir[1])
        total = e.dist + dist(e.point, foot)
        if best is None or total < best[0]:
            best = (total, foot, j)
    total, closest, anchor_j = best
    anchor_pt = chain[anchor_j].point
    side, i = witness_idx[anchor_j]
    pts = pa[: i + 1] if side == "a" else pb[: i + 1]
    upto = list(pts)
    if upto[-1] != closest:
        upto.append(closest)
    wpath = GeodesicPath.from_points(upto)
    return SegmentDistanceResult(total, closest, anchor_pt, wpath)
