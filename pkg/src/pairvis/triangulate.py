"""Polygon triangulation by monotone decomposition, with dual-tree adjacency.

Sweep-line decomposition into y-monotone pieces (lexicographic (y, -x) order
breaks ties), stack triangulation of each piece, then shared-edge adjacency.
All branch decisions go through exact predicates; no epsilon thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InternalError
from .polygon import SimplePolygon
from .predicates import orient

_START, _END, _SPLIT, _MERGE, _REG_RIGHT, _REG_LEFT = range(6)


def _above(u, w) -> bool:
    """u precedes w in sweep order (higher y, ties broken left first)."""
    return u[1] > w[1] or (u[1] == w[1] and u[0] < w[0])


@dataclass
class Triangulation:
    """Triangles (ccw index triples) partitioning the polygon, plus adjacency.

    neighbors[t][k] is the triangle across the edge opposite corner k, or -1
    on the boundary.  The dual graph is a tree, rooted at triangle 0 with
    parent links for sleeve extraction.
    """

    triangles: list[tuple[int, int, int]]
    neighbors: list[list[int]]
    vertex_tris: list[list[int]]
    dual_parent: list[int] = field(default_factory=list)
    dual_depth: list[int] = field(default_factory=list)

    def third_corner(self, t: int, a: int, b: int) -> int:
        for v in self.triangles[t]:
            if v != a and v != b:
                return v
        raise InternalError("degenerate triangle corner lookup")

    def neighbor_across(self, t: int, a: int, b: int) -> int:
        """Neighbor of triangle t across the edge with vertex indices {a, b}."""
        tri = self.triangles[t]
        for k in range(3):
            e = (tri[(k + 1) % 3], tri[(k + 2) % 3])
            if (e[0] == a and e[1] == b) or (e[0] == b and e[1] == a):
                return self.neighbors[t][k]
        raise InternalError("edge not part of triangle")

    def dual_path(self, t_from: int, t_to: int) -> list[int]:
        """Triangle sequence along the unique dual-tree path."""
        pa, pb = [t_from], [t_to]
        a, b = t_from, t_to
        da, db = self.dual_depth[a], self.dual_depth[b]
        while da > db:
            a = self.dual_parent[a]
            pa.append(a)
            da -= 1
        while db > da:
            b = self.dual_parent[b]
            pb.append(b)
            db -= 1
        while a != b:
            a = self.dual_parent[a]
            b = self.dual_parent[b]
            pa.append(a)
            pb.append(b)
        return pa + pb[-2::-1]


def _classify(poly: SimplePolygon, i: int) -> int:
    vs = poly.vertices
    n = poly.n
    prev, cur, nxt = vs[i - 1], vs[i], vs[(i + 1) % n]
    prev_below = _above(cur, prev)
    next_below = _above(cur, nxt)
    if prev_below and next_below:
        return _START if orient(prev, cur, nxt) > 0 else _SPLIT
    if not prev_below and not next_below:
        return _END if orient(prev, cur, nxt) > 0 else _MERGE
    # regular: interior lies to the right exactly when the chain descends
    return _REG_RIGHT if _above(prev, cur) else _REG_LEFT


class _Status:
    """Sweep status: edges ordered left-to-right at the sweep line.

    Edges never swap order while both are present (the boundary is simple),
    so point-versus-edge orientation tests are a sound search key.
    """

    def __init__(self, verts):
        self.verts = verts
        self.edges: list[int] = []       # edge index i == edge (v_i, v_i+1)
        self.helper: dict[int, int] = {}
        self.lower: dict[int, tuple] = {}
        self.upper: dict[int, tuple] = {}

    def _is_left_of_edge(self, p, e) -> bool:
        return orient(self.lower[e], self.upper[e], p) > 0

    def _search(self, p) -> int:
        """Number of status edges strictly left of point p."""
        lo, hi = 0, len(self.edges)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._is_left_of_edge(p, self.edges[mid]):
                hi = mid
            else:
                lo = mid + 1
        return lo

    def insert(self, e: int, helper: int, up, down):
        self.upper[e] = up
        self.lower[e] = down
        self.helper[e] = helper
        self.edges.insert(self._search(up), e)

    def remove(self, e: int):
        self.edges.remove(e)
        self.helper.pop(e, None)

    def left_of(self, p) -> int:
        """Status edge immediately left of point p."""
        k = self._search(p)
        if k == 0:
            raise InternalError("no status edge left of vertex during sweep")
        return self.edges[k - 1]


def _monotone_diagonals(poly: SimplePolygon) -> list[tuple[int, int]]:
    """Diagonals splitting the polygon into y-monotone pieces."""
    vs = poly.vertices
    n = poly.n
    order = sorted(range(n), key=lambda i: (vs[i][1], -vs[i][0]), reverse=True)
    status = _Status(vs)
    diags: list[tuple[int, int]] = []

    def fix_up(e: int, v: int, kinds):
        h = status.helper.get(e)
        if h is not None and kinds[h] == _MERGE:
            diags.append((v, h))
        status.helper[e] = v

    kinds = [_classify(poly, i) for i in range(n)]

    for v in order:
        kind = kinds[v]
        cur = vs[v]
        e_in = (v - 1) % n   # edge (v-1, v)
        e_out = v            # edge (v, v+1)
        if kind == _START:
            status.insert(e_out, v, cur, vs[(v + 1) % n])
        elif kind == _END:
            h = status.helper.get(e_in)
            if h is not None and kinds[h] == _MERGE:
                diags.append((v, h))
            status.remove(e_in)
        elif kind == _SPLIT:
            ej = status.left_of(cur)
            diags.append((v, status.helper[ej]))
            status.helper[ej] = v
            status.insert(e_out, v, cur, vs[(v + 1) % n])
        elif kind == _MERGE:
            h = status.helper.get(e_in)
            if h is not None and kinds[h] == _MERGE:
                diags.append((v, h))
            status.remove(e_in)
            fix_up(status.left_of(cur), v, kinds)
        elif kind == _REG_RIGHT:
            h = status.helper.get(e_in)
            if h is not None and kinds[h] == _MERGE:
                diags.append((v, h))
            status.remove(e_in)
            status.insert(e_out, v, cur, vs[(v + 1) % n])
        else:  # _REG_LEFT
            fix_up(status.left_of(cur), v, kinds)
    return diags


def _extract_faces(poly: SimplePolygon, diags: list[tuple[int, int]]) -> list[list[int]]:
    """Faces of the subdivision induced by the boundary plus diagonals.

    Boundary arcs exist in the ccw direction only, diagonals in both, so the
    walk (sharpest clockwise turn at each vertex) enumerates interior faces
    exactly once.
    """
    vs = poly.vertices
    n = poly.n
    # rotation neighborhoods include both boundary neighbors; outgoing arcs
    # exist for diagonals (both ways) and boundary edges (ccw only)
    nbrs: dict[int, set[int]] = {i: {(i + 1) % n, (i - 1) % n} for i in range(n)}
    outgoing: set[tuple[int, int]] = {(i, (i + 1) % n) for i in range(n)}
    for u, w in diags:
        if u == w or w in nbrs[u]:
            continue
        nbrs[u].add(w)
        nbrs[w].add(u)
        outgoing.add((u, w))
        outgoing.add((w, u))

    def angle(u, w):
        return math.atan2(vs[w][1] - vs[u][1], vs[w][0] - vs[u][0])

    next_arc = {}
    for u, targets in nbrs.items():
        ring = sorted(targets, key=lambda w: (angle(u, w), w))
        m = len(ring)
        for k, w in enumerate(ring):
            # arriving w->u, leave along the next arc clockwise of (u->w)
            next_arc[(w, u)] = ring[(k - 1) % m]

    faces = []
    visited = set()
    for u, w in sorted(outgoing):
        if (u, w) in visited:
            continue
        face = []
        a, b = u, w
        while (a, b) not in visited:
            visited.add((a, b))
            face.append(a)
            a, b = b, next_arc[(a, b)]
            if (a, b) not in outgoing:
                raise InternalError("face walk left the interior subdivision")
        faces.append(face)
    return faces


def _triangulate_monotone(vs, face: list[int]) -> list[tuple[int, int, int]]:
    """Stack triangulation of one y-monotone face (vertex index cycle, ccw)."""
    m = len(face)
    if m == 3:
        return [tuple(face)]
    top = min(range(m), key=lambda k: (-vs[face[k]][1], vs[face[k]][0]))
    bot = min(range(m), key=lambda k: (vs[face[k]][1], -vs[face[k]][0]))

    # left chain walks ccw from top to bottom, right chain the other way
    left, k = [], top
    while k != bot:
        left.append(face[k])
        k = (k + 1) % m
    left.append(face[bot])
    right, k = [], (top - 1) % m
    while k != bot:
        right.append(face[k])
        k = (k - 1) % m

    onleft = {v: True for v in left}
    for v in right:
        onleft[v] = False
    merged = []
    i = j = 0
    while i < len(left) or j < len(right):
        if j >= len(right) or (
            i < len(left) and _above(vs[left[i]], vs[right[j]])
        ):
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            j += 1

    tris = []

    def emit(a, b, c):
        if orient(vs[a], vs[b], vs[c]) > 0:
            tris.append((a, b, c))
        elif orient(vs[a], vs[c], vs[b]) > 0:
            tris.append((a, c, b))
        else:
            raise InternalError(
                "zero-area triangle (collinear chain); triangulation unsupported"
            )

    stack = [merged[0], merged[1]]
    for k in range(2, m - 1):
        v = merged[k]
        if onleft[v] != onleft[stack[-1]]:
            while len(stack) > 1:
                a = stack.pop()
                emit(v, a, stack[-1])
            stack = [merged[k - 1], v]
        else:
            a = stack.pop()
            while stack:
                # pop while the diagonal to the next stack vertex lies inside
                s = orient(vs[v], vs[a], vs[stack[-1]])
                if (onleft[v] and s < 0) or (not onleft[v] and s > 0):
                    emit(v, a, stack[-1])
                    a = stack.pop()
                else:
                    break
            stack.append(a)
            stack.append(v)
    v = merged[-1]
    while len(stack) > 1:
        a = stack.pop()
        emit(v, a, stack[-1])
    return tris


def triangulate(poly: SimplePolygon) -> Triangulation:
    """Triangulate the polygon; n-2 triangles whose dual graph is a tree."""
    n = poly.n
    vs = poly.vertices
    if n == 3:
        tri_list = [(0, 1, 2)]
    else:
        diags = _monotone_diagonals(poly)
        faces = _extract_faces(poly, diags)
        tri_list = []
        for face in faces:
            tri_list.extend(_triangulate_monotone(vs, face))
    if len(tri_list) != n - 2:
        raise InternalError(f"triangulation produced {len(tri_list)} != n-2 triangles")

    neighbors = [[-1, -1, -1] for _ in tri_list]
    edge_owner: dict[tuple[int, int], tuple[int, int]] = {}
    for t, tri in enumerate(tri_list):
        for k in range(3):
            a, b = tri[(k + 1) % 3], tri[(k + 2) % 3]
            key = (a, b) if a < b else (b, a)
            if key in edge_owner:
                t2, k2 = edge_owner.pop(key)
                neighbors[t][k] = t2
                neighbors[t2][k2] = t
            else:
                edge_owner[key] = (t, k)

    vertex_tris: list[list[int]] = [[] for _ in range(n)]
    for t, tri in enumerate(tri_list):
        for v in tri:
            vertex_tris[v].append(t)

    # root the dual tree at triangle 0
    parent = [-2] * len(tri_list)
    depth = [0] * len(tri_list)
    parent[0] = -1
    queue = [0]
    seen = 1
    while queue:
        t = queue.pop()
        for nb in neighbors[t]:
            if nb >= 0 and parent[nb] == -2:
                parent[nb] = t
                depth[nb] = depth[t] + 1
                queue.append(nb)
                seen += 1
    if seen != len(tri_list):
        raise InternalError("triangulation dual graph is not connected")

    return Triangulation(tri_list, neighbors, vertex_tris, parent, depth)
