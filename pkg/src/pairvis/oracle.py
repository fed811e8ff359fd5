"""Brute-force reference solvers used for testing and example derivation.

Deliberately independent of the sweep machinery: visibility here is a naive
all-edges test, shortest paths go through a visibility graph and Dijkstra,
and chords are found by intersecting a ray with every boundary edge.  The
only shared geometry is the geodesic segment-distance primitive, which has
its own sampling-based tests.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .errors import OutsidePolygon
from .geodesic import GeodesicPath, distance_to_segment
from .polygon import SimplePolygon
from .predicates import (
    Point,
    dist,
    on_segment,
    orient,
)
from .triangulate import Triangulation, triangulate


@dataclass(frozen=True)
class OracleConfig:
    angular_samples: int = 100_000
    use_visibility_graph: bool = True

    def __post_init__(self):
        if self.angular_samples < 1_000:
            raise ValueError("angular_samples must be at least 1000")


@dataclass(frozen=True)
class OracleResult:
    value: float
    error_bound: float
    s_star: Point
    t_star: Point
    chord: tuple[Point, Point] | None
    pivot: Point | None


def naive_point_in_polygon(poly: SimplePolygon, p: Point) -> bool:
    """Closed containment test: crossing parity plus on-boundary check."""
    for i in range(poly.n):
        a, b = poly.edge(i)
        if on_segment(p, a, b):
            return True
    inside = False
    x, y = p
    for i in range(poly.n):
        (x0, y0), (x1, y1) = poly.edge(i)
        if (y0 > y) != (y1 > y):
            xi = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
            if x < xi:
                inside = not inside
    return inside


def naive_visible(poly: SimplePolygon, p: Point, q: Point) -> bool:
    """Exact segment containment: pq lies in the closed polygon.

    Running along the boundary is allowed (the boundary is part of P).
    The segment leaves P only by crossing an edge interior transversally,
    by passing a vertex in a direction outside its interior cone, or by
    starting/ending on an edge pointing strictly outward; each case is an
    exact predicate, so no point construction is involved.
    """
    if p == q:
        return naive_point_in_polygon(poly, p)
    for i in range(poly.n):
        a, b = poly.edge(i)
        o1 = orient(p, q, a)
        o2 = orient(p, q, b)
        o3 = orient(a, b, p)
        o4 = orient(a, b, q)
        if o1 * o2 < 0 and o3 * o4 < 0:
            return False
    for i, v in enumerate(poly.vertices):
        if on_segment(v, p, q):
            if v != q and not poly.interior_cone_contains_point(i, q):
                return False
            if v != p and not poly.interior_cone_contains_point(i, p):
                return False
    # an endpoint on an edge interior must not point strictly outward
    for pt, other in ((p, q), (q, p)):
        if pt in poly.vertices:
            continue
        for i in range(poly.n):
            a, b = poly.edge(i)
            if orient(a, b, pt) == 0 and on_segment(pt, a, b):
                if orient(a, b, other) < 0:
                    return False
                break
    return True


def oracle_shortest_path(poly: SimplePolygon, p: Point, q: Point) -> GeodesicPath:
    """Shortest path via Dijkstra over the visibility graph of vertices+{p,q}."""
    p = (float(p[0]), float(p[1]))
    q = (float(q[0]), float(q[1]))
    for pt in (p, q):
        if not naive_point_in_polygon(poly, pt):
            raise OutsidePolygon(pt)
    if p == q:
        return GeodesicPath((p,), 0.0)
    nodes = list(poly.vertices)
    for extra in (p, q):
        if extra not in nodes:
            nodes.append(extra)
    src, dst = nodes.index(p), nodes.index(q)
    m = len(nodes)
    adj: list[list[tuple[int, float]]] = [[] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if naive_visible(poly, nodes[i], nodes[j]):
                w = dist(nodes[i], nodes[j])
                adj[i].append((j, w))
                adj[j].append((i, w))
    distv = [math.inf] * m
    prev = [-1] * m
    distv[src] = 0.0
    heap = [(0.0, src)]
    while heap:
        dcur, u = heapq.heappop(heap)
        if dcur > distv[u]:
            continue
        if u == dst:
            break
        for v, w in adj[u]:
            nd = dcur + w
            if nd < distv[v]:
                distv[v] = nd
                prev[v] = u
                heapq.heappush(heap, (nd, v))
    if not math.isfinite(distv[dst]):
        raise OutsidePolygon(q)
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    pts = [nodes[i] for i in reversed(path)]
    return GeodesicPath.from_points(pts)


def naive_chord(poly: SimplePolygon, anchor: Point, direction: Point):
    """Maximal segment through anchor: nearest true exits over all edges."""
    verts = poly.as_array
    a = verts
    b = np.roll(verts, -1, axis=0)
    ox, oy = anchor
    dx, dy = direction
    ex, ey = (b - a)[:, 0], (b - a)[:, 1]
    denom = dx * ey - dy * ex
    qx, qy = a[:, 0] - ox, a[:, 1] - oy
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (qx * ey - qy * ex) / denom
        u = (qx * dy - qy * dx) / denom
    ok = np.isfinite(t) & (u >= -1e-12) & (u <= 1 + 1e-12)
    ts = np.where(ok, t, np.nan)
    eps = 1e-9
    fw = ts[np.isfinite(ts) & (ts > eps)]
    bw = ts[np.isfinite(ts) & (ts < -eps)]
    t_fw = float(fw.min()) if fw.size else 0.0
    t_bw = float(bw.max()) if bw.size else 0.0
    # extend through grazing contacts: probe just past the hit
    t_fw = _extend_through_grazes(poly, anchor, direction, t_fw, +1, ts)
    t_bw = _extend_through_grazes(poly, anchor, direction, t_bw, -1, ts)
    p_fw = (ox + t_fw * dx, oy + t_fw * dy)
    p_bw = (ox + t_bw * dx, oy + t_bw * dy)
    return p_bw, p_fw


def _extend_through_grazes(poly, anchor, d, t_hit, sign, ts):
    ox, oy = anchor
    scale = max(abs(t_hit), 1.0)
    while True:
        probe_t = t_hit + sign * 1e-7 * scale
        probe = (ox + probe_t * d[0], oy + probe_t * d[1])
        if not naive_point_in_polygon(poly, probe):
            return t_hit
        later = ts[np.isfinite(ts) & (sign * ts > sign * t_hit + 1e-9)]
        if later.size == 0:
            return t_hit
        t_hit = float(later.min()) if sign > 0 else float(later.max())


def _pivot_sweep_range(prev_pt: Point, piv: Point, next_pt: Point):
    """Angular range of lines tangent at piv, from the incoming to the
    outgoing path edge, signed by the turn direction."""
    a0 = math.atan2(prev_pt[1] - piv[1], prev_pt[0] - piv[0])
    a1 = math.atan2(piv[1] - next_pt[1], piv[0] - next_pt[0])
    delta = (a1 - a0) % (2.0 * math.pi)
    if delta > math.pi:
        delta -= 2.0 * math.pi
    return a0, delta


def oracle_solve(
    poly: SimplePolygon,
    s: Point,
    t: Point,
    objective,
    cfg: OracleConfig = OracleConfig(angular_samples=2000),
    tri: Triangulation | None = None,
) -> OracleResult:
    """Dense angular sampling of tangent chords around every path vertex.

    Each sampled chord yields an achievable objective value (distances via
    true geodesics), so the reported minimum is an upper bound; the error
    bound covers the sampling resolution.
    """
    s = (float(s[0]), float(s[1]))
    t = (float(t[0]), float(t[1]))
    for pt in (s, t):
        if not naive_point_in_polygon(poly, pt):
            raise OutsidePolygon(pt)
    if naive_visible(poly, s, t):
        return OracleResult(0.0, 0.0, s, t, None, None)
    path = oracle_shortest_path(poly, s, t)
    if tri is None:
        tri = triangulate(poly)
    samples = max(cfg.angular_samples, 1000)
    best = None
    diam = poly.diameter
    step_max = 0.0
    pts = path.points
    for i in range(1, len(pts) - 1):
        piv = pts[i]
        a0, delta = _pivot_sweep_range(pts[i - 1], piv, pts[i + 1])
        if delta == 0.0:
            continue
        step = abs(delta) / samples
        step_max = max(step_max, step)
        for k in range(samples + 1):
            phi = a0 + delta * (k / samples)
            d = (math.cos(phi), math.sin(phi))
            ca, cb = naive_chord(poly, piv, d)
            if ca == cb:
                continue
            rs = distance_to_segment(poly, tri, s, ca, cb)
            rt = distance_to_segment(poly, tri, t, ca, cb)
            val = objective.combine(rs.distance, rt.distance)
            if best is None or val < best[0]:
                best = (val, rs.closest_point, rt.closest_point, (ca, cb), piv)
    if best is None:
        raise OutsidePolygon(s)
    bound = 2.0 * diam * step_max * max(getattr(objective, "scale_bound", 1.0), 1.0)
    val, s_star, t_star, chord, piv = best
    return OracleResult(val, bound, s_star, t_star, chord, piv)
