"""Preprocess-then-query engine for the min-max variant.

The polygon is preprocessed once (triangulation, dual tree, adjacency);
each query walks three nested binary searches -- over the geodesic's edges,
over the boundary arcs swept at the located pivot, and over the bend
structure of the bracketing lines-of-sight -- then finishes with the
interval optimizer on the final bracket.  Every comparison probes a
line-of-sight with exact geodesic distances; near-tie margins are re-run
in extended precision before a branch is taken.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import mpmath

from .errors import OutsidePolygon, QueryFormatError
from .geodesic import GeodesicPath, build_spt, distance_to_segment, shortest_path
from .objective import MINMAX
from .polygon import SimplePolygon, validate_and_normalize
from .predicates import Point, dist, sub
from .solve import SolveResult, _true_eval, _zero_result, pick_verified_optimum
from .sweep import PivotFrame, _SweepContext, _refine, build_frames
from .intervalopt import IntervalProblem, minimize_interval
from .topology import Chord, is_visible, locate_point, maximal_chord, ray_shoot
from .triangulate import Triangulation, triangulate

QUERY_FORMAT_VERSION = 1


@dataclass(frozen=True)
class QueryAnswer:
    value: float
    s_star: Point
    t_star: Point
    chord: Chord | None
    pivot: Point | None
    pivot_index: int = -1
    stage1_tie: bool = False


class QueryStructure:
    """Immutable per-polygon state shared by all queries."""

    def __init__(self, poly: SimplePolygon, tri: Triangulation | None = None):
        self.poly = poly
        self.tri = tri if tri is not None else triangulate(poly)

    # -- serialization ---------------------------------------------------
    def to_json(self) -> str:
        return json.dumps(
            {
                "format": "pairvis-query-structure",
                "version": QUERY_FORMAT_VERSION,
                "polygon": [[x, y] for x, y in self.poly.vertices],
                "triangles": [list(t) for t in self.tri.triangles],
            }
        )

    def save(self, path):
        with open(path, "w") as fh:
            fh.write(self.to_json())

    @classmethod
    def from_json(cls, text: str) -> "QueryStructure":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as ex:
            raise QueryFormatError(f"unreadable query structure: {ex}") from ex
        if data.get("format") != "pairvis-query-structure":
            raise QueryFormatError("not a pairvis query structure file")
        if data.get("version") != QUERY_FORMAT_VERSION:
            raise QueryFormatError(
                f"query structure version {data.get('version')} "
                f"unsupported (expected {QUERY_FORMAT_VERSION})"
            )
        poly = validate_and_normalize(data["polygon"])
        return cls(poly)

    @classmethod
    def load(cls, path) -> "QueryStructure":
        with open(path) as fh:
            return cls.from_json(fh.read())


def build(poly: SimplePolygon) -> QueryStructure:
    return QueryStructure(poly)


def _precise_margin(path_s: GeodesicPath, path_t: GeodesicPath) -> int:
    """Sign of |path_s| - |path_t| at 50 digits (near-tie fallback)."""
    with mpmath.workdps(50):
        total = mpmath.mpf(0)
        for a, b in zip(path_s.points, path_s.points[1:]):
            total += mpmath.sqrt(
                (mpmath.mpf(a[0]) - b[0]) ** 2 + (mpmath.mpf(a[1]) - b[1]) ** 2
            )
        for a, b in zip(path_t.points, path_t.points[1:]):
            total -= mpmath.sqrt(
                (mpmath.mpf(a[0]) - b[0]) ** 2 + (mpmath.mpf(a[1]) - b[1]) ** 2
            )
        if total > mpmath.mpf(10) ** -25:
            return 1
        if total < -(mpmath.mpf(10) ** -25):
            return -1
        return 0


class _Query:
    def __init__(self, qs: QueryStructure, s: Point, t: Point):
        self.qs = qs
        self.poly = qs.poly
        self.tri = qs.tri
        self.s = s
        self.t = t
        self.stage1_tie = False
        self._spt_s = None
        self._spt_t = None

    @property
    def spt_s(self):
        if self._spt_s is None:
            self._spt_s = build_spt(self.poly, self.tri, self.s)
        return self._spt_s

    @property
    def spt_t(self):
        if self._spt_t is None:
            self._spt_t = build_spt(self.poly, self.tri, self.t)
        return self._spt_t

    def chord_compare(self, chord_a: Point, chord_b: Point):
        """Sign of |pi(s, l)| - |pi(t, l)| on the chord (a, b); 0 is a tie."""
        rs = distance_to_segment(self.poly, self.tri, self.s, chord_a, chord_b)
        rt = distance_to_segment(self.poly, self.tri, self.t, chord_a, chord_b)
        margin = rs.distance - rt.distance
        scale = max(rs.distance, rt.distance, 1.0)
        if abs(margin) < 1e-12 * scale:
            return _precise_margin(rs.path, rt.path), rs, rt
        return (1 if margin > 0 else -1), rs, rt

    def chord_through(
        self, anchor: Point, d: Point | None = None, through: Point | None = None
    ) -> Chord:
        return maximal_chord(self.poly, self.tri, anchor, d, through=through)


def query_minmax(qs: QueryStructure, s: Point, t: Point) -> QueryAnswer:
    """Minimum of the longer travel distance for s and t to see each other."""
    poly, tri = qs.poly, qs.tri
    s = (float(s[0]), float(s[1]))
    t = (float(t[0]), float(t[1]))
    loc_s = locate_point(poly, tri, s)
    if not loc_s.inside:
        raise OutsidePolygon(s)
    loc_t = locate_point(poly, tri, t)
    if not loc_t.inside:
        raise OutsidePolygon(t)
    if s == t or is_visible(poly, tri, s, t, loc_s):
        z = _zero_result(poly, tri, s, t, MINMAX)
        return QueryAnswer(0.0, s, t, z.chord, None)

    path = shortest_path(poly, tri, s, t, loc_s, loc_t)
    pts = path.points
    k = len(pts) - 1
    q = _Query(qs, s, t)

    # Stage 1: binary search over the geodesic's edges.  The optimal
    # line-of-sight is tangent after v_i iff the s-distance to the chord
    # through edge (v_i, v_{i+1}) is still smaller than the t-distance.
    lo_e, hi_e = 0, k - 1   # edge indices; predicate flips once
    tie_result = None

    def edge_pred(i):
        nonlocal tie_result
        chord = q.chord_through(pts[i], through=pts[i + 1])
        sign, rs, rt = q.chord_compare(chord.a, chord.b)
        if sign == 0:
            tie_result = (chord, rs, rt)
        return sign < 0

    # find the first edge where the predicate is false
    lo, hi = 0, k - 1
    if not edge_pred(0):
        first_false = 0
    elif edge_pred(k - 1):
        first_false = k - 1   # never flips: optimum at the last pivot
    else:
        lo, hi = 0, k - 1     # pred(lo) True, pred(hi) False
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if tie_result is not None:
                break
            if edge_pred(mid):
                lo = mid
            else:
                hi = mid
        first_false = hi
    if tie_result is not None:
        chord, rs, rt = tie_result
        val = max(rs.distance, rt.distance)
        return QueryAnswer(
            val, rs.closest_point, rt.closest_point, chord, None,
            pivot_index=-1, stage1_tie=True,
        )
    pivot_i = max(first_false, 1)
    frames = build_frames(poly, tri, path)
    frame = next(f for f in frames if f.index == pivot_i)

    lo_off, hi_off = 0.0, frame.span

    # values attained exactly at event chords (the objective can jump there,
    # so bracket ends are evaluated with their exact through-vertex chords)
    end_candidates: list[tuple[float, object, object, Chord]] = []

    def add_end(through_pt: Point, minus_through: bool):
        chord = q.chord_through(frame.point, through=through_pt)
        if minus_through:
            xm, xp = chord.b, chord.a
        else:
            xm, xp = chord.a, chord.b
        rs = distance_to_segment(poly, tri, s, frame.point, xm)
        rt = distance_to_segment(poly, tri, t, frame.point, xp)
        end_candidates.append((max(rs.distance, rt.distance), rs, rt, chord))

    add_end(frame.prev_point, True)
    add_end(frame.next_point, False)
    # every boundary event of this pivot, on its exact chord
    for plus_side in (True, False):
        spt = q.spt_s if plus_side else q.spt_t
        for child in spt.children_of(frame.vertex):
            u = poly.vertices[child]
            off = _offset_of_point(frame, u, plus_side)
            if off is not None and 0.0 < off < frame.span:
                add_end(u, not plus_side)

    # Stage 2: binary search over the boundary arcs swept at the pivot.
    stage2 = _boundary_stage(q, frame, lo_off, hi_off)
    if isinstance(stage2, QueryAnswer):
        return stage2
    lo_off, hi_off, ends = stage2
    for (u, plus_side) in ends:
        add_end(u, not plus_side)

    # Stage 3: binary search over the bend structure of the bracketing
    # lines-of-sight, one side at a time; brackets are intersected.
    for which in ("-", "+"):
        res = _bend_stage(q, frame, lo_off, hi_off, which)
        if isinstance(res, QueryAnswer):
            return res
        lo_off, hi_off = res

    # Finish: adaptive refinement plus verified interval optimization.
    ctx = _SweepContext(poly, tri, s, t)
    ctx.budget = 64
    leaves: list = []
    _refine(ctx, frame, lo_off, hi_off, 0, leaves)
    cands = [
        minimize_interval(
            IntervalProblem(frame.point, llo, lhi, Ss, St, MINMAX,
                            pivot_index=frame.index)
        )
        for (llo, lhi, Ss, St) in leaves
    ]
    best = pick_verified_optimum(poly, tri, s, t, cands, MINMAX)
    value, rs, rt, chord = _true_eval(
        poly, tri, s, t, frame.point, frame.phi_at(best.offset), MINMAX
    )
    for (ev, ers, ert, echord) in end_candidates:
        if ev < value:
            value, rs, rt, chord = ev, ers, ert, echord
    return QueryAnswer(
        value, rs.closest_point, rt.closest_point, chord, frame.point,
        pivot_index=frame.index,
    )


def _offset_of_point(frame: PivotFrame, p: Point, plus_side: bool) -> float | None:
    if plus_side:
        d = (frame.point[0] - p[0], frame.point[1] - p[1])
    else:
        d = (p[0] - frame.point[0], p[1] - frame.point[1])
    phi = math.atan2(d[1], d[0])
    off = ((phi - frame.phi_start) * frame.sweep_sign) % (2.0 * math.pi)
    if off > frame.span + 1e-9:
        if off > 2.0 * math.pi - 1e-9:
            return 0.0
        return None
    return min(off, frame.span)


def _boundary_stage(q: _Query, frame: PivotFrame, lo_off, hi_off):
    """Narrow the offset bracket with binary searches over the boundary
    events of both arcs swept at the pivot.

    Boundary-event candidates are the shortest-path-tree children of the
    pivot (each visible from it), so the paper's comparison line -- the
    chord containing the first edge of pi(v_i, u) -- is exactly the chord
    through the candidate itself.
    """
    poly, tri = q.poly, q.tri
    v = frame.point
    ends: list[tuple[Point, bool]] = []
    for plus_side in (True, False):
        spt = q.spt_t if not plus_side else q.spt_s
        cands = []
        for child in spt.children_of(frame.vertex):
            u = poly.vertices[child]
            off = _offset_of_point(frame, u, plus_side)
            if off is not None and lo_off + 1e-12 < off < hi_off - 1e-12:
                cands.append((off, child))
        cands.sort()
        lo_i, hi_i = -1, len(cands)
        while hi_i - lo_i > 1:
            mid = (lo_i + hi_i) // 2
            off, vi = cands[mid]
            u = poly.vertices[vi]
            chord = q.chord_through(v, through=u)
            sign, rs, rt = q.chord_compare(chord.a, chord.b)
            if sign == 0:
                val = max(rs.distance, rt.distance)
                return QueryAnswer(
                    val, rs.closest_point, rt.closest_point, chord, v,
                    pivot_index=frame.index, stage1_tie=True,
                )
            if sign < 0:
                lo_i = mid
            else:
                hi_i = mid
        if lo_i >= 0:
            lo_off = cands[lo_i][0]
            ends.append((poly.vertices[cands[lo_i][1]], plus_side))
        if hi_i < len(cands):
            hi_off = cands[hi_i][0]
            ends.append((poly.vertices[cands[hi_i][1]], plus_side))
    return lo_off, hi_off, ends


def _bend_stage(q: _Query, frame: PivotFrame, lo_off, hi_off, which: str):
    """Binary search over the edges of pi(src, l1) u pi(src, l2).

    Comparison chords are perpendicular to the probed edge through the
    pivot (the edges appear radially sorted around it).
    """
    poly, tri = q.poly, q.tri
    v = frame.point
    src = q.s if which == "-" else q.t
    sgn = 1.0 if which == "-" else -1.0
    d_lo = frame.phi_at(lo_off)
    d_hi = frame.phi_at(hi_off)
    hit_lo = ray_shoot(poly, tri, v, (sgn * math.cos(d_lo), sgn * math.sin(d_lo)), frame.loc)
    hit_hi = ray_shoot(poly, tri, v, (sgn * math.cos(d_hi), sgn * math.sin(d_hi)), frame.loc)
    r1 = distance_to_segment(poly, tri, src, v, hit_lo.point)
    r2 = distance_to_segment(poly, tri, src, v, hit_hi.point)
    p1, p2 = r1.path.points, r2.path.points
    k = 0
    while k < len(p1) and k < len(p2) and p1[k] == p2[k]:
        k += 1
    prime: list[tuple[Point, Point]] = []
    for i in range(len(p1) - 1, k - 1, -1):
        if i >= 1:
            prime.append((p1[i - 1], p1[i]))
    for i in range(k, len(p2) - 1):
        prime.append((p2[i], p2[i + 1]))
    cands = []
    for (a, b) in prime:
        if a == b:
            continue
        base = math.atan2(b[1] - a[1], b[0] - a[0]) + 0.5 * math.pi
        for phi in (base, base + math.pi):
            off = ((phi - frame.phi_start) * frame.sweep_sign) % (2.0 * math.pi)
            if lo_off + 1e-12 < off < hi_off - 1e-12:
                cands.append(off)
    cands = sorted(set(cands))
    lo_i, hi_i = -1, len(cands)
    while hi_i - lo_i > 1:
        mid = (lo_i + hi_i) // 2
        off = cands[mid]
        phi = frame.phi_at(off)
        chord = q.chord_through(v, (math.cos(phi), math.sin(phi)))
        sign, rs, rt = q.chord_compare(chord.a, chord.b)
        if sign == 0:
            val = max(rs.distance, rt.distance)
            return QueryAnswer(
                val, rs.closest_point, rt.closest_point, chord, v,
                pivot_index=frame.index, stage1_tie=True,
            )
        if sign < 0:
            lo_i = mid
        else:
            hi_i = mid
    new_lo = cands[lo_i] if lo_i >= 0 else lo_off
    new_hi = cands[hi_i] if hi_i < len(cands) else hi_off
    return new_lo, new_hi
