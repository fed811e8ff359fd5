"""End-to-end solver: events, per-interval minima, global optimum."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import InternalError, OutsidePolygon
from .geodesic import GeodesicPath, build_spt, distance_to_segment, shortest_path
from .intervalopt import IntervalProblem, LocalOptimum, minimize_interval
from .objective import Objective
from .polygon import SimplePolygon
from .predicates import Point, dist, sub
from .sweep import (
    EventSequence,
    SweepDecomposition,
    compute_bend_events,
    compute_path_and_boundary_events,
)
from .topology import Chord, is_visible, locate_point, maximal_chord
from .triangulate import Triangulation, triangulate


@dataclass(frozen=True)
class SolveResult:
    value: float
    s_star: Point
    t_star: Point
    chord: Chord | None
    pivot: Point | None
    pivot_index: int
    path_s: GeodesicPath
    path_t: GeodesicPath
    interval_id: int
    theta: float
    objective: Objective

    @property
    def visible_initially(self) -> bool:
        return self.pivot is None


def _zero_result(poly, tri, s, t, objective) -> SolveResult:
    chord = None
    if s != t:
        chord = maximal_chord(poly, tri, s, through=t)
    return SolveResult(
        value=objective.combine(0.0, 0.0),
        s_star=s,
        t_star=t,
        chord=chord,
        pivot=None,
        pivot_index=-1,
        path_s=GeodesicPath((s,), 0.0),
        path_t=GeodesicPath((t,), 0.0),
        interval_id=-1,
        theta=float("nan"),
        objective=objective,
    )


def _true_eval(poly, tri, s, t, pivot, phi, objective):
    """Objective at a chord angle with everything recomputed from geometry."""
    d = (math.cos(phi), math.sin(phi))
    chord = maximal_chord(poly, tri, pivot, d)
    rs = distance_to_segment(poly, tri, s, pivot, chord.b)
    rt = distance_to_segment(poly, tri, t, pivot, chord.a)
    value = objective.combine(rs.distance, rt.distance)
    return value, rs, rt, chord


def _true_minimize(poly, tri, s, t, prob, objective):
    """Re-minimize one interval with true geometry (slow, correction path)."""
    from scipy.optimize import minimize_scalar

    v = prob.pivot

    def phi_of(off):
        return prob.side_s.ray_base + prob.side_s.sweep_sign * off

    def val(off):
        value, _rs, _rt, _c = _true_eval(poly, tri, s, t, v, phi_of(off), objective)
        return value

    grid = 16
    samples = [
        (val(prob.lo + (prob.hi - prob.lo) * k / grid),
         prob.lo + (prob.hi - prob.lo) * k / grid)
        for k in range(grid + 1)
    ]
    best_v, best_o = min(samples)
    k0 = samples.index((best_v, best_o))
    lo_b = samples[max(k0 - 1, 0)][1]
    hi_b = samples[min(k0 + 1, grid)][1]
    if hi_b > lo_b:
        res = minimize_scalar(val, bounds=(lo_b, hi_b), method="bounded",
                              options={"xatol": 1e-12})
        if res.fun < best_v:
            best_v, best_o = float(res.fun), float(res.x)
    value, rs, rt, _chord = _true_eval(
        poly, tri, s, t, v, phi_of(best_o), objective
    )
    return LocalOptimum(
        best_o, phi_of(best_o) % math.pi, value, rs.distance, rt.distance,
        rs.closest_point, rt.closest_point, "interior", prob,
    )


def _assemble(poly, tri, s, t, opt: LocalOptimum, interval_id, objective) -> SolveResult:
    prob = opt.problem
    v = prob.pivot
    phi = prob.side_s.ray_base + prob.side_s.sweep_sign * opt.offset
    value, rs, rt, chord = _true_eval(poly, tri, s, t, v, phi, objective)
    return SolveResult(
        value=value,
        s_star=rs.closest_point,
        t_star=rt.closest_point,
        chord=chord,
        pivot=v,
        pivot_index=prob.pivot_index,
        path_s=rs.path,
        path_t=rt.path,
        interval_id=interval_id,
        theta=opt.theta,
        objective=objective,
    )


def solve_with_trace(
    poly: SimplePolygon,
    s: Point,
    t: Point,
    objective: Objective,
    tri: Triangulation | None = None,
):
    """Solve and return the event sequence and per-gap local optima."""
    s = (float(s[0]), float(s[1]))
    t = (float(t[0]), float(t[1]))
    if tri is None:
        tri = triangulate(poly)
    loc_s = locate_point(poly, tri, s)
    if not loc_s.inside:
        raise OutsidePolygon(s)
    loc_t = locate_point(poly, tri, t)
    if not loc_t.inside:
        raise OutsidePolygon(t)
    if s == t or is_visible(poly, tri, s, t, loc_s):
        return _zero_result(poly, tri, s, t, objective), None, []
    path = shortest_path(poly, tri, s, t, loc_s, loc_t)
    if len(path.points) < 3:
        raise InternalError("pair not visible but geodesic has no interior vertex")
    spt_s = build_spt(poly, tri, s)
    spt_t = build_spt(poly, tri, t)
    partial = compute_path_and_boundary_events(
        poly, tri, s, t, path, spt_s, spt_t, visible=False
    )
    decomp = compute_bend_events(poly, tri, s, t, path, partial)
    candidates: list[LocalOptimum] = []
    gap_optima: list[LocalOptimum | None] = []
    for gi, probs in enumerate(decomp.gaps):
        gap_best = None
        for prob in probs:
            prob = dataclasses.replace(prob, objective=objective, interval_id=gi)
            opt = minimize_interval(prob)
            if gap_best is None or opt.value < gap_best.value - 1e-15:
                gap_best = opt
        gap_optima.append(gap_best)
        if gap_best is not None:
            candidates.append(gap_best)
    if not candidates:
        raise InternalError("sweep produced no candidate intervals")
    best = pick_verified_optimum(poly, tri, s, t, candidates, objective)

    # the objective can jump exactly at event chords (a grazed vertex can
    # extend the chord); evaluate every event on its exact line of sight
    ev_dists = event_line_distances(poly, tri, s, t, decomp.sequence)
    decomp.sequence.line_distances = ev_dists
    result = _assemble(poly, tri, s, t, best, best.problem.interval_id, objective)
    for k, ev in enumerate(decomp.sequence.events):
        rs, rt = ev_dists[k]
        val = objective.combine(rs.distance, rt.distance)
        if val < result.value - 1e-12:
            result = SolveResult(
                value=val,
                s_star=rs.closest_point,
                t_star=rt.closest_point,
                chord=ev.line.chord,
                pivot=ev.line.pivot,
                pivot_index=ev.line.pivot_index,
                path_s=rs.path,
                path_t=rt.path,
                interval_id=max(k - 1, 0),
                theta=ev.theta,
                objective=objective,
            )
    return result, decomp.sequence, gap_optima


def event_line_distances(poly, tri, s, t, seq):
    """Geodesic distances from s and t to every event's exact line of sight."""
    out = []
    for ev in seq.events:
        rs = distance_to_segment(poly, tri, s, ev.line.pivot, ev.line.x_minus)
        rt = distance_to_segment(poly, tri, t, ev.line.pivot, ev.line.x_plus)
        out.append((rs, rt))
    return out


def pick_verified_optimum(
    poly, tri, s, t, candidates: list[LocalOptimum], objective
) -> LocalOptimum:
    """Rank interval optima, verifying the winner against true geometry.

    A winner whose interval structure was stale (a missed micro-split) is
    re-minimized honestly and the ranking repeats until the winner survives.
    """
    candidates = list(candidates)

    def rank_key(o: LocalOptimum):
        return (o.value, o.problem.interval_id, o.theta)

    for _ in range(len(candidates) + 8):
        candidates.sort(key=rank_key)
        best = candidates[0]
        prob = best.problem
        phi = prob.side_s.ray_base + prob.side_s.sweep_sign * best.offset
        tv, _rs, _rt, _c = _true_eval(poly, tri, s, t, prob.pivot, phi, objective)
        if abs(tv - best.value) <= 1e-9 * max(1.0, abs(tv)):
            return best
        candidates[0] = _true_minimize(poly, tri, s, t, prob, objective)
    raise InternalError("interval verification failed to converge")


def solve(
    poly: SimplePolygon,
    s: Point,
    t: Point,
    objective: Objective,
    tri: Triangulation | None = None,
) -> SolveResult:
    """Minimum travel for s and t to see each other, with witnesses."""
    result, _seq, _optima = solve_with_trace(poly, s, t, objective, tri=tri)
    return result
