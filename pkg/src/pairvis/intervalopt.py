"""Minimization of the objective over one structure-constant chord interval.

Between two consecutive sweep events the rotating chord keeps, per side, a
fixed geodesic anchor u, a fixed prefix length, and a fixed boundary edge
under the sliding chord endpoint.  The last-leg distance is then the
point-to-segment distance from u to the half-chord, whose branches are a
trigonometric line distance (perpendicular foot) and a distance to a point
sliding along the carrier edge.  Interval minima come from a closed-form
candidate set plus safeguarded scalar refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq, minimize_scalar

from .errors import EmptyInterval
from .objective import Objective
from .predicates import Point, dist, ray_line_param, sub

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SideStructure:
    """Per-side constant data on one interval.

    ray_base/sweep_sign map sweep offsets to this side's half-chord ray
    angle; carrier is (point, direction) of the boundary edge under the
    sliding endpoint, or None when the endpoint rests on a vertex.
    """

    anchor: Point
    anchor_prev: Point | None
    prefix: float
    ray_base: float
    sweep_sign: float
    carrier: tuple[Point, Point] | None
    fixed_end: Point | None = None     # chord end pinned at a vertex
    path_points: tuple[Point, ...] = ()
    kind: str = "foot"     # dominant contact at the probe: foot|endpoint|pivot

    def ray_dir(self, offset: float) -> Point:
        a = self.ray_base + self.sweep_sign * offset
        return (math.cos(a), math.sin(a))


@dataclass(frozen=True)
class IntervalProblem:
    pivot: Point
    lo: float              # sweep offsets, lo < hi
    hi: float
    side_s: SideStructure
    side_t: SideStructure
    objective: Objective
    pivot_index: int = -1
    interval_id: int = -1


@dataclass(frozen=True)
class LocalOptimum:
    offset: float
    theta: float           # chord angle in [0, pi)
    value: float
    d_s: float
    d_t: float
    s_star: Point
    t_star: Point
    achieved_at: str       # 'interior' | 'left-endpoint' | 'right-endpoint'
    problem: IntervalProblem


def _side_reach(side: SideStructure, v: Point, d: Point) -> float:
    """Chord extent from the pivot along this side's ray."""
    if side.carrier is None:
        if side.fixed_end is not None:
            return dist(side.fixed_end, v)
        return 0.0
    q, m = side.carrier
    r = ray_line_param(v, d, q, m)
    if not math.isfinite(r) or r < 0.0:
        return 0.0
    return r


def side_distance(side: SideStructure, v: Point, offset: float):
    """(total distance, contact point) for one side at a sweep offset."""
    d = side.ray_dir(offset)
    u = side.anchor
    r = _side_reach(side, v, d)
    w = (u[0] - v[0]) * d[0] + (u[1] - v[1]) * d[1]
    tf = min(max(w, 0.0), r)
    contact = (v[0] + tf * d[0], v[1] + tf * d[1])
    return side.prefix + dist(u, contact), contact


def evaluate_at(prob: IntervalProblem, offset: float):
    """Exact per-side distances and witness points at a sweep offset."""
    ds, s_star = side_distance(prob.side_s, prob.pivot, offset)
    dt, t_star = side_distance(prob.side_t, prob.pivot, offset)
    return ds, dt, s_star, t_star


def _objective_value(prob: IntervalProblem, offset: float) -> float:
    ds, dt, _, _ = evaluate_at(prob, offset)
    return prob.objective.combine(ds, dt)


def _solve_asinx_bcosx(a: float, b: float, c: float) -> list[float]:
    """All x in [0, 2pi) with a*sin(x) + b*cos(x) = c."""
    r = math.hypot(a, b)
    if r < 1e-300 or abs(c) > r:
        return []
    base = math.atan2(b, a)
    s = math.asin(max(-1.0, min(1.0, c / r)))
    outs = []
    for x in (s - base, math.pi - s - base):
        outs.append(x % TWO_PI)
    return outs


def _foot_candidates(side: SideStructure, v: Point) -> list[float]:
    """Ray angles (as offsets) where the foot-branch is stationary or zero.

    The line distance is |K sin(phi - chi)| with chi the angle of u - v:
    zeros at chi mod pi, stationary points at chi + pi/2 mod pi.
    """
    u = side.anchor
    if u == v:
        return []
    chi = math.atan2(u[1] - v[1], u[0] - v[0])
    return [chi, chi + 0.5 * math.pi, chi + math.pi, chi + 1.5 * math.pi]


def _offsets_from_ray_angle(side: SideStructure, phi: float, lo, hi) -> list[float]:
    """Map a ray angle to sweep offsets within [lo, hi]."""
    outs = []
    raw = (phi - side.ray_base) * side.sweep_sign
    base = raw % TWO_PI
    for cand in (base, base - TWO_PI, base + TWO_PI):
        if lo - 1e-15 <= cand <= hi + 1e-15:
            outs.append(min(max(cand, lo), hi))
    return outs


def _balance_candidates(prob: IntervalProblem) -> list[float]:
    """Closed-form balance points for max-type objectives, foot-foot case.

    With both feet interior the side distances are |Ki sin(phi_i - chi_i)|;
    per sign pattern the balance w_s*ds + c_s = w_t*dt + c_t reduces to
    a*sin + b*cos = c in the minus-side ray angle.
    """
    obj = prob.objective
    if obj.is_sum:
        return []
    v = prob.pivot
    s1, s2 = prob.side_s, prob.side_t
    u1, u2 = s1.anchor, s2.anchor
    # line distance of side i in terms of the minus-side ray angle phi:
    # side s rays at phi, side t rays at phi + pi (same line)
    a1, b1 = (u1[1] - v[1]), -(u1[0] - v[0])  # |a1 cos + b1 sin| ~ cross(u-v, d)
    a2, b2 = (u2[1] - v[1]), -(u2[0] - v[0])
    w1 = obj.weight_s
    w2 = obj.weight_t
    c1 = obj.offset_s + w1 * s1.prefix
    c2 = obj.offset_t + w2 * s2.prefix
    outs = []
    for sg1 in (1.0, -1.0):
        for sg2 in (1.0, -1.0):
            # w1*sg1*(a1 cos + b1 sin) + c1 = w2*sg2*(a2 cos + b2 sin) + c2
            A = w1 * sg1 * b1 - w2 * sg2 * b2
            B = w1 * sg1 * a1 - w2 * sg2 * a2
            C = c2 - c1
            for phi in _solve_asinx_bcosx(A, B, C):
                outs.extend(_offsets_from_ray_angle(s1, phi, prob.lo, prob.hi))
    return outs


def _minsum_candidates(prob: IntervalProblem) -> list[float]:
    """Closed-form stationary points of the foot-foot sum."""
    if not prob.objective.is_sum:
        return []
    v = prob.pivot
    s1, s2 = prob.side_s, prob.side_t
    u1, u2 = s1.anchor, s2.anchor
    a1, b1 = (u1[1] - v[1]), -(u1[0] - v[0])
    a2, b2 = (u2[1] - v[1]), -(u2[0] - v[0])
    outs = []
    for sg1 in (1.0, -1.0):
        for sg2 in (1.0, -1.0):
            # d/dphi [sg1(a1 cos + b1 sin) + sg2(a2 cos + b2 sin)] = 0
            A = sg1 * b1 + sg2 * b2   # coefficient of cos in the derivative
            B = -(sg1 * a1 + sg2 * a2)
            for phi in _solve_asinx_bcosx(B, A, 0.0):
                outs.extend(_offsets_from_ray_angle(s1, phi, prob.lo, prob.hi))
    return outs


def minimize_interval(prob: IntervalProblem) -> LocalOptimum:
    """Global minimum of the objective over the closed offset interval."""
    lo, hi = prob.lo, prob.hi
    if hi < lo:
        raise EmptyInterval(f"empty interval [{lo}, {hi}]")
    cands = {lo, hi}
    if hi > lo:
        for side in (prob.side_s, prob.side_t):
            for phi in _foot_candidates(side, prob.pivot):
                for off in _offsets_from_ray_angle(side, phi, lo, hi):
                    cands.add(off)
        for off in _balance_candidates(prob):
            cands.add(off)
        for off in _minsum_candidates(prob):
            cands.add(off)
        # dense scan + safeguarded refinement catches endpoint-branch minima
        grid = 48
        vals = []
        for k in range(grid + 1):
            o = lo + (hi - lo) * k / grid
            vals.append((_objective_value(prob, o), o))
        brackets = [
            (vals[k - 1][1], vals[k + 1][1])
            for k in range(1, grid)
            if vals[k][0] <= vals[k - 1][0] and vals[k][0] <= vals[k + 1][0]
        ]
        # minima can hide inside the first/last cell without a grid bracket
        brackets.append((vals[0][1], vals[1][1]))
        brackets.append((vals[grid - 1][1], vals[grid][1]))
        for blo, bhi in brackets:
            if bhi <= blo:
                continue
            res = minimize_scalar(
                lambda o: _objective_value(prob, o),
                bounds=(blo, bhi),
                method="bounded",
                options={"xatol": 1e-13},
            )
            cands.add(float(res.x))
        # balance roots of the actual (clamped) sides for max objectives
        if not prob.objective.is_sum:
            obj = prob.objective

            def gap(o):
                ds, dtv, _, _ = evaluate_at(prob, o)
                return (obj.weight_s * ds + obj.offset_s) - (
                    obj.weight_t * dtv + obj.offset_t
                )

            g_prev = gap(vals[0][1])
            for k in range(1, grid + 1):
                g_now = gap(vals[k][1])
                if g_prev == 0.0:
                    cands.add(vals[k - 1][1])
                elif g_prev * g_now < 0.0:
                    root = brentq(gap, vals[k - 1][1], vals[k][1], xtol=1e-14)
                    cands.add(float(root))
                g_prev = g_now

    best = None
    for o in sorted(cands):
        ds, dtv, s_star, t_star = evaluate_at(prob, o)
        val = prob.objective.combine(ds, dtv)
        phi = prob.side_s.ray_base + prob.side_s.sweep_sign * o
        theta = phi % math.pi
        if (
            best is None
            or val < best[0] - 1e-15
            or (abs(val - best[0]) <= 1e-15 and theta < best[1])
        ):
            best = (val, theta, o, ds, dtv, s_star, t_star)
    val, theta, o, ds, dtv, s_star, t_star = best
    if o <= lo + 1e-14:
        where = "left-endpoint"
    elif o >= hi - 1e-14:
        where = "right-endpoint"
    else:
        where = "interior"
    return LocalOptimum(o, theta, val, ds, dtv, s_star, t_star, where, prob)
