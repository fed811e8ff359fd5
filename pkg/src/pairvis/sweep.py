"""Rotational line-of-sight sweep: event enumeration along pi(s, t).

The line-of-sight rotates around each interior path vertex from the chord
through the incoming path edge to the chord through the outgoing one.
Path events bound each pivot's rotation; boundary events come from the
shortest-path-tree children of the pivot (the only vertices the rotating
chord can meet, by the sweep's region properties); bend events and other
structure changes are found by adaptive refinement: each candidate interval
is probed by exact geodesic computations at its midpoint and split at the
closed-form angles where that structure can expire.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from .errors import DegenerateInput, InternalError
from .geodesic import GeodesicPath, ShortestPathTree, distance_to_segment, shortest_path
from .intervalopt import IntervalProblem, SideStructure
from .objective import Objective
from .polygon import SimplePolygon
from .predicates import Point, dist, ray_line_param, sub
from .topology import Chord, Location, locate_point, maximal_chord, ray_shoot
from .triangulate import Triangulation

TWO_PI = 2.0 * math.pi
_TOL = 1e-12

KIND_PRIORITY = {"path": 0, "boundary": 1, "bend_t1": 2, "bend_t2": 3}


@dataclass(frozen=True)
class LineOfSight:
    """Maximal chord tangent to pi(s,t) at a pivot, split at the pivot."""

    pivot: Point
    pivot_index: int
    minus_dir: Point       # ray direction of the half-chord on the s side
    x_minus: Point
    x_plus: Point
    chord: Chord

    @property
    def minus_part(self) -> tuple[Point, Point]:
        return (self.pivot, self.x_minus)

    @property
    def plus_part(self) -> tuple[Point, Point]:
        return (self.pivot, self.x_plus)


@dataclass(frozen=True)
class SweepEvent:
    kinds: tuple[str, ...]
    pivot_index: int
    offset: float          # rotation offset within the pivot, in [0, |delta|]
    order: float           # global sweep position (cumulative rotation)
    phi: float             # minus-side ray angle
    line: LineOfSight
    x: Point               # endpoint swept by the generating side
    x_tilde: Point
    gen_vertex: int = -1   # polygon vertex for boundary events
    side: str = ""         # '+', '-' or '' (path events)

    @property
    def kind(self) -> str:
        return self.kinds[0]

    @property
    def theta(self) -> float:
        return self.phi % math.pi


@dataclass
class PivotFrame:
    index: int             # position in the path vertex sequence
    point: Point
    vertex: int            # polygon vertex index
    phi_start: float
    delta: float           # signed rotation; sign = turn direction
    prev_point: Point
    next_point: Point
    loc: Location
    cum_start: float = 0.0

    @property
    def sweep_sign(self) -> float:
        return 1.0 if self.delta >= 0 else -1.0

    @property
    def span(self) -> float:
        return abs(self.delta)

    def phi_at(self, offset: float) -> float:
        return self.phi_start + self.sweep_sign * offset


@dataclass
class EventSequence:
    events: list[SweepEvent]
    frames: list[PivotFrame]
    path: GeodesicPath
    line_distances: list | None = None   # per-event (s-side, t-side) results

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)


@dataclass
class SweepDecomposition:
    """Event sequence plus the structure-constant leaf intervals per gap."""

    sequence: EventSequence
    gaps: list[list[IntervalProblem]]   # aligned with consecutive event pairs


def _norm_angle(a: float) -> float:
    return a % TWO_PI


def _signed_delta(a_from: float, a_to: float) -> float:
    d = (a_to - a_from) % TWO_PI
    if d > math.pi:
        d -= TWO_PI
    return d


def build_frames(poly: SimplePolygon, tri: Triangulation, path: GeodesicPath):
    pts = path.points
    k = len(pts) - 1
    vindex = {p: i for i, p in enumerate(poly.vertices)}
    frames = []
    cum = 0.0
    for i in range(1, k):
        v = pts[i]
        if v not in vindex:
            raise InternalError("interior path vertex is not a polygon vertex")
        phi_start = math.atan2(pts[i - 1][1] - v[1], pts[i - 1][0] - v[0])
        phi_end = math.atan2(v[1] - pts[i + 1][1], v[0] - pts[i + 1][0])
        delta = _signed_delta(phi_start, phi_end)
        frame = PivotFrame(
            i, v, vindex[v], phi_start, delta, pts[i - 1], pts[i + 1],
            locate_point(poly, tri, v), cum,
        )
        cum += frame.span
        frames.append(frame)
    return frames


def _line_of_sight(
    poly, tri, frame: PivotFrame, d: Point | None = None,
    through: Point | None = None, minus_through: bool = True,
) -> LineOfSight:
    """Line of sight at the pivot; exact through-point headings preferred."""
    if through is not None:
        chord = maximal_chord(poly, tri, frame.point, loc=frame.loc, through=through)
        if minus_through:
            x_minus, x_plus = chord.b, chord.a
            minus_dir = sub(through, frame.point)
        else:
            x_minus, x_plus = chord.a, chord.b
            minus_dir = sub(frame.point, through)
    else:
        chord = maximal_chord(poly, tri, frame.point, d, frame.loc)
        x_minus, x_plus = chord.b, chord.a
        minus_dir = d
    return LineOfSight(frame.point, frame.index, minus_dir, x_minus, x_plus, chord)


def _offset_in_frame(frame: PivotFrame, phi_minus: float) -> float | None:
    off = ((phi_minus - frame.phi_start) * frame.sweep_sign) % TWO_PI
    if off > frame.span + 1e-9:
        if off > TWO_PI - 1e-9:
            off = 0.0
        else:
            return None
    return min(off, frame.span)


def compute_path_and_boundary_events(
    poly: SimplePolygon,
    tri: Triangulation,
    s: Point,
    t: Point,
    path: GeodesicPath,
    spt_s: ShortestPathTree,
    spt_t: ShortestPathTree,
    visible: bool | None = None,
) -> EventSequence:
    """All path events plus boundary events, in rotational sweep order."""
    from .topology import is_visible

    if visible is None:
        visible = is_visible(poly, tri, s, t)
    if visible:
        raise DegenerateInput("s and t are mutually visible; no sweep needed")
    pts = path.points
    if len(pts) < 3:
        raise InternalError("invisible pair with a direct geodesic")
    frames = build_frames(poly, tri, path)
    events: list[SweepEvent] = []
    vindex = {p: i for i, p in enumerate(poly.vertices)}

    for frame in frames:
        # path event at the start of this pivot's rotation: the chord holds
        # the incoming path edge; the heading through it is exact
        los = _line_of_sight(poly, tri, frame, through=frame.prev_point)
        events.append(
            SweepEvent(
                ("path",), frame.index, 0.0, frame.cum_start,
                frame.phi_start, los, los.x_plus, los.x_minus,
            )
        )
        # boundary events: tree children of the pivot, filtered to the cone
        # actually swept by the corresponding half-chord
        for spt, side in ((spt_s, "+"), (spt_t, "-")):
            for child in spt.children_of(frame.vertex):
                cp = poly.vertices[child]
                if cp in (frame.prev_point, frame.next_point):
                    continue
                if side == "+":
                    dvec = (frame.point[0] - cp[0], frame.point[1] - cp[1])
                else:
                    dvec = (cp[0] - frame.point[0], cp[1] - frame.point[1])
                phi_minus = math.atan2(dvec[1], dvec[0])
                off = _offset_in_frame(frame, phi_minus)
                if off is None or off <= _TOL or off >= frame.span - _TOL:
                    continue
                los = _line_of_sight(
                    poly, tri, frame, through=cp, minus_through=(side == "-")
                )
                x, xt = (los.x_plus, los.x_minus) if side == "+" else (
                    los.x_minus, los.x_plus
                )
                events.append(
                    SweepEvent(
                        ("boundary",), frame.index, off, frame.cum_start + off,
                        frame.phi_at(off), los, x, xt, gen_vertex=child, side=side,
                    )
                )
    # closing path event: the chord through the last path edge into t
    last = frames[-1]
    los = _line_of_sight(poly, tri, last, through=pts[-1], minus_through=False)
    events.append(
        SweepEvent(
            ("path",), last.index, last.span, last.cum_start + last.span,
            last.phi_at(last.span), los, los.x_plus, los.x_minus,
        )
    )
    events.sort(key=lambda e: (e.order, KIND_PRIORITY[e.kind]))
    return EventSequence(_dedupe(events), frames, path)


def _dedupe(events: list[SweepEvent]) -> list[SweepEvent]:
    """Merge events at coincident sweep positions, kind flags combined."""
    out: list[SweepEvent] = []
    for ev in events:
        if out and abs(ev.order - out[-1].order) <= _TOL:
            prev = out[-1]
            kinds = tuple(
                sorted(set(prev.kinds) | set(ev.kinds), key=KIND_PRIORITY.get)
            )
            keep = prev if KIND_PRIORITY[prev.kind] <= KIND_PRIORITY[ev.kind] else ev
            out[-1] = SweepEvent(
                kinds, keep.pivot_index, keep.offset, keep.order, keep.phi,
                keep.line, keep.x, keep.x_tilde,
                gen_vertex=max(prev.gen_vertex, ev.gen_vertex),
                side=keep.side or prev.side or ev.side,
            )
        else:
            out.append(ev)
    return out


# ---------------------------------------------------------------------------
# adaptive refinement between events

class _SweepContext:
    def __init__(self, poly, tri, s, t):
        self.poly = poly
        self.tri = tri
        self.s = s
        self.t = t
        self.probes = 0
        self.budget = 0
        self._path_cache: dict = {}

    def probe_side(self, frame: PivotFrame, offset: float, which: str) -> SideStructure:
        """Exact geodesic structure of one side at a probe angle."""
        self.probes += 1
        sign = 1.0 if which == "-" else -1.0
        phi = frame.phi_at(offset)
        d = (sign * math.cos(phi), sign * math.sin(phi))
        hit = ray_shoot(self.poly, self.tri, frame.point, d, frame.loc)
        source = self.s if which == "-" else self.t
        res = distance_to_segment(self.poly, self.tri, source, frame.point, hit.point)
        ppts = res.path.points
        u = res.anchor
        if len(ppts) >= 2 and ppts[-1] == res.closest_point and ppts[-2] == u:
            prev_idx = len(ppts) - 3
        else:
            prev_idx = len(ppts) - 2
        u_prev = ppts[prev_idx] if prev_idx >= 0 else None
        prefix = res.distance - dist(u, res.closest_point)
        if hit.kind == "edge":
            a, b = self.poly.edge(hit.edge)
            carrier = (a, sub(b, a))
            fixed = None
        else:
            carrier = None
            fixed = hit.point
        scale = max(abs(res.closest_point[0]) + abs(res.closest_point[1]), 1.0)
        if dist(res.closest_point, hit.point) <= 1e-9 * scale:
            kind = "endpoint"
        elif dist(res.closest_point, frame.point) <= 1e-9 * scale:
            kind = "pivot"
        else:
            kind = "foot"
        ray_base = frame.phi_start if which == "-" else frame.phi_start + math.pi
        return SideStructure(
            anchor=u,
            anchor_prev=u_prev,
            prefix=prefix,
            ray_base=ray_base,
            sweep_sign=frame.sweep_sign,
            carrier=carrier,
            fixed_end=fixed,
            path_points=ppts,
            kind=kind,
        )


def _perp_ray_angles(a: Point, b: Point) -> tuple[float, float]:
    base = math.atan2(b[1] - a[1], b[0] - a[0]) + 0.5 * math.pi
    return base, base + math.pi


def _side_offsets_from_angle(S: SideStructure, phi: float, lo, hi) -> list[float]:
    outs = []
    raw = (phi - S.ray_base) * S.sweep_sign
    base = raw % TWO_PI
    for cand in (base, base - TWO_PI, base + TWO_PI):
        if lo + _TOL < cand < hi - _TOL:
            outs.append(cand)
    return outs


def _split_candidates(ctx, frame, S: SideStructure, lo, hi) -> list[float]:
    """Sweep offsets inside (lo, hi) where structure S can expire."""
    v = frame.point
    out: list[float] = []

    def add_point_angle(p: Point):
        phi = math.atan2(p[1] - v[1], p[0] - v[0])
        out.extend(_side_offsets_from_angle(S, phi, lo, hi))

    def add_perp(a: Point, b: Point):
        if a == b:
            return
        for phi in _perp_ray_angles(a, b):
            out.extend(_side_offsets_from_angle(S, phi, lo, hi))

    u = S.anchor
    if S.carrier is not None:
        q, m = S.carrier
        add_point_angle(q)
        add_point_angle((q[0] + m[0], q[1] + m[1]))
    if S.anchor_prev is not None:
        add_perp(S.anchor_prev, u)        # anchor drop (bend T2)
        if S.carrier is not None:
            # sliding endpoint crossing the line through the last two path
            # vertices (anchor drop in the endpoint regime)
            q, m = S.carrier
            dd = sub(u, S.anchor_prev)
            r = ray_line_param(S.anchor_prev, dd, q, m)
            if math.isfinite(r):
                z = (S.anchor_prev[0] + r * dd[0], S.anchor_prev[1] + r * dd[1])
                add_point_angle(z)
    # anchor gain toward the pivot (bend T1, perpendicular case)
    nxt = _second_vertex(ctx, u, v)
    if nxt is not None:
        add_perp(u, nxt)
    # anchor gain toward the sliding endpoint
    if S.carrier is not None and S.kind != "pivot":
        xprobe = S.fixed_end
        if xprobe is None and len(S.path_points) >= 1:
            q, m = S.carrier
            dmid = S.ray_dir(0.5 * (lo + hi))
            r = ray_line_param(v, dmid, q, m)
            if math.isfinite(r) and r > 0:
                xprobe = (v[0] + r * dmid[0], v[1] + r * dmid[1])
        if xprobe is not None:
            z = _second_vertex(ctx, u, xprobe)
            if z is not None:
                add_perp(u, z)
    add_perp(u, v)   # foot reaching the pivot end of the half-chord
    # the moving last leg u -> contact can sweep onto a polygon vertex that
    # is on neither geodesic chain yet (the path then gains it); find the
    # collinearity roots for every vertex inside the swept wedge
    out.extend(_vertex_sweep_candidates(ctx, frame, S, lo, hi))
    # contact switching between foot and sliding endpoint: sign changes of
    # foot overshoot, located by safeguarded bisection
    if S.carrier is not None and u != v:
        q, m = S.carrier

        def overshoot(off):
            d = S.ray_dir(off)
            w = (u[0] - v[0]) * d[0] + (u[1] - v[1]) * d[1]
            r = ray_line_param(v, d, q, m)
            if not math.isfinite(r) or r < 0.0:
                r = 0.0
            return w - r

        samples = 9
        prev_o = lo
        prev_g = overshoot(lo)
        for k in range(1, samples + 1):
            o = lo + (hi - lo) * k / samples
            g = overshoot(o)
            if prev_g == 0.0:
                pass
            elif prev_g * g < 0.0:
                try:
                    root = brentq(overshoot, prev_o, o, xtol=1e-13)
                    if lo + _TOL < root < hi - _TOL:
                        out.append(float(root))
                except ValueError:
                    pass
            prev_o, prev_g = o, g
    return out


def _vertex_sweep_candidates(ctx, frame, S: SideStructure, lo, hi) -> list[float]:
    """Offsets where the segment from the anchor to the moving contact point
    becomes collinear with some polygon vertex inside the swept wedge."""
    import numpy as np

    from .intervalopt import side_distance

    u = S.anchor
    v = frame.point
    _, c_lo = side_distance(S, v, lo)
    _, c_hi = side_distance(S, v, hi)
    if c_lo == u or c_hi == u:
        return []
    verts = ctx.poly.as_array
    ux, uy = u
    # vertices straddling the wedge between u->c_lo and u->c_hi, not behind
    ax, ay = c_lo[0] - ux, c_lo[1] - uy
    bx, by = c_hi[0] - ux, c_hi[1] - uy
    zx, zy = verts[:, 0] - ux, verts[:, 1] - uy
    s_a = ax * zy - ay * zx
    s_b = bx * zy - by * zx
    fwd = zx * (ax + bx) + zy * (ay + by)
    reach2 = max(ax * ax + ay * ay, bx * bx + by * by) * 1.04 + 1e-12
    mask = (s_a * s_b <= 0.0) & (fwd > 0.0) & (zx * zx + zy * zy < reach2)
    idx = np.nonzero(mask)[0]
    if idx.size == 0:
        return []
    skip = set(S.path_points)
    skip.add(v)
    out = []
    for zi in idx:
        z = ctx.poly.vertices[int(zi)]
        if z in skip or z == u:
            continue

        def collin(off, z=z):
            _, c = side_distance(S, v, off)
            return (z[0] - u[0]) * (c[1] - u[1]) - (z[1] - u[1]) * (c[0] - u[0])

        g0 = collin(lo)
        samples = 8
        prev_o, prev_g = lo, g0
        for k in range(1, samples + 1):
            o = lo + (hi - lo) * k / samples
            g = collin(o)
            if prev_g * g < 0.0:
                try:
                    root = brentq(collin, prev_o, o, xtol=1e-13)
                    if lo + _TOL < root < hi - _TOL:
                        out.append(float(root))
                except ValueError:
                    pass
            prev_o, prev_g = o, g
    return out


def _second_vertex(ctx, u: Point, target: Point) -> Point | None:
    """Second vertex of pi(u, target), or None when the geodesic is direct."""
    if u == target:
        return None
    key = (u, target)
    if key in ctx._path_cache:
        return ctx._path_cache[key]
    gp = shortest_path(ctx.poly, ctx.tri, u, target)
    res = gp.points[1] if len(gp.points) >= 3 else None
    ctx._path_cache[key] = res
    return res


def _refine(ctx, frame, lo, hi, depth, leaves):
    mid = 0.5 * (lo + hi)
    Ss = ctx.probe_side(frame, mid, "-")
    St = ctx.probe_side(frame, mid, "+")
    ctx.budget -= 1
    if hi - lo <= 1e-10 or depth >= 10 or ctx.budget <= 0:
        leaves.append((lo, hi, Ss, St))
        return
    margin = max(_TOL, 1e-9 * (hi - lo))
    splits = []
    for S in (Ss, St):
        for off in _split_candidates(ctx, frame, S, lo, hi):
            if lo + margin < off < hi - margin:
                splits.append(off)
    if not splits:
        leaves.append((lo, hi, Ss, St))
        return
    # merge near-coincident cuts so numeric drift cannot cascade
    cuts = []
    for c in sorted(splits):
        if not cuts or c - cuts[-1] > margin:
            cuts.append(c)
    prev = lo
    for c in cuts + [hi]:
        if c - prev > _TOL:
            _refine(ctx, frame, prev, c, depth + 1, leaves)
        prev = c


def _structures_differ(a: SideStructure, b: SideStructure) -> str | None:
    if a.anchor != b.anchor:
        if len(b.path_points) > len(a.path_points):
            return "bend_t1"
        if len(b.path_points) < len(a.path_points):
            return "bend_t2"
        return "bend_t1"
    if a.carrier != b.carrier or a.fixed_end != b.fixed_end:
        return "boundary"
    return None


def compute_bend_events(
    poly: SimplePolygon,
    tri: Triangulation,
    s: Point,
    t: Point,
    path: GeodesicPath,
    partial: EventSequence,
) -> SweepDecomposition:
    """Refine every gap between consecutive events; insert bend events where
    the tracked geodesic structures change, and keep the leaf intervals."""
    ctx = _SweepContext(poly, tri, s, t)
    frames = {f.index: f for f in partial.frames}
    events = list(partial.events)
    all_events: list[SweepEvent] = []
    gaps: list[list[IntervalProblem]] = []
    new_events: list[SweepEvent] = []

    per_gap_leaves: list[tuple[int, list]] = []
    for gi in range(len(events) - 1):
        ev0, ev1 = events[gi], events[gi + 1]
        if ev0.pivot_index == ev1.pivot_index:
            frame = frames[ev0.pivot_index]
            lo, hi = ev0.offset, ev1.offset
        elif ev1.pivot_index == ev0.pivot_index + 1 and ev1.offset <= _TOL:
            # gap spans the tail of ev0's pivot
            frame = frames[ev0.pivot_index]
            lo, hi = ev0.offset, frame.span
        else:
            raise InternalError("non-adjacent events in sweep order")
        leaves: list = []
        if hi - lo > _TOL:
            ctx.budget = 64
            _refine(ctx, frame, lo, hi, 0, leaves)
        per_gap_leaves.append((gi, leaves))
        probs = []
        prev_leaf = None
        for (llo, lhi, Ss, St) in leaves:
            probs.append(
                IntervalProblem(
                    frame.point, llo, lhi, Ss, St, Objective("minmax"),
                    pivot_index=frame.index,
                )
            )
            if prev_leaf is not None:
                kind = _structures_differ(prev_leaf[2], Ss)
                kind_t = _structures_differ(prev_leaf[3], St)
                chosen = None
                side = ""
                if kind is not None:
                    chosen, side = kind, "-"
                if kind_t is not None and (chosen is None or KIND_PRIORITY[kind_t] < KIND_PRIORITY[chosen]):
                    chosen, side = kind_t, "+"
                if chosen is not None:
                    off = llo
                    phi = frame.phi_at(off)
                    dvec = (math.cos(phi), math.sin(phi))
                    los = _line_of_sight(poly, tri, frame, dvec)
                    x, xt = (los.x_minus, los.x_plus) if side == "-" else (
                        los.x_plus, los.x_minus
                    )
                    new_events.append(
                        SweepEvent(
                            (chosen,), frame.index, off, frame.cum_start + off,
                            phi, los, x, xt, side=side,
                        )
                    )
            prev_leaf = (llo, lhi, Ss, St)
        gaps.append(probs)

    merged = sorted(
        events + new_events, key=lambda e: (e.order, KIND_PRIORITY[e.kind])
    )
    seq = EventSequence(_dedupe(merged), partial.frames, path)
    return SweepDecomposition(seq, gaps)
