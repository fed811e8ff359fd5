"""Random polygon and point generators for tests, demos, and benchmarks."""

from __future__ import annotations

import math
import random

from .polygon import SimplePolygon, validate_and_normalize
from .predicates import Point, segments_intersect
from .triangulate import Triangulation


def random_simple_polygon(n: int, rng: random.Random) -> SimplePolygon:
    """Simple polygon through n random points, untangled by 2-opt moves.

    Reversing a sub-chain at a crossing strictly shortens the tour, so the
    untangling terminates.  Intended for modest n (the scan is quadratic).
    """
    while True:
        pts = [(rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)) for _ in range(n)]
        if len(set(pts)) < n:
            continue
        order = list(range(n))
        rng.shuffle(order)
        verts = [pts[i] for i in order]
        if _untangle(verts):
            try:
                return validate_and_normalize(verts)
            except Exception:
                continue


def _untangle(verts: list[Point], max_rounds: int = 10000) -> bool:
    n = len(verts)
    for _ in range(max_rounds):
        crossed = False
        for i in range(n):
            a, b = verts[i], verts[(i + 1) % n]
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                c, d = verts[j], verts[(j + 1) % n]
                if segments_intersect(a, b, c, d).kind != "none":
                    lo, hi = i + 1, j
                    verts[lo : hi + 1] = reversed(verts[lo : hi + 1])
                    crossed = True
                    break
            if crossed:
                break
        if not crossed:
            return True
    return False


def jittered_star_polygon(
    n: int, rng: random.Random, r_min: float = 0.25, r_max: float = 1.0
) -> SimplePolygon:
    """Star-shaped polygon with heavy radius jitter; simple by construction.

    Scales to large n; plenty of reflex vertices for geodesic stress tests.
    """
    angles = sorted(rng.uniform(0.0, 2.0 * math.pi) for _ in range(n))
    for i in range(1, n):
        if angles[i] - angles[i - 1] < 1e-9:
            angles[i] = angles[i - 1] + 1e-9
    verts = []
    for a in angles:
        r = rng.uniform(r_min, r_max)
        verts.append((r * math.cos(a), r * math.sin(a)))
    return validate_and_normalize(verts)


def random_convex_polygon(n: int, rng: random.Random) -> SimplePolygon:
    """Uniform random convex polygon with n vertices (Valtr's construction)."""
    while True:
        xs = sorted(rng.random() for _ in range(n))
        ys = sorted(rng.random() for _ in range(n))

        def chains(vals):
            lo, hi = vals[0], vals[-1]
            last_lo, last_hi = lo, lo
            deltas = []
            for v in vals[1:-1]:
                if rng.random() < 0.5:
                    deltas.append(v - last_lo)
                    last_lo = v
                else:
                    deltas.append(last_hi - v)
                    last_hi = v
            deltas.append(hi - last_lo)
            deltas.append(last_hi - hi)
            return deltas

        dx = chains(xs)
        dy = chains(ys)
        rng.shuffle(dy)
        vec = sorted(zip(dx, dy), key=lambda v: math.atan2(v[1], v[0]))
        x = y = 0.0
        verts = []
        for vx, vy in vec:
            verts.append((x, y))
            x += vx
            y += vy
        try:
            return validate_and_normalize(verts)
        except Exception:
            continue


def random_interior_point(
    poly: SimplePolygon, tri: Triangulation, rng: random.Random
) -> Point:
    """Point inside the polygon, sampled uniformly by triangle area."""
    vs = poly.vertices
    areas = []
    for a, b, c in tri.triangles:
        (ax, ay), (bx, by), (cx, cy) = vs[a], vs[b], vs[c]
        areas.append(0.5 * abs((bx - ax) * (cy - ay) - (by - ay) * (cx - ax)))
    total = sum(areas)
    pick = rng.uniform(0.0, total)
    acc = 0.0
    idx = len(areas) - 1
    for k, ar in enumerate(areas):
        acc += ar
        if pick <= acc:
            idx = k
            break
    a, b, c = tri.triangles[idx]
    u, v = rng.random(), rng.random()
    if u + v > 1.0:
        u, v = 1.0 - u, 1.0 - v
    # keep samples off the triangle boundary
    u = 0.002 + 0.996 * u
    v = 0.002 + 0.996 * v * (1.0 - u) / max(1.0 - u, 1e-12)
    w = 1.0 - u - v
    (ax, ay), (bx, by), (cx, cy) = vs[a], vs[b], vs[c]
    return (w * ax + u * bx + v * cx, w * ay + u * by + v * cy)
