"""Independent baselines for the DP: brute-force optima and a greedy upper bound.

Two brute-force levels exist. ``exhaustive`` assumes nothing about optimal
shapes and searches n-subsets of a bounded grid with branch and bound; it
is only feasible for tiny n. ``profile`` scans every town whose columns are
contiguous and centered by parity, with unimodal heights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .geometry import CITY, OBJECTIVES, TOWN, Town, axis_costs, canonical_form, cost as shape_cost

EXHAUSTIVE = "exhaustive"
PROFILE = "profile"
LEVEL_MAX_N = {EXHAUSTIVE: 6, PROFILE: 24}


@dataclass
class OracleResult:
    n: int
    objective: str
    cost: Fraction
    shapes: list[Town] = field(default_factory=list)

    @property
    def multiplicity(self) -> int:
        return len(self.shapes)


def size_bound(n: int) -> int:
    return math.ceil(2 * math.sqrt(n) + 5)


def _greedy_key(p):
    x, y = p
    return (max(abs(x), abs(y)), abs(x) + abs(y), x, y)


def greedy_shape(n: int) -> Town:
    """The n grid points closest to the origin (L-inf shell, then L1, then lexicographic)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    r = math.isqrt(n) + 1
    pts = sorted(((x, y) for x in range(-r, r + 1) for y in range(-r, r + 1)), key=_greedy_key)
    return Town(pts[:n])


def greedy_upper_bound(n: int, objective: str = TOWN) -> tuple[Fraction, Town]:
    shape = greedy_shape(n)
    return shape_cost(shape, objective), shape


# --- profile level ---------------------------------------------------------------


def column_town(heights) -> Town:
    """Columns at x = 0, 1, ...; odd heights centered on y = 0, even ones half a row lower."""
    pts = []
    for x, h in enumerate(heights):
        top = (h - 1) // 2
        pts.extend((x, y) for y in range(top - h + 1, top + 1))
    return Town(pts)


def unimodal_profiles(n: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Height sequences summing to n, each height and the length at most ``bound``,
    nondecreasing then nonincreasing."""

    def rec(prefix, remaining, descending):
        if remaining == 0:
            yield tuple(prefix)
            return
        if len(prefix) >= bound:
            return
        last = prefix[-1] if prefix else 0
        hi = min(bound, remaining)
        if descending:
            hi = min(hi, last)
        for h in range(1, hi + 1):
            prefix.append(h)
            yield from rec(prefix, remaining - h, descending or h < last)
            prefix.pop()

    yield from rec([], n, False)


def enumerate_profiles(n: int, bound: int | None = None) -> Iterator[Town]:
    if n <= 0:
        raise ValueError("n must be positive")
    if bound is None:
        bound = size_bound(n)
    if bound < size_bound(n):
        raise ValueError(f"bound {bound} below the size bound {size_bound(n)}")
    for heights in unimodal_profiles(n, bound):
        yield column_town(heights)


def _cost3(town: Town, objective: str) -> int:
    cx, cy = axis_costs(town)
    c3 = 3 * (cx + cy)
    if objective == CITY:
        sq = sum(len(v) ** 2 for v in town.columns().values()) + sum(len(v) ** 2 for v in town.rows().values())
        c3 += sq // 2
    return c3


def _profile_optimum(n: int, objective: str) -> OracleResult:
    best = None
    shapes: set = set()
    for town in enumerate_profiles(n):
        c3 = _cost3(town, objective)
        if best is None or c3 < best:
            best, shapes = c3, {canonical_form(town)}
        elif c3 == best:
            shapes.add(canonical_form(town))
    return OracleResult(n, objective, Fraction(best, 3), sorted(shapes, key=lambda t: t.points))


# --- exhaustive level ---------------------------------------------------------------


def _pair3(a, b, objective: str) -> int:
    dx = abs(a[0] - b[0])
    dy = abs(a[1] - b[1])
    v = 3 * (dx + dy)
    if objective == CITY:
        v += (dx == 0) + (dy == 0)
    return v


def _nearest_sums(k: int, objective: str) -> int:
    """Lower bound on the summed pair cost from one point to k other distinct points."""
    vals = []
    d = 1
    while len(vals) < k:
        for x in range(-d, d + 1):
            for y in (d - abs(x), -(d - abs(x))) if abs(x) != d else (0,):
                vals.append(_pair3((0, 0), (x, y), objective))
        d += 1
    return sum(sorted(vals)[:k])


def _exhaustive_optimum(n: int, objective: str, smaller: dict[int, int]) -> tuple[int, set]:
    """Branch and bound over subsets containing the origin as lexicographic minimum.

    Every n-subset of the (2B+1)^2 grid is a translate of one of these, so no
    structural property of optimal shapes is assumed. ``smaller`` holds the
    exact optimum (times 3) for every k < n and bounds the cost of the
    points still to be placed.
    """
    span = 2 * size_bound(n)
    cands = sorted((x, y) for x in range(0, span + 1) for y in range(-span, span + 1) if (x, y) > (0, 0))
    self3 = 1 if objective == CITY else 0  # 3 * (half of d'(0)) per point
    ub, _ = greedy_upper_bound(n, objective)
    best = int(ub * 3)
    found: set = set()
    near = {k: _nearest_sums(k, objective) for k in range(n)}
    chosen = [(0, 0)]

    def rec(start: int, partial: int) -> None:
        nonlocal best, found
        m = len(chosen)
        if m == n:
            total = partial + n * self3
            if total < best:
                best, found = total, set()
            if total == best:
                found.add(canonical_form(Town(chosen)))
            return
        rest = n - m - 1
        base = partial + (smaller[rest] - rest * self3 if rest else 0) + (m + 1) * near[rest] + n * self3
        last_x = chosen[-1][0]
        for i in range(start, len(cands)):
            q = cands[i]
            # later candidates are at least as far right as q
            if base + 3 * m * (q[0] - last_x) > best:
                break
            add = 0
            for p in chosen:
                add += _pair3(p, q, objective)
            if base + add > best:
                continue
            chosen.append(q)
            rec(i + 1, partial + add)
            chosen.pop()

    rec(0, 0)
    return best, found


def brute_force_optimum(n: int, objective: str = TOWN, level: str = PROFILE) -> OracleResult:
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if level not in LEVEL_MAX_N:
        raise ValueError(f"unknown oracle level {level!r}")
    if not 1 <= n <= LEVEL_MAX_N[level]:
        raise ValueError(f"n={n} outside the {level} oracle range 1..{LEVEL_MAX_N[level]}")
    if level == PROFILE:
        return _profile_optimum(n, objective)
    smaller = {0: 0}
    for k in range(1, n + 1):
        best, found = _exhaustive_optimum(k, objective, smaller)
        smaller[k] = best
    return OracleResult(n, objective, Fraction(best, 3), sorted(found, key=lambda t: t.points))
