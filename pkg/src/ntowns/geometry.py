"""Cost model and structural predicates for towns and block cities.

A town is a finite set of distinct integer grid points; its cost is half the
sum of all pairwise L1 distances. The block city over the same points
replaces every point by a unit square and integrates L1 distance over the
union. Block-city costs are always multiples of 1/3, so every exact cost in
this package is a :class:`fractions.Fraction` whose denominator divides 3.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

TOWN = "town"
CITY = "city"
OBJECTIVES = (TOWN, CITY)

# Quality constants of continuous shapes (cost / area^2.5).
D_SQUARE = Fraction(2, 3)
D_CIRCLE = 512 / (45 * math.pi**2.5)
PSI = 0.650245952951


class GridPoint(NamedTuple):
    x: int
    y: int


@dataclass(frozen=True)
class Town:
    """Immutable set of distinct grid points, stored sorted."""

    points: tuple[GridPoint, ...]

    def __init__(self, points: Iterable[tuple[int, int]]):
        pts = [GridPoint(int(x), int(y)) for x, y in points]
        if not pts:
            raise ValueError("a town needs at least one point")
        unique = sorted(set(pts))
        if len(unique) != len(pts):
            raise ValueError("town points must be pairwise distinct")
        object.__setattr__(self, "points", tuple(unique))
        object.__setattr__(self, "_point_set", frozenset(unique))

    @property
    def n(self) -> int:
        return len(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p) -> bool:
        return GridPoint(*p) in self._point_set

    def rows(self) -> dict[int, list[int]]:
        """Map y -> sorted x coordinates of that row."""
        out: dict[int, list[int]] = defaultdict(list)
        for x, y in self.points:
            out[y].append(x)
        return {y: sorted(xs) for y, xs in sorted(out.items())}

    def columns(self) -> dict[int, list[int]]:
        """Map x -> sorted y coordinates of that column."""
        out: dict[int, list[int]] = defaultdict(list)
        for x, y in self.points:
            out[x].append(y)
        return {x: sorted(ys) for x, ys in sorted(out.items())}

    def translate(self, dx: int, dy: int) -> Town:
        return Town((x + dx, y + dy) for x, y in self.points)

    def as_lists(self) -> list[list[int]]:
        return [[p.x, p.y] for p in self.points]


@dataclass(frozen=True)
class SymmetryPlacement:
    """Positions of the four alignment lines, all stored doubled.

    ``v_odd2`` is twice the x-coordinate of the line through the centers of
    odd-length rows, ``v_even2`` the same for even-length rows; ``h_odd2``
    and ``h_even2`` are the analogous y-lines for columns.
    """

    v_odd2: int
    v_even2: int
    h_odd2: int
    h_even2: int

    @property
    def v_odd(self) -> Fraction:
        return Fraction(self.v_odd2, 2)

    @property
    def v_even(self) -> Fraction:
        return Fraction(self.v_even2, 2)

    @property
    def h_odd(self) -> Fraction:
        return Fraction(self.h_odd2, 2)

    @property
    def h_even(self) -> Fraction:
        return Fraction(self.h_even2, 2)


@dataclass(frozen=True)
class ShapeMetrics:
    width: int
    height: int
    phi: float
    psi: float
    lambda3: int  # 3 * Lambda


def _check_objective(objective: str) -> None:
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}, expected one of {OBJECTIVES}")


def to_thirds(value: Fraction | int) -> int:
    """Return 3 * value as an int; raise if value is not a multiple of 1/3."""
    v = Fraction(value) * 3
    if v.denominator != 1:
        raise ValueError(f"{value} is not a multiple of 1/3")
    return v.numerator


def format_thirds(value: Fraction | int) -> str:
    """Render a multiple of 1/3 as '135 2/3', '2', '0 1/3'."""
    num = to_thirds(value)
    whole, rem = divmod(num, 3)
    if rem == 0:
        return str(whole)
    return f"{whole} {rem}/3"


# --- costs -----------------------------------------------------------------


def l1(a: tuple[int, int], b: tuple[int, int]) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def town_cost(town: Town) -> int:
    """Half the sum of all ordered-pair L1 distances, by direct summation."""
    pts = town.points
    total = 0
    for i, a in enumerate(pts):
        for b in pts[i + 1 :]:
            total += abs(a.x - b.x) + abs(a.y - b.y)
    return total


def _axis_cost(coords: list[int]) -> int:
    coords = sorted(coords)
    n = len(coords)
    return sum(v * (2 * i - n + 1) for i, v in enumerate(coords))


def axis_costs(town: Town) -> tuple[int, int]:
    """(c_x, c_y): the horizontal and vertical parts of the town cost."""
    return (
        _axis_cost([p.x for p in town.points]),
        _axis_cost([p.y for p in town.points]),
    )


def point_cost(t: tuple[int, int], town: Town) -> int:
    return sum(l1(t, s) for s in town.points)


def d_prime(offset: tuple[int, int]) -> Fraction:
    """Mean L1 distance between two unit squares whose centers differ by ``offset``.

    Each coordinate contributes its absolute difference, plus 1/3 when the
    squares share that coordinate (same column adds 1/3 in x, same row 1/3 in y).
    """
    sx, sy = offset
    third = Fraction(1, 3)
    return abs(sx) + (third if sx == 0 else 0) + abs(sy) + (third if sy == 0 else 0)


def city_point_cost(t: tuple[int, int], town: Town) -> Fraction:
    return sum((d_prime((t[0] - s.x, t[1] - s.y)) for s in town.points), Fraction(0))


def lambda_adjust(town: Town) -> Fraction:
    """Exact gap between block-city and town cost: (sum c_i^2 + sum r_j^2) / 6."""
    sq = sum(len(ys) ** 2 for ys in town.columns().values())
    sq += sum(len(xs) ** 2 for xs in town.rows().values())
    return Fraction(sq, 6)


def block_city_cost(town: Town) -> Fraction:
    return town_cost(town) + lambda_adjust(town)


def block_city_cost_direct(town: Town) -> Fraction:
    """Block-city cost as half the double sum of d' over ordered pairs."""
    pts = town.points
    total = Fraction(0)
    for a in pts:
        for b in pts:
            total += d_prime((a.x - b.x, a.y - b.y))
    return total / 2


def cost(town: Town, objective: str) -> Fraction:
    _check_objective(objective)
    if objective == TOWN:
        return Fraction(town_cost(town))
    return block_city_cost(town)


def move_delta(town: Town, t: tuple[int, int], r: tuple[int, int], objective: str) -> Fraction:
    """Cost change from moving point ``t`` of the town to the free point ``r``.

    The sums over the town exclude ``t`` itself, which for block cities means
    adding back the self term d'(0) that ``city_point_cost(t, town)`` includes.
    """
    _check_objective(objective)
    t = GridPoint(*t)
    r = GridPoint(*r)
    if t not in town:
        raise ValueError(f"{t} is not a point of the town")
    if r in town:
        raise ValueError(f"{r} is already occupied")
    if objective == TOWN:
        return Fraction(-point_cost(t, town) + point_cost(r, town) - l1(r, t))
    return (
        -city_point_cost(t, town)
        + d_prime((0, 0))
        + city_point_cost(r, town)
        - d_prime((r.x - t.x, r.y - t.y))
    )


# --- structure -------------------------------------------------------------


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    """Counter-clockwise hull vertices (monotone chain), collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _in_hull(hull: list[tuple[int, int]], p: tuple[int, int]) -> bool:
    if len(hull) == 1:
        return tuple(p) == tuple(hull[0])
    if len(hull) == 2:
        a, b = hull
        if _cross(a, b, p) != 0:
            return False
        return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    return all(_cross(hull[i], hull[(i + 1) % len(hull)], p) >= 0 for i in range(len(hull)))


def is_grid_convex(town: Town) -> bool:
    """True iff every lattice point of the convex hull belongs to the town."""
    hull = convex_hull(town.points)
    xs = [p.x for p in town.points]
    ys = [p.y for p in town.points]
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if (x, y) not in town and _in_hull(hull, (x, y)):
                return False
    return True


def is_orthogonally_convex(town: Town) -> bool:
    lines = list(town.rows().values()) + list(town.columns().values())
    return all(v[-1] - v[0] + 1 == len(v) for v in lines)


def _align(lines: dict[int, list[int]]) -> tuple[int, int] | None:
    odd: set[int] = set()
    even: set[int] = set()
    for coords in lines.values():
        if coords[-1] - coords[0] + 1 != len(coords):
            return None
        (odd if len(coords) % 2 else even).add(coords[0] + coords[-1])
    if len(odd) > 1 or len(even) > 1:
        return None
    if odd and even:
        o, e = odd.pop(), even.pop()
        return (o, e) if abs(o - e) == 1 else None
    # an empty parity class is placed so the even line stays 1/2 below the odd one
    if odd:
        o = odd.pop()
        return o, o - 1
    e = even.pop()
    return e + 1, e


def check_alignment(town: Town) -> SymmetryPlacement | None:
    """Alignment lines of row and column centers, or None if rows/columns don't line up."""
    v = _align(town.rows())
    if v is None:
        return None
    h = _align(town.columns())
    if h is None:
        return None
    return SymmetryPlacement(v_odd2=v[0], v_even2=v[1], h_odd2=h[0], h_even2=h[1])


_ROTATIONS = (
    lambda x, y: (x, y),
    lambda x, y: (y, -x),
    lambda x, y: (-x, -y),
    lambda x, y: (-y, x),
)

DIHEDRAL = _ROTATIONS + (
    lambda x, y: (-x, y),
    lambda x, y: (x, -y),
    lambda x, y: (y, x),
    lambda x, y: (-y, -x),
)


def transform(town: Town, k: int) -> Town:
    """Apply the k-th of the 8 dihedral transforms (0..3 rotations, 4..7 reflections)."""
    f = DIHEDRAL[k]
    return Town(f(x, y) for x, y in town.points)


def canonical_placement(town: Town) -> Town:
    """Translate and rotate so odd lines are the axes and even lines sit at -1/2."""
    for rot in _ROTATIONS:
        cand = Town(rot(x, y) for x, y in town.points)
        sym = check_alignment(cand)
        if sym is None:
            raise ValueError("town rows/columns are not aligned; no canonical placement")
        cand = cand.translate(-sym.v_odd2 // 2, -sym.h_odd2 // 2)
        if sym.v_even2 < sym.v_odd2 and sym.h_even2 < sym.h_odd2:
            return cand
    raise AssertionError("no rotation puts both even lines on the negative side")


def normalize(town: Town) -> Town:
    """Translate so the bounding box starts at (0, 0)."""
    mx = min(p.x for p in town.points)
    my = min(p.y for p in town.points)
    return town.translate(-mx, -my)


def canonical_form(town: Town) -> Town:
    """Lexicographically smallest normalized image under the 8 dihedral transforms."""
    return min((normalize(transform(town, k)) for k in range(8)), key=lambda t: t.points)


def width_height(town: Town) -> tuple[int, int]:
    """Longest row length and longest column length."""
    w = max(len(xs) for xs in town.rows().values())
    h = max(len(ys) for ys in town.columns().values())
    return w, h


def shape_metrics(town: Town) -> ShapeMetrics:
    w, h = width_height(town)
    c = town_cost(town)
    lam = lambda_adjust(town)
    lam3 = lam * 3
    assert lam3.denominator == 1
    n25 = town.n**2.5
    return ShapeMetrics(
        width=w,
        height=h,
        phi=2 * c / n25,
        psi=float(2 * (c + lam)) / n25,
        lambda3=lam3.numerator,
    )


def structural_violations(town: Town) -> list[str]:
    """Properties every optimal town or city satisfies; returns the ones that fail."""
    out = []
    if not is_grid_convex(town):
        out.append("not grid-convex")
    if check_alignment(town) is None:
        out.append("rows/columns not aligned")
    w, h = width_height(town)
    if not (w > h / 2 - 3 and h > w / 2 - 3):
        out.append(f"aspect bound violated (w={w}, h={h})")
    if max(w, h) > 2 * math.sqrt(town.n) + 5:
        out.append(f"width bound violated (w={w}, h={h})")
    return out
