"""Table and shape output, plus checks against reference values."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

from .dp import DpConfig, OptResult, solve_all
from .fixtures import FIXTURES, MAX_FIXTURE_N
from .geometry import CITY, DIHEDRAL, PSI, TOWN, Town, cost as shape_cost, format_thirds, to_thirds

PSI_DEC = Decimal("0.650245952951")


def _approx_terms(n: int) -> tuple[float, float, float]:
    n15 = n**1.5
    n25 = n**2.5
    return (
        PSI * n25 / 2 - 0.205 * n15,
        3 * PSI * n25 / 2 + 0.345 * n15,
        0.96 * n15,
    )


def _approx_terms_exact(n: int) -> tuple[Decimal, Decimal, Decimal]:
    with localcontext() as ctx:
        ctx.prec = 50
        root = Decimal(n).sqrt()
        n15 = n * root
        n25 = n * n * root
        return (
            PSI_DEC * n25 / 2 - Decimal("0.205") * n15,
            3 * PSI_DEC * n25 / 2 + Decimal("0.345") * n15,
            Decimal("0.96") * n15,
        )


def error_columns(n: int, town_cost: int, city_cost: Fraction) -> tuple[int, int, int]:
    """(E1, 3*E2, E3): deviations of the optimal costs from the fitted approximations.

    The approximations are rounded down. Each floor is taken both in double
    precision and in 50-digit decimal arithmetic, and the two must agree.
    """
    city3 = to_thirds(city_cost)
    floors = []
    for fast, exact in zip(_approx_terms(n), _approx_terms_exact(n)):
        f = math.floor(fast)
        if f != math.floor(exact):
            raise ArithmeticError(f"floating point floor disagrees with exact value at n={n}")
        floors.append(f)
    return town_cost - floors[0], city3 - floors[1], city3 - 3 * town_cost - floors[2]


# --- tables ---------------------------------------------------------------------


@dataclass
class TableRow:
    n: int
    town_cost: int | None = None
    town_multiplicity: int | None = None
    city_cost3: int | None = None
    city_multiplicity: int | None = None

    @property
    def has_town(self) -> bool:
        return self.town_cost is not None

    @property
    def has_city(self) -> bool:
        return self.city_cost3 is not None


def rows_from_results(town: dict[int, OptResult] | None = None, city: dict[int, OptResult] | None = None) -> list[TableRow]:
    ns = sorted(set(town or {}) | set(city or {}))
    rows = []
    for n in ns:
        row = TableRow(n)
        if town and n in town:
            row.town_cost = int(town[n].cost)
            row.town_multiplicity = town[n].multiplicity
        if city and n in city:
            row.city_cost3 = city[n].cost3
            row.city_multiplicity = city[n].multiplicity
        rows.append(row)
    return rows


def fixture_rows(n_max: int = MAX_FIXTURE_N) -> list[TableRow]:
    return [
        TableRow(f.n, f.town_cost, f.town_multiplicity, f.city_cost3, f.city_multiplicity)
        for f in (FIXTURES[n] for n in range(1, n_max + 1))
    ]


def _star(mult: int | None) -> str:
    return f"*({mult})" if mult is not None and mult > 1 else ""


def _row_fields(row: TableRow) -> dict:
    out: dict = {"n": row.n}
    if row.has_town:
        out["c_town"] = row.town_cost
        out["town_multiplicity"] = row.town_multiplicity
        out["phi"] = round(2 * row.town_cost / row.n**2.5, 12)
    if row.has_city:
        out["c_city_x3"] = row.city_cost3
        out["city_multiplicity"] = row.city_multiplicity
        out["psi"] = round(2 * row.city_cost3 / 3 / row.n**2.5, 12)
    if row.has_town and row.has_city:
        e1, e2, e3 = error_columns(row.n, row.town_cost, Fraction(row.city_cost3, 3))
        out.update(E1=e1, E2_x3=e2, E3=e3)
    elif row.has_town:
        out["E1"] = row.town_cost - math.floor(_approx_terms(row.n)[0])
    elif row.has_city:
        out["E2_x3"] = row.city_cost3 - math.floor(_approx_terms(row.n)[1])
    return out


def render_table(rows: list[TableRow], fmt: str = "ascii") -> str:
    """Render rows as text in format ``fmt``. Rows must cover 1..N."""
    if not rows:
        raise ValueError("no results to render")
    ns = [r.n for r in rows]
    if ns != list(range(1, len(rows) + 1)):
        raise ValueError("results must cover n = 1..N without gaps")
    fields = [_row_fields(r) for r in rows]
    if fmt == "json":
        return json.dumps(fields, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(fields[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(fields)
        return buf.getvalue()
    if fmt != "ascii":
        raise ValueError(f"unknown table format {fmt!r}")

    header = ["n"]
    has_town, has_city = rows[0].has_town, rows[0].has_city
    if has_town:
        header += ["c_town", "E1"]
    if has_city:
        header += ["c_city", "3E2"]
    if has_town and has_city:
        header.append("E3")
    lines = [header]
    for row, f in zip(rows, fields):
        cells = [str(row.n)]
        if has_town:
            cells += [f"{row.town_cost}{_star(row.town_multiplicity)}", str(f["E1"])]
        if has_city:
            cells += [f"{format_thirds(Fraction(row.city_cost3, 3))}{_star(row.city_multiplicity)}", str(f["E2_x3"])]
        if has_town and has_city:
            cells.append(str(f["E3"]))
        lines.append(cells)
    widths = [max(len(line[i]) for line in lines) for i in range(len(header))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(line, widths)).rstrip() for line in lines) + "\n"


def parse_csv_table(text: str) -> list[dict]:
    return [{k: (float(v) if k in ("phi", "psi") else int(v)) for k, v in rec.items()} for rec in csv.DictReader(io.StringIO(text))]


# --- shapes ---------------------------------------------------------------------

SVG_UNIT = 20


def render_shape(town: Town, fmt: str = "ascii", objective: str = TOWN) -> str:
    xs = [p.x for p in town.points]
    ys = [p.y for p in town.points]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    if fmt == "ascii":
        return "\n".join(
            "".join("#" if (x, y) in town else "." for x in range(x0, x1 + 1)) for y in range(y1, y0 - 1, -1)
        )
    if fmt != "svg":
        raise ValueError(f"unknown shape format {fmt!r}")
    u = SVG_UNIT
    w, h = x1 - x0 + 1, y1 - y0 + 1
    pad = u
    caption_h = u
    width = w * u + 2 * pad
    height = h * u + 2 * pad + caption_h
    value = shape_cost(town, objective)
    label = f"n={town.n} c_{objective}={format_thirds(value)}"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
        f'<g stroke="#dddddd" stroke-width="1">',
    ]
    for i in range(w + 1):
        out.append(f'<line x1="{pad + i * u}" y1="{pad}" x2="{pad + i * u}" y2="{pad + h * u}"/>')
    for j in range(h + 1):
        out.append(f'<line x1="{pad}" y1="{pad + j * u}" x2="{pad + w * u}" y2="{pad + j * u}"/>')
    out.append("</g>")
    out.append('<g fill="#333333" stroke="#ffffff" stroke-width="1">')
    for p in sorted(town.points, key=lambda p: (-p.y, p.x)):
        out.append(f'<rect x="{pad + (p.x - x0) * u}" y="{pad + (y1 - p.y) * u}" width="{u}" height="{u}"/>')
    out.append("</g>")
    out.append(
        f'<text x="{width // 2}" y="{height - pad // 2}" text-anchor="middle" font-family="monospace" font-size="12">{label}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --- containment ------------------------------------------------------------------


def contains_copy(big: Town, small: Town) -> bool:
    """True if some translate of a rotation/reflection of ``small`` lies inside ``big``."""
    if small.n > big.n:
        return False
    for f in DIHEDRAL:
        img = [f(x, y) for x, y in small.points]
        ax, ay = img[0]
        for bx, by in big.points:
            dx, dy = bx - ax, by - ay
            if all((x + dx, y + dy) in big for x, y in img):
                return True
    return False


def any_contains(bigs: list[Town], smalls: list[Town]) -> bool:
    return any(contains_copy(b, s) for b in bigs for s in smalls)


# --- verification ------------------------------------------------------------------


@dataclass
class VerifyReport:
    n_max: int
    lines: list[str] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, ok: bool, what: str) -> None:
        self.lines.append(f"{'PASS' if ok else 'FAIL'} {what}")
        if not ok:
            self.failures.append(what)

    def as_dict(self) -> dict:
        return asdict(self) | {"ok": self.ok}


def verify(n_max: int, threads: int = 1, town=None, city=None) -> VerifyReport:
    """Solve both objectives up to ``n_max`` and compare everything against the fixtures."""
    if not 1 <= n_max <= MAX_FIXTURE_N:
        raise ValueError(f"n_max must be in 1..{MAX_FIXTURE_N}")
    if town is None:
        town = solve_all(DpConfig(n_max, TOWN, reconstruct=True, threads=threads))
    if city is None:
        city = solve_all(DpConfig(n_max, CITY, reconstruct=True, threads=threads))
    rep = VerifyReport(n_max)

    for n in range(1, n_max + 1):
        fx = FIXTURES[n]
        t, c = town[n], city[n]
        got = (int(t.cost), t.multiplicity, c.cost3, c.multiplicity)
        exp = (fx.town_cost, fx.town_multiplicity, fx.city_cost3, fx.city_multiplicity)
        rep.check(got == exp, f"n={n} costs/multiplicities expected {exp} got {got}")
        e = error_columns(n, int(t.cost), c.cost)
        rep.check(e == (fx.e1, fx.e2_times3, fx.e3), f"n={n} error columns expected {(fx.e1, fx.e2_times3, fx.e3)} got {e}")

    # optimal cities that are not optimal towns: only n = 72 up to 80
    disjoint = [n for n in range(1, n_max + 1) if not set(city[n].shapes) & set(town[n].shapes)]
    rep.check(disjoint == [n for n in (72,) if n <= n_max], f"n with no optimal city shape among optimal towns: {disjoint}")
    # for n <= 21 every optimal city is also an optimal town, and extra tied towns exist exactly at these n
    small = range(1, min(n_max, 21) + 1)
    subset = all(set(city[n].shapes) <= set(town[n].shapes) for n in small)
    rep.check(subset, "n<=21: every optimal city shape is an optimal town shape")
    extra = [n for n in small if len(town[n].shapes) > len(city[n].shapes)]
    expected_extra = [n for n in (3, 11, 15, 17, 18, 19) if n <= n_max]
    rep.check(extra == expected_extra, f"n<=21 with additional tied towns: {extra}")

    if n_max >= 12:
        rep.check(not any_contains(town[12].shapes, town[9].shapes), "optimal 9-town not contained in optimal 12-town")
    if n_max >= 35:
        rep.check(not any_contains(town[35].shapes, town[34].shapes), "no optimal 35-town contains an optimal 34-town")
        growth = [n for n in range(2, 35) if not any_contains(town[n].shapes, town[n - 1].shapes)]
        rep.check(growth == [], f"every n<35 has an optimal town containing an optimal (n-1)-town: exceptions {growth}")
    return rep
