"""Layered forward dynamic program over column profiles.

Columns are added one at a time, each on the left of the current partial
town, and the partial town is mirrored left/right after every step so that
columns alternate between the two sides of the tallest one. A layer is keyed
by ``(w, cc)``: ``w`` columns placed so far, the last one of height ``cc``.
Inside a layer, a partial town is summarised by a :class:`DpState`: how many
points lie above and below the current full rectangle and their total L1
distance to its four corners. That is all the cost of future columns
depends on.

Town costs are stored as plain integers; block-city costs are stored
multiplied by 6, which makes every city increment integral.
"""

from __future__ import annotations

import math
import os
import struct
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, NamedTuple

from .geometry import CITY, OBJECTIVES, TOWN, Town, canonical_form, cost as shape_cost
from .oracle import greedy_upper_bound


class ResourceLimitExceeded(RuntimeError):
    """The live state count passed ``DpConfig.max_states``."""


class DpState(NamedTuple):
    d_up_left: int
    d_down_left: int
    d_up_right: int
    d_down_right: int
    n_up: int
    n_down: int


class LayerKey(NamedTuple):
    w: int
    cc: int


EMPTY_STATE = DpState(0, 0, 0, 0, 0, 0)


def default_width_limit(n_target: int) -> int:
    return int(2 * math.sqrt(n_target) + 5)


@dataclass
class DpConfig:
    n_target: int
    objective: str = TOWN
    width_limit: int | None = None
    upper_bound_cut: bool = True
    balance_cut: bool = True
    reconstruct: bool = False
    threads: int = 1
    max_states: int | None = None
    spill_dir: str | None = None

    def __post_init__(self):
        if self.n_target < 1:
            raise ValueError("n_target must be >= 1")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.width_limit is None:
            self.width_limit = default_width_limit(self.n_target)
        if self.width_limit < 1:
            raise ValueError("width_limit must be >= 1")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")

    @property
    def scale(self) -> int:
        """Factor between stored DP costs and true costs."""
        return 6 if self.objective == CITY else 1


@dataclass
class OptResult:
    n: int
    objective: str
    cost: Fraction
    multiplicity: int | None = None
    shapes: list[Town] | None = None

    @property
    def cost3(self) -> int:
        return int(self.cost * 3)


# --- transitions -------------------------------------------------------------


def shrink_column(state: DpState, w: int, c_from: int) -> DpState:
    """Interface after the rectangle height drops from ``c_from`` to ``c_from - 1``.

    ``state`` must already carry the one-unit horizontal shift of the new
    column. Odd heights are centered on a grid row, even heights sit half a
    row lower, so going down from an odd height frees the top row and going
    down from an even height frees the bottom row. The freed row holds ``w``
    points of the existing columns.
    """
    if c_from <= 0:
        raise ValueError("c_from must be positive")
    ul, dl, ur, dr, nu, nd = state
    if c_from % 2 == 1:
        nu += w
        ul += nu + w * (w + 1) // 2
        ur += nu + w * (w - 1) // 2
    else:
        nd += w
        dl += nd + w * (w + 1) // 2
        dr += nd + w * (w - 1) // 2
    return DpState(ul, dl, ur, dr, nu, nd)


def column_increment(state: DpState, w: int, c: int) -> int:
    """Town cost between a new column of height ``c`` and everything already placed.

    ``state`` is the shifted interface for a rectangle of height ``c``.
    """
    return (
        (state.d_up_left + state.d_down_left) * c
        + (state.n_up + state.n_down) * c * (c - 1) // 2
        + (c + 1) * c * (c - 1) // 6 * (2 * w + 1)
        + c * c * w * (w + 1) // 2
    )


def expand_state(layer: LayerKey, state: DpState, cost: int, config: DpConfig) -> Iterator[tuple[LayerKey, DpState, int, int]]:
    """All successors of one entry as ``(layer, state, cost, n)``.

    A successor with ``layer.cc == 0`` is a completed town of ``n`` points;
    its state is not meaningful. Other successors are stored mirrored: the
    left and right distance pairs swap roles.
    """
    w, cc = layer
    city = config.objective == CITY
    n_target = config.n_target
    ul, dl, ur, dr, nu, nd = state
    cur = DpState(ul + nu, dl + nd, ur, dr, nu, nd)
    for c in range(cc, -1, -1):
        n = cur.n_up + cur.n_down + (w + 1) * c
        if n <= n_target:
            inc = column_increment(cur, w, c)
            if city:
                inc = inc * 6 + c * c + (cc - c) * w * w
            mirrored = DpState(cur.d_up_right, cur.d_down_right, cur.d_up_left, cur.d_down_left, cur.n_up, cur.n_down)
            yield LayerKey(w + 1, c), mirrored, cost + inc, n
        if c > 0:
            cur = shrink_column(cur, w, c)


def upper_bound(config: DpConfig) -> int:
    """Greedy cost for n_target, in the DP's storage scale."""
    ub, _ = greedy_upper_bound(config.n_target, config.objective)
    return int(ub * config.scale)


def prune(state: DpState | None, cost: int, n_so_far: int, config: DpConfig, bound: int | None = None) -> bool:
    """True if no optimal town for any n <= n_target can pass through this entry.

    ``state`` is None for a completed town, which has no interface to balance.
    """
    if n_so_far > config.n_target:
        return True
    if state is not None and config.balance_cut and abs(state.n_up - state.n_down) > config.width_limit:
        return True
    if config.upper_bound_cut:
        if bound is None:
            bound = upper_bound(config)
        # ties survive so multiplicities are unaffected
        if cost > bound:
            return True
    return False


# --- spill log -----------------------------------------------------------------

SPILL_MAGIC = b"NTPL"
SPILL_VERSION = 1
_HEADER = struct.Struct("<4sI")
# layer w, layer cc, 6 state fields, parent cc, 6 parent state fields
_RECORD = struct.Struct("<2q6qq6q")
_INT64_MAX = 2**63 - 1


class SpillLog:
    """Append-only binary log of parent links, one block per layer.

    Block offsets are kept in memory so reconstruction can walk the log
    backwards layer by layer without loading it whole.
    """

    def __init__(self, directory: str | None = None):
        fd, self.path = tempfile.mkstemp(prefix="ntowns-parents-", suffix=".bin", dir=directory)
        self._fh = os.fdopen(fd, "w+b")
        self._fh.write(_HEADER.pack(SPILL_MAGIC, SPILL_VERSION))
        self.blocks: list[tuple[LayerKey, int, int]] = []

    def write_layer(self, layer: LayerKey, parents: dict) -> None:
        offset = self._fh.tell()
        count = 0
        buf = bytearray()
        for state, links in parents.items():
            for pcc, pstate in links:
                vals = (layer.w, layer.cc, *state, pcc, *pstate)
                if max(vals) > _INT64_MAX:
                    raise OverflowError("state field exceeds 64-bit spill record")
                buf += _RECORD.pack(*vals)
                count += 1
        self._fh.write(buf)
        self.blocks.append((layer, offset, count))

    def read_block(self, offset: int, count: int) -> Iterator[tuple[DpState, int, DpState]]:
        self._fh.flush()
        self._fh.seek(offset)
        data = self._fh.read(count * _RECORD.size)
        for vals in _RECORD.iter_unpack(data):
            yield DpState(*vals[2:8]), vals[8], DpState(*vals[9:15])
        self._fh.seek(0, os.SEEK_END)

    def close(self) -> None:
        if not self._fh.closed:
            self._fh.close()
        if os.path.exists(self.path):
            os.remove(self.path)


def read_spill_header(path: str) -> int:
    """Validate a spill file's header; return its version."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
    if len(raw) != _HEADER.size:
        raise ValueError("spill file too short")
    magic, version = _HEADER.unpack(raw)
    if magic != SPILL_MAGIC:
        raise ValueError(f"bad spill magic {magic!r}")
    if version != SPILL_VERSION:
        raise ValueError(f"unsupported spill version {version}")
    return version


# --- solver --------------------------------------------------------------------


@dataclass
class _Partial:
    layers: dict = field(default_factory=dict)  # c -> {state: cost}
    parents: dict = field(default_factory=dict)  # c -> {state: [(pcc, pstate)]}
    opt: dict = field(default_factory=dict)  # n -> cost
    opt_parents: dict = field(default_factory=dict)  # n -> [(w, cc, state)]


def _expand_chunk(layer: LayerKey, items, config: DpConfig, bound: int | None) -> _Partial:
    part = _Partial()
    track = config.reconstruct
    for state, cost in items:
        for (w1, c), succ, new_cost, n in expand_state(layer, state, cost, config):
            if prune(succ if c else None, new_cost, n, config, bound):
                continue
            if c == 0:
                if n == 0:
                    continue
                best = part.opt.get(n)
                if best is None or new_cost < best:
                    part.opt[n] = new_cost
                    if track:
                        part.opt_parents[n] = [(layer.w, layer.cc, state)]
                elif new_cost == best and track:
                    part.opt_parents[n].append((layer.w, layer.cc, state))
                continue
            target = part.layers.get(c)
            if target is None:
                target = part.layers[c] = {}
                part.parents[c] = {}
            best = target.get(succ)
            if best is None or new_cost < best:
                target[succ] = new_cost
                if track:
                    part.parents[c][succ] = [(layer.cc, state)]
            elif new_cost == best and track:
                part.parents[c][succ].append((layer.cc, state))
    return part


def _merge_into(dst_cost: dict, dst_par: dict | None, src_cost: dict, src_par: dict | None) -> None:
    # src is a throwaway partial, so its parent lists are moved, not copied
    for key, cost in src_cost.items():
        best = dst_cost.get(key)
        if best is None or cost < best:
            dst_cost[key] = cost
            if dst_par is not None:
                dst_par[key] = src_par[key]
        elif cost == best and dst_par is not None:
            dst_par[key].extend(src_par[key])


class Solver:
    """Runs the layered DP once for all n <= n_target."""

    def __init__(self, config: DpConfig):
        self.config = config
        self.opt: dict[int, int] = {}
        self.opt_parents: dict[int, list] = {}
        self.spill: SpillLog | None = None
        self.states_expanded = 0
        self.peak_states = 0

    def run(self) -> dict[int, int]:
        cfg = self.config
        wl = cfg.width_limit
        bound = upper_bound(cfg) if cfg.upper_bound_cut else None
        track = cfg.reconstruct
        if track:
            self.spill = SpillLog(cfg.spill_dir)
        # layers[w][cc] -> {state: cost}; only generations w and w+1 are alive
        costs: dict[LayerKey, dict] = {LayerKey(0, wl): {EMPTY_STATE: 0}}
        parents: dict[LayerKey, dict] = {LayerKey(0, wl): {EMPTY_STATE: []}}
        pool = ThreadPoolExecutor(cfg.threads) if cfg.threads > 1 else None
        try:
            for w in range(0, wl + 1):
                for cc in range(wl, 0, -1):
                    key = LayerKey(w, cc)
                    layer = costs.pop(key, None)
                    layer_par = parents.pop(key, None)
                    if not layer:
                        continue
                    if track:
                        self.spill.write_layer(key, layer_par)
                    self._expand_layer(key, layer, costs, parents, bound, pool)
                    live = sum(len(v) for v in costs.values())
                    self.peak_states = max(self.peak_states, live + len(layer))
                    if cfg.max_states is not None and self.peak_states > cfg.max_states:
                        raise ResourceLimitExceeded(
                            f"live DP states {self.peak_states} exceed cap {cfg.max_states}"
                        )
        finally:
            if pool is not None:
                pool.shutdown()
        return self.opt

    def _expand_layer(self, key, layer, costs, parents, bound, pool) -> None:
        cfg = self.config
        items = list(layer.items())
        self.states_expanded += len(items)
        if pool is None or len(items) < 2 * cfg.threads:
            parts = [_expand_chunk(key, items, cfg, bound)]
        else:
            size = -(-len(items) // cfg.threads)
            chunks = [items[i : i + size] for i in range(0, len(items), size)]
            parts = list(pool.map(lambda ch: _expand_chunk(key, ch, cfg, bound), chunks))
        track = cfg.reconstruct
        for part in parts:
            for c, entries in part.layers.items():
                tkey = LayerKey(key.w + 1, c)
                dst = costs.setdefault(tkey, {})
                dst_par = parents.setdefault(tkey, {}) if track else None
                _merge_into(dst, dst_par, entries, part.parents[c] if track else None)
            opt_par = self.opt_parents if track else None
            _merge_into(self.opt, opt_par, part.opt, part.opt_parents if track else None)

    def result(self, n: int) -> OptResult:
        if n not in self.opt:
            raise KeyError(f"no finite optimum recorded for n={n}")
        return OptResult(n, self.config.objective, Fraction(self.opt[n], self.config.scale))

    def close(self) -> None:
        if self.spill is not None:
            self.spill.close()
            self.spill = None


def heights_to_town(heights) -> Town:
    """Build a town from column heights in the order the DP added them."""
    cols: list[int] = []
    for h in heights:
        cols = ([h] + cols)[::-1]
    pts = []
    for x, h in enumerate(cols):
        top = (h - 1) // 2
        pts.extend((x, y) for y in range(top - h + 1, top + 1))
    return Town(pts)


def reconstruct(solver: Solver, ns=None) -> dict[int, tuple[int, list[Town]]]:
    """All distinct canonical optimal shapes for each requested n.

    Walks the spill log backwards from the completion records, keeping only
    entries that lie on some optimal path, then enumerates the column-height
    sequences of those paths.
    """
    cfg = solver.config
    if not cfg.reconstruct or solver.spill is None:
        raise RuntimeError("solver was not run with reconstruct enabled")
    if ns is None:
        ns = sorted(solver.opt)
    for n in ns:
        if n not in solver.opt:
            raise KeyError(f"no finite optimum recorded for n={n}")

    needed: dict[LayerKey, set] = {}
    for n in ns:
        for w, cc, state in solver.opt_parents[n]:
            needed.setdefault(LayerKey(w, cc), set()).add(state)

    links: dict[tuple, list] = {}
    for layer, offset, count in reversed(solver.spill.blocks):
        want = needed.get(layer)
        if not want:
            continue
        for state, pcc, pstate in solver.spill.read_block(offset, count):
            if state in want:
                links.setdefault((layer, state), []).append((LayerKey(layer.w - 1, pcc), pstate))
                needed.setdefault(LayerKey(layer.w - 1, pcc), set()).add(pstate)

    root = (LayerKey(0, cfg.width_limit), EMPTY_STATE)
    memo: dict[tuple, set] = {root: {()}}

    def sequences(node) -> set:
        if node in memo:
            return memo[node]
        out = set()
        for parent in links[node]:
            for seq in sequences(parent):
                out.add(seq + (node[0].cc,))
        memo[node] = out
        return out

    results = {}
    for n in ns:
        shapes = set()
        for w, cc, state in solver.opt_parents[n]:
            for seq in sequences((LayerKey(w, cc), state)):
                shapes.add(canonical_form(heights_to_town(seq)))
        ordered = sorted(shapes, key=lambda t: t.points)
        results[n] = (len(ordered), ordered)
    return results


def solve_all(config: DpConfig) -> dict[int, OptResult]:
    """Optimal cost (and, with reconstruct, all optimal shapes) for every n <= n_target."""
    solver = Solver(config)
    try:
        solver.run()
        missing = [n for n in range(1, config.n_target + 1) if n not in solver.opt]
        if missing:
            raise RuntimeError(f"no town found for n={missing}")
        results = {n: solver.result(n) for n in range(1, config.n_target + 1)}
        if config.reconstruct:
            for n, (mult, shapes) in reconstruct(solver).items():
                if n in results:
                    results[n].multiplicity = mult
                    results[n].shapes = shapes
    finally:
        solver.close()
    return results


def check_result(res: OptResult) -> None:
    """Assert every reconstructed shape has n points and the reported cost."""
    for shape in res.shapes or []:
        if shape.n != res.n:
            raise AssertionError(f"shape has {shape.n} points, expected {res.n}")
        got = shape_cost(shape, res.objective)
        if got != res.cost:
            raise AssertionError(f"shape cost {got} != DP cost {res.cost} for n={res.n}")
