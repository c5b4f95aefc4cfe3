import os
from fractions import Fraction

import pytest

from ntowns.dp import (
    EMPTY_STATE,
    DpConfig,
    DpState,
    LayerKey,
    ResourceLimitExceeded,
    Solver,
    SpillLog,
    check_result,
    column_increment,
    expand_state,
    heights_to_town,
    prune,
    read_spill_header,
    reconstruct,
    shrink_column,
    solve_all,
    upper_bound,
)
from ntowns.geometry import CITY, TOWN, Town, block_city_cost, canonical_form, town_cost
from ntowns.oracle import PROFILE, brute_force_optimum


def nonincreasing(total, top=None):
    top = total if top is None else top
    if total == 0:
        yield ()
        return
    for h in range(min(total, top), 0, -1):
        for rest in nonincreasing(total - h, h):
            yield (h,) + rest


def walk(seq, cfg):
    """Follow one height sequence through expand_state."""
    key, state, cost = LayerKey(0, cfg.width_limit), EMPTY_STATE, 0
    for h in seq:
        key, state, cost = next((k, s, c) for k, s, c, _ in expand_state(key, state, cost, cfg) if k.cc == h)
    return key, state, cost


def finish(key, state, cost, cfg):
    return next((c, n) for k, _, c, n in expand_state(key, state, cost, cfg) if k.cc == 0)


def interface(town, cc):
    """Counts above/below the full rectangle and L1 sums to its four corner cells."""
    xs = [p.x for p in town]
    x0, x1 = min(xs), max(xs)
    top = (cc - 1) // 2
    bot = top - cc + 1
    up = [p for p in town if p.y > top]
    down = [p for p in town if p.y < bot]

    def dist(pts, cx, cy):
        return sum(abs(p.x - cx) + abs(p.y - cy) for p in pts)

    return DpState(dist(up, x0, top), dist(down, x0, bot), dist(up, x1, top), dist(down, x1, bot), len(up), len(down))


class TestTransitions:
    def test_shrink_odd_frees_top_row(self):
        assert shrink_column(EMPTY_STATE, 2, 3) == DpState(2 + 3, 0, 2 + 1, 0, 2, 0)

    def test_shrink_even_frees_bottom_row(self):
        assert shrink_column(EMPTY_STATE, 2, 2) == DpState(0, 2 + 3, 0, 2 + 1, 0, 2)

    def test_shrink_first_column(self):
        assert shrink_column(EMPTY_STATE, 0, 5) == EMPTY_STATE

    def test_shrink_rejects_empty_column(self):
        with pytest.raises(ValueError):
            shrink_column(EMPTY_STATE, 1, 0)

    @pytest.mark.parametrize("c, expected", [(1, 0), (2, 1), (3, 4), (4, 10)])
    def test_first_column_increment(self, c, expected):
        assert column_increment(EMPTY_STATE, 0, c) == expected

    def test_expand_first_column(self):
        cfg = DpConfig(3)
        out = list(expand_state(LayerKey(0, 3), EMPTY_STATE, 0, cfg))
        assert [(k, c, n) for k, _, c, n in out] == [
            (LayerKey(1, 3), 4, 3),
            (LayerKey(1, 2), 1, 2),
            (LayerKey(1, 1), 0, 1),
            (LayerKey(1, 0), 0, 0),
        ]

    def test_expand_respects_target(self):
        cfg = DpConfig(2)
        assert all(n <= 2 for *_, n in expand_state(LayerKey(0, 4), EMPTY_STATE, 0, cfg))

    def test_city_domino_trace(self):
        cfg = DpConfig(2, CITY, width_limit=3)
        key, state, cost = walk((1, 1), cfg)
        total, n = finish(key, state, cost, cfg)
        assert n == 2
        # first column of height 1 costs 1 (x6 scale), domino adds 1*6 + 1 + 0 + closing 1
        assert total == 12
        assert Fraction(total, 6) == block_city_cost(Town([(0, 0), (1, 0)]))


class TestInterfaceOracle:
    """DP states along explicit paths agree with the geometry of the partial town."""

    @pytest.mark.parametrize("total", range(1, 11))
    def test_states_and_costs(self, total):
        cfg = DpConfig(30)
        for seq in nonincreasing(total):
            key, state, cost = walk(seq, cfg)
            town = heights_to_town(seq)
            assert state == interface(town, seq[-1]), seq
            assert cost == town_cost(town), seq
            assert finish(key, state, cost, cfg) == (town_cost(town), total)

    @pytest.mark.parametrize("total", range(1, 10))
    def test_city_costs(self, total):
        cfg = DpConfig(30, CITY)
        for seq in nonincreasing(total):
            key, state, cost = walk(seq, cfg)
            done, n = finish(key, state, cost, cfg)
            assert n == total
            assert Fraction(done, 6) == block_city_cost(heights_to_town(seq)), seq
            assert done % 2 == 0


class TestPrune:
    def test_equality_survives(self):
        cfg = DpConfig(5)
        bound = upper_bound(cfg)
        assert not prune(EMPTY_STATE, bound, 3, cfg, bound)
        assert prune(EMPTY_STATE, bound + 1, 3, cfg, bound)

    def test_target_overflow(self):
        cfg = DpConfig(5, upper_bound_cut=False, balance_cut=False)
        assert prune(None, 0, 6, cfg)
        assert not prune(None, 0, 5, cfg)

    def test_balance(self):
        cfg = DpConfig(5, width_limit=2, upper_bound_cut=False)
        assert not prune(DpState(0, 0, 0, 0, 2, 0), 0, 3, cfg)
        assert prune(DpState(0, 0, 0, 0, 3, 0), 0, 3, cfg)
        # completions carry no interface
        assert not prune(None, 0, 3, cfg)

    def test_disabled(self):
        cfg = DpConfig(5, width_limit=2, upper_bound_cut=False, balance_cut=False)
        assert not prune(DpState(0, 0, 0, 0, 9, 0), 10**9, 3, cfg)

    def test_bound_scale(self):
        assert upper_bound(DpConfig(1, CITY)) == 2
        assert upper_bound(DpConfig(2, TOWN)) == 1


class TestSolve:
    @pytest.mark.parametrize("objective", [TOWN, CITY])
    def test_matches_profile_oracle(self, objective):
        results = solve_all(DpConfig(16, objective, reconstruct=True))
        for n, res in results.items():
            ora = brute_force_optimum(n, objective, PROFILE)
            assert res.cost == ora.cost, n
            assert res.shapes == ora.shapes, n
            assert res.multiplicity == ora.multiplicity
            check_result(res)

    @pytest.mark.parametrize("objective", [TOWN, CITY])
    def test_pruning_does_not_change_results(self, objective):
        on = solve_all(DpConfig(24, objective, reconstruct=True))
        off = solve_all(DpConfig(24, objective, reconstruct=True, upper_bound_cut=False, balance_cut=False))
        for n in on:
            assert (on[n].cost, on[n].shapes) == (off[n].cost, off[n].shapes)

    def test_threads_deterministic(self):
        one = solve_all(DpConfig(30, TOWN, reconstruct=True))
        four = solve_all(DpConfig(30, TOWN, reconstruct=True, threads=4))
        for n in one:
            assert (one[n].cost, one[n].shapes) == (four[n].cost, four[n].shapes)

    def test_costs_increase(self):
        for objective in (TOWN, CITY):
            res = solve_all(DpConfig(30, objective))
            costs = [res[n].cost for n in range(1, 31)]
            assert all(a < b for a, b in zip(costs, costs[1:]))

    def test_city_above_town(self):
        town = solve_all(DpConfig(20))
        city = solve_all(DpConfig(20, CITY))
        for n in town:
            assert city[n].cost > town[n].cost
            assert (3 * city[n].cost).denominator == 1

    @pytest.mark.parametrize(
        "n, shape",
        [
            (1, Town([(0, 0)])),
            (6, Town((x, y) for x in range(3) for y in range(2))),
            (9, Town((x, y) for x in range(3) for y in range(3))),
        ],
    )
    def test_known_shapes(self, n, shape):
        res = solve_all(DpConfig(n, reconstruct=True))[n]
        assert res.shapes == [canonical_form(shape)]

    def test_three_has_two_shapes(self):
        res = solve_all(DpConfig(3, reconstruct=True))[3]
        assert res.cost == 4 and res.multiplicity == 2
        assert canonical_form(Town([(0, 0), (1, 0), (2, 0)])) in res.shapes

    def test_without_reconstruct(self):
        res = solve_all(DpConfig(5))
        assert res[5].cost == 16 and res[5].shapes is None


class TestSolverMechanics:
    def test_max_states_abort(self):
        with pytest.raises(ResourceLimitExceeded):
            solve_all(DpConfig(30, max_states=50))

    def test_peak_states_reported(self):
        s = Solver(DpConfig(20))
        s.run()
        assert s.peak_states > 0 and s.states_expanded > 0
        s.close()

    def test_reconstruct_requires_flag(self):
        s = Solver(DpConfig(4))
        s.run()
        with pytest.raises(RuntimeError):
            reconstruct(s)

    def test_unknown_n(self):
        s = Solver(DpConfig(4, reconstruct=True))
        s.run()
        try:
            with pytest.raises(KeyError):
                reconstruct(s, [9])
            with pytest.raises(KeyError):
                s.result(9)
        finally:
            s.close()

    def test_spill_log_cleanup_and_header(self, tmp_path):
        s = Solver(DpConfig(10, reconstruct=True, spill_dir=str(tmp_path)))
        s.run()
        path = s.spill.path
        assert os.path.dirname(path) == str(tmp_path)
        assert read_spill_header(path) == 1
        s.close()
        assert not os.path.exists(path)

    def test_spill_roundtrip(self, tmp_path):
        log = SpillLog(str(tmp_path))
        child = DpState(1, 2, 3, 4, 5, 6)
        parent = DpState(7, 8, 9, 10, 11, 12)
        log.write_layer(LayerKey(2, 3), {child: [(4, parent)]})
        (_, offset, count), = log.blocks
        assert list(log.read_block(offset, count)) == [(child, 4, parent)]
        log.close()

    @pytest.mark.parametrize("raw", [b"", b"NTPL", b"XXXX\x01\x00\x00\x00", b"NTPL\x02\x00\x00\x00"])
    def test_spill_header_rejects(self, tmp_path, raw):
        p = tmp_path / "bad.bin"
        p.write_bytes(raw)
        with pytest.raises(ValueError):
            read_spill_header(str(p))

    def test_config_validation(self):
        for kwargs in ({"n_target": 0}, {"n_target": 3, "objective": "x"}, {"n_target": 3, "width_limit": 0}, {"n_target": 3, "threads": 0}):
            with pytest.raises(ValueError):
                DpConfig(**kwargs)

    def test_heights_to_town(self):
        assert heights_to_town([3, 1]) == Town([(0, -1), (0, 0), (0, 1), (1, 0)])
        assert heights_to_town([2, 2, 1]).n == 5
