import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bowtie, complete, cycle
from tourcert.graph import Graph, generate_random_subquartic
from tourcert.lp import (
    InfeasibleLp,
    LpError,
    _make_solution,
    min_cut_of_solution,
    normalize_below_one,
    restrict_to_support,
    solve_lp,
    solve_lp_enumerated,
)
from tourcert.mincut import min_st_cut, stoer_wagner
from tourcert.rational import ONE, Q, TWO, ZERO


class TestKnownValues:
    def test_c6_all_ones(self):
        sol = solve_lp(cycle(6))
        assert sol.value == 6
        assert sol.eps == ZERO
        assert all(xe == ONE for xe in sol.x)

    def test_cycles_value_n(self):
        for n in range(3, 13):
            sol = solve_lp(cycle(n))
            assert sol.value == n
            assert sol.eps == ZERO

    def test_k4_value_4(self):
        # independently frozen by full-constraint enumeration
        g = complete(4)
        assert solve_lp(g).value == 4
        assert solve_lp_enumerated(g) == 4

    def test_bowtie_solvable_despite_cut_vertex(self):
        g = bowtie()
        sol = solve_lp(g)
        assert sol.value == solve_lp_enumerated(g)


class TestPreconditions:
    def test_rejects_tiny(self):
        with pytest.raises(LpError):
            solve_lp(Graph.from_edges(2, [(0, 1)]))

    def test_rejects_disconnected(self):
        with pytest.raises(InfeasibleLp):
            solve_lp(Graph.from_edges(6, [(0, 1), (1, 2), (0, 2),
                                          (3, 4), (4, 5), (3, 5)]))

    def test_rejects_bridge(self):
        # two triangles joined by a bridge: box LP infeasible
        g = Graph.from_edges(
            6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]
        )
        with pytest.raises(InfeasibleLp, match="bridge"):
            solve_lp(g)


class TestMinCut:
    def test_stoer_wagner_cycle(self):
        w, side = stoer_wagner(5, [(i, (i + 1) % 5, ONE) for i in range(5)])
        assert w == 2
        assert 0 < len(side) < 5

    def test_st_cut_matches_global_on_cycle(self):
        wedges = [(i, (i + 1) % 6, ONE) for i in range(6)]
        w, side = min_st_cut(6, wedges, 0, 3)
        assert w == 2
        assert 0 in side and 3 not in side

    def test_weighted_cut(self):
        wedges = [(0, 1, Q(3)), (1, 2, Q(1, 2)), (0, 2, Q(1, 2))]
        w, _ = stoer_wagner(3, wedges)
        assert w == 1  # isolate vertex 2


class TestSolutionInvariants:
    @settings(max_examples=30, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_random_instance_invariants(self, seed):
        n = 10 + 2 * (seed % 10)
        try:
            g = generate_random_subquartic(n, seed, sparsity=0.2)
        except Exception:
            return
        sol = solve_lp(g)
        gs, sol = restrict_to_support(g, sol)
        assert len(sol.support()) == gs.m <= 2 * gs.n - 1
        assert ZERO <= sol.eps <= ONE
        assert all(e >= 0 for e in sol.excess)
        assert sum(sol.excess, ZERO) == 2 * sol.eps * gs.n
        cut, _ = min_cut_of_solution(gs, sol.x)
        assert cut >= TWO
        assert all(ZERO < xe <= ONE for xe in sol.x)

    def test_restrict_preserves_value(self):
        g = generate_random_subquartic(14, 2)
        sol = solve_lp(g)
        stats = {}
        gs, rsol = restrict_to_support(g, sol, stats)
        assert rsol.value == sol.value
        assert stats["restrict_rounds"] >= 0

    def test_enumerated_agrees_with_cutting_planes(self):
        for seed in range(12):
            try:
                g = generate_random_subquartic(8, seed, sparsity=0.25)
            except Exception:
                continue
            assert solve_lp(g).value == solve_lp_enumerated(g)


class TestNormalization:
    def test_identity_on_solver_output(self):
        g = generate_random_subquartic(16, 4, sparsity=0.2)
        sol = solve_lp(g)
        gs, sol = restrict_to_support(g, sol)
        norm = normalize_below_one(gs, sol)
        assert norm.x == sol.x  # solver already enforces the box

    def test_lowers_synthetic_overweight_edge(self):
        # feasible but non-optimal K4 point with an over-unit edge
        g = complete(4)
        x = [ONE] * g.m
        idx = g.edges.index((0, 1))
        x[idx] = Q(3, 2)
        norm = normalize_below_one(g, _make_solution(g, x))
        assert all(xe <= ONE for xe in norm.x)
        cut, _ = min_cut_of_solution(g, norm.x)
        assert cut >= TWO
        assert norm.value <= Q(13, 2)

    def test_requires_two_edge_connected(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)])
        with pytest.raises(LpError):
            normalize_below_one(g, _make_solution(g, [ONE, ONE]))


class TestSerialization:
    def test_json_schema(self):
        g = cycle(4)
        sol = solve_lp(g)
        doc = json.loads(sol.to_json(g))
        assert doc["n"] == 4
        assert doc["value"] == "4"
        assert doc["eps"] == "0"
        assert doc["x"] == [["0", "1", "1"], ["1", "2", "1"],
                            ["2", "3", "1"], ["0", "3", "1"]]

    def test_rationals_in_lowest_terms(self):
        g = complete(4)
        sol = solve_lp(g)
        doc = json.loads(sol.to_json(g))
        for (_, _, xs) in doc["x"]:
            if "/" in xs:
                p, q = map(int, xs.split("/"))
                from math import gcd

                assert gcd(p, q) == 1
