"""Property checkers against brute-force oracles and theory facts."""

from __future__ import annotations

import pytest

try:
    from hypothesis import assume, given, settings, strategies as st
except ModuleNotFoundError:
    pytest.skip("hypothesis not installed", allow_module_level=True)

import oracles
from strategies import bigraphs, dense_bigraphs

from dhp import (
    Bigraph,
    BudgetExceededError,
    DomainError,
    Obstacle,
    VertexSet,
    WorkBudget,
    check_degree_bound,
    check_critical,
    check_dhp,
    check_saturated_critical,
    check_snp,
    check_snp_minimal,
    check_supercyclic,
    builtin_biplane,
    find_minimal_obstacle,
    is_obstacle,
    obstacle_is_minimal,
    pair_gadget,
)


class TestDhp:
    @given(bigraphs(min_nx=2))
    def test_matches_oracle(self, g: Bigraph) -> None:
        assert check_dhp(g).holds == oracles.dhp_bruteforce(g)

    @given(bigraphs(min_nx=2))
    def test_witness_is_first_violator(self, g: Bigraph) -> None:
        v = check_dhp(g)
        expect = oracles.first_deficient_subset(g)
        if expect is None:
            assert v.holds and v.witness is None
        else:
            assert not v.holds
            assert tuple(v.witness["S"]) == expect

    def test_small_x_rejected(self) -> None:
        with pytest.raises(DomainError):
            check_dhp(Bigraph.complete(1, 5))

    def test_known_instances(self) -> None:
        assert check_dhp(Bigraph.complete(2, 2)).holds
        assert not check_dhp(Bigraph.empty(2, 2)).holds
        # one shared neighbour is not enough for a pair
        g = Bigraph.from_edges(2, 3, [(0, 0), (1, 0), (0, 1), (1, 2)])
        v = check_dhp(g)
        assert not v.holds and v.witness["S"] == [0, 1]

    def test_budget_exhaustion_raises(self) -> None:
        with pytest.raises(BudgetExceededError):
            check_dhp(Bigraph.complete(8, 8), budget=10)

    def test_budget_sharing_across_calls(self) -> None:
        b = WorkBudget(10_000, "subset")
        check_dhp(Bigraph.complete(5, 5), budget=b)
        spent_once = 10_000 - b.remaining
        assert spent_once > 0
        check_dhp(Bigraph.complete(5, 5), budget=b)
        assert 10_000 - b.remaining == 2 * spent_once


class TestSnp:
    @given(bigraphs(min_nx=3, max_nx=4, max_ny=4))
    def test_matches_oracle(self, g: Bigraph) -> None:
        assert check_snp(g).holds == oracles.snp_bruteforce(g)

    @given(bigraphs(min_nx=3, max_nx=4, max_ny=4))
    def test_witness_reason_is_accurate(self, g: Bigraph) -> None:
        v = check_snp(g)
        if v.holds:
            return
        s = v.witness["S"]
        t = oracles.lambda2(g, s)
        if v.witness["reason"] == "cardinality":
            assert len(t) < len(s)
        else:
            assert len(t) >= len(s)
            assert not oracles.two_connected_bruteforce(g, set(s), t)

    def test_small_x_rejected(self) -> None:
        with pytest.raises(DomainError):
            check_snp(Bigraph.complete(2, 5))

    def test_complete_graphs_pass(self) -> None:
        assert check_snp(Bigraph.complete(3, 3)).holds
        assert check_snp(Bigraph.complete(5, 5)).holds

    def test_wide_complete_graph_fails_on_cardinality(self) -> None:
        # five X-vertices can never see five distinct Y-vertices twice
        # when only four exist
        v = check_snp(Bigraph.complete(5, 4))
        assert not v.holds
        assert v.witness == {"S": [0, 1, 2, 3, 4], "reason": "cardinality"}


class TestSupercyclic:
    @given(bigraphs(min_nx=3, max_nx=4, max_ny=4))
    @settings(deadline=None)
    def test_matches_oracle(self, g: Bigraph) -> None:
        v = check_supercyclic(g)
        assert v.holds == oracles.supercyclic_bruteforce(g)
        if not v.holds:
            assert not oracles.covering_cycle_exists(g, v.witness["S"])

    def test_small_x_rejected(self) -> None:
        with pytest.raises(DomainError):
            check_supercyclic(Bigraph.complete(2, 2))

    def test_biplanes_are_supercyclic(self) -> None:
        for order in (1, 2):
            assert check_supercyclic(builtin_biplane(order)).holds


class TestTheoryImplications:
    """Chains the implications between the three properties."""

    @given(dense_bigraphs(min_nx=3, max_nx=4, min_ny=2, max_ny=4))
    def test_dhp_implies_snp(self, g: Bigraph) -> None:
        assume(check_dhp(g).holds)
        assert check_snp(g).holds

    @given(dense_bigraphs(min_nx=3, max_nx=4, min_ny=2, max_ny=4))
    def test_supercyclic_implies_snp(self, g: Bigraph) -> None:
        assume(check_supercyclic(g).holds)
        assert check_snp(g).holds

    @given(dense_bigraphs(min_nx=3, max_nx=4, min_ny=2, max_ny=4))
    def test_small_snp_implies_supercyclic(self, g: Bigraph) -> None:
        # at seven or fewer X-vertices the two predicates coincide
        assume(check_snp(g).holds)
        assert check_supercyclic(g).holds


class TestCriticalFamily:
    def test_supercyclic_graph_is_not_critical(self) -> None:
        v = check_critical(builtin_biplane(1))
        assert not v.holds
        assert v.witness["clause"] == 1

    def test_non_snp_graph_is_not_critical(self) -> None:
        g = Bigraph.from_edges(
            3, 3, [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 2)]
        )
        v = check_critical(g)
        assert not v.holds and v.witness["clause"] == 1

    def test_saturated_needs_critical(self) -> None:
        v = check_saturated_critical(builtin_biplane(1))
        assert not v.holds
        assert v.witness["clause"] == "critical"

    def test_snp_minimal_flags_redundant_y(self) -> None:
        g = Bigraph.complete(3, 5)
        v = check_snp_minimal(g)
        assert not v.holds
        assert v.witness["clause"] == "redundant-y"
        assert v.witness["y"] == 0

    def test_snp_minimal_flags_non_snp(self) -> None:
        g = Bigraph.from_edges(
            3, 3, [(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (2, 2)]
        )
        v = check_snp_minimal(g)
        assert not v.holds and v.witness["clause"] == "snp"

    @given(dense_bigraphs(min_nx=3, max_nx=4, min_ny=2, max_ny=4))
    def test_snp_minimal_verdict_matches_deletion_scan(self, g: Bigraph) -> None:
        v = check_snp_minimal(g)
        snp_now = oracles.snp_bruteforce(g)
        if not snp_now:
            assert not v.holds and v.witness["clause"] == "snp"
            return
        deletions = []
        for y in range(g.ny):
            keep = [j for j in range(g.ny) if j != y]
            sub = Bigraph.from_edges(
                g.nx,
                len(keep),
                [
                    (i, keep.index(j))
                    for i, j in g.edges()
                    if j != y
                ],
            )
            deletions.append(oracles.snp_bruteforce(sub))
        assert v.holds == (not any(deletions))


class TestObstacles:
    @given(bigraphs(min_nx=2, max_nx=4, max_ny=4), st.data())
    def test_is_obstacle_matches_oracle(self, g: Bigraph, data) -> None:
        s_idx = data.draw(
            st.lists(st.integers(0, g.nx - 1), min_size=2, max_size=g.nx, unique=True)
        )
        t_size = data.draw(st.integers(0, max(0, g.ny - 1)))
        t_idx = data.draw(
            st.lists(
                st.integers(0, max(0, g.ny - 1)),
                min_size=t_size,
                max_size=t_size,
                unique=True,
            )
            if g.ny
            else st.just([])
        )
        s = VertexSet.xs(s_idx)
        t = VertexSet.ys(t_idx)
        assert is_obstacle(g, s, t) == oracles.is_obstacle_bruteforce(
            g, set(s_idx), set(t_idx)
        )
        assert obstacle_is_minimal(g, s, t) == oracles.is_minimal_obstacle_bruteforce(
            g, set(s_idx), set(t_idx)
        )

    def test_side_mixup_rejected(self) -> None:
        g = Bigraph.complete(2, 2)
        with pytest.raises(DomainError):
            is_obstacle(g, g.full_y(), g.full_y())

    @given(bigraphs(min_nx=2, max_nx=5, max_ny=5))
    def test_find_minimal_obstacle_agrees_with_dhp(self, g: Bigraph) -> None:
        obst = find_minimal_obstacle(g, g.nx)
        assert (obst is None) == check_dhp(g).holds
        if obst is not None:
            obst.validate(g)
            assert obst.minimal
            assert obstacle_is_minimal(g, obst.s, obst.t)

    def test_found_obstacle_is_first_in_order(self) -> None:
        # x0 and x2 share only y0; the pair (0, 1) shares two, so the
        # first violator in lexicographic order is (0, 2)
        g = Bigraph.from_edges(
            3,
            3,
            [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 0)],
        )
        obst = find_minimal_obstacle(g, 3)
        assert obst is not None
        assert obst.s.indices == (0, 2)

    def test_validate_rejects_non_obstacle(self) -> None:
        g = Bigraph.complete(3, 3)
        bad = Obstacle(
            s=VertexSet.xs([0, 1]), t=VertexSet.ys([0]), minimal=False
        )
        with pytest.raises(DomainError):
            bad.validate(g)


class TestDegreeBound:
    def test_report_fields(self) -> None:
        g = Bigraph.complete(3, 3)
        r = check_degree_bound(g)
        assert r.n == 3 and r.max_degree == 3
        assert r.bound == 4 and r.within_bound and not r.tight
        assert not r.dhp_verified

    def test_tight_for_biplanes(self) -> None:
        for order in range(4):
            g = builtin_biplane(order)
            r = check_degree_bound(g, verify_dhp=True)
            assert r.tight and r.within_bound and r.dhp_verified

    def test_verify_rejects_non_dhp(self) -> None:
        with pytest.raises(DomainError):
            check_degree_bound(Bigraph.empty(2, 2), verify_dhp=True)

    @given(dense_bigraphs(min_nx=2, max_nx=5, min_ny=2, max_ny=5))
    def test_bound_holds_whenever_dhp_does(self, g: Bigraph) -> None:
        assume(check_dhp(g).holds)
        r = check_degree_bound(g, verify_dhp=True)
        d = r.max_degree
        assert r.bound == d * (d - 1) // 2 + 1
        assert r.within_bound

    def test_pair_gadget_not_tight(self) -> None:
        r = check_degree_bound(pair_gadget(4), verify_dhp=True)
        assert r.within_bound and not r.tight
