from fractions import Fraction as F

import numpy as np
import pytest

import oracles
from bkcheck.cube import Event, IndexSet, all_events, monotone_events, up_closure
from bkcheck.measures import (
    MixingVariable,
    k_out_of_n_measure,
    measure_of,
    mixture_measure,
    product_measure,
    project,
    tensor,
    weighted_k_out_of_n_measure,
)
from bkcheck.verify import (
    OrthogonalityError,
    Universe,
    check_bk,
    check_hat,
    check_na,
    check_prop2,
    check_reimer_cardinality,
    is_bk_measure,
    minimal_sets,
    monte_carlo_bk,
    pmf_grid,
    projection_variables,
    search_mixtures,
    sweep,
)

A10 = up_closure(2, ["10"])
B01 = up_closure(2, ["01"])


def two_point():
    return mixture_measure(MixingVariable((F(1, 2), 0, F(1, 2))), [1, 1], 2)


class TestCheckBK:
    def test_k_out_of_n_example(self):
        rep = check_bk(k_out_of_n_measure(1, 2), A10, B01)
        assert (rep.lhs, rep.rhs, rep.holds) == (0, F(1, 4), True)

    def test_full_event_equality(self):
        mu = weighted_k_out_of_n_measure(2, 3, [1, 2, 3])
        b = up_closure(3, ["001"])
        rep = check_bk(mu, Event.full(3), b)
        assert rep.lhs == rep.rhs == measure_of(mu, b)

    def test_two_point_violation(self):
        rep = check_bk(two_point(), A10, B01)
        assert (rep.lhs, rep.rhs) == (F(1, 2), F(1, 4))
        assert not rep.holds and rep.slack == F(-1, 4)
        assert rep.witness["A"]["monotone_minimal"] == ["10"]

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            check_bk(k_out_of_n_measure(1, 3), A10, B01)

    def test_against_tuple_reference(self):
        n, k = 3, 1
        mu_ref = oracles.k_out_of_n(k, n)
        mu = k_out_of_n_measure(k, n)
        for a in monotone_events(n):
            for b in monotone_events(n):
                sa = {oracles.tup(x, n) for x in a}
                sb = {oracles.tup(x, n) for x in b}
                rep = check_bk(mu, a, b)
                assert rep.lhs == oracles.prob(mu_ref, oracles.box(sa, sb, n))
                assert rep.rhs == oracles.prob(mu_ref, sa) * oracles.prob(mu_ref, sb)


class TestReimer:
    def test_examples(self, ev):
        rep = check_reimer_cardinality(Event.full(3), Event.full(3))
        assert rep.lhs == rep.rhs == 8
        rep = check_reimer_cardinality(ev(2, "10", "11"), ev(2, "01", "11"))
        assert (rep.lhs, rep.rhs) == (1, 1)

    def test_pair_alternating_counterexample_pair(self):
        a, b = up_closure(4, ["1010", "1001"]), up_closure(4, ["1010", "0110"])
        rep = check_reimer_cardinality(a, b)
        assert rep.lhs == 1 and rep.holds
        # A ∩ B-bar: w1 = 1, (w3 or w4), and not (w3 and (w1 or w2)) after flipping
        assert rep.rhs == len([x for x in a if (15 ^ x) in b])


class TestProp2:
    def test_example(self):
        rep = check_prop2(2, A10, B01)
        assert (rep.lhs, rep.rhs) == (0, F(1, 2))

    def test_empty(self):
        rep = check_prop2(2, Event.empty(2), B01)
        assert rep.lhs == rep.rhs == 0

    def test_errors(self, ev):
        with pytest.raises(ValueError):
            check_prop2(3, up_closure(3, ["100"]), up_closure(3, ["010"]))
        with pytest.raises(ValueError):
            check_prop2(2, ev(2, "10"), B01)

    def test_sweep_m4(self):
        rep = sweep(None, Universe("monotone", 4), "prop2")
        assert rep.ok and rep.pairs_checked == 168 ** 2

    def test_hat_version(self):
        assert check_hat(2, A10, B01).holds
        assert sweep(None, Universe("monotone", 4), "hat").ok


class TestNA:
    def test_example(self):
        rep = check_na(k_out_of_n_measure(1, 2), A10, B01, IndexSet.of(2, [1]), IndexSet.of(2, [2]))
        assert (rep.lhs, rep.rhs) == (0, F(1, 4))

    def test_full(self):
        mu = k_out_of_n_measure(1, 2)
        rep = check_na(mu, Event.full(2), B01, IndexSet(2, 0), IndexSet.of(2, [2]))
        assert rep.lhs == rep.rhs

    def test_determination_enforced(self):
        mu = k_out_of_n_measure(1, 2)
        with pytest.raises(OrthogonalityError):
            check_na(mu, A10, B01, IndexSet.of(2, [2]), IndexSet.of(2, [1]))
        with pytest.raises(OrthogonalityError):
            check_na(mu, A10, B01, IndexSet.of(2, [1, 2]), IndexSet.of(2, [2]))

    @pytest.mark.parametrize("n, k", [(3, 1), (4, 2)])
    def test_bk_na_identity(self, n, k):
        mu = k_out_of_n_measure(k, n)
        evs = monotone_events(n)
        checked = 0
        for a in evs:
            for b in evs:
                if a.dependency & b.dependency:
                    continue
                na = check_na(mu, a, b, IndexSet(n, a.dependency), IndexSet(n, b.dependency))
                bk = check_bk(mu, a, b)
                assert na.lhs == bk.lhs
                assert na.holds and bk.holds
                checked += 1
        assert checked > 0

    def test_na_sweep_counts(self):
        rep = sweep(k_out_of_n_measure(2, 4), Universe("monotone", 4), "na")
        assert rep.ok
        assert rep.pairs_checked + rep.pairs_skipped == 168 ** 2


class TestSweep:
    def test_k_out_of_n_n3_k1(self):
        rep = sweep(k_out_of_n_measure(1, 3), Universe("monotone", 3))
        assert rep.pairs_checked == 400 and rep.ok and rep.min_slack == 0

    def test_product_all_events_n2(self):
        rep = sweep(product_measure([F(1, 2)] * 2), Universe("all", 2))
        assert rep.pairs_checked == 256 and rep.ok

    def test_two_point_violation(self):
        rep = sweep(two_point(), Universe("monotone", 2))
        assert not rep.ok and rep.severity == "finding"
        assert rep.min_slack == F(-1, 4)
        pairs = {(tuple(v["A"]["monotone_minimal"]), tuple(v["B"]["monotone_minimal"]))
                 for v in rep.violations}
        assert (("10",), ("01",)) in pairs

    def test_sweep_matches_single_checks(self):
        mu = weighted_k_out_of_n_measure(2, 3, [1, 2, 3])
        rep = sweep(mu, Universe("monotone", 3), collect_rows=True)
        evs = monotone_events(3)
        for row in rep.rows:
            i, j = divmod(row["pair_index"], len(evs))
            single = check_bk(mu, evs[i], evs[j])
            assert row["lhs"] == f"{single.lhs.numerator}/{single.lhs.denominator}"
            assert row["rhs"] == f"{single.rhs.numerator}/{single.rhs.denominator}"

    def test_general_universe_non_product_is_finding(self):
        # all-events BK fails for non-product measures; that is a finding, not a defect
        rep = sweep(k_out_of_n_measure(1, 2), Universe("all", 2))
        assert not rep.ok and rep.severity == "finding"

    def test_infeasible_universe(self):
        with pytest.raises(ValueError):
            Universe("all", 4)
        with pytest.raises(ValueError):
            Universe("monotone", 6)

    def test_workers_do_not_change_result(self):
        mu = k_out_of_n_measure(2, 4)
        r1 = sweep(mu, Universe("monotone", 4), workers=1)
        r2 = sweep(mu, Universe("monotone", 4), workers=2)
        assert r1.summary() == r2.summary()

    def test_random_universe_deterministic(self):
        u = Universe("random", 4, count=70_000, seed=3)
        r1 = sweep(None, u, "reimer", workers=1)
        r2 = sweep(None, u, "reimer", workers=3)
        assert r1.summary() == r2.summary() and r1.ok

    def test_reimer_random_matches_scalar(self):
        u = Universe("random", 4, count=300, seed=5)
        rep = sweep(None, u, "reimer", collect_rows=True)
        for row in rep.rows:
            a = Event(4, int(row["A"][::-1], 2))
            b = Event(4, int(row["B"][::-1], 2))
            single = check_reimer_cardinality(a, b)
            assert row["lhs"] == f"{int(single.lhs)}/1"
            assert row["rhs"] == f"{int(single.rhs)}/1"


class TestBKMeasure:
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_k_out_of_n(self, n):
        for k in range(n + 1):
            assert is_bk_measure(k_out_of_n_measure(k, n)).is_bk

    def test_weighted(self):
        assert is_bk_measure(weighted_k_out_of_n_measure(2, 3, [1, 2, 3])).is_bk

    def test_two_point(self):
        v = is_bk_measure(two_point())
        assert not v.is_bk
        assert v.worst.slack == F(-1, 4)
        assert v.worst.witness == {"A": {"n": 2, "monotone_minimal": ["10"]},
                                   "B": {"n": 2, "monotone_minimal": ["01"]}}

    def test_tensor(self):
        assert is_bk_measure(tensor([k_out_of_n_measure(1, 2)] * 2)).is_bk

    def test_projection(self):
        parent = weighted_k_out_of_n_measure(2, 4, [1, 2, 1, 3])
        assert is_bk_measure(project(parent, IndexSet.of(4, [1, 2, 3]))).is_bk


class TestSearch:
    def test_grid_size(self):
        assert len(pmf_grid(2, 4)) == 15
        assert all(sum(X.pmf) == 1 for X in pmf_grid(3, 3))

    def test_projection_law_matches_projected_measure(self):
        w = [1, F(1, 2), 2]
        for X, d in projection_variables(3, w, max_aux=2):
            aux = [F(a) for a in d["aux"]]
            parent = weighted_k_out_of_n_measure(d["k"], 3 + d["m"], list(map(F, w)) + aux)
            proj = project(parent, IndexSet.of(3 + d["m"], [1, 2, 3]))
            assert mixture_measure(X, w, 3).masses == proj.masses

    def test_point_masses_are_bk(self):
        rep = search_mixtures(2, [1, 2], candidates=[MixingVariable.point(k, 2) for k in range(3)],
                              include_projections=False)
        assert all(e["bk"] for e in rep.entries)

    def test_two_point_not_bk(self):
        rep = search_mixtures(2, [1, 1], candidates=[MixingVariable((F(1, 2), 0, F(1, 2)))],
                              include_projections=False)
        (entry,) = rep.entries
        assert not entry["bk"] and entry["min_slack"] == "-1/4"

    def test_budget_marks_partial(self):
        rep = search_mixtures(2, [1, 1], grid_denominator=4, include_projections=False, budget=3)
        assert rep.partial and len(rep.entries) == 3
        assert "best-effort" in rep.summary()["note"]

    def test_projection_tags(self):
        rep = search_mixtures(2, [1, 1], grid_denominator=2, max_aux=1)
        tagged = [e for e in rep.entries if e["projection_match"] is not None]
        assert tagged and all(e["bk"] for e in tagged)

    def test_random_candidates_reproducible(self):
        r1 = search_mixtures(2, [1, 1], random_count=5, seed=4, include_projections=False)
        r2 = search_mixtures(2, [1, 1], random_count=5, seed=4, include_projections=False)
        assert r1.summary() == r2.summary()


class TestMonteCarlo:
    def test_empty_a(self):
        rep = monte_carlo_bk(2, 5, [1] * 5, [], [[1]], 2000, seed=1)
        assert rep.p_box == 0 and rep.p_a == 0

    def test_invalid_antichain(self):
        with pytest.raises(ValueError):
            monte_carlo_bk(2, 5, [1] * 5, [[1], [1, 2]], [[3]], 100, seed=1)
        with pytest.raises(ValueError):
            monte_carlo_bk(2, 5, [1] * 5, [[9]], [[3]], 100, seed=1)

    def test_cross_validation_with_exact(self):
        n, k = 5, 2
        a_sets, b_sets = [[1, 2], [3]], [[4], [2, 5]]
        rep = monte_carlo_bk(k, n, [1] * n, a_sets, b_sets, 200_000, seed=7)
        mu = k_out_of_n_measure(k, n)
        a = up_closure(n, ["11000", "00100"])
        b = up_closure(n, ["00010", "01001"])
        rb = check_bk(mu, a, b)
        assert abs(rep.p_a - float(measure_of(mu, a))) <= 3 * rep.se_a
        assert abs(rep.p_b - float(measure_of(mu, b))) <= 3 * rep.se_b
        assert abs(rep.p_box - float(rb.lhs)) <= 3 * rep.se_box
        assert rep.verdict == "consistent"

    def test_minimal_sets(self):
        assert minimal_sets([[1, 2], [1], [3, 4], [4, 3, 5]]) == [frozenset({1}), frozenset({3, 4})]

    def test_alice_bob_scale(self):
        rng = np.random.default_rng(0)
        alice = minimal_sets(rng.choice(30, size=3, replace=False) + 1 for _ in range(8))
        bob = minimal_sets(rng.choice(30, size=3, replace=False) + 1 for _ in range(8))
        rep = monte_carlo_bk(10, 30, [1] * 30, alice, bob, 100_000, seed=11)
        assert rep.verdict == "consistent"
