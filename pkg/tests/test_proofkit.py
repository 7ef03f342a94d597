import random
from fractions import Fraction as F
from itertools import product

import pytest

from bkcheck.box import box_general
from bkcheck.cube import Event, IndexSet, all_events, bar_event, monotone_events, up_closure
from bkcheck.measures import hat_support, k_out_of_n_measure
from bkcheck.proofkit import (
    T_decode,
    T_encode,
    T_event,
    T_index_set,
    build_cell,
    check_box_section_inclusion,
    check_cell_partition,
    check_convex_decomposition,
    check_section_inclusion_all_pairs,
    check_T_bar_equality,
    check_T_inclusion,
    compose,
    section_event,
)


def cell_by_filter(K, alpha, k, n):
    """Filter every pair of weight-k configurations by the cell conditions."""
    full = (1 << n) - 1
    free = full & ~K
    omega = [x for x in range(1 << n) if x.bit_count() == k]
    return {(x, y) for x in omega for y in omega
            if x & K == alpha and y & K == alpha and x & free == (full ^ y) & free}


class TestCells:
    def test_examples(self):
        assert build_cell(IndexSet(2, 0), 0, 1, 2).pairs == {(0b01, 0b10), (0b10, 0b01)}
        # K = {1,2}, alpha = "10" -> word 0b01
        assert build_cell(IndexSet(2, 0b11), 0b01, 1, 2).pairs == {(0b01, 0b01)}
        assert build_cell(IndexSet.of(2, [1]), 0b01, 1, 2).pairs == frozenset()

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_matches_filter(self, n):
        for k in range(n + 1):
            for K in range(1 << n):
                alpha = K
                while True:
                    assert build_cell(IndexSet(n, K), alpha, k, n).pairs == cell_by_filter(K, alpha, k, n)
                    if alpha == 0:
                        break
                    alpha = (alpha - 1) & K

    def test_partition_examples(self):
        ok, summary = check_cell_partition(1, 2)
        assert ok and sum(summary.values()) == 4
        ok, summary = check_cell_partition(0, 3)
        assert ok and summary == {(0b111, 0): 1}
        ok, summary = check_cell_partition(2, 4)
        assert ok and sum(summary.values()) == 36

    @pytest.mark.parametrize("n", range(0, 6))
    def test_partition_all(self, n):
        for k in range(n + 1):
            ok, summary = check_cell_partition(k, n)
            assert ok
            for (kmask, alpha), count in summary.items():
                free = n - kmask.bit_count()
                assert free % 2 == 0
                assert alpha.bit_count() == k - free // 2


class TestSections:
    def test_examples(self):
        h = up_closure(3, ["110"])
        assert section_event(h, IndexSet(3, 0), 0) == h
        assert section_event(h, IndexSet.full(3), 0b011) == Event.full(0)
        assert section_event(h, IndexSet.full(3), 0b001) == Event.empty(0)
        assert section_event(h, IndexSet.of(3, [1]), 0b001) == up_closure(2, ["10"])

    def test_compose(self):
        K = IndexSet.of(4, [2, 3])
        assert compose(0b11, 0b0110, K) == 0b1111
        assert compose(0b01, 0b0010, K) == 0b0011

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_sections_of_increasing_are_increasing(self, n):
        for h in monotone_events(n):
            for kmask in range(1 << n):
                for alpha in range(1 << n):
                    if alpha & ~kmask:
                        continue
                    assert section_event(h, IndexSet(n, kmask), alpha).is_increasing

    def test_inclusion_k_empty_is_equality(self):
        rng = random.Random(0)
        for _ in range(50):
            a, b = Event(3, rng.getrandbits(8)), Event(3, rng.getrandbits(8))
            holds, strict = check_box_section_inclusion(a, b, IndexSet(3, 0), 0)
            assert holds and not strict

    def test_all_pairs_n3(self):
        holds, strict = check_section_inclusion_all_pairs(3)
        assert holds and strict > 0

    def test_vectorised_matches_scalar(self):
        rng = random.Random(1)
        for _ in range(200):
            a, b = Event(3, rng.getrandbits(8)), Event(3, rng.getrandbits(8))
            kmask = rng.getrandbits(3)
            alpha = rng.getrandbits(3) & kmask
            check_box_section_inclusion(a, b, IndexSet(3, kmask), alpha)

    def test_monotone_pairs_n4(self):
        evs = monotone_events(4)
        rng = random.Random(4)
        for a in evs:
            for b in rng.sample(evs, 12):
                kmask = rng.getrandbits(4)
                alpha = rng.getrandbits(4) & kmask
                assert check_box_section_inclusion(a, b, IndexSet(4, kmask), alpha)[0]


class TestTEncoding:
    def test_examples(self):
        # 1001 -> pairs (1,0),(0,1) -> "10"
        assert T_encode(0b1001, 4) == 0b01
        assert T_encode(0b01, 2) == 1

    def test_rejects_outside_hat(self):
        with pytest.raises(ValueError):
            T_encode(0b11, 2)

    @pytest.mark.parametrize("m", [2, 4, 6, 8])
    def test_bijection(self, m):
        hat = hat_support(m)
        images = {T_encode(x, m) for x in hat}
        assert images == set(range(1 << (m // 2)))
        assert all(T_decode(T_encode(x, m), m) == x for x in hat)

    def test_index_map(self):
        assert T_index_set(IndexSet.of(6, [1, 2, 5])).indices() == (1, 3)


def remark_pair():
    return up_closure(4, ["1010", "1001"]), up_closure(4, ["1010", "0110"])


class TestTInclusion:
    def test_remark_is_strict(self):
        a, b = remark_pair()
        res = check_T_inclusion(a, b, 4)
        assert res.left == Event.empty(2)
        assert res.right.strings() == ["11"]
        assert res.strict and res.witness == 0b11

    def test_full_events(self):
        res = check_T_inclusion(Event.full(4), Event.full(4), 4)
        assert res.left == res.right == Event.full(2)
        assert not res.strict

    def test_rejects_non_increasing(self):
        with pytest.raises(ValueError):
            check_T_inclusion(Event.explicit(4, ["1000"]), Event.full(4))

    def test_all_monotone_pairs_m4(self):
        evs = monotone_events(4)
        strict = 0
        for a in evs:
            for b in evs:
                strict += check_T_inclusion(a, b, 4).strict
        assert strict > 0


class TestTBar:
    def test_full(self):
        assert check_T_bar_equality(Event.full(4), Event.full(4), 4)

    def test_remark(self):
        a, b = remark_pair()
        assert check_T_bar_equality(a, b, 4)
        assert T_event(a & bar_event(b)) == T_event(a) & bar_event(T_event(b))

    def test_all_hat_restricted_pairs_m4(self):
        # only A ∩ hat and B ∩ hat enter either side
        hat = hat_support(4)
        for sa, sb in product(range(16), repeat=2):
            a = Event.explicit(4, [x for i, x in enumerate(hat) if sa >> i & 1])
            b = Event.explicit(4, [x for i, x in enumerate(hat) if sb >> i & 1])
            assert check_T_bar_equality(a, b, 4)

    def test_general_events_m4_random(self):
        # increasing is not needed: flipping preserves the pair-alternating set
        rng = random.Random(7)
        for _ in range(2000):
            assert check_T_bar_equality(Event(4, rng.getrandbits(16)), Event(4, rng.getrandbits(16)))

    def test_all_monotone_pairs_m4(self):
        evs = monotone_events(4)
        assert all(check_T_bar_equality(a, b, 4) for a in evs for b in evs)


class TestConvexDecomposition:
    @pytest.mark.parametrize("m", [2, 4, 6])
    def test_exact(self, m):
        ok, dev = check_convex_decomposition(m)
        assert ok and dev == 0

    def test_m2_values(self):
        assert k_out_of_n_measure(1, 2).masses[0b01] == F(1, 2)

    def test_odd_rejected(self):
        with pytest.raises(ValueError):
            check_convex_decomposition(3)
