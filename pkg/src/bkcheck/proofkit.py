"""Executable gadgets from the k-out-of-n BK argument.

Cells partition pairs of weight-k configurations; sections pin coordinates;
the T-encoding compresses pair-alternating configurations to half length;
averaging the pair-alternating measures over all permutations recovers the
balanced k-out-of-n measure.  Each gadget comes with a checker for the
property the argument relies on.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial

import numpy as np

from . import kernels

from .box import box_general
from .cube import DimensionError, Event, IndexSet, bar_event
from .measures import Permutation, hat_support, k_out_of_n_measure


class ProofInvariantError(AssertionError):
    """A property the argument proves was observed to fail."""


def _submasks(mask: int):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def _weight_k(n: int, k: int) -> list[int]:
    return [x for x in range(1 << n) if x.bit_count() == k]


# -- cells -------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    """Pairs (w, w') of weight-k configurations with w_K = w'_K = alpha and
    w, w' complementary off K.  ``alpha`` is a word whose bits lie in K."""

    n: int
    k: int
    K: IndexSet
    alpha: int
    pairs: frozenset[tuple[int, int]]


def build_cell(K: IndexSet, alpha: int, k: int, n: int) -> Cell:
    if K.n != n:
        raise DimensionError("index set dimension differs from n")
    if alpha & ~K.members:
        raise ValueError("alpha has bits outside K")
    full = (1 << n) - 1
    free = full & ~K.members
    pairs = set()
    for x in _weight_k(n, k):
        if x & K.members != alpha:
            continue
        y = alpha | (free & ~x)
        if y.bit_count() == k:
            pairs.add((x, y))
    cell = Cell(n, k, K, alpha, frozenset(pairs))
    if pairs:
        _assert_cell_counts(cell)
    return cell


def _assert_cell_counts(cell: Cell):
    free_size = cell.n - len(cell.K)
    free = ((1 << cell.n) - 1) & ~cell.K.members
    if free_size % 2 or cell.alpha.bit_count() != cell.k - free_size // 2:
        raise ProofInvariantError(f"non-empty cell violates |alpha| = k - (n - |K|)/2: {cell}")
    for x, y in cell.pairs:
        if (x & free).bit_count() != free_size // 2 or (y & free).bit_count() != free_size // 2:
            raise ProofInvariantError(f"pair {(x, y)} is unbalanced off K")


def check_cell_partition(k: int, n: int) -> tuple[bool, dict[tuple[int, int], int]]:
    """Do the cells over all (K, alpha) cover every pair exactly once?

    Returns the verdict and the pair count of each non-empty cell keyed by
    (K mask, alpha).
    """
    if n > 6:
        raise ValueError("cell partition check capped at n <= 6")
    seen = Counter()
    summary = {}
    for kmask in range(1 << n):
        K = IndexSet(n, kmask)
        for alpha in _submasks(kmask):
            cell = build_cell(K, alpha, k, n)
            if cell.pairs:
                summary[(kmask, alpha)] = len(cell.pairs)
                seen.update(cell.pairs)
    omega = _weight_k(n, k)
    ok = (len(seen) == len(omega) ** 2
          and all(c == 1 for c in seen.values())
          and all((x, y) in seen for x in omega for y in omega))
    return ok, summary


# -- sections ----------------------------------------------------------

def compose(gamma: int, alpha: int, K: IndexSet) -> int:
    """The configuration equal to gamma on K^c (in increasing index order)
    and alpha on K."""
    x = alpha
    j = 0
    for i in range(K.n):
        if not K.members >> i & 1:
            if gamma >> j & 1:
                x |= 1 << i
            j += 1
    return x


def section_event(H: Event, K: IndexSet, alpha: int) -> Event:
    """H(alpha) as an event on the coordinates of K^c, relabelled 1..n-|K|."""
    if H.n != K.n:
        raise DimensionError("event and index set dimensions differ")
    if alpha & ~K.members:
        raise ValueError("alpha has bits outside K")
    m = H.n - len(K)
    t = 0
    for g in range(1 << m):
        if compose(g, alpha, K) in H:
            t |= 1 << g
    return Event(m, t)


def check_box_section_inclusion(A: Event, B: Event, K: IndexSet, alpha: int) -> tuple[bool, bool]:
    """(A □ B)(alpha) inside A(alpha) □ B(alpha); returns (holds, strict)."""
    left = section_event(box_general(A, B), K, alpha)
    right = box_general(section_event(A, K, alpha), section_event(B, K, alpha))
    if not left.issubset(right):
        raise ProofInvariantError(
            f"section inclusion fails for K={K.indices()}, alpha={alpha}: {left} vs {right}")
    return True, left != right


# -- T-encoding --------------------------------------------------------

def in_hat(x: int, m: int) -> bool:
    return all((x >> (2 * i) & 1) ^ (x >> (2 * i + 1) & 1) for i in range(m // 2))


def T_encode(x: int, m: int) -> int:
    """Pair (1,0) -> 1, pair (0,1) -> 0."""
    if m % 2 or x >> m or not in_hat(x, m):
        raise ValueError(f"{x:#x} is not pair-alternating in {m} coordinates")
    return sum(1 << i for i in range(m // 2) if x >> (2 * i) & 1)


def T_decode(y: int, m: int) -> int:
    if m % 2 or y >> (m // 2):
        raise ValueError("T_decode argument out of range")
    return sum(1 << (2 * i if y >> i & 1 else 2 * i + 1) for i in range(m // 2))


def T_event(H: Event) -> Event:
    """T(H ∩ hat-Omega_m) as an event on m/2 coordinates."""
    m = H.n
    if m % 2:
        raise ValueError("T needs even dimension")
    return Event.explicit(m // 2, (T_encode(x, m) for x in H if in_hat(x, m)))


def T_index_set(K: IndexSet) -> IndexSet:
    """{ceil(i/2) : i in K}."""
    return IndexSet.of(K.n // 2, {(i + 1) // 2 for i in K.indices()})


@dataclass(frozen=True)
class TInclusionResult:
    holds: bool
    strict: bool
    left: Event
    right: Event
    witness: int | None


def check_T_inclusion(A: Event, B: Event, m: int | None = None) -> TInclusionResult:
    """T((A □ B) ∩ hat) inside T(A ∩ hat) □ T(B ∩ hat), for increasing A, B."""
    if A.n != B.n or (m is not None and m != A.n):
        raise DimensionError("T inclusion needs events on the same even dimension")
    if not (A.is_increasing and B.is_increasing):
        raise ValueError("T inclusion is stated for increasing events")
    left = T_event(box_general(A, B))
    right = box_general(T_event(A), T_event(B))
    if not left.issubset(right):
        raise ProofInvariantError(f"T inclusion fails: {left} not inside {right}")
    extra = right - left
    witness = next(iter(extra), None)
    return TInclusionResult(True, bool(len(extra)), left, right, witness)


def check_T_bar_equality(A: Event, B: Event, m: int | None = None) -> bool:
    """T(A ∩ B-bar ∩ hat) == T(A ∩ hat) ∩ bar(T(B ∩ hat)); any events."""
    if A.n != B.n or (m is not None and m != A.n):
        raise DimensionError("events must share the even dimension m")
    left = T_event(A & bar_event(B))
    right = T_event(A) & bar_event(T_event(B))
    return left == right


# -- convex decomposition ---------------------------------------------

def check_convex_decomposition(m: int) -> tuple[bool, Fraction]:
    """Average the pair-alternating measures over all m! permutations and
    compare with the m/2-out-of-m measure.  Returns (exact, max deviation)."""
    if m % 2 or m > 8:
        raise ValueError("convex decomposition check needs even m <= 8")
    hits = [0] * (1 << m)
    for p in permutations(range(1, m + 1)):
        for x in hat_support(m, Permutation(p)):
            hits[x] += 1
    per_point = Fraction(1, 1 << (m // 2))
    avg = [Fraction(h) * per_point / factorial(m) for h in hits]
    target = k_out_of_n_measure(m // 2, m).masses
    dev = max(abs(a - b) for a, b in zip(avg, target))
    return dev == 0, dev


def section_tables(n: int, K: IndexSet, alpha: int) -> np.ndarray:
    """sec[t] = truth table of the section of event t, for every event on n <= 4."""
    m = n - len(K)
    events = np.arange(1 << (1 << n), dtype=np.uint32)
    out = np.zeros_like(events)
    for g in range(1 << m):
        x = compose(g, alpha, K)
        out |= ((events >> np.uint32(x)) & np.uint32(1)) << np.uint32(g)
    return out


def check_section_inclusion_all_pairs(n: int) -> tuple[bool, int]:
    """The section inclusion for every ordered pair of events on n <= 3 and
    every (K, alpha).  Returns (holds, number of strict instances)."""
    if n > 3:
        raise ValueError("all-pairs section check needs n <= 3")
    e = 1 << (1 << n)
    idx = np.arange(e * e, dtype=np.int64)
    a, b = idx // e, idx % e
    boxed = kernels.box_tables(n, a, b)
    strict = 0
    for kmask in range(1 << n):
        K = IndexSet(n, kmask)
        for alpha in _submasks(kmask):
            sec = section_tables(n, K, alpha)
            left = sec[boxed]
            right = kernels.box_tables(n - len(K), sec[a], sec[b])
            if np.any(left & ~right):
                bad = int(np.flatnonzero(left & ~right)[0])
                raise ProofInvariantError(
                    f"section inclusion fails for pair {divmod(bad, e)}, K={K.indices()}, alpha={alpha}")
            strict += int(np.count_nonzero(left != right))
    return True, strict
