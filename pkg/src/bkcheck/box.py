"""Disjoint occurrence A □ B.

Two routes are provided: :func:`box_general` works for arbitrary events by
computing, per configuration, the minimal index sets that force each event;
:func:`box_increasing` uses the minimal-element lists of increasing events
and is what the sweeps call.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cube import (
    CapExceeded,
    DimensionError,
    Event,
    IndexSet,
    cylinder_table,
    general_cap,
    up_table,
)


@dataclass(frozen=True)
class BoxWitness:
    K: IndexSet
    L: IndexSet

    def __post_init__(self):
        if self.K.members & self.L.members:
            raise ValueError("box witness index sets overlap")


def _subsets_by_size(n: int) -> list[int]:
    return sorted(range(1 << n), key=lambda s: (s.bit_count(), s))


@lru_cache(maxsize=1 << 16)
def witness_sets(n: int, table: int) -> tuple[tuple[int, ...], ...]:
    """For every configuration x, the minimal K with [x]_K inside the event.

    Sets are scanned by increasing size; any superset of a found witness is
    skipped since it cannot be minimal.
    """
    order = _subsets_by_size(n)
    out = []
    for x in range(1 << n):
        if not table >> x & 1:
            out.append(())
            continue
        found: list[int] = []
        for s in order:
            if any(f & s == f for f in found):
                continue
            if cylinder_table(n, x, s) & ~table == 0:
                found.append(s)
        out.append(tuple(found))
    return tuple(out)


def _check_pair(a: Event, b: Event):
    if a.n != b.n:
        raise DimensionError(f"events of dimension {a.n} and {b.n}")


def box_general(a: Event, b: Event) -> Event:
    _check_pair(a, b)
    if a.n > general_cap():
        raise CapExceeded(f"general box computation capped at n <= {general_cap()}")
    wa = witness_sets(a.n, a.table)
    wb = witness_sets(b.n, b.table)
    t = 0
    for x in range(1 << a.n):
        fa, fb = wa[x], wb[x]
        if fa and fb and any(k & l == 0 for k in fa for l in fb):
            t |= 1 << x
    return Event(a.n, t)


def box_general_with_witnesses(a: Event, b: Event) -> tuple[Event, dict[int, BoxWitness]]:
    """Like :func:`box_general`, also returning one (K, L) per member."""
    _check_pair(a, b)
    if a.n > general_cap():
        raise CapExceeded(f"general box computation capped at n <= {general_cap()}")
    n = a.n
    wa = witness_sets(n, a.table)
    wb = witness_sets(n, b.table)
    t = 0
    witnesses = {}
    for x in range(1 << n):
        for k in wa[x]:
            l = next((l for l in wb[x] if k & l == 0), None)
            if l is not None:
                t |= 1 << x
                witnesses[x] = BoxWitness(IndexSet(n, k), IndexSet(n, l))
                break
    return Event(n, t), witnesses


def box_naive(a: Event, b: Event) -> Event:
    """Triple loop over (omega, K, L) straight from the definition."""
    _check_pair(a, b)
    n = a.n
    t = 0
    for x in range(1 << n):
        ks = [k for k in range(1 << n) if cylinder_table(n, x, k) & ~a.table == 0]
        ls = [l for l in range(1 << n) if cylinder_table(n, x, l) & ~b.table == 0]
        if any(k & l == 0 for k in ks for l in ls):
            t |= 1 << x
    return Event(n, t)


def box_increasing_table(n: int, min_a: tuple[int, ...], min_b: tuple[int, ...]) -> int:
    t = 0
    for x in min_a:
        for y in min_b:
            if x & y == 0:
                t |= up_table(n, x | y)
    return t


def box_increasing(a: Event, b: Event) -> Event:
    _check_pair(a, b)
    if not (a.is_increasing and b.is_increasing):
        raise ValueError("box_increasing needs increasing events")
    ev = Event(a.n, box_increasing_table(a.n, a.minimal, b.minimal))
    ev.__dict__["is_increasing"] = True
    return ev


def box(a: Event, b: Event) -> Event:
    """Dispatch to the increasing route when both events allow it."""
    if a.is_increasing and b.is_increasing:
        return box_increasing(a, b)
    return box_general(a, b)
