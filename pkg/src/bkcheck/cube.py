"""Configurations, events and monotone structure on the hypercube {0,1}^n.

Bit convention: bit ``i`` of a configuration word is coordinate ``i + 1``.
Bitstrings are written coordinate 1 first, so ``"100"`` is the word ``0b001``.

An :class:`Event` is stored as a truth table: an integer whose bit ``x`` is
set iff the configuration with word ``x`` belongs to the event.  This keeps
equality canonical and makes set algebra single big-int operations.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Iterator

MAX_CONFIG_N = 64


class DimensionError(ValueError):
    """Objects of different dimensions were combined."""


class CapExceeded(ValueError):
    """A size cap guarding an exhaustive computation was exceeded."""


def dense_cap() -> int:
    return int(os.environ.get("BKCHECK_DENSE_CAP", "20"))


def monotone_cap() -> int:
    return int(os.environ.get("BKCHECK_MONOTONE_CAP", "5"))


def general_cap() -> int:
    return int(os.environ.get("BKCHECK_GENERAL_CAP", "5"))


def bits_to_str(bits: int, n: int) -> str:
    return "".join("1" if bits >> i & 1 else "0" for i in range(n))


def str_to_bits(s: str) -> int:
    if any(c not in "01" for c in s):
        raise ValueError(f"malformed bitstring {s!r}")
    return sum(1 << i for i, c in enumerate(s) if c == "1")


@dataclass(frozen=True, order=True)
class Config:
    """One vertex of {0,1}^n."""

    n: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.n <= MAX_CONFIG_N:
            raise CapExceeded(f"config dimension {self.n} outside [0, {MAX_CONFIG_N}]")
        if self.bits < 0 or self.bits >> self.n:
            raise ValueError(f"bits {self.bits:#x} do not fit in {self.n} coordinates")

    @classmethod
    def parse(cls, s: str) -> "Config":
        return cls(len(s), str_to_bits(s))

    def __str__(self) -> str:
        return bits_to_str(self.bits, self.n)

    def __getitem__(self, i: int) -> int:
        """Coordinate ``i`` (1-based, as omega_i)."""
        if not 1 <= i <= self.n:
            raise IndexError(i)
        return self.bits >> (i - 1) & 1

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i + 1 for i in range(self.n) if self.bits >> i & 1)

    @property
    def weight(self) -> int:
        return self.bits.bit_count()


@dataclass(frozen=True)
class IndexSet:
    """A subset of [n] stored as an n-bit mask (bit i is index i + 1)."""

    n: int
    members: int

    def __post_init__(self):
        if self.members < 0 or self.members >> self.n:
            raise ValueError(f"index set {self.members:#x} not inside [{self.n}]")

    @classmethod
    def of(cls, n: int, indices: Iterable[int]) -> "IndexSet":
        mask = 0
        for i in indices:
            if not 1 <= i <= n:
                raise ValueError(f"index {i} outside [1, {n}]")
            mask |= 1 << (i - 1)
        return cls(n, mask)

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(n, (1 << n) - 1)

    def complement(self) -> "IndexSet":
        return IndexSet(self.n, ((1 << self.n) - 1) & ~self.members)

    def indices(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.n) if self.members >> i & 1)

    def __len__(self) -> int:
        return self.members.bit_count()

    def __contains__(self, i: int) -> bool:
        return 1 <= i <= self.n and bool(self.members >> (i - 1) & 1)


def _full_table(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=None)
def coordinate_tables(n: int) -> tuple[int, ...]:
    """Truth tables of the events {omega_i = 1}, one per coordinate."""
    tables = []
    for i in range(n):
        block = 1 << i
        # runs of `block` zeros then `block` ones, repeated
        pattern = ((1 << block) - 1) << block
        t = 0
        for start in range(0, 1 << n, 2 * block):
            t |= pattern << start
        tables.append(t)
    return tuple(tables)


def up_table(n: int, bits: int) -> int:
    """Truth table of the principal up-set {x : x >= bits}."""
    t = _full_table(n)
    for i, ci in enumerate(coordinate_tables(n)):
        if bits >> i & 1:
            t &= ci
    return t


def cylinder_table(n: int, bits: int, members: int) -> int:
    """Truth table of [omega]_S for omega=bits, S=members."""
    full = _full_table(n)
    t = full
    for i, ci in enumerate(coordinate_tables(n)):
        if members >> i & 1:
            t &= ci if bits >> i & 1 else full & ~ci
    return t


def _raise_shift(n: int, table: int) -> int:
    """Configurations reachable from `table` by setting one zero coordinate."""
    out = 0
    full = _full_table(n)
    for i, ci in enumerate(coordinate_tables(n)):
        out |= ((table & (full & ~ci)) << (1 << i))
    return out


class Event:
    """A subset of {0,1}^n.

    ``table`` is the canonical explicit form.  For increasing events the
    antichain of minimal elements is computed once and cached.
    """

    def __init__(self, n: int, table: int):
        if n < 0:
            raise ValueError("negative dimension")
        if n > dense_cap():
            raise CapExceeded(f"explicit events need n <= {dense_cap()}, got {n}")
        if table < 0 or table >> (1 << n):
            raise ValueError("truth table has bits outside the cube")
        self.n = n
        self.table = table

    # -- constructors -------------------------------------------------
    @classmethod
    def explicit(cls, n: int, members: Iterable[int | Config | str]) -> "Event":
        t = 0
        for m in members:
            if isinstance(m, str):
                if len(m) != n:
                    raise DimensionError(f"bitstring {m!r} has length != {n}")
                m = str_to_bits(m)
            elif isinstance(m, Config):
                if m.n != n:
                    raise DimensionError(f"config of dimension {m.n} in event of dimension {n}")
                m = m.bits
            if not 0 <= m < 1 << n:
                raise ValueError(f"config {m} outside dimension {n}")
            t |= 1 << m
        return cls(n, t)

    @classmethod
    def empty(cls, n: int) -> "Event":
        return cls(n, 0)

    @classmethod
    def full(cls, n: int) -> "Event":
        return cls(n, _full_table(n))

    @classmethod
    def from_predicate(cls, n: int, pred) -> "Event":
        return cls(n, sum(1 << x for x in range(1 << n) if pred(x)))

    # -- basic protocol -----------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Event) and self.n == other.n and self.table == other.table

    def __hash__(self):
        return hash((self.n, self.table))

    def __repr__(self):
        return f"Event(n={self.n}, {{{', '.join(self.strings())}}})"

    def __contains__(self, x: int | Config) -> bool:
        if isinstance(x, Config):
            if x.n != self.n:
                raise DimensionError("config/event dimension mismatch")
            x = x.bits
        return bool(self.table >> x & 1)

    def __iter__(self) -> Iterator[int]:
        t, x = self.table, 0
        while t:
            if t & 1:
                yield x
            t >>= 1
            x += 1

    def __len__(self) -> int:
        return self.table.bit_count()

    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def strings(self) -> list[str]:
        return [bits_to_str(x, self.n) for x in self]

    def _check(self, other: "Event"):
        if self.n != other.n:
            raise DimensionError(f"events of dimension {self.n} and {other.n}")

    def __and__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.n, self.table & other.table)

    def __or__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.n, self.table | other.table)

    def __sub__(self, other: "Event") -> "Event":
        self._check(other)
        return Event(self.n, self.table & ~other.table)

    def complement(self) -> "Event":
        return Event(self.n, _full_table(self.n) & ~self.table)

    def issubset(self, other: "Event") -> bool:
        self._check(other)
        return self.table & ~other.table == 0

    # -- monotone structure -------------------------------------------
    @cached_property
    def is_increasing(self) -> bool:
        return _raise_shift(self.n, self.table) & ~self.table == 0

    @cached_property
    def minimal(self) -> tuple[int, ...]:
        """Minimal elements (ascending words); only for increasing events."""
        if not self.is_increasing:
            raise ValueError("minimal elements requested for a non-increasing event")
        return tuple(Event(self.n, self.table & ~_raise_shift(self.n, self.table)))

    @cached_property
    def dependency(self) -> int:
        """Mask of the coordinates the event actually depends on."""
        dep = 0
        full = _full_table(self.n)
        for i, ci in enumerate(coordinate_tables(self.n)):
            lo = self.table & (full & ~ci)
            hi = (self.table & ci) >> (1 << i)
            if lo != hi:
                dep |= 1 << i
        return dep


def flip(omega: Config) -> Config:
    return Config(omega.n, ((1 << omega.n) - 1) ^ omega.bits)


def bar_event(a: Event) -> Event:
    mask = (1 << a.n) - 1
    return Event.explicit(a.n, (mask ^ x for x in a))


def cylinder_subset(omega: Config, s: IndexSet, a: Event) -> bool:
    """Whether [omega]_S is contained in A."""
    if not omega.n == s.n == a.n:
        raise DimensionError("cylinder_subset dimension mismatch")
    if a.is_increasing:
        return (omega.bits & s.members) in a
    return cylinder_subset_oracle(omega, s, a)


def cylinder_subset_oracle(omega: Config, s: IndexSet, a: Event) -> bool:
    """Enumerate every completion of omega off S."""
    free = [i for i in range(a.n) if not s.members >> i & 1]
    base = omega.bits & s.members
    for r in range(len(free) + 1):
        for chosen in combinations(free, r):
            x = base | sum(1 << i for i in chosen)
            if x not in a:
                return False
    return True


def is_increasing(a: Event) -> bool:
    return a.is_increasing


def minimal_elements(a: Event) -> frozenset[Config]:
    return frozenset(Config(a.n, x) for x in a.minimal)


def _is_antichain(words: list[int]) -> bool:
    for x in words:
        for y in words:
            if x != y and x & y == x:
                return False
    return True


def up_closure(n: int, antichain: Iterable[int | Config | str]) -> Event:
    """Upward closure of an antichain, as an explicit increasing event."""
    words = list(Event.explicit(n, antichain))
    if not _is_antichain(words):
        raise ValueError("up_closure input is not an antichain")
    t = 0
    for x in words:
        t |= up_table(n, x)
    ev = Event(n, t)
    ev.__dict__["is_increasing"] = True
    ev.__dict__["minimal"] = tuple(sorted(words))
    return ev


@lru_cache(maxsize=None)
def _monotone_tables(n: int) -> tuple[int, ...]:
    if n <= 3:
        full = _full_table(n)
        return tuple(t for t in range(full + 1)
                     if _raise_shift(n, t) & ~t == 0)
    # Split on the last coordinate: A = A0 (omega_n = 0) and A1 (omega_n = 1)
    # with A0 <= A1, both increasing in n - 1 coordinates.
    lower = _monotone_tables(n - 1)
    half = 1 << (n - 1)
    out = [a0 | (a1 << half) for a1 in lower for a0 in lower if a0 & ~a1 == 0]
    out.sort()
    return tuple(out)


def enumerate_monotone_events(n: int) -> Iterator[Event]:
    """Every increasing event on {0,1}^n, in ascending truth-table order."""
    if n < 0:
        raise ValueError("negative dimension")
    if n > monotone_cap():
        raise CapExceeded(f"monotone enumeration capped at n <= {monotone_cap()}")
    for t in _monotone_tables(n):
        ev = Event(n, t)
        ev.__dict__["is_increasing"] = True
        yield ev


def monotone_events(n: int) -> list[Event]:
    return list(enumerate_monotone_events(n))


def all_events(n: int) -> Iterator[Event]:
    if n > 3:
        raise CapExceeded("enumerating all events needs n <= 3")
    for t in range(_full_table(n) + 1):
        yield Event(n, t)
