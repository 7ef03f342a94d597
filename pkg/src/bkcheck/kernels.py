"""Vectorised □ over every event of a small cube (n <= 4).

For an event A and a configuration x let F_A(x) be the family of index
sets K with [x]_K inside A, stored as a 2^n-bit word over K.  F_A(x) is
closed upwards, so x is in A □ B iff some K in F_A(x) has its complement
in F_B(x).  Tables of F for all 2^(2^n) events make a batch of pairs a few
array lookups.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .cube import CapExceeded, cylinder_table

KERNEL_MAX_N = 4


def _check(n: int):
    if not 0 <= n <= KERNEL_MAX_N:
        raise CapExceeded(f"table kernel supports n <= {KERNEL_MAX_N}")


@lru_cache(maxsize=None)
def family_tables(n: int) -> tuple[np.ndarray, np.ndarray]:
    """(F, G) with F[e, x] = F_e(x) and G[e, x] = F_e(x) with every K
    replaced by its complement."""
    _check(n)
    size = 1 << n
    events = np.arange(1 << size, dtype=np.uint32)
    fam = np.zeros((events.size, size), dtype=np.uint32)
    comp = np.zeros_like(fam)
    full = size - 1
    for x in range(size):
        for k in range(size):
            cyl = np.uint32(cylinder_table(n, x, k))
            inside = (events & cyl) == cyl
            fam[inside, x] |= np.uint32(1 << k)
            comp[inside, x] |= np.uint32(1 << (full ^ k))
    return fam, comp


@lru_cache(maxsize=None)
def bar_tables(n: int) -> np.ndarray:
    """bar[e] = truth table of the flipped event."""
    _check(n)
    size = 1 << n
    events = np.arange(1 << size, dtype=np.uint32)
    out = np.zeros_like(events)
    for x in range(size):
        out |= ((events >> np.uint32(x)) & np.uint32(1)) << np.uint32((size - 1) ^ x)
    return out


def box_tables(n: int, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Truth tables of A □ B for arrays of truth tables a, b."""
    fam, comp = family_tables(n)
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    hit = (fam[a] & comp[b]) != 0
    weights = np.left_shift(np.uint32(1), np.arange(1 << n, dtype=np.uint32))
    return (hit.astype(np.uint32) * weights).sum(axis=1, dtype=np.uint32)


def popcount(t: np.ndarray) -> np.ndarray:
    return np.bitwise_count(np.asarray(t, dtype=np.uint32)).astype(np.int64)
