"""Brute-force references built on tuples and sets only.

Nothing here imports the package; tests convert between the two worlds.
"""

from fractions import Fraction
from itertools import chain, combinations, product


def cube(n):
    return list(product((0, 1), repeat=n))


def word(t):
    """Tuple (w_1..w_n) -> integer word with bit i = w_{i+1}."""
    return sum(1 << i for i, v in enumerate(t) if v)


def tup(x, n):
    return tuple(x >> i & 1 for i in range(n))


def subsets(n):
    return list(chain.from_iterable(combinations(range(n), r) for r in range(n + 1)))


def cylinder_inside(w, K, E, n):
    return all(a in E for a in cube(n) if all(a[i] == w[i] for i in K))


def box(A, B, n):
    """Disjoint occurrence straight from the definition."""
    out = set()
    for w in cube(n):
        ks = [K for K in subsets(n) if cylinder_inside(w, K, A, n)]
        ls = [L for L in subsets(n) if cylinder_inside(w, L, B, n)]
        if any(not set(K) & set(L) for K in ks for L in ls):
            out.add(w)
    return out


def is_increasing(E, n):
    return all(b in E for a in E for b in cube(n) if all(x <= y for x, y in zip(a, b)))


def all_monotone_by_filter(n):
    pts = cube(n)
    out = []
    for mask in range(1 << len(pts)):
        E = {p for i, p in enumerate(pts) if mask >> i & 1}
        if is_increasing(E, n):
            out.append(E)
    return out


def count_antichains(n):
    """Number of antichains of the subset lattice of [n] (= Dedekind number)."""
    sets = [frozenset(s) for s in subsets(n)]

    def rec(i, chosen):
        if i == len(sets):
            return 1
        total = rec(i + 1, chosen)
        s = sets[i]
        if all(not (s <= c or c <= s) for c in chosen):
            total += rec(i + 1, chosen + [s])
        return total

    return rec(0, [])


def k_out_of_n(k, n):
    pts = [p for p in cube(n) if sum(p) == k]
    return {p: Fraction(1, len(pts)) for p in pts}


def weighted(k, n, w):
    raw = {}
    for p in cube(n):
        if sum(p) == k:
            m = Fraction(1)
            for wi, v in zip(w, p):
                if v:
                    m *= Fraction(wi)
            raw[p] = m
    tot = sum(raw.values())
    return {p: m / tot for p, m in raw.items() if m}


def prob(mu, E):
    return sum((mu.get(p, Fraction(0)) for p in E), Fraction(0))


def esp_bruteforce(w, j):
    tot = Fraction(0)
    for c in combinations(w, j):
        m = Fraction(1)
        for x in c:
            m *= Fraction(x)
        tot += m
    return tot
