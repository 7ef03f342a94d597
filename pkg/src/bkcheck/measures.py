"""Exact probability measures on {0,1}^n and a conditional Poisson sampler."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from itertools import combinations
from math import comb, lcm
from typing import Any, Sequence

import numpy as np

from .cube import CapExceeded, Config, DimensionError, Event, IndexSet, dense_cap

Rational = Fraction | int | str


def frac(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def frac_str(x: Fraction) -> str:
    x = frac(x)
    return f"{x.numerator}/{x.denominator}"


class NotNormalizable(ValueError):
    """Every configuration of the requested weight has zero mass."""


@dataclass(frozen=True)
class Permutation:
    """A bijection on [m]; ``mapping[i - 1]`` is the image of i."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.mapping) != list(range(1, len(self.mapping) + 1)):
            raise ValueError(f"{self.mapping} is not a permutation")

    @property
    def m(self) -> int:
        return len(self.mapping)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(tuple(range(1, m + 1)))

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]


@dataclass(frozen=True)
class MixingVariable:
    """Distribution of a random size X on {0, ..., n}."""

    pmf: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "pmf", tuple(frac(p) for p in self.pmf))
        if any(p < 0 for p in self.pmf):
            raise ValueError("negative probability in pmf")
        if sum(self.pmf) != 1:
            raise ValueError(f"pmf sums to {sum(self.pmf)}, not 1")

    @property
    def n(self) -> int:
        return len(self.pmf) - 1

    @classmethod
    def point(cls, k: int, n: int) -> "MixingVariable":
        return cls(tuple(Fraction(int(i == k)) for i in range(n + 1)))


@dataclass(frozen=True, eq=False)
class Measure:
    """A probability measure on {0,1}^n.

    Dense measures carry all 2^n masses as exact rationals.  A generative
    measure (large weighted k-out-of-n) carries only its parameters and is
    evaluated by sampling.
    """

    n: int
    masses: tuple[Fraction, ...] | None
    family: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.masses is not None:
            if len(self.masses) != 1 << self.n:
                raise ValueError("mass vector has the wrong length")
            if any(m < 0 for m in self.masses):
                raise ValueError("negative mass")
            if sum(self.masses) != 1:
                raise ValueError(f"masses sum to {sum(self.masses)}, not 1")

    @property
    def mode(self) -> str:
        return "dense" if self.masses is not None else "generative"

    def __eq__(self, other):
        return (isinstance(other, Measure) and self.n == other.n
                and self.masses == other.masses and self.family == other.family)

    def __repr__(self):
        return f"Measure(n={self.n}, family={self.family.get('family')!r})"

    def mass(self, x: int | Config | str) -> Fraction:
        self._dense()
        if isinstance(x, str):
            x = Config.parse(x)
        if isinstance(x, Config):
            if x.n != self.n:
                raise DimensionError("config/measure dimension mismatch")
            x = x.bits
        return self.masses[x]

    def support(self) -> list[int]:
        self._dense()
        return [x for x, m in enumerate(self.masses) if m]

    def _dense(self):
        if self.masses is None:
            raise ValueError("generative measure has no dense masses; use the sampler")

    @cached_property
    def integer_weights(self) -> tuple[tuple[int, ...], int]:
        """Masses as integers over one common denominator D."""
        self._dense()
        d = reduce(lcm, (m.denominator for m in self.masses), 1)
        return tuple(m.numerator * (d // m.denominator) for m in self.masses), d

    @property
    def proven_bk(self) -> bool:
        """Whether a published theorem makes this measure BK on increasing events."""
        return _proven_bk(self.family)


def _proven_bk(fam: dict) -> bool:
    f = fam.get("family")
    if f in ("product", "k_out_of_n", "weighted"):
        return True
    if f == "tensor":
        return all(_proven_bk(g) for g in fam["factors"])
    if f == "projection":
        return _proven_bk(fam["parent"])
    if f == "mixture":
        return sum(1 for p in fam["pmf"] if frac(p)) == 1
    return False


def _check_dense(n: int):
    if n > dense_cap():
        raise CapExceeded(f"dense measures capped at n <= {dense_cap()}, got {n}")


def product_measure(p: Sequence[Rational]) -> Measure:
    p = [frac(x) for x in p]
    if any(not 0 <= x <= 1 for x in p):
        raise ValueError("product parameters must lie in [0, 1]")
    n = len(p)
    _check_dense(n)
    masses = [Fraction(1)]
    # coordinate i doubles the table: low half omega_i = 0, high half omega_i = 1
    for pi in p:
        masses = [m * (1 - pi) for m in masses] + [m * pi for m in masses]
    return Measure(n, tuple(masses), {"family": "product", "p": [frac_str(x) for x in p]})


def k_out_of_n_measure(k: int, n: int) -> Measure:
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    _check_dense(n)
    q = Fraction(1, comb(n, k))
    masses = tuple(q if x.bit_count() == k else Fraction(0) for x in range(1 << n))
    return Measure(n, masses, {"family": "k_out_of_n", "n": n, "k": k})


def elementary_symmetric(w: Sequence[Rational], kmax: int | None = None) -> list[Fraction]:
    """[e_0(w), ..., e_kmax(w)] by the usual one-weight-at-a-time recursion."""
    w = [frac(x) for x in w]
    kmax = len(w) if kmax is None else kmax
    e = [Fraction(1)] + [Fraction(0)] * kmax
    for x in w:
        for j in range(kmax, 0, -1):
            e[j] += x * e[j - 1]
    return e


def weighted_k_out_of_n_measure(k: int, n: int, w: Sequence[Rational]) -> Measure:
    w = [frac(x) for x in w]
    if len(w) != n:
        raise DimensionError(f"{len(w)} weights for n={n}")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    if any(x < 0 for x in w):
        raise ValueError("weights must be non-negative")
    fam = {"family": "weighted", "n": n, "k": k, "w": [frac_str(x) for x in w]}
    if sum(1 for x in w if x > 0) < k:
        raise NotNormalizable(f"fewer than {k} positive weights")
    if n > dense_cap():
        return Measure(n, None, fam)
    raw = [Fraction(0)] * (1 << n)
    for idx in combinations(range(n), k):
        prod = Fraction(1)
        for i in idx:
            prod *= w[i]
        raw[sum(1 << i for i in idx)] = prod
    total = sum(raw)
    return Measure(n, tuple(r / total for r in raw), fam)


def hat_support(m: int, perm: Permutation | None = None) -> list[int]:
    """Configurations whose paired coordinates hold exactly one 1 per pair."""
    if m % 2:
        raise ValueError(f"hat measures need even m, got {m}")
    perm = perm or Permutation.identity(m)
    if perm.m != m:
        raise DimensionError("permutation size differs from m")
    pairs = [(perm(2 * i - 1) - 1, perm(2 * i) - 1) for i in range(1, m // 2 + 1)]
    out = []
    for choice in range(1 << (m // 2)):
        x = 0
        for i, (a, b) in enumerate(pairs):
            x |= 1 << (a if choice >> i & 1 else b)
        out.append(x)
    return sorted(out)


def hat_measure_perm(m: int, perm: Permutation) -> Measure:
    _check_dense(m)
    supp = hat_support(m, perm)
    q = Fraction(1, len(supp))
    masses = [Fraction(0)] * (1 << m)
    for x in supp:
        masses[x] = q
    return Measure(m, tuple(masses), {"family": "hat", "m": m, "perm": list(perm.mapping)})


def hat_measure(m: int) -> Measure:
    return hat_measure_perm(m, Permutation.identity(m))


def tensor(measures: Sequence[Measure]) -> Measure:
    """Independent product; the first factor occupies the first coordinates."""
    if not measures:
        raise ValueError("tensor of no measures")
    n = sum(mu.n for mu in measures)
    _check_dense(n)
    masses = [Fraction(1)]
    for mu in measures:
        mu._dense()
        masses = [a * b for b in mu.masses for a in masses]
    return Measure(n, tuple(masses), {"family": "tensor", "factors": [mu.family for mu in measures]})


def project(mu: Measure, keep: IndexSet) -> Measure:
    """Marginal on the kept coordinates, relabelled in increasing order."""
    mu._dense()
    if keep.n != mu.n:
        raise DimensionError("index set dimension differs from measure")
    kept = [i - 1 for i in keep.indices()]
    masses = [Fraction(0)] * (1 << len(kept))
    for x, m in enumerate(mu.masses):
        if m:
            y = sum(1 << j for j, i in enumerate(kept) if x >> i & 1)
            masses[y] += m
    return Measure(len(kept), tuple(masses),
                   {"family": "projection", "parent": mu.family, "keep": list(keep.indices())})


def mixture_measure(X: MixingVariable, w: Sequence[Rational], n: int) -> Measure:
    if X.n != n:
        raise DimensionError(f"mixing variable on 0..{X.n} for n={n}")
    _check_dense(n)
    masses = [Fraction(0)] * (1 << n)
    for k, pk in enumerate(X.pmf):
        if pk:
            part = weighted_k_out_of_n_measure(k, n, w)
            for x, m in enumerate(part.masses):
                if m:
                    masses[x] += pk * m
    return Measure(n, tuple(masses), {"family": "mixture", "n": n,
                                      "pmf": [frac_str(p) for p in X.pmf],
                                      "w": [frac_str(frac(x)) for x in w]})


def weight_distribution(mu: Measure) -> MixingVariable:
    """Law of the number of ones under mu."""
    pmf = [Fraction(0)] * (mu.n + 1)
    for x, m in enumerate(mu.masses):
        pmf[x.bit_count()] += m
    return MixingVariable(tuple(pmf))


def measure_of(mu: Measure, a: Event) -> Fraction:
    mu._dense()
    if mu.n != a.n:
        raise DimensionError(f"measure of dimension {mu.n}, event of dimension {a.n}")
    return sum((mu.masses[x] for x in a), Fraction(0))


# -- conditional Poisson sampler --------------------------------------

class WeightedSampler:
    """Exact-design sampler for the weighted k-out-of-n measure.

    Coordinates are decided in order.  With j ones still to place among
    coordinates i..n, coordinate i is chosen with probability
    w_i e_{j-1}(w_{i+1..n}) / e_j(w_{i..n}).  Each row of the suffix table
    is rescaled by its maximum; the ratios are unaffected.
    """

    def __init__(self, k: int, n: int, w: Sequence[float]):
        w = np.asarray(w, dtype=float)
        if w.shape != (n,):
            raise DimensionError(f"{w.size} weights for n={n}")
        if not 0 <= k <= n:
            raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and non-negative")
        if np.count_nonzero(w) < k:
            raise NotNormalizable(f"fewer than {k} positive weights")
        self.k, self.n, self.w = k, n, w
        suffix = np.zeros(k + 1)
        suffix[0] = 1.0
        probs = np.zeros((n, k + 1))
        for i in range(n - 1, -1, -1):
            take = np.zeros(k + 1)
            take[1:] = w[i] * suffix[:-1]
            total = suffix + take
            with np.errstate(invalid="ignore", divide="ignore"):
                probs[i] = np.where(total > 0, take / total, 0.0)
            top = total.max()
            suffix = total / top if top > 0 else total
        self.probs = probs

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        """Boolean array of shape (size, n), each row with exactly k ones."""
        remaining = np.full(size, self.k, dtype=np.int64)
        out = np.zeros((size, self.n), dtype=bool)
        for i in range(self.n):
            u = rng.random(size)
            take = u < self.probs[i, remaining]
            out[:, i] = take
            remaining -= take
        return out


def rng_for(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for (root seed, stream id)."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def sample_weighted_k_batch(k: int, n: int, w: Sequence[float], size: int,
                            seed: int, stream: int = 0) -> np.ndarray:
    return WeightedSampler(k, n, w).sample(size, rng_for(seed, stream))


def sample_weighted_k(k: int, n: int, w: Sequence[float], seed: int, stream: int = 0) -> Config:
    row = sample_weighted_k_batch(k, n, w, 1, seed, stream)[0]
    return Config(n, sum(1 << i for i in np.flatnonzero(row).tolist()))


def rows_to_words(rows: np.ndarray) -> np.ndarray:
    """Pack boolean rows (n <= 64) into uint64 configuration words."""
    n = rows.shape[1]
    if n > 64:
        raise CapExceeded("packing needs n <= 64")
    weights = np.left_shift(np.uint64(1), np.arange(n, dtype=np.uint64))
    return (rows.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
