"""Inequality checkers, exhaustive sweeps, mixture search and Monte Carlo.

Every verdict on the exact path is an integer comparison: measure values
are kept as integers over the measure's common denominator, so there is no
tolerance anywhere.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Any, Iterable, Sequence

import numpy as np

from . import kernels
from .box import box, box_general, box_increasing_table
from .cube import (
    CapExceeded,
    DimensionError,
    Event,
    IndexSet,
    _monotone_tables,
    bar_event,
    bits_to_str,
    general_cap,
    monotone_cap,
)
from .measures import (
    Measure,
    MixingVariable,
    NotNormalizable,
    WeightedSampler,
    frac,
    frac_str,
    hat_measure,
    k_out_of_n_measure,
    measure_of,
    mixture_measure,
    project,
    rng_for,
    rows_to_words,
    weight_distribution,
    weighted_k_out_of_n_measure,
)

log = logging.getLogger(__name__)

INEQUALITIES = ("bk", "reimer", "prop2", "hat", "na")
RANDOM_BLOCK = 1 << 16


class OrthogonalityError(ValueError):
    """Events are not determined by the declared disjoint index sets."""


# -- single checks ----------------------------------------------------

@dataclass
class CheckReport:
    inequality: str
    lhs: Fraction
    rhs: Fraction
    witness: dict | None = None
    elapsed: float = 0.0

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def slack(self) -> Fraction:
        return self.rhs - self.lhs

    def to_dict(self) -> dict:
        return {"inequality": self.inequality, "lhs": frac_str(self.lhs),
                "rhs": frac_str(self.rhs), "slack": frac_str(self.slack),
                "holds": self.holds, "witness": self.witness}


def event_descriptor(ev: Event) -> dict:
    if ev.is_increasing:
        return {"n": ev.n, "monotone_minimal": [bits_to_str(x, ev.n) for x in ev.minimal]}
    return {"n": ev.n, "explicit": ev.strings()}


def _pair_witness(a: Event, b: Event) -> dict:
    return {"A": event_descriptor(a), "B": event_descriptor(b)}


def check_bk(mu: Measure, a: Event, b: Event) -> CheckReport:
    if not mu.n == a.n == b.n:
        raise DimensionError("measure and events must share n")
    t0 = time.perf_counter()
    lhs = measure_of(mu, box(a, b))
    rhs = measure_of(mu, a) * measure_of(mu, b)
    rep = CheckReport("bk", lhs, rhs, elapsed=time.perf_counter() - t0)
    if not rep.holds:
        rep.witness = _pair_witness(a, b)
    return rep


def check_reimer_cardinality(a: Event, b: Event) -> CheckReport:
    if a.n != b.n:
        raise DimensionError("events must share n")
    t0 = time.perf_counter()
    lhs = len(box_general(a, b))
    rhs = len(a & bar_event(b))
    rep = CheckReport("reimer", Fraction(lhs), Fraction(rhs), elapsed=time.perf_counter() - t0)
    if not rep.holds:
        rep.witness = _pair_witness(a, b)
    return rep


def _check_increasing(*events: Event):
    if not all(e.is_increasing for e in events):
        raise ValueError("this inequality is stated for increasing events")


def check_prop2(m: int, a: Event, b: Event) -> CheckReport:
    """P_{m/2,m}(A □ B) <= P_{m/2,m}(A ∩ B-bar) for increasing A, B."""
    if m % 2:
        raise ValueError(f"m must be even, got {m}")
    if not m == a.n == b.n:
        raise DimensionError("events must live on {0,1}^m")
    _check_increasing(a, b)
    mu = k_out_of_n_measure(m // 2, m)
    rep = CheckReport("prop2", measure_of(mu, box_increasing_event(a, b)),
                      measure_of(mu, a & bar_event(b)))
    if not rep.holds:
        rep.witness = _pair_witness(a, b)
    return rep


def check_hat(m: int, a: Event, b: Event) -> CheckReport:
    """Pair-alternating analogue: hatP_m(A □ B) <= hatP_m(A ∩ B-bar)."""
    if not m == a.n == b.n:
        raise DimensionError("events must live on {0,1}^m")
    _check_increasing(a, b)
    mu = hat_measure(m)
    return CheckReport("hat", measure_of(mu, box_increasing_event(a, b)),
                       measure_of(mu, a & bar_event(b)))


def box_increasing_event(a: Event, b: Event) -> Event:
    return Event(a.n, box_increasing_table(a.n, a.minimal, b.minimal))


def check_na(mu: Measure, a: Event, b: Event, K: IndexSet, L: IndexSet) -> CheckReport:
    if not mu.n == a.n == b.n == K.n == L.n:
        raise DimensionError("measure, events and index sets must share n")
    _check_increasing(a, b)
    if K.members & L.members:
        raise OrthogonalityError("K and L overlap")
    if a.dependency & ~K.members or b.dependency & ~L.members:
        raise OrthogonalityError("an event depends on coordinates outside its declared set")
    rep = CheckReport("na", measure_of(mu, a & b), measure_of(mu, a) * measure_of(mu, b))
    if not rep.holds:
        rep.witness = _pair_witness(a, b)
    return rep


# -- sweeps -----------------------------------------------------------

@dataclass(frozen=True)
class Universe:
    kind: str  # "all" | "monotone" | "random"
    n: int
    count: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.kind == "all" and self.n > 3:
            raise CapExceeded("the all-events universe needs n <= 3")
        if self.kind == "monotone" and self.n > monotone_cap():
            raise CapExceeded(f"the monotone universe needs n <= {monotone_cap()}")
        if self.kind == "random" and self.n > general_cap():
            raise CapExceeded(f"random general events need n <= {general_cap()}")
        if self.kind not in ("all", "monotone", "random"):
            raise ValueError(f"unknown universe {self.kind!r}")

    def descriptor(self) -> dict:
        d = {"kind": self.kind, "n": self.n}
        if self.kind == "random":
            d.update(count=self.count, seed=self.seed)
        return d

    def tables(self) -> tuple[int, ...]:
        if self.kind == "monotone":
            return _monotone_tables(self.n)
        return tuple(range(1 << (1 << self.n)))

    def size(self) -> int:
        if self.kind == "random":
            return self.count
        return len(self.tables()) ** 2


def random_pair_block(n: int, seed: int, block: int) -> tuple[np.ndarray, np.ndarray]:
    """Uniform truth-table pairs for block ``block`` of a random universe."""
    rng = rng_for(seed, block)
    hi = 1 << (1 << n)
    a = rng.integers(0, hi, size=RANDOM_BLOCK, dtype=np.int64)
    b = rng.integers(0, hi, size=RANDOM_BLOCK, dtype=np.int64)
    return a, b


@dataclass
class _Chunk:
    checked: int = 0
    skipped: int = 0
    violations: list = field(default_factory=list)
    min_num: int | None = None
    min_index: int | None = None
    rows: list = field(default_factory=list)


@dataclass
class SweepTask:
    inequality: str
    universe: Universe
    measure: Measure | None
    collect_rows: bool = False


class _Evaluator:
    """Per-process state for one sweep: integer measure values and memo
    tables for truth tables."""

    def __init__(self, task: SweepTask):
        self.task = task
        ineq, n = task.inequality, task.universe.n
        mu = task.measure
        if ineq == "prop2":
            if n % 2:
                raise ValueError("prop2 needs even n")
            mu = k_out_of_n_measure(n // 2, n)
        elif ineq == "hat":
            mu = hat_measure(n)
        if ineq != "reimer":
            if mu is None:
                raise ValueError(f"inequality {ineq!r} needs a measure")
            if mu.n != n:
                raise DimensionError(f"measure on n={mu.n}, universe on n={n}")
            self.weights, self.denom = mu.integer_weights
        else:
            self.weights, self.denom = (1,) * (1 << n), 1
        self.scale = self.denom ** 2 if ineq in ("bk", "na") else self.denom
        self.value_memo: dict[int, int] = {}
        self.bar_memo: dict[int, int] = {}
        self.n = n

    def value(self, t: int) -> int:
        v = self.value_memo.get(t)
        if v is None:
            v, x, w = 0, 0, self.weights
            s = t
            while s:
                if s & 1:
                    v += w[x]
                s >>= 1
                x += 1
            self.value_memo[t] = v
        return v

    def bar(self, t: int) -> int:
        r = self.bar_memo.get(t)
        if r is None:
            top = (1 << self.n) - 1
            r, s, x = 0, t, 0
            while s:
                if s & 1:
                    r |= 1 << (top ^ x)
                s >>= 1
                x += 1
            self.bar_memo[t] = r
        return r

    def sides(self, a: int, b: int, boxed: int) -> tuple[int, int]:
        """Integer (lhs, rhs), both over ``self.scale``."""
        ineq = self.task.inequality
        if ineq == "bk":
            return self.value(boxed) * self.denom, self.value(a) * self.value(b)
        if ineq == "na":
            return self.value(a & b) * self.denom, self.value(a) * self.value(b)
        return self.value(boxed), self.value(a & self.bar(b))


@lru_cache(maxsize=8)
def _cached_monotone_boxes(n: int) -> tuple[int, ...]:
    tables = _monotone_tables(n)
    mins = [Event(n, t).minimal for t in tables]
    return tuple(box_increasing_table(n, ma, mb) for ma in mins for mb in mins)


@lru_cache(maxsize=4)
def _cached_all_boxes(n: int) -> np.ndarray:
    e = 1 << (1 << n)
    idx = np.arange(e * e, dtype=np.int64)
    return kernels.box_tables(n, idx // e, idx % e)


def _boxes_for(task: SweepTask, a: Sequence[int], b: Sequence[int], lo: int) -> Sequence[int]:
    u = task.universe
    n = u.n
    if task.inequality == "na":
        return [0] * len(a)
    if u.kind == "monotone":
        tables = u.tables()
        if len(tables) ** 2 <= 1 << 20:
            return _cached_monotone_boxes(n)[lo:lo + len(a)]
        mins = {}
        out = []
        for x, y in zip(a, b):
            for t in (x, y):
                if t not in mins:
                    mins[t] = Event(n, t).minimal
            out.append(box_increasing_table(n, mins[x], mins[y]))
        return out
    if u.kind == "all":
        return _cached_all_boxes(n)[lo:lo + len(a)].tolist()
    if n <= kernels.KERNEL_MAX_N:
        return kernels.box_tables(n, np.asarray(a), np.asarray(b)).tolist()
    return [box_general(Event(n, x), Event(n, y)).table for x, y in zip(a, b)]


def _pairs_for(u: Universe, lo: int, hi: int) -> tuple[list[int], list[int]]:
    if u.kind == "random":
        a_out, b_out = [], []
        for blk in range(lo // RANDOM_BLOCK, (hi - 1) // RANDOM_BLOCK + 1):
            a, b = random_pair_block(u.n, u.seed, blk)
            start = blk * RANDOM_BLOCK
            s, e = max(lo, start) - start, min(hi, start + RANDOM_BLOCK) - start
            a_out.extend(a[s:e].tolist())
            b_out.extend(b[s:e].tolist())
        return a_out, b_out
    tables = u.tables()
    e = len(tables)
    return ([tables[i // e] for i in range(lo, hi)], [tables[i % e] for i in range(lo, hi)])


def _dependency(n: int, t: int, memo: dict) -> int:
    d = memo.get(t)
    if d is None:
        d = memo[t] = Event(n, t).dependency
    return d


def _run_chunk(task: SweepTask, lo: int, hi: int) -> _Chunk:
    ev = _Evaluator(task)
    out = _Chunk()
    step = RANDOM_BLOCK
    dep_memo: dict[int, int] = {}
    for start in range(lo, hi, step):
        stop = min(hi, start + step)
        a, b = _pairs_for(task.universe, start, stop)
        boxes = _boxes_for(task, a, b, start)
        for off, (x, y, z) in enumerate(zip(a, b, boxes)):
            idx = start + off
            if task.inequality == "na":
                n = task.universe.n
                if _dependency(n, x, dep_memo) & _dependency(n, y, dep_memo):
                    out.skipped += 1
                    continue
            lhs, rhs = ev.sides(x, y, z)
            out.checked += 1
            slack = rhs - lhs
            if out.min_num is None or slack < out.min_num:
                out.min_num, out.min_index = slack, idx
            if slack < 0:
                out.violations.append((idx, x, y, lhs, rhs))
            if task.collect_rows:
                out.rows.append((idx, x, y, lhs, rhs))
    return out


def _merge(chunks: Iterable[_Chunk]) -> _Chunk:
    total = _Chunk()
    for c in chunks:
        total.checked += c.checked
        total.skipped += c.skipped
        total.violations.extend(c.violations)
        total.rows.extend(c.rows)
        if c.min_num is not None and (
                total.min_num is None or (c.min_num, c.min_index) < (total.min_num, total.min_index)):
            total.min_num, total.min_index = c.min_num, c.min_index
    total.violations.sort()
    total.rows.sort()
    return total


@dataclass
class SweepReport:
    inequality: str
    measure: dict | None
    universe: dict
    pairs_checked: int
    pairs_skipped: int
    violations: list[dict]
    violation_count: int
    min_slack: Fraction | None
    min_slack_pair: dict | None
    severity: str
    rows: list[dict] | None = None
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def summary(self, max_witnesses: int = 20) -> dict:
        return {
            "inequality": self.inequality,
            "measure": self.measure,
            "universe": self.universe,
            "pairs_checked": self.pairs_checked,
            "pairs_skipped": self.pairs_skipped,
            "violation_count": self.violation_count,
            "violations": self.violations[:max_witnesses],
            "min_slack": None if self.min_slack is None else frac_str(self.min_slack),
            "min_slack_pair": self.min_slack_pair,
            "severity": self.severity,
        }


def _expected_to_hold(inequality: str, mu: Measure | None, universe: Universe) -> bool:
    if inequality in ("reimer", "prop2", "hat"):
        return inequality == "reimer" or universe.kind == "monotone"
    if mu is None:
        return False
    if inequality == "bk" and mu.family.get("family") == "product":
        return True
    return universe.kind == "monotone" and mu.proven_bk


def _row(ev: _Evaluator, n: int, idx: int, a: int, b: int, lhs: int, rhs: int) -> dict:
    s = ev.scale
    return {"pair_index": idx, "A": bits_to_str(a, 1 << n), "B": bits_to_str(b, 1 << n),
            "lhs": frac_str(Fraction(lhs, s)), "rhs": frac_str(Fraction(rhs, s)),
            "slack": frac_str(Fraction(rhs - lhs, s)), "verdict": "holds" if lhs <= rhs else "violation"}


def sweep(mu: Measure | None, universe: Universe, inequality: str = "bk",
          workers: int = 1, collect_rows: bool = False) -> SweepReport:
    """Check one inequality on every pair of the universe.

    Pairs are ordered (i, j) row-major over the universe's events (or by
    draw index for random universes); the outcome does not depend on
    ``workers``.
    """
    if inequality not in INEQUALITIES:
        raise ValueError(f"unknown inequality {inequality!r}")
    if inequality in ("prop2", "hat", "na") and universe.kind != "monotone":
        raise ValueError(f"{inequality} sweeps run over the monotone universe")
    t0 = time.perf_counter()
    task = SweepTask(inequality, universe, mu, collect_rows)
    ev = _Evaluator(task)
    total = universe.size()
    if workers <= 1 or total < 4096:
        merged = _run_chunk(task, 0, total)
    else:
        bounds = np.linspace(0, total, 4 * workers + 1).astype(int).tolist()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futs = [pool.submit(_run_chunk, task, lo, hi) for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
            merged = _merge(f.result() for f in futs)
    n = universe.n
    violations = [_row(ev, n, *v) for v in merged.violations]
    for v, raw in zip(violations, merged.violations):
        v.update(_pair_witness(Event(n, raw[1]), Event(n, raw[2])))
    min_pair = None
    if merged.min_index is not None:
        a, b = _pairs_for(universe, merged.min_index, merged.min_index + 1)
        min_pair = {"pair_index": merged.min_index, **_pair_witness(Event(n, a[0]), Event(n, b[0]))}
    expected = _expected_to_hold(inequality, mu, universe)
    if not violations:
        severity = "ok"
    else:
        severity = "defect" if expected else "finding"
        if expected:
            log.error("%d violations of a proven inequality (%s)", len(violations), inequality)
    return SweepReport(
        inequality=inequality,
        measure=None if inequality == "reimer" else (mu.family if mu is not None else None),
        universe=universe.descriptor(),
        pairs_checked=merged.checked,
        pairs_skipped=merged.skipped,
        violations=violations,
        violation_count=len(violations),
        min_slack=None if merged.min_num is None else Fraction(merged.min_num, ev.scale),
        min_slack_pair=min_pair,
        severity=severity,
        rows=[_row(ev, n, *r) for r in merged.rows] if collect_rows else None,
        elapsed=time.perf_counter() - t0,
    )


@dataclass
class BKVerdict:
    is_bk: bool
    worst: CheckReport
    report: SweepReport


def is_bk_measure(mu: Measure, workers: int = 1) -> BKVerdict:
    """Exhaustive check over all pairs of increasing events (n <= 4)."""
    if mu.n > 4:
        raise CapExceeded("is_bk_measure is exhaustive only for n <= 4")
    rep = sweep(mu, Universe("monotone", mu.n), "bk", workers=workers)
    mp = rep.min_slack_pair
    a = _event_from_desc(mp["A"])
    b = _event_from_desc(mp["B"])
    return BKVerdict(rep.ok, check_bk(mu, a, b), rep)


def _event_from_desc(d: dict) -> Event:
    from .io import event_from_dict

    return event_from_dict(d)


# -- mixture search ---------------------------------------------------

def pmf_grid(n: int, denominator: int) -> list[MixingVariable]:
    """All pmfs on {0..n} whose entries are multiples of 1/denominator."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(MixingVariable(tuple(Fraction(c, denominator) for c in prefix + [left])))
            return
        for c in range(left + 1):
            rec(prefix + [c], left - c, slots - 1)

    rec([], denominator, n + 1)
    return out


def random_pmfs(n: int, count: int, seed: int, denominator: int = 12) -> list[MixingVariable]:
    rng = rng_for(seed, 0)
    out = []
    while len(out) < count:
        c = rng.integers(0, denominator + 1, size=n + 1)
        if c.sum() == 0:
            continue
        out.append(MixingVariable(tuple(Fraction(int(x), int(c.sum())) for x in c)))
    return out


def projection_variables(n: int, w: Sequence, max_aux: int = 2,
                         aux_weights: Sequence = (0, Fraction(1, 2), 1, 2)) -> list[tuple[MixingVariable, dict]]:
    """Sizes X obtained by adding m <= max_aux auxiliary coordinates to a
    weighted k-out-of-(n+m) measure and projecting onto the first n."""
    w = [frac(x) for x in w]
    found: dict[tuple, dict] = {}
    for m in range(max_aux + 1):
        keep = IndexSet.of(n + m, range(1, n + 1))
        for aux in iproduct([frac(x) for x in aux_weights], repeat=m):
            full_w = w + list(aux)
            for k in range(n + m + 1):
                try:
                    parent = weighted_k_out_of_n_measure(k, n + m, full_w)
                except NotNormalizable:
                    continue
                X = weight_distribution(project(parent, keep))
                found.setdefault(X.pmf, {"m": m, "k": k, "aux": [frac_str(a) for a in aux]})
    return [(MixingVariable(p), d) for p, d in found.items()]


@dataclass
class SearchReport:
    n: int
    w: list[str]
    entries: list[dict]
    partial: bool
    note: str = ("projection matching is best-effort: a candidate is tagged only when it "
                 "equals a size law from the finite projection grid searched")

    def summary(self) -> dict:
        return {"n": self.n, "w": self.w, "partial": self.partial, "note": self.note,
                "candidates": len(self.entries),
                "bk": sum(e["bk"] for e in self.entries),
                "entries": self.entries}


def search_mixtures(n: int, w: Sequence, candidates: Iterable[MixingVariable] | None = None,
                    grid_denominator: int | None = None, random_count: int = 0, seed: int = 0,
                    include_projections: bool = True, max_aux: int = 2,
                    budget: int | None = None) -> SearchReport:
    """Classify mixtures P^w_{X,n} as BK or not for a family of X."""
    if n > 4:
        raise CapExceeded("mixture search is exact only for n <= 4")
    w = [frac(x) for x in w]
    projections = projection_variables(n, w, max_aux=max_aux)
    proj_index = {X.pmf: d for X, d in projections}
    pool: list[tuple[MixingVariable, str]] = []
    if candidates is not None:
        pool += [(X, "given") for X in candidates]
    if grid_denominator:
        pool += [(X, "grid") for X in pmf_grid(n, grid_denominator)]
    if random_count:
        pool += [(X, "random") for X in random_pmfs(n, random_count, seed)]
    if include_projections:
        pool += [(X, "projection") for X, _ in projections]
    entries, seen, partial = [], set(), False
    for X, source in pool:
        if X.pmf in seen:
            continue
        if budget is not None and len(entries) >= budget:
            partial = True
            break
        seen.add(X.pmf)
        try:
            mu = mixture_measure(X, w, n)
        except NotNormalizable:
            entries.append({"pmf": [frac_str(p) for p in X.pmf], "source": source,
                            "bk": False, "error": "not normalizable"})
            continue
        verdict = is_bk_measure(mu)
        entries.append({
            "pmf": [frac_str(p) for p in X.pmf],
            "source": source,
            "bk": verdict.is_bk,
            "min_slack": frac_str(verdict.worst.slack),
            "worst_pair": verdict.report.min_slack_pair,
            "projection_match": proj_index.get(X.pmf),
        })
    return SearchReport(n, [frac_str(x) for x in w], entries, partial)


# -- Monte Carlo ------------------------------------------------------

def _antichain_words(n: int, sets: Iterable) -> list[int]:
    words = []
    for s in sets:
        if isinstance(s, str):
            if len(s) != n or any(c not in "01" for c in s):
                raise ValueError(f"malformed bitstring {s!r}")
            x = sum(1 << i for i, c in enumerate(s) if c == "1")
        else:
            idx = list(s)
            if any(not 1 <= i <= n for i in idx):
                raise ValueError(f"index outside [1, {n}] in {idx}")
            x = sum(1 << (i - 1) for i in idx)
        words.append(x)
    words = sorted(set(words))
    for x in words:
        for y in words:
            if x != y and x & y == x:
                raise ValueError("input lists do not form an antichain")
    return words


def minimal_sets(sets: Iterable[Iterable[int]]) -> list[frozenset[int]]:
    """Drop every set that contains another one from the list."""
    sets = sorted({frozenset(s) for s in sets}, key=lambda s: (len(s), sorted(s)))
    out = []
    for s in sets:
        if not any(t <= s for t in out):
            out.append(s)
    return out


@dataclass
class MonteCarloReport:
    draws: int
    p_box: float
    p_a: float
    p_b: float
    se_box: float
    se_a: float
    se_b: float
    slack: float
    se_slack: float
    verdict: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def monte_carlo_bk(k: int, n: int, w: Sequence[float], a_sets: Iterable, b_sets: Iterable,
                   draws: int, seed: int, batch: int = 1 << 17) -> MonteCarloReport:
    """Estimate P(A □ B), P(A), P(B) under the weighted k-out-of-n measure.

    A and B are given by their minimal sets, so membership per draw needs
    only subset tests.  The verdict is "consistent" unless the estimated
    slack is below zero by more than three standard errors.
    """
    if n > 64:
        raise CapExceeded("Monte Carlo events need n <= 64")
    amin = _antichain_words(n, a_sets)
    bmin = _antichain_words(n, b_sets)
    disjoint = [(x, y) for x in amin for y in bmin if x & y == 0]
    sampler = WeightedSampler(k, n, w)
    sums = np.zeros(6)  # a, b, box, ab, a*box, b*box
    done, stream = 0, 0
    while done < draws:
        size = min(batch, draws - done)
        words = rows_to_words(sampler.sample(size, rng_for(seed, stream)))
        ia = _contains_any(words, amin)
        ib = _contains_any(words, bmin)
        ibox = np.zeros(size, dtype=bool)
        for x, y in disjoint:
            ibox |= (words & np.uint64(x | y)) == np.uint64(x | y)
        sums += [ia.sum(), ib.sum(), ibox.sum(), (ia & ib).sum(), (ia & ibox).sum(), (ib & ibox).sum()]
        done += size
        stream += 1
    pa, pb, pbox, pab, pabox, pbbox = sums / draws
    var = lambda p: p * (1 - p)
    cov_ab, cov_a_box, cov_b_box = pab - pa * pb, pabox - pa * pbox, pbbox - pb * pbox
    # delta method for pa*pb - pbox
    v = (pb ** 2 * var(pa) + pa ** 2 * var(pb) + var(pbox) + 2 * pa * pb * cov_ab
         - 2 * pb * cov_a_box - 2 * pa * cov_b_box) / draws
    se_slack = math.sqrt(max(v, 0.0))
    slack = pa * pb - pbox
    verdict = "consistent" if slack >= -3 * se_slack else "suspicious"
    return MonteCarloReport(draws, pbox, pa, pb,
                            math.sqrt(var(pbox) / draws), math.sqrt(var(pa) / draws),
                            math.sqrt(var(pb) / draws), slack, se_slack, verdict)


def _contains_any(words: np.ndarray, minimal: list[int]) -> np.ndarray:
    hit = np.zeros(words.shape, dtype=bool)
    for x in minimal:
        hit |= (words & np.uint64(x)) == np.uint64(x)
    return hit

