"""Command line: verify, sweep, search, sample, demo.

Exit codes: 0 holds / success, 1 violation found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter
from fractions import Fraction
from pathlib import Path

import numpy as np

from .cube import Config, Event, IndexSet, bits_to_str, up_closure
from .io import (
    FormatError,
    RunConfig,
    dumps,
    load_event,
    load_measure,
    measure_from_dict,
    parse_rational,
    report_document,
    write_rows_csv,
)
from .measures import frac_str, hat_support, rng_for, sample_weighted_k_batch, weighted_k_out_of_n_measure
from .proofkit import T_event, check_T_inclusion
from .box import box_general
from .verify import (
    INEQUALITIES,
    Universe,
    check_bk,
    check_hat,
    check_na,
    check_prop2,
    check_reimer_cardinality,
    minimal_sets,
    monte_carlo_bk,
    search_mixtures,
    sweep,
)

log = logging.getLogger("bkcheck")


class UsageError(ValueError):
    pass


def _rationals(s: str | None) -> list[Fraction]:
    if not s:
        return []
    return [parse_rational(x.strip()) for x in s.split(",")]


def _indices(s: str | None) -> list[int]:
    return [int(x) for x in s.split(",") if x.strip()] if s else []


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- verify -------------------------------------------------------------

def cmd_verify(args) -> int:
    a = load_event(args.a)
    b = load_event(args.b)
    ineq = args.inequality
    mu = load_measure(args.measure) if args.measure else None
    if ineq in ("bk", "na") and mu is None:
        raise UsageError(f"--measure is required for {ineq}")
    if ineq == "bk":
        rep = check_bk(mu, a, b)
    elif ineq == "reimer":
        rep = check_reimer_cardinality(a, b)
    elif ineq == "prop2":
        rep = check_prop2(a.n, a, b)
    elif ineq == "hat":
        rep = check_hat(a.n, a, b)
    else:
        K = IndexSet.of(a.n, _indices(args.K)) if args.K else IndexSet(a.n, a.dependency)
        L = IndexSet.of(a.n, _indices(args.L)) if args.L else IndexSet(b.n, b.dependency)
        rep = check_na(mu, a, b, K, L)
    cfg = RunConfig("verify", inequality=ineq, measure=mu.family if mu else None,
                    inputs=[str(p) for p in (args.measure, args.a, args.b) if p])
    doc = report_document(cfg, {"report": rep.to_dict()}, {"elapsed": rep.elapsed})
    _emit(dumps(doc), args.out)
    return 0 if rep.holds else 1


# -- sweep --------------------------------------------------------------

def measure_spec_from_args(args) -> dict | None:
    if args.measure_file:
        return json.loads(Path(args.measure_file).read_text())
    fam = args.measure
    if fam is None:
        return None
    if fam == "k_out_of_n":
        return {"family": fam, "n": args.n, "k": args.k}
    if fam == "weighted":
        return {"family": fam, "n": args.n, "k": args.k, "w": [frac_str(x) for x in _rationals(args.w)]}
    if fam == "product":
        p = _rationals(args.p)
        if len(p) == 1:
            p = p * args.n
        return {"family": fam, "p": [frac_str(x) for x in p]}
    if fam == "hat":
        return {"family": fam, "m": args.n}
    if fam == "mixture":
        w = _rationals(args.w) or [Fraction(1)] * args.n
        return {"family": fam, "n": args.n, "pmf": [frac_str(x) for x in _rationals(args.pmf)],
                "w": [frac_str(x) for x in w]}
    raise UsageError(f"unknown measure family {fam!r}")


def run_sweep_config(cfg: RunConfig, collect_rows: bool = False):
    """Execute a sweep described by a RunConfig."""
    u = cfg.universe
    universe = Universe(u["kind"], u["n"], u.get("count", 0), u.get("seed", 0))
    mu = measure_from_dict(cfg.measure) if cfg.measure else None
    return sweep(mu, universe, cfg.inequality, workers=cfg.workers, collect_rows=collect_rows)


def sweep_document(cfg: RunConfig, rep) -> dict:
    return report_document(cfg, {"summary": rep.summary()}, {"elapsed": rep.elapsed})


def cmd_sweep(args) -> int:
    universe = {"kind": args.universe, "n": args.n}
    if args.universe == "random":
        universe.update(count=args.count, seed=args.seed)
    cfg = RunConfig("sweep", inequality=args.inequality, measure=measure_spec_from_args(args),
                    universe=universe, seed=args.seed, workers=args.workers,
                    outputs=[args.out] if args.out else [])
    want_rows = bool(args.out) or args.format == "csv"
    rep = run_sweep_config(cfg, collect_rows=want_rows)
    doc = sweep_document(cfg, rep)
    if args.out:
        prefix = Path(args.out)
        prefix.with_suffix(".json").write_text(dumps(doc))
        with open(prefix.with_suffix(".csv"), "w", newline="") as fh:
            write_rows_csv(rep.rows, fh)
    if args.format == "csv":
        write_rows_csv(rep.rows, sys.stdout)
    else:
        sys.stdout.write(dumps(doc))
    return 0 if rep.ok else 1


# -- search -------------------------------------------------------------

def cmd_search(args) -> int:
    w = _rationals(args.w) or [Fraction(1)] * args.n
    rep = search_mixtures(args.n, w, grid_denominator=args.grid, random_count=args.random,
                          seed=args.seed, max_aux=args.max_aux, budget=args.budget)
    cfg = RunConfig("search", params={"n": args.n, "w": [frac_str(x) for x in w], "grid": args.grid,
                                      "random": args.random, "max_aux": args.max_aux,
                                      "budget": args.budget}, seed=args.seed)
    _emit(dumps(report_document(cfg, {"search": rep.summary()})), args.out)
    return 0


# -- sample -------------------------------------------------------------

def cmd_sample(args) -> int:
    w = [float(x) for x in _rationals(args.w)] or [1.0] * args.n
    rows = sample_weighted_k_batch(args.k, args.n, w, args.N, args.seed)
    strings = ["".join("1" if v else "0" for v in r) for r in rows]
    counts = Counter(strings)
    summary = []
    exact = None
    if args.n <= 20:
        exact = weighted_k_out_of_n_measure(args.k, args.n, _rationals(args.w) or [1] * args.n)
    for s, c in sorted(counts.items()):
        entry = {"config": s, "count": c, "frequency": c / args.N}
        if exact is not None:
            p = exact.mass(s)
            sd = float((p * (1 - p) / args.N)) ** 0.5
            entry.update(exact=frac_str(p), z=(c / args.N - float(p)) / sd if sd else 0.0)
        summary.append(entry)
    if args.out:
        Path(args.out).write_text("\n".join(strings) + "\n")
    cfg = RunConfig("sample", params={"n": args.n, "k": args.k, "w": args.w, "N": args.N},
                    seed=args.seed, outputs=[args.out] if args.out else [])
    sys.stdout.write(dumps(report_document(cfg, {"frequencies": summary})))
    return 0


# -- demos --------------------------------------------------------------

def remark_events() -> tuple[Event, Event]:
    """A = {w1=1} ∩ {w3=1 or w4=1},  B = {w3=1} ∩ {w1=1 or w2=1}  on n = 4."""
    return up_closure(4, ["1010", "1001"]), up_closure(4, ["1010", "0110"])


def demo_remark(args) -> int:
    a, b = remark_events()
    boxed = box_general(a, b)
    res = check_T_inclusion(a, b, 4)
    ta, tb = T_event(a), T_event(b)
    hat = Event.explicit(4, hat_support(4))
    lines = [
        "n = 4, Ĥ = pair-alternating configurations {1010, 1001, 0110, 0101}",
        f"A            = {{{', '.join(a.strings())}}}",
        f"B            = {{{', '.join(b.strings())}}}",
        f"A □ B        = {{{', '.join(boxed.strings())}}}",
        f"(A □ B) ∩ Ĥ  = {{{', '.join((boxed & hat).strings())}}}",
        f"T(A □ B ∩ Ĥ) = {{{', '.join(res.left.strings())}}}",
        f"T(A ∩ Ĥ)     = {{{', '.join(ta.strings())}}}",
        f"T(B ∩ Ĥ)     = {{{', '.join(tb.strings())}}}",
        f"T(A∩Ĥ) □ T(B∩Ĥ) = {{{', '.join(res.right.strings())}}}",
        f"inclusion strict: {res.strict}",
    ]
    print("\n".join(lines))
    return 0


def alice_bob_lists(seed: int, n: int = 30, list_size: int = 8) -> tuple[list, list]:
    rng = rng_for(seed, 1)

    def draw():
        sets = [rng.choice(np.arange(1, n + 1), size=int(rng.integers(2, 5)), replace=False).tolist()
                for _ in range(list_size)]
        return [sorted(s) for s in minimal_sets(sets)]

    return draw(), draw()


def demo_alice_bob(args) -> int:
    n, k = 30, 10
    alice, bob = alice_bob_lists(args.seed)
    rep = monte_carlo_bk(k, n, [1.0] * n, alice, bob, args.N, args.seed)
    print(f"items n={n}, drawn k={k}, draws N={args.N}, seed={args.seed}")
    print("Alice:", alice)
    print("Bob:  ", bob)
    print(f"P(A)     ~ {rep.p_a:.6f} ± {rep.se_a:.6f}")
    print(f"P(B)     ~ {rep.p_b:.6f} ± {rep.se_b:.6f}")
    print(f"P(A □ B) ~ {rep.p_box:.6f} ± {rep.se_box:.6f}")
    print(f"slack P(A)P(B) - P(A □ B) ~ {rep.slack:.6f} ± {rep.se_slack:.6f}  [{rep.verdict}]")
    return 0


DEMOS = {"remark-counterexample": demo_remark, "alice-bob": demo_alice_bob}


def cmd_demo(args) -> int:
    if args.name not in DEMOS:
        raise UsageError(f"unknown demo {args.name!r}; choose from {sorted(DEMOS)}")
    return DEMOS[args.name](args)


# -- parser -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bkcheck", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check one inequality on one event pair")
    v.add_argument("--measure", help="measure JSON file")
    v.add_argument("--a", required=True, help="event A JSON file")
    v.add_argument("--b", required=True, help="event B JSON file")
    v.add_argument("--inequality", choices=INEQUALITIES, default="bk")
    v.add_argument("--K", help="comma-separated indices determining A (na only)")
    v.add_argument("--L", help="comma-separated indices determining B (na only)")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="check an inequality over every pair of a universe")
    s.add_argument("--inequality", choices=INEQUALITIES, default="bk")
    s.add_argument("--measure", choices=["k_out_of_n", "weighted", "product", "hat", "mixture"])
    s.add_argument("--measure-file")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int)
    s.add_argument("--w", help="comma-separated rational weights")
    s.add_argument("--p", help="product parameter(s)")
    s.add_argument("--pmf", help="mixing pmf over 0..n")
    s.add_argument("--universe", choices=["all", "monotone", "random"], default="monotone")
    s.add_argument("--count", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", help="output prefix; writes PREFIX.json and PREFIX.csv")
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.set_defaults(func=cmd_sweep)

    q = sub.add_parser("search", help="classify mixtures over the size distribution X")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--w")
    q.add_argument("--grid", type=int, default=None, help="pmf grid denominator")
    q.add_argument("--random", type=int, default=0)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--max-aux", type=int, default=2)
    q.add_argument("--budget", type=int, default=None)
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("--out")
    q.set_defaults(func=cmd_search)

    a = sub.add_parser("sample", help="draw from the weighted k-out-of-n measure")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--w")
    a.add_argument("--N", type=int, default=100000)
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--workers", type=int, default=1)
    a.add_argument("--out", help="file for the sampled bitstrings")
    a.add_argument("--format", choices=["json"], default="json")
    a.set_defaults(func=cmd_sample)

    d = sub.add_parser("demo", help="walkthroughs: remark-counterexample, alice-bob")
    d.add_argument("name")
    d.add_argument("--seed", type=int, default=2012)
    d.add_argument("--N", type=int, default=1_000_000)
    d.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (FormatError, UsageError, ValueError, OSError, KeyError, TypeError) as exc:
        print(f"bkcheck: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
