"""JSON/CSV formats for events, measures, configurations and reports.

Rationals are always written as "p/q" strings.  Bitstrings list omega_1
first.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import __version__
from .cube import Config, Event, IndexSet, str_to_bits, up_closure
from .measures import (
    Measure,
    MixingVariable,
    Permutation,
    frac,
    frac_str,
    hat_measure_perm,
    k_out_of_n_measure,
    mixture_measure,
    product_measure,
    project,
    tensor,
    weighted_k_out_of_n_measure,
)


class FormatError(ValueError):
    """Input does not follow the expected file schema."""


def parse_rational(s: Any) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise FormatError(f"rational must be a 'p/q' string or integer, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}") from exc


def _bitstrings(n: int, items: Any, what: str) -> list[int]:
    if not isinstance(items, list):
        raise FormatError(f"{what} must be a list of bitstrings")
    out = []
    for s in items:
        if not isinstance(s, str) or len(s) != n or any(c not in "01" for c in s):
            raise FormatError(f"malformed bitstring {s!r} for n={n}")
        out.append(str_to_bits(s))
    return out


# -- events -------------------------------------------------------------

def event_from_dict(d: Any) -> Event:
    if not isinstance(d, dict) or not isinstance(d.get("n"), int) or d["n"] < 0:
        raise FormatError("event needs an integer field 'n' >= 0")
    n = d["n"]
    if ("explicit" in d) == ("monotone_minimal" in d):
        raise FormatError("event needs exactly one of 'explicit' or 'monotone_minimal'")
    if "explicit" in d:
        return Event.explicit(n, _bitstrings(n, d["explicit"], "explicit"))
    try:
        return up_closure(n, _bitstrings(n, d["monotone_minimal"], "monotone_minimal"))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def event_to_dict(ev: Event, monotone: bool | None = None) -> dict:
    if monotone is None:
        monotone = ev.is_increasing
    if monotone:
        return {"n": ev.n, "monotone_minimal": [str(Config(ev.n, x)) for x in ev.minimal]}
    return {"n": ev.n, "explicit": ev.strings()}


def config_to_str(c: Config) -> str:
    return str(c)


def config_from_str(s: str) -> Config:
    if not isinstance(s, str) or any(c not in "01" for c in s):
        raise FormatError(f"malformed bitstring {s!r}")
    return Config.parse(s)


# -- measures -----------------------------------------------------------

def _int_field(d: dict, key: str) -> int:
    v = d.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise FormatError(f"measure field {key!r} must be an integer")
    return v


def _rational_list(d: dict, key: str) -> list[Fraction]:
    v = d.get(key)
    if not isinstance(v, list):
        raise FormatError(f"measure field {key!r} must be a list of rationals")
    return [parse_rational(x) for x in v]


def measure_from_dict(d: Any) -> Measure:
    if not isinstance(d, dict) or "family" not in d:
        raise FormatError("measure needs a 'family' field")
    fam = d["family"]
    if fam == "product":
        return product_measure(_rational_list(d, "p"))
    if fam == "k_out_of_n":
        return k_out_of_n_measure(_int_field(d, "k"), _int_field(d, "n"))
    if fam == "weighted":
        return weighted_k_out_of_n_measure(_int_field(d, "k"), _int_field(d, "n"), _rational_list(d, "w"))
    if fam == "hat":
        m = _int_field(d, "m")
        perm = d.get("perm") or list(range(1, m + 1))
        return hat_measure_perm(m, Permutation(tuple(perm)))
    if fam == "mixture":
        n = _int_field(d, "n")
        return mixture_measure(MixingVariable(tuple(_rational_list(d, "pmf"))), _rational_list(d, "w"), n)
    if fam == "tensor":
        factors = d.get("factors")
        if not isinstance(factors, list) or not factors:
            raise FormatError("tensor needs a non-empty 'factors' list")
        return tensor([measure_from_dict(f) for f in factors])
    if fam == "projection":
        parent = measure_from_dict(d.get("parent"))
        keep = d.get("keep")
        if not isinstance(keep, list):
            raise FormatError("projection needs a 'keep' list of 1-based indices")
        return project(parent, IndexSet.of(parent.n, keep))
    if fam == "dense":
        n = _int_field(d, "n")
        masses = tuple(_rational_list(d, "masses"))
        return Measure(n, masses, {"family": "dense", "n": n, "masses": [frac_str(m) for m in masses]})
    raise FormatError(f"unknown measure family {fam!r}")


def measure_to_dict(mu: Measure) -> dict:
    return json.loads(json.dumps(mu.family))


def dense_measure(masses) -> Measure:
    masses = tuple(frac(m) for m in masses)
    n = len(masses).bit_length() - 1
    return Measure(n, masses, {"family": "dense", "n": n, "masses": [frac_str(m) for m in masses]})


def load_json(path: str | Path) -> Any:
    with open(path) as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def load_event(path: str | Path) -> Event:
    return event_from_dict(load_json(path))


def load_measure(path: str | Path) -> Measure:
    return measure_from_dict(load_json(path))


# -- run configuration and reports --------------------------------------

@dataclass
class RunConfig:
    """Everything needed to reproduce a run.  ``workers`` is an execution
    detail and is reported with the timing fields."""

    command: str
    inequality: str | None = None
    measure: dict | None = None
    universe: dict | None = None
    inputs: list[str] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    seed: int | None = None
    workers: int = 1
    outputs: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("workers")
        d.pop("outputs")
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {k: d[k] for k in ("command", "inequality", "measure", "universe", "inputs",
                                   "params", "seed", "workers", "outputs") if k in d}
        return cls(**known)


def report_document(cfg: RunConfig, body: dict, timing: dict | None = None) -> dict:
    return {"tool": "bkcheck", "version": __version__, "run_config": cfg.to_dict(),
            **body, "timing": {"workers": cfg.workers, **(timing or {})}}


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def strip_timing(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "timing"}


CSV_FIELDS = ["pair_index", "A", "B", "lhs", "rhs", "slack", "verdict"]


def write_rows_csv(rows: list[dict], fh) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_FIELDS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def read_rows_csv(fh) -> list[dict]:
    rows = list(csv.DictReader(fh))
    for r in rows:
        r["pair_index"] = int(r["pair_index"])
    return rows
