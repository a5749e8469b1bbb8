"""Instance families and the CSV benchmark harness."""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from .frontend import load
from .search import EngineConfig, solve

FAMILIES = ("path_case", "block_case", "fixed_chain")

CSV_FIELDS = [
    "instance",
    "mode",
    "literal_decision",
    "seed",
    "verdict",
    "wall_ms",
    "conflicts",
    "stages",
    "decisions",
    "lemmas",
]


def _interval_lit(var: str, lo: int, hi: int, shift: Optional[str] = None) -> str:
    """(var - lo)(var - hi) <= 0, optionally with var replaced by var - shift."""
    v = var if shift is None else "(- %s %s)" % (var, shift)
    return "(<= (* (- %s %s) (- %s %s)) 0)" % (v, _n(lo), v, _n(hi))


def _n(k: int) -> str:
    return str(k) if k >= 0 else "(- %d)" % -k


def _script(reals: Sequence[str], asserts: Iterable[str]) -> str:
    lines = ["(set-logic QF_NRA)"]
    lines += ["(declare-fun %s () Real)" % v for v in reals]
    lines += ["(assert %s)" % a for a in asserts]
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def path_case(n: int) -> str:
    """n two-interval clauses over y whose good intervals meet only at y = 3.

    The bad interval is listed first and all bad intervals are pairwise
    disjoint, so any wrong literal choice leads to a conflict.
    """
    asserts = []
    for i in range(1, n + 1):
        good = (3 - i, 3) if i % 2 else (3, 3 + i)
        if n == 1:
            good = (2, 4)
        bad = (10 * i + 10, 10 * i + 11)
        asserts.append("(or %s %s)" % (_interval_lit("y", *bad), _interval_lit("y", *good)))
    return _script(["y"], asserts)


def block_case(n: int) -> str:
    """Clauses over y (shifted by x) with pairwise empty intersections.

    n = 1 is a single-variable instance. For n >= 2 the y clauses depend on
    x and n decoy variables z_i with loose constraints are declared between
    x and y, so y is blocked only after x is assigned.
    """
    if n == 1:
        return _script(["y"], [
            "(or %s %s)" % (_interval_lit("y", 0, 1), _interval_lit("y", 4, 5)),
            "(or %s %s)" % (_interval_lit("y", 2, 3), _interval_lit("y", 6, 7)),
        ])
    zs = ["z%d" % i for i in range(1, n + 1)]
    asserts = ["(<= (* z%d z%d) %d)" % (i, i, i + 1) for i in range(1, n + 1)]
    for i in range(n):
        asserts.append("(or %s %s)" % (_interval_lit("y", 4 * i, 4 * i + 1, "x"),
                                       _interval_lit("y", 4 * i + 2, 4 * i + 3, "x")))
    return _script(["x"] + zs + ["y"], asserts)


def fixed_chain(n: int) -> str:
    """x1 = 1 and x(i+1) = x(i) + 1, each pinned by a squared equation."""
    xs = ["x%d" % i for i in range(1, n + 1)]
    asserts = ["(<= (* (- x1 1) (- x1 1)) 0)"]
    for i in range(1, n):
        d = "(- x%d x%d 1)" % (i + 1, i)
        asserts.append("(<= (* %s %s) 0)" % (d, d))
    # declared last-first so index order disagrees with the chain
    return _script(list(reversed(xs)), asserts)


_GEN = {"path_case": path_case, "block_case": block_case, "fixed_chain": fixed_chain}


def gen_family(name: str, n: int) -> str:
    if name not in _GEN:
        raise ValueError("unknown family %r" % name)
    if n < 1:
        raise ValueError("n must be >= 1")
    return _GEN[name](n)


def write_family(name: str, sizes: Iterable[int], out_dir: str) -> List[Path]:
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    paths = []
    for n in sizes:
        p = d / ("%s_%03d.smt2" % (name, n))
        p.write_text(gen_family(name, n))
        paths.append(p)
    return paths


@dataclass
class RunRecord:
    instance: str
    mode: str
    literal_decision: str
    seed: int
    verdict: str
    wall_ms: float
    conflicts: int
    stages: int
    decisions: int
    lemmas: int

    def row(self) -> dict:
        return {k: getattr(self, k) for k in CSV_FIELDS}


def parse_config(s: str) -> Tuple[str, str]:
    """'prop-vsids:look-ahead' -> ('prop_vsids', 'look_ahead')."""
    mode, _, ld = s.partition(":")
    return mode.replace("-", "_"), (ld or "look_ahead").replace("-", "_")


def run_one(path: str, mode: str, literal_decision: str, seed: int = 0,
            timeout_ms: Optional[int] = None, conflict_budget: Optional[int] = None) -> RunRecord:
    _, f = load(Path(path).read_text())
    cfg = EngineConfig(mode=mode, literal_decision=literal_decision, seed=seed,
                       timeout_ms=timeout_ms, conflict_budget=conflict_budget)
    r = solve(f, cfg)
    s = r.stats
    return RunRecord(os.path.basename(str(path)), mode, literal_decision, seed, r.verdict,
                     round(s.wall_ms, 3), s.conflicts, s.stages, s.decisions, s.lemmas_learned)


def bench(directory: str, configs: Sequence[Tuple[str, str]], out: Optional[str] = None,
          timeout_ms: Optional[int] = None, conflict_budget: Optional[int] = 10000,
          seed: int = 0) -> List[RunRecord]:
    files = sorted(Path(directory).glob("*.smt2"))
    records = [run_one(str(p), m, ld, seed, timeout_ms, conflict_budget) for p in files for m, ld in configs]
    if out is not None:
        with open(out, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
            w.writeheader()
            for r in records:
                w.writerow(r.row())
    return records
