"""Command-line driver.

    nrasat [options] FILE.smt2
    nrasat bench --dir D --out results.csv [--configs ...]
    nrasat gen --family F --n N --out D

The first output line of a solve is exactly ``sat``, ``unsat`` or ``unknown``.
Exit status: 0 for sat/unsat, 1 for unknown, 2 for usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .bench import FAMILIES, bench, parse_config, write_family
from .frontend import ParseError, clause_to_smt, load, print_model
from .search import LITERAL_DECISIONS, MODES, EngineConfig, solve

EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2

DEFAULT_CONFIGS = ",".join(
    "%s:%s" % (m.replace("_", "-"), ld.replace("_", "-")) for m in MODES for ld in LITERAL_DECISIONS
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise _UsageError()


class _UsageError(Exception):
    pass


def _dashed(names: Sequence[str]) -> List[str]:
    return [n.replace("_", "-") for n in names]


def _solve_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nrasat", description="Model-constructing solver for QF_NRA.")
    p.add_argument("file", help="SMT-LIB v2 input")
    p.add_argument("--mode", choices=_dashed(MODES), default="prop-vsids")
    p.add_argument("--literal-decision", choices=_dashed(LITERAL_DECISIONS), default="look-ahead")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout-ms", type=int, default=None)
    p.add_argument("--conflict-budget", type=int, default=None)
    p.add_argument("--stats", action="store_true", help="print search statistics")
    p.add_argument("--trace-lemmas", action="store_true", help="print every learned lemma")
    return p


def _bench_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nrasat bench", description="Run a config matrix over a directory of instances.")
    p.add_argument("--dir", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--configs", default=DEFAULT_CONFIGS,
                   help="comma-separated mode:literal-decision pairs")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout-ms", type=int, default=None)
    p.add_argument("--conflict-budget", type=int, default=10000)
    return p


def _gen_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="nrasat gen", description="Write instances of a benchmark family.")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", required=True, type=int, help="largest size")
    p.add_argument("--from", dest="start", type=int, default=None,
                   help="smallest size (default: only size n)")
    p.add_argument("--out", required=True)
    return p


def _cmd_solve(args) -> int:
    try:
        text = Path(args.file).read_text(encoding="utf-8")
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    try:
        script, formula = load(text)
        cfg = EngineConfig(mode=args.mode.replace("-", "_"),
                           literal_decision=args.literal_decision.replace("-", "_"),
                           seed=args.seed, timeout_ms=args.timeout_ms,
                           conflict_budget=args.conflict_budget)
    except ParseError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    res = solve(formula, cfg)
    print(res.verdict)
    wants_model = any(c[0] == "get-model" for c in script.commands)
    if res.verdict == "sat" and wants_model:
        print(print_model(formula, res.model))
    if args.trace_lemmas:
        for lits in res.lemmas:
            print("(lemma %s)" % clause_to_smt(formula, lits))
    if args.stats:
        print("(:stats")
        for k, v in res.stats.as_dict().items():
            print("  :%s %s" % (k.replace("_", "-"), round(v, 3) if isinstance(v, float) else v))
        print(")")
    return EXIT_UNKNOWN if res.verdict == "unknown" else EXIT_OK


def _cmd_bench(args) -> int:
    try:
        configs = [parse_config(s.strip()) for s in args.configs.split(",") if s.strip()]
        for m, ld in configs:
            EngineConfig(mode=m, literal_decision=ld)
    except ValueError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    if not Path(args.dir).is_dir():
        print("error: no such directory %s" % args.dir, file=sys.stderr)
        return EXIT_USAGE
    try:
        records = bench(args.dir, configs, args.out, timeout_ms=args.timeout_ms,
                        conflict_budget=args.conflict_budget, seed=args.seed)
    except ParseError as e:
        print("error: %s" % e, file=sys.stderr)
        return EXIT_USAGE
    print("%d runs written to %s" % (len(records), args.out))
    return EXIT_OK


def _cmd_gen(args) -> int:
    start = args.n if args.start is None else args.start
    if start < 1 or args.n < start:
        print("error: need 1 <= --from <= --n", file=sys.stderr)
        return EXIT_USAGE
    paths = write_family(args.family, range(start, args.n + 1), args.out)
    for p in paths:
        print(p)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        if argv and argv[0] == "bench":
            return _cmd_bench(_bench_parser().parse_args(argv[1:]))
        if argv and argv[0] == "gen":
            return _cmd_gen(_gen_parser().parse_args(argv[1:]))
        return _cmd_solve(_solve_parser().parse_args(argv))
    except _UsageError:
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
