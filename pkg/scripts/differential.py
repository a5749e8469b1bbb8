"""Differential check of every engine configuration against the reference oracle.

    python3 scripts/differential.py --count 500 --seed 1
"""

import argparse
import random
import sys
import time

from nrasat import EngineConfig, load, solve
from nrasat import oracle
from nrasat.search import LITERAL_DECISIONS, MODES


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    t_oracle = t_solver = 0.0
    mismatches = []
    for i in range(args.count):
        inst = oracle.random_instance(rng)
        t = time.perf_counter()
        expected = "sat" if oracle.satisfiable(inst) else "unsat"
        t_oracle += time.perf_counter() - t
        _, formula = load(oracle.to_smt2(inst))
        for mode in MODES:
            for ld in LITERAL_DECISIONS:
                t = time.perf_counter()
                got = solve(formula, EngineConfig(mode=mode, literal_decision=ld)).verdict
                t_solver += time.perf_counter() - t
                if got != expected:
                    mismatches.append((i, mode, ld, got, expected))
                    print("MISMATCH #%d %s/%s: %s, oracle %s" % (i, mode, ld, got, expected), flush=True)
        if args.verbose:
            print("#%d %s" % (i, expected), flush=True)
    total = time.perf_counter() - t0
    print("instances=%d configs=%d mismatches=%d oracle=%.1fs solver=%.1fs total=%.1fs"
          % (args.count, len(MODES) * len(LITERAL_DECISIONS), len(mismatches), t_oracle, t_solver, total))
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
