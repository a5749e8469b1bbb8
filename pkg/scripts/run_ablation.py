"""Ablation over the crafted families: every mode x literal-decision pair.

    python3 scripts/run_ablation.py --max-n 20 --csv ablation.csv

Prints one table per family with summed conflicts, stages, decisions and
wall time, and the number of instances each configuration solved.
"""

import argparse
import csv
import sys
import tempfile
from collections import defaultdict
from pathlib import Path

from nrasat.bench import CSV_FIELDS, FAMILIES, bench, write_family
from nrasat.search import LITERAL_DECISIONS, MODES


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=20)
    ap.add_argument("--min-n", type=int, default=2)
    ap.add_argument("--families", default=",".join(FAMILIES))
    ap.add_argument("--conflict-budget", type=int, default=10000)
    ap.add_argument("--csv", default=None, help="also write every run to this file")
    args = ap.parse_args(argv)

    configs = [(m, ld) for m in MODES for ld in LITERAL_DECISIONS]
    rows = []
    with tempfile.TemporaryDirectory() as tmp:
        for fam in args.families.split(","):
            d = Path(tmp) / fam
            write_family(fam, range(args.min_n, args.max_n + 1), str(d))
            recs = bench(str(d), configs, conflict_budget=args.conflict_budget)
            rows.extend((fam, r) for r in recs)

    for fam in args.families.split(","):
        agg = defaultdict(lambda: [0, 0, 0, 0.0, 0])
        for f, r in rows:
            if f != fam:
                continue
            a = agg[(r.mode, r.literal_decision)]
            a[0] += r.conflicts
            a[1] += r.stages
            a[2] += r.decisions
            a[3] += r.wall_ms
            a[4] += r.verdict != "unknown"
        print("\n%s (n = %d..%d)" % (fam, args.min_n, args.max_n))
        print("%-14s %-13s %9s %8s %10s %10s %7s" % ("mode", "literal", "conflicts", "stages", "decisions",
                                                      "wall_ms", "solved"))
        for (m, ld), (c, s, dec, ms, ok) in sorted(agg.items()):
            print("%-14s %-13s %9d %8d %10d %10.0f %7d" % (m, ld, c, s, dec, ms, ok))

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=["family"] + CSV_FIELDS)
            w.writeheader()
            for fam, r in rows:
                w.writerow(dict(family=fam, **r.row()))
    return 0


if __name__ == "__main__":
    sys.exit(main())
