"""Write the bundled regression corpus with oracle verdicts as :status.

    python3 scripts/make_corpus.py --out tests/corpus --count 40 --seed 7
"""

import argparse
import random
from pathlib import Path

from nrasat import oracle

# name -> (SMT-LIB body, the same instance as oracle data)
HAND = {
    "parabola_le": (
        "(declare-fun x () Real)(declare-fun y () Real)\n(assert (<= (+ (* y y) x 1) 0))\n",
        {"reals": ["x", "y"], "clauses": [[("poly", "y**2 + x + 1", "<=")]]}),
    "square_neg": (
        "(declare-fun x () Real)\n(assert (< (* x x) 0))\n",
        {"reals": ["x"], "clauses": [[("poly", "x**2", "<")]]}),
    "parabola_pair_line": (
        "(declare-fun x () Real)(declare-fun y () Real)\n"
        "(assert (or (<= (+ (* y y) (* 6 y) 8) x) (<= (+ (* y y) (* (- 6) y) 8) x)))\n"
        "(assert (= (+ x y) (- 3)))\n",
        {"reals": ["x", "y"], "clauses": [
            [("poly", "y**2 + 6*y + 8 - x", "<="), ("poly", "y**2 - 6*y + 8 - x", "<=")],
            [("poly", "x + y + 3", "=")]]}),
    "disk_hyperbola": (
        "(declare-fun x () Real)(declare-fun y () Real)\n"
        "(assert (< (+ (* x x) (* y y)) 1))\n(assert (> (* x y) 1))\n",
        {"reals": ["x", "y"], "clauses": [[("poly", "x**2 + y**2 - 1", "<")], [("poly", "x*y - 1", ">")]]}),
    "tangent_point": (
        "(declare-fun x () Real)(declare-fun y () Real)\n"
        "(assert (<= (+ (* x x) (* y y)) 1))\n(assert (>= (* 2 x y) 1))\n",
        {"reals": ["x", "y"], "clauses": [[("poly", "x**2 + y**2 - 1", "<=")], [("poly", "2*x*y - 1", ">=")]]}),
}


def _with_status(smt: str, status: str) -> str:
    return "(set-logic QF_NRA)\n(set-info :status %s)\n%s(check-sat)\n" % (status, smt)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="tests/corpus")
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, (text, inst) in HAND.items():
        status = "sat" if oracle.satisfiable(inst) else "unsat"
        (out / ("hand_%s.smt2" % name)).write_text(_with_status(text, status))
    rng = random.Random(args.seed)
    for i in range(args.count):
        inst = oracle.random_instance(rng)
        status = "sat" if oracle.satisfiable(inst) else "unsat"
        body = oracle.to_smt2(inst).replace("(set-logic QF_NRA)\n", "").replace("(check-sat)\n", "")
        (out / ("rand_%03d.smt2" % i)).write_text(_with_status(body, status))
    print("wrote %d files to %s" % (len(HAND) + args.count, out))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
