"""Brute-force reference decision procedure for small instances.

Independent of the solver's own algebra: projection, root isolation and
evaluation all go through sympy. One real variable: every root of every atom
polynomial plus one rational per gap. Two real variables: Collins projection
(all coefficients, discriminants and pairwise resultants) onto the first
variable, exhaustive sample lifting. Boolean variables are enumerated.

Instances are plain data::

    {"reals": ["x", "y"], "bools": ["b"],
     "clauses": [[("poly", "x**2 + y - 1", "<="), ("bool", "b", True)], ...]}

where a bool literal is ``("bool", name, negated)``.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Dict, List, Sequence

import mpmath
import sympy

_DPS = 80
_ZERO_TOL = mpmath.mpf(10) ** -50
_OPS = {
    "<": lambda s: s < 0,
    "<=": lambda s: s <= 0,
    "=": lambda s: s == 0,
    ">=": lambda s: s >= 0,
    ">": lambda s: s > 0,
}


_NUM_CACHE: Dict[object, object] = {}


def _num(v):
    """High precision value of a sympy number (Rational or CRootOf)."""
    if isinstance(v, sympy.Rational):
        return mpmath.mpf(v.p) / v.q
    hit = _NUM_CACHE.get(v)
    if hit is None:
        hit = _bisect_root(v) if isinstance(v, sympy.CRootOf) else None
        if hit is None:
            with mpmath.workdps(_DPS):
                hit = mpmath.mpf(str(sympy.N(v, _DPS)))
        _NUM_CACHE[v] = hit
    return hit


def _bisect_root(r):
    """Bisect the isolating interval of a real CRootOf at working precision."""
    if not r.is_real:
        return None
    iv = r._get_interval()
    coeffs = [int(c) for c in r.poly.all_coeffs()]
    with mpmath.workdps(_DPS + 10):
        a, b = (mpmath.mpf(int(t.numerator)) / int(t.denominator) for t in (iv.a, iv.b))
        fa = mpmath.polyval(coeffs, a)
        if fa == 0:
            return +a
        if mpmath.polyval(coeffs, b) == 0:
            return +b
        # relative tolerance: large roots cannot be bracketed to an absolute one
        eps = mpmath.mpf(10) ** -(_DPS + 5) * max(1, abs(a), abs(b))
        dcoeffs = [c * (len(coeffs) - 1 - i) for i, c in enumerate(coeffs[:-1])]
        x = (a + b) / 2
        for _ in range(2000):
            if b - a <= eps:
                break
            fx = mpmath.polyval(coeffs, x)
            if fx == 0:
                return x
            if (fx > 0) == (fa > 0):
                a, fa = x, fx
            else:
                b = x
            d = mpmath.polyval(dcoeffs, x)
            step = fx / d if d else None
            # Newton inside the bracket, bisection otherwise
            if step is not None and a < x - step < b:
                x = x - step
                if abs(step) < eps:
                    return x
            else:
                x = (a + b) / 2
        return (a + b) / 2


class _Compiled:
    """A polynomial as (exponent tuple, integer coefficient) pairs."""

    def __init__(self, expr, symbols):
        self.symbols = list(symbols)
        p = sympy.Poly(expr, *self.symbols) if self.symbols else None
        if p is None:
            self.terms = [((), Fraction(str(expr)))]
        else:
            self.terms = [(m, Fraction(int(c.p), int(c.q))) for m, c in p.terms()]

    def sign(self, point) -> int:
        vals = [point[s] for s in self.symbols]
        if all(isinstance(v, sympy.Rational) for v in vals):
            fv = [Fraction(int(v.p), int(v.q)) for v in vals]
            r = sum((c * _mono(fv, m) for m, c in self.terms), Fraction(0))
            return (r > 0) - (r < 0)
        with mpmath.workdps(_DPS):
            nv = [_num(v) for v in vals]
            r = mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * _mono(nv, m) for m, c in self.terms)
        if abs(r) < _ZERO_TOL:
            return 0
        return 1 if r > 0 else -1


def _mono(vals, exps):
    out = 1
    for v, e in zip(vals, exps):
        if e:
            out = out * v ** e
    return out


def _sign(expr, point) -> int:
    syms = sorted(expr.free_symbols, key=lambda s: s.name)
    return _Compiled(expr, syms).sign(point)


def _sorted_unique(vals) -> list:
    with mpmath.workdps(_DPS):
        keyed = sorted(((_num(v), v) for v in vals), key=lambda t: t[0])
        out = []
        for k, v in keyed:
            if out and abs(out[-1][0] - k) < _ZERO_TOL:
                continue
            out.append((k, v))
    return out


def _between(a, b) -> sympy.Rational:
    """A simple rational strictly between two high precision values."""
    with mpmath.workdps(_DPS):
        lo, hi = a, b
        den = 1
        while True:
            n = mpmath.floor(lo * den) + 1
            if n < hi * den:
                return sympy.Rational(int(n), den)
            den *= 2


def _samples(roots) -> list:
    """Roots plus one rational in every gap (including the two unbounded ones)."""
    srt = _sorted_unique(roots)
    if not srt:
        return [sympy.Integer(0)]
    out = [sympy.Integer(int(mpmath.floor(srt[0][0])) - 1)]
    for i, (k, v) in enumerate(srt):
        out.append(v)
        if i + 1 < len(srt):
            out.append(_between(k, srt[i + 1][0]))
    out.append(sympy.Integer(int(mpmath.ceil(srt[-1][0])) + 1))
    return out


def _real_roots(expr, var) -> list:
    p = sympy.Poly(expr, var)
    if p.degree() <= 0:
        return []
    return list(set(p.real_roots(radicals=False)))


def _lift_roots(expr, x, y, alpha) -> list:
    """Real roots in y of expr with x = alpha."""
    if isinstance(alpha, sympy.Rational):
        q = sympy.expand(expr.subs(x, alpha))
        if q == 0 or not q.has(y):
            return []
        return _real_roots(q, y)
    mp = alpha.poly.as_expr().subs(alpha.poly.gen, x) if isinstance(alpha, sympy.CRootOf) else sympy.minimal_polynomial(alpha, x)
    coeffs = sympy.Poly(expr, y).all_coeffs()
    if all(sympy.rem(sympy.Poly(c, x), sympy.Poly(mp, x)).is_zero for c in coeffs):
        return []
    r = sympy.resultant(mp, expr, x)
    cands = _real_roots(r, y) if sympy.Poly(r, y).degree() > 0 else []
    return [b for b in cands if _sign(expr, {x: alpha, y: b}) == 0]


def _projection(polys, x, y) -> list:
    out = []
    withy = [p for p in polys if p.has(y)]
    for p in polys:
        if not p.has(y):
            if p.has(x):
                out.append(p)
            continue
        py = sympy.Poly(p, y)
        out.extend(c for c in py.all_coeffs() if c.has(x))
        if py.degree() >= 2:
            out.append(sympy.discriminant(p, y))
    for p, q in itertools.combinations(withy, 2):
        out.append(sympy.resultant(p, q, y))
    return [sympy.expand(e) for e in out if sympy.expand(e).has(x)]


def _rational_first(samples):
    return sorted(samples, key=lambda v: not isinstance(v, sympy.Rational))


def iter_sample_points(instance):
    """Sample points of a sign-invariant decomposition, rational ones first.

    Lazily generated so a satisfiable instance can stop at its first witness.
    """
    reals = [sympy.Symbol(n) for n in instance["reals"]]
    polys = []
    for cl in instance["clauses"]:
        for lit in cl:
            if lit[0] == "poly":
                polys.append(sympy.expand(sympy.sympify(lit[1], locals={s.name: s for s in reals})))
    if len(reals) == 0:
        yield {}
        return
    if len(reals) == 1:
        (x,) = reals
        roots = [r for p in polys if p.has(x) for r in _real_roots(p, x)]
        for v in _rational_first(_samples(roots)):
            yield {x: v}
        return
    if len(reals) != 2:
        raise ValueError("oracle supports at most two real variables")
    x, y = reals
    proj = _projection(polys, x, y)
    xs = _samples([r for p in proj for r in _real_roots(p, x)])
    for a in _rational_first(xs):
        ys = []
        for p in polys:
            if p.has(y):
                ys.extend(_lift_roots(p, x, y, a))
        for b in _rational_first(_samples(ys)):
            yield {x: a, y: b}


def sample_points(instance) -> List[Dict[sympy.Symbol, object]]:
    return list(iter_sample_points(instance))


def satisfiable(instance) -> bool:
    """Reference verdict: True iff some sample point and boolean assignment satisfies every clause."""
    reals = {n: sympy.Symbol(n) for n in instance["reals"]}
    exprs = {}
    for cl in instance["clauses"]:
        for lit in cl:
            if lit[0] == "poly" and lit[1] not in exprs:
                exprs[lit[1]] = sympy.expand(sympy.sympify(lit[1], locals=reals))
    bools = list(instance.get("bools", []))
    compiled = {k: _Compiled(e, sorted(e.free_symbols, key=lambda s: s.name)) for k, e in exprs.items()}
    for pt in iter_sample_points(instance):
        signs = {k: c.sign(pt) for k, c in compiled.items()}
        for bits in itertools.product([False, True], repeat=len(bools)):
            bv = dict(zip(bools, bits))
            if all(any(_lit_true(l, signs, bv) for l in cl) for cl in instance["clauses"]):
                return True
    return False


def _lit_true(lit, signs, bv) -> bool:
    if lit[0] == "bool":
        return bv[lit[1]] != lit[2]
    return _OPS[lit[2]](signs[lit[1]])


# ---------------------------------------------------------------------------
# random instances and SMT-LIB rendering


def random_poly(rng: random.Random, names: Sequence[str], max_deg: int = 4, max_terms: int = 3) -> str:
    terms = []
    for _ in range(rng.randint(1, max_terms)):
        exps = [0] * len(names)
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            exps[rng.randrange(len(names))] += 1
        c = rng.choice([-3, -2, -1, 1, 1, 2, 3])
        mono = "*".join(("%s**%d" % (n, e) if e > 1 else n) for n, e in zip(names, exps) if e)
        terms.append("%d*%s" % (c, mono) if mono else str(c))
    terms.append(str(rng.randint(-4, 4)))
    s = " + ".join(terms)
    return str(sympy.expand(sympy.sympify(s)))


def random_instance(rng: random.Random, max_reals: int = 2, max_clauses: int = 6, max_deg: int = 4) -> dict:
    nreal = rng.randint(1, max_reals)
    reals = ["x", "y"][:nreal]
    bools = ["b"] if rng.random() < 0.3 else []
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        cl = []
        for _ in range(rng.choice([1, 1, 2, 2, 3])):
            if bools and rng.random() < 0.25:
                cl.append(("bool", "b", rng.random() < 0.5))
                continue
            vs = reals if rng.random() < 0.6 else [rng.choice(reals)]
            p = random_poly(rng, vs, max_deg)
            if sympy.sympify(p).is_number:
                p = str(sympy.expand(sympy.sympify(p) + sympy.Symbol(vs[0])))
            cl.append(("poly", p, rng.choice(["<", "<=", "=", ">=", ">", "<", ">"])))
        clauses.append(cl)
    return {"reals": reals, "bools": bools, "clauses": clauses}


def _smt_expr(e) -> str:
    e = sympy.sympify(e)
    if e.is_Symbol:
        return e.name
    if e.is_Integer:
        return str(e) if e >= 0 else "(- %d)" % -e
    if e.is_Rational:
        body = "(/ %d %d)" % (abs(e.p), e.q)
        return body if e >= 0 else "(- %s)" % body
    if e.is_Add:
        return "(+ %s)" % " ".join(_smt_expr(a) for a in e.args)
    if e.is_Mul:
        return "(* %s)" % " ".join(_smt_expr(a) for a in e.args)
    if e.is_Pow:
        return "(* %s)" % " ".join([_smt_expr(e.base)] * int(e.exp))
    raise ValueError("unsupported expression %s" % e)


def to_smt2(instance) -> str:
    lines = ["(set-logic QF_NRA)"]
    for n in instance["reals"]:
        lines.append("(declare-fun %s () Real)" % n)
    for n in instance.get("bools", []):
        lines.append("(declare-fun %s () Bool)" % n)
    for cl in instance["clauses"]:
        lits = []
        for lit in cl:
            if lit[0] == "bool":
                lits.append("(not %s)" % lit[1] if lit[2] else lit[1])
            else:
                lits.append("(%s %s 0)" % (lit[2], _smt_expr(lit[1])))
        lines.append("(assert %s)" % (lits[0] if len(lits) == 1 else "(or %s)" % " ".join(lits)))
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"
