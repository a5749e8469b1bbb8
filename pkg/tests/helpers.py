"""Shared test utilities: formula builders and an independent lemma checker."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence

import mpmath
import sympy

from nrasat.core import BOOL, REAL, Formula, lit_atom, lit_negated
from nrasat.poly import Polynomial


def P(expr: str, names: Dict[str, int]) -> Polynomial:
    """Parse a sympy-syntax polynomial over the given variable ids."""
    syms = {n: sympy.Symbol(n) for n in names}
    e = sympy.expand(sympy.sympify(expr, locals=syms))
    gens = [syms[n] for n in names]
    poly = sympy.Poly(e, *gens)
    out = Polynomial.const(0)
    ids = list(names.values())
    for mono, c in poly.terms():
        t = Polynomial.const(Fraction(int(c.p), int(c.q)))
        for v, k in zip(ids, mono):
            if k:
                t = t * Polynomial.var(v, k)
        out = out + t
    return out


def formula_with(reals: Sequence[str] = (), bools: Sequence[str] = ()):
    f = Formula()
    ids = {}
    for n in bools:
        ids[n] = f.new_var(n, BOOL)
    for n in reals:
        ids[n] = f.new_var(n, REAL)
    return f, ids


# ---------------------------------------------------------------------------
# lemma validity by random sampling; evaluation goes through sympy, not the
# solver's own algebra


_OPS = {
    "<": lambda c: c < 0,
    "<=": lambda c: c <= 0,
    "=": lambda c: c == 0,
    ">=": lambda c: c >= 0,
    ">": lambda c: c > 0,
}


class LemmaSampler:
    """Evaluates lemma literals at rational points; atom values cached per point."""

    def __init__(self, formula: Formula, seed: int = 0, lo: int = -6, hi: int = 6, den: int = 4):
        self.f = formula
        self.rng = random.Random(seed)
        self.values = sorted({Fraction(n, d) for d in range(1, den + 1) for n in range(lo * d, hi * d + 1)})
        self.syms = {v: sympy.Symbol("v%d" % v) for v in range(len(formula.names))}
        self._cache: Dict[tuple, bool] = {}

    def _expr(self, p: Polynomial):
        return sum(sympy.Rational(c.numerator, c.denominator)
                   * sympy.Mul(*[self.syms[v] ** e for v, e in m]) for m, c in p.terms.items())

    @lru_cache(maxsize=None)
    def _sym_poly(self, aid: int):
        return self._expr(self.f.atoms[aid].poly)

    @lru_cache(maxsize=None)
    def _roots(self, aid: int, others: tuple):
        atom = self.f.atoms[aid]
        e = self._sym_poly(aid).subs({self.syms[v]: sympy.Rational(c.numerator, c.denominator) for v, c in others})
        e = sympy.expand(e)
        if e == 0:
            return None
        x = self.syms[atom.var]
        if not e.has(x):
            return ()
        return tuple(sympy.Poly(e, x).real_roots())

    def atom_value(self, aid: int, point: Dict[int, Fraction]) -> bool:
        atom = self.f.atoms[aid]
        key = (aid, tuple(sorted((v, point[v]) for v in atom.vars)))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if atom.kind == "poly":
            val = atom.poly.eval(point)
            res = _OPS[atom.op]((val > 0) - (val < 0))
        else:
            others = tuple(sorted((v, point[v]) for v in atom.vars if v != atom.var))
            roots = self._roots(aid, others)
            if roots is None or len(roots) < atom.index:
                res = False
            else:
                r = roots[atom.index - 1]
                a = sympy.Rational(point[atom.var].numerator, point[atom.var].denominator)
                res = _OPS[atom.op]((1 if a > r else -1) if a != r else 0)
        self._cache[key] = res
        return res

    def _lit_value(self, lit: int, asg) -> bool:
        atom = self.f.atoms[lit_atom(lit)]
        v = asg[atom.var] if atom.kind == "bool" else self.atom_value(atom.id, asg)
        return (not v) if lit_negated(lit) else v

    def falsifying_point(self, lits: Iterable[int], samples: int = 10000,
                         entailed_by: Optional[Sequence] = None) -> Optional[dict]:
        """A sampled assignment making every literal false, or None.

        With ``entailed_by`` (a list of clauses) the assignment must also
        satisfy those clauses, so the check is entailment rather than validity.
        """
        lits = list(lits)
        scope = [lit_atom(l) for l in lits]
        if entailed_by is not None:
            scope += [lit_atom(l) for c in entailed_by for l in c]
        vs = sorted({v for a in scope for v in self.f.atoms[a].vars})
        rvars = [v for v in vs if self.f.kinds[v] == REAL]
        bvars = [v for v in vs if self.f.kinds[v] == BOOL]
        if len(bvars) > 12:
            raise ValueError("too many boolean variables to enumerate")
        for _ in range(samples):
            point = {v: self.rng.choice(self.values) for v in rvars}
            for bits in itertools.product((False, True), repeat=len(bvars)):
                asg = dict(point)
                asg.update(zip(bvars, bits))
                if any(self._lit_value(l, asg) for l in lits):
                    continue
                if entailed_by is None or all(any(self._lit_value(l, asg) for l in c) for c in entailed_by):
                    return asg
        return None


# ---------------------------------------------------------------------------
# model soundness at 80 digits; algebraic values are re-derived with sympy
# from their defining polynomial and isolating interval

_MP_DPS = 80
_MP_ZERO = mpmath.mpf(10) ** -50


def _alg_to_mp(alg) -> "mpmath.mpf":
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed([int(c) for c in alg.poly])), t)
    lo = sympy.Rational(alg.lo.numerator, alg.lo.denominator)
    hi = sympy.Rational(alg.hi.numerator, alg.hi.denominator)
    inside = [r for r in poly.real_roots(radicals=False) if lo <= r <= hi]
    if len(inside) != 1:
        raise AssertionError("isolating interval holds %d roots" % len(inside))
    return mpmath.mpf(str(sympy.N(inside[0], _MP_DPS + 10)))


def value_to_mp(v) -> "mpmath.mpf":
    if isinstance(v, (Fraction, int)):
        v = Fraction(v)
        return mpmath.mpf(v.numerator) / v.denominator
    return _alg_to_mp(v)


def model_violations(formula: Formula, model: Dict[int, object]) -> list:
    """Clauses (as strings) not satisfied by the model at high precision."""
    bad = []
    with mpmath.workdps(_MP_DPS):
        vals = {v: (model[v] if formula.kinds[v] == BOOL else value_to_mp(model[v]))
                for v in range(len(formula.names)) if model.get(v) is not None}
        for c in formula.clauses:
            ok = False
            for l in c.lits:
                atom = formula.atoms[lit_atom(l)]
                if atom.kind == "bool":
                    val = vals[atom.var]
                elif atom.kind == "poly":
                    acc = mpmath.mpf(0)
                    for m, coef in atom.poly.terms.items():
                        t = mpmath.mpf(coef.numerator) / coef.denominator
                        for v, e in m:
                            t *= vals[v] ** e
                        acc += t
                    s = 0 if abs(acc) < _MP_ZERO else (1 if acc > 0 else -1)
                    val = _OPS[atom.op](s)
                else:
                    raise NotImplementedError("root atoms are not checked here")
                if val != lit_negated(l):
                    ok = True
                    break
            if not ok:
                bad.append(formula.clause_str(c.lits))
    return bad


def instance_violations(instance: dict, formula: Formula, model: Dict[int, object]) -> list:
    """Clauses of a plain-data instance (see the oracle module) the model breaks."""
    syms = {n: sympy.Symbol(n) for n in instance["reals"]}
    bad = []
    with mpmath.workdps(_MP_DPS):
        point = {syms[n]: value_to_mp(model[formula.var(n)]) for n in instance["reals"]}
        bools = {n: model[formula.var(n)] for n in instance.get("bools", [])}
        for i, cl in enumerate(instance["clauses"]):
            ok = False
            for lit in cl:
                if lit[0] == "bool":
                    ok = bools[lit[1]] != lit[2]
                else:
                    e = sympy.expand(sympy.sympify(lit[1], locals=syms))
                    f = sympy.lambdify(list(syms.values()), e, modules="mpmath")
                    acc = f(*[point[s] for s in syms.values()])
                    s = 0 if abs(acc) < _MP_ZERO else (1 if acc > 0 else -1)
                    ok = _OPS[lit[2]](s)
                if ok:
                    break
            if not ok:
                bad.append(i)
    return bad
