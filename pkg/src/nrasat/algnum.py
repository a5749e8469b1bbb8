"""Real algebraic numbers and exact sign determination.

A value is either a :class:`fractions.Fraction` or a :class:`RealAlg`. A
``RealAlg`` always carries an irreducible defining polynomial of degree >= 2,
so it is never rational and rational isolating endpoints are never roots.
Irreducible factors come from sympy's univariate factorization over QQ.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Mapping, Optional, Sequence, Union

import sympy

from . import univariate as up
from .poly import Polynomial, UnassignedVariableError, divides, resultant

NEG_INF = -math.inf
POS_INF = math.inf


class RealAlg:
    """Irrational real algebraic number: root of ``poly`` inside ``(lo, hi)``."""

    __slots__ = ("poly", "lo", "hi", "_slo")

    def __init__(self, poly: tuple, lo: Fraction, hi: Fraction):
        self.poly = poly
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self._slo = up.sign_at(poly, self.lo)

    def _bisect(self) -> None:
        mid = (self.lo + self.hi) / 2
        s = up.sign_at(self.poly, mid)
        if s == self._slo:
            self.lo = mid
        else:
            self.hi = mid

    def refine(self) -> "RealAlg":
        r = RealAlg(self.poly, self.lo, self.hi)
        r._bisect()
        return r

    def refine_to(self, width: Fraction) -> None:
        while self.hi - self.lo > width:
            self._bisect()

    def __float__(self) -> float:
        self.refine_to(Fraction(1, 2 ** 60))
        return float((self.lo + self.hi) / 2)

    def approx(self, digits: int = 6) -> Fraction:
        self.refine_to(Fraction(1, 10 ** (digits + 2)))
        return (self.lo + self.hi) / 2

    def root_index(self) -> int:
        """1-based index of this root among the real roots of its polynomial."""
        b = up.root_bound(self.poly)
        return up.count_roots(self.poly, -b, self.lo) + 1

    # comparisons ------------------------------------------------------

    def _cmp(self, other) -> int:
        if isinstance(other, RealAlg):
            return _cmp_alg(self, other)
        if isinstance(other, float):
            if math.isinf(other):
                return -1 if other > 0 else 1
            other = Fraction(other)
        other = Fraction(other)
        while self.lo < other < self.hi:
            self._bisect()
        return 1 if other <= self.lo else -1

    def __lt__(self, o):
        return self._cmp(o) < 0

    def __le__(self, o):
        return self._cmp(o) <= 0

    def __gt__(self, o):
        return self._cmp(o) > 0

    def __ge__(self, o):
        return self._cmp(o) >= 0

    def __eq__(self, o):
        if isinstance(o, RealAlg):
            return _cmp_alg(self, o) == 0
        return False

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return "RealAlg(%s, %s, %s)" % (list(self.poly), self.lo, self.hi)


Value = Union[Fraction, RealAlg]


def _cmp_alg(a: RealAlg, b: RealAlg) -> int:
    if a is b:
        return 0
    if a.poly == b.poly:
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        if lo < hi and up.count_roots(a.poly, lo, hi) >= 1:
            return 0
    # refine until the isolating intervals separate; roots of distinct
    # irreducible polynomials always do, a shared factor is checked once
    rounds = 0
    while True:
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        rounds += 1
        if rounds == 64 and a.poly != b.poly:
            g = up.gcd(a.poly, b.poly)
            lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
            if len(g) > 1 and up.count_roots(g, lo, hi, closed=True) >= 1:
                return 0
        if a.hi - a.lo >= b.hi - b.lo:
            a._bisect()
        else:
            b._bisect()


def compare(a, b) -> int:
    """Exact three-way comparison of values (Fractions, RealAlgs, +-inf)."""
    if a is b:
        return 0
    if isinstance(a, RealAlg):
        return a._cmp(b)
    if isinstance(b, RealAlg):
        return -b._cmp(a)
    return (a > b) - (a < b)


def is_rational(v) -> bool:
    return isinstance(v, (Fraction, int))


# ---------------------------------------------------------------------------
# root isolation


_X = sympy.Symbol("x")


@lru_cache(maxsize=8192)
def _irreducible_factors(c: tuple) -> tuple:
    """Distinct irreducible factors (primitive int tuples) of a nonzero int poly."""
    n = len(c) - 1
    if n <= 0:
        return ()
    if n == 1:
        return (c,)
    if n == 2:
        a0, a1, a2 = c
        d = a1 * a1 - 4 * a2 * a0
        if d < 0:
            return (c,)
        r = math.isqrt(d)
        if r * r != d:
            return (c,)
        roots = {Fraction(-a1 - r, 2 * a2), Fraction(-a1 + r, 2 * a2)}
        return tuple(up.to_primitive_ints([-x.numerator, x.denominator]) for x in sorted(roots))
    _, facs = sympy.Poly(list(reversed(c)), _X).factor_list()
    out = []
    for f, _mult in facs:
        coeffs = [int(x) for x in reversed(f.all_coeffs())]
        out.append(up.to_primitive_ints(coeffs))
    return tuple(out)


@lru_cache(maxsize=8192)
def _isolate_cached(c: tuple) -> tuple:
    roots = []
    for f in _irreducible_factors(c):
        if len(f) == 2:
            roots.append(Fraction(-f[0], f[1]))
            continue
        for lo, hi in up.isolate(f):
            roots.append(RealAlg(f, lo, hi))
    roots.sort(key=_SortKey)
    return tuple(roots)


class _SortKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return compare(self.v, other.v) < 0


def isolate_roots(coeffs: Sequence) -> list:
    """All distinct real roots of a nonzero univariate polynomial, increasing."""
    c = up.to_primitive_ints(coeffs)
    if not c:
        raise ValueError("root isolation of the zero polynomial")
    if len(c) == 1:
        return []
    return list(_isolate_cached(c))


# ---------------------------------------------------------------------------
# sign determination


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _split(p: Polynomial, alpha: Mapping[int, Value]):
    rat = {}
    alg = {}
    for v in p.variables:
        if v not in alpha:
            raise UnassignedVariableError(v)
        val = alpha[v]
        if isinstance(val, RealAlg):
            alg[v] = val
        else:
            rat[v] = Fraction(val)
    return rat, alg


def _sign_one_alg(q: Polynomial, v: int, a: RealAlg) -> int:
    c = q.to_univariate(v)
    if not up.rem(c, a.poly):
        return 0
    while True:
        lo, hi = up.interval_eval(c, a.lo, a.hi)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        a._bisect()


_Z = 1 << 30  # fresh variable id for value elimination


def _box_eval(q: Polynomial, box: Mapping[int, RealAlg]):
    lo_t = hi_t = Fraction(0)
    for m, c in q.terms.items():
        tlo = thi = c
        for v, e in m:
            a = box[v]
            plo, phi = a.lo ** e, a.hi ** e
            if e % 2 == 0 and a.lo < 0 < a.hi:
                plo, phi = Fraction(0), max(plo, phi)
            else:
                plo, phi = min(plo, phi), max(plo, phi)
            cands = (tlo * plo, tlo * phi, thi * plo, thi * phi)
            tlo, thi = min(cands), max(cands)
        lo_t += tlo
        hi_t += thi
    return lo_t, hi_t


@lru_cache(maxsize=4096)
def _value_polynomial(q: Polynomial, alg_key: tuple) -> tuple:
    """Univariate polynomial (int tuple) having q(alpha) among its roots.

    The iterated resultant uses sympy's dense modular resultant over ZZ;
    the sparse rational arithmetic of ``poly`` is far slower at these degrees.
    """
    syms = {v: sympy.Symbol("v%d" % v) for v, _ in alg_key}
    z = sympy.Symbol("z")
    expr = z - sum(sympy.Rational(c.numerator, c.denominator)
                   * sympy.Mul(*[syms[v] ** e for v, e in m]) for m, c in q.terms.items())
    gens = [z] + [syms[v] for v, _ in alg_key]
    r = sympy.Poly(expr, *gens)
    _, r = r.clear_denoms(convert=True)
    for v, poly in alg_key:
        s = syms[v]
        if r.degree(s) <= 0:
            continue
        d = sympy.Poly(sum(int(c) * s ** i for i, c in enumerate(poly)), *gens)
        r = sympy.Poly(sympy.resultant(d, r, s), *gens)
    return up.to_primitive_ints([int(c) for c in reversed(sympy.Poly(r.as_expr(), z).all_coeffs())])


def _nonzero_root_gap(s: tuple) -> Fraction:
    """Lower bound on |r| over the nonzero roots r of an integer polynomial."""
    k = 0
    while s[k] == 0:
        k += 1
    t = s[k:]
    if len(t) == 1:
        return Fraction(1)
    return Fraction(abs(t[0]), abs(t[0]) + max(abs(c) for c in t[1:]))


def _sign_multi_alg(q: Polynomial, alg: Dict[int, RealAlg]) -> int:
    gap = None
    rounds = 0
    while True:
        lo, hi = _box_eval(q, alg)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        rounds += 1
        if rounds == 24:
            # still straddling zero: fall back to the exact value polynomial
            key = tuple(sorted((v, a.poly) for v, a in alg.items()))
            s = _value_polynomial(q, key)
            if s[0] != 0:
                gap = Fraction(-1)  # zero is excluded; keep refining
            else:
                gap = _nonzero_root_gap(s)
        # q(alpha) is a root of s; inside (-gap, gap) only zero is
        if gap is not None and -gap < lo and hi < gap:
            return 0
        for a in alg.values():
            a._bisect()


def sign_at(p: Polynomial, alpha: Mapping[int, Value]) -> int:
    """Exact sign of p at a point with rational or algebraic coordinates."""
    rat, alg = _split(p, alpha)
    q = p.substitute(rat)
    if q.is_constant():
        return _sign(q.constant_value())
    alg = {v: alg[v] for v in q.variables}
    if len(alg) == 1:
        (v, a), = alg.items()
        return _sign_one_alg(q, v, a)
    return _sign_multi_alg(q, alg)


def refine(a: Value) -> Value:
    if isinstance(a, RealAlg):
        return a.refine()
    return a


# ---------------------------------------------------------------------------
# roots of a polynomial in one variable after substituting a partial point


def _value_key(alpha: Mapping[int, Value], vs) -> tuple:
    return tuple((v, alpha[v]) for v in sorted(vs))


_roots_cache: Dict[tuple, Optional[tuple]] = {}


def real_roots_at(p: Polynomial, v: int, alpha: Mapping[int, Value]) -> Optional[list]:
    """Real roots in v of p with every other variable fixed by alpha.

    Returns None when the instantiated polynomial vanishes identically.
    """
    others = p.variables - {v}
    key = (p, v, _value_key(alpha, others))
    try:
        hit = _roots_cache[key]
    except KeyError:
        hit = _real_roots_at(p, v, alpha, others)
        if len(_roots_cache) > 50000:
            _roots_cache.clear()
        _roots_cache[key] = hit
    return None if hit is None else list(hit)


def _real_roots_at(p, v, alpha, others) -> Optional[tuple]:
    rat = {}
    alg = {}
    for w in others:
        if w not in alpha:
            raise UnassignedVariableError(w)
        val = alpha[w]
        if isinstance(val, RealAlg):
            alg[w] = val
        else:
            rat[w] = Fraction(val)
    q = p.substitute(rat)
    if q.is_zero():
        return None
    if not (q.variables - {v}):
        if q.degree(v) <= 0:
            return ()
        return tuple(isolate_roots(q.to_univariate(v)))
    alg = {w: alg[w] for w in q.variables if w != v}
    cs = q.coeffs(v)
    k = len(cs) - 1
    while k >= 0 and sign_at(cs[k], alg) == 0:
        k -= 1
    if k < 0:
        return None
    if k == 0:
        return ()
    qt = Polynomial.from_coeffs(cs[: k + 1], v)
    r = qt
    for w, a in sorted(alg.items()):
        if r.degree(w) <= 0:
            continue
        d = Polynomial.from_coeffs(a.poly, w)
        # strip factors of the defining polynomial so the resultant stays nonzero
        while True:
            quo = divides(r, d)
            if quo is None:
                break
            r = quo
        r = resultant(d, r, w)
    cand = isolate_roots(r.to_univariate(v))
    if len(alg) == 1:
        (w, a), = alg.items()
        return tuple(_filter_candidates(qt, v, w, a, cand))
    out = []
    for c in cand:
        pt = dict(alg)
        pt[v] = c
        if sign_at(qt, pt) == 0:
            out.append(c)
    return tuple(out)


# arithmetic in Q(a) for one algebraic a: elements are Fraction lists of
# degree below that of a's defining polynomial d


def _k_mul(x: list, y: list, d) -> list:
    if not x or not y:
        return []
    out = [Fraction(0)] * (len(x) + len(y) - 1)
    for i, xi in enumerate(x):
        if xi:
            for j, yj in enumerate(y):
                out[i + j] += xi * yj
    return up.rem(out, d)


def _k_inv(x: list, d) -> list:
    # extended Euclid; d is irreducible so gcd(x, d) = 1 for nonzero x
    r0, r1 = [Fraction(c) for c in d], list(x)
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = up.divmod_poly(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(q, s1))
    c = r1[0]
    return up.rem([t / c for t in s1], d)


def _mul(x, y):
    if not x or not y:
        return []
    out = [Fraction(0)] * (len(x) + len(y) - 1)
    for i, xi in enumerate(x):
        for j, yj in enumerate(y):
            out[i + j] += xi * yj
    return out


def _sub(x, y):
    n = max(len(x), len(y))
    return up.trim([(x[i] if i < len(x) else 0) - (y[i] if i < len(y) else 0) for i in range(n)])


def _k_sign(x: list, a: RealAlg) -> int:
    if not x:
        return 0
    while True:
        lo, hi = up.interval_eval(x, a.lo, a.hi)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        a._bisect()


def _kx_rem(p: list, b: list, d) -> list:
    """Remainder in Q(a)[y]; polynomials are lists of field elements."""
    p = [list(c) for c in p]
    inv = _k_inv(b[-1], d)
    while len(p) >= len(b):
        f = _k_mul(p[-1], inv, d)
        shift = len(p) - len(b)
        for i, bi in enumerate(b):
            p[shift + i] = _sub(p[shift + i], _k_mul(f, bi, d))
        p.pop()
        while p and not p[-1]:
            p.pop()
    return p


def _kx_sturm(p: list, d) -> list:
    dp = [_k_mul(c, [Fraction(i)], d) for i, c in enumerate(p)][1:]
    seq = [p, dp]
    while True:
        r = _kx_rem(seq[-2], seq[-1], d)
        if not r:
            return seq
        seq.append([[-t for t in c] for c in r])


def _kx_variations(seq, y0: Fraction, d, a: RealAlg) -> int:
    signs = []
    for s in seq:
        acc: list = []
        for c in reversed(s):
            acc = up.trim([t * y0 for t in acc])
            acc = _sub(acc, [-t for t in c]) if c else acc
        s0 = _k_sign(up.rem(acc, d) if acc else acc, a)
        if s0:
            signs.append(s0)
    return sum(1 for i in range(1, len(signs)) if signs[i] != signs[i - 1])


def _filter_candidates(qt: Polynomial, v: int, w: int, a: RealAlg, cand: list) -> list:
    """Candidates c that are roots of qt(a, v); counted exactly by Sturm over Q(a)."""
    d = a.poly
    p = [up.rem(c.to_univariate(w) if not c.is_constant() else [c.constant_value()], d)
         for c in qt.coeffs(v)]
    seq = None
    out = []
    for i, c in enumerate(cand):
        if not isinstance(c, RealAlg):
            val = qt.substitute({v: c})
            if val.is_constant():
                if val.constant_value() == 0:
                    out.append(c)
            elif _k_sign(up.rem(val.to_univariate(w), d), a) == 0:
                out.append(c)
            continue
        c = RealAlg(c.poly, c.lo, c.hi)
        others = cand[:i] + cand[i + 1:]
        while any(compare(o, c.lo) >= 0 and compare(o, c.hi) <= 0 for o in others):
            c._bisect()
        if seq is None:
            seq = _kx_sturm(p, d)
        if _kx_variations(seq, c.lo, d, a) - _kx_variations(seq, c.hi, d, a) > 0:
            out.append(cand[i])
    return out


# ---------------------------------------------------------------------------
# rational selection


def _floor(x) -> int:
    if isinstance(x, RealAlg):
        while math.floor(x.lo) != math.floor(x.hi):
            x._bisect()
        return math.floor(x.lo)
    return math.floor(x)


def simplest_between(lo: Fraction, hi, lo_incl: bool = False, hi_incl: bool = False) -> Fraction:
    """Smallest-denominator rational in the interval between 0 <= lo and hi.

    ``hi`` may be None for +infinity.
    """
    fl = math.floor(lo)
    if lo_incl and fl == lo:
        return Fraction(fl)
    n = fl + 1
    if hi is None or n < hi or (n == hi and hi_incl):
        return Fraction(n)
    # lo, hi in [fl, fl + 1]: x = fl + 1/t
    hi_t = None if lo == fl else 1 / (lo - fl)
    t = simplest_between(1 / (hi - fl), hi_t, hi_incl, lo_incl)
    return fl + 1 / t


def _rational_bounds(a, b):
    """Rational (lo, lo_incl, hi, hi_incl) with the same rationals inside as (a, b)
    as far as the simplest choice is concerned; algebraic ends are tightened."""
    if isinstance(a, RealAlg) and isinstance(b, RealAlg):
        compare(a, b)  # separates the isolating intervals
    if isinstance(a, RealAlg):
        while isinstance(b, (Fraction, int)) and a.hi >= b:
            a._bisect()
        lo, lo_incl = a.hi, True
    else:
        lo, lo_incl = a, False
    if isinstance(b, RealAlg):
        while b.lo <= lo:
            b._bisect()
        hi, hi_incl = b.lo, True
    else:
        hi, hi_incl = b, False
    return lo, lo_incl, hi, hi_incl


def pick_rational_between(a, b) -> Fraction:
    """Rational strictly inside (a, b): 0 if possible, else the integer of
    least magnitude, else a smallest-denominator rational."""
    if compare(a, 0) < 0 < compare(b, 0):
        return Fraction(0)
    if compare(a, 0) >= 0:
        if b == POS_INF:
            return Fraction(_floor(a) + 1)
        lo, li, hi, hi_i = _rational_bounds(a, b)
        return simplest_between(lo, hi, li, hi_i)
    # b <= 0: mirror
    na = _neg(b)
    nb = _neg(a)
    return -pick_rational_between(na, nb)


def _neg(x):
    if isinstance(x, RealAlg):
        poly = up.to_primitive_ints([c if i % 2 == 0 else -c for i, c in enumerate(x.poly)])
        return RealAlg(poly, -x.hi, -x.lo)
    return -x


# ---------------------------------------------------------------------------
# rendering


def format_value(v, name: str = "x") -> str:
    if isinstance(v, RealAlg):
        terms = []
        for i in range(len(v.poly) - 1, -1, -1):
            c = v.poly[i]
            if not c:
                continue
            mono = "1" if i == 0 else (name if i == 1 else "%s^%d" % (name, i))
            coef = "" if (abs(c) == 1 and i) else str(abs(c))
            body = mono if not coef else (coef if i == 0 else "%s*%s" % (coef, mono))
            terms.append(("-" if c < 0 else "+", body))
        s = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for sg, t in terms[1:]:
            s += " %s %s" % (sg, t)
        return "root(%s, %d) ≈ %s" % (s, v.root_index(), _decimal(v.approx(6)))
    return str(Fraction(v))


def _decimal(x: Fraction, digits: int = 5) -> str:
    return ("%." + str(digits) + "f") % float(x)
