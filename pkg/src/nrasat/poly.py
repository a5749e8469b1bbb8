"""Exact multivariate polynomials over the rationals.

Variables are small nonnegative integers. A monomial is a tuple of
``(var, exp)`` pairs sorted by variable in *descending* order, which makes
plain tuple comparison a lexicographic order with higher variables more
significant. Polynomials are immutable and hashable.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd as igcd
from typing import Dict, Iterable, Mapping, Tuple

Monomial = Tuple[Tuple[int, int], ...]

ONE_MONO: Monomial = ()


class DegenerateError(ValueError):
    """Raised when an operator is applied outside its domain."""


class UnassignedVariableError(KeyError):
    pass


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), reverse=True))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_key(m: Monomial):
    # graded lexicographic
    return (_mono_degree(m), m)


class Polynomial:
    __slots__ = ("terms", "_hash", "_vars")

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        if terms:
            self.terms: Dict[Monomial, Fraction] = {m: Fraction(c) for m, c in terms.items() if c != 0}
        else:
            self.terms = {}
        self._hash = None
        self._vars = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        p._vars = None
        return p

    # -- constructors ---------------------------------------------------

    @classmethod
    def const(cls, c) -> "Polynomial":
        c = Fraction(c)
        return cls._raw({ONE_MONO: c} if c else {})

    @classmethod
    def var(cls, v: int, exp: int = 1) -> "Polynomial":
        return cls._raw({((v, exp),): Fraction(1)} if exp else {ONE_MONO: Fraction(1)})

    @classmethod
    def from_coeffs(cls, coeffs: Iterable["Polynomial | Fraction | int"], v: int) -> "Polynomial":
        """Build ``sum coeffs[i] * v**i``."""
        out: Dict[Monomial, Fraction] = {}
        for i, c in enumerate(coeffs):
            if not isinstance(c, Polynomial):
                c = Polynomial.const(c)
            for m, a in c.terms.items():
                mm = _mono_mul(m, ((v, i),)) if i else m
                out[mm] = out.get(mm, 0) + a
        return cls._raw({m: c for m, c in out.items() if c})

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get(ONE_MONO, Fraction(0))

    @property
    def variables(self) -> frozenset:
        if self._vars is None:
            self._vars = frozenset(v for m in self.terms for v, _ in m)
        return self._vars

    def max_var(self) -> int:
        return max(self.variables) if self.variables else -1

    def degree(self, v: int) -> int:
        """Degree in ``v``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(dict(m).get(v, 0) for m in self.terms)

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(_mono_degree(m) for m in self.terms)

    def coeffs(self, v: int) -> list:
        """Coefficients in ``v`` (index = power), each a polynomial free of ``v``."""
        buckets: Dict[int, Dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            e = 0
            rest = m
            for i, (w, k) in enumerate(m):
                if w == v:
                    e = k
                    rest = m[:i] + m[i + 1:]
                    break
            buckets.setdefault(e, {})[rest] = c
        if not buckets:
            return []
        n = max(buckets)
        return [Polynomial._raw(buckets[i]) if i in buckets else ZERO for i in range(n + 1)]

    def leading_coeff(self, v: int) -> "Polynomial":
        cs = self.coeffs(v)
        return cs[-1] if cs else ZERO

    def leading_term(self) -> Tuple[Monomial, Fraction]:
        m = max(self.terms, key=_mono_key)
        return m, self.terms[m]

    def lex_leading(self) -> Tuple[Monomial, Fraction]:
        m = max(self.terms)
        return m, self.terms[m]

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            other = Polynomial.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            if not c:
                return ZERO
            return Polynomial._raw({m: a * c for m, a in self.terms.items()})
        if len(other.terms) < len(self.terms):
            a, b = other, self
        else:
            a, b = self, other
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return Polynomial._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({ONE_MONO: Fraction(other)} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- evaluation ----------------------------------------------------

    def eval(self, point: Mapping[int, Fraction]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                try:
                    t *= Fraction(point[v]) ** e
                except KeyError:
                    raise UnassignedVariableError(v) from None
            total += t
        return total

    def substitute(self, partial: Mapping[int, Fraction]) -> "Polynomial":
        if not partial or not (self.variables & partial.keys()):
            return self
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            keep = []
            for v, e in m:
                if v in partial:
                    c = c * Fraction(partial[v]) ** e
                else:
                    keep.append((v, e))
            if c:
                k = tuple(keep)
                out[k] = out.get(k, 0) + c
        return Polynomial._raw({m: c for m, c in out.items() if c})

    def derivative(self, v: int) -> "Polynomial":
        out: Dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            d = dict(m)
            e = d.get(v, 0)
            if not e:
                continue
            if e == 1:
                del d[v]
            else:
                d[v] = e - 1
            out[tuple(sorted(d.items(), reverse=True))] = c * e
        return Polynomial._raw(out)

    # -- normal forms --------------------------------------------------

    def integer_content(self) -> Fraction:
        """Positive rational c with self/c having coprime integer coefficients."""
        if not self.terms:
            return Fraction(0)
        num = abs(reduce(igcd, (c.numerator for c in self.terms.values())))
        den = reduce(lambda a, b: a * b // igcd(a, b), (c.denominator for c in self.terms.values()))
        return Fraction(num, den)

    def primitive(self) -> "Polynomial":
        """Integer-coefficient primitive associate with positive grlex-leading coefficient."""
        if not self.terms:
            return self
        c = self.integer_content()
        if self.leading_term()[1] < 0:
            c = -c
        if c == 1:
            return self
        return Polynomial._raw({m: a / c for m, a in self.terms.items()})

    def to_univariate(self, v: int) -> list:
        """Coefficient list (low to high) of Fractions; requires no other variables."""
        if self.variables - {v}:
            raise DegenerateError("polynomial is not univariate in %d" % v)
        n = self.degree(v)
        out = [Fraction(0)] * (n + 1)
        for m, c in self.terms.items():
            out[m[0][1] if m else 0] = c
        return out

    # -- rendering -----------------------------------------------------

    def __repr__(self) -> str:
        return "Polynomial(%s)" % self.to_str()

    def to_str(self, names=None) -> str:
        if not self.terms:
            return "0"
        names = names or (lambda v: "x%d" % v)
        parts = []
        for m in sorted(self.terms, key=_mono_key, reverse=True):
            c = self.terms[m]
            mono = "*".join(names(v) + ("^%d" % e if e > 1 else "") for v, e in sorted(m))
            if not mono:
                s = str(abs(c))
            elif abs(c) == 1:
                s = mono
            else:
                s = "%s*%s" % (abs(c), mono)
            parts.append(("-" if c < 0 else "+", s))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sg, s in parts[1:]:
            out += " %s %s" % (sg, s)
        return out


ZERO = Polynomial._raw({})
ONE = Polynomial._raw({ONE_MONO: Fraction(1)})


def add(a: Polynomial, b: Polynomial) -> Polynomial:
    return a + b


def mul(a: Polynomial, b: Polynomial) -> Polynomial:
    return a * b


def degree(p: Polynomial, v: int) -> int:
    return p.degree(v)


def leading_coeff(p: Polynomial, v: int) -> Polynomial:
    return p.leading_coeff(v)


def derivative(p: Polynomial, v: int) -> Polynomial:
    return p.derivative(v)


# ---------------------------------------------------------------------------
# division


def divexact(a: Polynomial, b: Polynomial) -> Polynomial:
    """Return q with a == q*b; raise ValueError if b does not divide a."""
    q = divides(a, b)
    if q is None:
        raise ValueError("inexact polynomial division")
    return q


def divides(a: Polynomial, b: Polynomial):
    """Quotient a/b if b divides a exactly, else None."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    if a.is_zero():
        return ZERO
    if b.is_constant():
        c = b.constant_value()
        return Polynomial._raw({m: x / c for m, x in a.terms.items()})
    bm, bc = b.lex_leading()
    bd = dict(bm)
    r = dict(a.terms)
    q: Dict[Monomial, Fraction] = {}
    while r:
        rm = max(r)
        rc = r[rm]
        rd = dict(rm)
        qd = {}
        for v, e in bd.items():
            k = rd.get(v, 0) - e
            if k < 0:
                return None
        for v, e in rd.items():
            k = e - bd.get(v, 0)
            if k:
                qd[v] = k
        qm = tuple(sorted(qd.items(), reverse=True))
        qc = rc / bc
        q[qm] = qc
        for m, c in b.terms.items():
            mm = _mono_mul(qm, m)
            s = r.get(mm, 0) - qc * c
            if s:
                r[mm] = s
            else:
                r.pop(mm, None)
    return Polynomial._raw(q)


def prem(a: Polynomial, b: Polynomial, v: int) -> Polynomial:
    """Pseudo-remainder of a by b with respect to v: lc(b)^(da-db+1)*a = q*b + r."""
    db = b.degree(v)
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    da = a.degree(v)
    if da < db:
        return a
    bc = b.coeffs(v)
    lb = bc[-1]
    r = a
    k = da - db + 1
    while not r.is_zero() and r.degree(v) >= db:
        dr = r.degree(v)
        lr = r.leading_coeff(v)
        shift = Polynomial.var(v, dr - db)
        r = r * lb - lr * shift * b
        k -= 1
    if k:
        r = r * lb ** k
    return r


# ---------------------------------------------------------------------------
# resultants


def resultant(a: Polynomial, b: Polynomial, v: int) -> Polynomial:
    """Res_v(a, b) by the subresultant PRS."""
    if a.is_zero() or b.is_zero():
        raise DegenerateError("resultant of a zero polynomial")
    da, db = a.degree(v), b.degree(v)
    if da == 0 and db == 0:
        raise DegenerateError("both polynomials are constant in the eliminated variable")
    if da == 0:
        return a ** db
    if db == 0:
        return b ** da
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            s = -1
    g = ONE
    h = ONE
    A, B = a, b
    while True:
        dA, dB = A.degree(v), B.degree(v)
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        R = prem(A, B, v)
        A = B
        if R.is_zero():
            return ZERO
        B = divexact(R, g * h ** delta)
        g = A.leading_coeff(v)
        if delta == 0:
            pass
        elif delta == 1:
            h = g
        else:
            h = divexact(g ** delta, h ** (delta - 1))
        if B.degree(v) <= 0:
            break
    dA = A.degree(v)
    lB = B.leading_coeff(v)
    if dA == 1:
        res = lB
    else:
        res = divexact(lB ** dA, h ** (dA - 1))
    return res * s


def discriminant(p: Polynomial, v: int) -> Polynomial:
    n = p.degree(v)
    if n < 1:
        raise DegenerateError("discriminant of a polynomial of degree < 1")
    if n == 1:
        return ONE
    r = resultant(p, p.derivative(v), v)
    d = divexact(r, p.leading_coeff(v))
    return -d if (n * (n - 1) // 2) % 2 else d


# ---------------------------------------------------------------------------
# gcd and square-free parts


def _normalize(p: Polynomial) -> Polynomial:
    if p.is_zero():
        return p
    if p.is_constant():
        return ONE
    return p.primitive()


def content(p: Polynomial, v: int) -> Polynomial:
    """gcd of the coefficients of p viewed in v."""
    g = ZERO
    for c in p.coeffs(v):
        if c.is_zero():
            continue
        g = gcd(g, c)
        if g == ONE:
            break
    return g


def primitive_part(p: Polynomial, v: int) -> Polynomial:
    if p.is_zero():
        return p
    c = content(p, v)
    return divexact(p, c)


def gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Greatest common divisor, normalized to a primitive integer polynomial."""
    if a.is_zero():
        return _normalize(b)
    if b.is_zero():
        return _normalize(a)
    if a.is_constant() or b.is_constant():
        return ONE
    v = max(a.variables | b.variables)
    ca, cb = content(a, v), content(b, v)
    c = gcd(ca, cb)
    pa, pb = divexact(a, ca), divexact(b, cb)
    if pa.degree(v) < pb.degree(v):
        pa, pb = pb, pa
    while not pb.is_zero() and pb.degree(v) > 0:
        r = prem(pa, pb, v)
        pa, pb = pb, (primitive_part(r, v) if not r.is_zero() else r)
    g = primitive_part(pa, v) if pb.is_zero() else ONE
    return _normalize(c * g)


def square_free(p: Polynomial, v: int) -> Polynomial:
    """Square-free part of p in v; the content in v is divided out as well."""
    if p.degree(v) < 1:
        return p
    g = gcd(p, p.derivative(v))
    if g.degree(v) < 1:
        return p
    return divexact(p, g)
