"""Interval sets over the reals with algebraic endpoints, and feasible sets
of literals and clauses for one unassigned variable."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Mapping, Optional, Sequence, Tuple

from .algnum import NEG_INF, POS_INF, RealAlg, Value, compare, format_value, pick_rational_between
from .algnum import real_roots_at, sign_at
from .poly import Polynomial, discriminant


class NotUnivariateError(ValueError):
    pass


class EmptySetError(ValueError):
    pass


@dataclass(frozen=True)
class Interval:
    lo: object
    lo_open: bool
    hi: object
    hi_open: bool

    def is_point(self) -> bool:
        return not self.lo_open and not self.hi_open and compare(self.lo, self.hi) == 0

    def __str__(self) -> str:
        return "%s%s, %s%s" % (
            "(" if self.lo_open else "[",
            _fmt(self.lo),
            _fmt(self.hi),
            ")" if self.hi_open else "]",
        )


def _fmt(v) -> str:
    if v == NEG_INF:
        return "-oo"
    if v == POS_INF:
        return "oo"
    if isinstance(v, RealAlg):
        return "%.6g" % float(v)
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else str(v)


def _lo_key_cmp(a: Interval, b: Interval) -> int:
    c = compare(a.lo, b.lo)
    if c:
        return c
    return (a.lo_open > b.lo_open) - (a.lo_open < b.lo_open)


class IntervalSet:
    """Canonical finite union of disjoint, non-adjacent, nonempty intervals."""

    __slots__ = ("intervals",)

    def __init__(self, intervals: Iterable[Interval] = ()):
        self.intervals: Tuple[Interval, ...] = tuple(intervals)

    # constructors -----------------------------------------------------

    @classmethod
    def empty(cls) -> "IntervalSet":
        return _EMPTY

    @classmethod
    def full(cls) -> "IntervalSet":
        return _FULL

    @classmethod
    def point(cls, v) -> "IntervalSet":
        return cls((Interval(v, False, v, False),))

    @classmethod
    def of(cls, lo, hi, lo_open=False, hi_open=False) -> "IntervalSet":
        if lo == NEG_INF:
            lo_open = True
        if hi == POS_INF:
            hi_open = True
        return _canon([Interval(lo, lo_open, hi, hi_open)])

    # queries ----------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.intervals

    def is_full(self) -> bool:
        return len(self.intervals) == 1 and self.intervals[0].lo == NEG_INF and self.intervals[0].hi == POS_INF

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        if len(self.intervals) != len(other.intervals):
            return False
        for a, b in zip(self.intervals, other.intervals):
            if a.lo_open != b.lo_open or a.hi_open != b.hi_open:
                return False
            if compare(a.lo, b.lo) or compare(a.hi, b.hi):
                return False
        return True

    def __hash__(self):
        return hash(len(self.intervals))

    def __str__(self) -> str:
        if not self.intervals:
            return "∅"
        return " ∪ ".join(str(i) for i in self.intervals)

    __repr__ = __str__

    def contains(self, v) -> bool:
        for iv in self.intervals:
            c = compare(v, iv.lo)
            if c < 0 or (c == 0 and iv.lo_open):
                return False
            d = compare(v, iv.hi)
            if d < 0 or (d == 0 and not iv.hi_open):
                return True
        return False

    __contains__ = contains

    # algebra ----------------------------------------------------------

    def complement(self) -> "IntervalSet":
        out = []
        lo, lo_open = NEG_INF, True
        for iv in self.intervals:
            if not (iv.lo == NEG_INF):
                out.append(Interval(lo, lo_open, iv.lo, not iv.lo_open))
            lo, lo_open = iv.hi, not iv.hi_open
        if lo != POS_INF:
            out.append(Interval(lo, lo_open, POS_INF, True))
        return IntervalSet(out)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        if not other.intervals:
            return self
        if not self.intervals:
            return other
        return _canon(list(self.intervals) + list(other.intervals))

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        if not self.intervals or not other.intervals:
            return _EMPTY
        if other.is_full():
            return self
        if self.is_full():
            return other
        out = []
        i = j = 0
        A, B = self.intervals, other.intervals
        while i < len(A) and j < len(B):
            a, b = A[i], B[j]
            # larger lower end
            c = compare(a.lo, b.lo)
            if c > 0 or (c == 0 and a.lo_open):
                lo, lo_open = a.lo, a.lo_open
            else:
                lo, lo_open = b.lo, b.lo_open
            # smaller upper end
            d = compare(a.hi, b.hi)
            if d < 0 or (d == 0 and a.hi_open):
                hi, hi_open = a.hi, a.hi_open
                i_adv = True
            else:
                hi, hi_open = b.hi, b.hi_open
                i_adv = False
            e = compare(lo, hi)
            if e < 0 or (e == 0 and not lo_open and not hi_open):
                out.append(Interval(lo, lo_open, hi, hi_open))
            if d == 0:
                i += 1
                j += 1
            elif i_adv:
                i += 1
            else:
                j += 1
        return IntervalSet(out)

    def subset_of(self, other: "IntervalSet") -> bool:
        return self.intersect(other.complement()).is_empty()

    def disjoint(self, other: "IntervalSet") -> bool:
        return self.intersect(other).is_empty()

    __or__ = union
    __and__ = intersect

    def __invert__(self) -> "IntervalSet":
        return self.complement()


def _canon(ivs: List[Interval]) -> IntervalSet:
    ivs = [iv for iv in ivs if _nonempty(iv)]
    if not ivs:
        return _EMPTY
    ivs.sort(key=functools.cmp_to_key(_lo_key_cmp))
    out = [ivs[0]]
    for iv in ivs[1:]:
        last = out[-1]
        c = compare(iv.lo, last.hi)
        # overlap or adjacency: iv.lo < last.hi, or equal with one side closed
        if c < 0 or (c == 0 and not (iv.lo_open and last.hi_open)):
            d = compare(iv.hi, last.hi)
            if d > 0 or (d == 0 and not iv.hi_open):
                out[-1] = Interval(last.lo, last.lo_open, iv.hi, iv.hi_open)
        else:
            out.append(iv)
    return IntervalSet(out)


def _nonempty(iv: Interval) -> bool:
    c = compare(iv.lo, iv.hi)
    return c < 0 or (c == 0 and not iv.lo_open and not iv.hi_open)


_EMPTY = IntervalSet(())
_FULL = IntervalSet((Interval(NEG_INF, True, POS_INF, True),))


def complement(s: IntervalSet) -> IntervalSet:
    return s.complement()


def union(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return a.union(b)


def intersect(a: IntervalSet, b: IntervalSet) -> IntervalSet:
    return a.intersect(b)


def contains(s: IntervalSet, v) -> bool:
    return s.contains(v)


def classify(s: IntervalSet):
    """('empty', None) | ('single_point', value) | ('other', None)."""
    if not s.intervals:
        return ("empty", None)
    if len(s.intervals) == 1 and s.intervals[0].is_point():
        return ("single_point", s.intervals[0].lo)
    return ("other", None)


def pick_witness(s: IntervalSet):
    """Deterministic value of s: 0, else the integer of least magnitude,
    else a smallest-denominator rational; algebraic only for irrational points."""
    if not s.intervals:
        raise EmptySetError("pick_witness on an empty set")
    best = None
    best_key = None
    alg_point = None
    for iv in s.intervals:
        cand = _best_in_interval(iv)
        if cand is None:
            if alg_point is None:
                alg_point = iv.lo
            continue
        key = (cand.denominator, abs(cand), cand < 0)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    if best is not None:
        return best
    return alg_point


def _best_in_interval(iv: Interval) -> Optional[Fraction]:
    if iv.is_point():
        return None if isinstance(iv.lo, RealAlg) else Fraction(iv.lo)
    cands = []
    for end, is_open in ((iv.lo, iv.lo_open), (iv.hi, iv.hi_open)):
        if not is_open and not isinstance(end, RealAlg):
            cands.append(Fraction(end))
    cands.append(pick_rational_between(iv.lo, iv.hi))
    return min(cands, key=lambda c: (c.denominator, abs(c), c < 0))


def render(s: IntervalSet) -> str:
    return str(s)


# ---------------------------------------------------------------------------
# feasible sets of atoms


def _sign_ok(op: str, s: int) -> bool:
    if op == "<":
        return s < 0
    if op == "<=":
        return s <= 0
    if op == "=":
        return s == 0
    if op == ">=":
        return s >= 0
    if op == ">":
        return s > 0
    if op == "!=":
        return s != 0
    raise ValueError(op)


def sign_pattern_set(roots: Sequence, sign_between, op: str) -> IntervalSet:
    """Assemble the set where ``sign op 0`` holds from sorted roots and the
    sign in each open cell (sign_between(i) for cell i = 0..len(roots))."""
    ivs = []
    lo = NEG_INF
    for i, r in enumerate(roots):
        if _sign_ok(op, sign_between(i)):
            ivs.append(Interval(lo, True, r, True))
        if _sign_ok(op, 0):
            ivs.append(Interval(r, False, r, False))
        lo = r
    if _sign_ok(op, sign_between(len(roots))):
        ivs.append(Interval(lo, True, POS_INF, True))
    return _canon(ivs)


def _cell_sample(roots, i):
    lo = roots[i - 1] if i > 0 else NEG_INF
    hi = roots[i] if i < len(roots) else POS_INF
    return pick_rational_between(lo, hi)


def poly_feasible(p: Polynomial, op: str, v: int, alpha: Mapping[int, Value]) -> IntervalSet:
    """Values of v satisfying ``p op 0`` with the other variables fixed by alpha."""
    for w in p.variables:
        if w != v and w not in alpha:
            raise NotUnivariateError("variable %d unassigned" % w)
    roots = real_roots_at(p, v, alpha)
    if roots is None:
        return _FULL if _sign_ok(op, 0) else _EMPTY
    if not roots:
        pt = dict(alpha)
        pt[v] = Fraction(0)
        return _FULL if _sign_ok(op, sign_at(p, pt)) else _EMPTY

    def between(i):
        pt = {w: alpha[w] for w in p.variables if w != v}
        pt[v] = _cell_sample(roots, i)
        return sign_at(p, pt)

    return sign_pattern_set(roots, between, op)


def root_set(op: str, r) -> IntervalSet:
    """Values y with ``y op r``."""
    if op == "<":
        return IntervalSet.of(NEG_INF, r, True, True)
    if op == "<=":
        return IntervalSet.of(NEG_INF, r, True, False)
    if op == "=":
        return IntervalSet.point(r)
    if op == ">=":
        return IntervalSet.of(r, POS_INF, False, True)
    if op == ">":
        return IntervalSet.of(r, POS_INF, True, True)
    raise ValueError(op)


def root_atom_holds(var: int, op: str, index: int, p: Polynomial, alpha: Mapping[int, Value]) -> bool:
    roots = real_roots_at(p, var, alpha)
    if roots is None or len(roots) < index:
        return False
    c = compare(alpha[var], roots[index - 1])
    return _sign_ok(op, c)


def root_atom_feasible(var: int, op: str, index: int, p: Polynomial, v: int, alpha: Mapping[int, Value]) -> IntervalSet:
    """Feasible set in v of ``var op root_index(p)`` with everything else fixed."""
    if v == var:
        for w in p.variables:
            if w != var and w not in alpha:
                raise NotUnivariateError("variable %d unassigned" % w)
        roots = real_roots_at(p, var, alpha)
        if roots is None or len(roots) < index:
            return _EMPTY
        return root_set(op, roots[index - 1])
    return _root_atom_feasible_other(var, op, index, p, v, alpha)


def _root_atom_feasible_other(var, op, index, p, v, alpha) -> IntervalSet:
    # v lies inside the defining polynomial while the bound variable is fixed:
    # split the v-line at the critical points where the root structure of p
    # in `var` can change, and test the atom on each piece.
    if var not in alpha:
        raise NotUnivariateError("bound variable %d unassigned" % var)
    for w in p.variables:
        if w not in (v, var) and w not in alpha:
            raise NotUnivariateError("variable %d unassigned" % w)
    base = {w: alpha[w] for w in p.variables if w not in (v, var)}
    crit_polys = [c for c in p.coeffs(var) if v in c.variables]
    if p.degree(var) >= 1:
        d = discriminant(p, var)
        if v in d.variables:
            crit_polys.append(d)
    at_bound = dict(base)
    at_bound[var] = alpha[var]
    crit_polys.append(p)
    points = []
    for cp in crit_polys:
        env = at_bound if cp is p else base
        rs = real_roots_at(cp, v, env)
        if rs:
            points.extend(rs)
    points.sort(key=functools.cmp_to_key(compare))
    uniq = []
    for r in points:
        if not uniq or compare(uniq[-1], r) != 0:
            uniq.append(r)

    def holds_at(x):
        pt = dict(at_bound)
        pt[v] = x
        return root_atom_holds(var, op, index, p, pt)

    ivs = []
    lo = NEG_INF
    for i, r in enumerate(uniq):
        if holds_at(_cell_sample(uniq, i)):
            ivs.append(Interval(lo, True, r, True))
        if holds_at(r):
            ivs.append(Interval(r, False, r, False))
        lo = r
    if holds_at(_cell_sample(uniq, len(uniq))):
        ivs.append(Interval(lo, True, POS_INF, True))
    return _canon(ivs)


# ---------------------------------------------------------------------------
# literal and clause level


def atom_feasible(atom, v: int, alpha: Mapping[int, Value]) -> IntervalSet:
    """Feasible set in v of an arithmetic atom (``atom.kind`` 'poly' or 'root')."""
    if atom.kind == "poly":
        return poly_feasible(atom.poly, atom.op, v, alpha)
    if atom.kind == "root":
        return root_atom_feasible(atom.var, atom.op, atom.index, atom.poly, v, alpha)
    raise NotUnivariateError("boolean atoms have no feasible set")


def literal_feasible(atom, negated: bool, v: int, alpha: Mapping[int, Value]) -> IntervalSet:
    s = atom_feasible(atom, v, alpha)
    return s.complement() if negated else s


def clause_feasible(literals, v: int, alpha: Mapping[int, Value], value_of) -> IntervalSet:
    """Union of literal feasible sets in v.

    ``literals`` yields ``(atom, negated)``; ``value_of(atom, negated)``
    returns True/False/None for literals not mentioning v.
    """
    out = _EMPTY
    for atom, negated in literals:
        if v in atom.vars:
            out = out.union(literal_feasible(atom, negated, v, alpha))
        else:
            val = value_of(atom, negated)
            if val is None:
                raise NotUnivariateError("literal not evaluable")
            if val:
                return _FULL
        if out.is_full():
            return out
    return out
