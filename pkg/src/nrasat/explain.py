"""Conflict explanation by model-based single-cell projection.

Given literals that are jointly infeasible for an unassigned variable x (or
all false under a full assignment), build a lemma ``¬l1 ∨ ... ∨ ¬lk ∨ cell``
where ``cell`` is a disjunction of root / polynomial atoms over earlier
variables that is false at the current model point.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

from .algnum import compare, real_roots_at, sign_at
from .core import Formula, lit_atom, negate
from .poly import Polynomial
from .poly import content as _content
from .poly import discriminant as _discriminant
from .poly import divexact
from .poly import resultant as _resultant
from .poly import square_free as _square_free

# projection operators are pure; memoize across calls
content = lru_cache(maxsize=65536)(_content)
discriminant = lru_cache(maxsize=65536)(_discriminant)
resultant = lru_cache(maxsize=65536)(_resultant)
square_free = lru_cache(maxsize=65536)(_square_free)

_FLIP = {"<": ">", "<=": ">=", "=": "=", ">=": "<=", ">": "<"}


class ExplainError(RuntimeError):
    pass


def projection_order(order: Sequence[int]) -> List[int]:
    """Elimination order: the reverse of the arithmetic assignment order."""
    return list(reversed(order))


class _Projector:
    def __init__(self, levels: Sequence[int], alpha: Mapping[int, object]):
        self.pos = {v: i for i, v in enumerate(levels)}
        self.alpha = alpha
        self.buckets: Dict[int, set] = {v: set() for v in levels}

    def main_var(self, p: Polynomial) -> int:
        try:
            return max(p.variables, key=self.pos.__getitem__)
        except KeyError as e:
            raise ExplainError("variable %s outside the projection order" % e) from None

    def add(self, p: Polynomial) -> None:
        if p.is_constant():
            return
        v = self.main_var(p)
        c = content(p, v)
        if not c.is_constant():
            self.add(c)
            p = divexact(p, c)
        p = square_free(p, v).primitive()
        self.buckets[v].add(p)

    def add_root_atom(self, var: int, p: Polynomial) -> None:
        # truth of var ~ root_k(p) is invariant where the root structure of p
        # in var is: track p, its coefficients in var and its discriminant
        self.add(p)
        for c in p.coeffs(var):
            self.add(c)
        if p.degree(var) >= 2:
            self.add(discriminant(p, var))

    def project(self, v: int) -> None:
        """Add the projection of the level-v polynomials to lower levels."""
        reduced = []
        for p in sorted(self.buckets[v], key=_poly_key):
            cs = p.coeffs(v)
            k = len(cs) - 1
            while k >= 1 and sign_at(cs[k], self.alpha) == 0:
                self.add(cs[k])
                k -= 1
            if k == 0:
                self.add(cs[0])
                continue
            q = Polynomial.from_coeffs(cs[: k + 1], v) if k < len(cs) - 1 else p
            self.add(cs[k])
            if k >= 2:
                self.add(discriminant(q, v))
            reduced.append(q)
        for a, b in combinations(reduced, 2):
            self.add(resultant(a, b, v))


def _poly_key(p: Polynomial):
    return (p.total_degree(), len(p.terms), repr(p))


def _bound_lit(formula: Formula, v: int, op: str, k: int, p: Polynomial) -> int:
    """Literal ``v op root_k(p)``; a plain polynomial atom for linear p."""
    cs = p.coeffs(v)
    if len(cs) == 2 and cs[1].is_constant():
        lc = cs[1].constant_value()
        return formula.poly_lit(p, op if lc > 0 else _FLIP[op])
    return formula.root_lit(v, op, k, p)


def _cell_literals(formula: Formula, v: int, polys: Iterable[Polynomial], alpha) -> List[int]:
    a = alpha[v]
    lower = upper = None  # (root, k, p)
    section = None
    for p in sorted(polys, key=_poly_key):
        roots = real_roots_at(p, v, alpha)
        if not roots:
            continue
        for k, r in enumerate(roots, 1):
            c = compare(r, a)
            if c == 0:
                if section is None:
                    section = (r, k, p)
            elif c < 0:
                if lower is None or compare(r, lower[0]) > 0:
                    lower = (r, k, p)
            elif upper is None or compare(r, upper[0]) < 0:
                upper = (r, k, p)
    if section is not None:
        _, k, p = section
        return [negate(_bound_lit(formula, v, "=", k, p))]
    out = []
    if lower is not None:
        out.append(_bound_lit(formula, v, "<=", lower[1], lower[2]))
    if upper is not None:
        out.append(_bound_lit(formula, v, ">=", upper[1], upper[2]))
    return out


def explain_core(formula: Formula, core: Sequence[int], alpha: Mapping[int, object],
                 order: Sequence[int], x: Optional[int] = None) -> List[int]:
    """Lemma literals for a conflicting literal set.

    ``order`` lists the assigned arithmetic variables in assignment order and
    ``alpha`` holds their values. When ``x`` is given it must be unassigned
    and ``core`` infeasible for it; it is projected without a cell bound.
    """
    levels = list(order)
    if x is not None:
        if x in alpha:
            raise ExplainError("conflict variable already assigned")
        levels.append(x)
    proj = _Projector(levels, alpha)
    for l in core:
        atom = formula.atoms[lit_atom(l)]
        if atom.kind == "poly":
            proj.add(atom.poly)
        elif atom.kind == "root":
            proj.add_root_atom(atom.var, atom.poly)
    lemma = [negate(l) for l in core]
    for v in projection_order(levels):
        if not proj.buckets[v]:
            continue
        if v != x:
            lemma.extend(_cell_literals(formula, v, proj.buckets[v], alpha))
        proj.project(v)
    seen = set()
    out = []
    for l in lemma:
        if isinstance(l, bool):
            # constant atom from a degenerate linear bound; cannot happen for
            # nonconstant p but guard anyway
            raise ExplainError("constant cell literal")
        if l not in seen:
            seen.add(l)
            out.append(l)
    return out
