"""Formula representation, three-valued evaluation, the trail and the
two-watched-variables index.

Variables live in one integer space; ``Formula.kinds[v]`` tells boolean from
real. Literals are ints: ``2 * atom_id + negated``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence

from .algnum import Value, sign_at
from .feasible import _sign_ok, root_atom_holds
from .poly import Polynomial

BOOL = "bool"
REAL = "real"

# canonical polynomial comparison ops; the others are negations
_NEGATED_OP = {"<=": ">", ">=": "<", "!=": "="}
_FLIP = {"<": ">", ">": "<", "=": "=", "<=": ">=", ">=": "<=", "!=": "!="}
_NEG_OP = {"<": ">=", "<=": ">", "=": "!=", ">=": "<", ">": "<=", "!=": "="}


def lit_atom(lit: int) -> int:
    return lit >> 1


def lit_negated(lit: int) -> bool:
    return bool(lit & 1)


def negate(lit: int) -> int:
    return lit ^ 1


def make_lit(atom_id: int, negated: bool = False) -> int:
    return 2 * atom_id + (1 if negated else 0)


class Atom:
    __slots__ = ("id", "kind", "var", "poly", "op", "index", "vars", "_key")

    def __init__(self, id, kind, var=None, poly=None, op=None, index=0):
        self.id = id
        self.kind = kind  # 'bool' | 'poly' | 'root'
        self.var = var
        self.poly = poly
        self.op = op
        self.index = index
        vs = set(poly.variables) if poly is not None else set()
        if var is not None:
            vs.add(var)
        self.vars = frozenset(vs)

    def degree_in(self, v: int) -> int:
        if self.kind == "bool":
            return 0
        if self.kind == "root" and v == self.var:
            return 1
        return max(self.poly.degree(v), 0)

    def __repr__(self):
        return "Atom(%d, %s)" % (self.id, self.kind)


@dataclass(eq=False)
class Clause:
    lits: tuple
    is_lemma: bool = False
    activity: float = 0.0
    vars: tuple = ()
    watch: list = field(default_factory=list)
    deleted: bool = False
    id: int = -1

    def __len__(self):
        return len(self.lits)

    def __iter__(self):
        return iter(self.lits)


class Formula:
    """Variables, hash-consed atoms and the clause list."""

    def __init__(self):
        self.names: List[str] = []
        self.kinds: List[str] = []
        self.atoms: List[Atom] = []
        self.clauses: List[Clause] = []
        self._atom_table: Dict[tuple, int] = {}
        self._by_name: Dict[str, int] = {}

    # variables ----------------------------------------------------------

    def new_var(self, name: str, kind: str) -> int:
        if name in self._by_name:
            raise ValueError("duplicate variable %s" % name)
        v = len(self.names)
        self.names.append(name)
        self.kinds.append(kind)
        self._by_name[name] = v
        return v

    def var(self, name: str) -> int:
        return self._by_name[name]

    def real_vars(self) -> List[int]:
        return [v for v, k in enumerate(self.kinds) if k == REAL]

    def bool_vars(self) -> List[int]:
        return [v for v, k in enumerate(self.kinds) if k == BOOL]

    # atoms --------------------------------------------------------------

    def _intern(self, key, make) -> int:
        aid = self._atom_table.get(key)
        if aid is None:
            aid = len(self.atoms)
            self.atoms.append(make(aid))
            self._atom_table[key] = aid
        return aid

    def bool_lit(self, v: int, negated: bool = False) -> int:
        aid = self._intern(("b", v), lambda i: Atom(i, "bool", var=v))
        return make_lit(aid, negated)

    def poly_lit(self, p: Polynomial, op: str):
        """Literal for ``p op 0``; a Python bool when p is constant."""
        if p.is_constant():
            return _sign_ok(op, (p.constant_value() > 0) - (p.constant_value() < 0))
        q = p.primitive()
        if q.leading_term()[1] * p.leading_term()[1] < 0:
            op = _FLIP[op]
        negated = False
        if op in _NEGATED_OP:
            op = _NEGATED_OP[op]
            negated = True
        aid = self._intern(("p", q, op), lambda i: Atom(i, "poly", poly=q, op=op))
        return make_lit(aid, negated)

    def root_lit(self, var: int, op: str, index: int, p: Polynomial) -> int:
        if var not in p.variables or index < 1:
            raise ValueError("malformed root atom")
        q = p.primitive()
        negated = False
        if op == "!=":
            op, negated = "=", True
        aid = self._intern(("r", var, op, index, q), lambda i: Atom(i, "root", var=var, poly=q, op=op, index=index))
        return make_lit(aid, negated)

    # clauses ------------------------------------------------------------

    def make_clause(self, lits: Sequence[int], is_lemma: bool = False) -> Optional[Clause]:
        """Clause object (not registered); None for tautologies."""
        seen = []
        s = set()
        for l in lits:
            if negate(l) in s:
                return None
            if l not in s:
                s.add(l)
                seen.append(l)
        vs = set()
        for l in seen:
            vs |= self.atoms[lit_atom(l)].vars
        return Clause(tuple(seen), is_lemma=is_lemma, vars=tuple(sorted(vs)))

    def add_clause(self, lits: Sequence[int]) -> Optional[Clause]:
        c = self.make_clause(lits)
        if c is not None:
            c.id = len(self.clauses)
            self.clauses.append(c)
        return c

    # rendering ----------------------------------------------------------

    def atom_str(self, atom: Atom, negated: bool = False) -> str:
        name = self.names.__getitem__
        if atom.kind == "bool":
            return ("¬" if negated else "") + name(atom.var)
        op = _NEG_OP[atom.op] if negated else atom.op
        if atom.kind == "poly":
            return "%s %s 0" % (atom.poly.to_str(name), op)
        return "%s %s root_%d(%s)" % (name(atom.var), op, atom.index, atom.poly.to_str(name))

    def lit_str(self, lit: int) -> str:
        return self.atom_str(self.atoms[lit_atom(lit)], lit_negated(lit))

    def clause_str(self, lits) -> str:
        return " ∨ ".join(self.lit_str(l) for l in lits) if lits else "⊥"


# ---------------------------------------------------------------------------
# evaluation


def evaluate_atom(atom: Atom, assignment: Mapping[int, object]) -> Optional[bool]:
    if atom.kind == "bool":
        return assignment.get(atom.var)
    for v in atom.vars:
        if v not in assignment:
            return None
    if atom.kind == "poly":
        return _sign_ok(atom.op, sign_at(atom.poly, assignment))
    return root_atom_holds(atom.var, atom.op, atom.index, atom.poly, assignment)


def evaluate_literal(formula: Formula, lit: int, assignment: Mapping[int, object]) -> Optional[bool]:
    """True / False / None (undefined) under a partial assignment."""
    v = evaluate_atom(formula.atoms[lit_atom(lit)], assignment)
    if v is None:
        return None
    return (not v) if lit_negated(lit) else v


def clause_true(formula: Formula, clause: Sequence[int], assignment) -> bool:
    return any(evaluate_literal(formula, l, assignment) for l in clause)


# ---------------------------------------------------------------------------
# trail


@dataclass
class Entry:
    """One trail element. ``kind`` is one of bool_assign, lit_assign,
    arith_assign, new_stage, path_finder, block_finder,
    clause_feasible_updated."""

    kind: str
    var: int = -1
    value: object = None
    reason: object = None
    level: int = 0
    data: object = None


class Trail:
    """Append-only log with exact undo via a caller supplied callback."""

    def __init__(self, undo: Callable[[Entry], None]):
        self.entries: List[Entry] = []
        self._undo = undo

    def __len__(self):
        return len(self.entries)

    def push(self, e: Entry) -> int:
        self.entries.append(e)
        return len(self.entries) - 1

    def mark(self) -> int:
        return len(self.entries)

    def pop_to(self, mark: int) -> None:
        if mark < 0 or mark > len(self.entries):
            raise IndexError("invalid trail mark %d" % mark)
        while len(self.entries) > mark:
            self._undo(self.entries.pop())


# ---------------------------------------------------------------------------
# two watched variables


class WatchIndex:
    """Detects clauses that become univariate (one unassigned variable).

    ``is_assigned(v)`` and ``assigned_pos(v)`` are supplied by the owner.
    """

    def __init__(self, nvars: int, is_assigned, assigned_pos):
        self.watches: List[List[Clause]] = [[] for _ in range(nvars)]
        self.is_assigned = is_assigned
        self.assigned_pos = assigned_pos

    def init_clause(self, c: Clause):
        """Install watchers; returns the variable c is univariate to, if any
        (None when it has two unassigned variables or none at all)."""
        free = [v for v in c.vars if not self.is_assigned(v)]
        if len(c.vars) == 1:
            c.watch = [c.vars[0]]
            self.watches[c.vars[0]].append(c)
            return c.vars[0] if free else None
        if len(free) >= 2:
            c.watch = [free[0], free[1]]
        else:
            assigned = sorted((v for v in c.vars if self.is_assigned(v)), key=self.assigned_pos, reverse=True)
            c.watch = (free + assigned)[:2]
        for w in c.watch:
            self.watches[w].append(c)
        return free[0] if len(free) == 1 else None

    def update(self, v: int) -> List[tuple]:
        """Process the assignment of v; returns [(clause, univariate_var)]."""
        out = []
        lst = self.watches[v]
        keep = []
        for i, c in enumerate(lst):
            if c.deleted:
                continue
            if len(c.watch) == 1:
                keep.append(c)
                continue
            other = c.watch[1] if c.watch[0] == v else c.watch[0]
            if self.is_assigned(other):
                keep.append(c)
                continue
            repl = None
            for u in c.vars:
                if u != v and u != other and not self.is_assigned(u):
                    repl = u
                    break
            if repl is not None:
                c.watch = [other, repl]
                self.watches[repl].append(c)
            else:
                keep.append(c)
                out.append((c, other))
        self.watches[v] = keep
        return out

    def remove_deleted(self):
        for i, lst in enumerate(self.watches):
            self.watches[i] = [c for c in lst if not c.deleted]
