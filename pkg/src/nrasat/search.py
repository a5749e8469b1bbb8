"""The search engine.

One ``Engine`` runs model-constructing search over a ``Formula``. Arithmetic
variables are assigned in *stages*: the clauses univariate to the stage
variable are first satisfied by literal assignments, then a value is picked.
Clause feasible sets are maintained incrementally and feed both the
look-ahead literal decision and the propagation-based branching order.
"""

from __future__ import annotations

import random
import time
from collections import deque
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

from .algnum import sign_at
from .core import (
    BOOL,
    REAL,
    Clause,
    Entry,
    Formula,
    Trail,
    WatchIndex,
    evaluate_literal,
    lit_atom,
    lit_negated,
    make_lit,
    negate,
)
from .explain import explain_core
from .feasible import IntervalSet, _sign_ok, atom_feasible, classify, pick_witness, root_atom_holds

MODES = ("nlsat_static", "vsids", "prop_vsids")
LITERAL_DECISIONS = ("look_ahead", "lower_degree", "random")

_FULL = IntervalSet.full()


class InternalError(RuntimeError):
    """An engine invariant was violated."""


@dataclass
class EngineConfig:
    mode: str = "prop_vsids"
    literal_decision: str = "look_ahead"
    arith_decay: float = 0.95
    bool_decay: float = 0.95
    arith_bump: float = 1.0
    bool_bump: float = 1.0
    lemma_conf: int = 100
    lemma_conf_inc: float = 1.5
    seed: int = 0
    conflict_budget: Optional[int] = None
    timeout_ms: Optional[int] = None
    # single-variable block shortcut at stage processing
    shortcut: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError("unknown mode %r" % self.mode)
        if self.literal_decision not in LITERAL_DECISIONS:
            raise ValueError("unknown literal decision %r" % self.literal_decision)
        for d in (self.arith_decay, self.bool_decay):
            if not 0 < d < 1:
                raise ValueError("decay must lie in (0, 1)")
        if self.arith_bump <= 0 or self.bool_bump <= 0:
            raise ValueError("bumps must be positive")


@dataclass
class Stats:
    conflicts: int = 0
    decisions: int = 0
    stages: int = 0
    bool_decisions: int = 0
    literal_decisions: int = 0
    r_propagations: int = 0
    clause_propagations: int = 0
    lemmas_learned: int = 0
    lemmas_deleted: int = 0
    explain_calls: int = 0
    duplicate_lemmas: int = 0
    restarts: int = 0
    wall_ms: float = 0.0

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class Result:
    verdict: str  # 'sat' | 'unsat' | 'unknown'
    model: Optional[Dict[int, object]]
    stats: Stats
    lemmas: List[tuple] = field(default_factory=list)
    explanations: List[tuple] = field(default_factory=list)
    branch_log: List[tuple] = field(default_factory=list)
    # (lemma literals, arithmetic assignment, all literals false) per lemma
    emissions: List[tuple] = field(default_factory=list)


@dataclass(frozen=True)
class RProp:
    """Reason of an r-propagated literal: stage var, stage literals, order length."""

    x: int
    core: tuple
    k: int


class _Budget(Exception):
    pass


class _Unsat(Exception):
    pass


class Engine:
    def __init__(self, formula: Formula, config: Optional[EngineConfig] = None):
        self.f = formula
        self.cfg = config or EngineConfig()
        n = len(formula.names)
        self.n = n
        self.kinds = formula.kinds
        self.value: List[object] = [None] * n
        self.pos = [-1] * n
        self.alpha: Dict[int, object] = {}
        self.order: List[int] = []
        self.atom_val: Dict[int, bool] = {}
        self.atom_pos: Dict[int, int] = {}
        self.feasible: List[IntervalSet] = [_FULL] * n
        self.univ: List[List[Clause]] = [[] for _ in range(n)]
        self.level = 0
        self.stage_var: Optional[int] = None
        self.curr_set = _FULL
        self.stage_lits: tuple = ()
        self.stage_kind: Optional[str] = None
        self.trail = Trail(self._undo)
        self.watch = WatchIndex(n, lambda v: self.value[v] is not None, lambda v: self.pos[v])
        self.pending: deque = deque()
        self._unregistered: List[tuple] = []
        self._eval_cache: Dict[int, bool] = {}
        self._lset_cache: Dict[tuple, IntervalSet] = {}
        self.activity = [0.0] * n
        self._inc = {BOOL: 1.0, REAL: 1.0}
        self._clause_inc = 1.0
        self.rng = random.Random(self.cfg.seed)
        self.stats = Stats()
        self.lemmas: List[Clause] = []
        self._lemma_keys = set()
        self.trace: List[tuple] = []
        self.explanations: List[tuple] = []
        self.emissions: List[tuple] = []
        self.branch_log: List[tuple] = []
        self._lemma_limit = float(self.cfg.lemma_conf)
        self._since_reduce = 0
        self._static = self._static_order()
        self._deadline = None

    # ------------------------------------------------------------------
    # values

    def lit_value(self, lit: int) -> Optional[bool]:
        aid = lit >> 1
        atom = self.f.atoms[aid]
        if atom.kind == "bool":
            v = self.value[atom.var]
        elif aid in self.atom_val:
            v = self.atom_val[aid]
        else:
            v = self._eval_cache.get(aid)
            if v is None:
                for w in atom.vars:
                    if w not in self.alpha:
                        return None
                if atom.kind == "poly":
                    v = _sign_ok(atom.op, sign_at(atom.poly, self.alpha))
                else:
                    v = root_atom_holds(atom.var, atom.op, atom.index, atom.poly, self.alpha)
                self._eval_cache[aid] = v
        if v is None:
            return None
        return (not v) if lit & 1 else v

    def lit_pos(self, lit: int) -> int:
        """Trail position at which the literal received its value."""
        aid = lit >> 1
        atom = self.f.atoms[aid]
        if atom.kind == "bool":
            return self.pos[atom.var]
        if aid in self.atom_pos:
            return self.atom_pos[aid]
        return max(self.pos[w] for w in atom.vars)

    def lit_set(self, lit: int, x: int) -> IntervalSet:
        key = (lit, x)
        s = self._lset_cache.get(key)
        if s is None:
            base = self._lset_cache.get((lit & ~1, x))
            if base is None:
                base = atom_feasible(self.f.atoms[lit >> 1], x, self.alpha)
                self._lset_cache[(lit & ~1, x)] = base
            s = base.complement() if lit & 1 else base
            self._lset_cache[key] = s
        return s

    # ------------------------------------------------------------------
    # trail operations

    def _stage_state(self):
        return (self.stage_var, self.curr_set, self.stage_lits, self.stage_kind)

    def _push(self, kind, **kw) -> int:
        return self.trail.push(Entry(kind, level=self.level, **kw))

    def assign_lit(self, lit: int, reason=None) -> None:
        atom = self.f.atoms[lit >> 1]
        val = not (lit & 1)
        if reason is None:
            self.level += 1
        if atom.kind == "bool":
            i = self._push("bool_assign", var=atom.var, value=val, reason=reason)
            self.value[atom.var] = val
            self.pos[atom.var] = i
            self.pending.extend(self.watch.update(atom.var))
            return
        i = self._push("lit_assign", var=atom.id, value=val, reason=reason, data=self._stage_state())
        self.atom_val[atom.id] = val
        self.atom_pos[atom.id] = i
        x = self.stage_var
        if x is not None and x in atom.vars:
            self.curr_set = self.curr_set & self.lit_set(lit, x)
            self.stage_lits = self.stage_lits + (lit,)

    def assign_arith(self, x: int, val) -> None:
        self.level += 1
        i = self._push("arith_assign", var=x, value=val, data=self._stage_state())
        self.value[x] = val
        self.pos[x] = i
        self.alpha[x] = val
        self.order.append(x)
        self._lset_cache.clear()
        self.stage_var, self.curr_set, self.stage_lits, self.stage_kind = None, _FULL, (), None
        self.stats.stages += 1
        self.pending.extend(self.watch.update(x))

    def open_stage(self, x: int) -> None:
        self._push("new_stage", var=x, data=self._stage_state())
        self.stage_var, self.curr_set, self.stage_lits, self.stage_kind = x, _FULL, (), None

    def _mark_stage(self, kind: str) -> None:
        self._push(kind, var=self.stage_var, data=self.stage_kind)
        self.stage_kind = kind

    def _undo(self, e: Entry) -> None:
        k = e.kind
        if k == "bool_assign":
            self.value[e.var] = None
            self.pos[e.var] = -1
        elif k == "lit_assign":
            del self.atom_val[e.var]
            del self.atom_pos[e.var]
            self.stage_var, self.curr_set, self.stage_lits, self.stage_kind = e.data
        elif k == "arith_assign":
            self.value[e.var] = None
            self.pos[e.var] = -1
            del self.alpha[e.var]
            self.order.pop()
            self._eval_cache.clear()
            self._lset_cache.clear()
            self.stage_var, self.curr_set, self.stage_lits, self.stage_kind = e.data
        elif k == "new_stage":
            self.stage_var, self.curr_set, self.stage_lits, self.stage_kind = e.data
        elif k == "clause_feasible_updated":
            self.feasible[e.var] = e.data[1]
            self.univ[e.var].pop()
            self._unregistered.append((e.data[0], e.var))
        elif k in ("path_finder", "block_finder"):
            self.stage_kind = e.data
        else:
            raise InternalError("unknown trail entry %s" % k)

    def pop_to(self, mark: int) -> None:
        self._unregistered = []
        self.trail.pop_to(mark)
        self.level = self.trail.entries[-1].level if self.trail.entries else 0
        self.pending.clear()
        # a clause registered later than it became univariate (a lemma after
        # a semantic backjump) must survive the pop
        for c, v in reversed(self._unregistered):
            if not c.deleted and self.value[v] is None and all(
                    self.value[w] is not None for w in c.vars if w != v):
                self.pending.append((c, v))
        self._unregistered = []

    # ------------------------------------------------------------------
    # propagation

    def propagate(self) -> Optional[Clause]:
        while self.pending:
            c, v = self.pending.popleft()
            if c.deleted:
                continue
            conflict = self._process_univariate(c, v)
            if conflict is not None:
                self.pending.clear()
                return conflict
        return None

    def _process_univariate(self, c: Clause, v: int) -> Optional[Clause]:
        atoms = self.f.atoms
        if self.kinds[v] == BOOL:
            undefined = []
            for l in c.lits:
                val = self.lit_value(l)
                if val:
                    return None
                if val is None:
                    undefined.append(l)
            if not undefined:
                return c
            if len(undefined) == 1:
                self.assign_lit(undefined[0], c)
            return None
        for l in c.lits:
            if v not in atoms[l >> 1].vars and self.lit_value(l):
                return None
        if self.value[v] is not None:
            return None if any(self.lit_value(l) for l in c.lits) else c
        s = self.clause_set(c, v)
        prev = self.feasible[v]
        self._push("clause_feasible_updated", var=v, data=(c, prev))
        self.univ[v].append(c)
        self.feasible[v] = prev & s
        self.stats.clause_propagations += 1
        if v == self.stage_var:
            # a clause arriving mid-stage (a fresh lemma) asserts at once
            undefined = []
            for l in c.lits:
                val = self.lit_value(l)
                if val is None:
                    val = self.r_propagate(l, v)
                if val:
                    return None
                if val is None:
                    undefined.append(l)
            if not undefined:
                return c
            if len(undefined) == 1:
                self.assign_lit(undefined[0], c)
        return None

    def clause_set(self, c: Clause, v: int) -> IntervalSet:
        """Feasible set in v of a clause univariate to v."""
        out = IntervalSet.empty()
        atoms = self.f.atoms
        for l in c.lits:
            if v in atoms[l >> 1].vars:
                out = out | self.lit_set(l, v)
                if out.is_full():
                    break
            elif self.lit_value(l):
                return _FULL
        return out

    # ------------------------------------------------------------------
    # stage processing

    def process_stage(self, x: int) -> Optional[Clause]:
        look_ahead = self.cfg.literal_decision == "look_ahead"
        if look_ahead and not self.feasible[x].is_empty() and self.stage_kind != "block_finder":
            target = self.feasible[x] & self.curr_set
            if not target.is_empty():
                if self.stage_kind is None:
                    self._mark_stage("path_finder")
                val = pick_witness(target)
                self.decide_with_witness(x, val)
                self.assign_arith(x, val)
                return None
        if self.feasible[x].is_empty():
            if self.stage_kind is None:
                self._mark_stage("block_finder")
            if self.cfg.shortcut and self._single_var_block(x):
                raise _Unsat()
        conflict = self.process_clauses_baseline(x)
        if conflict is not None:
            return conflict
        self.assign_arith(x, pick_witness(self.curr_set))
        return None

    def _single_var_block(self, x: int) -> bool:
        s = _FULL
        for c in self.univ[x]:
            if len(c.vars) == 1 and not c.deleted:
                s = s & self.clause_set(c, x)
        return s.is_empty()

    def _choose_literal(self, x: int, undefined: List[int]) -> int:
        if self.cfg.literal_decision == "random":
            return self.rng.choice(undefined)
        atoms = self.f.atoms
        return min(undefined, key=lambda l: atoms[l >> 1].degree_in(x))

    def process_clauses_baseline(self, x: int) -> Optional[Clause]:
        # units and r-propagations reach a fixpoint before every decision;
        # deciding ahead of a pending unit lemma can replay the same conflict
        cl = self.univ[x]
        while True:
            size = len(self.trail)
            choice = None
            for c in cl:
                if c.deleted:
                    continue
                sat = False
                undefined = []
                for l in c.lits:
                    val = self.lit_value(l)
                    if val is None:
                        val = self.r_propagate(l, x)
                    if val:
                        sat = True
                        break
                    if val is None:
                        undefined.append(l)
                if sat:
                    continue
                if not undefined:
                    return c
                if len(undefined) == 1:
                    self.assign_lit(undefined[0], c)
                elif choice is None:
                    choice = undefined
            if len(self.trail) != size:
                continue
            if choice is None:
                return None
            self.stats.literal_decisions += 1
            self.assign_lit(self._choose_literal(x, choice))

    def r_propagate(self, lit: int, x: int) -> Optional[bool]:
        ls = self.lit_set(lit, x)
        if ls.is_empty():
            self.assign_lit(negate(lit), RProp(x, (), len(self.order)))
            res = False
        elif ls.is_full():
            self.assign_lit(lit, RProp(x, (), len(self.order)))
            res = True
        elif ls.disjoint(self.curr_set):
            self.assign_lit(negate(lit), RProp(x, self.stage_lits, len(self.order)))
            res = False
        elif self.curr_set.subset_of(ls):
            self.assign_lit(lit, RProp(x, self.stage_lits, len(self.order)))
            res = True
        else:
            return None
        self.stats.r_propagations += 1
        return res

    def decide_with_witness(self, x: int, val) -> List[int]:
        decided = []
        for c in self.univ[x]:
            if c.deleted:
                continue
            undefined = []
            sat = False
            for l in c.lits:
                v = self.lit_value(l)
                if v:
                    sat = True
                    break
                if v is None:
                    undefined.append(l)
            if sat:
                continue
            good = [l for l in undefined if self.lit_set(l, x).contains(val)]
            if not good:
                raise InternalError("no literal of a univariate clause admits the witness")
            if len(undefined) == 1:
                self.assign_lit(good[0], c)
            else:
                self.stats.literal_decisions += 1
                self.assign_lit(good[0])
            decided.append(good[0])
            if not self.curr_set.contains(val):
                raise InternalError("witness left the current set")
        return decided

    # ------------------------------------------------------------------
    # conflict analysis

    def _assigned_lit(self, e: Entry) -> int:
        if e.kind == "bool_assign":
            return self.f.bool_lit(e.var, not e.value)
        return make_lit(e.var, not e.value)

    def _explain_rprop(self, e: Entry) -> List[int]:
        r: RProp = e.reason
        t = self._assigned_lit(e)
        order = self.order[: r.k]
        alpha = {v: self.alpha[v] for v in order}
        core = list(r.core) + [negate(t)]
        lits = explain_core(self.f, core, alpha, order, r.x)
        self.stats.explain_calls += 1
        self.explanations.append(tuple(lits))
        for l in lits[len(core):]:
            if self.lit_value(l) is not False:
                raise InternalError("explanation cell literal not false")
        return lits

    def _round_target(self, t: int) -> int:
        # a path stage is never resumed midway: reopen it from scratch
        if self.cfg.literal_decision != "look_ahead":
            return t
        ents = self.trail.entries
        path = False
        for i in range(t - 1, -1, -1):
            k = ents[i].kind
            if k == "arith_assign":
                return t
            if k == "path_finder":
                path = True
            elif k == "new_stage":
                return i if path else t
        return t

    def analyze(self, conflict: Clause) -> None:
        self.stats.conflicts += 1
        self._since_reduce += 1
        if conflict.is_lemma:
            self._bump_clause(conflict)
        C = set(conflict.lits)
        conflict_vars = set(conflict.vars)
        ents = self.trail.entries
        while True:
            if not C:
                raise _Unsat()
            positions = {}
            for l in C:
                if self.lit_value(l) is not False:
                    raise InternalError("conflict literal not false")
                positions[l] = self.lit_pos(l)
            top = max(positions.values())
            e = ents[top]
            if e.kind == "arith_assign":
                target = top
                break
            if e.reason is None:
                rest = [p for l, p in positions.items() if p != top]
                l2 = ents[max(rest)].level if rest else 0
                target = next(i for i, en in enumerate(ents) if en.level > l2)
                break
            t = self._assigned_lit(e)
            if isinstance(e.reason, RProp):
                R = self._explain_rprop(e)
            else:
                R = e.reason.lits
                if e.reason.is_lemma:
                    self._bump_clause(e.reason)
            C.discard(negate(t))
            C.update(l for l in R if l != t)
            for l in R:
                conflict_vars |= self.f.atoms[l >> 1].vars
        lits = sorted(C, key=lambda l: (-positions[l], l))
        # emission state: the lemma must be false before the backjump
        self.emissions.append((tuple(lits), dict(self.alpha),
                               all(self.lit_value(l) is False for l in lits)))
        self._bump_vars(conflict_vars | {v for l in lits for v in self.f.atoms[l >> 1].vars})
        self.pop_to(self._round_target(target))
        self._learn(lits)

    def _learn(self, lits: List[int]) -> None:
        c = self.f.make_clause(lits, is_lemma=True)
        if c is None:
            raise InternalError("tautological lemma")
        key = frozenset(c.lits)
        if key in self._lemma_keys:
            self.stats.duplicate_lemmas += 1
        self._lemma_keys.add(key)
        c.id = -1 - len(self.lemmas)
        c.activity = self._clause_inc
        self.lemmas.append(c)
        self.trace.append(c.lits)
        self.stats.lemmas_learned += 1
        u = self.watch.init_clause(c)
        if u is not None:
            self.pending.append((c, u))
        elif all(self.lit_value(l) is False for l in c.lits):
            raise InternalError("lemma still false after backjump")

    # ------------------------------------------------------------------
    # activities and lemma deletion

    def _bump_vars(self, vs) -> None:
        cfg = self.cfg
        for v in vs:
            kind = self.kinds[v]
            self.activity[v] += self._inc[kind] * (cfg.arith_bump if kind == REAL else cfg.bool_bump)
        self._inc[REAL] /= cfg.arith_decay
        self._inc[BOOL] /= cfg.bool_decay
        if max(self._inc.values()) > 1e100 or (self.activity and max(self.activity) > 1e100):
            self.activity = [a * 1e-100 for a in self.activity]
            for k in self._inc:
                self._inc[k] *= 1e-100

    def _bump_clause(self, c: Clause) -> None:
        c.activity += self._clause_inc
        if c.activity > 1e100:
            for d in self.lemmas:
                d.activity *= 1e-100
            self._clause_inc *= 1e-100

    def reduce_lemmas(self) -> None:
        locked = {id(e.reason) for e in self.trail.entries if isinstance(e.reason, Clause)}
        live = [c for c in self.lemmas if not c.deleted and id(c) not in locked]
        live.sort(key=lambda c: c.activity)
        for c in live[: len(live) // 2]:
            c.deleted = True
            self._lemma_keys.discard(frozenset(c.lits))
            self.stats.lemmas_deleted += 1
        self.lemmas = [c for c in self.lemmas if not c.deleted]
        self.watch.remove_deleted()

    # ------------------------------------------------------------------
    # branching

    def _static_order(self) -> List[int]:
        deg = [0] * self.n
        for a in self.f.atoms:
            if a.kind != "bool":
                for v in a.vars:
                    deg[v] = max(deg[v], a.degree_in(v))
        bools = [v for v in range(self.n) if self.kinds[v] == BOOL]
        reals = sorted((v for v in range(self.n) if self.kinds[v] == REAL), key=lambda v: (deg[v], v))
        return bools + reals

    def category(self, v: int) -> str:
        if self.kinds[v] == BOOL:
            return "normal"
        kind, _ = classify(self.feasible[v])
        return {"empty": "blocked", "single_point": "fixed"}.get(kind, "normal")

    def pick_branch_variable(self) -> Optional[int]:
        free = [v for v in range(self.n) if self.value[v] is None]
        if not free:
            return None
        mode = self.cfg.mode
        blocked = [v for v in free if self.kinds[v] == REAL and self.feasible[v].is_empty()]
        if mode == "nlsat_static":
            v = next(v for v in self._static if self.value[v] is None)
        else:
            pool = free
            if mode == "prop_vsids":
                if blocked:
                    pool = blocked
                else:
                    fixed = [v for v in free if self.kinds[v] == REAL and self.category(v) == "fixed"]
                    if fixed:
                        pool = fixed
            v = max(pool, key=lambda u: (self.activity[u], -u))
        self.branch_log.append((v, self.category(v), bool(blocked)))
        return v

    # ------------------------------------------------------------------
    # main loop

    def _check_budget(self) -> None:
        b = self.cfg.conflict_budget
        if b is not None and self.stats.conflicts > b:
            raise _Budget()
        if self._deadline is not None and time.perf_counter() > self._deadline:
            raise _Budget()

    def _init_clauses(self) -> None:
        for c in self.f.clauses:
            if not c.lits:
                raise _Unsat()
            u = self.watch.init_clause(c)
            if u is not None:
                self.pending.append((c, u))

    def _search(self) -> None:
        self._init_clauses()
        last = -1  # trail length; must grow between conflicts
        while True:
            self._check_budget()
            if len(self.trail) <= last:
                raise InternalError("no progress since the last conflict")
            last = len(self.trail)
            conflict = self.propagate()
            if conflict is None and self.stage_var is not None:
                conflict = self.process_stage(self.stage_var)
                if conflict is None:
                    continue
            if conflict is not None:
                learned = self.stats.lemmas_learned
                self.analyze(conflict)
                if self.stats.lemmas_learned == learned:
                    raise InternalError("conflict produced no lemma")
                last = -1
                if self._since_reduce >= self._lemma_limit:
                    self._since_reduce = 0
                    self._lemma_limit *= self.cfg.lemma_conf_inc
                    self.reduce_lemmas()
                continue
            v = self.pick_branch_variable()
            if v is None:
                return
            self.stats.decisions += 1
            if self.kinds[v] == BOOL:
                self.stats.bool_decisions += 1
                self.assign_lit(self.f.bool_lit(v, True))
            else:
                self.open_stage(v)

    def model(self) -> Dict[int, object]:
        return {v: self.value[v] for v in range(self.n)}

    def check_model(self) -> None:
        m = self.model()
        for c in self.f.clauses:
            if not any(evaluate_literal(self.f, l, m) for l in c.lits):
                raise InternalError("model violates clause %s" % self.f.clause_str(c.lits))

    def solve(self) -> Result:
        t0 = time.perf_counter()
        if self.cfg.timeout_ms is not None:
            self._deadline = t0 + self.cfg.timeout_ms / 1000.0
        model = None
        try:
            self._search()
            self.check_model()
            verdict = "sat"
            model = self.model()
        except _Unsat:
            verdict = "unsat"
        except _Budget:
            verdict = "unknown"
        self.stats.decisions = self.stats.bool_decisions + self.stats.literal_decisions + self.stats.stages
        self.stats.wall_ms = (time.perf_counter() - t0) * 1000.0
        return Result(verdict, model, self.stats, list(self.trace), list(self.explanations),
                      list(self.branch_log), list(self.emissions))


def solve(formula: Formula, config: Optional[EngineConfig] = None) -> Result:
    return Engine(formula, config).solve()
