"""SMT-LIB v2 frontend for a QF_NRA subset.

Supported commands: set-logic, set-info, set-option, declare-fun (0-ary),
declare-const, assert, check-sat, get-model, exit. Terms: numerals and
decimals, + - * / (by constants), ^ with a numeral exponent, comparisons
(chainable), not, and, or, =>, xor, ite over Bool, distinct, let.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algnum import RealAlg, format_value
from .core import BOOL, REAL, Formula, lit_atom, lit_negated, negate
from .poly import ONE, ZERO, Polynomial


class ParseError(ValueError):
    """Diagnostic with a kind (lexical, syntax, sort, arity, unsupported, logic)."""

    def __init__(self, kind: str, msg: str, line: int = 0, col: int = 0):
        super().__init__("%s error at %d:%d: %s" % (kind, line, col, msg))
        self.kind = kind
        self.line = line
        self.col = col


# ---------------------------------------------------------------------------
# s-expressions


@dataclass(frozen=True)
class Tok:
    text: str
    line: int
    col: int


_TOKEN = re.compile(r"""\s+|;[^\n]*|\(|\)|\|[^|]*\||"(?:[^"]|"")*"|[^\s()|";]+""")


def tokenize(text: str) -> List[Tok]:
    out = []
    line, lstart, i = 1, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError("lexical", "unexpected character %r" % text[i], line, i - lstart + 1)
        s = m.group(0)
        if not (s[0].isspace() or s[0] == ";"):
            out.append(Tok(s, line, i - lstart + 1))
        nl = s.count("\n")
        if nl:
            line += nl
            lstart = i + s.rindex("\n") + 1
        i = m.end()
    return out


def read_sexprs(toks: List[Tok]) -> list:
    """Nested lists of Tok."""
    stack: list = [[]]
    opens = []
    for t in toks:
        if t.text == "(":
            stack.append([])
            opens.append(t)
        elif t.text == ")":
            if len(stack) == 1:
                raise ParseError("syntax", "unbalanced ')'", t.line, t.col)
            done = stack.pop()
            opens.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(t)
    if len(stack) != 1:
        t = opens[-1]
        raise ParseError("syntax", "unclosed '('", t.line, t.col)
    return stack[0]


def _pos(x) -> Tuple[int, int]:
    while isinstance(x, list):
        if not x:
            return (0, 0)
        x = x[0]
    return (x.line, x.col)


# ---------------------------------------------------------------------------
# terms: ('num', Fraction) | ('var', name) | ('true',) | ('false',) | (op, *args)

_ARITH = {"+", "-", "*", "/", "^"}
_CMP = {"<", "<=", "=", ">=", ">"}
_BOOL_OPS = {"not", "and", "or", "=>", "xor", "ite", "distinct", "iff"}
_UNSUPPORTED = {"forall", "exists", "!", "to_int", "to_real", "is_int", "div", "mod", "abs", "match", "lambda"}
_NUM = re.compile(r"^(\d+)(?:\.(\d+))?$")


@dataclass
class Script:
    logic: Optional[str] = None
    decls: Dict[str, str] = field(default_factory=dict)
    decl_order: List[str] = field(default_factory=list)
    assertions: List[tuple] = field(default_factory=list)
    commands: List[tuple] = field(default_factory=list)


class _Parser:
    def __init__(self, script: Script):
        self.s = script

    def sort_of(self, t: tuple) -> str:
        k = t[0]
        if k == "num":
            return "Real"
        if k == "var":
            return self.s.decls[t[1]]
        if k in ("true", "false") or k in _CMP or k in _BOOL_OPS:
            return "Bool"
        return "Real"

    def term(self, x, env: Dict[str, tuple]) -> tuple:
        if isinstance(x, Tok):
            s = x.text
            m = _NUM.match(s)
            if m:
                return ("num", Fraction(s) if m.group(2) else Fraction(int(s)))
            if s in ("true", "false"):
                return (s,)
            if s.startswith("|"):
                s = s[1:-1]
            if s in env:
                return env[s]
            if s in self.s.decls:
                return ("var", s)
            raise ParseError("sort", "undeclared symbol %s" % s, x.line, x.col)
        if not x:
            raise ParseError("syntax", "empty application", *_pos(x))
        head = x[0]
        if isinstance(head, list):
            raise ParseError("unsupported", "indexed or higher-order application", *_pos(x))
        op = head.text
        line, col = head.line, head.col
        if op == "let":
            if len(x) != 3 or not isinstance(x[1], list):
                raise ParseError("arity", "let expects bindings and a body", line, col)
            inner = dict(env)
            for b in x[1]:
                if not isinstance(b, list) or len(b) != 2 or not isinstance(b[0], Tok):
                    raise ParseError("syntax", "malformed let binding", *_pos(b))
                inner[b[0].text] = self.term(b[1], env)
            return self.term(x[2], inner)
        if op in _UNSUPPORTED:
            raise ParseError("unsupported", "%s is not supported" % op, line, col)
        args = [self.term(a, env) for a in x[1:]]
        sorts = [self.sort_of(a) for a in args]

        def need(n_min, n_max=None):
            if len(args) < n_min or (n_max is not None and len(args) > n_max):
                raise ParseError("arity", "wrong number of arguments to %s" % op, line, col)

        def all_sort(srt):
            for a, s in zip(args, sorts):
                if s != srt:
                    raise ParseError("sort", "%s expects %s arguments" % (op, srt), line, col)

        if op in _ARITH:
            need(1 if op == "-" else 2, 2 if op == "^" else None)
            all_sort("Real")
            if op == "^" and args[1][0] != "num":
                raise ParseError("unsupported", "exponent must be a numeral", line, col)
            if op == "^" and args[1][1].denominator != 1:
                raise ParseError("unsupported", "exponent must be an integer", line, col)
            return (op,) + tuple(args)
        if op in _CMP:
            need(2)
            if op == "=" and sorts[0] == "Bool":
                all_sort("Bool")
                return ("iff",) + tuple(args)
            all_sort("Real")
            return (op,) + tuple(args)
        if op == "distinct":
            need(2)
            if len(set(sorts)) != 1:
                raise ParseError("sort", "distinct over mixed sorts", line, col)
            return ("distinct",) + tuple(args)
        if op == "not":
            need(1, 1)
        elif op == "ite":
            need(3, 3)
            if sorts[1] != "Bool" or sorts[2] != "Bool":
                raise ParseError("unsupported", "ite over Real", line, col)
        elif op in ("and", "or", "xor", "=>"):
            need(1 if op in ("and", "or") else 2)
        else:
            raise ParseError("unsupported", "unknown function %s" % op, line, col)
        all_sort("Bool")
        return (op,) + tuple(args)

    def command(self, x) -> None:
        if not isinstance(x, list) or not x or not isinstance(x[0], Tok):
            raise ParseError("syntax", "expected a command", *_pos(x))
        name = x[0].text
        line, col = x[0].line, x[0].col
        s = self.s
        if name == "set-logic":
            if len(x) != 2:
                raise ParseError("arity", "set-logic expects one argument", line, col)
            logic = x[1].text
            if logic != "QF_NRA":
                raise ParseError("logic", "unsupported logic %s" % logic, x[1].line, x[1].col)
            s.logic = logic
        elif name in ("set-info", "set-option"):
            pass
        elif name in ("declare-fun", "declare-const"):
            if name == "declare-fun":
                if len(x) != 4:
                    raise ParseError("arity", "declare-fun expects name, arguments and sort", line, col)
                if x[2]:
                    raise ParseError("unsupported", "non-constant function symbols", *_pos(x[2]) if x[2] else (line, col))
                sort_tok = x[3]
            else:
                if len(x) != 3:
                    raise ParseError("arity", "declare-const expects name and sort", line, col)
                sort_tok = x[2]
            if not isinstance(x[1], Tok):
                raise ParseError("syntax", "expected a symbol", line, col)
            if not isinstance(sort_tok, Tok) or sort_tok.text not in ("Real", "Bool"):
                p = _pos(sort_tok)
                raise ParseError("sort", "unsupported sort", *p)
            v = x[1].text.strip("|")
            if v in s.decls:
                raise ParseError("sort", "redeclared symbol %s" % v, x[1].line, x[1].col)
            s.decls[v] = sort_tok.text
            s.decl_order.append(v)
            s.commands.append(("declare", v, sort_tok.text))
        elif name == "assert":
            if len(x) != 2:
                raise ParseError("arity", "assert expects one term", line, col)
            t = self.term(x[1], {})
            if self.sort_of(t) != "Bool":
                raise ParseError("sort", "assertion is not Bool", line, col)
            s.assertions.append(t)
            s.commands.append(("assert", t))
        elif name in ("check-sat", "get-model", "exit"):
            s.commands.append((name,))
        else:
            raise ParseError("unsupported", "command %s" % name, line, col)


def parse(text: str) -> Script:
    script = Script()
    p = _Parser(script)
    for x in read_sexprs(tokenize(text)):
        p.command(x)
    return script


def parse_term(text: str, decls: Dict[str, str]) -> tuple:
    script = Script(decls=dict(decls))
    xs = read_sexprs(tokenize(text))
    if len(xs) != 1:
        raise ParseError("syntax", "expected one term")
    return _Parser(script).term(xs[0], {})


# ---------------------------------------------------------------------------
# printing terms


def _num_str(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator) if c >= 0 else "(- %d)" % -c.numerator
    d = c.denominator
    k = 0
    while d % 2 == 0 or d % 5 == 0:
        d //= 2 if d % 2 == 0 else 5
        k += 1
    if d == 1 and c >= 0:
        return _exact_decimal(c, k)
    body = "(/ %d %d)" % (abs(c.numerator), c.denominator)
    return body if c >= 0 else "(- %s)" % body


def _exact_decimal(c: Fraction, k: int) -> str:
    scaled = c * 10 ** k
    n = scaled.numerator // scaled.denominator
    s = str(n).rjust(k + 1, "0")
    return s[:-k] + "." + s[-k:]


def term_str(t: tuple) -> str:
    k = t[0]
    if k == "num":
        return _num_str(t[1])
    if k == "var":
        return t[1]
    if k in ("true", "false"):
        return k
    op = "=" if k == "iff" else k
    return "(%s %s)" % (op, " ".join(term_str(a) for a in t[1:]))


# ---------------------------------------------------------------------------
# CNF conversion


class _Cnf:
    def __init__(self, script: Script):
        self.s = script
        self.f = Formula()
        self.vars: Dict[str, int] = {}
        for name in script.decl_order:
            kind = BOOL if script.decls[name] == "Bool" else REAL
            self.vars[name] = self.f.new_var(name, kind)
        self.cache: Dict[tuple, object] = {}
        self.fresh = 0
        self.aux: List[int] = []

    def poly(self, t: tuple) -> Polynomial:
        k = t[0]
        if k == "num":
            return Polynomial.const(t[1])
        if k == "var":
            return Polynomial.var(self.vars[t[1]])
        args = [self.poly(a) for a in t[1:]]
        if k == "+":
            out = ZERO
            for a in args:
                out = out + a
            return out
        if k == "-":
            if len(args) == 1:
                return -args[0]
            out = args[0]
            for a in args[1:]:
                out = out - a
            return out
        if k == "*":
            out = ONE
            for a in args:
                out = out * a
            return out
        if k == "/":
            out = args[0]
            for a in args[1:]:
                if not a.is_constant() or a.constant_value() == 0:
                    raise ParseError("unsupported", "division by a non-constant or zero")
                out = out * Polynomial.const(1 / a.constant_value())
            return out
        if k == "^":
            e = t[2][1]
            if e < 0:
                raise ParseError("unsupported", "negative exponent")
            return args[0] ** int(e)
        raise ParseError("sort", "not a Real term: %s" % k)

    def new_aux(self) -> int:
        while True:
            name = "_t%d" % self.fresh
            self.fresh += 1
            if name not in self.vars:
                break
        v = self.f.new_var(name, BOOL)
        self.vars[name] = v
        self.aux.append(v)
        return v

    def clause(self, lits) -> None:
        self.f.add_clause(lits)

    def lit(self, t: tuple):
        """Literal (int) or Python bool for the Bool term t."""
        hit = self.cache.get(t)
        if hit is not None:
            return hit
        out = self._lit(t)
        self.cache[t] = out
        return out

    def _lit(self, t: tuple):
        k = t[0]
        if k == "true":
            return True
        if k == "false":
            return False
        if k == "var":
            return self.f.bool_lit(self.vars[t[1]])
        if k == "not":
            a = self.lit(t[1])
            return (not a) if isinstance(a, bool) else negate(a)
        if k in _CMP:
            parts = [self.f.poly_lit(self.poly(a) - self.poly(b), k) for a, b in zip(t[1:], t[2:])]
            return self._and(parts)
        if k == "distinct":
            pairs = []
            for i in range(1, len(t)):
                for j in range(i + 1, len(t)):
                    eq = ("iff", t[i], t[j]) if self._is_bool(t[i]) else ("=", t[i], t[j])
                    pairs.append(self._neg(self.lit(eq)))
            return self._and(pairs)
        if k == "and":
            return self._and([self.lit(a) for a in t[1:]])
        if k == "or":
            return self._or([self.lit(a) for a in t[1:]])
        if k == "=>":
            args = [self.lit(a) for a in t[1:]]
            return self._or([self._neg(a) for a in args[:-1]] + [args[-1]])
        if k == "iff":
            out = [self._iff(self.lit(a), self.lit(b)) for a, b in zip(t[1:], t[2:])]
            return self._and(out)
        if k == "xor":
            acc = self.lit(t[1])
            for a in t[2:]:
                acc = self._neg(self._iff(acc, self.lit(a)))
            return acc
        if k == "ite":
            return self._ite(self.lit(t[1]), self.lit(t[2]), self.lit(t[3]))
        raise ParseError("sort", "not a Bool term: %s" % k)

    def _is_bool(self, t) -> bool:
        return _Parser(self.s).sort_of(t) == "Bool"

    @staticmethod
    def _neg(a):
        return (not a) if isinstance(a, bool) else negate(a)

    def _and(self, ls):
        if any(l is False for l in ls):
            return False
        ls = list(dict.fromkeys(l for l in ls if l is not True))
        if not ls:
            return True
        if len(ls) == 1:
            return ls[0]
        t = self.f.bool_lit(self.new_aux())
        for l in ls:
            self.clause([negate(t), l])
        self.clause([t] + [negate(l) for l in ls])
        return t

    def _or(self, ls):
        if any(l is True for l in ls):
            return True
        return self._neg(self._and([self._neg(l) for l in ls]))

    def _iff(self, a, b):
        if isinstance(a, bool):
            return b if a else self._neg(b)
        if isinstance(b, bool):
            return a if b else negate(a)
        if a == b:
            return True
        if a == negate(b):
            return False
        t = self.f.bool_lit(self.new_aux())
        self.clause([negate(t), negate(a), b])
        self.clause([negate(t), a, negate(b)])
        self.clause([t, a, b])
        self.clause([t, negate(a), negate(b)])
        return t

    def _ite(self, c, a, b):
        if isinstance(c, bool):
            return a if c else b
        if isinstance(a, bool) and isinstance(b, bool):
            if a == b:
                return a
            return c if a else negate(c)
        t = self.f.bool_lit(self.new_aux())
        for cl in ([negate(t), negate(c), a], [negate(t), c, b], [t, negate(c), self._neg(a)], [t, c, self._neg(b)]):
            if any(l is True for l in cl):
                continue
            self.clause([l for l in cl if l is not False])
        return t

    def top(self, t: tuple) -> None:
        if t[0] == "and":
            for a in t[1:]:
                self.top(a)
            return
        if t[0] == "true":
            return
        disj = t[1:] if t[0] == "or" else (t,)
        lits = []
        for a in disj:
            l = self.lit(a)
            if l is True:
                return
            if l is not False:
                lits.append(l)
        self.clause(lits)


def to_cnf(script: Script) -> Formula:
    """Equisatisfiable clause form; fresh Tseitin variables are named ``_tN``."""
    c = _Cnf(script)
    for t in script.assertions:
        c.top(t)
    c.f.aux_vars = list(c.aux)
    return c.f


def load(text: str) -> Tuple[Script, Formula]:
    s = parse(text)
    return s, to_cnf(s)


# ---------------------------------------------------------------------------
# printing


def _smt_poly(p: Polynomial, names) -> str:
    terms = []
    for mono, c in sorted(p.terms.items(), reverse=True):
        factors = []
        for v, e in mono:
            factors.append(names[v] if e == 1 else "(^ %s %d)" % (names[v], e))
        if c != 1 or not factors:
            factors.insert(0, _num_str(c))
        terms.append(factors[0] if len(factors) == 1 else "(* %s)" % " ".join(factors))
    if not terms:
        return "0"
    return terms[0] if len(terms) == 1 else "(+ %s)" % " ".join(terms)


def lit_to_smt(f: Formula, lit: int) -> str:
    atom = f.atoms[lit_atom(lit)]
    names = f.names
    if atom.kind == "bool":
        s = names[atom.var]
    elif atom.kind == "poly":
        s = "(%s %s 0)" % (atom.op, _smt_poly(atom.poly, names))
    else:
        v = names[atom.var]
        s = "(%s %s (root %s %d %s))" % (atom.op, v, _smt_poly(atom.poly, names), atom.index, v)
    return "(not %s)" % s if lit_negated(lit) else s


def clause_to_smt(f: Formula, lits) -> str:
    if not lits:
        return "false"
    if len(lits) == 1:
        return lit_to_smt(f, lits[0])
    return "(or %s)" % " ".join(lit_to_smt(f, l) for l in lits)


def value_str(v, name: str) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, RealAlg):
        return format_value(v, name)
    return _num_str(Fraction(v))


def print_model(f: Formula, model: Dict[int, object], include_aux: bool = False) -> str:
    aux = set(getattr(f, "aux_vars", ()))
    lines = ["(model"]
    for v, name in enumerate(f.names):
        if v in aux and not include_aux:
            continue
        sort = "Bool" if f.kinds[v] == BOOL else "Real"
        lines.append("  (define-fun %s () %s %s)" % (name, sort, value_str(model[v], name)))
    lines.append(")")
    return "\n".join(lines)
