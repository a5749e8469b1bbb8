import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nrasat import EngineConfig, load, parse, print_model, solve
from nrasat.frontend import ParseError, clause_to_smt, parse_term, term_str, to_cnf

HEADER = "(set-logic QF_NRA)(declare-fun x () Real)(declare-fun y () Real)(declare-fun p () Bool)(declare-fun q () Bool)\n"


@pytest.mark.parametrize("text,kind", [
    ("(set-logic QF_LIA)", "logic"),
    ("(declare-fun f (Real) Real)", "unsupported"),
    ("(declare-fun x () Int)", "sort"),
    ("(declare-fun x () Real)(declare-fun x () Real)", "sort"),
    ("(assert (> z 0))", "sort"),
    ("(declare-fun x () Real)(assert (+ x 1))", "sort"),
    ("(declare-fun x () Real)(assert (> x))", "arity"),
    ("(declare-fun x () Real)(assert (> (^ x x) 0))", "unsupported"),
    ("(declare-fun x () Real)(assert (forall ((y Real)) (> y 0)))", "unsupported"),
    ("(declare-fun x () Real)(assert (> x 0)", "syntax"),
    ("(push 1)", "unsupported"),
])
def test_parse_errors(text, kind):
    with pytest.raises(ParseError) as exc:
        load(text)
    assert exc.value.kind == kind


def test_error_carries_position():
    with pytest.raises(ParseError) as exc:
        parse("(declare-fun x () Real)\n(assert (> w 0))")
    assert exc.value.line == 2 and exc.value.col > 1


def test_numerals_and_division():
    _, f = load(HEADER + "(assert (= (* 2.5 x) (/ 1 4)))")
    (c,) = f.clauses
    atom = f.atoms[c.lits[0] >> 1]
    assert atom.op == "=" and atom.poly.eval({f.var("x"): Fraction(1, 10)}) == 0


def test_division_by_variable_rejected():
    with pytest.raises(ParseError):
        load(HEADER + "(assert (> (/ 1 x) 0))")


def test_let_and_chained_comparison():
    _, f = load(HEADER + "(assert (let ((s (+ x y))) (< 0 s 1)))")
    r = solve(f)
    assert r.verdict == "sat"
    s = r.model[f.var("x")] + r.model[f.var("y")]
    assert 0 < s < 1


def test_distinct_and_xor():
    _, f = load(HEADER + "(assert (distinct x y))(assert (= x y))")
    assert solve(f).verdict == "unsat"
    _, f = load(HEADER + "(assert (xor p q))(assert (= p q))")
    assert solve(f).verdict == "unsat"


def test_top_level_or_is_one_clause():
    _, f = load(HEADER + "(assert (or (> x 0) (< y 0) p))")
    assert len(f.clauses) == 1 and len(f.clauses[0].lits) == 3


def test_constant_atoms_fold():
    _, f = load(HEADER + "(assert (or (> 1 0) (> x 0)))")
    assert f.clauses == []
    _, f = load(HEADER + "(assert (> 0 1))")
    assert solve(f).verdict == "unsat"


def test_print_model_hides_aux_and_prints_algebraic():
    _, f = load(HEADER + "(assert (and (= (* x x) 2) (< x 0)))(assert (xor p q))")
    r = solve(f)
    text = print_model(f, r.model)
    assert text.startswith("(model") and "_t" not in text
    assert "(define-fun x () Real root(x^2 - 2, 1)" in text
    assert "-1.41421" in text


def test_clause_to_smt_reparses():
    _, f = load(HEADER + "(assert (or (> (* x y) 1) (not p) (<= (- x) (/ 1 3))))")
    text = HEADER + "(assert %s)" % clause_to_smt(f, f.clauses[0].lits)
    _, g = load(text)
    assert len(g.clauses) == 1 and len(g.clauses[0].lits) == 3


# ---------------------------------------------------------------------------
# properties: printing round trip and CNF equisatisfiability

DECLS = {"x": "Real", "y": "Real", "p": "Bool", "q": "Bool"}

nums = st.fractions(min_value=-20, max_value=20, max_denominator=8).map(
    lambda c: "%d" % c if c.denominator == 1 and c >= 0 else
    ("(- %d)" % -c if c.denominator == 1 else ("(/ %d %d)" % (c.numerator, c.denominator) if c > 0 else
                                               "(- (/ %d %d))" % (-c.numerator, c.denominator))))

real_terms = st.recursive(
    st.one_of(st.sampled_from(["x", "y"]), nums),
    lambda sub: st.one_of(
        st.lists(sub, min_size=2, max_size=3).map(lambda a: "(+ %s)" % " ".join(a)),
        st.lists(sub, min_size=2, max_size=2).map(lambda a: "(* %s)" % " ".join(a)),
        st.lists(sub, min_size=1, max_size=2).map(lambda a: "(- %s)" % " ".join(a)),
    ),
    max_leaves=5,
)

atoms = st.one_of(
    st.sampled_from(["p", "q", "true", "false"]),
    st.tuples(st.sampled_from(["<", "<=", "=", ">=", ">"]), real_terms, real_terms).map(
        lambda t: "(%s %s %s)" % t),
)

bool_terms = st.recursive(
    atoms,
    lambda sub: st.one_of(
        sub.map(lambda a: "(not %s)" % a),
        st.lists(sub, min_size=1, max_size=3).map(lambda a: "(and %s)" % " ".join(a)),
        st.lists(sub, min_size=1, max_size=3).map(lambda a: "(or %s)" % " ".join(a)),
        st.tuples(sub, sub).map(lambda a: "(=> %s %s)" % a),
        st.tuples(sub, sub).map(lambda a: "(xor %s %s)" % a),
        st.tuples(sub, sub).map(lambda a: "(= %s %s)" % a),
        st.tuples(sub, sub, sub).map(lambda a: "(ite %s %s %s)" % a),
    ),
    max_leaves=6,
)


@given(bool_terms)
def test_print_parse_roundtrip(text):
    t = parse_term(text, DECLS)
    assert parse_term(term_str(t), DECLS) == t


# boolean skeleton only: atoms over one real compare x with constants, so a
# finite set of probe values realizes every sign pattern

lin_atoms = st.tuples(st.sampled_from(["<", "<=", "=", ">=", ">"]), st.integers(-2, 2)).map(
    lambda t: "(%s x %s)" % (t[0], "%d" % t[1] if t[1] >= 0 else "(- %d)" % -t[1]))

skeletons = st.recursive(
    st.one_of(st.sampled_from(["p", "q"]), lin_atoms),
    lambda sub: st.one_of(
        sub.map(lambda a: "(not %s)" % a),
        st.lists(sub, min_size=2, max_size=3).map(lambda a: "(and %s)" % " ".join(a)),
        st.lists(sub, min_size=2, max_size=3).map(lambda a: "(or %s)" % " ".join(a)),
        st.tuples(sub, sub).map(lambda a: "(xor %s %s)" % a),
        st.tuples(sub, sub).map(lambda a: "(= %s %s)" % a),
        st.tuples(sub, sub, sub).map(lambda a: "(ite %s %s %s)" % a),
    ),
    max_leaves=6,
)

_CMP = {"<": lambda a, b: a < b, "<=": lambda a, b: a <= b, "=": lambda a, b: a == b,
        ">=": lambda a, b: a >= b, ">": lambda a, b: a > b}


def _eval_real(t, env):
    k = t[0]
    if k == "num":
        return t[1]
    if k == "var":
        return env[t[1]]
    vals = [_eval_real(a, env) for a in t[1:]]
    if k == "-" and len(vals) == 1:
        return -vals[0]
    raise AssertionError(k)


def _eval_bool(t, env):
    k = t[0]
    if k in ("true", "false"):
        return k == "true"
    if k == "var":
        return env[t[1]]
    if k in _CMP:
        vals = [_eval_real(a, env) for a in t[1:]]
        return all(_CMP[k](a, b) for a, b in zip(vals, vals[1:]))
    args = [_eval_bool(a, env) for a in t[1:]]
    if k == "not":
        return not args[0]
    if k == "and":
        return all(args)
    if k == "or":
        return any(args)
    if k == "xor":
        out = args[0]
        for a in args[1:]:
            out = out != a
        return out
    if k == "iff":
        return all(a == b for a, b in zip(args, args[1:]))
    if k == "ite":
        return args[1] if args[0] else args[2]
    raise AssertionError(k)


PROBES = [Fraction(k, 2) for k in range(-6, 7)]


@settings(max_examples=150)
@given(st.lists(skeletons, min_size=1, max_size=3))
def test_cnf_equisatisfiable(asserts):
    text = HEADER + "".join("(assert %s)" % a for a in asserts)
    script, f = load(text)
    expected = any(
        all(_eval_bool(t, {"x": xv, "p": pv, "q": qv}) for t in script.assertions)
        for xv, pv, qv in itertools.product(PROBES, (False, True), (False, True))
    )
    r = solve(f, EngineConfig())
    assert r.verdict == ("sat" if expected else "unsat")
    if expected:
        env = {"x": r.model[f.var("x")], "p": r.model[f.var("p")], "q": r.model[f.var("q")]}
        assert all(_eval_bool(t, env) for t in script.assertions)
