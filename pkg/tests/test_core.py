from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nrasat.core import (
    BOOL,
    REAL,
    Entry,
    Formula,
    Trail,
    WatchIndex,
    evaluate_literal,
    lit_atom,
    negate,
)
from nrasat.poly import Polynomial

from helpers import P, formula_with

OPS = ["<", "<=", "=", ">=", ">", "!="]
_HOLDS = {"<": lambda s: s < 0, "<=": lambda s: s <= 0, "=": lambda s: s == 0,
          ">=": lambda s: s >= 0, ">": lambda s: s > 0, "!=": lambda s: s != 0}
_FLIP = {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "=": "=", "!=": "!="}

small_polys = st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(0, 2)).map(
    lambda t: "(%d)*x**2 + (%d)*x*y + (%d)*y + %d" % t)


def test_atoms_are_hash_consed():
    f, ids = formula_with(reals=["x", "y"])
    a = f.poly_lit(P("2*x - 4*y", ids), "<")
    b = f.poly_lit(P("x - 2*y", ids), "<")
    assert a == b and len(f.atoms) == 1
    assert f.poly_lit(P("x - 2*y", ids), ">=") == negate(a)


def test_constant_comparison_folds_to_bool():
    f, ids = formula_with(reals=["x"])
    assert f.poly_lit(Polynomial.const(3), ">") is True
    assert f.poly_lit(Polynomial.const(0), "<") is False


def test_tautological_clause_dropped():
    f, ids = formula_with(reals=["x"], bools=["b"])
    b = f.bool_lit(ids["b"])
    assert f.add_clause([b, negate(b)]) is None
    c = f.add_clause([b, b, f.poly_lit(P("x", ids), ">")])
    assert len(c.lits) == 2 and c.vars == (ids["b"], ids["x"])


def test_root_literal_validation():
    f, ids = formula_with(reals=["x", "y"])
    with pytest.raises(ValueError):
        f.root_lit(ids["y"], "<", 1, P("x**2 - 1", ids))
    with pytest.raises(ValueError):
        f.root_lit(ids["y"], "<", 0, P("y**2 - x", ids))


def test_evaluation_is_three_valued():
    f, ids = formula_with(reals=["x", "y"], bools=["b"])
    l = f.poly_lit(P("x*y - 1", ids), ">")
    assert evaluate_literal(f, l, {ids["x"]: Fraction(2)}) is None
    assert evaluate_literal(f, l, {ids["x"]: Fraction(2), ids["y"]: Fraction(1)}) is True
    assert evaluate_literal(f, negate(l), {ids["x"]: Fraction(2), ids["y"]: Fraction(1)}) is False
    assert evaluate_literal(f, f.bool_lit(ids["b"], True), {ids["b"]: False}) is True


def test_root_atom_evaluation():
    f, ids = formula_with(reals=["x", "y"])
    l = f.root_lit(ids["y"], "<", 2, P("y**2 - x", ids))  # y < sqrt(x)
    x, y = ids["x"], ids["y"]
    assert evaluate_literal(f, l, {x: Fraction(4), y: Fraction(1)}) is True
    assert evaluate_literal(f, l, {x: Fraction(4), y: Fraction(2)}) is False
    # fewer than two roots: the atom is false
    assert evaluate_literal(f, l, {x: Fraction(-1), y: Fraction(-5)}) is False


@given(small_polys, st.sampled_from(OPS), st.integers(-3, 3).filter(bool),
       st.fractions(-3, 3, max_denominator=3), st.fractions(-3, 3, max_denominator=3))
def test_atom_normalization_preserves_meaning(expr, op, k, xv, yv):
    f, ids = formula_with(reals=["x", "y"])
    p = P(expr, ids)
    point = {ids["x"]: xv, ids["y"]: yv}
    l1 = f.poly_lit(p, op)
    scaled_op = op if k > 0 else _FLIP[op]
    l2 = f.poly_lit(p * Polynomial.const(k), scaled_op)
    if isinstance(l1, bool):
        assert l1 == l2
        return
    assert l1 == l2
    val = p.eval(point)
    assert evaluate_literal(f, l1, point) == _HOLDS[op]((val > 0) - (val < 0))
    atom = f.atoms[lit_atom(l1)]
    assert atom.op in ("<", "=", ">")
    assert atom.poly.leading_term()[1] > 0


def test_trail_pop_calls_undo_in_reverse():
    undone = []
    t = Trail(lambda e: undone.append(e.var))
    for v in range(5):
        t.push(Entry("arith_assign", var=v))
    t.pop_to(2)
    assert undone == [4, 3, 2] and len(t) == 2
    with pytest.raises(IndexError):
        t.pop_to(5)


def test_watch_index_reports_univariate_clauses():
    f, ids = formula_with(reals=["x", "y", "z"])
    c = f.add_clause([f.poly_lit(P("x + y + z", ids), ">")])
    assigned = {}
    w = WatchIndex(3, lambda v: v in assigned, lambda v: assigned[v])
    assert w.init_clause(c) is None
    assigned[ids["x"]] = 0
    assert w.update(ids["x"]) == []
    assigned[ids["z"]] = 1
    out = w.update(ids["z"])
    assert out == [(c, ids["y"])]


def test_watch_index_single_variable_clause():
    f, ids = formula_with(reals=["x"])
    c = f.add_clause([f.poly_lit(P("x**2 - 2", ids), ">")])
    w = WatchIndex(1, lambda v: False, lambda v: -1)
    assert w.init_clause(c) == ids["x"]


def test_clause_str():
    f, ids = formula_with(reals=["x"], bools=["b"])
    s = f.clause_str([f.bool_lit(ids["b"], True), f.poly_lit(P("x - 1", ids), "<=")])
    assert s == "¬b ∨ x - 1 <= 0"
    assert f.clause_str([]) == "⊥"
