import math
from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from nrasat import univariate as up
from nrasat.algnum import (
    RealAlg,
    compare,
    format_value,
    isolate_roots,
    pick_rational_between,
    real_roots_at,
    sign_at,
)
from nrasat.poly import Polynomial

from helpers import P

X, Y, Z = 0, 1, 2
NAMES = {"x": X, "y": Y, "z": Z}
T = sympy.Symbol("t")


def sqrt(n):
    return next(r for r in isolate_roots([-n, 0, 1]) if r > 0)


def neg_sqrt(n):
    return next(r for r in isolate_roots([-n, 0, 1]) if r < 0)


def test_isolate_matches_sympy_count_and_order():
    c = [6, -5, -8, 3, 1]  # mixed rational and irrational roots
    ours = isolate_roots(c)
    ref = sympy.Poly(list(reversed(c)), T).real_roots()
    assert len(ours) == len(ref)
    for a, b in zip(ours, ref):
        assert abs(float(a) - float(sympy.N(b, 30))) < 1e-12
    assert all(compare(a, b) < 0 for a, b in zip(ours, ours[1:]))


def test_rational_roots_are_fractions():
    rs = isolate_roots([-6, 1, 1])  # (x + 3)(x - 2)
    assert rs == [Fraction(-3), Fraction(2)]


def test_repeated_roots_reported_once():
    assert isolate_roots([1, -2, 1]) == [Fraction(1)]
    rs = isolate_roots([4, 0, -4, 0, 1])  # (x^2 - 2)^2
    assert len(rs) == 2 and compare(rs[0], neg_sqrt(2)) == 0 and compare(rs[1], sqrt(2)) == 0


def test_compare_algebraic_and_rational():
    r2, r3 = sqrt(2), sqrt(3)
    assert compare(r2, r3) < 0 and compare(r3, r2) > 0
    assert compare(r2, Fraction(141, 100)) > 0 and compare(r2, Fraction(142, 100)) < 0
    assert compare(r2, sqrt(2)) == 0
    assert compare(float("-inf"), r2) < 0 and compare(r2, float("inf")) < 0


def test_equal_numbers_with_different_polynomials():
    # sqrt2 given through the reducible (x^2 - 2)(x^2 + 1)
    b = RealAlg((-2, 0, -1, 0, 1), Fraction(1), Fraction(2))
    assert compare(sqrt(2), b) == 0 and compare(b, sqrt(3)) < 0


def test_sign_at_single_algebraic():
    r2 = sqrt(2)
    assert sign_at(P("x**2 - 2", NAMES), {X: r2}) == 0
    assert sign_at(P("x - 1", NAMES), {X: r2}) == 1
    assert sign_at(P("x*y - 2", NAMES), {X: r2, Y: r2}) == 0
    assert sign_at(P("x*y - 3", NAMES), {X: r2, Y: sqrt(3)}) == -1


def test_sign_at_two_algebraic_exact_zero():
    # sqrt2 * sqrt3 - sqrt6 = 0 needs an exact zero test
    p = P("x*y - z", NAMES)
    assert sign_at(p, {X: sqrt(2), Y: sqrt(3), Z: sqrt(6)}) == 0
    assert sign_at(P("x + y - z", NAMES), {X: sqrt(2), Y: sqrt(3), Z: sqrt(10)}) == -1


def test_sign_at_sum_of_square_roots():
    # sqrt2 + sqrt3 is a root of t^4 - 10 t^2 + 1
    s = next(r for r in isolate_roots([1, 0, -10, 0, 1]) if float(r) > 3)
    assert sign_at(P("x + y - z", NAMES), {X: sqrt(2), Y: sqrt(3), Z: s}) == 0


def test_real_roots_at_nullified():
    p = P("x*y - x", NAMES)
    assert real_roots_at(p, Y, {X: Fraction(0)}) is None
    assert real_roots_at(p, Y, {X: Fraction(2)}) == [Fraction(1)]


def test_real_roots_at_algebraic_coefficients():
    # y^2 = x at x = sqrt2: y = +- 2^(1/4)
    rs = real_roots_at(P("y**2 - x", NAMES), Y, {X: sqrt(2)})
    assert len(rs) == 2
    assert abs(float(rs[1]) - 2 ** 0.25) < 1e-12 and abs(float(rs[0]) + 2 ** 0.25) < 1e-12


def test_real_roots_at_filters_spurious_candidates():
    # y - x = 0 at x = sqrt2 has exactly the root sqrt2, not -sqrt2
    rs = real_roots_at(P("y - x", NAMES), Y, {X: sqrt(2)})
    assert len(rs) == 1 and compare(rs[0], sqrt(2)) == 0


def test_pick_rational_between_preferences():
    assert pick_rational_between(Fraction(-1), Fraction(1)) == 0
    assert pick_rational_between(Fraction(1, 2), Fraction(5, 2)) == 1
    assert pick_rational_between(Fraction(-5, 2), Fraction(-1, 2)) == -1
    assert pick_rational_between(Fraction(1, 3), Fraction(2, 3)) == Fraction(1, 2)
    v = pick_rational_between(sqrt(2), sqrt(3))
    assert v == Fraction(3, 2)
    assert pick_rational_between(sqrt(2), float("inf")) == 2


@given(st.fractions(min_value=-50, max_value=50, max_denominator=50),
       st.fractions(min_value=-50, max_value=50, max_denominator=50))
def test_pick_rational_between_is_inside_and_simplest(a, b):
    if a >= b:
        return
    v = pick_rational_between(a, b)
    assert a < v < b
    # no rational with a smaller denominator lies strictly inside
    for d in range(1, v.denominator):
        n = math.floor(a * d) + 1
        assert not Fraction(n, d) < b


def test_format_value():
    assert format_value(sqrt(2)) == "root(x^2 - 2, 2) ≈ 1.41421"
    assert format_value(neg_sqrt(2), "y") == "root(y^2 - 2, 1) ≈ -1.41421"
    assert format_value(Fraction(-3, 4)) == "-3/4"


def test_refinement_keeps_root_inside():
    r = sqrt(5)
    r.refine_to(Fraction(1, 10 ** 30))
    assert r.lo ** 2 < 5 < r.hi ** 2
    assert r.hi - r.lo <= Fraction(1, 10 ** 30)


@given(st.lists(st.integers(-6, 6), min_size=2, max_size=6))
def test_isolation_agrees_with_sympy(coeffs):
    if not any(coeffs[1:]):
        return
    ours = isolate_roots(coeffs)
    ref = sympy.Poly(list(reversed(coeffs)), T).real_roots()
    ref = sorted(set(ref), key=lambda r: float(sympy.N(r, 30)))
    assert len(ours) == len(ref)
    for a, b in zip(ours, ref):
        assert abs(float(a) - float(sympy.N(b, 30))) < 1e-9
    for r in ours:
        if isinstance(r, RealAlg):
            assert up.sign_at(r.poly, r.lo) * up.sign_at(r.poly, r.hi) < 0
