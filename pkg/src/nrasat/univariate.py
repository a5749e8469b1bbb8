"""Dense univariate helpers on coefficient lists (lowest degree first).

Integer lists are used for root isolation; Fraction lists for gcd/division.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd as igcd
from typing import List, Sequence, Tuple


def trim(c: Sequence) -> list:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def degree(c: Sequence) -> int:
    return len(c) - 1


def to_primitive_ints(c: Sequence) -> tuple:
    """Primitive integer associate with positive leading coefficient."""
    c = trim(c)
    if not c:
        return ()
    fr = [Fraction(x) for x in c]
    den = reduce(lambda a, b: a * b // igcd(a, b), (x.denominator for x in fr))
    ints = [int(x * den) for x in fr]
    g = reduce(igcd, ints)
    if ints[-1] < 0:
        g = -g
    return tuple(x // g for x in ints)


def evaluate(c: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * x + a
    return acc


def sign_at(c: Sequence, x: Fraction) -> int:
    v = evaluate(c, x)
    return (v > 0) - (v < 0)


def derivative(c: Sequence) -> list:
    return [i * c[i] for i in range(1, len(c))]


def divmod_poly(a: Sequence, b: Sequence) -> Tuple[list, list]:
    a = [Fraction(x) for x in trim(a)]
    b = [Fraction(x) for x in trim(b)]
    if not b:
        raise ZeroDivisionError
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        f = a[-1] / lb
        q[k] = f
        for i, y in enumerate(b):
            a[i + k] -= f * y
        a = trim(a)
    return q, a


def rem(a: Sequence, b: Sequence) -> list:
    return divmod_poly(a, b)[1]


def gcd(a: Sequence, b: Sequence) -> list:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, rem(a, b)
    if not a:
        return []
    lc = Fraction(a[-1])
    return [Fraction(x) / lc for x in a]


def square_free(c: Sequence) -> list:
    g = gcd(c, derivative(c))
    if len(g) <= 1:
        return list(c)
    return divmod_poly(c, g)[0]


# ---------------------------------------------------------------------------
# Descartes / VCA isolation


def taylor_shift1(c: Sequence[int]) -> list:
    """Coefficients of p(x + 1)."""
    a = list(c)
    n = len(a)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            a[j] += a[j + 1]
    return a


def sign_variations(c: Sequence) -> int:
    v = 0
    last = 0
    for x in c:
        if x:
            if last and (x > 0) != (last > 0):
                v += 1
            last = x
    return v


def descartes_01(c: Sequence[int]) -> int:
    """Descartes bound on the number of roots of c in (0, 1)."""
    return sign_variations(taylor_shift1(list(reversed(c))))


def root_bound(c: Sequence) -> Fraction:
    """Power of two strictly above the absolute value of every real root (Cauchy)."""
    lc = abs(Fraction(c[-1]))
    m = max(abs(Fraction(x)) for x in c[:-1]) if len(c) > 1 else 0
    b = 1 + m / lc
    p = 1
    while p <= b:
        p *= 2
    return Fraction(p)


def _isolate_positive(c: List[int], bound: Fraction) -> list:
    """Roots in (0, bound) of a square-free int poly with c(0) != 0.

    Returns a list of items ``(lo, hi)`` (open isolating interval) or
    ``(r, r)`` for an exactly hit rational root.
    """
    n = len(c) - 1
    # q(x) = c(bound * x), roots in (0, 1)
    num, den = bound.numerator, bound.denominator
    q = [c[i] * num ** i * den ** (n - i) for i in range(n + 1)]
    out = []
    stack = [(q, Fraction(0), bound)]
    while stack:
        q, lo, hi = stack.pop()
        v = descartes_01(q)
        if v == 0:
            continue
        if v == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        d = len(q) - 1
        left = [q[i] * 2 ** (d - i) for i in range(d + 1)]
        right = taylor_shift1(left)
        if right[0] == 0:
            # exact root at the midpoint; deflate by x
            out.append((mid, mid))
            right = right[1:]
            left_dropped = True
        else:
            left_dropped = False
        if left_dropped:
            # left(x) = 2^d q(x/2) has the root at x=1: divide by (x - 1)
            left = _deflate_at_one(left)
        stack.append((right, mid, hi))
        stack.append((left, lo, mid))
    return out


def _deflate_at_one(c: List[int]) -> List[int]:
    # synthetic division by (x - 1), exact
    n = len(c) - 1
    q = [0] * n
    acc = 0
    for i in range(n, 0, -1):
        acc = acc + c[i]
        q[i - 1] = acc
    return q


def isolate(c: Sequence) -> list:
    """Isolate the real roots of a nonzero square-free polynomial.

    Returns sorted items ``(lo, hi)`` with lo < hi (exactly one root inside,
    endpoints not roots) or ``(r, r)`` for exact rational roots.
    """
    ints = list(to_primitive_ints(c))
    if not ints:
        raise ValueError("zero polynomial")
    out = []
    if ints[0] == 0:
        out.append((Fraction(0), Fraction(0)))
        k = 0
        while ints[k] == 0:
            k += 1
        ints = ints[k:]
    if len(ints) <= 1:
        return out
    b = root_bound(ints)
    pos = _isolate_positive(ints, b)
    neg_c = [x if i % 2 == 0 else -x for i, x in enumerate(ints)]
    neg = _isolate_positive(neg_c, b)
    res = [(-hi, -lo) for lo, hi in neg] + out + pos
    res.sort(key=lambda t: t[0])
    return res


# ---------------------------------------------------------------------------
# Sturm sequences (exact root counting, used as a cross-check and for equality)


@lru_cache(maxsize=4096)
def sturm_sequence(c: tuple) -> tuple:
    seq = [[Fraction(x) for x in c], [Fraction(x) for x in derivative(c)]]
    while True:
        r = rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-x for x in r])
    return tuple(tuple(s) for s in seq)


def _sturm_var(seq, x) -> int:
    return sign_variations([evaluate(s, x) for s in seq])


def count_roots(c: Sequence, lo: Fraction, hi: Fraction, closed: bool = False) -> int:
    """Number of distinct real roots in (lo, hi) (or [lo, hi] if closed)."""
    c = tuple(to_primitive_ints(c))
    if len(c) <= 1:
        return 0
    if lo > hi:
        return 0
    n = 0
    if closed:
        if evaluate(c, lo) == 0:
            n += 1
        if hi != lo and evaluate(c, hi) == 0:
            n += 1
    if lo == hi:
        return n
    sf = tuple(to_primitive_ints(square_free(c)))
    seq = sturm_sequence(sf)
    # variations are counted on (a, b]; correct for a root at hi
    n += _sturm_var(seq, lo) - _sturm_var(seq, hi)
    if evaluate(sf, hi) == 0:
        n -= 1
    return n


def interval_eval(c: Sequence, lo: Fraction, hi: Fraction) -> Tuple[Fraction, Fraction]:
    """Enclosure of {c(x) : lo <= x <= hi} by interval Horner."""
    a = b = Fraction(0)
    for k in reversed(c):
        cands = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(cands) + k, max(cands) + k
    return a, b
