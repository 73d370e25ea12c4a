from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tailforge.algebra import (
    KhTable,
    LaurentPoly,
    RatFunc,
    TailSeries,
    brace_poly,
    decat_substitute,
    dumps,
    euler_char,
)

polys = st.dictionaries(st.integers(-12, 12), st.integers(-50, 50), max_size=6).map(LaurentPoly)
tables = st.dictionaries(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), st.integers(0, 4),
                         max_size=6).map(KhTable)


def test_laurent_examples():
    a = LaurentPoly({2: 1, -2: 1})
    assert (a + (-a)).is_zero()
    half = LaurentPoly.q(Fraction(1, 2))
    assert half * half == LaurentPoly.q(1)
    assert (-a) ** 2 == LaurentPoly({4: 1, 0: 2, -4: 1})


def test_zero_coefficients_dropped():
    p = LaurentPoly({0: 0, 2: 3})
    assert p.terms == {2: 3}
    assert (p - p).terms == {}


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * LaurentPoly.const(1) == a


def _convolve(a: LaurentPoly, b: LaurentPoly) -> dict:
    out = {}
    for i, x in a.terms.items():
        for j, y in b.terms.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


@given(polys, polys)
def test_mul_matches_convolution(a, b):
    assert (a * b).terms == _convolve(a, b)


@settings(max_examples=10_000, deadline=None)
@given(polys, polys)
def test_ratfunc_agrees_with_laurent_on_polynomials(a, b):
    ra, rb = RatFunc.from_poly(a), RatFunc.from_poly(b)
    assert (ra + rb).to_poly() == a + b
    assert (ra * rb).to_poly() == a * b
    assert (ra - rb).to_poly() == a - b


@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_ratfunc_division_roundtrip(a, b):
    r = RatFunc.from_poly(a) / RatFunc.from_poly(b)
    assert r * RatFunc.from_poly(b) == RatFunc.from_poly(a)


def _gauss(i: int, j: int) -> LaurentPoly:
    # Pascal recursion for the Gaussian binomial in x^2
    if j == 0 or j == i:
        return LaurentPoly.const(1)
    return _gauss(i - 1, j - 1) + LaurentPoly.q(2 * j) * _gauss(i - 1, j)


def test_brace_examples():
    assert brace_poly(5, 0) == LaurentPoly.const(1)
    assert brace_poly(1, 1) == LaurentPoly.const(1)
    assert brace_poly(3, 1) == LaurentPoly({0: 1, 4: 1, 8: 1})


@given(st.integers(0, 9).flatmap(lambda i: st.tuples(st.just(i), st.integers(0, i))))
def test_brace_matches_pascal_and_symmetry(ij):
    i, j = ij
    assert brace_poly(i, j) == _gauss(i, j)
    assert brace_poly(i, j) == brace_poly(i, i - j)


def test_brace_rejects_bad_args():
    with pytest.raises(ValueError):
        brace_poly(2, 3)


def test_euler_examples():
    assert euler_char(KhTable({(0, 0): 1})) == LaurentPoly.const(1)
    assert euler_char(KhTable({(0, 1): 1, (0, -1): 1})) == LaurentPoly({2: -1, -2: -1})
    assert euler_char(KhTable()).is_zero()


@given(tables, tables, st.integers(-4, 4), st.integers(-4, 4))
def test_euler_additive_and_shift_covariant(a, b, h2, j):
    assert euler_char(a + b) == euler_char(a) + euler_char(b)
    assert euler_char(a.shift(h2, j)) == euler_char(a) * decat_substitute(Fraction(h2, 2), j)


def test_decat_substitute():
    assert decat_substitute(1, 0) == LaurentPoly.q(1)
    assert decat_substitute(0, 1) == -LaurentPoly.q(1)
    assert decat_substitute(Fraction(1, 2), 2) == LaurentPoly.q(Fraction(5, 2))


def test_kh_table_rejects_negative():
    with pytest.raises(ValueError):
        KhTable({(0, 0): -1})


@given(tables)
def test_kh_table_json_roundtrip(t):
    assert KhTable.from_json(t.to_json()) == t


@given(polys)
def test_laurent_json_roundtrip(p):
    assert LaurentPoly.from_json(p.to_json()) == p


def test_tail_prefix_strict():
    t = TailSeries({0: 1, 2: 1, 4: 1}, Fraction(4))
    assert t.prefix() == {0: 1, 2: 1}
    assert t.prefix(Fraction(5, 2)) == {0: 1, 2: 1}


def test_dumps_deterministic():
    assert dumps({"b": 1, "a": [1, 2]}) == '{"a":[1,2],"b":1}'
