from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import LOOP, colored_unknot
from tailforge.algebra import LaurentPoly, RatFunc
from tailforge.tl import (
    ResourceError,
    TLMorphism,
    TLTangle,
    absorb_check,
    all_tangles,
    cap_tangle,
    caps_annihilate,
    close_trace,
    crossing_expand,
    cup_tangle,
    e_tangle,
    identity_tangle,
    jw_projector,
    partial_trace_right,
    tl_compose,
)

Q = LaurentPoly.q(1)
LOOP_R = RatFunc(LOOP)


def test_identity_composition():
    i = TLMorphism.identity(3)
    assert tl_compose(i, i) == i


def test_e_squared():
    e = TLMorphism.of(e_tangle(2, 0))
    assert tl_compose(e, e) == e.scale(LOOP_R)


def test_cap_cup_scalar():
    cup = TLMorphism.of(cup_tangle(2, 0))
    cap = TLMorphism.of(cap_tangle(2, 0))
    closed = tl_compose(cup, cap)
    assert (closed.a, closed.b) == (0, 0)
    assert closed.coeff(next(iter(closed.terms))) == LOOP_R


def test_p1_is_identity():
    assert jw_projector(1) == TLMorphism.identity(1)


def test_p2_closed_form():
    # p2 = id + (q + q^-1)^-1 e, the unique idempotent killing the cap
    want = TLMorphism(2, 2, {identity_tangle(2): 1,
                             e_tangle(2, 0): RatFunc(1) / RatFunc(Q + Q.q(-1))})
    assert jw_projector(2) == want
    assert tl_compose(TLMorphism.of(e_tangle(2, 0)), jw_projector(2)).is_zero()


@pytest.mark.parametrize("a", range(1, 7))
def test_projector_axioms(a):
    p = jw_projector(a)
    assert tl_compose(p, p) == p
    assert p.coeff(identity_tangle(a)) == RatFunc(1)
    assert caps_annihilate(a)
    assert close_trace(p) == RatFunc(colored_unknot(a))


@pytest.mark.parametrize("a,b", [(2, 1), (3, 2), (4, 2), (5, 3), (6, 1)])
def test_absorb(a, b):
    assert absorb_check(a, b)


def test_cap_exceeded():
    with pytest.raises(ResourceError):
        jw_projector(7)
    with pytest.raises(ValueError):
        absorb_check(2, 2)


def test_crossing_expand():
    plus, minus = crossing_expand(1), crossing_expand(-1)
    assert plus.coeff(identity_tangle(2)) == RatFunc(LaurentPoly.monomial(1))
    assert plus.coeff(e_tangle(2, 0)) == RatFunc(LaurentPoly.monomial(-1))
    assert tl_compose(plus, minus) == TLMorphism.identity(2)


def test_kink_closure():
    closed = partial_trace_right(crossing_expand(1))
    assert closed == TLMorphism.identity(1).scale(RatFunc(-LaurentPoly.q(Fraction(3, 2))))


def test_close_trace_examples():
    assert close_trace(TLMorphism.identity(1)) == LOOP_R
    assert close_trace(jw_projector(2)) == RatFunc(LaurentPoly({4: 1, 0: 1, -4: 1}))


def test_invalid_tangles():
    with pytest.raises(ValueError):
        TLTangle(2, 2, (2, 3, 0, 1)[:3])
    with pytest.raises(ValueError):
        TLTangle(4, 0, (2, 3, 0, 1))  # crossing arcs


@given(st.integers(1, 4).map(lambda k: 2 * k))
def test_width_deficit_positive_off_identity(a):
    for t in all_tangles(a, a):
        assert (t.width_deficit == 0) == t.is_identity()


@given(st.integers(2, 5), st.data())
def test_projector_kills_every_nonidentity_tangle(a, data):
    t = data.draw(st.sampled_from([t for t in all_tangles(a, a) if not t.is_identity()]))
    p = jw_projector(a)
    # any non-identity tangle factors through a cap, so p t p = 0
    assert tl_compose(tl_compose(p, TLMorphism.of(t)), p).is_zero()
