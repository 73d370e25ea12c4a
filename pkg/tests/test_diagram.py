from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oracles import braid_diagrams, braid_words, state_sum_bracket
from tailforge.algebra import LaurentPoly
from tailforge.corpus import default_corpus
from tailforge.diagram import (
    BraidWord,
    DiagramError,
    ParseError,
    add_kink,
    braid_closure,
    cable,
    mirror,
    parse_braid,
    parse_pd,
    stats,
    unknot,
)
from tailforge.jones import kauffman_bracket

TREFOIL_KT = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]"


def test_parse_unknot_token():
    d = parse_pd("U")
    assert (d.n, d.n_components) == (0, 1)


def test_parse_trefoil():
    d = parse_pd(TREFOIL_KT)
    assert (d.n, d.n_components, abs(d.writhe)) == (3, 1, 3)


def test_nonplanar_code_rejected():
    # labels trace consistently but the slot rotation only embeds on a torus
    with pytest.raises(ParseError, match="planar"):
        parse_pd("X[1,4,2,3] X[3,6,4,5] X[5,2,6,1]")


def test_single_kink():
    d = parse_pd("X[1,1,2,2]")
    assert d.n == 1 and d.n_components == 1 and abs(d.writhe) == 1


@pytest.mark.parametrize("text", ["X[1,2,3]", "X[1,2,3,4]", "hello", "", "X[1,2,1,2] X[3,3,4,4]"])
def test_parse_errors(text):
    with pytest.raises(DiagramError):
        parse_pd(text)


def test_braid_examples():
    t = braid_closure(parse_braid("s:2 -1 -1 -1"))
    assert (t.n, t.n_components, t.writhe) == (3, 1, -3)
    assert braid_closure(parse_braid("s:1")).n_components == 1
    u = braid_closure(parse_braid("s:2 1 -1"))
    assert (u.n, u.writhe, u.n_components) == (2, 0, 2)
    assert kauffman_bracket(u) == LaurentPoly({2: -1, -2: -1}) ** 2


@pytest.mark.parametrize("text", ["s:0", "s:2 2", "s:2 0", "2 1", "s:3 x"])
def test_braid_errors(text):
    with pytest.raises(DiagramError):
        parse_braid(text)


def test_cable_examples():
    t = parse_pd(TREFOIL_KT)
    assert cable(unknot(), 3).unknots == 3
    assert cable(t, 2).n == 12
    assert cable(t, 1) == t
    assert cable(cable(t, 2), 2).n == cable(t, 4).n
    assert stats(cable(t, 2)).crossing_weight == 12


def test_stats():
    assert stats(parse_pd(TREFOIL_KT)).n == 3
    s = stats(unknot())
    assert (s.n, s.writhe) == (0, 0)


@pytest.mark.parametrize("entry", default_corpus(), ids=lambda e: e.name)
def test_roundtrip_and_kink_relation(entry):
    d = entry.diagram
    assert parse_pd(d.render_pd()) == d
    k = add_kink(d, 0, 1)
    assert k.writhe == d.writhe + 1
    assert add_kink(k, 0, -1).writhe == d.writhe
    assert kauffman_bracket(k) == -LaurentPoly.q(Fraction(3, 2)) * kauffman_bracket(d)


@given(braid_words(), st.data())
def test_conjugation_keeps_components(w, data):
    g = data.draw(st.sampled_from([i for i in range(1, w.strands)] + [-i for i in range(1, w.strands)]))
    conj = BraidWord(w.strands, (g, *w.letters, -g))
    assert braid_closure(conj).n_components == braid_closure(w).n_components


@given(braid_diagrams(max_len=5))
def test_mirror_inverts_bracket(d):
    assert kauffman_bracket(mirror(d)) == kauffman_bracket(d).mirror()
    assert state_sum_bracket(mirror(d)) == state_sum_bracket(d).mirror()
