import pytest
from hypothesis import given

from oracles import b_circles, braid_diagrams
from tailforge.bstate import (
    DomainError,
    adequacy_report,
    b_reduce,
    b_state,
    framing_relation_check,
    is_b_adequate,
    reduce_graph,
    same_graph,
)
from tailforge.corpus import default_corpus
from tailforge.diagram import add_kink, braid_closure, double_crossing, parse_braid, unknot

TREFOIL = braid_closure(parse_braid("s:2 -1 -1 -1"))


def test_unknot_state():
    g = b_state(unknot())
    assert (g.g, g.struts) == (1, ())
    assert adequacy_report(g) == (True, 0)


def test_negative_trefoil_state():
    g = b_state(TREFOIL)
    assert g.g == 2 and len(g.struts) == 3
    assert all(u != v for u, v in g.struts)
    assert adequacy_report(g) == (True, 0)


def test_kink_chirality():
    plus, minus = add_kink(unknot(), 0, 1), add_kink(unknot(), 0, -1)
    assert {is_b_adequate(plus), is_b_adequate(minus)} == {True, False}
    bad = plus if not is_b_adequate(plus) else minus
    assert adequacy_report(b_state(bad)) == (False, 1)


def test_reduce_trefoil_to_single_circle():
    r, log = b_reduce(TREFOIL)
    g = b_state(r)
    assert (g.g, len(g.struts)) == (1, 0)
    assert log.steps


def test_reduce_fixed_point():
    r, _ = b_reduce(TREFOIL)
    again, log = b_reduce(r)
    assert again == r and not log.steps


def test_reduce_strut_doubled_trefoil():
    doubled = double_crossing(TREFOIL, 0)
    a, b = b_state(b_reduce(doubled)[0]), b_state(b_reduce(TREFOIL)[0])
    assert same_graph(a.to_networkx(), b.to_networkx())


def test_reduce_rejects_inadequate():
    bad = add_kink(unknot(), 0, 1)
    if is_b_adequate(bad):
        bad = add_kink(unknot(), 0, -1)
    with pytest.raises(DomainError):
        b_reduce(bad)


def test_framing_relation():
    k = add_kink(TREFOIL, 0, -1)
    assert is_b_adequate(k)
    fc = framing_relation_check(TREFOIL, k)
    assert (fc.dn, fc.dg, fc.dphi, fc.holds) == (1, 1, -1, True)
    assert framing_relation_check(TREFOIL, TREFOIL).holds
    assert not framing_relation_check(unknot(), TREFOIL).holds


@pytest.mark.parametrize("entry", default_corpus(), ids=lambda e: e.name)
def test_corpus_struts(entry):
    d = entry.diagram
    g = b_state(d)
    assert len(g.struts) == d.n
    assert sum(g.degree()) == 2 * d.n
    assert g.g == b_circles(d)
    if is_b_adequate(d):
        r = b_reduce(d)[0]
        assert b_reduce(r)[0] == r
        # diagram-side reduction matches the graph-side one
        assert same_graph(reduce_graph(b_state(r)), reduce_graph(g))


@given(braid_diagrams(max_strands=4, max_len=10, negative=True))
def test_negative_braids_adequate(d):
    assert is_b_adequate(d)
