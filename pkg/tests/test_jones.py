from fractions import Fraction

import pytest
from hypothesis import given, settings

from oracles import (
    LOOP,
    braid_diagrams,
    cabled_colored_jones,
    colored_unknot,
    state_sum_bracket,
)
from tailforge.algebra import LaurentPoly
from tailforge.bstate import DomainError, is_b_adequate
from tailforge.contraction import colored_network, contract
from tailforge.corpus import default_corpus
from tailforge.diagram import add_kink, braid_closure, parse_braid, unknot
from tailforge.jones import (
    colored_jones,
    kauffman_bracket,
    multicone_colored_jones,
    normalized_series,
    reduction_tail_check,
    shift_exponent,
    shifted_colored_jones,
    tail_extract,
)
from tailforge.tl import ResourceError

CORPUS = default_corpus()
BY = {e.name: e.diagram for e in CORPUS}
TREFOIL = BY["trefoil_left"]
HOPF = BY["hopf_neg"]
KNOTS = [e for e in CORPUS if e.diagram.n_components == 1]


def test_bracket_examples():
    assert kauffman_bracket(unknot()) == LOOP
    assert kauffman_bracket(add_kink(unknot(), 0, 1)) == -LaurentPoly.q(Fraction(3, 2)) * LOOP
    assert kauffman_bracket(HOPF) == state_sum_bracket(HOPF)


@pytest.mark.parametrize("entry", [e for e in CORPUS if e.diagram.n <= 10], ids=lambda e: e.name)
def test_bracket_matches_state_sum(entry):
    assert kauffman_bracket(entry.diagram) == state_sum_bracket(entry.diagram)


@settings(max_examples=40)
@given(braid_diagrams(max_strands=4, max_len=8))
def test_bracket_matches_state_sum_random(d):
    assert kauffman_bracket(d) == state_sum_bracket(d)


@pytest.mark.parametrize("N", range(0, 7))
def test_colored_unknot(N):
    assert colored_jones(unknot(), N).value == (colored_unknot(N) if N else LaurentPoly.const(1))


@pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e.name)
def test_color_one_is_bracket(entry):
    assert colored_jones(entry.diagram, 1).value == kauffman_bracket(entry.diagram)


@pytest.mark.parametrize("entry", [e for e in KNOTS if e.diagram.n <= 5], ids=lambda e: e.name)
@pytest.mark.parametrize("N", [2, 3])
def test_colored_matches_cabling_oracle(entry, N):
    assert colored_jones(entry.diagram, N).value == cabled_colored_jones(entry.diagram, N, kauffman_bracket)


def test_cabling_oracle_with_state_sum():
    # fully independent of the contraction engine for the 12-crossing 2-cable
    assert colored_jones(TREFOIL, 2).value == cabled_colored_jones(TREFOIL, 2, state_sum_bracket)


@pytest.mark.parametrize("d,N", [(TREFOIL, 2), (HOPF, 3), (BY["figure_eight"], 2)])
def test_multicone_examples(d, N):
    assert multicone_colored_jones(d, N).value == colored_jones(d, N).value


def test_projector_placement_is_irrelevant():
    for N in (2, 3):
        assert colored_jones(TREFOIL, N, projectors="component").value == colored_jones(TREFOIL, N).value


@pytest.mark.parametrize("d,N", [(TREFOIL, 2), (HOPF, 3), (BY["figure_eight"], 2), (BY["nb3_a"], 2)])
def test_exact_and_modular_backends_agree(d, N):
    net = colored_network(d, N)
    assert contract(net, backend="exact") == contract(colored_network(d, N), backend="modular")


@pytest.mark.parametrize("entry", [e for e in CORPUS if e.diagram.n <= 4], ids=lambda e: e.name)
@pytest.mark.parametrize("N", [1, 2, 3])
def test_positive_kink_framing_factor(entry, N):
    d = entry.diagram
    factor = LaurentPoly.q(Fraction(N * N, 2) + N) * (-1) ** N
    assert colored_jones(add_kink(d, 0, 1), N).value == factor * colored_jones(d, N).value


def test_shifted_unknot():
    for N in range(0, 6):
        want = LaurentPoly({2 * 2 * k: 1 for k in range(N + 1)}) * (-1) ** N
        assert shifted_colored_jones(unknot(), N) == want


def test_shifted_trefoil_in_q2_ring():
    for N in (1, 2, 3):
        assert shifted_colored_jones(TREFOIL, N).in_q2_ring()
    assert shift_exponent(TREFOIL, 2) == Fraction(3 * 4, 2) + 2 * 2


def test_cap_enforced():
    with pytest.raises(ResourceError):
        colored_jones(TREFOIL, 7)
    with pytest.raises(ValueError):
        colored_jones(TREFOIL, -1)


def test_tail_unknot():
    t = tail_extract(unknot(), 5)
    assert t.certified_degree == Fraction(5, 2)
    assert t.prefix() == {0: 1, 2: 1}
    assert t.certified and t.consistent


def test_tail_trefoil_grows():
    degs = [tail_extract(TREFOIL, N).certified_degree for N in range(1, 6)]
    assert degs == sorted(degs)
    assert tail_extract(TREFOIL, 4).certified_degree == Fraction(1, 2)


def test_tail_prefixes_extend():
    small, big = tail_extract(TREFOIL, 5), tail_extract(TREFOIL, 6)
    assert big.prefix(small.certified_degree) == small.prefix()


def test_tail_inadequate_flagged():
    bad = BY["unknot+kink+"] if not is_b_adequate(BY["unknot+kink+"]) else BY["unknot+kink-"]
    t = tail_extract(bad, 3)
    assert not t.certified and t.notes


def test_tail_n_min_widens_region():
    t = tail_extract(TREFOIL, 4, n_min=2)
    assert t.certified_degree == 1 and t.n_min_supplied


def test_normalized_series_sign():
    # g(trefoil) = 2, so no sign flip; the unknot has g = 1
    assert normalized_series(TREFOIL, 3) == {k // 2: c for k, c in shifted_colored_jones(TREFOIL, 3).terms.items()}
    assert normalized_series(unknot(), 3)[0] == 1


def test_reduction_check_trefoil():
    rep = reduction_tail_check(TREFOIL, 5)
    assert rep.agree and not rep.vacuous
    assert set(rep.tails) == {"original", "reduced", "doubled"}


def test_reduction_check_self():
    t1, t2 = tail_extract(HOPF, 4), tail_extract(HOPF, 4)
    assert t1 == t2


def test_reduction_check_rejects_inadequate():
    bad = BY["unknot+kink+"] if not is_b_adequate(BY["unknot+kink+"]) else BY["unknot+kink-"]
    with pytest.raises(DomainError):
        reduction_tail_check(bad, 3)


def test_parse_braid_trefoil_matches_corpus():
    assert braid_closure(parse_braid("s:2 -1 -1 -1")) == TREFOIL


def test_prime_supply_grows():
    from sympy import isprime

    from tailforge.coeffs import prime_list

    ps = prime_list(12)
    assert len(set(ps)) == 12 and list(ps) == sorted(ps, reverse=True)
    assert all(isprime(p) and p < 2**31 for p in ps)
