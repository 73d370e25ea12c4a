"""Independent reference computations used by the tests.

Nothing here calls the contraction, Temperley-Lieb or Khovanov code: every
value is obtained by brute force or from a closed formula.
"""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from tailforge.algebra import LaurentPoly
from tailforge.diagram import BraidWord, braid_closure

LOOP = LaurentPoly({2: -1, -2: -1})  # -(q + q^-1), doubled exponents


def _loops(d, state) -> int:
    parent = {e: e for e in d.edges()}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, b, c, e), s in zip(d.crossings, state):
        pairs = ((a, b), (c, e)) if s == 0 else ((a, e), (b, c))
        for u, v in pairs:
            parent[find(u)] = find(v)
    return len({find(e) for e in d.edges()}) + d.unknots


def state_sum_bracket(d) -> LaurentPoly:
    """Kauffman bracket over all 2^n states: A weight q^(1/2), B weight q^(-1/2)."""
    out = LaurentPoly()
    for state in itertools.product((0, 1), repeat=d.n):
        nb = sum(state)
        out = out + LOOP ** _loops(d, state) * LaurentPoly.monomial(d.n - 2 * nb)
    return out


def b_circles(d) -> int:
    """All-B state circle count."""
    return _loops(d, (1,) * d.n)


def quantum(n: int) -> LaurentPoly:
    """[n] = q^(n-1) + q^(n-3) + ... + q^(1-n), doubled exponents."""
    return LaurentPoly({2 * (n - 1 - 2 * i): 1 for i in range(n)})


def colored_unknot(N: int) -> LaurentPoly:
    """J_N of the 0-crossing unknot: (-1)^N [N+1]."""
    return quantum(N + 1) * (-1) ** N


@st.composite
def braid_words(draw, max_strands: int = 4, max_len: int = 6, negative: bool = False):
    s = draw(st.integers(2, max_strands))
    gens = [-g for g in range(1, s)] if negative else [g for g in range(1, s)] + [-g for g in range(1, s)]
    letters = draw(st.lists(st.sampled_from(gens), min_size=0, max_size=max_len))
    return BraidWord(s, tuple(letters))


def braid_diagrams(max_strands: int = 4, max_len: int = 6, negative: bool = False):
    return braid_words(max_strands, max_len, negative).map(braid_closure)


def chebyshev(N: int) -> dict[int, int]:
    """Coefficients of S_N(z) = z S_{N-1} - S_{N-2}, as {power of z: coeff}."""
    a, b = {0: 1}, {1: 1}
    if N == 0:
        return a
    for _ in range(N - 1):
        nxt = {k + 1: c for k, c in b.items()}
        for k, c in a.items():
            nxt[k] = nxt.get(k, 0) - c
        a, b = b, {k: c for k, c in nxt.items() if c}
    return b


def cabled_colored_jones(knot, N: int, bracket) -> LaurentPoly:
    """J_N of a knot from brackets of its blackboard cables, no projectors involved."""
    from tailforge.diagram import cable

    out = LaurentPoly()
    for k, c in chebyshev(N).items():
        out = out + (LaurentPoly.const(1) if k == 0 else bracket(cable(knot, k))) * c
    return out
