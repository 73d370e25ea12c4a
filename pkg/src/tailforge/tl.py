"""Temperley-Lieb tangles and morphisms with circle value ``-(q+q^-1)``.

A tangle from ``a`` bottom points to ``b`` top points is a perfect
non-crossing matching on ``a + b`` points; bottom points are numbered
``0..a-1`` and top points ``a..a+b-1``, both left to right.  Composition
``tl_compose(f, g)`` stacks ``g`` on top of ``f``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import sympy

from .algebra import CIRCLE, LaurentPoly, RatFunc, _laurent_divide, quantum_int

DEFAULT_CAP = 6


class ResourceError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class TLTangle:
    a: int
    b: int
    match: tuple[int, ...]

    def __post_init__(self):
        m = self.match
        if len(m) != self.a + self.b:
            raise ValueError("matching length must be a+b")
        for i, j in enumerate(m):
            if m[j] != i or i == j:
                raise ValueError("not a perfect matching")
        # non-crossing on the boundary circle: bottom left-to-right, then top right-to-left
        cyc = [k if k < self.a else 2 * self.a + self.b - 1 - k for k in range(len(m))]
        arcs = [tuple(sorted((cyc[i], cyc[j]))) for i, j in enumerate(m) if i < j]
        for x1, y1 in arcs:
            for x2, y2 in arcs:
                if x1 < x2 < y1 < y2:
                    raise ValueError("matching is not planar")

    @property
    def width(self) -> int:
        """Number of through-strands."""
        return sum(1 for i in range(self.a) if self.match[i] >= self.a)

    @property
    def width_deficit(self) -> int:
        return (self.a - self.width) // 2

    def is_identity(self) -> bool:
        return self.a == self.b and all(self.match[i] == self.a + i for i in range(self.a))

    def arcs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in enumerate(self.match) if i < j]

    def render(self) -> str:
        def name(p):
            return f"b{p}" if p < self.a else f"t{p - self.a}"

        return " ".join(f"{name(i)}-{name(j)}" for i, j in self.arcs())


def _tangle_unchecked(a: int, b: int, match) -> TLTangle:
    t = object.__new__(TLTangle)
    object.__setattr__(t, "a", a)
    object.__setattr__(t, "b", b)
    object.__setattr__(t, "match", tuple(match))
    return t


def identity_tangle(a: int) -> TLTangle:
    return _tangle_unchecked(a, a, [a + i for i in range(a)] + list(range(a)))


def e_tangle(a: int, i: int) -> TLTangle:
    """Cup-cap generator ``e_i`` on positions ``i, i+1`` (0-based)."""
    m = [a + k for k in range(a)] + list(range(a))
    m[i], m[i + 1] = i + 1, i
    m[a + i], m[a + i + 1] = a + i + 1, a + i
    return _tangle_unchecked(a, a, m)


def cap_tangle(a: int, i: int) -> TLTangle:
    """``(a, a-2)`` tangle closing bottom points ``i, i+1`` and passing the rest."""
    b = a - 2
    m = [0] * (a + b)
    tops = [k for k in range(a) if k not in (i, i + 1)]
    m[i], m[i + 1] = i + 1, i
    for t, k in enumerate(tops):
        m[k], m[a + t] = a + t, k
    return _tangle_unchecked(a, b, m)


def cup_tangle(a: int, i: int) -> TLTangle:
    """``(a-2, a)`` tangle opening top points ``i, i+1``."""
    c = cap_tangle(a, i)
    return flip(c)


def flip(t: TLTangle) -> TLTangle:
    """Reflect top and bottom."""
    def mp(p):
        return p + t.b if p < t.a else p - t.a

    m = [0] * (t.a + t.b)
    for i, j in enumerate(t.match):
        m[mp(i)] = mp(j)
    return _tangle_unchecked(t.b, t.a, m)


def compose_tangles(f: TLTangle, g: TLTangle) -> tuple[TLTangle, int]:
    """Stack ``g`` on ``f``; returns the tangle and the number of closed loops."""
    if f.b != g.a:
        raise ValueError(f"arity mismatch: {f.b} vs {g.a}")
    a, b, c = f.a, f.b, g.b
    # outer points: f bottom -> 0..a-1, g top -> a..a+c-1
    out = [-1] * (a + c)
    seen_mid = [False] * b

    def walk(start_outer: int):
        # start from an outer point, alternate f and g through middle points
        if start_outer < a:
            side, p = "f", start_outer
        else:
            side, p = "g", b + (start_outer - a)
        while True:
            if side == "f":
                q = f.match[p]
                if q < a:
                    return q
                mid = q - a
                seen_mid[mid] = True
                side, p = "g", mid
            else:
                q = g.match[p]
                if q >= b:
                    return a + (q - b)
                seen_mid[q] = True
                side, p = "f", a + q

    for s in range(a + c):
        if out[s] == -1:
            t = walk(s)
            out[s], out[t] = t, s
    loops = 0
    for m0 in range(b):
        if seen_mid[m0]:
            continue
        loops += 1
        p = m0
        while not seen_mid[p]:
            seen_mid[p] = True
            q = g.match[p]
            seen_mid[q] = True
            p = f.match[a + q] - a
    return _tangle_unchecked(a, c, out), loops


def tensor_tangles(f: TLTangle, g: TLTangle) -> TLTangle:
    """Place ``g`` to the right of ``f``."""
    a, b = f.a + g.a, f.b + g.b

    def mf(p):
        return p if p < f.a else a + (p - f.a)

    def mg(p):
        return f.a + p if p < g.a else a + f.b + (p - g.a)

    m = [0] * (a + b)
    for i, j in enumerate(f.match):
        m[mf(i)] = mf(j)
    for i, j in enumerate(g.match):
        m[mg(i)] = mg(j)
    return _tangle_unchecked(a, b, m)


def all_tangles(a: int, b: int) -> list[TLTangle]:
    """Every TL basis tangle ``(a, b)`` (Catalan many), in canonical order."""
    n = a + b
    if n % 2:
        return []
    # enumerate non-crossing matchings in cyclic order, then map back
    cyc_to_pt = list(range(a)) + [a + b - 1 - t for t in range(b)]

    def gen(points):
        if not points:
            yield []
            return
        p = points[0]
        for k in range(1, len(points), 2):
            for left in gen(points[1:k]):
                for right in gen(points[k + 1:]):
                    yield [(p, points[k])] + left + right

    out = []
    for pairs in gen(list(range(n))):
        m = [0] * n
        for x, y in pairs:
            px, py = cyc_to_pt[x], cyc_to_pt[y]
            m[px], m[py] = py, px
        out.append(_tangle_unchecked(a, b, m))
    return sorted(out)


@lru_cache(maxsize=None)
def _den_factors(den_terms: tuple[tuple[int, int], ...]) -> tuple[tuple[LaurentPoly, int], ...]:
    """Irreducible factors of a denominator polynomial in ``q^(1/2)``."""
    x = sympy.Symbol("x")
    expr = sum(c * x**k for k, c in den_terms)
    _, facs = sympy.factor_list(expr)
    out = []
    for f, mult in facs:
        coeffs = sympy.Poly(f, x).all_coeffs()[::-1]
        p = LaurentPoly({k: int(c) for k, c in enumerate(coeffs) if c})
        if p.max_exp() > 0:
            out.append((p, mult))
    return tuple(out)


def _divides(p: LaurentPoly, f: LaurentPoly) -> LaurentPoly | None:
    if p.is_zero():
        return p
    quo, rem = _laurent_divide(p, f)
    return None if not rem.is_zero() else quo


class TLMorphism:
    """Formal combination of ``(a, b)`` tangles with rational coefficients.

    Stored as Laurent-polynomial numerators over one shared denominator, so
    composition never needs a gcd; ``terms`` gives the reduced RatFunc view.
    """

    __slots__ = ("a", "b", "num", "den", "_terms")

    def __init__(self, a: int, b: int, terms: Mapping[TLTangle, object] | None = None):
        self.a, self.b = a, b
        items = {}
        for t, c in (terms or {}).items():
            if (t.a, t.b) != (a, b):
                raise ValueError("tangle arity differs from morphism arity")
            items[t] = c if isinstance(c, RatFunc) else RatFunc(c)
        den = LaurentPoly.const(1)
        for c in items.values():
            den = _lcm_guess(den, c.den)
        num = {}
        for t, c in items.items():
            if not c.is_zero():
                num[t] = c.num * _laurent_divide(den, c.den)[0]
        self.num: dict[TLTangle, LaurentPoly] = num
        self.den = den
        self._terms = None

    @classmethod
    def _make(cls, a: int, b: int, num: dict, den: LaurentPoly) -> "TLMorphism":
        m = object.__new__(cls)
        m.a, m.b = a, b
        m.num = {t: v for t, v in num.items() if not v.is_zero()}
        m.den = den
        m._terms = None
        return m

    @classmethod
    def of(cls, t: TLTangle, coeff=1) -> "TLMorphism":
        return cls(t.a, t.b, {t: coeff})

    @classmethod
    def identity(cls, a: int) -> "TLMorphism":
        return cls.of(identity_tangle(a))

    @property
    def terms(self) -> dict[TLTangle, RatFunc]:
        if self._terms is None:
            self._terms = {t: RatFunc(v, self.den) for t, v in self.num.items()}
        return self._terms

    def reduced(self) -> "TLMorphism":
        """Cancel denominator factors shared by every numerator."""
        num, den = dict(self.num), self.den
        s = den.min_exp()
        den = den.shift(-s)
        num = {t: v.shift(-s) for t, v in num.items()}
        for f, mult in _den_factors(tuple(sorted(den.terms.items()))):
            for _ in range(mult):
                quos = {}
                for t, v in num.items():
                    qv = _divides(v, f)
                    if qv is None:
                        break
                    quos[t] = qv
                else:
                    num = quos
                    den = _laurent_divide(den, f)[0]
                    continue
                break
        if den.coeff(den.max_exp()) < 0:
            den = -den
            num = {t: -v for t, v in num.items()}
        return TLMorphism._make(self.a, self.b, num, den)

    def is_zero(self) -> bool:
        return not self.num

    def coeff(self, t: TLTangle) -> RatFunc:
        v = self.num.get(t)
        return RatFunc(0) if v is None else RatFunc(v, self.den)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TLMorphism) or (self.a, self.b) != (other.a, other.b):
            return False
        if self.num.keys() != other.num.keys():
            return False
        return all(v * other.den == other.num[t] * self.den for t, v in self.num.items())

    __hash__ = None  # type: ignore[assignment]

    def _aligned(self, other: "TLMorphism"):
        if (self.a, self.b) != (other.a, other.b):
            raise ValueError("arity mismatch")
        den = _lcm_guess(self.den, other.den)
        k1 = _laurent_divide(den, self.den)[0]
        k2 = _laurent_divide(den, other.den)[0]
        return den, k1, k2

    def __add__(self, other: "TLMorphism") -> "TLMorphism":
        den, k1, k2 = self._aligned(other)
        out = {t: v * k1 for t, v in self.num.items()}
        for t, v in other.num.items():
            out[t] = out[t] + v * k2 if t in out else v * k2
        return TLMorphism._make(self.a, self.b, out, den)

    def __neg__(self) -> "TLMorphism":
        return TLMorphism._make(self.a, self.b, {t: -v for t, v in self.num.items()}, self.den)

    def __sub__(self, other: "TLMorphism") -> "TLMorphism":
        return self + (-other)

    def scale(self, c) -> "TLMorphism":
        c = c if isinstance(c, RatFunc) else RatFunc(c)
        return TLMorphism._make(self.a, self.b, {t: v * c.num for t, v in self.num.items()}, self.den * c.den)

    def then(self, g: "TLMorphism") -> "TLMorphism":
        return tl_compose(self, g)

    def tensor(self, g: "TLMorphism") -> "TLMorphism":
        out: dict[TLTangle, LaurentPoly] = {}
        for t1, c1 in self.num.items():
            for t2, c2 in g.num.items():
                t = tensor_tangles(t1, t2)
                v = c1 * c2
                out[t] = out[t] + v if t in out else v
        return TLMorphism._make(self.a + g.a, self.b + g.b, out, self.den * g.den)

    def render(self) -> str:
        return "\n".join(f"{c!r} * [{t.render()}]" for t, c in sorted(self.terms.items()))

    def __repr__(self) -> str:
        return f"TLMorphism({self.a},{self.b}; {len(self.num)} terms)"


def _lcm_guess(d1: LaurentPoly, d2: LaurentPoly) -> LaurentPoly:
    """A common multiple: the larger one if it is divisible by the other, else the product."""
    if d1 == d2:
        return d1
    big, small = (d1, d2) if d1.max_exp() - d1.min_exp() >= d2.max_exp() - d2.min_exp() else (d2, d1)
    if _divides(big, small) is not None:
        return big
    return d1 * d2


@lru_cache(maxsize=None)
def circle_pow(k: int) -> LaurentPoly:
    return CIRCLE ** k


def tl_compose(f: TLMorphism, g: TLMorphism) -> TLMorphism:
    """``g`` stacked on ``f``; each closed circle contributes ``-(q+q^-1)``."""
    if f.b != g.a:
        raise ValueError(f"arity mismatch: {f.b} vs {g.a}")
    out: dict[TLTangle, LaurentPoly] = {}
    for t1, c1 in f.num.items():
        for t2, c2 in g.num.items():
            t, loops = compose_tangles(t1, t2)
            v = c1 * c2
            if loops:
                v = v * circle_pow(loops)
            out[t] = out[t] + v if t in out else v
    return TLMorphism._make(f.a, g.b, out, f.den * g.den)


def _delta(n: int) -> RatFunc:
    """Closed value of the n-strand projector: (-1)^n [n+1]."""
    return RatFunc(quantum_int(n + 1) * (-1) ** n)


_JW: dict[int, TLMorphism] = {}
_JW_LOCK = threading.Lock()


def jw_projector(a: int, cap: int = DEFAULT_CAP) -> TLMorphism:
    """Jones-Wenzl idempotent on ``a`` strands via Wenzl's recursion (memoized)."""
    if a < 1:
        raise ValueError("projector needs a >= 1")
    if a > cap:
        raise ResourceError(f"projector size {a} exceeds cap {cap}")
    with _JW_LOCK:
        if a not in _JW:
            start = max([k for k in _JW if k <= a], default=1)
            p = _JW.get(start, TLMorphism.identity(1))
            for n in range(start, a):
                pn1 = p.tensor(TLMorphism.identity(1))
                e = TLMorphism.of(e_tangle(n + 1, n - 1))
                corr = tl_compose(tl_compose(pn1, e), pn1)
                p = (pn1 - corr.scale(_delta(n - 1) / _delta(n))).reduced()
                _JW[n + 1] = p
            _JW.setdefault(1, TLMorphism.identity(1))
        return _JW[a]


def crossing_expand(sign: int) -> TLMorphism:
    """Upward braid generator on two strands as a TL combination.

    Positive: ``q^{1/2} id + q^{-1/2} e``; negative: ``q^{-1/2} id + q^{1/2} e``.
    """
    half, inv = LaurentPoly.monomial(1), LaurentPoly.monomial(-1)
    ida, eb = (half, inv) if sign > 0 else (inv, half)
    return TLMorphism(2, 2, {identity_tangle(2): ida, e_tangle(2, 0): eb})


def closure_loops(t: TLTangle) -> int:
    """Circles formed by the Markov closure of an ``(a, a)`` tangle."""
    a = t.a
    seen = [False] * (2 * a)
    loops = 0
    for s in range(2 * a):
        if seen[s]:
            continue
        loops += 1
        p = s
        while not seen[p]:
            seen[p] = True
            q = t.match[p]
            seen[q] = True
            p = q + a if q < a else q - a
    return loops


def close_trace(f: TLMorphism) -> RatFunc:
    """Markov closure of an ``(a, a)`` morphism."""
    if f.a != f.b:
        raise ValueError("trace needs an (a, a) morphism")
    total = LaurentPoly()
    for t, c in f.num.items():
        total = total + c * circle_pow(closure_loops(t))
    return RatFunc(total, f.den)


def partial_trace_right(f: TLMorphism) -> TLMorphism:
    """Close the rightmost strand of an ``(a, a)`` morphism around the right side."""
    a = f.a
    n = 2 * a
    bot, top = a - 1, 2 * a - 1
    out: dict[TLTangle, LaurentPoly] = {}
    for t, c in f.num.items():
        m = t.match
        loops = 1 if m[bot] == top else 0
        keep = [p for p in range(n) if p not in (bot, top)]
        idx = {p: (p if p < bot else p - 1) for p in keep}
        mm = [0] * (n - 2)
        for p in keep:
            q = m[p]
            if q == bot:
                q = m[top]
            elif q == top:
                q = m[bot]
            mm[idx[p]] = idx[q]
        tt = _tangle_unchecked(a - 1, a - 1, mm)
        v = c * circle_pow(loops)
        out[tt] = out[tt] + v if tt in out else v
    return TLMorphism._make(a - 1, a - 1, out, f.den)


def absorb_check(a: int, b: int, cap: int = DEFAULT_CAP) -> bool:
    """``p_a`` absorbs ``p_b (x) id`` on both sides."""
    if not 1 <= b < a:
        raise ValueError("need 1 <= b < a")
    pa = jw_projector(a, cap)
    pb = jw_projector(b, cap).tensor(TLMorphism.identity(a - b))
    return tl_compose(pb, pa) == pa and tl_compose(pa, pb) == pa


def caps_annihilate(a: int, cap: int = DEFAULT_CAP) -> bool:
    p = jw_projector(a, cap)
    for i in range(a - 1):
        if not tl_compose(p, TLMorphism.of(cap_tangle(a, i))).is_zero():
            return False
        if not tl_compose(TLMorphism.of(cup_tangle(a, i)), p).is_zero():
            return False
    return True


def quantum_dimension(n: int) -> RatFunc:
    """(-1)^n (q^{n+1} - q^{-n-1}) / (q - q^{-1})."""
    num = LaurentPoly.q(n + 1) - LaurentPoly.q(-n - 1)
    den = LaurentPoly.q(1) - LaurentPoly.q(-1)
    return RatFunc(num * (-1) ** n, den)
