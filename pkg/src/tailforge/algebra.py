"""Exact Laurent polynomials, rational functions and bigraded tables.

Exponents of ``q`` are stored doubled so that half-integer powers such as
``q^{1/2}`` are plain integer keys.  Coefficients are Python integers and
never overflow.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping


class LaurentPoly:
    """Integer Laurent polynomial in ``q`` with half-integer exponents.

    ``terms`` maps a doubled exponent ``k`` (meaning ``q^(k/2)``) to a nonzero
    integer coefficient.  Instances are treated as immutable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean: dict[int, int] = {}
        if terms:
            for k, c in terms.items():
                if c:
                    clean[int(k)] = int(c)
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> "LaurentPoly":
        # caller guarantees no zero coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, doubled_exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({doubled_exp: coeff})

    @classmethod
    def q(cls, exp: int | Fraction = 1, coeff: int = 1) -> "LaurentPoly":
        """The monomial ``coeff * q^exp``; ``exp`` may be a half-integer."""
        two = Fraction(exp) * 2
        if two.denominator != 1:
            raise ValueError(f"exponent {exp} is not a half-integer")
        return cls({int(two): coeff})

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._terms.items()))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        return self + (-other)

    def __rsub__(self, other: int) -> "LaurentPoly":
        return LaurentPoly.const(other) - self

    def __mul__(self, other: "LaurentPoly | int") -> "LaurentPoly":
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly()
            return LaurentPoly._raw({k: c * other for k, c in self._terms.items()})
        a, b = self._terms, other._terms
        if len(a) < len(b):
            a, b = b, a
        out: dict[int, int] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        return LaurentPoly._raw({k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials can be inverted")
            (k, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("monomial with non-unit coefficient cannot be inverted")
            return LaurentPoly._raw({-k * -n: c ** -n})
        result = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, doubled: int) -> "LaurentPoly":
        """Multiply by ``q^(doubled/2)``."""
        return LaurentPoly._raw({k + doubled: c for k, c in self._terms.items()})

    def min_exp(self) -> int:
        """Lowest doubled exponent (raises on zero)."""
        return min(self._terms)

    def max_exp(self) -> int:
        return max(self._terms)

    def coeff(self, doubled: int) -> int:
        return self._terms.get(doubled, 0)

    def content(self) -> int:
        g = 0
        for c in self._terms.values():
            g = gcd(g, c)
        return g

    def substitute_power(self, factor: int) -> "LaurentPoly":
        """Replace ``q`` by ``q^factor`` (doubled exponents scale by ``factor``)."""
        return LaurentPoly._raw({k * factor: c for k, c in self._terms.items()})

    def mirror(self) -> "LaurentPoly":
        """Replace ``q`` by ``q^{-1}``."""
        return self.substitute_power(-1)

    def in_q2_ring(self) -> bool:
        """True iff every exponent of ``q`` is an even integer."""
        return all(k % 4 == 0 for k in self._terms)

    def evaluate(self, half_q: Fraction | int) -> Fraction:
        """Evaluate exactly at ``q^(1/2) = half_q``."""
        x = Fraction(half_q)
        return sum((c * x ** k for k, c in self._terms.items()), Fraction(0))

    def exact_div(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient ``self / other`` in the Laurent ring; raises if inexact."""
        q, r = _laurent_divide(self, other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()})"

    def to_text(self) -> str:
        """Canonical rendering: ascending exponents, ``c*q^(k/2)`` terms."""
        if not self._terms:
            return "0"
        parts = []
        for k, c in sorted(self._terms.items()):
            parts.append(f"{c}*q^({k}/2)")
        return " + ".join(parts)

    def pretty(self) -> str:
        """Human-friendly rendering with reduced exponents."""
        if not self._terms:
            return "0"
        out = []
        for k, c in sorted(self._terms.items()):
            e = Fraction(k, 2)
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            if mono and abs(c) == 1:
                body = mono
            elif mono:
                body = f"{abs(c)}*{mono}"
            else:
                body = str(abs(c))
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        text = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> list[list[int]]:
        return [[k, c] for k, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data: Iterable[Iterable[int]]) -> "LaurentPoly":
        return cls({int(k): int(c) for k, c in data})


def _laurent_divide(a: LaurentPoly, b: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Divide Laurent polynomials by normalizing both to genuine polynomials."""
    if b.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if a.is_zero():
        return LaurentPoly(), LaurentPoly()
    sa, sb = a.min_exp(), b.min_exp()
    pa = _to_dense(a.shift(-sa))
    pb = _to_dense(b.shift(-sb))
    quo, rem = _dense_divmod(pa, pb)
    q = _from_dense(quo).shift(sa - sb)
    r = _from_dense(rem).shift(sa)
    return q, r


def _to_dense(p: LaurentPoly) -> list[int]:
    if p.is_zero():
        return []
    top = p.max_exp()
    out = [0] * (top + 1)
    for k, c in p._terms.items():
        out[k] = c
    return out


def _from_dense(coeffs: list[int]) -> LaurentPoly:
    return LaurentPoly({i: c for i, c in enumerate(coeffs) if c})


def _dense_divmod(a: list[int], b: list[int]) -> tuple[list[int], list[int]]:
    a = list(a)
    while b and b[-1] == 0:
        b = b[:-1]
    db = len(b) - 1
    lead = b[-1]
    if len(a) - 1 < db:
        return [], a
    quo = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c == 0:
            continue
        if c % lead:
            # not exactly divisible over Z: leave remainder as is
            return quo, a
        f = c // lead
        quo[i - db] = f
        for j in range(db + 1):
            a[i - db + j] -= f * b[j]
    return quo, a


# -- integer polynomial gcd (dense lists, low degree first) ------------------

def _trim(p: list[int]) -> list[int]:
    while p and p[-1] == 0:
        p = p[:-1]
    return p


def _content(p: list[int]) -> int:
    g = 0
    for c in p:
        g = gcd(g, c)
    return g


def _primitive(p: list[int]) -> list[int]:
    p = _trim(p)
    if not p:
        return p
    g = _content(p)
    if p[-1] < 0:
        g = -g
    return [c // g for c in p]


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    lead = b[-1]
    while len(a) - 1 >= db and a:
        c = a[-1]
        shift = len(a) - 1 - db
        a = [x * lead for x in a]
        for j in range(db + 1):
            a[shift + j] -= c * b[j]
        a = _trim(a)
    return a


def poly_gcd(a: list[int], b: list[int]) -> list[int]:
    """Primitive gcd of two integer polynomials (primitive PRS)."""
    a, b = _primitive(a), _primitive(b)
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r)
    return _primitive(a)


class RatFunc:
    """Quotient of Laurent polynomials kept in lowest terms.

    Canonical form: the denominator is a genuine polynomial in ``q^(1/2)``
    with nonzero constant term and positive leading coefficient, and the
    numerator and denominator share no nonunit factor (integer content
    included).
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: LaurentPoly | int, den: LaurentPoly | int = 1, *, _canonical: bool = False):
        if isinstance(num, int):
            num = LaurentPoly.const(num)
        if isinstance(den, int):
            den = LaurentPoly.const(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "RatFunc":
        return cls(p, LaurentPoly.const(1), _canonical=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den == LaurentPoly.const(1)

    def to_poly(self) -> LaurentPoly:
        if not self.is_poly():
            raise ArithmeticError(f"{self} is not a Laurent polynomial")
        return self.num

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, LaurentPoly)):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, LaurentPoly)):
            return RatFunc(other)
        return NotImplemented

    def __add__(self, other) -> "RatFunc":
        other = self._coerce(other)
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _canonical=True)

    def __sub__(self, other) -> "RatFunc":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return self._coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return self._coerce(other) * self.inverse()

    def __repr__(self) -> str:
        if self.is_poly():
            return f"RatFunc({self.num.pretty()})"
        return f"RatFunc(({self.num.pretty()}) / ({self.den.pretty()}))"


def _canonicalize(num: LaurentPoly, den: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    if num.is_zero():
        return LaurentPoly(), LaurentPoly.const(1)
    s = den.min_exp()
    num, den = num.shift(-s), den.shift(-s)
    if len(den._terms) == 1:
        c = den._terms[0]
        g = gcd(num.content(), c)
        if c < 0:
            g = -g
        return LaurentPoly._raw({k: v // g for k, v in num._terms.items()}), LaurentPoly.const(c // g)
    ns = num.min_exp()
    pn = _to_dense(num.shift(-ns))
    pd = _to_dense(den)
    g = poly_gcd(pn, pd)
    if len(g) > 1:
        pn, r1 = _dense_divmod(pn, g)
        pd, r2 = _dense_divmod(pd, g)
        assert not _trim(r1) and not _trim(r2)
        pn, pd = _trim(pn), _trim(pd)
    c = gcd(_content(pn), _content(pd))
    if pd[-1] < 0:
        c = -c
    pn = [x // c for x in pn]
    pd = [x // c for x in pd]
    return _from_dense(pn).shift(ns), _from_dense(pd)


# -- named constants ----------------------------------------------------------

ONE = LaurentPoly.const(1)
ZERO = LaurentPoly()
#: value of a closed circle, ``-(q + q^{-1})``
CIRCLE = LaurentPoly({2: -1, -2: -1})


def quantum_int(n: int) -> LaurentPoly:
    """Balanced quantum integer ``[n] = (q^n - q^-n)/(q - q^-1)``."""
    if n <= 0:
        return LaurentPoly() if n == 0 else -quantum_int(-n)
    return LaurentPoly({2 * (n - 1 - 2 * i): 1 for i in range(n)})


def brace_poly(i: int, j: int) -> LaurentPoly:
    """The Gaussian-binomial-type polynomial ``{i brace j}_x`` in variable ``x``.

    Returned as a :class:`LaurentPoly` whose variable is read as ``x``
    (so ``x^2`` is stored under doubled key 4).  The numerator is divided
    factor by factor, and each division is asserted exact.
    """
    if i < 0 or j < 0:
        raise ValueError("brace_poly needs nonnegative arguments")
    if j > i:
        raise ValueError(f"brace_poly({i}, {j}): need j <= i")
    result = ONE
    for m in range(1, j + 1):
        # multiply by (1 - x^{2(i-m+1)}) then divide by (1 - x^{2m})
        result = result * (ONE - LaurentPoly.q(2 * (i - m + 1)))
        quo, rem = _laurent_divide(result, ONE - LaurentPoly.q(2 * m))
        if not rem.is_zero():
            raise ArithmeticError(f"inexact division building brace_poly({i}, {j})")
        result = quo
    return result


def decat_substitute(h_power: Fraction | int, q_power: int) -> LaurentPoly:
    """Decategorify a grading shift: ``h -> q`` and ``q -> -q``."""
    two_h = Fraction(h_power) * 2
    if two_h.denominator != 1:
        raise ValueError("h-power must be a half-integer")
    sign = -1 if q_power % 2 else 1
    return LaurentPoly({int(two_h) + 2 * q_power: sign})


# -- bigraded tables -----------------------------------------------------------

class KhTable:
    """Sparse table of dimensions indexed by ``(2*h-degree, q-degree)``."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[tuple[int, int], int] | None = None):
        clean = {}
        for (i2, j), d in (entries or {}).items():
            if d < 0:
                raise ValueError(f"negative dimension at {(i2, j)}")
            if d:
                clean[(int(i2), int(j))] = int(d)
        self._entries = clean

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        return dict(self._entries)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self._entries.get(key, 0)

    def dim(self, h: Fraction | int, j: int) -> int:
        """Dimension at h-degree ``h`` (not doubled) and q-degree ``j``."""
        return self._entries.get((int(Fraction(h) * 2), j), 0)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, KhTable) and self._entries == other._entries

    def __hash__(self) -> int:
        return hash(frozenset(self._entries.items()))

    def __bool__(self) -> bool:
        return bool(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def total_dim(self) -> int:
        return sum(self._entries.values())

    def shift(self, h2: int, j: int) -> "KhTable":
        """Apply ``h^(h2/2) q^j``."""
        return KhTable({(i + h2, k + j): d for (i, k), d in self._entries.items()})

    def __add__(self, other: "KhTable") -> "KhTable":
        out = dict(self._entries)
        for key, d in other._entries.items():
            out[key] = out.get(key, 0) + d
        return KhTable(out)

    def tensor(self, other: "KhTable") -> "KhTable":
        out: dict[tuple[int, int], int] = {}
        for (i1, j1), d1 in self._entries.items():
            for (i2, j2), d2 in other._entries.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, 0) + d1 * d2
        return KhTable(out)

    def rows(self) -> list[int]:
        """Sorted doubled h-degrees with nonzero entries."""
        return sorted({i for i, _ in self._entries})

    def row(self, i2: int) -> dict[int, int]:
        return {j: d for (i, j), d in self._entries.items() if i == i2}

    def restrict_rows(self, max_i2: int) -> "KhTable":
        return KhTable({k: d for k, d in self._entries.items() if k[0] <= max_i2})

    def min_h2(self) -> int | None:
        return min((i for i, _ in self._entries), default=None)

    def to_json(self) -> list[list[int]]:
        return [[i, j, d] for (i, j), d in sorted(self._entries.items())]

    @classmethod
    def from_json(cls, data) -> "KhTable":
        return cls({(int(i), int(j)): int(d) for i, j, d in data})

    def __repr__(self) -> str:
        return f"KhTable({dict(sorted(self._entries.items()))})"

    def render(self) -> str:
        """Plain-text grid: rows are q-degrees, columns h-degrees."""
        if not self._entries:
            return "(empty)"
        hs = sorted({i for i, _ in self._entries})
        js = sorted({j for _, j in self._entries}, reverse=True)
        head = "q\\h " + " ".join(f"{str(Fraction(i, 2)):>5}" for i in hs)
        lines = [head]
        for j in js:
            cells = []
            for i in hs:
                d = self._entries.get((i, j), 0)
                cells.append(f"{d if d else '.':>5}")
            lines.append(f"{j:>4} " + " ".join(cells))
        return "\n".join(lines)


def euler_char(table: KhTable) -> LaurentPoly:
    """Graded Euler characteristic ``sum (-1)^j q^(i+j) dim``."""
    out: dict[int, int] = {}
    for (i2, j), d in table.entries.items():
        k = i2 + 2 * j
        out[k] = out.get(k, 0) + (-d if j % 2 else d)
    return LaurentPoly(out)


@dataclass(frozen=True)
class TailSeries:
    """Certified low-degree prefix of the sign-normalized shifted colored Jones.

    ``coeffs`` maps integer q-exponents to coefficients; only exponents
    strictly below ``certified_degree`` are claimed stable.
    """

    coeffs: dict[int, int]
    certified_degree: Fraction
    sign_normalization: dict[int, int] = field(default_factory=dict)
    n_used: int = 0
    n_min_supplied: bool = False
    certified: bool = True
    consistent: bool = True
    notes: tuple[str, ...] = ()

    def prefix(self, below: Fraction | int | None = None) -> dict[int, int]:
        bound = self.certified_degree if below is None else Fraction(below)
        return {m: c for m, c in self.coeffs.items() if m < bound and c}

    def as_poly(self) -> LaurentPoly:
        return LaurentPoly({2 * m: c for m, c in self.prefix().items()})

    def to_json(self) -> dict:
        return {
            "coeffs": [[m, c] for m, c in sorted(self.prefix().items())],
            "certified_degree": str(self.certified_degree),
            "sign_normalization": {str(k): v for k, v in sorted(self.sign_normalization.items())},
            "n_used": self.n_used,
            "n_min_supplied": self.n_min_supplied,
            "certified": self.certified,
            "consistent": self.consistent,
            "notes": list(self.notes),
        }


def dumps(obj) -> str:
    """Deterministic JSON used for every persisted record."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
