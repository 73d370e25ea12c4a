"""Coefficient backends for network contraction.

A backend stores the coefficients of all states of a piece in one container
and implements the few bulk operations the contraction engine needs:

* ``load``     -- build a container from exact Laurent polynomials;
* ``combine``  -- ``out[k] = sum a[i] * b[j] * circle^loops`` over index lists;
* ``unary``    -- the same with a single input (self-closing a piece);
* ``select``   -- keep a subset of states;
* ``finish``   -- turn the closed value into an exact Laurent polynomial after
  dividing by the projector denominator ``den^boxes``.

``ExactBackend`` uses ``LaurentPoly`` throughout.  ``ModularBackend`` stores
values of each numerator at ``K`` points modulo a few word-sized primes, plus
a rigorous exponent range and ``log2`` bound on the coefficient l1-norm.  At
the end those bounds certify that the interpolated, CRT-lifted result is the
exact quotient; if the points or primes are insufficient it asks for a rerun
with larger parameters (``NeedMore``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from sympy import prevprime

from .algebra import CIRCLE, LaurentPoly, _laurent_divide

# primes just below 2^31: products of two residues fit in int64
_PRIMES: list[int] = [2147483629]


def prime_list(k: int) -> tuple[int, ...]:
    """The ``k`` largest primes below 2^31."""
    while len(_PRIMES) < k:
        _PRIMES.append(prevprime(_PRIMES[-1]))
    return tuple(_PRIMES[:k])


class NeedMore(Exception):
    """Raised by ``ModularBackend.finish`` when a rerun needs more points or primes."""

    def __init__(self, points: int, primes: int, step: int):
        super().__init__(f"need {points} points, {primes} primes, step {step}")
        self.points = points
        self.primes = primes
        self.step = step


# -- exact ----------------------------------------------------------------------

_CP: dict[int, LaurentPoly] = {}


def circle_pow(k: int) -> LaurentPoly:
    if k not in _CP:
        _CP[k] = CIRCLE ** k
    return _CP[k]


class ExactBackend:
    name = "exact"

    def load(self, values: list[LaurentPoly]) -> list[LaurentPoly]:
        return list(values)

    def combine(self, ca, cb, ia, ib, kidx, loops, nkeys):
        acc: list[dict[int, LaurentPoly]] = [dict() for _ in range(nkeys)]
        for i, j, k, lp in zip(ia, ib, kidx, loops):
            v = ca[i] * cb[j]
            slot = acc[k]
            slot[lp] = slot[lp] + v if lp in slot else v
        return self._collapse(acc)

    def unary(self, c, src, kidx, loops, nkeys):
        acc: list[dict[int, LaurentPoly]] = [dict() for _ in range(nkeys)]
        for i, k, lp in zip(src, kidx, loops):
            slot = acc[k]
            slot[lp] = slot[lp] + c[i] if lp in slot else c[i]
        return self._collapse(acc)

    @staticmethod
    def _collapse(acc):
        out = []
        for by_loops in acc:
            total = LaurentPoly()
            for lp, v in by_loops.items():
                total = total + (v * circle_pow(lp) if lp else v)
            out.append(total)
        return out

    def finish(self, c, boxes: int, den: LaurentPoly | None) -> LaurentPoly:
        total = c[0]
        if boxes:
            quo, rem = _laurent_divide(total, den ** boxes)
            if not rem.is_zero():
                raise ArithmeticError("closed network value is not a Laurent polynomial")
            total = quo
        return total


# -- modular ----------------------------------------------------------------------

@dataclass
class ModCoefs:
    vals: np.ndarray  # (S, P*K) residues
    l1: np.ndarray    # (S,) log2 upper bound on the l1 norm of the numerator
    lo: np.ndarray    # (S,) lower bound on the lowest doubled exponent
    hi: np.ndarray    # (S,) upper bound on the highest doubled exponent
    r: np.ndarray     # (S,) all exponents lie in r + g*Z
    g: np.ndarray     # (S,)


_IMAX = np.iinfo(np.int64).max
_IMIN = np.iinfo(np.int64).min


def _inv_mod(a: int, p: int) -> int:
    return pow(a, p - 2, p)


def _lattice(terms) -> tuple[int, int]:
    ks = sorted(terms)
    g = 0
    for k in ks[1:]:
        g = math.gcd(g, k - ks[0])
    return ks[0], g


class ModularBackend:
    """Evaluation at points ``s = a, a+1, ...`` modulo several primes.

    A doubled exponent ``k`` means ``s^k``.  ``step`` is the exponent lattice
    step expected for the final value; the points are chosen so that their
    ``step``-th powers are distinct, which is what interpolation needs.
    """

    name = "modular"
    _CHUNK = 1 << 22  # residues per temporary block

    def __init__(self, points: int, primes: int, den: LaurentPoly | None = None, step: int = 1):
        self.K = points
        self.primes = prime_list(primes)
        self.step = max(step, 1)
        self.start = self._choose_start(den)
        xs = []
        mods = []
        for p in self.primes:
            xs.extend((self.start + i) % p for i in range(points))
            mods.extend([p] * points)
        self.x = np.array(xs, dtype=np.int64)
        self.mod = np.array(mods, dtype=np.int64)
        self.xinv = np.array([_inv_mod(int(x), int(m)) for x, m in zip(self.x, self.mod)], dtype=np.int64)
        self._pow: dict[int, np.ndarray] = {0: np.ones_like(self.x)}
        self._circle: list[np.ndarray] = [np.ones_like(self.x)]

    def _choose_start(self, den: LaurentPoly | None) -> int:
        start = 2
        terms = den.terms if den is not None else {}
        while True:
            ok = True
            for p in self.primes:
                nodes = set()
                for i in range(self.K):
                    x = start + i
                    nodes.add(pow(x, self.step, p))
                    if terms and sum(c * pow(x, k, p) for k, c in terms.items()) % p == 0:
                        ok = False
                        break
                if not ok or len(nodes) < self.K:
                    ok = False
                    break
            if ok:
                return start
            start += self.K + 1

    def xpow(self, k: int) -> np.ndarray:
        got = self._pow.get(k)
        if got is None:
            base = self.x if k > 0 else self.xinv
            got = np.ones_like(self.x)
            e = abs(k)
            b = base.copy()
            while e:
                if e & 1:
                    got = got * b % self.mod
                b = b * b % self.mod
                e >>= 1
            self._pow[k] = got
        return got

    def evaluate(self, f: LaurentPoly) -> np.ndarray:
        out = np.zeros_like(self.x)
        for k, c in f.terms.items():
            res = np.repeat(np.array([c % p for p in self.primes], dtype=np.int64), self.K)
            out = (out + res * self.xpow(k)) % self.mod
        return out

    def circle(self, k: int) -> np.ndarray:
        while len(self._circle) <= k:
            if len(self._circle) == 1:
                self._delta = self.evaluate(CIRCLE)
            self._circle.append(self._circle[-1] * self._delta % self.mod)
        return self._circle[k]

    def load(self, values: list[LaurentPoly]) -> ModCoefs:
        S = len(values)
        out = self._empty(S)
        for i, f in enumerate(values):
            t = f.terms
            if not t:
                continue
            out.vals[i] = self.evaluate(f)
            out.l1[i] = math.log2(sum(abs(c) for c in t.values()))
            out.lo[i] = min(t)
            out.hi[i] = max(t)
            out.r[i], out.g[i] = _lattice(t)
        return out

    def _empty(self, n: int) -> ModCoefs:
        return ModCoefs(np.zeros((n, len(self.x)), dtype=np.int64), np.full(n, -np.inf),
                        np.full(n, _IMAX, dtype=np.int64), np.full(n, _IMIN, dtype=np.int64),
                        np.zeros(n, dtype=np.int64), np.full(n, -1, dtype=np.int64))

    def _accumulate(self, out: ModCoefs, vals, l1, lo, hi, r, g, kidx) -> None:
        """Add contributions into ``out``; ``g == -1`` marks a still-empty state."""
        order = np.argsort(kidx, kind="stable")
        ks = kidx[order]
        starts = np.flatnonzero(np.r_[True, ks[1:] != ks[:-1]])
        counts = np.diff(np.r_[starts, len(ks)])
        uk = ks[starts]
        if vals.shape[1]:
            part = np.add.reduceat(vals[order], starts, axis=0) % self.mod
            out.vals[uk] = (out.vals[uk] + part) % self.mod
        l1s = l1[order]
        m = np.maximum.reduceat(l1s, starts)
        with np.errstate(invalid="ignore"):
            ssum = np.add.reduceat(np.exp2(l1s - np.repeat(m, counts)), starts)
            part_l = np.where(np.isfinite(m), m + np.log2(ssum), -np.inf)
        out.l1[uk] = np.logaddexp2(out.l1[uk], part_l)
        out.lo[uk] = np.minimum(out.lo[uk], np.minimum.reduceat(lo[order], starts))
        out.hi[uk] = np.maximum(out.hi[uk], np.maximum.reduceat(hi[order], starts))
        rs = r[order]
        r0 = rs[starts]
        gpart = np.gcd.reduceat(np.gcd(g[order], np.abs(rs - np.repeat(r0, counts))), starts)
        fresh = out.g[uk] < 0
        old_r = np.where(fresh, r0, out.r[uk])
        old_g = np.where(fresh, 0, out.g[uk])
        out.g[uk] = np.gcd(np.gcd(old_g, gpart), np.abs(r0 - old_r))
        out.r[uk] = old_r

    def combine(self, ca: ModCoefs, cb: ModCoefs, ia, ib, kidx, loops, nkeys) -> ModCoefs:
        ia = np.asarray(ia, dtype=np.int64)
        ib = np.asarray(ib, dtype=np.int64)
        kidx = np.asarray(kidx, dtype=np.int64)
        loops = np.asarray(loops, dtype=np.int64)
        M = len(self.x)
        out = self._empty(nkeys)
        if len(ia):
            maxl = int(loops.max())
            circ = np.stack([self.circle(k) for k in range(maxl + 1)]) if M else None
            step = max(1, self._CHUNK // max(M, 1))
            for s in range(0, len(ia), step):
                a, b, k, lp = ia[s:s + step], ib[s:s + step], kidx[s:s + step], loops[s:s + step]
                v = ca.vals[a] * cb.vals[b] % self.mod
                if maxl and M:
                    v = v * circ[lp] % self.mod
                # the circle power has exponents in -2L + 4Z
                self._accumulate(out, v, ca.l1[a] + cb.l1[b] + lp,
                                 ca.lo[a] + cb.lo[b] - 2 * lp, ca.hi[a] + cb.hi[b] + 2 * lp,
                                 ca.r[a] + cb.r[b] - 2 * lp,
                                 np.gcd(np.gcd(ca.g[a], cb.g[b]), np.where(lp > 0, 4, 0)), k)
        return self._finalize(out)

    def unary(self, c: ModCoefs, src, kidx, loops, nkeys) -> ModCoefs:
        src = np.asarray(src, dtype=np.int64)
        kidx = np.asarray(kidx, dtype=np.int64)
        loops = np.asarray(loops, dtype=np.int64)
        out = self._empty(nkeys)
        if len(src):
            v = c.vals[src]
            maxl = int(loops.max())
            if maxl and len(self.x):
                circ = np.stack([self.circle(k) for k in range(maxl + 1)])
                v = v * circ[loops] % self.mod
            self._accumulate(out, v, c.l1[src] + loops, c.lo[src] - 2 * loops, c.hi[src] + 2 * loops,
                             c.r[src] - 2 * loops, np.gcd(c.g[src], np.where(loops > 0, 4, 0)), kidx)
        return self._finalize(out)

    @staticmethod
    def _finalize(out: ModCoefs) -> ModCoefs:
        # states that received only zero-bound input keep the empty markers
        empty = out.g < 0
        out.g[empty] = 0
        return out

    def _bounds(self, c: ModCoefs, boxes: int, den: LaurentPoly | None):
        """Certified exponent range, lattice step and coefficient bit bound of the quotient."""
        lo, hi, l1 = int(c.lo[0]), int(c.hi[0]), float(c.l1[0])
        g = int(c.g[0])
        growth = 0.0
        if boxes:
            dt = den.terms
            dlo, dg = _lattice(dt)
            lo -= boxes * dlo
            hi -= boxes * max(dt)
            g = math.gcd(g, dg)
            growth = _series_growth(den, boxes, max(hi - lo, 0))
        if hi < lo:
            raise ArithmeticError("closed network value is not a Laurent polynomial")
        # float slack: relative rounding of the log-sum-exp chain plus one bit
        return lo, hi, g, l1 + growth + 1e-9 * abs(l1) + 1

    def requirements(self, c: ModCoefs, boxes: int, den: LaurentPoly | None) -> tuple[int, int, int]:
        """Points, primes and lattice step that make ``finish`` exact for this value."""
        if not np.isfinite(c.l1[0]):
            return 1, 1, 1
        lo, hi, g, bits = self._bounds(c, boxes, den)
        primes = 1
        while sum(math.log2(p) for p in prime_list(primes)) - 2 < bits:
            primes += 1
        g = max(g, 1)
        return (hi - lo) // g + 1, primes, g

    def finish(self, c: ModCoefs, boxes: int, den: LaurentPoly | None) -> LaurentPoly:
        if not np.isfinite(c.l1[0]):
            return LaurentPoly()
        points, primes, g = self.requirements(c, boxes, den)
        if points > self.K or primes > len(self.primes) or g % self.step:
            raise NeedMore(max(points, self.K), max(primes, len(self.primes)), g)
        lo, hi, _, _ = self._bounds(c, boxes, den)
        vals = c.vals[0].copy()
        if boxes:
            dinv = np.array([_inv_mod(int(v), int(m)) for v, m in zip(self.evaluate(den), self.mod)],
                            dtype=np.int64)
            for _ in range(boxes):
                vals = vals * dinv % self.mod
        vals = vals * self.xpow(-lo) % self.mod
        # the value is s^lo * F(s^g); interpolate F at the nodes x^g
        nodes = self.xpow(g)
        residues = []
        for t, p in enumerate(self.primes):
            seg = slice(t * self.K, t * self.K + points)
            residues.append(_interpolate(nodes[seg], vals[seg], p))
        coeffs = _crt(residues, self.primes)
        return LaurentPoly({lo + g * i: c for i, c in enumerate(coeffs) if c})


def _series_growth(den: LaurentPoly, boxes: int, length: int) -> float:
    """log2 of the largest |coefficient| among the first terms of 1/(den/s^lo)^boxes."""
    t = den.terms
    dlo = min(t)
    d = [0] * (max(t) - dlo + 1)
    for k, c in t.items():
        d[k - dlo] = c
    if abs(d[0]) != 1:
        raise ValueError("projector denominator must have a unit constant term")
    # power of the polynomial, truncated
    poly = [1]
    for _ in range(boxes):
        nxt = [0] * min(len(poly) + len(d) - 1, length + 1)
        for i, a in enumerate(poly):
            if a:
                for j, b in enumerate(d):
                    if i + j > length:
                        break
                    nxt[i + j] += a * b
        poly = nxt
    inv = [0] * (length + 1)
    inv[0] = poly[0]  # +-1
    for n in range(1, length + 1):
        acc = 0
        for j in range(1, min(n, len(poly) - 1) + 1):
            acc += poly[j] * inv[n - j]
        inv[n] = -acc * poly[0]
    big = max(abs(v) for v in inv)
    return math.log2(big) if big > 1 else 0.0


def _interpolate(nodes: np.ndarray, vals: np.ndarray, p: int) -> list[int]:
    """Coefficients mod p of the polynomial taking ``vals`` at distinct ``nodes``."""
    n = len(vals)
    t = [int(v) for v in nodes]
    c = vals.astype(np.int64) % p
    # Newton divided differences
    for j in range(1, n):
        inv = np.array([_inv_mod((t[i] - t[i - j]) % p, p) for i in range(j, n)], dtype=np.int64)
        c[j:] = (c[j:] - c[j - 1:-1]) % p * inv % p
    poly = np.zeros(n, dtype=np.int64)
    poly[0] = c[n - 1]
    for k in range(n - 2, -1, -1):
        # poly = poly * (X - t_k) + c_k
        shifted = np.zeros(n, dtype=np.int64)
        shifted[1:] = poly[:-1]
        poly = (shifted - poly * t[k] % p) % p
        poly[0] = (poly[0] + c[k]) % p
    return [int(v) for v in poly]


def _crt(residues: list[list[int]], primes) -> list[int]:
    M = 1
    out = [0] * len(residues[0])
    for res, p in zip(residues, primes):
        inv = pow(M % p, p - 2, p)
        for i, r in enumerate(res):
            t = (r - out[i]) * inv % p
            out[i] += M * t
        M *= p
    half = M // 2
    return [v - M if v > half else v for v in out]
