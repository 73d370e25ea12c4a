"""Local (scanning) Khovanov complexes in the dotted cobordism category.

Objects are crossingless matchings of boundary points (edge labels) with a
homological height ``r`` and a standard q-shift.  Closed loops are delooped
as soon as they appear, so no object ever carries a circle.  Over the
Frobenius algebra Q[x]/(x^2), a morphism between matchings ``A`` and ``B`` is
a combination of disc unions: one disc per cycle of ``A u B``, each carrying
zero or one dot.  It is stored as ``{dot bitmask: coefficient}``.

Both vertical composition and side-by-side gluing are evaluated by one
routine: glue the pieces, read off each connected surface's Euler
characteristic, and reduce it by neck cutting (a handle is ``2x``, two dots
vanish, a dotted sphere is 1).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import count, product

Matching = tuple  # sorted tuple of sorted pairs
Morph = dict  # {mask: coefficient}


def matching(pairs) -> Matching:
    return tuple(sorted(tuple(sorted(p)) for p in pairs))


@lru_cache(maxsize=None)
def _partner(m: Matching) -> dict:
    out = {}
    for u, v in m:
        out[u] = v
        out[v] = u
    return out


@lru_cache(maxsize=None)
def cycles(a: Matching, b: Matching) -> tuple[int, dict]:
    """Cycles of ``a u b``, numbered by their smallest point."""
    pa, pb = _partner(a), _partner(b)
    idx: dict = {}
    n = 0
    for p in sorted(pa):
        if p in idx:
            continue
        q = p
        while True:
            idx[q] = n
            r = pa[q]
            idx[r] = n
            q = pb[r]
            if q == p:
                break
        n += 1
    return n, idx


def _evaluate(npieces: int, dots: list[int], unions: list[tuple[int, int, int]],
              out_piece: list[int]) -> Morph:
    parent = list(range(npieces))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j, _ in unions:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
    size = [0] * npieces
    nint = [0] * npieces
    ndots = [0] * npieces
    for i in range(npieces):
        r = find(i)
        size[r] += 1
        ndots[r] += dots[i]
    for i, _, w in unions:
        nint[find(i)] += w
    bnd: dict[int, list[int]] = {}
    for k, p in enumerate(out_piece):
        bnd.setdefault(find(p), []).append(k)
    fixed = 0
    coeff = 1
    choices: list[list[int]] = []
    for r in {find(i) for i in range(npieces)}:
        b = bnd.get(r, [])
        chi = size[r] - nint[r]
        twice_genus = 2 - len(b) - chi
        if twice_genus < 0 or twice_genus % 2:
            raise AssertionError("inconsistent surface in cobordism evaluation")
        g = twice_genus // 2
        m = ndots[r] + g
        if m >= 2 or (not b and m == 0):
            return {}
        coeff <<= g
        if m == 1:
            for k in b:
                fixed |= 1 << k
        elif b:
            full = sum(1 << k for k in b)
            choices.append([full & ~(1 << k) for k in b])
    out = {fixed: coeff}
    for opts in choices:
        out = {m | o: c for m, c in out.items() for o in opts}
    return out


@lru_cache(maxsize=None)
def compose_basis(a: Matching, b: Matching, c: Matching, m1: int, m2: int) -> tuple:
    """Disc union ``m1: a -> b`` followed by ``m2: b -> c``."""
    n1, c1 = cycles(a, b)
    n2, c2 = cycles(b, c)
    dots = [(m1 >> i) & 1 for i in range(n1)] + [(m2 >> i) & 1 for i in range(n2)]
    unions = [(c1[u], n1 + c2[u], 1) for u, _ in b]
    n3, c3 = cycles(a, c)
    first = {}
    for p in sorted(c3, reverse=True):
        first[c3[p]] = p
    out_piece = [c1[first[k]] for k in range(n3)]
    return tuple(_evaluate(n1 + n2, dots, unions, out_piece).items())


def compose(a: Matching, b: Matching, c: Matching, f: Morph, g: Morph) -> Morph:
    out: Morph = {}
    for m1, x in f.items():
        for m2, y in g.items():
            for m, z in compose_basis(a, b, c, m1, m2):
                v = out.get(m, 0) + x * y * z
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
    return out


def _join(m1: Matching, m2: Matching):
    """Concatenate two matchings at shared points.

    Returns the resulting boundary matching and the closed loops, each as a
    list of ``(point, side)`` arc starts, ordered by smallest point.
    """
    p1, p2 = _partner(m1), _partner(m2)
    shared = set(p1) & set(p2)
    boundary = sorted(set(p1) ^ set(p2))
    seen = set()
    pairs = []
    for s in boundary:
        if s in seen:
            continue
        cur, side = s, (1 if s in p1 else 2)
        while True:
            seen.add(cur)
            nxt = (p1 if side == 1 else p2)[cur]
            seen.add(nxt)
            if nxt not in shared:
                pairs.append((s, nxt))
                break
            cur, side = nxt, 3 - side
    loops = []
    for s in sorted(shared):
        if s in seen:
            continue
        pts = []
        cur, side = s, 1
        while True:
            seen.add(cur)
            pts.append((cur, side))
            nxt = (p1 if side == 1 else p2)[cur]
            seen.add(nxt)
            cur, side = nxt, 3 - side
            if cur == s:
                break
        loops.append(pts)
    return matching(pairs), loops


@lru_cache(maxsize=None)
def join(m1: Matching, m2: Matching) -> tuple[Matching, int]:
    r, loops = _join(m1, m2)
    return r, len(loops)


@lru_cache(maxsize=None)
def hglue(a1: Matching, b1: Matching, k1: int, a2: Matching, b2: Matching, k2: int) -> tuple:
    """Side-by-side gluing of disc unions ``k1: a1 -> b1`` and ``k2: a2 -> b2``.

    Source loops are delooped with (cup, dotted cup) for labels (+, -) and
    target loops with (dotted cap, cap).  Returns
    ``((eps_source, eps_target, ((mask, coeff), ...)), ...)``.
    """
    n1, c1 = cycles(a1, b1)
    n2, c2 = cycles(a2, b2)
    shared = set(_partner(a1)) & set(_partner(a2))
    ra, la = _join(a1, a2)
    rb, lb = _join(b1, b2)

    def piece(p, side):
        return c1[p] if side == 1 else n1 + c2[p]

    base_dots = [(k1 >> i) & 1 for i in range(n1)] + [(k2 >> i) & 1 for i in range(n2)]
    unions = [(c1[p], n1 + c2[p], 1) for p in shared]
    npieces = n1 + n2
    for loop in la:
        unions += [(npieces, piece(p, s), 0) for p, s in loop]
        npieces += 1
    for loop in lb:
        unions += [(npieces, piece(p, s), 0) for p, s in loop]
        npieces += 1
    n3, c3 = cycles(ra, rb)
    p1 = _partner(a1)
    first = {}
    for p in sorted(c3, reverse=True):
        first[c3[p]] = p
    out_piece = [piece(first[k], 1 if first[k] in p1 else 2) for k in range(n3)]
    out = []
    for ea in product((0, 1), repeat=len(la)):
        for eb in product((0, 1), repeat=len(lb)):
            dots = base_dots + list(ea) + [1 - e for e in eb]
            res = _evaluate(npieces, dots, unions, out_piece)
            if res:
                out.append((ea, eb, tuple(res.items())))
    return tuple(out)


class TangleComplex:
    """Complex of delooped matchings over a fixed set of boundary points."""

    def __init__(self, points, objs, diff):
        self.points = frozenset(points)
        self.objs: dict[int, tuple[Matching, int, int]] = dict(objs)
        self.d: dict[int, dict[int, Morph]] = {i: {} for i in self.objs}
        self.din: dict[int, set] = {i: set() for i in self.objs}
        self._next = max(self.objs, default=-1) + 1
        for (s, t), f in diff.items():
            self._add(s, t, f)

    def _add(self, s, t, f: Morph, scale=1) -> None:
        row = self.d[s]
        cur = row.get(t)
        if cur is None:
            cur = {}
        for m, c in f.items():
            v = cur.get(m, 0) + scale * c
            if v:
                cur[m] = v
            else:
                cur.pop(m, None)
        if cur:
            row[t] = cur
            self.din[t].add(s)
        elif t in row:
            del row[t]
            self.din[t].discard(s)

    def __len__(self) -> int:
        return len(self.objs)

    # -- constructors -------------------------------------------------------------

    @classmethod
    def empty(cls) -> "TangleComplex":
        return cls((), {0: ((), 0, 0)}, {})

    @classmethod
    def circle(cls) -> "TangleComplex":
        return cls((), {0: ((), 0, 1), 1: ((), 0, -1)}, {})

    @classmethod
    def crossing(cls, a, b, c, d) -> "TangleComplex":
        """Cone from the A-smoothing (height 0) to the B-smoothing (height 1)."""
        x0 = matching([(a, b), (c, d)])
        x1 = matching([(a, d), (b, c)])
        return cls({a, b, c, d}, {0: (x0, 0, 0), 1: (x1, 1, 1)}, {(0, 1): {0: 1}})

    @classmethod
    def wire(cls, u, v) -> "TangleComplex":
        return cls({u, v}, {0: (matching([(u, v)]), 0, 0)}, {})

    # -- operations ----------------------------------------------------------------

    def tensor(self, other: "TangleComplex") -> "TangleComplex":
        points = self.points ^ other.points
        objs = {}
        index = {}
        for i, (m1, r1, q1) in sorted(self.objs.items()):
            for j, (m2, r2, q2) in sorted(other.objs.items()):
                rm, nl = join(m1, m2)
                for eps in product((0, 1), repeat=nl):
                    k = len(objs)
                    index[i, j, eps] = k
                    objs[k] = (rm, r1 + r2, q1 + q2 + nl - 2 * sum(eps))
        out = TangleComplex(points, objs, {})
        for i, row in self.d.items():
            mi = self.objs[i][0]
            for t, f in row.items():
                mt = self.objs[t][0]
                for j, (m2, _, _) in other.objs.items():
                    for k1, c in f.items():
                        for ea, eb, res in hglue(mi, mt, k1, m2, m2, 0):
                            out._add(index[i, j, ea], index[t, j, eb], dict(res), c)
        for j, row in other.d.items():
            mj = other.objs[j][0]
            for t, g in row.items():
                mt = other.objs[t][0]
                for i, (m1, r1, _) in self.objs.items():
                    sign = -1 if r1 % 2 else 1
                    for k2, c in g.items():
                        for ea, eb, res in hglue(m1, m1, 0, mj, mt, k2):
                            out._add(index[i, j, ea], index[i, t, eb], dict(res), sign * c)
        return out

    def _iso(self, s, t):
        ms, _, qs = self.objs[s]
        mt, _, qt = self.objs[t]
        if ms != mt or qs != qt:
            return None
        return self.d[s][t].get(0)

    def cancel(self, b, c, lam) -> None:
        """Gaussian elimination of the isomorphism ``b -> c``."""
        mc = self.objs[c][0]
        ins = sorted(a for a in self.din[c] if a != b)
        outs = sorted(e for e in self.d[b] if e != c)
        scale = -lam if lam in (1, -1) else Fraction(-1, lam)
        for a in ins:
            fa = self.d[a][c]
            ma = self.objs[a][0]
            for e in outs:
                comp = compose(ma, mc, self.objs[e][0], fa, self.d[b][e])
                if comp:
                    self._add(a, e, comp, scale)
        for x in (b, c):
            for t in list(self.d[x]):
                self.din[t].discard(x)
            for s in list(self.din[x]):
                self.d[s].pop(x, None)
            del self.d[x], self.din[x], self.objs[x]

    def simplify(self) -> int:
        """Cancel isomorphisms until none remain; lowest height, then lowest index first."""
        removed = 0
        while True:
            hit = False
            for b in sorted(self.objs, key=lambda i: (self.objs[i][1], i)):
                if b not in self.objs:
                    continue
                for c in sorted(self.d[b]):
                    lam = self._iso(b, c)
                    if lam:
                        self.cancel(b, c, lam)
                        removed += 2
                        hit = True
                        break
            if not hit:
                return removed

    def check_d2(self) -> bool:
        for s, row in self.d.items():
            acc: dict[int, Morph] = {}
            for t, f in row.items():
                for u, g in self.d[t].items():
                    comp = compose(self.objs[s][0], self.objs[t][0], self.objs[u][0], f, g)
                    cur = acc.setdefault(u, {})
                    for m, c in comp.items():
                        cur[m] = cur.get(m, 0) + c
            if any(c for cur in acc.values() for c in cur.values()):
                return False
        return True


def scan_order(crossings) -> list[int]:
    """Greedy order keeping the open boundary small."""
    left = set(range(len(crossings)))
    open_pts: set = set()
    order = []
    while left:
        def score(i):
            x = crossings[i]
            shared = sum(1 for e in x if e in open_pts)
            return (-shared, sum(1 for e in set(x) if e not in open_pts) - shared, i)
        best = min(left, key=score)
        left.remove(best)
        order.append(best)
        for e in crossings[best]:
            if e in open_pts:
                open_pts.discard(e)
            else:
                open_pts.add(e)
    return order


def local_crossing(x, fresh) -> TangleComplex:
    """Crossing complex, closing any edge that returns to the same crossing."""
    labels = list(x)
    wires = []
    seen = set()
    for k, e in enumerate(labels):
        if e in seen:
            f = next(fresh)
            labels[k] = f
            wires.append((e, f))
        seen.add(e)
    cx = TangleComplex.crossing(*labels)
    for u, v in wires:
        cx = cx.tensor(TangleComplex.wire(u, v))
        cx.simplify()
    return cx


def scan(crossings, unknots: int = 0, *, check: bool = False) -> TangleComplex:
    """Fully scanned and simplified complex of a closed diagram."""
    top = max((e for x in crossings for e in x), default=0)
    fresh = count(top + 1)
    cx = TangleComplex.empty()
    for i in scan_order(crossings):
        cx = cx.tensor(local_crossing(crossings[i], fresh))
        if check and not cx.check_d2():
            raise AssertionError("d^2 != 0 after gluing")
        cx.simplify()
        if check and not cx.check_d2():
            raise AssertionError("d^2 != 0 after simplification")
    for _ in range(unknots):
        cx = cx.tensor(TangleComplex.circle())
    if cx.points:
        raise AssertionError("diagram is not closed")
    return cx
