"""Khovanov homology over Q in (h, q) gradings with a sign-carrying q.

A generator of the cube complex sits in a state with ``r`` B-smoothings and
carries labels ``v+`` / ``v-`` on its circles.  With ``p = #v+ - #v-`` it has
doubled h-degree ``h2 = n - 2r`` and q-degree ``q = -p``.  This is the affine
regrading of the usual cube gradings that puts the unknot at ``(0, +-1)`` and
makes the Euler characteristic ``sum (-1)^j q^(i+j) dim`` equal to the
Kauffman bracket with circle value ``-(q + q^-1)``.  Differentials lower ``h``
by 1 and raise ``q`` by 1.

Colored homology is approximated by cabling and replacing each projector by
``k`` negative full twists of the cable.  Shifted tables use the twisted
diagram's own crossing count and B-circle count, which differ from the
projector values by one framing monomial per twist.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .algebra import KhTable, euler_char
from .bn import scan
from .bstate import adequacy_report, b_state
from .diagram import (
    BraidWord,
    LinkDiagram,
    braid_closure,
    cable_with_map,
    disjoint_union,
    full_twist,
    insert_braids,
)
from .tl import ResourceError

DEFAULT_CUBE_LIMIT = 20


class ConventionError(AssertionError):
    """A complex axiom failed: a bug, never a finding."""


# -- chain complexes over Q ----------------------------------------------------------


@dataclass
class ChainComplex:
    """Finite bigraded complex: ``gens[h2]`` lists ``(label, q)``; ``diff[h2]`` maps into ``h2 - 2``.

    ``diff[h2][src][tgt]`` is a nonzero rational entry.
    """

    gens: dict[int, list[tuple[object, int]]]
    diff: dict[int, dict[int, dict[int, Fraction]]] = field(default_factory=dict)

    def n_generators(self) -> int:
        return sum(len(v) for v in self.gens.values())

    def degrees(self) -> list[int]:
        return sorted(self.gens)

    def check(self) -> None:
        """Raise unless entries have bidegree (-1, +1) and ``d o d = 0``."""
        for h2, rows in self.diff.items():
            src, tgt = self.gens[h2], self.gens.get(h2 - 2, [])
            for i, row in rows.items():
                for j, v in row.items():
                    if v and tgt[j][1] != src[i][1] + 1:
                        raise ConventionError(f"entry at h2={h2} does not raise q by one")
        for h2, rows in self.diff.items():
            nxt = self.diff.get(h2 - 2, {})
            for i, row in rows.items():
                acc: dict[int, Fraction] = {}
                for j, v in row.items():
                    for k, w in nxt.get(j, {}).items():
                        acc[k] = acc.get(k, 0) + v * w
                if any(acc.values()):
                    raise ConventionError(f"d o d != 0 at h2={h2}")


def build_complex(d: LinkDiagram, *, limit: int = DEFAULT_CUBE_LIMIT) -> ChainComplex:
    """Cube of resolutions, labels ``(state bitmask, circle labeling)``; bit 1 means ``v-``."""
    n = d.n
    if n > limit:
        raise ResourceError(f"{n} crossings exceeds the cube limit {limit}")
    xs = d.crossings
    states = []
    for s in range(1 << n):
        parent: dict[int, int] = {}

        def find(a):
            parent.setdefault(a, a)
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for k, (a, b, c, dd) in enumerate(xs):
            pairs = ((a, dd), (b, c)) if s >> k & 1 else ((a, b), (c, dd))
            for u, v in pairs:
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
        roots = sorted({find(e) for x in xs for e in x})
        circ = {e: roots.index(find(e)) for x in xs for e in x}
        states.append((len(roots) + d.unknots, circ))
    gens: dict[int, list] = {}
    where: dict[tuple[int, int], tuple[int, int]] = {}
    for s, (nc, _) in enumerate(states):
        h2 = n - 2 * bin(s).count("1")
        lst = gens.setdefault(h2, [])
        for lab in range(1 << nc):
            minus = bin(lab).count("1")
            where[s, lab] = (h2, len(lst))
            lst.append(((s, lab), -(nc - 2 * minus)))
    diff: dict[int, dict[int, dict[int, Fraction]]] = {}
    for s, (nc, circ) in enumerate(states):
        for k in range(n):
            if s >> k & 1:
                continue
            t = s | (1 << k)
            nt, circ_t = states[t]
            sign = -1 if bin(s & ((1 << k) - 1)).count("1") % 2 else 1
            a, b, c, dd = xs[k]
            # map every other circle of s to its circle in t
            fwd = {}
            for e, ci in circ.items():
                fwd.setdefault(ci, circ_t[e])
            for u in range(d.unknots):
                fwd[nc - d.unknots + u] = nt - d.unknots + u
            c1, c2 = circ[a], circ[c]
            for lab in range(1 << nc):
                h2, i = where[s, lab]
                images = _edge_images(lab, nc, fwd, c1, c2, circ_t[a], circ_t[b])
                for lab_t, coeff in images:
                    _, j = where[t, lab_t]
                    row = diff.setdefault(h2, {}).setdefault(i, {})
                    row[j] = row.get(j, 0) + sign * coeff
    for rows in diff.values():
        for i in list(rows):
            rows[i] = {j: Fraction(v) for j, v in rows[i].items() if v}
            if not rows[i]:
                del rows[i]
    cx = ChainComplex(gens, diff)
    cx.check()
    return cx


def _edge_images(lab, nc, fwd, c1, c2, t1, t2):
    """Merge ``m`` or split ``Delta`` on labels; bit 1 is ``x = v-``."""
    base = 0
    for ci in range(nc):
        if ci not in (c1, c2) and lab >> ci & 1:
            base |= 1 << fwd[ci]
    if c1 != c2:
        x1, x2 = lab >> c1 & 1, lab >> c2 & 1
        if x1 and x2:
            return []
        tgt = fwd[c1]
        return [(base | ((x1 | x2) << tgt), 1)]
    if lab >> c1 & 1:
        return [(base | (1 << t1) | (1 << t2), 1)]
    return [(base | (1 << t1), 1), (base | (1 << t2), 1)]


def scan_complex(d: LinkDiagram, *, check: bool = False) -> ChainComplex:
    """Complex produced by local scanning with delooping and cancellation."""
    tc = scan(d.crossings, d.unknots, check=check)
    ids = sorted(tc.objs, key=lambda i: (tc.objs[i][1], i))
    gens: dict[int, list] = {}
    where = {}
    for i in ids:
        _, r, q = tc.objs[i]
        h2 = d.n - 2 * r
        lst = gens.setdefault(h2, [])
        where[i] = (h2, len(lst))
        lst.append((i, r - q))
    diff: dict[int, dict[int, dict[int, Fraction]]] = {}
    for s, row in tc.d.items():
        h2, a = where[s]
        for t, f in row.items():
            v = f.get(0, 0)
            if v:
                diff.setdefault(h2, {}).setdefault(a, {})[where[t][1]] = Fraction(v)
    cx = ChainComplex(gens, diff)
    cx.check()
    return cx


def simplify_scan(c: ChainComplex) -> ChainComplex:
    """Cancel invertible entries until the differential vanishes.

    Pivot order: lowest source h-degree, then lowest source and target index.
    Over a field every nonzero entry is invertible, so the result has zero
    differential and its generators are a homology basis.
    """
    gens = {h: list(v) for h, v in c.gens.items()}
    out = {h: {i: dict(r) for i, r in rows.items()} for h, rows in c.diff.items()}
    inn: dict[int, dict[int, set]] = {}
    for h, rows in out.items():
        col = inn.setdefault(h - 2, {})
        for i, r in rows.items():
            for j in r:
                col.setdefault(j, set()).add(i)
    alive = {h: set(range(len(v))) for h, v in gens.items()}
    for h in sorted(out):
        rows = out[h]
        lower = h - 2
        while True:
            pivot = next(((i, min(rows[i])) for i in sorted(rows) if rows[i]), None)
            if pivot is None:
                break
            b, cidx = pivot
            lam = rows[b][cidx]
            ins = sorted(inn.get(lower, {}).get(cidx, set()) - {b})
            outs = {e: v for e, v in out.get(lower, {}).get(cidx, {}).items()}
            higher = sorted(inn.get(h, {}).get(b, set()))
            # a -> cidx entries (a at h) pick up - d(a,c) d(b,e) / lam for e at h-2 ... via b's row
            for a in ins:
                fa = rows[a].pop(cidx)
                for e, v in rows[b].items():
                    if e == cidx:
                        continue
                    nv = rows[a].get(e, 0) - fa * v / lam
                    if nv:
                        if e not in rows[a]:
                            inn[lower][e].add(a)
                        rows[a][e] = nv
                    else:
                        rows[a].pop(e, None)
                        inn[lower][e].discard(a)
            # drop b (at h) and cidx (at h-2)
            for e in rows[b]:
                inn[lower][e].discard(b)
            del rows[b]
            alive[h].discard(b)
            alive[lower].discard(cidx)
            inn.get(lower, {}).pop(cidx, None)
            for e in outs:
                inn[lower - 2][e].discard(cidx)
            out.get(lower, {}).pop(cidx, None)
            for a in higher:
                out[h + 2][a].pop(b, None)
    new_gens: dict[int, list] = {}
    remap: dict[int, dict[int, int]] = {}
    for h, lst in gens.items():
        keep = sorted(alive[h])
        remap[h] = {old: k for k, old in enumerate(keep)}
        if keep:
            new_gens[h] = [lst[i] for i in keep]
    new_diff: dict = {}
    for h, rows in out.items():
        for i, r in rows.items():
            if i in remap[h] and r:
                new_diff.setdefault(h, {})[remap[h][i]] = {remap[h - 2][j]: v for j, v in r.items()}
    cx = ChainComplex(new_gens, new_diff)
    cx.check()
    return cx


def _rank(rows: list[dict[int, Fraction]]) -> int:
    rows = [dict(r) for r in rows if r]
    rank = 0
    while rows:
        piv = rows.pop()
        col = min(piv)
        pv = piv[col]
        rank += 1
        nxt = []
        for r in rows:
            if col in r:
                f = r[col] / pv
                for k, v in piv.items():
                    nv = r.get(k, 0) - f * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
            if r:
                nxt.append(r)
        rows = nxt
    return rank


def homology_table(c: ChainComplex) -> KhTable:
    """Bigraded Betti numbers by exact rank per (h, q) block."""
    out: dict[tuple[int, int], int] = {}
    for h2, lst in c.gens.items():
        for _, q in lst:
            out[h2, q] = out.get((h2, q), 0) + 1
    for h2, rows in c.diff.items():
        blocks: dict[int, list] = {}
        for i, r in rows.items():
            blocks.setdefault(c.gens[h2][i][1], []).append(r)
        for q, rs in blocks.items():
            rk = _rank(rs)
            out[h2, q] -= rk
            out[h2 - 2, q + 1] -= rk
    return KhTable({k: v for k, v in out.items() if v})


# -- results ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KhResult:
    table: KhTable
    shifts_applied: tuple[int, int] = (0, 0)  # (doubled h, q)
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "table": self.table.to_json(),
            "shifts": list(self.shifts_applied),
            "provenance": dict(sorted(self.provenance.items())),
        }


def homology(x: ChainComplex | LinkDiagram, *, check: bool = False) -> KhResult:
    """Homology of a complex, or of a diagram via scanning."""
    if isinstance(x, LinkDiagram):
        c = scan_complex(x, check=check)
        return KhResult(homology_table(c), (0, 0), {"diagram": x.key(), "n": x.n})
    return KhResult(homology_table(x))


# -- twisted cables ---------------------------------------------------------------------


@dataclass(frozen=True)
class TwistedDiagram:
    """Cabled diagram whose projector slots hold ``k`` negative full twists."""

    diagram: LinkDiagram
    base: LinkDiagram
    N: int
    k: int
    components: tuple[int, ...]
    n_hat: int  # single-line crossings, twists included
    y_hat: int  # B-circles of the twisted cable
    twist_shift: tuple[int, int]  # (doubled h, q) added on top of the untwisted cable shift

    def to_json(self) -> dict:
        return {
            "base": self.base.key(), "N": self.N, "k": self.k,
            "components": list(self.components), "n_hat": self.n_hat, "y_hat": self.y_hat,
            "twist_shift": list(self.twist_shift), "pd": self.diagram.render_pd(),
        }


def insert_twist_projector(d: LinkDiagram, component: int | None, N: int, k: int) -> TwistedDiagram:
    """``N``-cable of ``d`` with ``k`` negative full twists on the chosen component (all if None)."""
    if k < 1:
        raise ValueError("twist depth k must be at least 1")
    if N < 1:
        raise ValueError("cable multiplicity must be at least 1")
    ncomp = d.n_components
    comps = tuple(range(ncomp)) if component is None else (component,)
    for c in comps:
        if not 0 <= c < ncomp:
            raise ValueError(f"no component {c}")
    edge_comps = [c for c in comps if c < len(d.components)]
    unknot_comps = [c for c in comps if c >= len(d.components)]
    word = full_twist(N, -1) * k
    if d.components:
        cab, cmap = cable_with_map(LinkDiagram(d.crossings, 0), N)
        groups = [(cmap.strands[d.components[c][0]], word) for c in edge_comps]
        out = insert_braids(cab, groups) if word else cab
    else:
        out = LinkDiagram([], 0)
    for _ in unknot_comps:
        out = disjoint_union(out, braid_closure(BraidWord(N, tuple(word))) if word else LinkDiagram([], N))
    plain = d.unknots - len(unknot_comps)
    if plain:
        out = disjoint_union(out, LinkDiagram([], plain * N))
    y = b_state(out).g
    shift = (out.n - N * N * d.n, y - N * b_state(d).g)
    return TwistedDiagram(out, d, N, k, comps, out.n, y, shift)


def shift_of(d: LinkDiagram | TwistedDiagram) -> tuple[int, int]:
    """(doubled h, q) shift: single-line crossing count and B-circle count."""
    if isinstance(d, TwistedDiagram):
        return d.n_hat, d.y_hat
    return d.n, b_state(d).g


def shifted_homology(d: LinkDiagram | TwistedDiagram, N: int = 1, *, k: int | None = None) -> KhResult:
    """``h^(n/2) q^y H`` for a diagram, or for a twist-approximated ``N``-cable."""
    if isinstance(d, LinkDiagram) and N > 1:
        if k is None:
            raise ValueError("colors above 1 need a twist depth k")
        d = insert_twist_projector(d, None, N, k)
    diagram = d.diagram if isinstance(d, TwistedDiagram) else d
    h2, q = shift_of(d)
    base = homology(diagram)
    prov = {"diagram": diagram.key(), "N": N if isinstance(d, LinkDiagram) else d.N,
            "k": d.k if isinstance(d, TwistedDiagram) else 0}
    return KhResult(base.table.shift(h2, q), (h2, q), prov)


def stabilization_front(lower: KhTable, upper: KhTable) -> int | None:
    """Smallest doubled h-degree where the tables differ (None if identical)."""
    rows = sorted(set(lower.rows()) | set(upper.rows()))
    for r in rows:
        if lower.row(r) != upper.row(r):
            return r
    return None


@dataclass
class TwistSeries:
    """Shifted tables for twist depths ``k_min..k_max`` and the fronts between neighbours."""

    tables: dict[int, KhTable]
    fronts: dict[int, int | None]  # k -> front between k and k+1

    def front(self, k: int) -> float:
        f = self.fronts.get(k)
        return float("inf") if f is None else f

    def monotone(self) -> bool:
        ks = sorted(self.fronts)
        return all(self.front(a) <= self.front(b) for a, b in zip(ks, ks[1:]))

    def to_json(self) -> dict:
        return {
            "tables": {str(k): t.to_json() for k, t in sorted(self.tables.items())},
            "fronts": {str(k): f for k, f in sorted(self.fronts.items())},
            "monotone": self.monotone(),
        }


def twist_series(d: LinkDiagram, N: int, ks: Iterable[int]) -> TwistSeries:
    ks = sorted(set(ks))
    need = sorted(set(ks) | {ks[-1] + 1})
    tables = {k: shifted_homology(d, N, k=k).table for k in need}
    fronts = {k: stabilization_front(tables[k], tables[k + 1]) for k in ks}
    return TwistSeries({k: tables[k] for k in ks}, fronts)


# -- bound verification -------------------------------------------------------------------


@dataclass
class BoundCheck:
    name: str
    passed: bool
    violations: list[tuple[int, int]]  # (doubled h, q)
    applicable: bool = True

    def to_json(self) -> dict:
        return {"name": self.name, "pass": self.passed, "applicable": self.applicable,
                "violations": [list(v) for v in self.violations]}


@dataclass
class BoundReport:
    checks: list[BoundCheck]
    n_used: int
    adequate: bool
    front: int | None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.applicable)

    def by_name(self, name: str) -> BoundCheck:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        return {"bounds": [c.to_json() for c in self.checks], "n_used": self.n_used,
                "adequate": self.adequate, "front": self.front, "pass": self.passed}


def verify_bounds(r: KhResult, d: LinkDiagram, N: int = 1, *, n_min: int | None = None,
                  front: int | None = None) -> BoundReport:
    """Scan a shifted table for cells the degree bounds forbid.

    Only rows with doubled h-degree below ``front`` are examined (all rows when
    ``front`` is None).  For B-inadequate ``d`` the weakened bounds with the
    loop-strut count replace the adequate ones, and the sharp statements on
    the diagonal are not applicable.
    """
    adequate, n_i = adequacy_report(b_state(d))
    n_used = d.n if n_min is None else n_min
    cells = [(i2, j, v) for (i2, j), v in r.table.entries.items()
             if v and (front is None or i2 < front)]

    def scan_cells(name, bad, applicable=True):
        viol = sorted((i2, j) for i2, j, _ in cells if bad(Fraction(i2, 2), j)) if applicable else []
        return BoundCheck(name, not viol, viol, applicable)

    checks = [scan_cells("bd1", lambda i, j: i < 0)]
    if adequate:
        checks.append(scan_cells("bd2", lambda i, j: j < -i / 2 - Fraction(n_used, 2)))
        checks.append(scan_cells("bd3", lambda i, j: j < -i))
        checks.append(scan_cells("bd4", lambda i, j: j == -i and i != 0))
        applies = front is None or front > 0
        ok = not applies or r.table[(0, 0)] == 1
        checks.append(BoundCheck("endi", ok, [] if ok else [(0, 0)], applies))
    else:
        checks.append(scan_cells("bd2a", lambda i, j: j < -i / 2 - Fraction(d.n, 2) - Fraction(3 * n_i, 2)))
        checks.append(scan_cells("bd3a", lambda i, j: j < -i - n_i))
    h_min = r.table.min_h2()
    h_hat = r.shifts_applied[0]
    raw_min = None if h_min is None else h_min - h_hat
    smfr_ok = raw_min is None or raw_min >= -h_hat
    checks.append(BoundCheck("smfr", smfr_ok, [] if smfr_ok else [(h_min, 0)]))
    return BoundReport(checks, n_used, adequate, front)


def min_degree_bound_holds(c: ChainComplex, n_hat: int) -> bool:
    """Lowest nonzero homology h-degree is at least ``-n_hat/2`` (doubled: ``-n_hat``)."""
    t = homology_table(c)
    return t.min_h2() is None or t.min_h2() >= -n_hat


# -- tail homology -----------------------------------------------------------------------


@dataclass
class TailHomologyReport:
    tables: dict[int, KhTable]
    fronts: dict[int, int | None]
    comparisons: list[dict]
    estimate: KhTable
    certified_max_i2: int | None
    certified: bool
    notes: list[str]

    def to_json(self) -> dict:
        return {
            "tables": {str(N): t.to_json() for N, t in sorted(self.tables.items())},
            "fronts": {str(N): f for N, f in sorted(self.fronts.items())},
            "comparisons": self.comparisons,
            "estimate": self.estimate.to_json(),
            "certified_max_i2": self.certified_max_i2,
            "certified": self.certified,
            "notes": self.notes,
        }


def _cap(*fronts) -> float:
    return min((float("inf") if f is None else f) for f in fronts)


def colored_table(d: LinkDiagram, N: int, k: int) -> tuple[KhTable, int | None]:
    """Shifted table of the ``N``-colored diagram and its measured front (None = exact)."""
    if N == 1:
        return shifted_homology(d).table, None
    s = twist_series(d, N, [k])
    return s.tables[k], s.fronts[k]


def tail_homology_estimate(d: LinkDiagram, N_list: Iterable[int], k: int) -> TailHomologyReport:
    """Compare shifted tables of consecutive colors on rows ``i <= N - 1`` below the fronts."""
    Ns = sorted(set(N_list))
    tables, fronts = {}, {}
    for N in Ns:
        tables[N], fronts[N] = colored_table(d, N, k)
    if len(Ns) < 2:
        N = Ns[0]
        return TailHomologyReport(tables, fronts, [], tables[N], None, False,
                                  ["no comparison possible with a single color"])
    comparisons = []
    ok = True
    bound = None
    for a, b in zip(Ns, Ns[1:]):
        top = min(2 * (a - 1), _cap(fronts[a], fronts[b]) - 1)
        rows = sorted(r for r in set(tables[a].rows()) | set(tables[b].rows()) if r <= top)
        agree = all(tables[a].row(r) == tables[b].row(r) for r in rows)
        comparisons.append({"N": a, "N_next": b, "max_i2": top if top != float("inf") else None,
                            "rows": rows, "agree": agree})
        ok = ok and agree
        bound = top
    last = Ns[-1]
    est = tables[last].restrict_rows(int(bound)) if bound is not None and bound != float("inf") else tables[last]
    notes = [] if ok else ["shifted tables disagree on certified rows"]
    return TailHomologyReport(tables, fronts, comparisons, est,
                              int(bound) if bound is not None and bound != float("inf") else None, ok, notes)


def diagonal_euler(table: KhTable, max_i2: int, n_used: int) -> dict[int, int] | None:
    """Coefficients ``sum_{i+j=m} (-1)^j dim`` for anti-diagonals fully inside rows ``<= max_i2``.

    A cell on anti-diagonal ``m`` can only be nonzero for ``i <= 2m + n`` (the
    bound on ``j`` from below), so ``m`` is fully certified once
    ``2 (2m + n) <= max_i2`` in doubled units.
    """
    ms = {}
    chi = euler_char(table.restrict_rows(max_i2))
    for k, c in chi.terms.items():
        ms[k // 2] = c
    top_m = Fraction(max_i2 - 2 * n_used, 4)
    return {m: c for m, c in ms.items() if m <= top_m}


# -- crossing vs projector -------------------------------------------------------------------


def cable_braid(word: BraidWord, N: int) -> list[int]:
    """Letters of the ``N``-cable of a braid word (blackboard framing)."""
    out = []
    for g in word.letters:
        j = abs(g)
        s = 1 if g > 0 else -1
        for t in range(N):
            for u in range(N):
                out.append(s * (j * N - t + u))
    return out


@dataclass
class CrossingProjectorReport:
    N: int
    k: int
    rows_checked: list[int]
    agree: bool
    max_i2: int | None
    fronts: dict[str, int | None]
    uncertified_rows: list[int]
    tables: dict[str, KhTable]

    def to_json(self) -> dict:
        return {"N": self.N, "k": self.k, "rows_checked": self.rows_checked, "agree": self.agree,
                "max_i2": self.max_i2, "fronts": self.fronts, "uncertified_rows": self.uncertified_rows,
                "tables": {k: v.to_json() for k, v in sorted(self.tables.items())}}


def _offset(letters, by: int) -> list[int]:
    return [(abs(x) + by) * (1 if x > 0 else -1) for x in letters]


def _slot_diagrams(word: BraidWord, slot: int, N: int, k: int) -> tuple[LinkDiagram, LinkDiagram]:
    g = word.letters[slot]
    j = abs(g)
    pre = BraidWord(word.strands, word.letters[:slot])
    post = BraidWord(word.strands, word.letters[slot + 1:])
    twist_n = full_twist(N, -1) * k
    guard = _offset(twist_n, (j - 1) * N) + _offset(twist_n, j * N)
    crossing = cable_braid(BraidWord(word.strands, (g,)), N)
    proj = _offset(full_twist(2 * N, -1) * k, (j - 1) * N)
    head = cable_braid(pre, N) + guard
    tail = cable_braid(post, N)
    m = word.strands * N
    d_cross = braid_closure(BraidWord(m, tuple(head + crossing + tail)))
    d_proj = braid_closure(BraidWord(m, tuple(head + proj + tail)))
    return d_cross, d_proj


def crossing_vs_projector_check(word: BraidWord, N: int, k: int, *, slot: int = 0) -> CrossingProjectorReport:
    """A cabled crossing versus a ``2N`` projector in its place, rows ``i <= 2N - 2``.

    Both projectors are approximated by twists of depth ``k`` (the two ``N``
    projectors guard the crossing's incoming cables).  Fronts come from depth
    ``k + 1``; rows at or above a front are reported as uncertified.
    """
    tabs, fr = {}, {}
    for name, idx in (("crossing", 0), ("projector", 1)):
        t_k = shifted_homology(_slot_diagrams(word, slot, N, k)[idx]).table
        t_k1 = shifted_homology(_slot_diagrams(word, slot, N, k + 1)[idx]).table
        tabs[name], fr[name] = t_k, stabilization_front(t_k, t_k1)
    top = min(2 * (2 * N - 2), _cap(fr["crossing"], fr["projector"]) - 1)
    all_rows = sorted(set(tabs["crossing"].rows()) | set(tabs["projector"].rows()))
    rows = [r for r in all_rows if r <= top]
    agree = all(tabs["crossing"].row(r) == tabs["projector"].row(r) for r in rows)
    unc = [r for r in all_rows if r <= 2 * (2 * N - 2) and r > top]
    return CrossingProjectorReport(N, k, rows, agree, None if top == float("inf") else int(top),
                                   fr, unc, tabs)
