"""Framed link diagrams in planar-diagram (PD) form.

A crossing ``X[a,b,c,d]`` lists its four edge labels counterclockwise,
starting from the incoming under-strand (the KnotTheory convention).  The
under-strand runs ``a -> c``; the crossing is positive when the over-strand
runs ``d -> b``.  Crossing-free circles are carried separately as a count of
``U`` components, since a PD code cannot express them.
"""

from __future__ import annotations

import hashlib
import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Sequence


class DiagramError(ValueError):
    """Invalid diagram data (bad labels, orientation conflict, non-planar code)."""


class ParseError(DiagramError):
    def __init__(self, message: str, line: int = 1, col: int = 1):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


Crossing = tuple[int, int, int, int]


class LinkDiagram:
    """Validated, oriented PD diagram with blackboard framing.

    Args:
        crossings: 4-tuples of edge labels.
        unknots: number of crossing-free circle components.
        strict: if False, crossings whose under-strand is oriented ``c -> a``
            are rotated by two slots instead of being rejected.
    """

    __slots__ = ("crossings", "unknots", "signs", "components", "edge_tail", "edge_head", "_key")

    def __init__(
        self,
        crossings: Iterable[Sequence[int]],
        unknots: int = 0,
        *,
        strict: bool = True,
        head_hint: dict[int, tuple[int, int]] | None = None,
    ):
        xs = [tuple(int(v) for v in x) for x in crossings]
        for x in xs:
            if len(x) != 4:
                raise DiagramError(f"crossing {x} does not have 4 slots")
        if unknots < 0:
            raise DiagramError("negative unknot count")
        self.unknots = int(unknots)
        occ = _occurrences(xs)
        xs, comps = _orient(xs, occ, strict, head_hint or {})
        occ = _occurrences(xs)
        _check_planar(xs, occ)
        self.crossings: tuple[Crossing, ...] = tuple(xs)  # type: ignore[assignment]
        self.components: tuple[tuple[int, ...], ...] = tuple(tuple(e for e, _ in c) for c in comps)
        tail: dict[int, tuple[int, int]] = {}
        head: dict[int, tuple[int, int]] = {}
        for comp in comps:
            for e, (x, s) in comp:
                head[e] = (x, s)
                o1, o2 = occ[e]
                tail[e] = o1 if o2 == (x, s) else o2
        self.edge_tail = tail
        self.edge_head = head
        signs = []
        for i, x in enumerate(self.crossings):
            # positive iff the over-strand enters through slot d
            signs.append(1 if head[x[3]] == (i, 3) else -1)
        self.signs: tuple[int, ...] = tuple(signs)
        self._key: str | None = None

    # -- basic data -----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def writhe(self) -> int:
        return sum(self.signs)

    @property
    def n_components(self) -> int:
        return len(self.components) + self.unknots

    def edges(self) -> list[int]:
        return sorted({e for x in self.crossings for e in x})

    def is_crossing_free(self) -> bool:
        return not self.crossings

    def component_of_edge(self) -> dict[int, int]:
        return {e: ci for ci, comp in enumerate(self.components) for e in comp}

    def render_pd(self) -> str:
        parts = [f"X[{a},{b},{c},{d}]" for a, b, c, d in self.crossings]
        parts += ["U"] * self.unknots
        return " ".join(parts)

    def key(self) -> str:
        """Content hash of the canonical PD rendering."""
        if self._key is None:
            self._key = hashlib.sha256(self.relabeled().render_pd().encode()).hexdigest()[:16]
        return self._key

    def relabeled(self) -> "LinkDiagram":
        """Copy with labels renumbered 1..2n in order of first appearance."""
        mapping: dict[int, int] = {}
        for x in self.crossings:
            for e in x:
                if e not in mapping:
                    mapping[e] = len(mapping) + 1
        return LinkDiagram([tuple(mapping[e] for e in x) for x in self.crossings], self.unknots)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LinkDiagram)
            and self.crossings == other.crossings
            and self.unknots == other.unknots
        )

    def __hash__(self) -> int:
        return hash((self.crossings, self.unknots))

    def __repr__(self) -> str:
        return f"LinkDiagram({self.render_pd() or 'empty'!r})"

    def fresh_label(self) -> int:
        return max((e for x in self.crossings for e in x), default=0) + 1


# -- construction internals -----------------------------------------------------

def _occurrences(xs: list[tuple[int, ...]]) -> dict[int, list[tuple[int, int]]]:
    occ: dict[int, list[tuple[int, int]]] = {}
    for i, x in enumerate(xs):
        for s, e in enumerate(x):
            occ.setdefault(e, []).append((i, s))
    for e, where in occ.items():
        if len(where) != 2:
            raise DiagramError(f"edge label {e} occurs {len(where)} times (expected 2)")
    return occ


def _trace(xs, occ, start_edge, start_occ):
    """Follow a strand; yields (edge, arriving occurrence) around the cycle."""
    out = []
    e = start_edge
    o1, o2 = occ[e]
    arrive = o2 if start_occ == o1 else o1
    while True:
        out.append((e, arrive))
        x, s = arrive
        leave = (x, (s + 2) % 4)
        e = xs[x][leave[1]]
        a, b = occ[e]
        arrive = b if a == leave else a
        if (e, arrive) == out[0]:
            return out


def _orient(xs, occ, strict, hint):
    seen: set[int] = set()
    comps = []
    xs = [list(x) for x in xs]
    for e0 in sorted(occ):
        if e0 in seen:
            continue
        fwd = _trace(xs, occ, e0, occ[e0][0])
        unders = [(x, s) for _, (x, s) in fwd if s in (0, 2)]
        hinted = [(e, o) for e, o in fwd if e in hint]
        if unders:
            reverse = unders[0][1] == 2
        elif hinted:
            # over-only component: follow the caller's known direction
            reverse = hint[hinted[0][0]] != hinted[0][1]
        else:
            up = sum(1 for (e, _), (f, _) in zip(fwd, fwd[1:] + fwd[:1]) if f == e + 1)
            down = sum(1 for (e, _), (f, _) in zip(fwd, fwd[1:] + fwd[:1]) if e == f + 1)
            reverse = down > up
        if reverse:
            start = fwd[0][1]
            cyc = _trace(xs, occ, e0, start)
        else:
            cyc = fwd
        comps.append(cyc)
        seen.update(e for e, _ in cyc)
    # every under passage must arrive at slot 0
    rotate = set()
    for cyc in comps:
        for _, (x, s) in cyc:
            if s == 2:
                rotate.add(x)
    if rotate:
        if strict:
            bad = min(rotate)
            raise DiagramError(
                f"crossing {bad} {tuple(xs[bad])}: under-strand orientation conflicts with slot convention"
            )
        for x in rotate:
            a, b, c, d = xs[x]
            xs[x] = [c, d, a, b]
        xs = [tuple(x) for x in xs]
        occ = _occurrences(xs)
        hint = {e: (x, (s + 2) % 4 if x in rotate else s) for e, (x, s) in hint.items()}
        return _orient(xs, occ, True, hint)
    xs = [tuple(x) for x in xs]
    comps.sort(key=lambda c: min(e for e, _ in c))
    # rotate each cycle to start at its smallest label
    out = []
    for c in comps:
        k = min(range(len(c)), key=lambda i: c[i][0])
        out.append(c[k:] + c[:k])
    return xs, out


def _check_planar(xs, occ) -> None:
    """Euler characteristic check on the 4-valent graph with the PD rotation."""
    if not xs:
        return
    darts = [(i, s) for i in range(len(xs)) for s in range(4)]

    def other_end(d):
        e = xs[d[0]][d[1]]
        a, b = occ[e]
        return b if a == d else a

    seen = set()
    faces = 0
    for d in darts:
        if d in seen:
            continue
        faces += 1
        cur = d
        while cur not in seen:
            seen.add(cur)
            x, s = other_end(cur)
            cur = (x, (s - 1) % 4)
    parent = list(range(len(xs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for (x1, _), (x2, _) in occ.values():
        parent[find(x1)] = find(x2)
    pieces = len({find(i) for i in range(len(xs))})
    if faces != len(xs) + 2 * pieces:
        raise DiagramError(f"PD code is not planar (faces={faces}, expected {len(xs) + 2 * pieces})")


# -- parsing ------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(X)\s*\[\s*([^\]]*)\]|(U)\b|(PD)\s*\[|(\])|(,))")


def parse_pd(text: str) -> LinkDiagram:
    """Parse ``X[a,b,c,d] ... U`` tokens; ``#`` starts a comment."""
    crossings: list[tuple[int, int, int, int]] = []
    unknots = 0
    for lineno, raw in enumerate(text.splitlines() or [""], start=1):
        line = raw.split("#", 1)[0]
        pos = 0
        while pos < len(line):
            if line[pos:].strip() == "":
                break
            m = _TOKEN.match(line, pos)
            if not m:
                raise ParseError(f"unexpected text {line[pos:].strip()[:20]!r}", lineno, pos + 1)
            if m.group(1):
                body = m.group(2)
                try:
                    labels = tuple(int(v) for v in body.split(","))
                except ValueError:
                    raise ParseError(f"non-integer label in X[{body}]", lineno, m.start(1) + 1) from None
                if len(labels) != 4:
                    raise ParseError(f"X[{body}] must have 4 labels", lineno, m.start(1) + 1)
                crossings.append(labels)  # type: ignore[arg-type]
            elif m.group(3):
                unknots += 1
            pos = m.end()
    if not crossings and not unknots:
        raise ParseError("empty diagram", 1, 1)
    try:
        return LinkDiagram(crossings, unknots)
    except ParseError:
        raise
    except DiagramError as exc:
        raise ParseError(str(exc), 1, 1) from None


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.strands < 1:
            raise DiagramError("braid needs at least one strand")
        for g in self.letters:
            if g == 0 or abs(g) >= self.strands:
                raise DiagramError(f"generator {g} out of range for {self.strands} strands")

    def render(self) -> str:
        return " ".join([f"s:{self.strands}"] + [str(g) for g in self.letters])


def parse_braid(text: str) -> BraidWord:
    """Parse ``s:k g1 g2 ...`` with signed 1-based generator indices."""
    text = text.split("#", 1)[0].strip()
    if text.upper().startswith("BRAID"):
        text = text[5:].strip()
    toks = text.split()
    if not toks or not toks[0].startswith("s:"):
        raise ParseError("braid must start with 's:<strands>'", 1, 1)
    try:
        strands = int(toks[0][2:])
        letters = tuple(int(t) for t in toks[1:])
    except ValueError:
        raise ParseError(f"bad braid token in {text!r}", 1, 1) from None
    try:
        return BraidWord(strands, letters)
    except DiagramError as exc:
        raise ParseError(str(exc), 1, 1) from None


def braid_crossing(sign: int, in_left: int, in_right: int, out_left: int, out_right: int) -> Crossing:
    """PD crossing for a braid generator on upward strands at adjacent positions."""
    if sign > 0:
        return (in_right, out_right, out_left, in_left)
    return (in_left, in_right, out_right, out_left)


def braid_closure(word: BraidWord) -> LinkDiagram:
    counter = itertools.count(1)
    bottom = [next(counter) for _ in range(word.strands)]
    cur = list(bottom)
    xs = []
    for g in word.letters:
        j = abs(g) - 1
        ol, orr = next(counter), next(counter)
        xs.append(braid_crossing(1 if g > 0 else -1, cur[j], cur[j + 1], ol, orr))
        cur[j], cur[j + 1] = ol, orr
    return _close_up(xs, dict(zip(cur, bottom)), extra_unknots=0)


def _close_up(xs, identify: dict[int, int], extra_unknots: int) -> LinkDiagram:
    """Merge labels ``a ~ identify[a]`` and turn label-free loops into unknots."""
    uf = _UnionFind()
    for a, b in identify.items():
        uf.union(a, b)
    used = {e for x in xs for e in x}
    loops = {uf.find(e) for e in identify} | {uf.find(e) for e in identify.values()}
    loops -= {uf.find(e) for e in used}
    xs2 = [tuple(uf.find(e) for e in x) for x in xs]
    return LinkDiagram(_compact(xs2), extra_unknots + len(loops), strict=False)


def _compact(xs) -> list[tuple[int, int, int, int]]:
    mapping: dict[int, int] = {}
    out = []
    for x in xs:
        row = []
        for e in x:
            if e not in mapping:
                mapping[e] = len(mapping) + 1
            row.append(mapping[e])
        out.append(tuple(row))
    return out


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, a):
        p = self.parent.setdefault(a, a)
        if p != a:
            p = self.parent[a] = self.find(p)
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller representative for determinism
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


# -- transformations -----------------------------------------------------------------

@dataclass(frozen=True)
class CableMap:
    """Where the strands of each original edge ended up after cabling.

    ``strands[e]`` lists the cable edge labels of original edge ``e`` from the
    left of its direction of travel to the right; ``unknot_groups`` lists, per
    original crossing-free component, how many parallel circles it produced.
    """

    N: int
    strands: dict[int, tuple[int, ...]]
    unknot_groups: tuple[int, ...]
    component_strands: tuple[tuple[int, ...], ...]


def cable(d: LinkDiagram, N: int) -> LinkDiagram:
    """Blackboard ``N``-cable: each crossing becomes an ``N x N`` grid."""
    return cable_with_map(d, N)[0]


def cable_with_map(d: LinkDiagram, N: int) -> tuple[LinkDiagram, CableMap]:
    if N < 1:
        raise ValueError("cable multiplicity must be >= 1")
    if N == 1:
        return d, CableMap(1, {e: (e,) for e in d.edges()}, (1,) * d.unknots,
                           tuple((e,) for e in range(0)))
    labels: dict[tuple, int] = {}

    def lab(key) -> int:
        if key not in labels:
            labels[key] = len(labels) + 1
        return labels[key]

    xs = []
    hint: dict[int, tuple[int, int]] = {}
    for ci, ((a, b, c, dd), sign) in enumerate(zip(d.crossings, d.signs)):
        def idx_side(v):
            return N - 1 - v if sign > 0 else v

        for v in range(N):
            for u in range(N):
                below = lab(("E", a, u)) if v == 0 else lab(("V", ci, u, v))
                above = lab(("E", c, u)) if v == N - 1 else lab(("V", ci, u, v + 1))
                right = lab(("E", b, idx_side(v))) if u == N - 1 else lab(("H", ci, v, u + 1))
                left = lab(("E", dd, idx_side(v))) if u == 0 else lab(("H", ci, v, u))
                hint[left if sign > 0 else right] = (len(xs), 3 if sign > 0 else 1)
                xs.append((below, right, above, left))
    strands = {e: tuple(labels[("E", e, i)] for i in range(N)) for e in d.edges()}
    out = LinkDiagram(xs, d.unknots * N, strict=False, head_hint=hint)
    return out, CableMap(N, strands, (N,) * d.unknots, ())


def insert_braid(d: LinkDiagram, edges: Sequence[int], letters: Sequence[int]) -> LinkDiagram:
    """Cut parallel co-oriented edges and splice in a braid.

    ``edges`` lists the strands from left to right relative to their common
    direction of travel; braid generators use 1-based positions in that order.
    """
    return insert_braids(d, [(edges, letters)])


def insert_braids(d: LinkDiagram, groups: Sequence[tuple[Sequence[int], Sequence[int]]]) -> LinkDiagram:
    """Splice several braids at once; edge groups must be disjoint."""
    used: set[int] = set()
    for edges, letters in groups:
        m = len(edges)
        if len(set(edges)) != m or used & set(edges):
            raise DiagramError("braid insertion edges must be distinct")
        used |= set(edges)
        for g in letters:
            if g == 0 or abs(g) >= m:
                raise DiagramError(f"generator {g} out of range for {m} strands")
    counter = itertools.count(d.fresh_label())
    xs = [list(x) for x in d.crossings]
    identify: dict[int, int] = {}
    for edges, letters in groups:
        cur = []
        outs = []
        for e in edges:
            hx, hs = d.edge_head[e]
            new_in, new_out = next(counter), next(counter)
            tx, ts = d.edge_tail[e]
            xs[tx][ts] = new_in
            xs[hx][hs] = new_out
            cur.append(new_in)
            outs.append(new_out)
        for g in letters:
            j = abs(g) - 1
            ol, orr = next(counter), next(counter)
            xs.append(list(braid_crossing(1 if g > 0 else -1, cur[j], cur[j + 1], ol, orr)))
            cur[j], cur[j + 1] = ol, orr
        identify.update(zip(cur, outs))
    return _close_up([tuple(x) for x in xs], identify, d.unknots)


def full_twist(strands: int, sign: int = -1) -> list[int]:
    """Braid word of the full twist on ``strands`` strands (``sign`` = -1 for negative)."""
    return [sign * g for _ in range(strands) for g in range(1, strands)]


def add_kink(d: LinkDiagram, component: int, sign: int) -> LinkDiagram:
    """Add a Reidemeister-1 curl of the given sign to a component.

    Negative curls put the loop on a B-smoothing arc, so they keep B-adequate
    diagrams B-adequate; positive curls are B-inadequate.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if component < 0 or component >= d.n_components:
        raise DiagramError(f"no component {component} (diagram has {d.n_components})")
    xs = [list(x) for x in d.crossings]
    fresh = d.fresh_label()
    if component >= len(d.components):
        e, loop = fresh, fresh + 1
        xs.append([e, loop, loop, e] if sign < 0 else [e, e, loop, loop])
        return LinkDiagram([tuple(x) for x in xs], d.unknots - 1, strict=False)
    e = d.components[component][0]
    hx, hs = d.edge_head[e]
    out, loop = fresh, fresh + 1
    xs[hx][hs] = out
    xs.append([e, loop, loop, out] if sign < 0 else [e, out, loop, loop])
    return LinkDiagram([tuple(x) for x in xs], d.unknots, strict=False)


def b_splice(d: LinkDiagram, crossing: int) -> LinkDiagram:
    """Replace one crossing by its B-smoothing (joins slots a-d and b-c)."""
    a, b, c, dd = d.crossings[crossing]
    xs = [x for i, x in enumerate(d.crossings) if i != crossing]
    return _close_up(xs, {a: dd, b: c}, d.unknots)


def a_splice(d: LinkDiagram, crossing: int) -> LinkDiagram:
    """Replace one crossing by its A-smoothing (joins slots a-b and c-d)."""
    a, b, c, dd = d.crossings[crossing]
    xs = [x for i, x in enumerate(d.crossings) if i != crossing]
    return _close_up(xs, {a: b, c: dd}, d.unknots)


def double_crossing(d: LinkDiagram, crossing: int) -> LinkDiagram:
    """Replace a crossing by two twisted crossings whose struts are parallel."""
    a, b, c, dd = d.crossings[crossing]
    m1 = d.fresh_label()
    m2 = m1 + 1
    xs = [x for i, x in enumerate(d.crossings) if i != crossing]
    xs += [(a, b, m2, m1), (m1, m2, c, dd)]
    return LinkDiagram(_compact(xs), d.unknots, strict=False)


def mirror(d: LinkDiagram) -> LinkDiagram:
    xs = [(b, c, dd, a) for a, b, c, dd in d.crossings]
    hint = {e: (x, (s - 1) % 4) for e, (x, s) in d.edge_head.items()}
    return LinkDiagram(xs, d.unknots, strict=False, head_hint=hint)


def disjoint_union(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    off = d1.fresh_label()
    xs = list(d1.crossings) + [tuple(e + off for e in x) for x in d2.crossings]
    return LinkDiagram(xs, d1.unknots + d2.unknots)


def unknot() -> LinkDiagram:
    return LinkDiagram([], 1)


@dataclass(frozen=True)
class DiagramStats:
    n: int
    writhe: int
    components: int
    crossing_weight: int
    user_n_min: int | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "writhe": self.writhe,
            "components": self.components,
            "crossing_weight": self.crossing_weight,
            "user_n_min": self.user_n_min,
        }


def stats(d: LinkDiagram, user_n_min: int | None = None) -> DiagramStats:
    # every crossing of a plain (projector-free) diagram is a single-line crossing
    return DiagramStats(d.n, d.writhe, d.n_components, d.n, user_n_min)
