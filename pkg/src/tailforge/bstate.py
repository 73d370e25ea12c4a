"""All-B state analysis: circles, struts, adequacy and B-reduction.

Convention: the B-smoothing of ``X[a,b,c,d]`` joins slot ``a`` to ``d`` and
``b`` to ``c``.  With the KnotTheory slot order this makes closures of
negative braids B-adequate (pinned by the acceptance tests).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

import networkx as nx

from .diagram import LinkDiagram, _close_up, _UnionFind


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class BStateGraph:
    circles: int
    struts: tuple[tuple[int, int], ...]
    origin: tuple[int, ...]  # strut index -> crossing index

    @property
    def g(self) -> int:
        return self.circles

    def loops(self) -> list[int]:
        return [i for i, (u, v) in enumerate(self.struts) if u == v]

    def degree(self) -> list[int]:
        deg = [0] * self.circles
        for u, v in self.struts:
            deg[u] += 1
            deg[v] += 1
        return deg

    def to_networkx(self) -> nx.MultiGraph:
        gr = nx.MultiGraph()
        gr.add_nodes_from(range(self.circles))
        gr.add_edges_from(self.struts)
        return gr

    def to_json(self) -> dict:
        return {"circles": self.circles, "struts": [list(s) for s in self.struts]}


def b_circle_labels(d: LinkDiagram) -> dict[int, int]:
    """Map each edge label to the index of its all-B circle."""
    uf = _UnionFind()
    for a, b, c, dd in d.crossings:
        uf.union(a, dd)
        uf.union(b, c)
    roots: dict[int, int] = {}
    out = {}
    for e in d.edges():
        r = uf.find(e)
        if r not in roots:
            roots[r] = len(roots)
        out[e] = roots[r]
    return out


def b_state(d: LinkDiagram) -> BStateGraph:
    lab = b_circle_labels(d)
    n_circ = len(set(lab.values())) + d.unknots
    struts = []
    for a, b, _, _ in d.crossings:
        u, v = lab[a], lab[b]
        struts.append((min(u, v), max(u, v)))
    return BStateGraph(n_circ, tuple(struts), tuple(range(d.n)))


def adequacy_report(g: BStateGraph) -> tuple[bool, int]:
    ni = len(g.loops())
    return ni == 0, ni


def is_b_adequate(d: LinkDiagram) -> bool:
    return adequacy_report(b_state(d))[0]


def b_splice_many(d: LinkDiagram, crossings) -> LinkDiagram:
    drop = set(crossings)
    ident: dict[int, int] = {}
    uf_pairs = []
    for i in sorted(drop):
        a, b, c, dd = d.crossings[i]
        uf_pairs += [(a, dd), (b, c)]
    # chain the pairs through a union-find so repeated labels compose correctly
    uf = _UnionFind()
    for u, v in uf_pairs:
        uf.union(u, v)
    for u, v in uf_pairs:
        ident[u] = uf.find(u)
        ident[v] = uf.find(v)
    xs = [x for i, x in enumerate(d.crossings) if i not in drop]
    return _close_up(xs, ident, d.unknots)


@dataclass
class ReductionLog:
    steps: list[tuple[str, tuple[int, int, int, int]]] = field(default_factory=list)

    def to_json(self) -> list:
        return [[kind, list(x)] for kind, x in self.steps]


def b_reduce(d: LinkDiagram) -> tuple[LinkDiagram, ReductionLog]:
    """Reduce a B-adequate diagram: thin parallel struts, then prune leaf circles."""
    g = b_state(d)
    if not adequacy_report(g)[0]:
        raise DomainError("b_reduce needs a B-adequate diagram")
    log = ReductionLog()
    groups: dict[tuple[int, int], list[int]] = defaultdict(list)
    for i, s in enumerate(g.struts):
        groups[s].append(i)
    extra = sorted(i for idx in groups.values() for i in idx[1:])
    if extra:
        log.steps += [("splice", d.crossings[i]) for i in extra]
        d = b_splice_many(d, extra)
    while True:
        g = b_state(d)
        if g.circles <= 1:
            break
        deg = g.degree()
        lab = b_circle_labels(d)
        leaf = None
        for i, (a, b, c, dd) in enumerate(d.crossings):
            # a leaf circle is a single edge joining the two slots of one B-arc
            if (a == dd and deg[lab[a]] == 1) or (b == c and deg[lab[b]] == 1):
                leaf = i
                break
        if leaf is None:
            break
        log.steps.append(("unkink", d.crossings[leaf]))
        d = b_splice_many(d, [leaf])
        d = LinkDiagram(d.crossings, d.unknots - 1, strict=False)
    return d, log


def reduce_graph(g: BStateGraph) -> nx.MultiGraph:
    """Graph-side reduction: merge parallel struts, then delete leaves."""
    gr = nx.Graph(g.to_networkx())
    while gr.number_of_nodes() > 1:
        leaves = sorted(v for v in gr.nodes if gr.degree(v) == 1)
        if not leaves:
            break
        gr.remove_node(leaves[0])
    return nx.MultiGraph(gr)


def same_graph(g1: nx.MultiGraph, g2: nx.MultiGraph) -> bool:
    return nx.is_isomorphic(g1, g2)


@dataclass(frozen=True)
class FramingCheck:
    dn: int
    dg: int
    dphi: int

    @property
    def holds(self) -> bool:
        return self.dn == self.dg == -self.dphi

    def to_json(self) -> dict:
        return {"dn": self.dn, "dg": self.dg, "dphi": self.dphi, "holds": self.holds}


def framing_relation_check(d1: LinkDiagram, d2: LinkDiagram) -> FramingCheck:
    return FramingCheck(d2.n - d1.n, b_state(d2).g - b_state(d1).g, d2.writhe - d1.writhe)
