"""Planar network contraction for brackets and colored brackets.

A network is a set of pieces joined port-to-port.  Each piece carries a
linear combination of perfect matchings on its free ports ("states").
Pieces are merged pairwise along all their shared connections; closed loops
contribute the circle value.  A flat diagram's value depends only on its
connectivity, so no planar embedding data is needed.

Colored networks group cable strands into projected bundles.  Each bundle
has a Jones-Wenzl projector on it, but the projector is only materialised
when the two pieces holding the bundle's ends are merged.  Until then a piece
may drop any state that joins adjacent strands of one bundle end: the
projector that will be inserted there kills such a cap, whatever the rest of
the network does.  Projector coefficients are numerators over a common
denominator; the closed value is divided exactly at the end.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

from .algebra import CIRCLE, LaurentPoly
from .diagram import LinkDiagram

Matching = tuple[int, ...]

_HALF = LaurentPoly.monomial(1)
_NEG_HALF = LaurentPoly.monomial(-1)


@dataclass
class Piece:
    ports: list[int]
    states: dict[Matching, LaurentPoly]
    members: frozenset[int]


@dataclass
class Network:
    """Pieces, direct port wiring and projected bundles.

    ``bundles[b]`` is ``(tail_ports, head_ports)``; bundle ports are not in
    ``wire`` until their projector is inserted.  ``group`` assigns pieces to
    blocks that are contracted first (cable grids).
    """

    pieces: list[Piece] = field(default_factory=list)
    wire: dict[int, int] = field(default_factory=dict)
    bundles: list[tuple[list[int], list[int]]] = field(default_factory=list)
    leg_of: dict[int, tuple[int, int, int]] = field(default_factory=dict)  # (bundle, end, position)
    group: list = field(default_factory=list)
    projector: object = None
    scalar: LaurentPoly = field(default_factory=lambda: LaurentPoly.const(1))
    _next_port: int = 0

    def new_ports(self, k: int) -> list[int]:
        out = list(range(self._next_port, self._next_port + k))
        self._next_port += k
        return out

    def connect(self, p: int, q: int) -> None:
        if p in self.wire or q in self.wire:
            raise ValueError("port already wired")
        self.wire[p] = q
        self.wire[q] = p

    def add_piece(self, ports: list[int], states: dict[Matching, LaurentPoly], group=None) -> int:
        idx = len(self.pieces)
        self.pieces.append(Piece(list(ports), dict(states), frozenset([idx])))
        self.group.append(group)
        return idx

    def fork(self) -> "Network":
        """Copy whose wiring can be extended without touching this one."""
        return dataclasses.replace(self, wire=dict(self.wire), leg_of=dict(self.leg_of))

    def add_bundle(self, tail: list[int], head: list[int]) -> int:
        b = len(self.bundles)
        self.bundles.append((list(tail), list(head)))
        for end, ports in enumerate((tail, head)):
            for i, p in enumerate(ports):
                self.leg_of[p] = (b, end, i)
        return b


def crossing_states() -> dict[Matching, LaurentPoly]:
    """Slots a,b,c,d -> A pairs (a,b),(c,d) with q^(1/2); B pairs (a,d),(b,c) with q^(-1/2)."""
    return {(1, 0, 3, 2): _HALF, (3, 2, 1, 0): _NEG_HALF}


def bracket_network(d: LinkDiagram) -> Network:
    net = Network()
    ports = [net.new_ports(4) for _ in d.crossings]
    for x, pp in enumerate(ports):
        net.add_piece(pp, crossing_states())
    occ: dict[int, list[int]] = {}
    for x, lab in enumerate(d.crossings):
        for s, e in enumerate(lab):
            occ.setdefault(e, []).append(ports[x][s])
    for p, q in occ.values():
        net.connect(p, q)
    net.scalar = CIRCLE ** d.unknots
    return net


# -- contraction ----------------------------------------------------------------

class ContractionLimit(RuntimeError):
    pass


@dataclass
class Live:
    """A piece during planning: its states and the tape slot holding their coefficients."""

    ports: list[int]
    keys: list[Matching]
    slot: int


class Tape:
    """Backend-independent record of a contraction.

    Planning traces connectivity once; the recorded operations are then
    replayed with any coefficient backend.
    """

    def __init__(self):
        self.ops: list[tuple] = []
        self.slots = 0
        self.result: list[int] = []
        self.boxes = 0

    def new_slot(self) -> int:
        self.slots += 1
        return self.slots - 1

    def load(self, values: list[LaurentPoly]) -> int:
        s = self.new_slot()
        self.ops.append(("load", s, values))
        return s

    def combine(self, a: int, b: int, plan) -> int:
        s = self.new_slot()
        self.ops.append(("combine", s, a, b) + tuple(plan))
        return s

    def unary(self, a: int, plan) -> int:
        s = self.new_slot()
        self.ops.append(("unary", s, a) + tuple(plan))
        return s

    def replay(self, backend):
        last_use: dict[int, int] = {}
        for t, op in enumerate(self.ops):
            for x in _inputs(op):
                last_use[x] = t
        keep = set(self.result)
        store: dict[int, object] = {}
        for t, op in enumerate(self.ops):
            kind, s = op[0], op[1]
            if kind == "load":
                store[s] = backend.load(op[2])
            elif kind == "combine":
                _, _, a, b, ia, ib, kidx, loops, nkeys = op
                store[s] = backend.combine(store[a], store[b], ia, ib, kidx, loops, nkeys)
            else:
                _, _, a, src_, kidx, loops, nkeys = op
                store[s] = backend.unary(store[a], src_, kidx, loops, nkeys)
            for x in _inputs(op):
                if last_use[x] == t and x not in keep:
                    del store[x]
        total = backend.load([LaurentPoly.const(1)])
        for s in self.result:
            total = backend.combine(total, store[s], [0], [0], [0], [0], 1)
        return total


def _inputs(op: tuple) -> tuple:
    if op[0] == "combine":
        return op[2], op[3]
    if op[0] == "unary":
        return (op[2],)
    return ()


def _plan_merge(net: Network, A: Live, B: Live):
    """Trace every state pair; returns new ports, keys and index lists."""
    wire = net.wire
    pa, pb = A.ports, B.ports
    a_index = {p: i for i, p in enumerate(pa)}
    b_index = {p: i for i, p in enumerate(pb)}
    na, nb = len(pa), len(pb)
    # per A-local port: partner B-local index if shared, else new index (encoded as ~new)
    a_link = [0] * na
    b_link = [0] * nb
    new_ports = []
    for i, p in enumerate(pa):
        q = wire.get(p)
        if q is not None and q in b_index:
            a_link[i] = b_index[q]
        else:
            a_link[i] = ~len(new_ports)
            new_ports.append(p)
    for j, p in enumerate(pb):
        q = wire.get(p)
        if q is not None and q in a_index:
            b_link[j] = a_index[q]
        else:
            b_link[j] = ~len(new_ports)
            new_ports.append(p)
    starts_a = [i for i in range(na) if a_link[i] < 0]
    starts_b = [j for j in range(nb) if b_link[j] < 0]
    shared_a = [i for i in range(na) if a_link[i] >= 0]
    groups = _prune_groups(net, new_ports)
    m = len(new_ports)
    key_index: dict[Matching, int] = {}
    keys: list[Matching] = []
    ia: list[int] = []
    ib: list[int] = []
    kidx: list[int] = []
    loops_out: list[int] = []
    for x, sa in enumerate(A.keys):
        for y, sb in enumerate(B.keys):
            res = [-1] * m
            seen = bytearray(na)
            for i0 in starts_a:
                k0 = ~a_link[i0]
                if res[k0] >= 0:
                    continue
                i = sa[i0]
                while True:
                    link = a_link[i]
                    if link < 0:
                        k1 = ~link
                        break
                    seen[i] = 1
                    j = sb[link]
                    link = b_link[j]
                    if link < 0:
                        k1 = ~link
                        break
                    seen[link] = 1
                    i = sa[link]
                res[k0] = k1
                res[k1] = k0
            for j0 in starts_b:
                k0 = ~b_link[j0]
                if res[k0] >= 0:
                    continue
                j = sb[j0]
                while True:
                    link = b_link[j]
                    if link < 0:
                        k1 = ~link
                        break
                    seen[link] = 1
                    i = sa[link]
                    link = a_link[i]
                    if link < 0:
                        k1 = ~link
                        break
                    seen[i] = 1
                    j = sb[link]
                res[k0] = k1
                res[k1] = k0
            loops = 0
            for i0 in shared_a:
                if seen[i0]:
                    continue
                loops += 1
                i = i0
                while not seen[i]:
                    seen[i] = 1
                    j = a_link[i]
                    i2 = b_link[sb[j]]
                    seen[i2] = 1
                    i = sa[i2]
            key = tuple(res)
            k = key_index.get(key)
            if k is None:
                if groups is not None and _pruned(key, groups):
                    k = -1
                else:
                    k = len(keys)
                    keys.append(key)
                key_index[key] = k
            if k < 0:
                continue
            ia.append(x)
            ib.append(y)
            kidx.append(k)
            loops_out.append(loops)
    return new_ports, keys, ia, ib, kidx, loops_out


def _merge(net: Network, A: Live, B: Live, tape: Tape, limit: int | None) -> Live:
    ports, keys, ia, ib, kidx, loops = _plan_merge(net, A, B)
    if limit is not None and len(keys) > limit:
        raise ContractionLimit(f"state count {len(keys)} exceeds limit {limit}")
    return Live(ports, keys, tape.combine(A.slot, B.slot, (ia, ib, kidx, loops, len(keys))))


def _prune_groups(net: Network, ports: list[int]) -> list | None:
    """Per free port: ``(bundle_end_key, position)`` if it ends a projected bundle."""
    if not net.leg_of:
        return None
    out: list = []
    any_group = False
    for p in ports:
        tag = net.leg_of.get(p)
        if tag is not None:
            out.append((2 * tag[0] + tag[1], tag[2]))
            any_group = True
        else:
            out.append(None)
    return out if any_group else None


def _pruned(match: Matching, groups: list) -> bool:
    for i, j in enumerate(match):
        if i < j:
            gi, gj = groups[i], groups[j]
            if gi is not None and gj is not None and gi[0] == gj[0] and abs(gi[1] - gj[1]) == 1:
                return True
    return False


def _self_close(net: Network, pc: Live, tape: Tape) -> Live:
    """Resolve wires joining two ports of the same piece, then prune."""
    idx = {p: i for i, p in enumerate(pc.ports)}
    inner = {i: idx[net.wire[p]] for i, p in enumerate(pc.ports) if net.wire.get(p) in idx}
    free = [i for i in range(len(pc.ports)) if i not in inner]
    ports = [pc.ports[i] for i in free]
    groups = _prune_groups(net, ports)
    if not inner and groups is None:
        return pc
    pos = {i: k for k, i in enumerate(free)}
    key_index: dict[Matching, int] = {}
    keys: list[Matching] = []
    src, kidx, loops_out = [], [], []
    for x, st in enumerate(pc.keys):
        res = [-1] * len(free)
        seen = set()
        for i0 in free:
            if res[pos[i0]] >= 0:
                continue
            i = st[i0]
            while i in inner:
                seen.add(i)
                seen.add(inner[i])
                i = st[inner[i]]
            res[pos[i0]], res[pos[i]] = pos[i], pos[i0]
        loops = 0
        for i0 in inner:
            if i0 in seen:
                continue
            loops += 1
            i = i0
            while i not in seen:
                seen.add(i)
                seen.add(inner[i])
                i = st[inner[i]]
        key = tuple(res)
        k = key_index.get(key)
        if k is None:
            if groups is not None and _pruned(key, groups):
                k = -1
            else:
                k = len(keys)
                keys.append(key)
            key_index[key] = k
        if k < 0:
            continue
        src.append(x)
        kidx.append(k)
        loops_out.append(loops)
    return Live(ports, keys, tape.unary(pc.slot, (src, kidx, loops_out, len(keys))))


def _box_piece(net: Network, b: int, tape: Tape) -> Live:
    """Projector piece for bundle ``b`` wired to both bundle ends."""
    tail, head = net.bundles[b]
    N = len(tail)
    ports = net.new_ports(2 * N)
    for i in range(N):
        net.connect(tail[i], ports[i])
        net.connect(head[i], ports[N + i])
    for p in tail + head:
        del net.leg_of[p]
    keys, values = _projector_states(net.projector)
    return Live(ports, keys, tape.load(values))


def _projector_states(proj):
    items = sorted(proj.num.items(), key=lambda kv: kv[0].match)
    return [t.match for t, _ in items], [c for _, c in items]


class _State:
    def __init__(self, net: Network, tape: Tape, limit: int | None):
        self.net = net
        self.tape = tape
        self.limit = limit
        self.live: dict[int, Live] = {}
        self.where: dict[int, int] = {}  # port -> live key
        self.pending = set(range(len(net.bundles)))

    def put(self, k: int, pc: Live) -> None:
        self.live[k] = pc
        for p in pc.ports:
            self.where[p] = k

    def bundle_ends(self, b: int):
        """Live keys holding each end, or None for an end split across pieces."""
        out = []
        for ports in self.net.bundles[b]:
            ks = {self.where.get(p) for p in ports}
            out.append(ks.pop() if len(ks) == 1 else None)
        return out

    def join(self, A: Live, b: int) -> Live:
        self.pending.discard(b)
        self.tape.boxes += 1
        return _merge(self.net, A, _box_piece(self.net, b, self.tape), self.tape, self.limit)

    def close_own_bundles(self, k: int) -> None:
        pc = self.live[k]
        for b in sorted(self.pending):
            t, h = self.bundle_ends(b)
            if t == h == k:
                pc = self.join(pc, b)
        self.put(k, pc)

    def merge(self, k: int, o: int) -> None:
        A, B = self.live.pop(k), self.live.pop(o)
        # join through one bundle; the others become self-bundles and are
        # closed one at a time so pruning can act in between
        for b in sorted(self.pending):
            if set(self.bundle_ends(b)) == {k, o}:
                A = self.join(A, b)
                break
        self.put(k, _merge(self.net, A, B, self.tape, self.limit))
        self.close_own_bundles(k)

    def links(self, k: int, allowed=None) -> dict[int, int]:
        net = self.net
        nbrs: dict[int, int] = {}
        for p in self.live[k].ports:
            q = net.wire.get(p)
            if q is None:
                tag = net.leg_of[p]
                if tag[0] not in self.pending:
                    continue
                o = self.bundle_ends(tag[0])[1 - tag[1]]
            else:
                o = self.where[q]
            if o is not None and o != k and (allowed is None or o in allowed):
                nbrs[o] = nbrs.get(o, 0) + 1
        return nbrs

    def best_pair(self, keys) -> tuple[int, int] | None:
        best = None
        for k in keys:
            pc = self.live[k]
            for o, shared in self.links(k, keys).items():
                if o < k:
                    continue
                size = len(pc.ports) + len(self.live[o].ports) - 2 * shared
                cost = (size, len(pc.keys) * len(self.live[o].keys), k, o)
                if best is None or cost < best:
                    best = cost
        return None if best is None else (best[2], best[3])


def plan(net: Network, limit: int | None = None) -> Tape:
    """Trace a contraction of ``net`` and record it; ``net`` is not modified."""
    net = net.fork()
    tape = Tape()
    st = _State(net, tape, limit)
    for idx, pc in enumerate(net.pieces):
        keys = list(pc.states)
        live = Live(list(pc.ports), keys, tape.load([pc.states[k] for k in keys]))
        st.put(idx, _self_close(net, live, tape))
    groups: dict = {}
    for idx, g in enumerate(net.group):
        if g is not None:
            groups.setdefault(g, set()).add(idx)
    for keys in groups.values():
        while len(keys) > 1:
            pair = st.best_pair(keys)
            if pair is None:
                raise RuntimeError("contraction group is not connected")
            st.merge(*pair)
            keys.discard(pair[1])
    for k in list(st.live):
        st.close_own_bundles(k)
    while st.live:
        for k in [k for k, pc in st.live.items() if not pc.ports]:
            pc = st.live.pop(k)
            if not pc.keys:
                pc = Live([], [()], tape.load([LaurentPoly()]))
            tape.result.append(pc.slot)
        if not st.live:
            break
        pair = st.best_pair(set(st.live))
        if pair is None:
            raise RuntimeError("disconnected piece with dangling ports")
        st.merge(*pair)
    return tape


def contract(net: Network, limit: int | None = None, backend: str = "auto") -> LaurentPoly:
    """Contract the whole network; returns the exact Laurent polynomial value.

    ``backend`` is ``exact`` (Laurent polynomial arithmetic), ``modular``
    (certified multi-modular evaluation) or ``auto`` (modular when the
    network has projectors).
    """
    from .coeffs import ExactBackend, ModularBackend, NeedMore

    if backend == "auto":
        backend = "modular" if net.bundles else "exact"
    den = net.projector.den if net.projector is not None else None
    tape = plan(net, limit)
    if backend == "exact":
        be = ExactBackend()
        return net.scalar * be.finish(tape.replay(be), tape.boxes, den)
    if backend != "modular":
        raise ValueError(f"unknown backend {backend!r}")
    # a pass without evaluation points yields the certified sizes
    sizer = ModularBackend(0, 1, den)
    points, primes, step = sizer.requirements(tape.replay(sizer), tape.boxes, den)
    while True:
        be = ModularBackend(points, primes, den, step)
        try:
            return net.scalar * be.finish(tape.replay(be), tape.boxes, den)
        except NeedMore as more:
            points, primes, step = more.points, more.primes, more.step


def colored_unknot(N: int) -> LaurentPoly:
    """(-1)^N [N+1]: closure of the N-strand projector."""
    from .algebra import quantum_int

    return quantum_int(N + 1) * (-1) ** N


def colored_crossing_states(N: int, sign: int) -> dict[Matching, LaurentPoly]:
    """Colored crossing expanded over projected legs (legs a, b, c, d; N ports each).

    Term ``k`` has ``k`` strands turning through the A corners and ``N - k``
    through the B corners, weighted by ``q^(k^2 - N^2/2)`` times the brace
    polynomial.
    """
    from fractions import Fraction

    from .algebra import brace_poly

    def side(v: int) -> int:
        return N - 1 - v if sign > 0 else v

    A, B, C, D = 0, N, 2 * N, 3 * N
    out: dict[Matching, LaurentPoly] = {}
    for k in range(N + 1):
        m = [0] * (4 * N)

        def pair(p, q):
            m[p], m[q] = q, p

        for t in range(k):
            pair(A + (N - 1 - t), B + side(t))
            pair(C + t, D + side(N - 1 - t))
        for u in range(N - k):
            pair(A + u, D + side(u))
        for u in range(k, N):
            pair(C + u, B + side(u))
        coeff = LaurentPoly.q(Fraction(2 * k * k - N * N, 2)) * brace_poly(N, k)
        out[tuple(m)] = coeff
    return out


def colored_network(d: LinkDiagram, N: int, method: str = "tl-contraction", projectors: str = "all") -> Network:
    """Network whose value is the N-colored bracket of ``d``.

    ``method`` is ``tl-contraction`` (cable into single crossings) or
    ``multicone`` (one expanded piece per colored crossing).  ``projectors``
    is ``all`` (a box on every cable bundle) or ``component`` (one box per
    component); the two agree because projectors are idempotent and slide
    through cable crossings.  ``multicone`` needs ``all``.
    """
    from .diagram import cable_with_map

    if N < 1:
        raise ValueError("color must be >= 1")
    from .tl import jw_projector

    net = Network()
    net.scalar = colored_unknot(N) ** d.unknots
    if N > 1:
        net.projector = jw_projector(N)
    if method == "multicone":
        if projectors != "all":
            raise ValueError("multicone expansion needs projectors on every edge")
        legs = []
        for x, sign in enumerate(d.signs):
            ports = net.new_ports(4 * N)
            net.add_piece(ports, colored_crossing_states(N, sign))
            legs.append(ports)
        for e in d.edges():
            tx, ts = d.edge_tail[e]
            hx, hs = d.edge_head[e]
            tail = [legs[tx][ts * N + i] for i in range(N)]
            head = [legs[hx][hs * N + i] for i in range(N)]
            if N > 1:
                net.add_bundle(tail, head)
            else:
                net.connect(tail[0], head[0])
        return net
    if method != "tl-contraction":
        raise ValueError(f"unknown method {method!r}")
    c, cmap = cable_with_map(d, N)
    ports = [net.new_ports(4) for _ in c.crossings]
    for x, pp in enumerate(ports):
        net.add_piece(pp, crossing_states(), group=x // (N * N) if N > 1 else None)
    if projectors == "all":
        boxed = list(d.edges())
    elif projectors == "component":
        boxed = [comp[0] for comp in d.components]
    else:
        raise ValueError(f"unknown projector placement {projectors!r}")
    handled: set[int] = set()
    if N > 1:
        for e in boxed:
            tail, head = [], []
            for lab in cmap.strands[e]:
                tx, ts = c.edge_tail[lab]
                hx, hs = c.edge_head[lab]
                tail.append(ports[tx][ts])
                head.append(ports[hx][hs])
                handled.add(lab)
            net.add_bundle(tail, head)
    for lab in c.edges():
        if lab in handled:
            continue
        tx, ts = c.edge_tail[lab]
        hx, hs = c.edge_head[lab]
        net.connect(ports[tx][ts], ports[hx][hs])
    return net
