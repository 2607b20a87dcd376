"""Oriented-cycle algebra: symmetric differences, connecting cycles,
cycle enumeration, and the doubled-square pseudograph configuration.

Cycles are edge walks, not vertex sets, so parallel edges of
pseudographs stay representable.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import (
    InconsistentOrientation,
    LinkForgeError,
    NotASingleCycle,
    SpecBroken,
)
from .geometry import AbstractGraph


@dataclass(frozen=True)
class OrientedCycle:
    """Simple closed oriented edge walk: steps of (edge id, direction)."""

    steps: tuple  # ((eid, +1|-1), ...)
    vertices: tuple  # tail of each step, len == len(steps)

    @staticmethod
    def from_steps(graph: AbstractGraph, steps):
        steps = tuple((eid, d) for eid, d in steps)
        if not steps:
            raise LinkForgeError("empty cycle")
        verts = []
        for eid, d in steps:
            u, v = graph.edges[eid]
            tail, head = (u, v) if d == 1 else (v, u)
            verts.append((tail, head))
        n = len(steps)
        for i in range(n):
            if verts[i][1] != verts[(i + 1) % n][0]:
                raise LinkForgeError(f"steps {i},{i+1} do not chain")
        tails = tuple(t for t, _ in verts)
        if len(set(tails)) != len(tails):
            raise LinkForgeError("cycle revisits a vertex")
        if len({eid for eid, _ in steps}) != len(steps):
            raise LinkForgeError("cycle repeats an edge")
        return OrientedCycle(steps, tails)

    def __len__(self):
        return len(self.steps)

    @property
    def edge_ids(self):
        return frozenset(eid for eid, _ in self.steps)

    def direction_of(self, eid):
        for e, d in self.steps:
            if e == eid:
                return d
        return None

    def reversed(self):
        steps = tuple((e, -d) for e, d in reversed(self.steps))
        verts = (self.vertices[0],) + tuple(reversed(self.vertices[1:]))
        return OrientedCycle(steps, verts)

    def rotated_to(self, vertex):
        i = self.vertices.index(vertex)
        return OrientedCycle(self.steps[i:] + self.steps[:i], self.vertices[i:] + self.vertices[:i])

    def key_oriented(self):
        rots = [self.steps[i:] + self.steps[:i] for i in range(len(self.steps))]
        return min(rots)

    def key_unoriented(self):
        return self.edge_ids

    def step_at(self, i):
        return self.steps[i % len(self.steps)]

    def vertex_at(self, i):
        return self.vertices[i % len(self.steps)]


def cycles_disjoint(a: OrientedCycle, b: OrientedCycle) -> bool:
    return not (set(a.vertices) & set(b.vertices))


def symmetric_difference(graph, a: OrientedCycle, b: OrientedCycle) -> OrientedCycle:
    """Merge two cycles whose edge sets meet in one nonempty path that the
    two cycles traverse in opposite directions.

    The result keeps a's direction on edges retained from a.
    """
    shared = a.edge_ids & b.edge_ids
    if not shared:
        raise NotASingleCycle("cycles share no edges")
    for eid in shared:
        if a.direction_of(eid) != -b.direction_of(eid):
            raise InconsistentOrientation(
                f"shared edge {eid} traversed the same way by both cycles"
            )
    if not _is_single_arc(a, shared) or not _is_single_arc(b, shared):
        raise NotASingleCycle("shared edges do not form a single path")
    result_edges = (a.edge_ids | b.edge_ids) - shared
    dirs = {}
    for eid, d in a.steps:
        if eid in result_edges:
            dirs[eid] = d
    adj = {}
    for eid in result_edges:
        u, v = graph.edges[eid]
        adj.setdefault(u, []).append(eid)
        adj.setdefault(v, []).append(eid)
    if any(len(es) != 2 for es in adj.values()):
        raise NotASingleCycle("symmetric difference is not a single cycle")
    start = next(eid for eid, _ in a.steps if eid in result_edges)
    steps = [(start, dirs[start])]
    used = {start}
    u, v = graph.edges[start]
    at = v if dirs[start] == 1 else u
    while True:
        nxt = [e for e in adj[at] if e not in used]
        if not nxt:
            break
        eid = nxt[0]
        used.add(eid)
        u, v = graph.edges[eid]
        d = 1 if u == at else -1
        steps.append((eid, d))
        at = v if d == 1 else u
    if len(used) != len(result_edges):
        raise NotASingleCycle("symmetric difference splits into components")
    return OrientedCycle.from_steps(graph, steps)


def _is_single_arc(cycle: OrientedCycle, shared) -> bool:
    """Do the shared edges occupy one contiguous run of the cycle?"""
    n = len(cycle.steps)
    flags = [eid in shared for eid, _ in cycle.steps]
    if all(flags):
        return False  # identical edge sets never merge into one cycle
    runs = sum(
        1 for i in range(n) if flags[i] and not flags[(i - 1) % n]
    )
    return runs == 1


@dataclass
class ConnectingCycleSpec:
    """Recipe for a cycle that cyclically joins several disjoint cycles:
    on each cycle a path q_i from u_i to w_i, then a connector edge from
    w_i to u_{i+1}."""

    graph: AbstractGraph
    cycles: list  # OrientedCycle
    attachments: list  # (u_i, w_i, path steps on cycle i)
    connectors: list  # edge ids, connectors[i] joins w_i to u_{i+1}
    traversal: str = "against"  # how the default paths run vs cycle orientation


def default_attachment(cycle: OrientedCycle, traversal="against"):
    """Attachment via the cycle's lexicographically-least edge: the path
    q is that single edge, traversed with or against the cycle."""
    eid = min(cycle.edge_ids, key=str)
    d = cycle.direction_of(eid)
    i = next(k for k, (e, _) in enumerate(cycle.steps) if e == eid)
    tail = cycle.vertex_at(i)
    head = cycle.vertex_at(i + 1)
    if traversal == "against":
        return head, tail, ((eid, -d),)
    return tail, head, ((eid, d),)


def build_connecting_spec(graph, cycles, traversal="against", connector_lookup=None):
    """Spec with default attachments; connector edges resolved via
    ``connector_lookup(w, u)`` or graph.edge_between."""
    attach = [default_attachment(c, traversal) for c in cycles]
    connectors = []
    n = len(cycles)
    for i in range(n):
        w = attach[i][1]
        u = attach[(i + 1) % n][0]
        eid = connector_lookup(w, u) if connector_lookup else graph.edge_between(w, u)
        if eid is None:
            raise SpecBroken(f"no connector edge between {w} and {u}")
        connectors.append(eid)
    return ConnectingCycleSpec(graph, list(cycles), attach, connectors, traversal)


def build_connecting_cycle(spec: ConnectingCycleSpec) -> OrientedCycle:
    """Realize the connecting cycle; raises SPEC_BROKEN on the first
    violated condition."""
    n = len(spec.cycles)
    if n == 0:
        raise SpecBroken("no cycles to connect")
    for i, (cyc, (u, w, path)) in enumerate(zip(spec.cycles, spec.attachments)):
        if u not in cyc.vertices or w not in cyc.vertices:
            raise SpecBroken(f"attachment vertices not on cycle {i}")
        for eid, _ in path:
            if cyc.direction_of(eid) is None:
                raise SpecBroken(f"path edge {eid} not on cycle {i}")
    steps = []
    for i in range(n):
        u, w, path = spec.attachments[i]
        steps.extend(path)
        eid = spec.connectors[i]
        a, b = spec.graph.edges[eid]
        u_next = spec.attachments[(i + 1) % n][0]
        if {a, b} != {w, u_next}:
            raise SpecBroken(f"connector {eid} does not join {w} to {u_next}")
        steps.append((eid, 1 if a == w else -1))
    try:
        return OrientedCycle.from_steps(spec.graph, steps)
    except LinkForgeError as exc:
        raise SpecBroken(f"connecting walk is not a simple cycle: {exc}")


def enumerate_cycles(graph: AbstractGraph, min_len=2, max_len=None):
    """All simple cycles with length in [min_len, max_len], each once, as
    canonically-oriented cycles.  Parallel-edge bigons count (length 2)."""
    if max_len is None:
        max_len = len(graph.vertices)
    if max_len > len(graph.vertices):
        raise LinkForgeError("max_len exceeds vertex count")
    order = {v: i for i, v in enumerate(sorted(graph.vertices, key=str))}
    incidence = {v: [] for v in graph.vertices}
    for eid, (u, v) in sorted(graph.edges.items(), key=lambda kv: str(kv[0])):
        if u == v:
            continue
        incidence[u].append((eid, v))
        incidence[v].append((eid, u))
    found = {}

    def walk(start, at, steps, verts):
        for eid, nxt in incidence[at]:
            if steps and eid == steps[-1][0]:
                continue
            if nxt == start and len(steps) + 1 >= min_len:
                key = frozenset(e for e, _ in steps) | {eid}
                if key not in found:
                    full = steps + [(eid, at)]
                    found[key] = _steps_to_cycle(graph, start, full)
            if order[nxt] <= order[start] or nxt in verts:
                continue
            if len(steps) + 1 >= max_len:
                continue
            steps.append((eid, at))
            verts.add(nxt)
            walk(start, nxt, steps, verts)
            verts.discard(nxt)
            steps.pop()

    for start in sorted(graph.vertices, key=str):
        walk(start, start, [], set())
    out = sorted(found.values(), key=lambda c: (len(c), sorted(map(str, c.edge_ids))))
    return out


def _steps_to_cycle(graph, start, walk_steps):
    steps = []
    at = start
    for eid, tail in walk_steps:
        u, v = graph.edges[eid]
        d = 1 if u == at else -1
        steps.append((eid, d))
        at = v if d == 1 else u
    return OrientedCycle.from_steps(graph, steps)


def disjoint_cycle_pairs(graph: AbstractGraph, min_len=2, max_len=None):
    """Unordered pairs of vertex-disjoint simple cycles."""
    cycles = enumerate_cycles(graph, min_len, max_len)
    pairs = []
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            if cycles_disjoint(cycles[i], cycles[j]):
                pairs.append((cycles[i], cycles[j]))
    return pairs


@dataclass
class D4Configuration:
    """A hub cycle meeting four pairwise-disjoint cycles in one arc each,
    traversed against their orientations; collapsing the four connector
    arcs yields the doubled-square pseudograph."""

    graph: AbstractGraph
    w_prime: OrientedCycle
    c_cycles: list  # exactly four OrientedCycles

    def validate(self):
        if len(self.c_cycles) != 4:
            raise SpecBroken("need exactly four side cycles")
        for i in range(4):
            for j in range(i + 1, 4):
                if not cycles_disjoint(self.c_cycles[i], self.c_cycles[j]):
                    raise SpecBroken(f"side cycles {i},{j} share a vertex")
        arcs = []
        for i, c in enumerate(self.c_cycles):
            shared = self.w_prime.edge_ids & c.edge_ids
            if not shared:
                raise SpecBroken(f"hub cycle misses side cycle {i}")
            if not _is_single_arc(self.w_prime, shared) or not _is_single_arc(c, shared):
                raise SpecBroken(f"hub meets side cycle {i} in several arcs")
            for eid in shared:
                if self.w_prime.direction_of(eid) != -c.direction_of(eid):
                    raise SpecBroken(
                        f"hub traverses side cycle {i} with its orientation"
                    )
            arcs.append(shared)
        # the four shared arcs must appear in label order around the hub
        first = {}
        n = len(self.w_prime.steps)
        for idx, (eid, _) in enumerate(self.w_prime.steps):
            for i, shared in enumerate(arcs):
                if eid in shared and i not in first:
                    first[i] = idx
        seq = sorted(range(4), key=lambda i: first[i])
        rot = seq.index(0)
        seq = seq[rot:] + seq[:rot]
        if seq != [0, 1, 2, 3] and seq != [0, 3, 2, 1]:
            raise SpecBroken("side cycles out of cyclic order around the hub")
        return arcs


def d4_hamiltonian_cycles(cfg: D4Configuration):
    """All 16 cycles obtained by exchanging, for any subset of the four
    side cycles, the hub's shared arc for its complement.

    Returns [(eps, OrientedCycle)] in binary order of eps."""
    cfg.validate()
    out = []
    for eps in product((0, 1), repeat=4):
        z = cfg.w_prime
        for i, e in enumerate(eps):
            if e:
                z = symmetric_difference(cfg.graph, z, cfg.c_cycles[i])
        out.append((eps, z))
    keys = {z.key_unoriented() for _, z in out}
    if len(keys) != 16:
        raise SpecBroken("candidate cycles are not pairwise distinct")
    return out
