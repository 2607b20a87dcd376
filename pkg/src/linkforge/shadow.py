"""Knot/link shadows: the combinatorial self-crossing data of one or two
cycles inside a diagram, with signs adjusted for traversal direction.

A shadow is the common input of both Conway-coefficient routes (the
Seifert-matrix computation and the skein recursion); the two routes
share nothing beyond it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cyclecalc import OrientedCycle, cycles_disjoint
from .errors import CyclesNotDisjoint, NotAKnot


@dataclass
class Passage:
    crossing: int  # local crossing id within the shadow
    over: bool
    component: int
    position: int  # index along the component walk


@dataclass
class LinkShadow:
    """Signed Gauss data for cycles restricted to their own crossings.

    components[c] is the cyclic passage list of component c; signs[x] is
    the crossing sign for the cycles' traversal directions; geometry[x]
    is ((comp, walk pos of strand 1), (comp, walk pos of strand 2)) with
    strand 1 the over strand.
    """

    components: list
    signs: dict
    points: dict  # crossing id -> exact planar point (for geometric use)


def _cycle_walk(diagram, cycle: OrientedCycle):
    """Ordered (crossing index, role, edge step index) along the cycle,
    plus the planar polyline of the walk."""
    per_edge = {}
    for idx, c in enumerate(diagram.crossings):
        per_edge.setdefault(c.edge_a, []).append((idx, "a", c.seg_a, c.t_a))
        per_edge.setdefault(c.edge_b, []).append((idx, "b", c.seg_b, c.t_b))
    order = []
    for step_i, (eid, d) in enumerate(cycle.steps):
        hits = per_edge.get(eid, [])
        hits = sorted(hits, key=lambda h: (h[2], h[3]), reverse=(d == -1))
        for idx, role, seg, t in hits:
            order.append((idx, role, step_i))
    return order


def extract_shadow(diagram, cycles):
    """Shadow of one or two pairwise vertex-disjoint cycles.

    Crossings involving edges outside the cycles are deleted first; only
    crossings with both strands on the kept cycles survive.
    """
    if len(cycles) == 2 and not cycles_disjoint(cycles[0], cycles[1]):
        raise CyclesNotDisjoint("shadow components must be vertex-disjoint")
    edge_dir = []
    for cyc in cycles:
        edge_dir.append({eid: d for eid, d in cyc.steps})
    kept = {}
    for idx, c in enumerate(diagram.crossings):
        where_a = next((k for k, ed in enumerate(edge_dir) if c.edge_a in ed), None)
        where_b = next((k for k, ed in enumerate(edge_dir) if c.edge_b in ed), None)
        if where_a is None or where_b is None:
            continue
        da = edge_dir[where_a][c.edge_a]
        db = edge_dir[where_b][c.edge_b]
        kept[idx] = c.handedness * da * db
    components = []
    local_id = {}
    signs = {}
    points = {}
    for comp_i, cyc in enumerate(cycles):
        walk = _cycle_walk(diagram, cyc)
        passages = []
        for idx, role, step_i in walk:
            if idx not in kept:
                continue
            if idx not in local_id:
                local_id[idx] = len(local_id)
                signs[local_id[idx]] = kept[idx]
                c = diagram.crossings[idx]
                a0, a1 = diagram.seg(c.edge_a, c.seg_a)
                points[local_id[idx]] = (
                    a0[0] + c.t_a * (a1[0] - a0[0]),
                    a0[1] + c.t_a * (a1[1] - a0[1]),
                )
            c = diagram.crossings[idx]
            over = (c.over == role)
            passages.append(
                Passage(local_id[idx], over, comp_i, len(passages))
            )
        components.append(passages)
    for x in signs:
        n = sum(1 for comp in components for p in comp if p.crossing == x)
        if n != 2:
            raise NotAKnot(f"crossing {x} does not appear exactly twice")
    return LinkShadow(components, signs, points)


def knot_shadow_with_geometry(diagram, cycle):
    """Shadow of a single cycle plus the exact planar walk geometry needed
    by the Seifert-circle construction.

    Returns (shadow, walk_points, passage_positions) where walk_points is
    the closed planar polyline of the cycle (one list of points, last !=
    first) and passage_positions[i] = (segment index in walk, parameter)
    for passage i in walk order.
    """
    shadow = extract_shadow(diagram, [cycle])
    walk_pts = []
    seg_base = {}  # step index -> first walk-segment index of that step
    for step_i, (eid, d) in enumerate(cycle.steps):
        pts = diagram.arcs[eid]
        if d == -1:
            pts = tuple(reversed(pts))
        seg_base[step_i] = len(walk_pts)
        walk_pts.extend(pts[:-1])
    nseg_of_step = {}
    for step_i, (eid, _) in enumerate(cycle.steps):
        nseg_of_step[step_i] = len(diagram.arcs[eid]) - 1
    per_edge = {}
    for idx, c in enumerate(diagram.crossings):
        per_edge.setdefault(c.edge_a, []).append((idx, "a", c.seg_a, c.t_a))
        per_edge.setdefault(c.edge_b, []).append((idx, "b", c.seg_b, c.t_b))
    positions = []
    cyc_edges = {eid: d for eid, d in cycle.steps}
    for step_i, (eid, d) in enumerate(cycle.steps):
        hits = sorted(
            per_edge.get(eid, []), key=lambda h: (h[2], h[3]), reverse=(d == -1)
        )
        nseg = len(diagram.arcs[eid]) - 1
        for idx, role, seg, t in hits:
            c = diagram.crossings[idx]
            other = c.edge_b if role == "a" else c.edge_a
            if other not in cyc_edges or c.edge_a not in cyc_edges or c.edge_b not in cyc_edges:
                continue
            if d == 1:
                wseg = seg_base[step_i] + seg
                wt = t
            else:
                wseg = seg_base[step_i] + (nseg - 1 - seg)
                wt = 1 - t
            positions.append((wseg, wt))
    return shadow, walk_pts, positions
