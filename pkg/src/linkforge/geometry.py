"""Exact-arithmetic PL embeddings of abstract graphs in 3-space.

Vertices carry exact rational coordinates and edges are straight
segments, so every degeneracy predicate (segment intersection, generic
projection) is decidable.  No floating point enters any predicate;
floats are used only to seed rational approximations of circle points
in the fixture generators, after which everything is exact.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    FixtureDegenerate,
    GenericPositionViolation,
    LinkForgeError,
    RetryExhausted,
)

Vec3 = tuple[Fraction, Fraction, Fraction]


# ---------------------------------------------------------------------------
# vector helpers


def vec3(x, y, z) -> Vec3:
    return (Fraction(x), Fraction(y), Fraction(z))


def v_add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def v_sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def v_scale(a, s):
    return (a[0] * s, a[1] * s, a[2] * s)


def v_dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def v_cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def cross2(a, b):
    """z-component of the 2D cross product."""
    return a[0] * b[1] - a[1] * b[0]


def sub2(a, b):
    return (a[0] - b[0], a[1] - b[1])


def dot2(a, b):
    return a[0] * b[0] + a[1] * b[1]


# ---------------------------------------------------------------------------
# graphs


@dataclass
class AbstractGraph:
    """Finite pseudograph: vertex ids, edges keyed by edge id.

    Parallel edges and loops are representable (edges are identified by
    id, not endpoint pair).  Optional edge weights must be pairwise
    distinct positive integers when present.
    """

    vertices: tuple
    edges: dict  # edge id -> (u, v)
    weights: dict = field(default_factory=dict)  # edge id -> positive int

    def __post_init__(self):
        vs = set(self.vertices)
        for eid, (u, v) in self.edges.items():
            if u not in vs or v not in vs:
                raise LinkForgeError(f"edge {eid} has undeclared endpoint")
        if self.weights:
            ws = list(self.weights.values())
            if len(set(ws)) != len(ws):
                raise LinkForgeError("edge weights must be pairwise distinct")
            if any(w <= 0 for w in ws):
                raise LinkForgeError("edge weights must be positive")

    def endpoints(self, eid):
        return self.edges[eid]

    def other_end(self, eid, v):
        u, w = self.edges[eid]
        if v == u:
            return w
        if v == w:
            return u
        raise KeyError(f"vertex {v} not on edge {eid}")

    def edges_at(self, v):
        return [eid for eid, (a, b) in self.edges.items() if v in (a, b)]

    def edge_between(self, u, v):
        """First edge id joining u and v, or None."""
        for eid, (a, b) in sorted(self.edges.items(), key=lambda kv: str(kv[0])):
            if {a, b} == {u, v}:
                return eid
        return None

    def with_extra_edges(self, extra):
        """New graph with additional edges {eid: (u, v)}."""
        merged = dict(self.edges)
        for eid, uv in extra.items():
            if eid in merged:
                raise LinkForgeError(f"duplicate edge id {eid}")
            merged[eid] = uv
        return AbstractGraph(self.vertices, merged, dict(self.weights))


def complete_graph(n, weights=False, prefix="v"):
    """K_n with vertices 'v0'..'v{n-1}' and edges 'e{i}_{j}'."""
    verts = tuple(f"{prefix}{i}" for i in range(n))
    edges = {}
    wts = {}
    k = 1
    for i in range(n):
        for j in range(i + 1, n):
            eid = f"e{i}_{j}"
            edges[eid] = (verts[i], verts[j])
            if weights:
                wts[eid] = k
                k += 1
    return AbstractGraph(verts, edges, wts)


# ---------------------------------------------------------------------------
# embeddings


@dataclass
class PLEmbedding:
    """Straight-edge embedding: every edge is the segment between its
    endpoint coordinates.  Loops are not realizable."""

    graph: AbstractGraph
    coords: dict  # vertex -> Vec3

    def segment(self, eid):
        u, v = self.graph.edges[eid]
        return self.coords[u], self.coords[v]

    def validate(self):
        """Raise unless coordinates are distinct and closed segments of
        distinct edges meet only at shared declared endpoints."""
        seen = {}
        for v in self.graph.vertices:
            p = tuple(Fraction(c) for c in self.coords[v])
            if p in seen:
                raise LinkForgeError(f"vertices {seen[p]} and {v} coincide")
            seen[p] = v
        eids = sorted(self.graph.edges, key=str)
        for eid in eids:
            u, v = self.graph.edges[eid]
            if u == v:
                raise LinkForgeError(f"loop edge {eid} not realizable")
        for i, e1 in enumerate(eids):
            a1, b1 = self.graph.edges[e1]
            p1, p2 = self.segment(e1)
            for e2 in eids[i + 1 :]:
                a2, b2 = self.graph.edges[e2]
                q1, q2 = self.segment(e2)
                shared = {a1, b1} & {a2, b2}
                if len(shared) == 2:
                    raise LinkForgeError(
                        f"parallel edges {e1},{e2} coincide as segments"
                    )
                if _segments_clash_3d(p1, p2, q1, q2, bool(shared), self, e1, e2, shared):
                    raise LinkForgeError(
                        f"segments of edges {e1} and {e2} intersect improperly"
                    )

    def mapped(self, fn):
        return PLEmbedding(self.graph, {v: fn(p) for v, p in self.coords.items()})

    def with_extra_edges(self, extra):
        """Extend with new straight edges, checking only the new pairs."""
        emb = PLEmbedding(self.graph.with_extra_edges(extra), self.coords)
        old = sorted(self.graph.edges, key=str)
        new = sorted(extra, key=str)
        for i, e1 in enumerate(new):
            a1, b1 = emb.graph.edges[e1]
            p1, p2 = emb.segment(e1)
            for e2 in old + new[i + 1 :]:
                a2, b2 = emb.graph.edges[e2]
                shared = {a1, b1} & {a2, b2}
                if len(shared) == 2:
                    raise LinkForgeError(f"edges {e1},{e2} coincide")
                q1, q2 = emb.segment(e2)
                if _segments_clash_3d(p1, p2, q1, q2, bool(shared), emb, e1, e2, shared):
                    raise LinkForgeError(
                        f"new edge {e1} passes through edge {e2}"
                    )
        return emb


def _segments_clash_3d(p1, p2, q1, q2, adjacent, emb=None, e1=None, e2=None, shared=()):
    """True when two closed segments intersect anywhere beyond a shared
    declared endpoint."""
    d1 = v_sub(p2, p1)
    d2 = v_sub(q2, q1)
    r = v_sub(q1, p1)
    n = v_cross(d1, d2)
    if n != (0, 0, 0):
        if v_dot(r, n) != 0:
            return False  # skew
        nn = v_dot(n, n)
        s = Fraction(v_dot(v_cross(r, d2), n), nn)
        t = Fraction(v_dot(v_cross(r, d1), n), nn)
        if not (0 <= s <= 1 and 0 <= t <= 1):
            return False
        if adjacent:
            # sharing one endpoint: the unique line intersection is it
            return False
        return True
    # parallel
    if v_cross(r, d1) != (0, 0, 0):
        return False  # parallel, distinct lines
    # collinear: compare 1D intervals along d1
    dd = v_dot(d1, d1)
    t0 = v_dot(r, d1)
    t1 = t0 + v_dot(d2, d1)
    lo, hi = min(t0, t1), max(t0, t1)
    if hi < 0 or lo > dd:
        return False
    if adjacent:
        # touching only at the shared endpoint is fine; any overlap is not
        overlap = min(hi, dd) - max(lo, 0)
        return overlap != 0
    return True


# ---------------------------------------------------------------------------
# projection directions and general position


@dataclass(frozen=True)
class ProjectionDirection:
    direction: Vec3

    def __post_init__(self):
        if tuple(self.direction) == (0, 0, 0):
            raise LinkForgeError("projection direction must be nonzero")

    def frame(self):
        """Rational basis (u, v, dir); planar coords and height of a point
        p are the coefficients of p in this basis."""
        d = self.direction
        for axis in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            u = v_cross(d, vec3(*axis))
            if u != (0, 0, 0):
                break
        v = v_cross(d, u)
        return u, v, d

    def planar(self, p):
        """(a, b, h): planar coordinates and exact height along the
        direction."""
        u, v, d = self.frame()
        det = _det3(u, v, d)
        a = Fraction(_det3(p, v, d), det)
        b = Fraction(_det3(u, p, d), det)
        h = Fraction(_det3(u, v, p), det)
        return a, b, h


def _det3(a, b, c):
    return v_dot(a, v_cross(b, c))


def validate_general_position(emb: PLEmbedding, direction: ProjectionDirection):
    """Exact genericity check of the projection along ``direction``.

    Raises GenericPositionViolation classed by failure kind:
      a: two segment projections overlap in a subsegment
      b: two crossings coincide (three segments through a point)
      c: a crossing point coincides with a projected vertex
      d: an endpoint of a segment lies on another segment's projection
    """
    proj = {v: direction.planar(p)[:2] for v, p in emb.coords.items()}
    pts = {}
    for v, p in proj.items():
        if p in pts:
            raise GenericPositionViolation(
                f"vertices {pts[p]},{v} project together", kind="c", items=(pts[p], v)
            )
        pts[p] = v
    eids = sorted(emb.graph.edges, key=str)
    # vertex on non-incident projected segment
    for w in emb.graph.vertices:
        pw = proj[w]
        for eid in eids:
            u, v = emb.graph.edges[eid]
            if w in (u, v):
                continue
            if _on_segment_2d(proj[u], proj[v], pw):
                raise GenericPositionViolation(
                    f"vertex {w} projects onto edge {eid}", kind="c", items=(w, eid)
                )
    crossings = []
    for i, e1 in enumerate(eids):
        u1, v1 = emb.graph.edges[e1]
        a1, b1 = proj[u1], proj[v1]
        for e2 in eids[i + 1 :]:
            u2, v2 = emb.graph.edges[e2]
            a2, b2 = proj[u2], proj[v2]
            shared = {u1, v1} & {u2, v2}
            if shared:
                d1 = sub2(b1, a1) if u1 in shared else sub2(a1, b1)
                d2 = sub2(b2, a2) if u2 in shared else sub2(a2, b2)
                # directions leaving the shared vertex
                if cross2(d1, d2) == 0 and dot2(d1, d2) > 0:
                    raise GenericPositionViolation(
                        f"edges {e1},{e2} overlap at shared vertex",
                        kind="a",
                        items=(e1, e2),
                    )
                continue
            hit = _seg_cross_2d(a1, b1, a2, b2)
            if hit == "overlap":
                raise GenericPositionViolation(
                    f"edges {e1},{e2} project onto a common subsegment",
                    kind="a",
                    items=(e1, e2),
                )
            if hit == "touch":
                raise GenericPositionViolation(
                    f"edges {e1},{e2} touch non-transversally in projection",
                    kind="d",
                    items=(e1, e2),
                )
            if hit is not None:
                s, t, pt = hit
                crossings.append((e1, e2, s, t, pt))
    seen_pts = {}
    for e1, e2, s, t, pt in crossings:
        if pt in seen_pts:
            raise GenericPositionViolation(
                f"crossings {seen_pts[pt]} and {(e1, e2)} coincide",
                kind="b",
                items=(seen_pts[pt], (e1, e2)),
            )
        seen_pts[pt] = (e1, e2)
    return crossings


def _on_segment_2d(a, b, p):
    d = sub2(b, a)
    r = sub2(p, a)
    if cross2(d, r) != 0:
        return False
    t = dot2(r, d)
    return 0 <= t <= dot2(d, d)


def _seg_cross_2d(a1, b1, a2, b2):
    """Interior transverse crossing of 2D segments, else a degeneracy tag.

    Returns (s, t, point) with s, t in (0,1), or 'overlap', 'touch', or
    None."""
    d1 = sub2(b1, a1)
    d2 = sub2(b2, a2)
    r = sub2(a2, a1)
    den = cross2(d1, d2)
    if den == 0:
        if cross2(r, d1) != 0:
            return None
        dd = dot2(d1, d1)
        t0 = dot2(r, d1)
        t1 = t0 + dot2(d2, d1)
        lo, hi = min(t0, t1), max(t0, t1)
        if hi < 0 or lo > dd:
            return None
        if min(hi, dd) == max(lo, 0):
            return "touch"
        return "overlap"
    s = Fraction(cross2(r, d2), den)
    t = Fraction(cross2(r, d1), den)
    if s < 0 or s > 1 or t < 0 or t > 1:
        return None
    if s in (0, 1) or t in (0, 1):
        return "touch"
    pt = (a1[0] + s * d1[0], a1[1] + s * d1[1])
    return s, t, pt


def generic_direction(emb: PLEmbedding, rng_or_seed=0, budget=64):
    """Sample integer directions until the projection is generic."""
    rng = rng_or_seed if isinstance(rng_or_seed, random.Random) else random.Random(rng_or_seed)
    rejected = []
    for _ in range(budget):
        d = ProjectionDirection(
            vec3(rng.randint(-999, 999), rng.randint(-999, 999), rng.randint(1, 999))
        )
        try:
            validate_general_position(emb, d)
            return d, rejected
        except GenericPositionViolation as exc:
            rejected.append((d, exc.details.get("kind")))
    raise RetryExhausted("no generic projection direction found", rejected=rejected)


# ---------------------------------------------------------------------------
# generators


def random_embedding(graph: AbstractGraph, seed: int, coordinate_bits: int, budget=200):
    """Uniform integer coordinates in [0, 2^bits), resampled from the seed
    stream until the embedding invariants hold."""
    if coordinate_bits < 4:
        raise LinkForgeError("coordinate_bits must be at least 4")
    rng = random.Random(seed)
    hi = 2**coordinate_bits - 1
    for _ in range(budget):
        coords = {
            v: vec3(rng.randint(0, hi), rng.randint(0, hi), rng.randint(0, hi))
            for v in graph.vertices
        }
        emb = PLEmbedding(graph, coords)
        try:
            emb.validate()
            return emb
        except LinkForgeError:
            continue
    raise RetryExhausted(
        f"no valid embedding after {budget} draws; coordinate_bits too small?"
    )


def mirror_embedding(emb: PLEmbedding) -> PLEmbedding:
    """Reflect through the xy-plane; linking numbers negate, each cycle's
    Conway z^2 coefficient is preserved."""
    return emb.mapped(lambda p: (p[0], p[1], -p[2]))


def _circle_point(i, n):
    """Exact rational point on the unit circle near angle 2*pi*i/n."""
    i = i % n
    if 2 * i == n:
        return Fraction(-1), Fraction(0)
    half = math.pi * i / n
    t = Fraction(round(math.tan(half) * 4096), 4096)
    den = 1 + t * t
    return (1 - t * t) / den, 2 * t / den


def torus_link_fixture(c: int, lam: int, segments_per_curve: int, seed=0, budget=8):
    """c pairwise-disjoint closed curves winding once around a common
    torus's long way and ``lam`` times the short way, phase-offset so all
    pairs link exactly ``lam``.

    Returns (embedding, cycles) where cycles are OrientedCycle objects
    over the fixture graph.
    """
    from .cyclecalc import OrientedCycle  # local import avoids a cycle

    if c < 2 or lam < 1:
        raise LinkForgeError("need c >= 2 and lam >= 1")
    n = segments_per_curve
    if n < 4 * lam + 4:
        raise LinkForgeError("segments_per_curve must be at least 4*lam + 4")
    big_r = Fraction(8)
    for attempt in range(budget):
        verts = {}
        edges = {}
        cycles = []
        small_r = Fraction(1, 1 + attempt)
        for j in range(c):
            names = [f"c{j}s{i}" for i in range(n)]
            step_ids = []
            for i in range(n):
                cu, su = _circle_point(i, n)
                # minor angle: lam windings plus a per-curve phase; winding
                # sense chosen so every pair links +lam, not -lam
                cv, sv = _circle_point(i * lam * c + j, n * c)
                rad = big_r + small_r * cv
                verts[names[i]] = (rad * cu, rad * su, -small_r * sv)
            for i in range(n):
                eid = f"c{j}e{i}"
                edges[eid] = (names[i], names[(i + 1) % n])
                step_ids.append((eid, 1))
            cycles.append(tuple(step_ids))
        graph = AbstractGraph(tuple(verts), edges)
        emb = PLEmbedding(graph, verts)
        try:
            emb.validate()
        except LinkForgeError:
            continue
        oriented = [OrientedCycle.from_steps(graph, st) for st in cycles]
        if _torus_fixture_ok(emb, oriented, lam, seed):
            return emb, oriented
    raise FixtureDegenerate("could not realize torus curve family")


def _torus_fixture_ok(emb, cycles, lam, seed):
    from .diagram import project
    from .invariants import linking_number

    try:
        d, _ = project_generic(emb, seed)
    except RetryExhausted:
        return False
    for i in range(len(cycles)):
        for j in range(i + 1, len(cycles)):
            if linking_number(d, cycles[i], cycles[j]) != lam:
                return False
    return True


def project_generic(emb: PLEmbedding, seed=0, budget=64):
    """Project along a sampled generic direction; returns (Diagram, dir)."""
    from .diagram import project

    rng = random.Random(seed)
    # try the plain z-axis first so simple fixtures stay readable
    for d in [ProjectionDirection(vec3(0, 0, 1))]:
        try:
            return project(emb, d), d
        except GenericPositionViolation:
            pass
    d, _ = generic_direction(emb, rng, budget)
    return project(emb, d), d


def keyring_fixture(n_keys: int, spacing=4):
    """One rectangular ring threaded by ``n_keys`` rectangular keys.

    lk(ring, key_i) = 1 for every i and lk(key_i, key_j) = 0 for i != j
    with the returned orientations.
    """
    from .cyclecalc import OrientedCycle

    if n_keys < 1:
        raise LinkForgeError("need at least one key")
    span = spacing * (n_keys + 1)
    verts = {
        "r0": vec3(0, -2, 0),
        "r1": vec3(span, -2, 0),
        "r2": vec3(span, 2, 1),
        "r3": vec3(0, 2, 1),
    }
    edges = {
        "re0": ("r0", "r1"),
        "re1": ("r1", "r2"),
        "re2": ("r2", "r3"),
        "re3": ("r3", "r0"),
    }
    ring_steps = [("re0", 1), ("re1", 1), ("re2", 1), ("re3", 1)]
    key_steps = []
    for i in range(n_keys):
        x = spacing * (i + 1)
        names = [f"k{i}v{j}" for j in range(4)]
        verts[names[0]] = vec3(x, -3, -1)
        verts[names[1]] = vec3(Fraction(4 * x + 1, 4), -1, -1)
        verts[names[2]] = vec3(x, -1, 2)
        verts[names[3]] = vec3(Fraction(4 * x - 1, 4), -3, 2)
        st = []
        for j in range(4):
            eid = f"k{i}e{j}"
            edges[eid] = (names[j], names[(j + 1) % 4])
            st.append((eid, 1))
        key_steps.append(st)
    graph = AbstractGraph(tuple(verts), edges)
    emb = PLEmbedding(graph, verts)
    emb.validate()
    ring = OrientedCycle.from_steps(graph, ring_steps)
    keys = [OrientedCycle.from_steps(graph, st) for st in key_steps]
    # normalize orientations so every ring-key pair links +1
    from .invariants import linking_number

    d, _ = project_generic(emb, seed=1)
    fixed = []
    for k in keys:
        v = linking_number(d, ring, k)
        if abs(v) != 1:
            raise FixtureDegenerate(f"key links ring with {v}")
        fixed.append(k if v == 1 else k.reversed())
    for i in range(len(fixed)):
        for j in range(i + 1, len(fixed)):
            if linking_number(d, fixed[i], fixed[j]) != 0:
                raise FixtureDegenerate("keys are mutually linked")
    return emb, ring, fixed


# ---------------------------------------------------------------------------
# serialization


def fraction_to_str(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def fraction_from_str(s) -> Fraction:
    return Fraction(s)


def embedding_to_dict(emb: PLEmbedding) -> dict:
    verts = [
        {
            "id": v,
            "x": fraction_to_str(p[0]),
            "y": fraction_to_str(p[1]),
            "z": fraction_to_str(p[2]),
        }
        for v, p in sorted(emb.coords.items(), key=lambda kv: str(kv[0]))
    ]
    edges = []
    for eid, (u, v) in sorted(emb.graph.edges.items(), key=lambda kv: str(kv[0])):
        rec = {"id": eid, "u": u, "v": v}
        if eid in emb.graph.weights:
            rec["weight"] = emb.graph.weights[eid]
        edges.append(rec)
    return {"vertices": verts, "edges": edges}


def embedding_from_dict(data: dict) -> PLEmbedding:
    coords = {}
    for rec in data["vertices"]:
        coords[rec["id"]] = (
            fraction_from_str(rec["x"]),
            fraction_from_str(rec["y"]),
            fraction_from_str(rec["z"]),
        )
    edges = {}
    weights = {}
    for rec in data["edges"]:
        edges[rec["id"]] = (rec["u"], rec["v"])
        if "weight" in rec:
            weights[rec["id"]] = rec["weight"]
    graph = AbstractGraph(tuple(coords), edges, weights)
    emb = PLEmbedding(graph, coords)
    emb.validate()
    return emb
