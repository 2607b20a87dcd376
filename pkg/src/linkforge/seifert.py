"""Seifert-matrix route to the Conway z^2 coefficient of a knot.

Pipeline: smooth every self-crossing of the cycle coherently, realize the
resulting circles as exact planar polygons to read off nesting depth and
handedness, stack their disks by depth, take the cycle-space basis given
by a spanning tree of the circle/band graph, and count the projected
crossings between each basis loop's positive pushoff and every basis
loop symbolically (rails along disk rims, jogs at band feet, transits
through bands).  The determinant det(xV - x^-1 V^T) is evaluated exactly
in Z[eps]/(eps^3) at x = 1 + eps, whose eps^2 coefficient is 4*a2.

Structural self-checks: the constant term must be det(V - V^T) = 1 and
the linear term 0; both fail loudly if the crossing enumeration is ever
inconsistent.  The skein oracle referees the whole route in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import LinkForgeError, NotAKnot
from .geometry import cross2
from .shadow import knot_shadow_with_geometry

# chirality conventions of the flattened-surface model, pinned by
# calibration against the skein oracle (scripts/calibrate_seifert.py)
NU_CAL = 1  # disk normal points up exactly on counterclockwise circles
SIB_TWIST = ("s", 1)  # sibling-band half-twist sign: ("s"|"so", +-1)
SIB_OVER_BIT = 0  # which lane passes over in a sibling band
NESTED_SELF = ("pos", -1)  # pushoff self-crossing in nested bands

RAIL = (1, 0)  # local frame: (along circle, inward)


def _det2(a, b):
    return a[0] * b[1] - a[1] * b[0]


@dataclass
class _Visit:
    circle: int
    band_in: int
    band_out: int


@dataclass
class _Loop:
    index: int
    inset: Fraction
    visits: dict  # circle -> _Visit
    bands: dict  # band (crossing id) -> direction (+1 canonical)
    lanes: dict  # band -> Fraction lane
    spans: dict = None  # circle -> (angle_in, angle_out)
    jogs: dict = None  # circle -> [(angle, +1 inward | -1 outward)]


class SeifertStructure:
    """Smoothed-circle data of one cycle's self-crossing diagram."""

    def __init__(self, diagram, cycle):
        shadow, walk_pts, positions = knot_shadow_with_geometry(diagram, cycle)
        self.signs = shadow.signs
        passages = shadow.components[0]
        if len(passages) != len(positions):
            raise LinkForgeError("passage/geometry mismatch")
        n = len(passages)
        self.n_pass = n
        self.crossing_of = [p.crossing for p in passages]
        partner = {}
        for i, p in enumerate(passages):
            partner.setdefault(p.crossing, []).append(i)
        for x, pair in partner.items():
            if len(pair) != 2:
                raise NotAKnot(f"crossing {x} visited {len(pair)} times")
        self.partner = {}
        for a, b in partner.values():
            self.partner[a] = b
            self.partner[b] = a
        self.walk_pts = walk_pts
        self.positions = positions
        self._build_circles()
        self._build_geometry()
        self._classify_bands()

    # -- combinatorial circles

    def _build_circles(self):
        n = self.n_pass
        succ = {i: self.partner[(i + 1) % n] for i in range(n)} if n else {}
        seen = set()
        self.circles = []
        self.circle_of_interval = {}
        for start in range(n):
            if start in seen:
                continue
            orbit = []
            i = start
            while i not in seen:
                seen.add(i)
                orbit.append(i)
                i = succ[i]
            idx = len(self.circles)
            for j in orbit:
                self.circle_of_interval[j] = idx
            self.circles.append(orbit)
        self.feet = []
        self.foot_pos = []
        for orbit in self.circles:
            feet = [self.crossing_of[(i + 1) % n] for i in orbit]
            self.feet.append(feet)
            self.foot_pos.append({x: k for k, x in enumerate(feet)})
        self.band_circles = {}
        for x in self.signs:
            p, q = [i for i in range(n) if self.crossing_of[i] == x]
            a = self.circle_of_interval[p]
            b = self.circle_of_interval[q]
            if a == b:
                raise LinkForgeError("smoothed circle meets itself at a crossing")
            self.band_circles[x] = (a, b)

    # -- planar realization

    def _point_at(self, pos):
        seg, t = pos
        w = self.walk_pts
        a = w[seg]
        b = w[(seg + 1) % len(w)]
        return (a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]))

    def _piece(self, i):
        """Planar polyline of interval i (passage i to passage i+1)."""
        n = self.n_pass
        w = self.walk_pts
        s0, t0 = self.positions[i]
        s1, t1 = self.positions[(i + 1) % n]
        pts = [self._point_at((s0, t0))]
        wrap = (s1, t1) < (s0, t0) or ((s1, t1) == (s0, t0) and n == 1)
        seg = s0
        count = 0
        while True:
            if seg == s1 and not wrap:
                break
            nxt = (seg + 1) % len(w)
            pts.append(w[nxt])
            if nxt == s1:
                wrap = False
                if (s1, t1) >= (nxt, Fraction(0)):
                    break
            seg = nxt
            count += 1
            if count > 2 * len(w) + 2:
                raise LinkForgeError("interval walk failed to close")
        pts.append(self._point_at((s1, t1)))
        return pts

    def _build_geometry(self):
        self.polygons = []
        for orbit in self.circles:
            poly = []
            for i in orbit:
                piece = self._piece(i)
                if poly:
                    piece = piece[1:]
                poly.extend(piece[:-1] if i == orbit[-1] and len(orbit) > 0 else piece)
            # drop consecutive duplicates defensively
            clean = [poly[0]]
            for p in poly[1:]:
                if p != clean[-1]:
                    clean.append(p)
            if clean[0] == clean[-1]:
                clean.pop()
            self.polygons.append(clean)
        self.orient = []
        self.samples = []
        for poly in self.polygons:
            area2 = sum(
                cross2(poly[k], poly[(k + 1) % len(poly)]) for k in range(len(poly))
            )
            if area2 == 0:
                raise LinkForgeError("degenerate smoothed circle")
            self.orient.append(1 if area2 > 0 else -1)
            a, b = poly[0], poly[1]
            self.samples.append(((a[0] + b[0]) / 2, (a[1] + b[1]) / 2))
        self.depth = []
        for gi, q in enumerate(self.samples):
            d = 0
            for gj, poly in enumerate(self.polygons):
                if gj != gi and _winding(poly, q) != 0:
                    d += 1
            self.depth.append(d)

    def _classify_bands(self):
        self.band_kind = {}
        self.band_outer = {}
        for x, (a, b) in self.band_circles.items():
            da, db = self.depth[a], self.depth[b]
            if da == db:
                self.band_kind[x] = "sibling"
            elif abs(da - db) == 1:
                self.band_kind[x] = "nested"
                self.band_outer[x] = a if da < db else b
            else:
                raise LinkForgeError(
                    f"band joins circles at depths {da},{db}"
                )


def _winding(poly, q):
    w = 0
    qx, qy = q
    for k in range(len(poly)):
        a = poly[k]
        b = poly[(k + 1) % len(poly)]
        if a[1] <= qy < b[1]:
            if cross2((b[0] - a[0], b[1] - a[1]), (qx - a[0], qy - a[1])) > 0:
                w += 1
        elif b[1] <= qy < a[1]:
            if cross2((b[0] - a[0], b[1] - a[1]), (qx - a[0], qy - a[1])) < 0:
                w -= 1
    return w


# ---------------------------------------------------------------------------
# basis loops


def _spanning_tree(struct: SeifertStructure):
    adj = {}
    for x, (a, b) in sorted(struct.band_circles.items()):
        adj.setdefault(a, []).append((b, x))
        adj.setdefault(b, []).append((a, x))
    for k in adj:
        adj[k].sort()
    parent = {0: (None, None)}
    order = [0]
    q = [0]
    while q:
        v = q.pop(0)
        for w, x in adj.get(v, []):
            if w not in parent:
                parent[w] = (v, x)
                order.append(w)
                q.append(w)
    if len(parent) != len(struct.circles):
        raise LinkForgeError("circle/band graph is disconnected")
    tree_bands = {x for (_, x) in parent.values() if x is not None}
    chords = sorted(x for x in struct.band_circles if x not in tree_bands)
    return parent, chords


def _tree_path(parent, u, v):
    """Circles and bands along the tree path u -> v."""
    up_u = []
    a = u
    while a is not None:
        up_u.append(a)
        a = parent[a][0]
    anc = set(up_u)
    path_v = []
    b = v
    while b not in anc:
        path_v.append(b)
        b = parent[b][0]
    meet = b
    path = []
    a = u
    while a != meet:
        path.append((a, parent[a][1]))
        a = parent[a][0]
    tail = []
    b = v
    while b != meet:
        tail.append((b, parent[b][1]))
        b = parent[b][0]
    circles = [c for c, _ in path] + [meet] + [c for c, _ in reversed(tail)]
    bands = [x for _, x in path] + [x for _, x in reversed(tail)]
    return circles, bands


def _build_loops(struct: SeifertStructure):
    parent, chords = _spanning_tree(struct)
    loops = []
    for li, x in enumerate(chords):
        a, b = struct.band_circles[x]
        lo, hi = (a, b) if a < b else (b, a)
        circles, bands = _tree_path(parent, hi, lo)
        # cyclic itinerary: lo --x--> hi --tree--> ... --> (lo)
        seq_circles = [lo] + circles[:-1]
        seq_bands = [x] + bands
        ncirc = len(seq_circles)
        m = len(seq_bands)
        if m != ncirc:
            raise LinkForgeError("loop band/circle count mismatch")
        # visit k sits between band k-1 (in) and band k (out)
        visits = {}
        for k in range(ncirc):
            c = seq_circles[k]
            if c in visits:
                raise LinkForgeError("loop revisits a circle")
            visits[c] = _Visit(c, seq_bands[(k - 1) % m], seq_bands[k % m])
        bands_dir = {}
        for k in range(m):
            frm = seq_circles[k]
            to = seq_circles[(k + 1) % ncirc]
            band = seq_bands[k]
            lo_c = min(struct.band_circles[band])
            bands_dir[band] = 1 if frm == lo_c else -1
        loops.append(
            _Loop(li, Fraction(li + 1), visits, bands_dir, {})
        )
    # lanes: rank of loop index among a band's users
    users = {}
    for lp in loops:
        for x in lp.bands:
            users.setdefault(x, []).append(lp.index)
    for x, us in users.items():
        for rank, li in enumerate(sorted(us)):
            loops[li].lanes[x] = Fraction(rank + 1)
    for lp in loops:
        _fill_features(struct, lp)
    return loops


def _micro(struct, band, circle, lane):
    # walk-offset order of strands is preserved through a band
    return lane


def _fill_features(struct, lp: _Loop):
    lp.spans = {}
    lp.jogs = {}
    for c, visit in lp.visits.items():
        a_in = (
            struct.foot_pos[c][visit.band_in],
            _micro(struct, visit.band_in, c, lp.lanes[visit.band_in]),
        )
        a_out = (
            struct.foot_pos[c][visit.band_out],
            _micro(struct, visit.band_out, c, lp.lanes[visit.band_out]),
        )
        lp.spans[c] = (a_in, a_out)
        lp.jogs[c] = [(a_in, 1), (a_out, -1)]


def _pushoff(lp: _Loop) -> _Loop:
    return _Loop(
        lp.index,
        lp.inset + Fraction(1, 2),
        lp.visits,
        lp.bands,
        {x: lane + Fraction(1, 2) for x, lane in lp.lanes.items()},
        None,
        None,
    )


def _span_contains(span, theta):
    a, b = span
    if theta == a or theta == b:
        return False
    if a < b:
        return a < theta < b
    return theta > a or theta < b


def _pair_sum(struct: SeifertStructure, base_p: _Loop, q: _Loop):
    """Signed count of crossings where the pushoff of base_p passes over
    q, in the stacked-disk model."""
    p = _pushoff(base_p)
    p_spans = {}
    p_jogs = {}
    for c, visit in p.visits.items():
        a_in = (
            struct.foot_pos[c][visit.band_in],
            _micro(struct, visit.band_in, c, p.lanes[visit.band_in]),
        )
        a_out = (
            struct.foot_pos[c][visit.band_out],
            _micro(struct, visit.band_out, c, p.lanes[visit.band_out]),
        )
        p_spans[c] = (a_in, a_out)
        p_jogs[c] = [(a_in, 1), (a_out, -1)]
    total = 0
    # rule A: jogs against rails on shared disks
    for c in set(p.visits) & set(q.visits):
        o = struct.orient[c]
        p_over = (o * NU_CAL) == 1
        if not p_over:
            continue
        for theta, jdir in p_jogs[c]:
            if q.inset < p.inset and _span_contains(q.spans[c], theta):
                total += o * _det2((0, jdir), RAIL)
        for theta, jdir in q.jogs[c]:
            if p.inset < q.inset and _span_contains(p_spans[c], theta):
                total += o * _det2(RAIL, (0, jdir))
    # rule B: transits climbing over rails of the outer circle
    for x, pdir in p.bands.items():
        if struct.band_kind[x] != "nested":
            continue
        outer = struct.band_outer[x]
        if outer not in q.visits:
            continue
        theta = (
            struct.foot_pos[outer][x],
            _micro(struct, x, outer, p.lanes[x]),
        )
        if _span_contains(q.spans[outer], theta):
            leaving = p.visits[outer].band_out == x
            tvec = (0, 1) if leaving else (0, -1)
            total += struct.orient[outer] * _det2(tvec, RAIL)
    # rule C: in-band crossings.  Nested bands project injectively, so
    # only the pushoff of a strand crosses that same strand (once, over
    # exactly on counterclockwise-circle bands); sibling bands carry a
    # half twist, so every pair of strands through one crosses once.
    same_loop = base_p.index == q.index
    for x in set(p.bands) & set(q.bands):
        s = struct.signs[x]
        if struct.band_kind[x] == "nested":
            if not same_loop:
                continue
            a, _ = struct.band_circles[x]
            o = struct.orient[a]
            mode, sgn = NESTED_SELF
            cond = o == (1 if mode == "pos" else -1)
            if cond:
                total += sgn * s
        else:
            anchor = min(struct.band_circles[x])
            o_a = struct.orient[anchor]
            mode, sgn = SIB_TWIST
            tau = sgn * s * (o_a if mode == "so" else 1)
            p_lower = p.lanes[x] < q.lanes[x]
            over_p = p_lower ^ (tau == -1) ^ bool(SIB_OVER_BIT)
            if over_p:
                total += tau * p.bands[x] * q.bands[x]
    return total


def seifert_matrix(diagram, cycle):
    """Integer Seifert matrix of the cycle's knot diagram."""
    struct = SeifertStructure(diagram, cycle)
    loops = _build_loops(struct)
    n = len(loops)
    v = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            v[i][j] = _pair_sum(struct, loops[i], loops[j])
    return v, struct


# ---------------------------------------------------------------------------
# determinant over Z[eps]/(eps^3)


def _emul(a, b):
    return (
        a[0] * b[0],
        a[0] * b[1] + a[1] * b[0],
        a[0] * b[2] + a[1] * b[1] + a[2] * b[0],
    )


def _esub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _ediv(a, b):
    if b[0] == 0:
        raise LinkForgeError("division by non-unit in truncated ring")
    x0, r0 = divmod(a[0], b[0])
    x1, r1 = divmod(a[1] - x0 * b[1], b[0])
    x2, r2 = divmod(a[2] - x0 * b[2] - x1 * b[1], b[0])
    if r0 or r1 or r2:
        raise LinkForgeError("inexact division in fraction-free elimination")
    return (x0, x1, x2)


def _eps_det(m):
    """Fraction-free determinant of a matrix over Z[eps]/(eps^3)."""
    n = len(m)
    if n == 0:
        return (1, 0, 0)
    m = [row[:] for row in m]
    sign = 1
    prev = (1, 0, 0)
    for k in range(n - 1):
        piv = None
        for i in range(k, n):
            for j in range(k, n):
                if m[i][j][0] != 0:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            raise LinkForgeError("matrix is singular modulo eps")
        pi, pj = piv
        if pi != k:
            m[k], m[pi] = m[pi], m[k]
            sign = -sign
        if pj != k:
            for row in m:
                row[k], row[pj] = row[pj], row[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _ediv(
                    _esub(_emul(m[k][k], m[i][j]), _emul(m[i][k], m[k][j])), prev
                )
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return (sign * d[0], sign * d[1], sign * d[2])


def conway_z2_from_seifert(v):
    """z^2 coefficient of det(xV - x^-1 V^T) under z = x - x^-1.

    Substituting x = 1 + eps truncated at eps^3 turns the determinant
    into 1 + 4*a2*eps^2 for a knot Seifert matrix."""
    n = len(v)
    if n % 2 != 0:
        raise LinkForgeError(f"Seifert matrix of odd rank {n}")
    m = [
        [
            (v[i][j] - v[j][i], v[i][j] + v[j][i], -v[j][i])
            for j in range(n)
        ]
        for i in range(n)
    ]
    c0, c1, c2 = _eps_det(m)
    if c0 != 1:
        raise LinkForgeError(f"intersection form determinant {c0}, expected 1")
    if c1 != 0:
        raise LinkForgeError("odd Conway coefficient appeared for a knot")
    if c2 % 4 != 0:
        raise LinkForgeError("z^2 coefficient is not integral")
    return c2 // 4
