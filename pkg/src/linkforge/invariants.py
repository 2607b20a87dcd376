"""Integer link and knot invariants computed from diagrams: linking
number, its mod-2 reduction, and the Conway z^2 coefficient, with an
independent skein-recursion oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

from .cyclecalc import OrientedCycle, cycles_disjoint
from .errors import CyclesNotDisjoint, LinkForgeError, ParityError
from .shadow import extract_shadow
from . import skein as _skein
from . import seifert as _seifert


@dataclass
class ConwayPolynomial:
    coeffs: dict  # exponent -> nonzero integer coefficient

    def coefficient(self, k):
        return self.coeffs.get(k, 0)

    def check_knot(self):
        if self.coefficient(0) != 1 or any(k % 2 for k in self.coeffs):
            raise LinkForgeError(f"not a knot Conway polynomial: {self.coeffs}")

    def check_two_component(self):
        if any(k % 2 == 0 for k in self.coeffs):
            raise LinkForgeError(
                f"not a 2-component link Conway polynomial: {self.coeffs}"
            )

    def to_dict(self):
        return {"coeffs": {str(k): v for k, v in sorted(self.coeffs.items())}}

    @staticmethod
    def from_dict(data):
        return ConwayPolynomial({int(k): v for k, v in data["coeffs"].items()})


@dataclass
class LinkingMatrix:
    components: list  # cycle labels in order
    entries: dict  # frozenset({i, j}) -> integer, vertex-disjoint pairs only

    def get(self, i, j):
        return self.entries[frozenset((i, j))]

    def to_dict(self):
        return {
            "components": [str(c) for c in self.components],
            "entries": [
                {"i": sorted(pair)[0], "j": sorted(pair)[1], "lk": v}
                for pair, v in sorted(self.entries.items(), key=lambda kv: sorted(kv[0]))
            ],
        }


def _cycle_signed_crossings(d, c1: OrientedCycle, c2: OrientedCycle):
    e1 = {eid: dirn for eid, dirn in c1.steps}
    e2 = {eid: dirn for eid, dirn in c2.steps}
    total = 0
    count = 0
    for c in d.crossings:
        if c.edge_a in e1 and c.edge_b in e2:
            total += c.handedness * e1[c.edge_a] * e2[c.edge_b]
            count += 1
        elif c.edge_a in e2 and c.edge_b in e1:
            total += c.handedness * e2[c.edge_a] * e1[c.edge_b]
            count += 1
    return total, count


def linking_number(d, c1: OrientedCycle, c2: OrientedCycle) -> int:
    """Half the signed sum of inter-component crossings."""
    if not cycles_disjoint(c1, c2):
        raise CyclesNotDisjoint("linking number needs vertex-disjoint cycles")
    total, _ = _cycle_signed_crossings(d, c1, c2)
    if total % 2 != 0:
        raise ParityError(f"odd inter-component crossing sum {total}")
    return total // 2


def mod2_linking(d, c1, c2) -> int:
    return linking_number(d, c1, c2) % 2


def linking_matrix(d, link, labels=None) -> LinkingMatrix:
    labels = labels if labels is not None else list(range(len(link)))
    entries = {}
    for i in range(len(link)):
        for j in range(i + 1, len(link)):
            entries[frozenset((labels[i], labels[j]))] = linking_number(
                d, link[i], link[j]
            )
    return LinkingMatrix(list(labels), entries)


def conway_a2(d, cycle: OrientedCycle) -> int:
    """z^2 Conway coefficient via Seifert's algorithm on the cycle's own
    knot diagram; orientation-independent and mirror-invariant."""
    v, _ = _seifert.seifert_matrix(d, cycle)
    return _seifert.conway_z2_from_seifert(v)


def conway_skein(d, cycles, cap=_skein.DEFAULT_ORACLE_CAP) -> ConwayPolynomial:
    """Exact Conway polynomial by skein recursion (the independent
    oracle; exponential, capped)."""
    if isinstance(cycles, OrientedCycle):
        cycles = [cycles]
    shadow = extract_shadow(d, list(cycles))
    poly = ConwayPolynomial(_skein.conway_from_shadow(shadow, cap))
    if len(cycles) == 1:
        poly.check_knot()
    elif len(cycles) == 2:
        poly.check_two_component()
    return poly
