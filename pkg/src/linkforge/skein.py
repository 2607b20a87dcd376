"""Independent Conway-polynomial oracle: exponential skein recursion.

Uses only the relation nabla(L+) - nabla(L-) = z * nabla(L0) with
nabla(unknot) = 1 and nabla(split link) = 0, by switching the first
crossing met on its understrand during a fixed traversal (which strictly
approaches a descending, hence trivial, diagram) and smoothing it.
Deliberately shares no code with the Seifert-matrix route beyond the
shadow input.
"""

from __future__ import annotations

from .errors import OracleCapExceeded
from .shadow import LinkShadow

DEFAULT_ORACLE_CAP = 16


def poly_add(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
        if out[k] == 0:
            del out[k]
    return out


def poly_scale(a, s):
    return {k: v * s for k, v in a.items() if v * s != 0}


def poly_shift(a):
    """Multiply by z."""
    return {k + 1: v for k, v in a.items()}


def conway_from_shadow(shadow: LinkShadow, cap=DEFAULT_ORACLE_CAP):
    if len(shadow.signs) > cap:
        raise OracleCapExceeded(
            f"{len(shadow.signs)} crossings exceed the oracle cap {cap}"
        )
    comps = tuple(
        tuple((p.crossing, p.over) for p in comp) for comp in shadow.components
    )
    signs = dict(shadow.signs)
    memo = {}
    return _conway(comps, signs, memo)


def _state_key(comps, signs):
    parts = []
    for comp in comps:
        if comp:
            rots = [comp[i:] + comp[:i] for i in range(len(comp))]
            parts.append(min(rots))
        else:
            parts.append(())
    parts.sort()
    return (tuple(parts), tuple(sorted(signs.items())))


def _first_bad(comps):
    """First passage whose crossing is first met on the understrand."""
    seen = set()
    for ci, comp in enumerate(comps):
        for pi, (x, over) in enumerate(comp):
            if x in seen:
                continue
            if not over:
                return ci, pi, x
            seen.add(x)
    return None


def _switch(comps, signs, x):
    new_comps = tuple(
        tuple((c, (not o) if c == x else o) for c, o in comp) for comp in comps
    )
    new_signs = dict(signs)
    new_signs[x] = -new_signs[x]
    return new_comps, new_signs


def _smooth(comps, signs, x):
    """Oriented smoothing: delete crossing x, reconnecting the strands."""
    locs = []
    for ci, comp in enumerate(comps):
        for pi, (c, _) in enumerate(comp):
            if c == x:
                locs.append((ci, pi))
    (c1, i1), (c2, i2) = locs
    new_signs = {k: v for k, v in signs.items() if k != x}
    comps = list(comps)
    if c1 == c2:
        comp = comps[c1]
        i1, i2 = sorted((i1, i2))
        a = comp[i1 + 1 : i2]
        b = comp[i2 + 1 :] + comp[:i1]
        comps[c1] = a
        comps.append(b)
    else:
        p1, p2 = comps[c1], comps[c2]
        merged = p1[:i1] + p2[i2 + 1 :] + p2[:i2] + p1[i1 + 1 :]
        keep = [comps[k] for k in range(len(comps)) if k not in (c1, c2)]
        comps = keep + [merged]
    return tuple(comps), new_signs


def _conway(comps, signs, memo):
    key = _state_key(comps, signs)
    if key in memo:
        return memo[key]
    bad = _first_bad(comps)
    if bad is None:
        result = {0: 1} if len(comps) == 1 else {}
    else:
        _, _, x = bad
        s = signs[x]
        switched = _conway(*_switch(comps, signs, x), memo)
        smoothed = _conway(*_smooth(comps, signs, x), memo)
        # nabla(L+) = nabla(L-) + z nabla(L0); here the diagram is L+ when
        # the bad crossing is positive.
        result = poly_add(switched, poly_scale(poly_shift(smoothed), s))
    memo[key] = result
    return result
