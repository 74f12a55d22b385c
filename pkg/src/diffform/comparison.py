"""Chain map from classical cochains into the global-form complex.

Built from the closed anchor forms chi_p on the standard p-simplex (vanishing
on all faces) and the primitives omega_{p+1} with d omega_{p+1} = chi_{p+1}
and last face chi_p, all solved from face-constraint linear systems. The map
pairs a cochain m with a universal family of forms per simplex dimension,
solved level by level so that the result is face-compatible and a chain map;
all solutions are lexicographic-least for determinism.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .line import SupportSet, UNIT
from .ring import QQ, RingSpec, solve_sparse_affine
from .simplex import (
    simplex_basis,
    simplex_d,
    simplex_form,
    restrict_to_slots,
)


class Unsolvable(ValueError):
    def __init__(self, stage: str, support: SupportSet, needed: int):
        self.stage = stage
        self.needed = needed
        super().__init__(
            f"{stage}: no solution over support window {tuple(support)}; "
            f"retry with a window of at least {needed} elements"
        )


def _coerce_coords(coords: dict, ring: RingSpec) -> dict:
    out = {}
    for k, v in coords.items():
        v = ring.coerce(v)
        if not ring.is_zero(v):
            out[k] = v
    return out


def _face_table(n: int, p: int, i: int, support: SupportSet) -> dict:
    """word -> face word (coefficient 1) for the i-th face on degree-p words."""
    table = {}
    for w in simplex_basis(n, support, p):
        r = restrict_to_slots(
            simplex_form(QQ, n, {w: 1}, support),
            tuple(k for k in range(n + 1) if k != i),
        )
        for nw in r.terms:
            table[w] = nw
    return table


def _d_table(n: int, p: int, support: SupportSet) -> dict:
    """word -> dict of image words under the differential."""
    table = {}
    for w in simplex_basis(n, support, p):
        img = simplex_d(simplex_form(QQ, n, {w: 1}, support))
        table[w] = {nw: c for nw, c in img.terms.items()}
    return table


def chi_ladder(top: int, support: SupportSet, ring: RingSpec):
    """The closed anchors chi_0..chi_top and primitives omega_1..omega_top."""
    chi = [{(UNIT,): ring.one()}]
    omegas = []
    for p in range(top):
        n = p + 1
        words = simplex_basis(n, support, p)
        rows = []
        targets = simplex_basis(n - 1, support, p)
        for i in range(n + 1):
            tab = _face_table(n, p, i, support)
            by_target = {}
            for w in words:
                tw = tab.get(w)
                if tw is not None:
                    by_target.setdefault(tw, {})[w] = 1
            for tw in targets:
                coeffs = by_target.get(tw, {})
                rhs = chi[p].get(tw, ring.zero()) if i == n else ring.zero()
                rows.append((coeffs, rhs))
        sol = solve_sparse_affine(rows, ring if ring.is_field else QQ)
        if sol is None:
            raise Unsolvable(f"omega_{p + 1} face system", support, 2 * top + 1)
        if not ring.is_field:
            for v in sol.values():
                if isinstance(v, Fraction) and v.denominator != 1:
                    raise Unsolvable(f"omega_{p + 1} integrality", support, 2 * top + 1)
            sol = {k: int(v) for k, v in sol.items()}
        omega = _coerce_coords(sol, ring)
        omegas.append(omega)
        dchi = simplex_d(simplex_form(ring, n, omega, support))
        if dchi.is_zero():
            raise Unsolvable(f"chi_{p + 1} degenerate", support, 2 * top + 1)
        chi.append(dict(dchi.terms))
    return chi, omegas


def _pos_in(subset: tuple, a) -> int:
    return sorted(set(subset) | {a}).index(a)


def _drop_index(subset: tuple, i: int) -> tuple:
    """Remove coordinate i and renumber the remaining indices."""
    return tuple(k - 1 if k > i else k for k in subset if k != i)


def _solve_families(top: int, support: SupportSet, ring: RingSpec):
    """Universal per-dimension form families anchoring the comparison map."""
    chi, omegas = chi_ladder(top, support, ring)
    solve_ring = ring if ring.is_field else QQ
    families = {}
    for n in range(top + 1):
        level: dict = {}
        prev = families.get(n - 1, {})
        for p in range(n, -1, -1):
            words = simplex_basis(n, support, p)
            subsets = list(combinations(range(n + 1), p + 1))
            supersets = list(combinations(range(n + 1), p + 2))
            d_tab = _d_table(n, p, support)
            sgn = -1 if (p + 1) % 2 else 1
            # bigraded transposition sign tying the anchors to the ladder
            cp = ring.coerce((-1) ** (p * (p + 1) // 2))
            rows = []
            if n == p:
                full = tuple(range(n + 1))
                for w in words:
                    rhs = ring.mul(cp, chi[p].get(w, ring.zero()))
                    rows.append(({("xi", full, w): 1}, rhs))
            if supersets and n == p + 1:
                full = tuple(range(n + 1))
                for w in words:
                    rhs = ring.mul(cp, omegas[p].get(w, ring.zero()))
                    rows.append(({("xi2", full, w): 1}, rhs))
            if p == 0:
                unit_word = (UNIT,) * (n + 1)
                for w in words:
                    coeffs = {("xi", v, w): 1 for v in subsets}
                    rows.append((coeffs, ring.one() if w == unit_word else ring.zero()))
            # face compatibility with level n-1
            targets = simplex_basis(n - 1, support, p) if n else []
            for i in range(n + 1):
                tab = _face_table(n, p, i, support)
                preimages: dict = {}
                for w, tw in tab.items():
                    preimages.setdefault(tw, []).append(w)
                for v in subsets:
                    for tw in targets:
                        coeffs: dict = {}
                        for w in preimages.get(tw, []):
                            coeffs[("xi", v, w)] = coeffs.get(("xi", v, w), 0) + 1
                            for a in range(n + 1):
                                if a in v:
                                    continue
                                wset = tuple(sorted(set(v) | {a}))
                                sa = sgn * (-1) ** _pos_in(v, a)
                                key = ("xi2", wset, w)
                                coeffs[key] = coeffs.get(key, 0) + sa
                        if i in v:
                            rhs = ring.zero()
                        else:
                            rhs = prev.get(("xi", _drop_index(v, i)), {}).get(
                                tw, ring.zero()
                            )
                            for b in range(n + 1):
                                if b in v or b == i:
                                    continue
                                wset = _drop_index(tuple(sorted(set(v) | {b})), i)
                                sb = sgn * (-1) ** _pos_in(v, b)
                                val = prev.get(("xi2", wset), {}).get(tw, ring.zero())
                                rhs = ring.add(rhs, ring.mul(ring.coerce(sb), val))
                        if coeffs or not ring.is_zero(rhs):
                            rows.append((coeffs, rhs))
            # chain-map condition against the degree-(p+1) family at level n
            dtargets = simplex_basis(n, support, p + 1)
            for v in subsets:
                for tw in dtargets:
                    coeffs = {}
                    for w, img in d_tab.items():
                        c = img.get(tw)
                        if not c:
                            continue
                        coeffs[("xi", v, w)] = coeffs.get(("xi", v, w), 0) + c
                        for a in range(n + 1):
                            if a in v:
                                continue
                            wset = tuple(sorted(set(v) | {a}))
                            sa = sgn * (-1) ** _pos_in(v, a)
                            key = ("xi2", wset, w)
                            coeffs[key] = coeffs.get(key, 0) + sa * c
                    rhs = ring.zero()
                    for a in range(n + 1):
                        if a in v:
                            continue
                        wset = tuple(sorted(set(v) | {a}))
                        sa = (-1) ** _pos_in(v, a)
                        val = level.get(("xi", wset), {}).get(tw, ring.zero())
                        rhs = ring.add(rhs, ring.mul(ring.coerce(sa), val))
                    if coeffs or not ring.is_zero(rhs):
                        rows.append((coeffs, rhs))
            sol = solve_sparse_affine(rows, solve_ring)
            if sol is None:
                raise Unsolvable(
                    f"comparison family level {n} degree {p}", support, 2 * top + 1
                )
            if not ring.is_field:
                for vv in sol.values():
                    if isinstance(vv, Fraction) and vv.denominator != 1:
                        raise Unsolvable(
                            f"comparison family integrality level {n}",
                            support,
                            2 * top + 1,
                        )
                sol = {k: int(v) for k, v in sol.items()}
            for v in subsets:
                level[("xi", v)] = {}
            for wset in supersets:
                level[("xi2", wset)] = {}
            for (kind, vset, w), val in sol.items():
                val = ring.coerce(val)
                if not ring.is_zero(val):
                    level[(kind, vset)][w] = val
        families[n] = level
    return chi, omegas, families


_FAMILY_CACHE: dict = {}


def _cached_families(top: int, support: SupportSet, ring: RingSpec):
    key = (top, support.elements, ring)
    if key not in _FAMILY_CACHE:
        _FAMILY_CACHE[key] = _solve_families(top, support, ring)
    return _FAMILY_CACHE[key]


@dataclass
class ComparisonMap:
    """theta: classical cochains -> global forms, one degree at a time."""

    complex: object
    support: SupportSet
    ring: RingSpec
    chi: list
    omegas: list
    families: dict

    def apply(self, p: int, values: dict):
        """Map a cochain (cell -> value, zero elsewhere) to a global form."""
        from .space import SpaceForm

        ring = self.ring
        x = self.complex
        sgn = ring.coerce(-1 if (p + 1) % 2 else 1)

        def m_of(cell):
            return values.get(cell, ring.zero())

        def dm_of(cell):
            total = ring.zero()
            for k in range(len(cell)):
                c = m_of(cell[:k] + cell[k + 1 :])
                if k % 2:
                    c = ring.neg(c)
                total = ring.add(total, c)
            return total

        vals = {}
        for cell in x.maximal:
            n = len(cell) - 1
            fam = self.families[n]
            terms: dict = {}
            for v in combinations(range(n + 1), p + 1):
                coeff = m_of(tuple(cell[k] for k in v))
                if ring.is_zero(coeff):
                    continue
                for w, c in fam.get(("xi", v), {}).items():
                    terms[w] = ring.add(terms.get(w, ring.zero()), ring.mul(coeff, c))
            for wset in combinations(range(n + 1), p + 2):
                coeff = dm_of(tuple(cell[k] for k in wset))
                if ring.is_zero(coeff):
                    continue
                coeff = ring.mul(sgn, coeff)
                for w, c in fam.get(("xi2", wset), {}).items():
                    terms[w] = ring.add(terms.get(w, ring.zero()), ring.mul(coeff, c))
            vals[cell] = simplex_form(ring, n, terms, self.support)
        return SpaceForm(ring, x, self.support, vals)


def comparison_map(x, support: SupportSet, ring: RingSpec) -> ComparisonMap:
    """Build the cochain-to-form chain map for a finite complex."""
    if not len(support):
        raise Unsolvable("empty support window", support, 1)
    chi, omegas, families = _cached_families(x.dimension, support, ring)
    return ComparisonMap(x, support, ring, chi, omegas, families)
