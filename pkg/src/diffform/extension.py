"""Canonical extension of forms from subcomplexes and support decomposition.

The extension attaches cells in increasing dimension; on each new cell the
boundary values are combined by inclusion-exclusion against products of one
fixed Heaviside factor, so the result restricts to the given data and its
singular support does not grow beyond the data's support plus that factor.
"""

from __future__ import annotations

from .line import UNIT, SupportSet
from .simplex import (
    SimplexForm,
    simplex_form,
    singular_support,
    word_support,
)


class EmptySupport(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


class DecompositionBoundError(RuntimeError):
    pass


def _unit_word(cell):
    return (UNIT,) * len(cell)


def _cell_values(omega, cells) -> dict:
    return {cell: omega.at(cell) for cell in cells}


def _restriction_space_form(x, sub, cellvals):
    """Package per-cell data on `sub` as a SpaceForm living on `sub`."""
    from .space import SpaceForm

    ring = next(iter(cellvals.values())).ring if cellvals else None
    vals = {m: cellvals[m] for m in sub.maximal}
    supp = SupportSet(())
    for v in vals.values():
        supp = supp.widen(tuple(singular_support(v)))
    return SpaceForm(ring, sub, supp, vals)


def is_locally_constant(omega, sub) -> bool:
    """Restriction to every cell of `sub` is a scalar multiple of the unit."""
    if sub is None:
        return True
    for cell in sub.maximal:
        val = omega.at(cell)
        if any(w != _unit_word(cell) for w in val.terms):
            return False
    return True


def extend_form(x, sub, omega, s: int | None = None, check: bool = True,
                use_formula: bool = False):
    """Extend a form given on a subcomplex to the whole complex.

    `omega` is a SpaceForm on `sub` (a subcomplex of `x`); the Heaviside
    support `s` defaults to the least element of the data's singular support.
    Constants extend constantly unless `use_formula` forces the
    inclusion-exclusion route (which is linear in the data for fixed s).
    Restriction of the result to `sub` equals `omega`, and the singular
    support is preserved whenever s lies inside it.
    """
    from .space import SpaceForm, space_constant, space_zero

    ring = omega.ring
    if sub is None:
        return space_zero(x, ring, omega.support)
    cellvals = _cell_values(omega, sub.cells)
    # globally constant data extends constantly
    consts = set()
    constant = True
    for cell, val in cellvals.items():
        uw = _unit_word(cell)
        if any(w != uw for w in val.terms):
            constant = False
            break
        consts.add(val.terms.get(uw, ring.zero()))
    if constant and len(consts) <= 1 and not use_formula:
        c = consts.pop() if consts else ring.zero()
        return space_constant(x, ring, omega.support, c)
    if s is None:
        ss = sorted(set().union(*(singular_support(v) for v in cellvals.values())))
        if ss:
            s = ss[0]
        elif len(omega.support):
            s = min(omega.support)
        else:
            raise EmptySupport("no Heaviside support available for the extension")
    values = dict(cellvals)
    todo = sorted(x.cells - set(values), key=lambda c: (len(c), c))
    for cell in todo:
        d = len(cell) - 1
        if d == 0:
            values[cell] = simplex_form(ring, 0, {}, omega.support)
            continue
        terms: dict = {}
        n_slots = d + 1
        for mask in range(1, 1 << n_slots):
            tslots = [i for i in range(n_slots) if mask >> i & 1]
            kept = [i for i in range(n_slots) if not mask >> i & 1]
            if not kept:
                continue  # the all-Heaviside word lies in the ideal
            face_cell = tuple(cell[i] for i in kept)
            val = values[face_cell]
            sign = -1 if len(tslots) % 2 == 0 else 1
            for w, c in val.terms.items():
                nw = [("Y", s)] * n_slots
                for f, k in zip(w, kept):
                    nw[k] = f
                key = tuple(nw)
                cc = ring.mul(ring.coerce(sign), c)
                nv = ring.add(terms.get(key, ring.zero()), cc)
                terms[key] = nv
        values[cell] = simplex_form(ring, d, terms, omega.support)
    supp = omega.support.widen((s,))
    out = SpaceForm(ring, x, supp, {m: values[m] for m in x.maximal})
    if check:
        for cell in sub.maximal:
            if out.at(cell) != cellvals[cell]:
                raise AssertionError("extension does not restrict to the data")
    return out


# ---------------------------------------------------------------------------
# Support decomposition (small-support pieces)
# ---------------------------------------------------------------------------


def _connectivity_order(maximal):
    """Reorder maximal cells so every prefix union is connected if possible."""
    cells = sorted(maximal)
    if not cells:
        return cells
    out = [cells.pop(0)]
    touched = set(out[0])
    while cells:
        for i, c in enumerate(cells):
            if touched & set(c):
                out.append(cells.pop(i))
                touched.update(c)
                break
        else:  # disconnected: start a new component
            out.append(cells.pop(0))
            touched.update(out[-1])
    return out


def _union_subcomplex(x, *parts):
    cells = set()
    for p in parts:
        if p is not None:
            cells.update(p.cells)
    if not cells:
        return None
    return x.subcomplex(cells)


def _glue(x, sub, sources) -> "object":
    """SpaceForm on `sub` whose value on each maximal cell comes from the
    first source (subcomplex, form) containing it; agreement is asserted."""
    cellvals = {}
    for cell in sub.maximal:
        vals = []
        for src_sub, src_form in sources:
            if src_sub is not None and cell in src_sub.cells:
                vals.append(src_form.at(cell))
        if not vals:
            raise AssertionError(f"no data for cell {cell}")
        for v in vals[1:]:
            if v != vals[0]:
                raise AssertionError(f"incompatible glue data on {cell}")
        cellvals[cell] = vals[0]
    full = {cell: None for cell in sub.cells}
    for cell in sub.cells:
        # derive from a containing maximal cell of sub
        cont = sub.container(cell)
        from .simplex import restrict_to_slots

        full[cell] = restrict_to_slots(cellvals[cont], sub.slots_in(cont, cell))
    return _restriction_space_form(x, sub, full)


def _single_word_form(x, ring, support, word, coeff):
    """The global form supported on the unique maximal cell of x."""
    from .space import SpaceForm

    (cell,) = x.maximal
    vals = {cell: simplex_form(ring, len(cell) - 1, {word: coeff}, support)}
    return SpaceForm(ring, x, support, vals)


def _pair_form(x, kprime, sigma_part, ktop, tau_part):
    """Assemble a global form on x from parts on kprime and on ktop."""
    from .space import SpaceForm

    vals = {}
    supp = SupportSet(())
    for m in x.maximal:
        if sigma_part is not None and m in kprime.cells:
            vals[m] = sigma_part.at(m)
        else:
            vals[m] = tau_part.at(m)
        supp = supp.widen(tuple(singular_support(vals[m])))
    ring = next(iter(vals.values())).ring
    return SpaceForm(ring, x, supp, vals)


def decompose_small_support(k, sub, omega, _depth: int = 0):
    """Split a form locally constant on `sub` into small-support pieces.

    Returns [piece0, piece1, ...] with sum equal to omega, piece0 locally
    constant on `sub`, the others vanishing there, and every piece's singular
    support of size at most r + n - 1 (r maximal simplices, dimension <= n).
    """
    from .space import SpaceForm, build_space, space_zero

    ring = omega.ring
    if not is_locally_constant(omega, sub):
        raise PreconditionViolated("form is not locally constant on the subcomplex")
    maximal = _connectivity_order(list(k.maximal))
    r, n = len(maximal), k.dimension
    bound = r + n - 1
    if omega.is_zero():
        return [omega]

    if r == 1:
        return _decompose_base(k, sub, omega, bound, _depth, loose=False)

    # inductive step: split off the last maximal cell
    top = maximal[-1]
    kprime = k.subcomplex(maximal[:-1])
    ktop = k.subcomplex([top])
    inter_cells = kprime.cells & ktop.cells
    inter = k.subcomplex(inter_cells) if inter_cells else None
    lprime = None
    ltop = None
    if sub is not None:
        lp_cells = sub.cells & kprime.cells
        lprime = k.subcomplex(lp_cells) if lp_cells else None
        lt_cells = sub.cells & ktop.cells
        ltop = k.subcomplex(lt_cells) if lt_cells else None
    sigma = _glue(k, kprime, [(kprime, omega)])
    tau = _glue(k, ktop, [(ktop, omega)])

    if inter is None:
        # disjoint pieces decompose independently; merge the two constants
        parts_s = decompose_small_support(kprime, lprime, sigma, _depth)
        parts_t = decompose_small_support(ktop, ltop, tau, _depth)
        zero_s = space_zero(kprime, ring, omega.support)
        zero_t = space_zero(ktop, ring, omega.support)
        out = [_pair_form(k, kprime, parts_s[0], ktop, parts_t[0])]
        out.extend(_pair_form(k, kprime, p, ktop, zero_t) for p in parts_s[1:])
        out.extend(_pair_form(k, kprime, zero_s, ktop, p) for p in parts_t[1:])
        return [p for p in out if not p.is_zero()] or [omega]

    # is the restriction of sigma to the intersection one constant?
    inter_vals = {cell: sigma.at(cell) for cell in inter.maximal}
    consts = set()
    inter_constant = True
    for cell, val in inter_vals.items():
        uw = _unit_word(cell)
        if any(w != uw for w in val.terms):
            inter_constant = False
            break
        consts.add(val.terms.get(uw, ring.zero()))
    inter_constant = inter_constant and len(consts) <= 1

    if inter_constant:
        c0 = consts.pop() if consts else ring.zero()
        ldouble = _union_subcomplex(k, lprime, inter)
        parts_s = decompose_small_support(kprime, ldouble, sigma, _depth)
        lt_union = _union_subcomplex(k, ltop, inter)
        parts_t = _decompose_base(ktop, lt_union, tau, bound, _depth, loose=True)
        tau0 = parts_t[0]
        theta_vals = {cell: tau0.at(cell) for cell in lt_union.maximal}
        tconsts = set()
        theta_constant = True
        for cell, val in theta_vals.items():
            uw = _unit_word(cell)
            if any(w != uw for w in val.terms):
                theta_constant = False
                break
            tconsts.add(val.terms.get(uw, ring.zero()))
        theta_constant = theta_constant and len(tconsts) <= 1
        zero_s = space_zero(kprime, ring, omega.support)
        zero_t = space_zero(ktop, ring, omega.support)
        out = []
        if theta_constant:
            from .space import space_constant

            cform = space_constant(ktop, ring, omega.support, c0)
            out.append(_pair_form(k, kprime, parts_s[0], ktop, cform))
            out.extend(_pair_form(k, kprime, p, ktop, zero_t) for p in parts_s[1:])
            out.extend(_pair_form(k, kprime, zero_s, ktop, p) for p in parts_t[1:])
            resid = tau0 - cform
            if not resid.is_zero():
                out.append(_pair_form(k, kprime, zero_s, ktop, resid))
        else:
            ss_tau = sorted(tau.singular_support())
            sprime = ss_tau[0]
            theta_data = _glue(k, lt_union, [(lt_union, tau0)])
            theta_bar = extend_form(ktop, lt_union, theta_data, sprime)
            out.append(_pair_form(k, kprime, parts_s[0], ktop, theta_bar))
            out.extend(_pair_form(k, kprime, p, ktop, zero_t) for p in parts_s[1:])
            out.extend(_pair_form(k, kprime, zero_s, ktop, p) for p in parts_t[1:])
            resid = tau0 - theta_bar
            if not resid.is_zero():
                out.append(_pair_form(k, kprime, zero_s, ktop, resid))
        return [p for p in out if not p.is_zero()] or [omega]

    # intersection value not constant: extend the sigma pieces across the top
    ss_tau = sorted(tau.singular_support())
    if not ss_tau:
        raise AssertionError("nonconstant intersection but empty tau support")
    sprime = ss_tau[0]
    parts_s = decompose_small_support(kprime, lprime, sigma, _depth)
    zero_t = space_zero(ktop, ring, omega.support)
    out = []
    bars = []
    for i, p in enumerate(parts_s):
        glue_sources = [(inter, p)]
        if ltop is not None:
            if i == 0:
                glue_sources.append((ltop, tau))
            else:
                glue_sources.append((ltop, zero_t))
        target = _union_subcomplex(k, inter, ltop)
        data = _glue(k, target, glue_sources)
        bar = extend_form(ktop, target, data, sprime)
        bars.append(bar)
        out.append(_pair_form(k, kprime, p, ktop, bar))
    resid = tau
    for b in bars:
        resid = resid - b
    if not resid.is_zero():
        # the residual vanishes on inter and on the collapsed boundary piece;
        # split it further so each part keeps a small support
        resid_l = _union_subcomplex(k, inter, ltop)
        zero_k = space_zero(kprime, ring, omega.support)
        for piece in _decompose_base(ktop, resid_l, resid, bound, _depth, loose=True):
            out.append(_pair_form(k, kprime, zero_k, ktop, piece))
    # piece 0 first, then the rest
    return [p for p in out if not p.is_zero()] or [omega]


def _decompose_base(k, sub, omega, bound, depth, loose):
    """Single maximal simplex.

    With `loose` (inner recursion, bound >= n+1) one global Heaviside support
    is used for every lift, so the locally constant remainder collapses to an
    extension with support inside {s}. The strict variant (top level, bound =
    n) picks the support per word, keeping each piece inside its own word's
    support, and repairs the remainder if its joint support is too big.
    """
    from .space import space_zero

    ring = omega.ring
    (cell,) = k.maximal
    u = omega.values[cell] if cell in omega.values else omega.at(cell)
    uw = _unit_word(cell)
    nonunit = {w: c for w, c in u.terms.items() if w != uw}
    if not nonunit:
        return [omega]
    ss = sorted(singular_support(u))
    counts = {}
    for w in nonunit:
        for t in word_support(w):
            counts[t] = counts.get(t, 0) + 1
    s = max(ss, key=lambda t: (counts.get(t, 0), -t))
    pieces = []
    for w in sorted(nonunit):
        c = nonunit[w]
        ws = word_support(w)
        s_w = s if loose or s in ws else min(ws)
        word_form = _single_word_form(k, ring, omega.support, w, c)
        if sub is not None:
            data = _glue(k, sub, [(sub, word_form)])
            lifted = extend_form(k, sub, data, s_w, check=False, use_formula=True)
        else:
            lifted = space_zero(k, ring, omega.support)
        piece = word_form - lifted
        if not piece.is_zero():
            pieces.append(piece)
    piece0 = omega
    for p in pieces:
        piece0 = piece0 - p
    if piece0.is_zero():
        return pieces or [omega]
    if len(piece0.singular_support()) <= max(bound, 1):
        return [piece0] + pieces
    # strict path remainder with entangled supports: peel off the extension
    # of the locally constant boundary data and split what is left
    if depth >= 3:
        raise DecompositionBoundError(
            f"piece 0 support {sorted(piece0.singular_support())} exceeds bound {bound}"
        )
    if sub is not None:
        data = _glue(k, sub, [(sub, omega)])
        cbar = extend_form(k, sub, data, s, check=False)
    else:
        cbar = space_zero(k, ring, omega.support)
    eta = piece0 - cbar
    rest = _decompose_base(k, sub, eta, bound, depth + 1, loose)
    out = [cbar]
    out.extend(p for p in rest if not p.is_zero())
    out.extend(pieces)
    return out
