"""Reduced tensor products, transversality, Kunneth comparison, commutation.

A tensor word is reduced when its slots have pairwise disjoint singular
supports (cellwise for global forms). Reduced modules are realized as spanned
subspaces: the span over all splittings of the support windows into disjoint
sub-windows of the corresponding products of windowed form bases.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .line import LineTensor, SupportSet, UNIT, factor_degree, factor_support, line_basis
from .ring import (
    CochainComplex,
    FieldClassSpace,
    LinearSolver,
    RingSpec,
    SparseMatrix,
    cohomology_of_complex,
    field_kernel_basis,
    field_rank,
)
from .simplex import word_degree, word_support
from .space import SpaceForm, cached_space_basis, classical_cohomology, space_mul
from .simplex import singular_support as simplex_support


# ---------------------------------------------------------------------------
# Word-level projection and transversality
# ---------------------------------------------------------------------------


def word_slots_disjoint(words) -> bool:
    """Pairwise disjoint singular supports across simplex-word slots."""
    seen: set = set()
    for w in words:
        supp = word_support(w)
        if supp & seen:
            return False
        seen.update(supp)
    return True


class IncrementalSpan:
    """Incremental column-space tracker over a field (RREF rows)."""

    def __init__(self, ring: RingSpec):
        self.ring = ring
        self.rows: list = []
        self.pivots: list = []

    def reduce(self, col: dict) -> dict:
        ring = self.ring
        work = {k: ring.coerce(v) for k, v in col.items()}
        work = {k: v for k, v in work.items() if not ring.is_zero(v)}
        for prow, pcol in zip(self.rows, self.pivots):
            c = work.get(pcol)
            if c is None or ring.is_zero(c):
                continue
            for k, v in prow.items():
                nv = ring.sub(work.get(k, ring.zero()), ring.mul(c, v))
                if ring.is_zero(nv):
                    work.pop(k, None)
                else:
                    work[k] = nv
        return work

    def add(self, col: dict) -> bool:
        """Insert if independent; returns True when the column was new."""
        work = self.reduce(col)
        if not work:
            return False
        pcol = min(work)
        inv = self.ring.inv(work[pcol])
        work = {k: self.ring.mul(inv, v) for k, v in work.items()}
        self.rows.append(work)
        self.pivots.append(pcol)
        return True


def project_reduced(t: LineTensor) -> LineTensor:
    """Kill the words whose slots share a singular support."""
    ring = t.ring
    out = LineTensor(ring, t.slots, {})
    for word, c in t.terms.items():
        supports = [frozenset(factor_support(f)) for f in word]
        seen: set = set()
        ok = True
        for s in supports:
            if s & seen:
                ok = False
                break
            seen |= s
        if ok:
            out.bump(word, c)
    return out


def line_tensor_d(t: LineTensor) -> LineTensor:
    """Tensor differential with Koszul signs on factor words."""
    ring = t.ring
    out = LineTensor(ring, t.slots, {})
    for word, c in t.terms.items():
        sign = 0
        for i, f in enumerate(word):
            if f[0] == "Y":
                nw = word[:i] + (("w", f[1]),) + word[i + 1 :]
                v = ring.neg(c) if sign % 2 == 0 else c
                out.bump(nw, v)
            sign += factor_degree(f)
    return out


def is_transversal(s: SupportSet, t: SupportSet) -> bool:
    """Each window has an element outside the other."""
    ss, tt = set(s), set(t)
    return bool(ss - tt) and bool(tt - ss)


def is_transversal_family(windows) -> bool:
    """Each window meets the complement of the union of the others."""
    sets = [set(w) for w in windows]
    for i, s in enumerate(sets):
        rest = set().union(*(t for j, t in enumerate(sets) if j != i))
        if not (s - rest):
            return False
    return True


def reduced_line_complex(support: SupportSet, slots: int, ring: RingSpec) -> CochainComplex:
    """Complex of disjoint-support factor words in n tensor slots."""
    letters = line_basis(support)
    words = []
    for w in product(letters, repeat=slots):
        supports = [frozenset(factor_support(f)) for f in w]
        seen: set = set()
        ok = True
        for s in supports:
            if s & seen:
                ok = False
                break
            seen |= s
        if ok:
            words.append(w)
    by_degree: dict = {}
    for w in sorted(words):
        by_degree.setdefault(sum(factor_degree(f) for f in w), []).append(w)
    dims = {k: len(v) for k, v in by_degree.items()}
    diff = {}
    for k in sorted(by_degree):
        src = by_degree[k]
        dst = by_degree.get(k + 1, [])
        idx = {w: i for i, w in enumerate(dst)}
        entries = {}
        for j, w in enumerate(src):
            img = line_tensor_d(LineTensor(ring, slots, {w: 1}))
            img = project_reduced(img)
            for nw, c in img.terms.items():
                entries[(idx[nw], j)] = c
        diff[k] = SparseMatrix(len(dst), len(src), entries)
    return CochainComplex(dims=dims, diff=diff)


# ---------------------------------------------------------------------------
# Cross-space reduced tensor products
# ---------------------------------------------------------------------------


@dataclass
class TensorBasis:
    """Product complex of global-form bases with bidegree bookkeeping."""

    spaces: list
    supports: list
    ring: RingSpec
    bases: list  # SpaceBasis per factor
    index: dict  # degree -> list of multi-index tuples (i_1, ..., i_m)
    diff: dict  # degree -> SparseMatrix

    def dim(self, degree):
        return len(self.index.get(degree, []))


def tensor_complex(spaces, supports, ring) -> TensorBasis:
    """The full tensor product of the global-form complexes."""
    bases = [cached_space_basis(x, s) for x, s in zip(spaces, supports)]
    degrees = [b.degrees() for b in bases]
    index: dict = {}
    for combo in product(*[[(d, i) for d in degs for i in range(bases[k].dim(d))]
                           for k, degs in enumerate(degrees)]):
        total = sum(d for d, _ in combo)
        index.setdefault(total, []).append(combo)
    for k in index:
        index[k].sort()
    pos = {deg: {c: i for i, c in enumerate(combos)} for deg, combos in index.items()}
    diff = {}
    for deg in sorted(index):
        src = index[deg]
        dst = pos.get(deg + 1, {})
        entries: dict = {}
        for j, combo in enumerate(src):
            sign_acc = 0
            for slot, (d, i) in enumerate(combo):
                dmat = bases[slot].diff.get(d)
                if dmat is not None:
                    col = dmat.column(i)
                    for ti, v in col.items():
                        ncombo = combo[:slot] + ((d + 1, ti),) + combo[slot + 1 :]
                        row = dst.get(ncombo)
                        if row is not None:
                            val = v if sign_acc % 2 == 0 else -v
                            entries[(row, j)] = entries.get((row, j), 0) + val
                sign_acc += d
        entries = {k: v for k, v in entries.items() if v}
        diff[deg] = SparseMatrix(len(dst), len(src), entries)
    return TensorBasis(list(spaces), list(supports), ring, bases, index, diff)


def window_splits(supports) -> list:
    """Maximal assignments of shared support elements to single factors."""
    supports = [set(s) for s in supports]
    all_elems = sorted(set().union(*supports))
    choices = []
    for s in all_elems:
        owners = [k for k, win in enumerate(supports) if s in win]
        choices.append([(s, k) for k in owners])
    splits = []
    for combo in product(*choices):
        windows = [set() for _ in supports]
        for s, k in combo:
            windows[k].add(s)
        splits.append(tuple(SupportSet(tuple(sorted(w))) for w in windows))
    return splits


def _support_functionals(basis, space, support, ring):
    """Per support element s and degree: a row-space basis of the functionals
    'coefficient of an s-containing word at a maximal cell' on the form basis."""
    out: dict = {}
    for degree in basis.degrees():
        expansions = []
        for i in range(basis.dim(degree)):
            form = basis.to_form(degree, {i: 1}, ring)
            expansions.append(form)
        for s in support:
            rows: dict = {}
            for i, form in enumerate(expansions):
                for cell in space.maximal:
                    for w, c in form.values[cell].terms.items():
                        if s in word_support(w):
                            row = rows.setdefault((cell, w), {})
                            row[i] = ring.add(row.get(i, ring.zero()), ring.coerce(c))
            tracker = IncrementalSpan(ring)
            for key in sorted(rows):
                tracker.add(rows[key])
            out[(s, degree)] = tracker.rows
    return out


def reduced_tensor_basis(spaces, supports, ring: RingSpec):
    """Basis and differential of the reduced product of global-form algebras.

    The reduced submodule is the kernel of the pairwise non-disjointness
    constraints: for every shared support element and pair of slots, the
    paired 'uses that element' functionals must vanish on the element.
    """
    if not ring.is_field:
        raise ValueError("reduced tensor bases are computed over fields")
    full = tensor_complex(spaces, supports, ring)
    m = len(spaces)
    if m == 1:
        cols = {
            d: [{i: ring.one()} for i in range(full.dim(d))] for d in full.index
        }
        return full, cols, None
    functionals = [
        _support_functionals(full.bases[k], spaces[k], supports[k], ring)
        for k in range(m)
    ]
    basis_cols: dict = {}
    for deg in sorted(full.index):
        combos = full.index[deg]
        pos = {c: i for i, c in enumerate(combos)}
        rows: list = []
        for k, l in combinations(range(m), 2):
            shared = sorted(set(supports[k]) & set(supports[l]))
            if not shared:
                continue
            # group columns by the (degree, index) data away from slots k, l
            groups: dict = {}
            for c in combos:
                rest = tuple(x for i, x in enumerate(c) if i not in (k, l))
                groups.setdefault(rest, []).append(c)
            for s in shared:
                for rest, cs in groups.items():
                    by_bideg: dict = {}
                    for c in cs:
                        by_bideg.setdefault((c[k][0], c[l][0]), []).append(c)
                    for (dk, dl), cs2 in by_bideg.items():
                        for u in functionals[k].get((s, dk), []):
                            for v in functionals[l].get((s, dl), []):
                                row = {}
                                for c in cs2:
                                    cu = u.get(c[k][1])
                                    cv = v.get(c[l][1])
                                    if cu is None or cv is None:
                                        continue
                                    val = ring.mul(cu, cv)
                                    if not ring.is_zero(val):
                                        row[pos[c]] = val
                                if row:
                                    rows.append(row)
        if rows:
            entries = {}
            for ri, row in enumerate(rows):
                for j, v in row.items():
                    entries[(ri, j)] = v
            mat = SparseMatrix(len(rows), len(combos), entries)
            basis_cols[deg] = field_kernel_basis(mat, ring)
        else:
            basis_cols[deg] = [{i: ring.one()} for i in range(len(combos))]
    # differential of the reduced subcomplex in its own coordinates
    diff: dict = {}
    solvers = {deg: LinearSolver(cols, ring) for deg, cols in basis_cols.items()}
    for deg in sorted(basis_cols):
        cols = basis_cols[deg]
        nxt = basis_cols.get(deg + 1, [])
        entries: dict = {}
        dmat = full.diff.get(deg)
        for j, col in enumerate(cols):
            img: dict = {}
            if dmat is not None:
                for (r, c), v in dmat.entries.items():
                    if c in col:
                        val = ring.mul(ring.coerce(v), col[c])
                        img[r] = ring.add(img.get(r, ring.zero()), val)
            img = {k: v for k, v in img.items() if not ring.is_zero(v)}
            if not img:
                continue
            sol = solvers.get(deg + 1)
            coords = sol.solve(img) if sol is not None else None
            if coords is None:
                raise AssertionError("reduced span is not closed under d")
            for i, v in coords.items():
                entries[(i, j)] = v
        diff[deg] = SparseMatrix(len(nxt), len(cols), entries)
    dims = {deg: len(cols) for deg, cols in basis_cols.items()}
    reduced_cx = CochainComplex(dims=dims, diff=diff)
    return full, basis_cols, reduced_cx


def tensor_expand_pairs(z_pairs, ring):
    """Cellwise word-pair expansion of a sum of decomposables a (x) b.

    Returns {(cellA, cellB): {(wordA, wordB): coeff}}.
    """
    out: dict = {}
    for a, b in z_pairs:
        for ca in a.complex.maximal:
            fa = a.values[ca]
            for cb in b.complex.maximal:
                fb = b.values[cb]
                slot = out.setdefault((ca, cb), {})
                for wa, va in fa.terms.items():
                    for wb, vb in fb.terms.items():
                        key = (wa, wb)
                        cur = slot.get(key, ring.zero())
                        slot[key] = ring.add(cur, ring.mul(va, vb))
    for key in list(out):
        out[key] = {k: v for k, v in out[key].items() if not ring.is_zero(v)}
    return out


def pairs_reduced(expansion) -> bool:
    for slot in expansion.values():
        for (wa, wb) in slot:
            if word_support(wa) & word_support(wb):
                return False
    return True


def commuting_power(z_pairs, ring, scan_check: bool = False) -> int:
    """Least m such that every translate (T^n (x) 1) z with n >= m is reduced.

    Cellwise word-pair coefficients are translation-invariant, so the answer
    is one past the largest nonnegative difference u - v over supports of
    paired words; existence is guaranteed because supports are finite.
    """
    expansion = tensor_expand_pairs(z_pairs, ring)
    worst = -1
    for slot in expansion.values():
        for (wa, wb) in slot:
            for u in word_support(wa):
                for v in word_support(wb):
                    if u - v > worst:
                        worst = u - v
    m = worst + 1 if worst >= 0 else 0
    if scan_check:
        for n in range(m, m + 3):
            shifted = {
                key: {(tuple(_shift_word(wa, n)), wb): c for (wa, wb), c in slot.items()}
                for key, slot in expansion.items()
            }
            if not pairs_reduced(shifted):
                raise AssertionError(f"translate {n} not reduced")
        if m > 0:
            shifted = {
                key: {
                    (tuple(_shift_word(wa, m - 1)), wb): c
                    for (wa, wb), c in slot.items()
                }
                for key, slot in expansion.items()
            }
            if pairs_reduced(shifted):
                raise AssertionError(f"translate {m - 1} already reduced; m not minimal")
    return m


def _shift_word(word, n):
    from .line import factor_shift

    return tuple(factor_shift(f, n) for f in word)


# ---------------------------------------------------------------------------
# Kunneth comparison and commutativity
# ---------------------------------------------------------------------------


def _convolve(da: list, db: list) -> list:
    out = [0] * (len(da) + len(db) - 1)
    for i, a in enumerate(da):
        for j, b in enumerate(db):
            out[i + j] += a * b
    return out


@dataclass
class KunnethReport:
    reduced_dims: list
    full_dims: list
    classical_dims: list
    transversal: bool
    cardinality_bound: bool
    verdict: str


def kunneth_compare(x, y, s: SupportSet, t: SupportSet, ring: RingSpec) -> KunnethReport:
    """Reduced vs full vs classical Kunneth cohomology dimensions."""
    if not ring.is_field:
        raise ValueError("kunneth_compare needs a field")
    from .space import space_cohomology

    full, basis_cols, reduced_cx = reduced_tensor_basis([x, y], [s, t], ring)
    if reduced_cx is None:
        reduced_cx = CochainComplex(
            dims={d: full.dim(d) for d in full.index}, diff=full.diff
        )
    red = cohomology_of_complex(reduced_cx, ring)
    hx = space_cohomology(x, s, ring)
    hy = space_cohomology(y, t, ring)
    full_dims = _convolve(hx.dims(), hy.dims())
    cx = classical_cohomology(x, ring)
    cy = classical_cohomology(y, ring)
    classical_dims = _convolve(cx.dims(), cy.dims())
    red_dims = red.dims()
    top = max(len(red_dims), len(full_dims), len(classical_dims))
    pad = lambda v: v + [0] * (top - len(v))
    red_dims, full_dims, classical_dims = pad(red_dims), pad(full_dims), pad(classical_dims)
    n = max(x.dimension, y.dimension)
    bound = len(s) >= 2 * n + 1 and s.elements == t.elements
    trans = is_transversal(s, t)
    verdict = "MATCH" if red_dims == full_dims == classical_dims else "MISMATCH"
    return KunnethReport(red_dims, full_dims, classical_dims, trans, bound, verdict)


def swap_tensor_coeffs(full: TensorBasis, degree: int, coeffs: dict, ring) -> dict:
    """Graded swap of a two-factor tensor element in full coordinates."""
    out: dict = {}
    combos = full.index[degree]
    pos = {c: i for i, c in enumerate(combos)}
    for idx, c in coeffs.items():
        (da, ia), (db, ib) = combos[idx]
        sign = -1 if (da * db) % 2 else 1
        j = pos[((db, ib), (da, ia))]
        v = ring.mul(ring.coerce(sign), ring.coerce(c))
        out[j] = ring.add(out.get(j, ring.zero()), v)
    return {k: v for k, v in out.items() if not ring.is_zero(v)}


def tensor_multiply(full: TensorBasis, degree: int, coeffs: dict, ring) -> SpaceForm:
    """Multiply out a two-factor tensor element of the same space."""
    combos = full.index[degree]
    ba, bb = full.bases
    total = None
    for idx, c in coeffs.items():
        (da, ia), (db, ib) = combos[idx]
        fa = ba.to_form(da, {ia: c}, ring)
        fb = bb.to_form(db, {ib: ring.one()}, ring)
        prod = space_mul(fa, fb)
        total = prod if total is None else total + prod
    if total is None:
        from .space import space_zero

        return space_zero(full.spaces[0], ring, full.supports[0])
    return total


def commutativity_check(x, support: SupportSet, samples: int, ring: RingSpec, seed: int = 0) -> dict:
    """mu(rho) == mu(swap rho) on random reduced elements; report failures."""
    import random as _random

    rng = _random.Random(seed)
    full, basis_cols, reduced_cx = reduced_tensor_basis([x, x], [support, support], ring)
    failures = []
    checked = 0
    degrees = [d for d, cols in basis_cols.items() if cols]
    for _ in range(samples):
        deg = rng.choice(degrees)
        cols = basis_cols[deg]
        coeffs: dict = {}
        for _ in range(min(3, len(cols))):
            col = cols[rng.randrange(len(cols))]
            scale = ring.coerce(rng.randrange(1, 5))
            for k, v in col.items():
                coeffs[k] = ring.add(coeffs.get(k, ring.zero()), ring.mul(scale, v))
        coeffs = {k: v for k, v in coeffs.items() if not ring.is_zero(v)}
        if not coeffs:
            continue
        checked += 1
        swapped = swap_tensor_coeffs(full, deg, coeffs, ring)
        lhs = tensor_multiply(full, deg, coeffs, ring)
        rhs = tensor_multiply(full, deg, swapped, ring)
        if lhs != rhs:
            failures.append({"degree": deg, "coeffs": coeffs})
    return {"checked": checked, "failures": failures}
