"""Cup-i products over F_2, Steenrod squares, and the Bockstein oracle.

The cup family satisfies D mu_i = (1 + t) mu_{i-1} with t the graded swap and
(Df)(w) = d f(w) + f(dw); mu_0 is the cup product. Each higher map is
(1 + t) mu_{i-1} composed with a contracting homotopy of the quotient of the
tensor square by its reduced subspace: the right side vanishes there, and the
quotient is acyclic once the support window is large enough, which is exactly
the solvability condition reported on failure. All vectors are GF(2) int
bitmasks. Complexes with one maximal cell use simplex word-pair coordinates,
where the reduced subspace is a coordinate subset; general complexes use the
reduced-submodule kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

from .line import SupportSet
from .ring import GF2, FieldClassSpace, RingSpec
from .reduced import reduced_tensor_basis, tensor_complex
from .simplex import (
    simplex_basis,
    simplex_d,
    simplex_form,
    simplex_mul,
    word_degree,
    word_support,
)
from .space import cached_space_basis, classical_complex, space_mul


class UnsolvableLift(ValueError):
    def __init__(self, stage: str, support: SupportSet, needed: int):
        self.stage = stage
        self.needed = needed
        super().__init__(
            f"cup-i lift blocked at {stage} over window {tuple(support)}; "
            f"retry with at least {needed} support elements"
        )


class CapExceeded(ValueError):
    pass


class NotACocycle(ValueError):
    pass


class InsufficientLift(ValueError):
    pass


def _low_bit(x: int) -> int:
    return (x & -x).bit_length() - 1


def _bits(mask: int):
    while mask:
        p = _low_bit(mask)
        yield p
        mask ^= 1 << p


class BitSolver:
    """Express GF(2) bit vectors in a growing list of columns."""

    def __init__(self):
        self.pivots: dict = {}  # pivot bit -> (main mask, tag mask)
        self.ncols = 0

    def add_column(self, col: int) -> bool:
        tag = 1 << self.ncols
        self.ncols += 1
        main = col
        while main:
            p = _low_bit(main)
            hit = self.pivots.get(p)
            if hit is None:
                self.pivots[p] = (main, tag)
                return True
            main ^= hit[0]
            tag ^= hit[1]
        return False

    def solve(self, v: int) -> int | None:
        """Tag mask of a column subset summing to v, or None."""
        tag = 0
        while v:
            p = _low_bit(v)
            hit = self.pivots.get(p)
            if hit is None:
                return None
            v ^= hit[0]
            tag ^= hit[1]
        return tag


def _mask_of(coords: dict) -> int:
    m = 0
    for k, v in coords.items():
        if int(v) % 2:
            m |= 1 << k
    return m


def _dict_of(mask: int) -> dict:
    return {p: 1 for p in _bits(mask)}


# ---------------------------------------------------------------------------
# Square models
# ---------------------------------------------------------------------------


class TensorSquare:
    """Tensor square over the global-form basis (general complexes)."""

    def __init__(self, x, support: SupportSet):
        self.complex = x
        self.support = support
        self.basis = cached_space_basis(x, support)
        self.tensor = tensor_complex([x, x], [support, support], GF2)
        self.dcols: dict = {}
        for deg, mat in self.tensor.diff.items():
            cols = [0] * len(self.tensor.index[deg])
            for (r, c), v in mat.entries.items():
                if int(v) % 2:
                    cols[c] ^= 1 << r
            self.dcols[deg] = cols
        self.adcols: dict = {}
        acx = self.basis.cochain_complex(GF2)
        for deg in self.basis.degrees():
            mat = acx.differential(deg)
            cols = [0] * mat.cols
            for (r, c), v in mat.entries.items():
                if int(v) % 2:
                    cols[c] ^= 1 << r
            self.adcols[deg] = cols
        self.swaps: dict = {}
        for deg, combos in self.tensor.index.items():
            pos = {c: i for i, c in enumerate(combos)}
            self.swaps[deg] = [pos[(c[1], c[0])] for c in combos]
        _, red_cols, _ = reduced_tensor_basis([x, x], [support, support], GF2)
        self.red_rref: dict = {}
        for deg, vecs in red_cols.items():
            pivots: dict = {}
            for vec in vecs:
                main = _mask_of(vec)
                while main:
                    p = _low_bit(main)
                    if p in pivots:
                        main ^= pivots[p]
                    else:
                        pivots[p] = main
                        break
            self.red_rref[deg] = pivots
        self._mu0: dict = {}
        self._forms: dict = {}
        self._express_cache: dict = {}

    # tensor-side -----------------------------------------------------
    def dim(self, deg: int) -> int:
        return len(self.tensor.index.get(deg, []))

    def degrees(self):
        return sorted(self.tensor.index)

    def tensor_columns(self, deg: int):
        """Masks of the tensor-basis words of one total degree."""
        return [1 << c for c in range(self.dim(deg))]

    def pi(self, deg: int, mask: int) -> int:
        pivots = self.red_rref.get(deg, {})
        out = mask
        while True:
            rest = out
            hit = False
            while rest:
                p = _low_bit(rest)
                row = pivots.get(p)
                if row is not None:
                    out ^= row
                    hit = True
                    break
                rest ^= 1 << p
            if not hit:
                return out

    def d_tensor(self, deg: int, mask: int) -> int:
        cols = self.dcols.get(deg)
        if cols is None:
            return 0
        out = 0
        for p in _bits(mask):
            out ^= cols[p]
        return out

    def d_q(self, deg: int, mask: int) -> int:
        return self.pi(deg + 1, self.d_tensor(deg, mask))

    def swap_mask(self, deg: int, mask: int) -> int:
        perm = self.swaps[deg]
        out = 0
        for p in _bits(mask):
            out |= 1 << perm[p]
        return out

    # form-side ---------------------------------------------------------
    def d_form(self, deg: int, mask: int) -> int:
        cols = self.adcols.get(deg, [])
        out = 0
        for p in _bits(mask):
            if p < len(cols):
                out ^= cols[p]
        return out

    def _form(self, d: int, i: int):
        key = (d, i)
        if key not in self._forms:
            self._forms[key] = self.basis.to_form(d, {i: 1}, GF2)
        return self._forms[key]

    def mu0(self, deg: int, mask: int) -> int:
        out = 0
        for p in _bits(mask):
            if (deg, p) not in self._mu0:
                (da, ia), (db, ib) = self.tensor.index[deg][p]
                prod = space_mul(self._form(da, ia), self._form(db, ib))
                if prod.is_zero():
                    self._mu0[(deg, p)] = 0
                else:
                    coords = self.basis.express(prod, self._express_cache)
                    self._mu0[(deg, p)] = _mask_of(coords)
            out ^= self._mu0[(deg, p)]
        return out

    def aside_from_basis(self, degree: int, basis_mask: int) -> int:
        return basis_mask

    def aside_to_basis_dict(self, degree: int, mask: int) -> dict:
        return _dict_of(mask)

    def pair_mask(self, r: int, aside_mask: int) -> int:
        combos = self.tensor.index.get(2 * r, [])
        pos = {c: k for k, c in enumerate(combos)}
        out = 0
        for a in _bits(aside_mask):
            for b in _bits(aside_mask):
                out ^= 1 << pos[((r, a), (r, b))]
        return out


class WordSquare:
    """Tensor square in simplex word-pair coordinates (one maximal cell).

    The reduced subspace is spanned by the disjoint-support word pairs, so
    the quotient projection keeps only the overlapping coordinates.
    """

    def __init__(self, x, support: SupportSet):
        if len(x.maximal) != 1:
            raise ValueError("word-pair model needs a single maximal cell")
        self.complex = x
        self.support = support
        self.basis = cached_space_basis(x, support)
        (cell,) = x.maximal
        n = len(cell) - 1
        self.cell = cell
        self.words: dict = {}
        self.word_pos: dict = {}
        for w in simplex_basis(n, support):
            d = word_degree(w)
            self.word_pos[w] = (d, len(self.words.setdefault(d, [])))
            self.words[d].append(w)
        # word-level differential and products
        self.wd: dict = {}
        for d, ws in self.words.items():
            cols = []
            for w in ws:
                img = simplex_d(simplex_form(GF2, n, {w: 1}, support))
                mask = 0
                for nw in img.terms:
                    mask |= 1 << self.word_pos[nw][1]
                cols.append(mask)
            self.wd[d] = cols
        self._wmul: dict = {}
        # tensor coordinates per total degree: (p, i, q, j)
        self.index: dict = {}
        degs = sorted(self.words)
        for p in degs:
            for q in degs:
                total = p + q
                lst = self.index.setdefault(total, [])
                for i in range(len(self.words[p])):
                    for j in range(len(self.words[q])):
                        lst.append((p, i, q, j))
        self.pos: dict = {
            deg: {c: k for k, c in enumerate(lst)} for deg, lst in self.index.items()
        }
        # overlap (non-disjoint) coordinate masks per degree: pi = AND
        self.overlap: dict = {}
        for deg, lst in self.index.items():
            mask = 0
            for k, (p, i, q, j) in enumerate(lst):
                if word_support(self.words[p][i]) & word_support(self.words[q][j]):
                    mask |= 1 << k
            self.overlap[deg] = mask
        # basis vectors as word masks per degree
        self.basis_masks: dict = {}
        for d in self.basis.degrees():
            vecs = []
            for jj in range(self.basis.dim(d)):
                vec = self.basis.vectors[d][jj]
                mask = 0
                for ci, mult in vec.items():
                    if int(mult) % 2:
                        _, word = self.basis.coords[d][ci]
                        mask ^= 1 << self.word_pos[word][1]
                vecs.append(mask)
            self.basis_masks[d] = vecs
        self._to_basis: dict = {}

    def dim(self, deg: int) -> int:
        return len(self.index.get(deg, []))

    def degrees(self):
        return sorted(self.index)

    def tensor_columns(self, deg: int):
        """Masks of products of pairs of form-basis vectors (the A (x) A basis)."""
        out = []
        for da in self.basis.degrees():
            db = deg - da
            if db not in self.basis.degrees():
                continue
            for ma in self.basis_masks[da]:
                for mb in self.basis_masks[db]:
                    out.append(self.outer(da, ma, db, mb))
        return out

    def outer(self, p: int, amask: int, q: int, bmask: int) -> int:
        pos = self.pos[p + q]
        out = 0
        for i in _bits(amask):
            for j in _bits(bmask):
                out ^= 1 << pos[(p, i, q, j)]
        return out

    def pi(self, deg: int, mask: int) -> int:
        return mask & self.overlap.get(deg, 0)

    def d_tensor(self, deg: int, mask: int) -> int:
        lst = self.index[deg]
        out_pos = self.pos.get(deg + 1)
        if out_pos is None:
            return 0
        out = 0
        for k in _bits(mask):
            p, i, q, j = lst[k]
            if p + 1 in self.words:
                for ni in _bits(self.wd[p][i]):
                    out ^= 1 << out_pos[(p + 1, ni, q, j)]
            if q + 1 in self.words:
                for nj in _bits(self.wd[q][j]):
                    out ^= 1 << out_pos[(p, i, q + 1, nj)]
        return out

    def d_q(self, deg: int, mask: int) -> int:
        return self.pi(deg + 1, self.d_tensor(deg, mask))

    def swap_mask(self, deg: int, mask: int) -> int:
        lst = self.index[deg]
        pos = self.pos[deg]
        out = 0
        for k in _bits(mask):
            p, i, q, j = lst[k]
            out |= 1 << pos[(q, j, p, i)]
        return out

    def d_form(self, deg: int, mask: int) -> int:
        cols = self.wd.get(deg, [])
        out = 0
        for p in _bits(mask):
            out ^= cols[p]
        return out

    def _word_product(self, p: int, i: int, q: int, j: int) -> int:
        key = (p, i, q, j)
        if key not in self._wmul:
            n = len(self.cell) - 1
            wa, wb = self.words[p][i], self.words[q][j]
            prod = simplex_mul(
                simplex_form(GF2, n, {wa: 1}, self.support),
                simplex_form(GF2, n, {wb: 1}, self.support),
            )
            mask = 0
            for nw in prod.terms:
                mask ^= 1 << self.word_pos[nw][1]
            self._wmul[key] = mask
        return self._wmul[key]

    def mu0(self, deg: int, mask: int) -> int:
        lst = self.index[deg]
        out = 0
        for k in _bits(mask):
            out ^= self._word_product(*lst[k])
        return out

    def aside_from_basis(self, degree: int, basis_mask: int) -> int:
        out = 0
        for b in _bits(basis_mask):
            out ^= self.basis_masks[degree][b]
        return out

    def aside_to_basis_dict(self, degree: int, mask: int) -> dict:
        solver = self._to_basis.get(degree)
        if solver is None:
            solver = BitSolver()
            for m in self.basis_masks[degree]:
                solver.add_column(m)
            self._to_basis[degree] = solver
        tags = solver.solve(mask)
        if tags is None:
            raise AssertionError("value escapes the form subspace")
        return {t: 1 for t in _bits(tags)}

    def pair_mask(self, r: int, aside_mask: int) -> int:
        return self.outer(r, aside_mask, r, aside_mask)


def square_model(x, support: SupportSet):
    if len(x.maximal) == 1:
        return WordSquare(x, support)
    return TensorSquare(x, support)


# ---------------------------------------------------------------------------
# Contraction of the quotient and the cup family
# ---------------------------------------------------------------------------


class Contraction:
    """Contracting homotopy of the quotient complex, built degree by degree."""

    def __init__(self, square, hi: int, candidate_masks: dict | None = None,
                 probe: bool = True):
        self.square = square
        self.hi = hi
        self.candidate_masks = candidate_masks
        self.probe = probe
        self.c_sets: dict = {}
        self.deco: dict = {}
        self._built = -1

    def ensure(self, m: int):
        sq = self.square
        support = sq.support
        needed = 2 * sq.complex.dimension + 1
        while self._built < m:
            k = self._built + 1
            if self.candidate_masks is not None:
                cands = [sq.pi(k, c) for c in self.candidate_masks.get(k, [])]
            else:
                cands = [sq.pi(k, 1 << p) for p in range(sq.dim(k))]
            cands = [c for c in cands if c]
            prev_c = self.c_sets.get(k - 1, [])
            image = BitSolver()
            c_m = []
            for c in cands:
                img = sq.d_q(k, c)
                if img and image.add_column(img):
                    c_m.append(c)
            self.c_sets[k] = c_m
            deco = BitSolver()
            for c in prev_c:
                deco.add_column(sq.d_q(k - 1, c))
            split = len(prev_c)
            for c in c_m:
                deco.add_column(c)
            self.deco[k] = (deco, split, list(prev_c))
            if self.probe:
                for c in cands:
                    if deco.solve(c) is None:
                        raise UnsolvableLift(
                            f"quotient not acyclic in degree {k}", support, needed
                        )
            self._built = k

    def sigma(self, m: int, mask: int) -> int:
        """Contraction value on a quotient representative of degree m."""
        self.ensure(m)
        deco, split, prev_c = self.deco[m]
        tags = deco.solve(mask)
        if tags is None:
            raise UnsolvableLift(
                f"quotient not acyclic in degree {m}",
                self.square.support,
                2 * self.square.complex.dimension + 1,
            )
        out = 0
        for t in _bits(tags):
            if t < split:
                out ^= prev_c[t]
        return out


@dataclass
class CupFamily:
    """Cup product and its lifted higher maps, evaluated lazily."""

    complex: object
    support: SupportSet
    ring: RingSpec
    square: object
    contraction: Contraction | None
    imax: int
    degree_cap: int

    def mu_mask(self, i: int, deg: int, mask: int) -> int:
        if i > self.imax:
            raise InsufficientLift(f"mu_{i} was not lifted (imax={self.imax})")
        if not mask:
            return 0
        sq = self.square
        if i == 0:
            return sq.mu0(deg, mask)
        v = sq.pi(deg, mask)
        if not v:
            return 0
        y = self.contraction.sigma(deg, v)
        if not y:
            return 0
        prev = self.mu_mask(i - 1, deg - 1, y)
        prev ^= self.mu_mask(i - 1, deg - 1, sq.swap_mask(deg - 1, y))
        return prev

    def mu(self, i: int, degree: int, coeffs: dict) -> dict:
        return _dict_of(self.mu_mask(i, degree, _mask_of(coeffs)))

    def residual(self, i: int) -> bool:
        """D mu_i = (1 + t) mu_{i-1} exactly on the capped tensor basis."""
        sq = self.square
        for deg in sq.degrees():
            if deg > self.degree_cap:
                continue
            for col in sq.tensor_columns(deg):
                lhs = sq.d_form(deg - i, self.mu_mask(i, deg, col))
                lhs ^= self.mu_mask(i, deg + 1, sq.d_tensor(deg, col))
                rhs = self.mu_mask(i - 1, deg, col)
                rhs ^= self.mu_mask(i - 1, deg, sq.swap_mask(deg, col))
                if lhs != rhs:
                    return False
        return True

    def symmetric_on_reduced(self) -> bool:
        """(1 + t) mu_0 vanishes on the reduced subspace of the square."""
        sq = self.square
        if isinstance(sq, WordSquare):
            for deg in sq.degrees():
                for k in range(sq.dim(deg)):
                    if sq.overlap[deg] >> k & 1:
                        continue
                    unit = 1 << k
                    if sq.mu0(deg, unit) ^ sq.mu0(deg, sq.swap_mask(deg, unit)):
                        return False
            return True
        _, red_cols, _ = reduced_tensor_basis(
            [self.complex, self.complex], [self.support, self.support], GF2
        )
        for deg, vecs in red_cols.items():
            for vec in vecs:
                mask = _mask_of(vec)
                out = sq.mu0(deg, mask) ^ sq.mu0(deg, sq.swap_mask(deg, mask))
                if out:
                    return False
        return True


def lift_cup_family(x, support: SupportSet, imax: int,
                    degree_cap: int | None = None,
                    eager_to: int | None = None) -> CupFamily:
    """Cup product plus cup-i maps up to i = imax over F_2.

    The contraction is validated up to degree `eager_to` (default: the full
    capped range); degrees beyond that are built and checked on first use.
    """
    top = 2 * x.dimension
    if degree_cap is None:
        degree_cap = top
    if degree_cap < top:
        raise CapExceeded(f"degree cap {degree_cap} below 2 dim X = {top}")
    sq = square_model(x, support)
    contraction = None
    if imax >= 1:
        cands = None
        if isinstance(sq, WordSquare):
            cands = {deg: sq.tensor_columns(deg) for deg in sq.degrees()}
        contraction = Contraction(sq, top, cands)
        contraction.ensure(top if eager_to is None else min(eager_to, top))
    return CupFamily(x, support, GF2, sq, contraction, imax, degree_cap)


def lift_cup_family_auto(x, support: SupportSet, imax: int,
                         eager_to: int | None = None):
    """Escalate the support window until the lift solves; report the window."""
    tried = []
    need = 2 * x.dimension + 1
    lo = min(support) if len(support) else 0
    sizes = sorted({len(support), min(len(support) + 1, need), 3, need})
    windows = []
    for size in sizes:
        if size == len(support):
            windows.append(support)
        elif len(support) < size <= need:
            windows.append(SupportSet(tuple(range(lo, lo + size))))
    last = None
    for win in windows:
        try:
            return lift_cup_family(x, win, imax, eager_to=eager_to), win, tried
        except UnsolvableLift as e:
            tried.append((tuple(win), str(e)))
            last = e
    raise last


# ---------------------------------------------------------------------------
# Steenrod squares
# ---------------------------------------------------------------------------


@dataclass
class SquareTable:
    """Sq^j on form cohomology classes over F_2."""

    family: CupFamily
    classes: dict  # degree -> FieldClassSpace of the form complex

    def rep_basis_mask(self, r: int, class_coords: tuple) -> int:
        cls = self.classes[r]
        mask = 0
        for k, c in enumerate(class_coords):
            if int(c) % 2:
                mask ^= _mask_of(cls.reps[k])
        return mask

    def square(self, r: int, class_coords: tuple, j: int) -> tuple:
        return self.square_of_cocycle(r, self.rep_basis_mask(r, class_coords), j)

    def square_of_cocycle(self, r: int, rep_basis_mask: int, j: int) -> tuple:
        if not 0 <= j <= r:
            raise ValueError(f"Sq^{j} undefined on degree {r}")
        fam = self.family
        sq = fam.square
        aside = sq.aside_from_basis(r, rep_basis_mask)
        if sq.d_form(r, aside):
            raise NotACocycle("representative is not closed")
        i = r - j
        if i > fam.imax:
            raise InsufficientLift(f"need mu_{i}, lifted only to {fam.imax}")
        out = fam.mu_mask(i, 2 * r, sq.pair_mask(r, aside))
        target = self.classes.get(r + j)
        if target is None or target.dim == 0:
            return ()
        return target.class_of(sq.aside_to_basis_dict(r + j, out))


def square_table(fam: CupFamily) -> SquareTable:
    acx = fam.square.basis.cochain_complex(GF2)
    classes = {d: FieldClassSpace(acx, d, GF2) for d in sorted(acx.dims)}
    return SquareTable(fam, classes)


def lazy_sq1_class(sq, classes: dict, r: int, rep_basis_mask: int) -> tuple:
    """Class of mu_1(rep (x) rep) by one quotient solve (Sq^{r-1} on H^r).

    rep (x) rep is closed, so any y with d_Q y = pi(rep (x) rep) gives the
    same class of (1 + t) mu_0 (y); no full contraction is needed.
    """
    aside = sq.aside_from_basis(r, rep_basis_mask)
    if sq.d_form(r, aside):
        raise NotACocycle("representative is not closed")
    target = classes.get(r + 1)
    if target is None or target.dim == 0:
        return ()
    v = sq.pi(2 * r, sq.pair_mask(r, aside))
    if not v:
        return target.class_of({})
    deg = 2 * r - 1
    solver = BitSolver()
    order = []
    found = None
    if isinstance(sq, WordSquare):
        cands = [sq.pi(deg, c) for c in sq.tensor_columns(deg)]
    else:
        cands = [sq.pi(deg, 1 << p) for p in range(sq.dim(deg))]
    for idx, c in enumerate(cands):
        if not c:
            continue
        img = sq.d_q(deg, c)
        if img and solver.add_column(img):
            order.append(c)
            if idx % 32 == 31:
                tags = solver.solve(v)
                if tags is not None:
                    found = tags
                    break
    if found is None:
        found = solver.solve(v)
    if found is None:
        raise UnsolvableLift(
            f"quotient not acyclic in degree {2 * r}", sq.support,
            2 * sq.complex.dimension + 1,
        )
    y = 0
    for t in _bits(found):
        y ^= order[t]
    val = sq.mu0(deg, y) ^ sq.mu0(deg, sq.swap_mask(deg, y))
    return target.class_of(sq.aside_to_basis_dict(r + 1, val))


# ---------------------------------------------------------------------------
# Bockstein oracle on classical cochains
# ---------------------------------------------------------------------------


def bockstein(x, degree: int, values: dict, ring: RingSpec = GF2) -> dict:
    """Connecting map of 0 -> Z/2 -> Z/4 -> Z/2 -> 0 on classical cochains.

    `values` maps basis labels to F_2 coefficients; the result is a
    label -> F_2 dict for the next degree (integer lift, halve d, reduce).
    """
    cc = classical_complex(x, ring)
    basis = cc.bases[degree]
    lift = {}
    for k, label in enumerate(basis):
        lift[k] = int(values.get(label, 0)) % 2
    d = cc.cochain.differential(degree)
    out: dict = {}
    for (row, col), c in d.entries.items():
        out[row] = out.get(row, 0) + c * lift.get(col, 0)
    result = {}
    for row, v in out.items():
        if v % 2:
            raise NotACocycle("input is not an F_2 cocycle")
        if (v // 2) % 2:
            result[cc.bases[degree + 1][row]] = 1
    return result
