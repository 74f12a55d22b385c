"""Finite simplicial complexes and global difference forms.

A global form assigns a simplex form to every cell, compatibly with the
restriction (face) maps; the module realizes that equalizer concretely on the
maximal cells, computes its cohomology over any exact ring, and carries an
independent classical-cochain oracle with the front/back cup product.
"""

from __future__ import annotations

from dataclasses import dataclass

from .line import SupportSet, UNIT
from .ring import (
    CochainComplex,
    LinearSolver,
    QQ,
    RingSpec,
    SparseMatrix,
    CohomologyResult,
    cohomology_of_complex,
    integer_kernel_basis,
)
from .simplex import (
    SimplexForm,
    simplex_basis,
    simplex_d,
    simplex_form,
    simplex_mul,
    restrict_to_slots,
    singular_support,
    word_degree,
)


class NotFaceClosed(ValueError):
    pass


class EmptyComplex(ValueError):
    pass


class SpaceMismatch(ValueError):
    pass


def _vertex_key(v):
    return (isinstance(v, str), v)


@dataclass(frozen=True)
class SimplicialComplex:
    """Finite ordered simplicial complex, optionally with a collapsed part."""

    vertices: tuple
    cells: frozenset  # cells as sorted vertex tuples
    maximal: tuple
    collapse: frozenset = frozenset()  # face-closed subset of cells

    @property
    def dimension(self) -> int:
        return max(len(c) for c in self.cells) - 1

    def cells_of_dim(self, d: int) -> list:
        return sorted(c for c in self.cells if len(c) == d + 1)

    def has_collapse(self) -> bool:
        return bool(self.collapse)

    def slots_in(self, cell, sub) -> tuple:
        """Positions of the sub-cell's vertices inside the cell."""
        pos = {v: i for i, v in enumerate(cell)}
        return tuple(pos[v] for v in sub)

    def container(self, cell) -> tuple:
        """First maximal cell containing the given cell."""
        cset = set(cell)
        for m in self.maximal:
            if cset.issubset(m):
                return m
        raise KeyError(f"{cell} is not a cell of the complex")

    def subcomplex(self, cells) -> "SimplicialComplex":
        """Subcomplex generated by the given cells (face closure taken)."""
        closed = set()
        for c in cells:
            c = tuple(sorted(c, key=_vertex_key))
            if c not in self.cells:
                raise NotFaceClosed(f"{c} is not a cell of the ambient complex")
            closed.update(_faces_of(c))
        return _make_complex(closed)

    def intersection(self, other: "SimplicialComplex") -> frozenset:
        return self.cells & other.cells

    def boundary_of_cell(self, cell) -> list:
        return [cell[:i] + cell[i + 1 :] for i in range(len(cell))]


def _faces_of(cell):
    out = set()
    n = len(cell)
    for mask in range(1, 1 << n):
        out.add(tuple(cell[i] for i in range(n) if mask >> i & 1))
    return out


def _make_complex(cells, collapse=frozenset()) -> SimplicialComplex:
    cells = frozenset(cells)
    if not cells:
        raise EmptyComplex("complex has no cells")
    vertices = tuple(sorted({v for c in cells for v in c}, key=_vertex_key))
    maximal = tuple(
        sorted(c for c in cells if not any(set(c) < set(d) for d in cells))
    )
    return SimplicialComplex(vertices, cells, maximal, frozenset(collapse))


def build_space(maximal_cells, collapse=None) -> SimplicialComplex:
    """Face closure of the listed maximal simplices, plus optional collapse."""
    if not maximal_cells:
        raise EmptyComplex("no maximal simplices given")
    cells = set()
    for c in maximal_cells:
        tup = tuple(sorted(set(c), key=_vertex_key))
        if len(tup) != len(c):
            raise NotFaceClosed(f"repeated vertex in simplex {c}")
        if not tup:
            raise EmptyComplex("empty simplex")
        cells.update(_faces_of(tup))
    collapse_cells = set()
    if collapse:
        for c in collapse:
            tup = tuple(sorted(set(c), key=_vertex_key))
            if tup not in cells:
                raise NotFaceClosed(f"collapse simplex {c} is not a cell")
            collapse_cells.update(_faces_of(tup))
    return _make_complex(cells, collapse_cells)


# --- complex file format ----------------------------------------------------


def parse_complex(text: str) -> SimplicialComplex:
    """One maximal simplex per line; optional 'collapse:' section."""
    maximal, collapse = [], []
    target = maximal
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line == "collapse:":
            target = collapse
            continue
        labels = [int(tok) if tok.lstrip("-").isdigit() else tok for tok in line.split()]
        target.append(labels)
    return build_space(maximal, collapse or None)


def serialize_complex(x: SimplicialComplex) -> str:
    lines = [" ".join(str(v) for v in c) for c in x.maximal]
    if x.collapse:
        sub = _make_complex(x.collapse)
        lines.append("collapse:")
        lines.extend(" ".join(str(v) for v in c) for c in sub.maximal)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Global forms
# ---------------------------------------------------------------------------


@dataclass
class SpaceForm:
    """Compatible family of simplex forms, stored on the maximal cells."""

    ring: RingSpec
    complex: SimplicialComplex
    support: SupportSet
    values: dict  # maximal cell -> SimplexForm

    def at(self, cell) -> SimplexForm:
        """Value on any cell, by restriction from a containing maximal cell."""
        cell = tuple(cell)
        if cell in self.values:
            return self.values[cell]
        container = self.complex.container(cell)
        slots = self.complex.slots_in(container, cell)
        return restrict_to_slots(self.values[container], slots)

    def check_compatible(self) -> bool:
        mx = self.complex.maximal
        for i, a in enumerate(mx):
            for b in mx[i + 1 :]:
                common = tuple(v for v in a if v in set(b))
                if not common:
                    continue
                ra = restrict_to_slots(self.values[a], self.complex.slots_in(a, common))
                rb = restrict_to_slots(self.values[b], self.complex.slots_in(b, common))
                if ra != rb:
                    return False
        if self.complex.collapse:
            constants = []
            for cell in _make_complex(self.complex.collapse).maximal:
                val = self.at(cell)
                unit_word = (UNIT,) * len(cell)
                if any(w != unit_word for w in val.terms):
                    return False
                constants.append(val.terms.get(unit_word, self.ring.zero()))
            if any(c != constants[0] for c in constants[1:]):
                return False
        return True

    def _binop(self, other, op):
        if self.complex is not other.complex and self.complex != other.complex:
            raise SpaceMismatch("forms live on different complexes")
        if self.ring != other.ring:
            raise SpaceMismatch("forms over different rings")
        vals = {m: op(self.values[m], other.values[m]) for m in self.values}
        return SpaceForm(self.ring, self.complex, self.support.union(other.support), vals)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def scale(self, c):
        return SpaceForm(
            self.ring, self.complex, self.support, {m: v.scale(c) for m, v in self.values.items()}
        )

    def is_zero(self):
        return all(v.is_zero() for v in self.values.values())

    def __eq__(self, other):
        return (
            isinstance(other, SpaceForm)
            and self.ring == other.ring
            and self.complex == other.complex
            and all(self.values[m] == other.values[m] for m in self.values)
        )

    def singular_support(self) -> frozenset:
        out = set()
        for v in self.values.values():
            out.update(singular_support(v))
        return frozenset(out)

    def degrees(self):
        out = set()
        for v in self.values.values():
            out.update(v.degrees())
        return sorted(out)


def space_zero(x: SimplicialComplex, ring: RingSpec, support: SupportSet) -> SpaceForm:
    vals = {m: simplex_form(ring, len(m) - 1, {}, support) for m in x.maximal}
    return SpaceForm(ring, x, support, vals)


def space_constant(x: SimplicialComplex, ring: RingSpec, support: SupportSet, c) -> SpaceForm:
    from .line import UNIT

    vals = {
        m: simplex_form(ring, len(m) - 1, {(UNIT,) * len(m): c}, support)
        for m in x.maximal
    }
    return SpaceForm(ring, x, support, vals)


def space_mul(a: SpaceForm, b: SpaceForm) -> SpaceForm:
    return a._binop(b, simplex_mul)


def space_d(a: SpaceForm) -> SpaceForm:
    vals = {m: simplex_d(v) for m, v in a.values.items()}
    return SpaceForm(a.ring, a.complex, a.support, vals)


# ---------------------------------------------------------------------------
# The equalizer basis of global forms
# ---------------------------------------------------------------------------


@dataclass
class SpaceBasis:
    """Integral basis of the global-form complex plus its differential."""

    complex: SimplicialComplex
    support: SupportSet
    coords: dict  # degree -> list of (maximal cell, word) ambient coordinates
    vectors: dict  # degree -> list of dicts coord_index -> int
    diff: dict  # degree -> SparseMatrix in basis coordinates (integer)

    def dim(self, degree: int) -> int:
        return len(self.vectors.get(degree, []))

    def degrees(self):
        return sorted(self.vectors)

    def cochain_complex(self, ring: RingSpec | None = None) -> CochainComplex:
        # differentials are integral; ring arithmetic happens downstream
        dims = {n: self.dim(n) for n in self.vectors}
        return CochainComplex(dims=dims, diff=dict(self.diff))

    def to_form(self, degree: int, coeffs: dict, ring: RingSpec) -> SpaceForm:
        """Basis coordinates (index -> coefficient) to a SpaceForm."""
        vals = {m: {} for m in self.complex.maximal}
        coords = self.coords[degree]
        for idx, c in coeffs.items():
            vec = self.vectors[degree][idx]
            for ci, mult in vec.items():
                cell, word = coords[ci]
                cur = vals[cell].get(word, ring.zero())
                vals[cell][word] = ring.add(cur, ring.mul(ring.coerce(c), ring.coerce(mult)))
        forms = {
            m: simplex_form(ring, len(m) - 1, terms, self.support)
            for m, terms in vals.items()
        }
        return SpaceForm(ring, self.complex, self.support, forms)

    def express(self, form: SpaceForm, solver_cache: dict | None = None):
        """Coordinates of a global form in the basis (over the form's ring)."""
        degs = form.degrees()
        if len(degs) > 1:
            raise ValueError("express needs a homogeneous form")
        degree = degs[0] if degs else 0
        ring = form.ring
        key = (degree, ring)
        if solver_cache is not None and key in solver_cache:
            solver = solver_cache[key]
        else:
            cols = []
            for vec in self.vectors.get(degree, []):
                cols.append({i: ring.coerce(v) for i, v in vec.items()})
            solver = LinearSolver(cols, ring if ring.is_field else QQ)
            if solver_cache is not None:
                solver_cache[key] = solver
        index = {cw: i for i, cw in enumerate(self.coords.get(degree, []))}
        target = {}
        for m in form.complex.maximal:
            for w, c in form.values[m].terms.items():
                target[index[(m, w)]] = c
        sol = solver.solve(target)
        if sol is None:
            raise ValueError("form is not in the span of the basis")
        return sol


def space_form_basis(x: SimplicialComplex, support: SupportSet, ring: RingSpec | None = None) -> SpaceBasis:
    """Solve the cell-compatibility equalizer; integral basis, all rings."""
    top = x.dimension
    coords = {}
    vectors = {}
    for degree in range(top + 2):
        coord = []
        for m in x.maximal:
            for w in simplex_basis(len(m) - 1, support, degree):
                coord.append((m, w))
        if not coord and degree > 0:
            continue
        coords[degree] = coord
        index = {cw: i for i, cw in enumerate(coord)}
        rows = []
        mx = x.maximal
        for i, a in enumerate(mx):
            for b in mx[i + 1 :]:
                bset = set(b)
                common = tuple(v for v in a if v in bset)
                if not common:
                    continue
                slots_a = x.slots_in(a, common)
                slots_b = x.slots_in(b, common)
                targets = {}
                for w in simplex_basis(len(a) - 1, support, degree):
                    r = restrict_to_slots(
                        simplex_form(QQ, len(a) - 1, {w: 1}, support), slots_a
                    )
                    for nw in r.terms:
                        targets.setdefault(nw, {})[index[(a, w)]] = 1
                for w in simplex_basis(len(b) - 1, support, degree):
                    r = restrict_to_slots(
                        simplex_form(QQ, len(b) - 1, {w: 1}, support), slots_b
                    )
                    for nw in r.terms:
                        targets.setdefault(nw, {})[index[(b, w)]] = (
                            targets.get(nw, {}).get(index[(b, w)], 0) - 1
                        )
                rows.extend(targets.values())
        if x.collapse:
            sub = _make_complex(x.collapse)
            from .line import UNIT

            unit_rows = []
            for cell in sub.maximal:
                container = x.container(cell)
                slots = x.slots_in(container, cell)
                by_target = {}
                for w in simplex_basis(len(container) - 1, support, degree):
                    r = restrict_to_slots(
                        simplex_form(QQ, len(container) - 1, {w: 1}, support), slots
                    )
                    for nw in r.terms:
                        by_target.setdefault(nw, {})[index[(container, w)]] = 1
                unit_word = (UNIT,) * len(cell)
                for nw, row in by_target.items():
                    if nw == unit_word:
                        continue
                    rows.append(row)  # non-constant restriction must vanish
                if degree == 0:
                    unit_rows.append(by_target.get(unit_word, {}))
            # all collapse cells carry the same constant
            for r1, r2 in zip(unit_rows, unit_rows[1:]):
                row = dict(r1)
                for k, v in r2.items():
                    row[k] = row.get(k, 0) - v
                rows.append(row)
        nrows = len(rows)
        entries = {}
        for ri, row in enumerate(rows):
            for ci, v in row.items():
                if v:
                    entries[(ri, ci)] = v
        mat = SparseMatrix(nrows, len(coord), entries)
        vectors[degree] = integer_kernel_basis(mat)
    # differential matrices in basis coordinates
    diff = {}
    for degree in sorted(vectors):
        if degree + 1 not in vectors:
            continue
        src = vectors[degree]
        if not src:
            continue
        tgt_coords = {cw: i for i, cw in enumerate(coords[degree + 1])}
        solver = LinearSolver([{i: QQ.coerce(v) for i, v in vec.items()} for vec in vectors[degree + 1]], QQ)
        entries = {}
        for j, vec in enumerate(src):
            # apply d cellwise in ambient coordinates
            img = {}
            for ci, mult in vec.items():
                cell, word = coords[degree][ci]
                df = simplex_d(simplex_form(QQ, len(cell) - 1, {word: mult}, support))
                for nw, c in df.terms.items():
                    k = tgt_coords[(cell, nw)]
                    img[k] = img.get(k, 0) + c
            img = {k: v for k, v in img.items() if v}
            sol = solver.solve(img)
            if sol is None:
                raise AssertionError("differential leaves the equalizer")
            for i, v in sol.items():
                if v.denominator != 1:
                    raise AssertionError("non-integral differential coordinate")
                if v.numerator:
                    entries[(i, j)] = v.numerator
        diff[degree] = SparseMatrix(len(vectors[degree + 1]), len(src), entries)
    return SpaceBasis(x, support, coords, vectors, diff)


_BASIS_CACHE: dict = {}


def cached_space_basis(x: SimplicialComplex, support: SupportSet) -> SpaceBasis:
    key = (x.cells, x.collapse, support.elements)
    if key not in _BASIS_CACHE:
        _BASIS_CACHE[key] = space_form_basis(x, support)
    return _BASIS_CACHE[key]


def space_cohomology(x: SimplicialComplex, support: SupportSet, ring: RingSpec) -> CohomologyResult:
    basis = cached_space_basis(x, support)
    return cohomology_of_complex(basis.cochain_complex(ring), ring)


# ---------------------------------------------------------------------------
# Classical ordered-cochain oracle with the front/back cup product
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GluedVertex:
    """Degree-0 basis label for the single vertex class of a collapse."""

    vertices: tuple


@dataclass
class ClassicalComplex:
    """Ordered simplicial cochains; for a collapsed pair, cochains of X/A."""

    complex: SimplicialComplex
    bases: dict  # degree -> list of basis labels (cells, or GluedVertex)
    cochain: CochainComplex

    def cup(self, p: int, alpha: dict, q: int, beta: dict, ring: RingSpec) -> dict:
        """Front-face/back-face cup product on cochain coordinate dicts."""
        out = {}
        av = self._values(p, alpha, ring)
        bv = self._values(q, beta, ring)
        for k, cell in enumerate(self.bases.get(p + q, [])):
            if isinstance(cell, GluedVertex):
                cell = (cell.vertices[0],) if cell.vertices else None
                if cell is None:
                    continue
            front = cell[: p + 1]
            back = cell[p:]
            v = ring.mul(av.get(front, ring.zero()), bv.get(back, ring.zero()))
            if not ring.is_zero(v):
                out[k] = v
        return out

    def _values(self, degree: int, coords: dict, ring: RingSpec) -> dict:
        """Expand basis coordinates into per-cell values."""
        vals = {}
        for k, c in coords.items():
            label = self.bases[degree][k]
            if isinstance(label, GluedVertex):
                for v in label.vertices:
                    vals[(v,)] = c
            else:
                vals[label] = c
        return vals


def classical_complex(x: SimplicialComplex, ring: RingSpec) -> ClassicalComplex:
    top = x.dimension
    collapse_vertices = sorted({v for c in x.collapse for v in c}, key=_vertex_key)
    bases = {}
    for d in range(top + 1):
        cells = x.cells_of_dim(d)
        if d == 0:
            basis = []
            if collapse_vertices:
                basis.append(GluedVertex(tuple(collapse_vertices)))
            basis.extend(c for c in cells if c[0] not in set(collapse_vertices))
            bases[0] = basis
        else:
            bases[d] = [c for c in cells if c not in x.collapse]
    dims = {d: len(b) for d, b in bases.items()}
    diff = {}
    for d in range(top):
        src, dst = bases[d], bases.get(d + 1, [])
        entries = {}
        for j, label in enumerate(src):
            for i, cell in enumerate(dst):
                total = 0
                for k in range(len(cell)):
                    face_cell = cell[:k] + cell[k + 1 :]
                    if isinstance(label, GluedVertex):
                        hit = len(face_cell) == 1 and face_cell[0] in label.vertices
                    else:
                        hit = face_cell == label
                    if hit:
                        total += (-1) ** k
                if total:
                    entries[(i, j)] = total
        diff[d] = SparseMatrix(len(dst), len(src), entries)
    return ClassicalComplex(x, bases, CochainComplex(dims=dims, diff=diff))


def classical_cohomology(x: SimplicialComplex, ring: RingSpec) -> CohomologyResult:
    cc = classical_complex(x, ring)
    return cohomology_of_complex(cc.cochain, ring)


def euler_characteristic(x: SimplicialComplex) -> int:
    cc = classical_complex(x, QQ)
    return sum((-1) ** d * n for d, n in cc.cochain.dims.items())


def mayer_vietoris_check(x, cells1, cells2, support: SupportSet, ring: RingSpec) -> dict:
    """Cartesian square and exact-rank bookkeeping for a two-piece cover."""
    from .ring import field_rank, field_kernel_basis, FieldClassSpace

    x1 = x.subcomplex(cells1)
    x2 = x.subcomplex(cells2)
    if x1.cells | x2.cells != x.cells:
        raise SpaceMismatch("the two subcomplexes do not cover the complex")
    inter = x.subcomplex(x1.cells & x2.cells)
    b = cached_space_basis(x, support)
    b1 = cached_space_basis(x1, support)
    b2 = cached_space_basis(x2, support)
    bi = cached_space_basis(inter, support)

    def restrict_cols(src_basis, dst_basis):
        out = {}
        cache: dict = {}
        for degree in src_basis.degrees():
            cols = []
            for j in range(src_basis.dim(degree)):
                form = src_basis.to_form(degree, {j: ring.one()}, ring)
                vals = {m: form.at(m) for m in dst_basis.complex.maximal}
                sub = SpaceForm(ring, dst_basis.complex, support, vals)
                coeffs = dst_basis.express(sub, cache)
                cols.append(dict(coeffs))
            out[degree] = cols
        return out

    r1 = restrict_cols(b, b1)
    r2 = restrict_cols(b, b2)
    r1i = restrict_cols(b1, bi)
    r2i = restrict_cols(b2, bi)
    report = {"cartesian": True, "surjective": True, "les_ranks": True}
    for degree in b.degrees():
        n1, n2 = b1.dim(degree), b2.dim(degree)
        ni = bi.dim(degree)
        # difference map D(X1) + D(X2) -> D(inter)
        cols = []
        for j in range(n1):
            cols.append({i: ring.coerce(v) for i, v in r1i[degree][j].items()})
        for j in range(n2):
            cols.append(
                {i: ring.neg(ring.coerce(v)) for i, v in r2i[degree][j].items()}
            )
        diffmap = SparseMatrix.from_columns(cols, ni)
        kernel_dim = len(field_kernel_basis(diffmap, ring)) if ring.is_field else None
        if ring.is_field:
            if kernel_dim != b.dim(degree):
                report["cartesian"] = False
            if field_rank(diffmap, ring) != ni:
                report["surjective"] = False
    if ring.is_field:
        cxx = b.cochain_complex(ring)
        cx1 = b1.cochain_complex(ring)
        cx2 = b2.cochain_complex(ring)
        cxi = bi.cochain_complex(ring)
        degrees = sorted(set(cxx.dims) | {max(cxx.dims) + 1})
        table = {}
        for n in degrees:
            hx = FieldClassSpace(cxx, n, ring)
            h1 = FieldClassSpace(cx1, n, ring)
            h2 = FieldClassSpace(cx2, n, ring)
            hi = FieldClassSpace(cxi, n, ring)
            # alpha: H(X) -> H(X1) + H(X2), beta: -> H(inter)
            alpha_cols = []
            for rep in hx.reps:
                v1 = _push_class(b, b1, n, rep, ring)
                v2 = _push_class(b, b2, n, rep, ring)
                col = {}
                for i, c in enumerate(h1.class_of(v1)):
                    if not ring.is_zero(c):
                        col[i] = c
                for i, c in enumerate(h2.class_of(v2)):
                    if not ring.is_zero(c):
                        col[h1.dim + i] = c
                alpha_cols.append(col)
            beta_cols = []
            for rep in h1.reps:
                vi = _push_class(b1, bi, n, rep, ring)
                col = {i: c for i, c in enumerate(hi.class_of(vi)) if not ring.is_zero(c)}
                beta_cols.append(col)
            for rep in h2.reps:
                vi = _push_class(b2, bi, n, rep, ring)
                col = {
                    i: ring.neg(c)
                    for i, c in enumerate(hi.class_of(vi))
                    if not ring.is_zero(c)
                }
                beta_cols.append(col)
            ra = field_rank(SparseMatrix.from_columns(alpha_cols, h1.dim + h2.dim), ring)
            rb = field_rank(SparseMatrix.from_columns(beta_cols, hi.dim), ring)
            table[n] = (hx.dim, h1.dim + h2.dim, hi.dim, ra, rb)
        ns = sorted(table)
        for n in ns:
            hx_dim, mid_dim, hi_dim, ra, rb = table[n]
            if ra + rb != mid_dim:
                report["les_ranks"] = False
            delta_rank = hi_dim - rb
            nxt = table.get(n + 1)
            hx_next, ra_next = (nxt[0], nxt[3]) if nxt else (0, 0)
            if delta_rank != hx_next - ra_next:
                report["les_ranks"] = False
    return report


def _push_class(src_basis, dst_basis, degree, rep, ring):
    form = src_basis.to_form(degree, dict(rep), ring)
    vals = {m: form.at(m) for m in dst_basis.complex.maximal}
    sub = SpaceForm(ring, dst_basis.complex, src_basis.support, vals)
    return dict(dst_basis.express(sub))


# re-exports implemented in sibling files
from .extension import extend_form, decompose_small_support  # noqa: E402,F401
from .comparison import comparison_map  # noqa: E402,F401
