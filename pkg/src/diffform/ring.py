"""Exact coefficient rings and exact linear algebra (kernels, Smith normal form).

Everything here is integer/Fraction arithmetic; no floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd


class RingMismatch(ValueError):
    pass


class NotAComplex(ValueError):
    pass


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class RingSpec:
    """Coefficient ring: Z, Q, F_p or Z/m (m = p^alpha or any m >= 2)."""

    kind: str  # "Z" | "Q" | "Fp" | "Zmod"
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "Fp", "Zmod"):
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.kind == "Fp":
            if self.modulus is None or not _is_prime(self.modulus):
                raise ValueError("prime-field modulus must be prime")
        if self.kind == "Zmod":
            if self.modulus is None or self.modulus < 2:
                raise ValueError("cyclic modulus must be >= 2")

    # --- constructors -------------------------------------------------
    @staticmethod
    def integers() -> "RingSpec":
        return RingSpec("Z")

    @staticmethod
    def rationals() -> "RingSpec":
        return RingSpec("Q")

    @staticmethod
    def prime_field(p: int) -> "RingSpec":
        return RingSpec("Fp", p)

    @staticmethod
    def cyclic(m: int) -> "RingSpec":
        return RingSpec("Zmod", m)

    @staticmethod
    def parse(text: str) -> "RingSpec":
        t = text.strip().lower()
        if t == "z":
            return RingSpec.integers()
        if t == "q":
            return RingSpec.rationals()
        if t.startswith("f") and t[1:].isdigit():
            return RingSpec.prime_field(int(t[1:]))
        if t.startswith("fp:"):
            return RingSpec.prime_field(int(t[3:]))
        if t.startswith("zmod:"):
            return RingSpec.cyclic(int(t[5:]))
        raise ValueError(f"cannot parse ring spec {text!r}")

    # --- element arithmetic -------------------------------------------
    @property
    def is_field(self) -> bool:
        return self.kind in ("Q", "Fp")

    def zero(self):
        return Fraction(0) if self.kind == "Q" else 0

    def one(self):
        return Fraction(1) if self.kind == "Q" else 1

    def coerce(self, x):
        if self.kind == "Q":
            return Fraction(x)
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        m = self.modulus
        if isinstance(x, Fraction):
            # invert the denominator mod m
            return (x.numerator * pow(x.denominator, -1, m)) % m
        return int(x) % m

    def add(self, a, b):
        c = a + b
        return c % self.modulus if self.kind in ("Fp", "Zmod") else c

    def sub(self, a, b):
        c = a - b
        return c % self.modulus if self.kind in ("Fp", "Zmod") else c

    def mul(self, a, b):
        c = a * b
        return c % self.modulus if self.kind in ("Fp", "Zmod") else c

    def neg(self, a):
        return (-a) % self.modulus if self.kind in ("Fp", "Zmod") else -a

    def inv(self, a):
        if self.kind == "Q":
            return Fraction(1) / a
        if self.kind == "Fp":
            return pow(a, -1, self.modulus)
        raise RingMismatch(f"{self} is not a field")

    def is_zero(self, a) -> bool:
        if self.kind in ("Fp", "Zmod"):
            return a % self.modulus == 0
        return a == 0

    def __str__(self):
        return {
            "Z": "Z",
            "Q": "Q",
            "Fp": f"F_{self.modulus}",
            "Zmod": f"Z/{self.modulus}",
        }[self.kind]


ZZ = RingSpec.integers()
QQ = RingSpec.rationals()
GF2 = RingSpec.prime_field(2)
GF3 = RingSpec.prime_field(3)


# ---------------------------------------------------------------------------
# Sparse matrices
# ---------------------------------------------------------------------------


@dataclass
class SparseMatrix:
    """Sparse matrix over exact scalars; no zero entries stored."""

    rows: int
    cols: int
    entries: dict = field(default_factory=dict)  # (i, j) -> nonzero value

    def __post_init__(self):
        for (i, j), v in list(self.entries.items()):
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise ValueError(f"index {(i, j)} out of range")
            if v == 0:
                del self.entries[(i, j)]

    @staticmethod
    def from_dense(m: list) -> "SparseMatrix":
        rows = len(m)
        cols = len(m[0]) if rows else 0
        e = {}
        for i, row in enumerate(m):
            for j, v in enumerate(row):
                if v != 0:
                    e[(i, j)] = v
        return SparseMatrix(rows, cols, e)

    @staticmethod
    def from_columns(cols: list, nrows: int) -> "SparseMatrix":
        """cols: list of dicts row->value."""
        e = {}
        for j, col in enumerate(cols):
            for i, v in col.items():
                if v != 0:
                    e[(i, j)] = v
        return SparseMatrix(nrows, len(cols), e)

    def to_dense(self) -> list:
        m = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            m[i][j] = v
        return m

    def column(self, j: int) -> dict:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def apply(self, vec: dict) -> dict:
        """Matrix times sparse column vector (dict j->value)."""
        out: dict = {}
        for (i, j), v in self.entries.items():
            if j in vec:
                out[i] = out.get(i, 0) + v * vec[j]
        return {i: v for i, v in out.items() if v != 0}

    def compose(self, other: "SparseMatrix") -> "SparseMatrix":
        """self @ other."""
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        by_row: dict = {}
        for (i, j), v in other.entries.items():
            by_row.setdefault(i, []).append((j, v))
        e: dict = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                key = (i, j)
                e[key] = e.get(key, 0) + v * w
        e = {k: v for k, v in e.items() if v != 0}
        return SparseMatrix(self.rows, other.cols, e)

    def is_zero(self) -> bool:
        return not self.entries


# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------


def smith_normal_form(m: SparseMatrix) -> tuple[list[int], int]:
    """Invariant factors d_1 | d_2 | ... and rank of an integer matrix."""
    diag = _snf_diagonal(m.to_dense())
    return diag, len(diag)


def _snf_diagonal(a: list) -> list[int]:
    """Destructive dense SNF; returns the nonzero invariant factors."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag: list[int] = []
    top = 0
    while top < rows and top < cols:
        # find pivot of smallest absolute value to limit entry growth
        piv = None
        best = None
        for i in range(top, rows):
            ai = a[i]
            for j in range(top, cols):
                v = ai[j]
                if v != 0 and (best is None or abs(v) < best):
                    best = abs(v)
                    piv = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if piv is None:
            break
        pi, pj = piv
        if pi != top:
            a[top], a[pi] = a[pi], a[top]
        if pj != top:
            for row in a:
                row[top], row[pj] = row[pj], row[top]
        p = a[top][top]
        clean = True
        for i in range(top + 1, rows):
            v = a[i][top]
            if v:
                q = v // p
                ai, at = a[i], a[top]
                for j in range(top, cols):
                    ai[j] -= q * at[j]
                if a[i][top]:
                    clean = False  # remainder smaller than |p|; re-pick pivot
        if clean:
            for j in range(top + 1, cols):
                v = a[top][j]
                if v:
                    q = v // p
                    for i in range(top, rows):
                        a[i][j] -= q * a[i][top]
                    if a[top][j]:
                        clean = False
        if not clean:
            continue
        diag.append(abs(a[top][top]))
        top += 1
    # enforce divisibility d_i | d_{i+1} (diag(a,b) ~ diag(gcd, lcm))
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            if diag[j] % diag[i]:
                g = gcd(diag[i], diag[j])
                diag[j] = diag[i] * diag[j] // g
                diag[i] = g
    return sorted(diag)


def snf_with_column_transform(m: SparseMatrix) -> tuple[list[int], list[dict]]:
    """SNF tracking column operations.

    Returns (diagonal, V) with V a list of column vectors (dicts) such that the
    columns of V spanning indices past the rank form a basis of ker(m) over Z.
    """
    rows, cols = m.rows, m.cols
    a = m.to_dense()
    v = [{j: 1} for j in range(cols)]  # columns of the transform

    def col_swap(j1, j2):
        for row in a:
            row[j1], row[j2] = row[j2], row[j1]
        v[j1], v[j2] = v[j2], v[j1]

    def col_addmul(jdst, jsrc, q):
        # column jdst -= q * column jsrc
        for row in a:
            row[jdst] -= q * row[jsrc]
        src = v[jsrc]
        dst = v[jdst]
        for k, val in src.items():
            nv = dst.get(k, 0) - q * val
            if nv:
                dst[k] = nv
            else:
                dst.pop(k, None)

    top = 0
    while top < rows and top < cols:
        piv = None
        best = None
        for i in range(top, rows):
            ai = a[i]
            for j in range(top, cols):
                val = ai[j]
                if val != 0 and (best is None or abs(val) < best):
                    best = abs(val)
                    piv = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if piv is None:
            break
        pi, pj = piv
        if pi != top:
            a[top], a[pi] = a[pi], a[top]
        if pj != top:
            col_swap(top, pj)
        p = a[top][top]
        clean = True
        for i in range(top + 1, rows):  # row ops don't touch v
            val = a[i][top]
            if val:
                q = val // p
                ai, at = a[i], a[top]
                for j in range(top, cols):
                    ai[j] -= q * at[j]
                if a[i][top]:
                    clean = False
        if clean:
            for j in range(top + 1, cols):
                val = a[top][j]
                if val:
                    q = val // p
                    col_addmul(j, top, q)
                    if a[top][j]:
                        clean = False
        if not clean:
            continue
        top += 1
    diag = [abs(a[i][i]) for i in range(top)]
    return diag, v


def integer_kernel_basis(m: SparseMatrix) -> list[dict]:
    """Basis of the saturated kernel lattice {x in Z^cols : m x = 0}."""
    diag, v = snf_with_column_transform(m)
    rank = len(diag)
    return [v[j] for j in range(rank, m.cols)]


# ---------------------------------------------------------------------------
# Field linear algebra (generic exact scalars)
# ---------------------------------------------------------------------------


def _field_rref(rows: list[dict], ring: RingSpec) -> tuple[list[dict], list[int]]:
    """Row-reduce sparse rows over a field; returns (rref rows, pivot cols)."""
    work = [dict(r) for r in rows if r]
    rref: list[dict] = []
    pivots: list[int] = []
    for row in work:
        row = dict(row)
        for prow, pcol in zip(rref, pivots):
            c = row.get(pcol)
            if c is not None and not ring.is_zero(c):
                for j, val in prow.items():
                    nv = ring.sub(row.get(j, ring.zero()), ring.mul(c, val))
                    if ring.is_zero(nv):
                        row.pop(j, None)
                    else:
                        row[j] = nv
            else:
                row.pop(pcol, None)
        row = {j: val for j, val in row.items() if not ring.is_zero(val)}
        if not row:
            continue
        pcol = min(row)
        cinv = ring.inv(row[pcol])
        row = {j: ring.mul(cinv, val) for j, val in row.items()}
        # back-substitute into earlier rows
        for k, prow in enumerate(rref):
            c = prow.get(pcol)
            if c is not None:
                for j, val in row.items():
                    nv = ring.sub(prow.get(j, ring.zero()), ring.mul(c, val))
                    if ring.is_zero(nv):
                        prow.pop(j, None)
                    else:
                        prow[j] = nv
        rref.append(row)
        pivots.append(pcol)
    order = sorted(range(len(pivots)), key=lambda k: pivots[k])
    return [rref[k] for k in order], [pivots[k] for k in order]


def field_rank(m: SparseMatrix, ring: RingSpec) -> int:
    by_row: dict = {}
    for (i, j), val in m.entries.items():
        by_row.setdefault(i, {})[j] = ring.coerce(val)
    _, pivots = _field_rref(list(by_row.values()), ring)
    return len(pivots)


def field_kernel_basis(m: SparseMatrix, ring: RingSpec) -> list[dict]:
    """Kernel basis over a field, one dict (col index -> value) per vector."""
    by_row: dict = {}
    for (i, j), val in m.entries.items():
        by_row.setdefault(i, {})[j] = ring.coerce(val)
    rref, pivots = _field_rref(list(by_row.values()), ring)
    pivset = set(pivots)
    basis = []
    for j in range(m.cols):
        if j in pivset:
            continue
        vec = {j: ring.one()}
        for prow, pcol in zip(rref, pivots):
            c = prow.get(j)
            if c is not None and not ring.is_zero(c):
                vec[pcol] = ring.neg(c)
        basis.append(vec)
    return basis


class LinearSolver:
    """Solve B x = v repeatedly for a fixed column family B over a field."""

    def __init__(self, columns: list[dict], ring: RingSpec):
        self.ring = ring
        self.ncols = len(columns)
        # eliminate on the transpose: rows are the columns of B augmented
        # with the standard basis tag to express v in terms of columns.
        aug = []
        for j, col in enumerate(columns):
            row = {i: ring.coerce(val) for i, val in col.items()}
            row[("tag", j)] = ring.one()
            aug.append(row)
        self._rows = []
        self._pivots = []
        for row in aug:
            row = dict(row)
            for prow, pcol in zip(self._rows, self._pivots):
                c = row.get(pcol)
                if c is not None and not ring.is_zero(c):
                    for k, val in prow.items():
                        nv = ring.sub(row.get(k, ring.zero()), ring.mul(c, val))
                        if ring.is_zero(nv):
                            row.pop(k, None)
                        else:
                            row[k] = nv
                else:
                    row.pop(pcol, None)
            main = {k for k in row if not isinstance(k, tuple)}
            if not main:
                continue  # dependent column
            pcol = min(main)
            cinv = ring.inv(row[pcol])
            row = {k: ring.mul(cinv, val) for k, val in row.items()}
            self._rows.append(row)
            self._pivots.append(pcol)

    def solve(self, v: dict) -> dict | None:
        """Coordinates of v in the column family, or None if unsolvable."""
        ring = self.ring
        rem = {i: ring.coerce(val) for i, val in v.items() if not ring.is_zero(ring.coerce(val))}
        coeffs: dict = {}
        for prow, pcol in zip(self._rows, self._pivots):
            c = rem.get(pcol)
            if c is None or ring.is_zero(c):
                continue
            for k, val in prow.items():
                if isinstance(k, tuple):
                    j = k[1]
                    nv = ring.add(coeffs.get(j, ring.zero()), ring.mul(c, val))
                    if ring.is_zero(nv):
                        coeffs.pop(j, None)
                    else:
                        coeffs[j] = nv
                else:
                    nv = ring.sub(rem.get(k, ring.zero()), ring.mul(c, val))
                    if ring.is_zero(nv):
                        rem.pop(k, None)
                    else:
                        rem[k] = nv
        if rem:
            return None
        return coeffs


class FieldClassSpace:
    """Cocycle classes of one degree of a complex over a field.

    Provides representative cocycles for a basis of H^n and coordinates of an
    arbitrary cocycle's class in that basis.
    """

    def __init__(self, cx: "CochainComplex", degree: int, ring: RingSpec):
        if not ring.is_field:
            raise RingMismatch("class space needs a field")
        self.ring = ring
        self.degree = degree
        d = cx.differential(degree)
        prev = cx.differential(degree - 1)
        kernel = field_kernel_basis(d, ring)
        image = []
        for j in range(prev.cols):
            col = {i: ring.coerce(v) for i, v in prev.column(j).items()}
            col = {i: v for i, v in col.items() if not ring.is_zero(v)}
            if col:
                image.append(col)
        self._image = image
        # greedily pick kernel vectors independent modulo the image
        reps = []
        probe = LinearSolver(image, ring)
        chosen: list = []
        for vec in kernel:
            test = LinearSolver(image + chosen, ring)
            if test.solve(vec) is None:
                reps.append(vec)
                chosen.append(vec)
        self.reps = reps
        self._solver = LinearSolver(image + reps, ring)
        self._nimage = len(image)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def class_of(self, cocycle: dict) -> tuple:
        """Coordinates of the cocycle's class in the representative basis."""
        sol = self._solver.solve(cocycle)
        if sol is None:
            raise ValueError("vector is not a cocycle of this degree")
        out = [self.ring.zero()] * len(self.reps)
        for k, v in sol.items():
            if k >= self._nimage:
                out[k - self._nimage] = v
        return tuple(out)

    def is_coboundary(self, cocycle: dict) -> bool:
        return all(self.ring.is_zero(c) for c in self.class_of(cocycle))


def solve_sparse_affine(rows: list, ring: RingSpec) -> dict | None:
    """Solve a sparse linear system given as (coefficient dict, rhs) pairs.

    Free variables are set to zero and pivots are chosen as the least key, so
    the solution is the lexicographic-least one for the key order. Returns an
    assignment dict (zeros omitted) or None if the system is inconsistent.
    """
    pivots: dict = {}
    for row, rhs in rows:
        work = {}
        for k, v in row.items():
            v = ring.coerce(v)
            if not ring.is_zero(v):
                work[k] = v
        rhs = ring.coerce(rhs)
        while True:
            common = [k for k in work if k in pivots]
            if not common:
                break
            k = min(common)
            prow, prhs = pivots[k]
            c = work[k]
            for kk, vv in prow.items():
                nv = ring.sub(work.get(kk, ring.zero()), ring.mul(c, vv))
                if ring.is_zero(nv):
                    work.pop(kk, None)
                else:
                    work[kk] = nv
            rhs = ring.sub(rhs, ring.mul(c, prhs))
        if not work:
            if not ring.is_zero(rhs):
                return None
            continue
        pv = min(work)
        inv = ring.inv(work[pv])
        work = {k: ring.mul(inv, v) for k, v in work.items()}
        pivots[pv] = (work, ring.mul(inv, rhs))
    assign: dict = {}
    # every non-pivot key in a pivot row is larger than the pivot key, so a
    # descending sweep sees all dependencies already assigned
    for pv in sorted(pivots, reverse=True):
        prow, prhs = pivots[pv]
        val = prhs
        for k, v in prow.items():
            if k == pv:
                continue
            xk = assign.get(k)
            if xk is not None:
                val = ring.sub(val, ring.mul(v, xk))
        if not ring.is_zero(val):
            assign[pv] = val
    return assign


# ---------------------------------------------------------------------------
# Cochain complexes and cohomology
# ---------------------------------------------------------------------------


@dataclass
class CochainComplex:
    """Graded module with a degree-raising differential, in explicit bases.

    dims[n] is the rank in degree n; diff[n] maps degree n to degree n+1 and
    has shape dims[n+1] x dims[n].
    """

    dims: dict
    diff: dict

    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def differential(self, n: int) -> SparseMatrix:
        if n in self.diff:
            return self.diff[n]
        return SparseMatrix(self.dims.get(n + 1, 0), self.dims.get(n, 0))

    def check_complex(self, ring: "RingSpec | None" = None):
        for n in self.degrees():
            d1 = self.differential(n)
            d2 = self.differential(n + 1)
            if d1.cols and d2.rows:
                comp = d2.compose(d1)
                if ring is None:
                    bad = bool(comp.entries)
                else:
                    bad = any(
                        not ring.is_zero(ring.coerce(v)) for v in comp.entries.values()
                    )
                if bad:
                    raise NotAComplex(f"d o d != 0 leaving degree {n}")


@dataclass(frozen=True)
class DegreeCohomology:
    degree: int
    free_rank: int
    torsion: tuple  # invariant factors d_1 | d_2 | ...


@dataclass
class CohomologyResult:
    ring: RingSpec
    groups: list  # DegreeCohomology, ascending degree

    def free_ranks(self) -> dict:
        return {g.degree: g.free_rank for g in self.groups}

    def torsion(self) -> dict:
        return {g.degree: list(g.torsion) for g in self.groups if g.torsion}

    def dims(self) -> list[int]:
        """Per-degree ranks from degree 0 up to the top nonzero degree."""
        top = max((g.degree for g in self.groups if g.free_rank or g.torsion), default=0)
        by_deg = self.free_ranks()
        return [by_deg.get(n, 0) for n in range(top + 1)]

    def __str__(self):
        parts = []
        for g in self.groups:
            if g.free_rank == 0 and not g.torsion:
                continue
            term = []
            if g.free_rank:
                base = str(self.ring)
                term.append(base if g.free_rank == 1 else f"{base}^{g.free_rank}")
            term.extend(f"Z/{d}" for d in g.torsion)
            parts.append(f"H^{g.degree} = " + " + ".join(term))
        return "; ".join(parts) if parts else "0"


def _solve_in_lattice(basis: list[dict], targets: list[dict]) -> list[dict]:
    """Express integer vectors in a lattice basis (exact, integral)."""
    solver = LinearSolver(basis, QQ)
    out = []
    for t in targets:
        sol = solver.solve(t)
        if sol is None:
            raise ValueError("target not in lattice span")
        intsol = {}
        for j, val in sol.items():
            if val.denominator != 1:
                raise ValueError("non-integral coordinates in saturated lattice")
            if val.numerator:
                intsol[j] = val.numerator
        out.append(intsol)
    return out


def cohomology_of_complex(cx: CochainComplex, ring: RingSpec) -> CohomologyResult:
    """Cohomology of a finite complex of free modules over the given ring."""
    cx.check_complex(ring)
    degrees = cx.degrees()
    groups = []
    if ring.is_field:
        ranks = {}
        for n in degrees:
            ranks[n] = field_rank(cx.differential(n), ring)
        for n in degrees:
            dim = cx.dims[n]
            betti = dim - ranks.get(n, 0) - ranks.get(n - 1, 0)
            groups.append(DegreeCohomology(n, betti, ()))
        return CohomologyResult(ring, groups)

    if ring.kind == "Z":
        for n in degrees:
            ker = integer_kernel_basis(cx.differential(n))
            prev = cx.differential(n - 1)
            im_cols = [prev.column(j) for j in range(prev.cols)]
            im_cols = [c for c in im_cols if c]
            if not ker:
                groups.append(DegreeCohomology(n, 0, ()))
                continue
            if not im_cols:
                groups.append(DegreeCohomology(n, len(ker), ()))
                continue
            coords = _solve_in_lattice(ker, im_cols)
            rel = SparseMatrix.from_columns(coords, len(ker))
            diag, rank = smith_normal_form(rel)
            torsion = tuple(d for d in diag if d > 1)
            groups.append(DegreeCohomology(n, len(ker) - rank, torsion))
        return CohomologyResult(ring, groups)

    # Z/m: work with integer lifts; H^n = K'/(im d + m Z) with
    # K' = {x : d x == 0 mod m}, via Smith normal form over Z.
    m = ring.modulus
    for n in degrees:
        d = cx.differential(n)
        dim = cx.dims[n]
        nrows = d.rows
        ext_entries = dict(d.entries)
        for i in range(nrows):
            ext_entries[(i, dim + i)] = m
        ext = SparseMatrix(nrows, dim + nrows, ext_entries)
        kernel = integer_kernel_basis(ext)
        proj = []
        for vec in kernel:
            pv = {j: v for j, v in vec.items() if j < dim}
            proj.append(pv)
        # saturate the projected lattice: SNF of the projection matrix
        if not proj:
            groups.append(DegreeCohomology(n, 0, ()))
            continue
        kmat = SparseMatrix.from_columns(proj, dim)
        diagk, vk = snf_with_column_transform(kmat)
        # kmat @ vk = U^-1 D, so its first rank(diagk) columns are a basis
        # of the lattice K' spanned by the projected kernel vectors
        basis = [kmat.apply(vk[j]) for j in range(len(diagk))]
        # relations: image of d_{n-1} plus m * identity, in basis coordinates
        prev = cx.differential(n - 1)
        rel_targets = [prev.column(j) for j in range(prev.cols)]
        rel_targets = [c for c in rel_targets if c]
        for j in range(dim):
            rel_targets.append({j: m})
        if not basis:
            groups.append(DegreeCohomology(n, 0, ()))
            continue
        coords = _solve_in_lattice(basis, rel_targets)
        rel = SparseMatrix.from_columns(coords, len(basis))
        diag, rank = smith_normal_form(rel)
        torsion = tuple(d for d in diag if d > 1)
        free = len(basis) - rank
        # the quotient is m-torsion so free part cannot occur
        if free:
            torsion = torsion + tuple([m] * free)
        groups.append(DegreeCohomology(n, 0, tuple(sorted(torsion))))
    return CohomologyResult(ring, groups)
