"""One-variable difference forms on Z: the Heaviside/Dirac algebra.

Degree 0 is spanned by the unit and Heaviside generators Y_s (1 for n <= s,
else 0); degree 1 by Dirac generators w_s (1 at s, else 0) regarded as
one-forms. The differential is the forward difference, d Y_s = -w_s.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ring import RingMismatch, RingSpec

# Factors: ("1",) unit, ("Y", s) Heaviside, ("w", s) Dirac.
UNIT = ("1",)


def heaviside(s: int):
    return ("Y", s)


def dirac(s: int):
    return ("w", s)


def factor_degree(f) -> int:
    return 1 if f[0] == "w" else 0


def factor_support(f):
    return () if f == UNIT else (f[1],)


def factor_shift(f, k: int):
    """Translate a factor by k steps left (T^k for k >= 0)."""
    if f == UNIT:
        return f
    return (f[0], f[1] - k)


@dataclass(frozen=True)
class SupportSet:
    """Finite window S of admissible singular supports."""

    elements: tuple

    def __post_init__(self):
        elems = tuple(sorted(set(self.elements)))
        object.__setattr__(self, "elements", elems)

    @staticmethod
    def of(*elems) -> "SupportSet":
        return SupportSet(tuple(elems))

    @staticmethod
    def window(size: int, center: int = 0) -> "SupportSet":
        """size consecutive integers centered at `center`."""
        lo = center - size // 2
        return SupportSet(tuple(range(lo, lo + size)))

    def __contains__(self, s) -> bool:
        return s in self.elements

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def union(self, other: "SupportSet") -> "SupportSet":
        return SupportSet(self.elements + tuple(other))

    def widen(self, extra) -> "SupportSet":
        return SupportSet(self.elements + tuple(extra))

    def shift(self, k: int) -> "SupportSet":
        return SupportSet(tuple(s - k for s in self.elements))


def _mul_factors(a, b):
    """Product of two factors: (factor, sign) or None for zero."""
    if a == UNIT:
        return (b, 1)
    if b == UNIT:
        return (a, 1)
    ta, tb = a[0], b[0]
    if ta == "Y" and tb == "Y":
        return ((("Y", min(a[1], b[1]))), 1)
    if ta == "Y" and tb == "w":
        return (b, 1) if a[1] >= b[1] else None
    if ta == "w" and tb == "Y":
        return (a, 1) if b[1] >= a[1] + 1 else None
    return None  # Dirac times Dirac


@dataclass
class LineForm:
    """Element of the support-bounded difference-form algebra on one variable."""

    ring: RingSpec
    terms: dict  # factor -> nonzero coefficient
    support: SupportSet

    def __post_init__(self):
        clean = {}
        for f, c in self.terms.items():
            c = self.ring.coerce(c)
            if not self.ring.is_zero(c):
                clean[f] = c
        self.terms = clean

    # --- structure ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self):
        return sorted({factor_degree(f) for f in self.terms})

    def degree_part(self, k: int) -> "LineForm":
        return LineForm(
            self.ring,
            {f: c for f, c in self.terms.items() if factor_degree(f) == k},
            self.support,
        )

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def singular_support(self):
        out = set()
        for f in self.terms:
            out.update(factor_support(f))
        return frozenset(out)

    def coefficient(self, f):
        return self.terms.get(f, self.ring.zero())

    # --- linear operations ---------------------------------------------
    def _check(self, other: "LineForm"):
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other: "LineForm") -> "LineForm":
        self._check(other)
        terms = dict(self.terms)
        for f, c in other.terms.items():
            terms[f] = self.ring.add(terms.get(f, self.ring.zero()), c)
        return LineForm(self.ring, terms, self.support.union(other.support))

    def __sub__(self, other: "LineForm") -> "LineForm":
        return self + other.scale(-1)

    def scale(self, c) -> "LineForm":
        c = self.ring.coerce(c)
        return LineForm(
            self.ring, {f: self.ring.mul(c, v) for f, v in self.terms.items()}, self.support
        )

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LineForm)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for f, c in sorted(self.terms.items()):
            name = "1" if f == UNIT else f"{f[0]}{f[1]}"
            bits.append(f"{c}*{name}")
        return " + ".join(bits)


def line_form(ring: RingSpec, terms: dict, support: SupportSet | None = None) -> LineForm:
    if support is None:
        supp = set()
        for f in terms:
            supp.update(factor_support(f))
        support = SupportSet(tuple(supp))
    return LineForm(ring, terms, support)


def line_unit(ring: RingSpec, support: SupportSet | None = None) -> LineForm:
    return line_form(ring, {UNIT: 1}, support or SupportSet(()))


def line_basis(support: SupportSet, degree: int | None = None):
    """Canonical basis factors for the window, optionally one degree only."""
    out = []
    if degree in (None, 0):
        out.append(UNIT)
        out.extend(("Y", s) for s in support)
    if degree in (None, 1):
        out.extend(("w", s) for s in support)
    return out


# ---------------------------------------------------------------------------
# Algebra operations
# ---------------------------------------------------------------------------


def line_mul(a: LineForm, b: LineForm) -> LineForm:
    a._check(b)
    ring = a.ring
    terms: dict = {}
    for fa, ca in a.terms.items():
        for fb, cb in b.terms.items():
            prod = _mul_factors(fa, fb)
            if prod is None:
                continue
            f, sign = prod
            c = ring.mul(ca, cb)
            if sign < 0:
                c = ring.neg(c)
            nv = ring.add(terms.get(f, ring.zero()), c)
            terms[f] = nv
    return LineForm(ring, terms, a.support.union(b.support))


def line_d(a: LineForm) -> LineForm:
    ring = a.ring
    terms: dict = {}
    for f, c in a.terms.items():
        if f[0] == "Y":
            w = ("w", f[1])
            terms[w] = ring.add(terms.get(w, ring.zero()), ring.neg(c))
    return LineForm(ring, terms, a.support)


def poincare_homotopy(a: LineForm) -> LineForm:
    """I with dI + Id = 1 - eps: degree-1 w_s goes to 1 - Y_s, degree 0 to 0."""
    ring = a.ring
    terms: dict = {}

    def bump(f, c):
        nv = ring.add(terms.get(f, ring.zero()), c)
        terms[f] = nv

    for f, c in a.terms.items():
        if f[0] == "w":
            bump(UNIT, c)
            bump(("Y", f[1]), ring.neg(c))
    return LineForm(ring, terms, a.support)


def augment(a: LineForm, end: str):
    """Evaluate at +inf or -inf; degree-1 parts evaluate to 0."""
    if end not in ("+inf", "-inf"):
        raise ValueError("end must be '+inf' or '-inf'")
    ring = a.ring
    total = ring.zero()
    for f, c in a.terms.items():
        if f == UNIT:
            total = ring.add(total, c)
        elif f[0] == "Y" and end == "-inf":
            total = ring.add(total, c)
    return total


def translate(a: LineForm) -> LineForm:
    """T with (Tf)(x) = f(x+1); shifts every singular support down by one."""
    ring = a.ring
    terms = {factor_shift(f, 1): c for f, c in a.terms.items()}
    return LineForm(ring, terms, a.support.union(a.support.shift(1)))


def translate_inverse(a: LineForm) -> LineForm:
    ring = a.ring
    terms = {factor_shift(f, -1): c for f, c in a.terms.items()}
    return LineForm(ring, terms, a.support.union(a.support.shift(-1)))


def translation_homotopy(a: LineForm) -> LineForm:
    """K with dK + Kd = T - 1: w_s goes to the degree-0 Dirac Y_s - Y_{s-1}."""
    ring = a.ring
    terms: dict = {}

    def bump(f, c):
        nv = ring.add(terms.get(f, ring.zero()), c)
        terms[f] = nv

    for f, c in a.terms.items():
        if f[0] == "w":
            s = f[1]
            bump(("Y", s), c)
            bump(("Y", s - 1), ring.neg(c))
    return LineForm(ring, terms, a.support.union(a.support.shift(1)))


# ---------------------------------------------------------------------------
# Tensor words over the line algebra: coproduct and braiding
# ---------------------------------------------------------------------------


@dataclass
class LineTensor:
    """Linear combination of factor words f_1 (x) ... (x) f_n."""

    ring: RingSpec
    slots: int
    terms: dict  # tuple of factors -> nonzero coefficient

    def __post_init__(self):
        clean = {}
        for w, c in self.terms.items():
            c = self.ring.coerce(c)
            if not self.ring.is_zero(c):
                clean[w] = c
        self.terms = clean

    def bump(self, word, c):
        nv = self.ring.add(self.terms.get(word, self.ring.zero()), c)
        if self.ring.is_zero(nv):
            self.terms.pop(word, None)
        else:
            self.terms[word] = nv

    def __add__(self, other: "LineTensor") -> "LineTensor":
        out = LineTensor(self.ring, self.slots, dict(self.terms))
        for w, c in other.terms.items():
            out.bump(w, c)
        return out

    def scale(self, c) -> "LineTensor":
        c = self.ring.coerce(c)
        return LineTensor(
            self.ring, self.slots, {w: self.ring.mul(c, v) for w, v in self.terms.items()}
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LineTensor)
            and self.ring == other.ring
            and self.slots == other.slots
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in sorted(self.terms.items()):
            names = ["1" if f == UNIT else f"{f[0]}{f[1]}" for f in w]
            bits.append(f"{c}*" + "(x)".join(names))
        return " + ".join(bits)


def tensor_of(forms: list) -> LineTensor:
    ring = forms[0].ring
    words = {(): ring.one()}
    for form in forms:
        if form.ring != ring:
            raise RingMismatch("mixed rings in tensor")
        new: dict = {}
        for w, c in words.items():
            for f, cf in form.terms.items():
                key = w + (f,)
                nv = ring.add(new.get(key, ring.zero()), ring.mul(c, cf))
                new[key] = nv
        words = new
    return LineTensor(ring, len(forms), words)


def coproduct_theta(a: LineForm) -> LineTensor:
    """theta: 1 -> 1(x)1, Y -> Y(x)Y, w -> w(x)Y + Y(x)w."""
    ring = a.ring
    out = LineTensor(ring, 2, {})
    for f, c in a.terms.items():
        for pair in theta_factor(f):
            out.bump(pair, c)
    return out


def theta_factor(f):
    """Coproduct on one basis factor, as a list of two-slot words."""
    if f == UNIT:
        return [(UNIT, UNIT)]
    if f[0] == "Y":
        return [(f, f)]
    s = f[1]
    return [(("w", s), ("Y", s)), (("Y", s), ("w", s))]


def _braid_pair(f, g):
    """R on one two-factor word; list of (word, sign)."""
    df, dg = factor_degree(f), factor_degree(g)
    if df == 0 and dg == 0:
        return [((g, f), 1)]
    if df == 1 and dg == 0:
        # R(w (x) g) = T(g) (x) w
        return [((factor_shift(g, 1), f), 1)]
    if df == 0 and dg == 1:
        # R(h (x) w_t) = w_t (x) h + (Y_{t-1} - Y_t) (x) dh
        t = g[1]
        out = [((g, f), 1)]
        if f[0] == "Y":  # dh = -w_{f[1]}
            out.append(((("Y", t), ("w", f[1])), 1))
            out.append(((("Y", t - 1), ("w", f[1])), -1))
        return out
    # R(w (x) theta) = -T(theta) (x) w
    return [((factor_shift(g, 1), f), -1)]


def braid(t: LineTensor, pos: int = 0) -> LineTensor:
    """Apply R to slots pos, pos+1; R has degree 0, so no crossing signs."""
    if pos < 0 or pos + 1 >= t.slots:
        raise IndexError("braid position out of range")
    ring = t.ring
    out = LineTensor(ring, t.slots, {})
    for word, c in t.terms.items():
        f, g = word[pos], word[pos + 1]
        for (nf, ng), sign in _braid_pair(f, g):
            nw = word[:pos] + (nf, ng) + word[pos + 2 :]
            out.bump(nw, ring.neg(c) if sign < 0 else c)
    return out


def braid_inverse(t: LineTensor, pos: int = 0) -> LineTensor:
    """Inverse braiding on slots pos, pos+1."""
    ring = t.ring
    # pure bidegree pieces invert directly, mixed pieces in two stages
    out = LineTensor(ring, t.slots, {})
    deg10 = LineTensor(ring, t.slots, {})
    deg01 = LineTensor(ring, t.slots, {})
    for word, c in t.terms.items():
        f, g = word[pos], word[pos + 1]
        df, dg = factor_degree(f), factor_degree(g)
        if df == 0 and dg == 0:
            out.bump(word[:pos] + (g, f) + word[pos + 2 :], c)
        elif df == 1 and dg == 1:
            # preimage of a (x) b is -(b (x) T^-1 a)
            nw = word[:pos] + (g, factor_shift(f, -1)) + word[pos + 2 :]
            out.bump(nw, ring.neg(c))
        elif df == 1 and dg == 0:
            deg10.bump(word, c)
        else:
            deg01.bump(word, c)
    # (1,0) image words come only from rule 3 leading terms
    part_a = LineTensor(ring, t.slots, {})
    for word, c in deg10.terms.items():
        f, g = word[pos], word[pos + 1]
        part_a.bump(word[:pos] + (g, f) + word[pos + 2 :], c)
    residual = deg01 + deg10 - braid(part_a, pos)
    part_b = LineTensor(ring, t.slots, {})
    for word, c in residual.terms.items():
        f, g = word[pos], word[pos + 1]
        if factor_degree(f) != 0 or factor_degree(g) != 1:
            raise AssertionError("braid_inverse residual out of expected bidegree")
        # preimage of a (x) w under rule 2 is w (x) T^-1 a
        part_b.bump(word[:pos] + (g, factor_shift(f, -1)) + word[pos + 2 :], c)
    return out + part_a + part_b


def tensor_mul_pair(t: LineTensor) -> LineForm:
    """Multiply out a two-slot tensor in the line algebra."""
    if t.slots != 2:
        raise ValueError("tensor_mul_pair needs two slots")
    ring = t.ring
    terms: dict = {}
    for (f, g), c in t.terms.items():
        prod = _mul_factors(f, g)
        if prod is None:
            continue
        h, sign = prod
        v = ring.neg(c) if sign < 0 else c
        nv = ring.add(terms.get(h, ring.zero()), v)
        terms[h] = nv
    supp = set()
    for w in t.terms:
        for f in w:
            supp.update(factor_support(f))
    return LineForm(ring, terms, SupportSet(tuple(supp)))


def line_complex(support: SupportSet, ring: RingSpec):
    """The two-term cochain complex of the windowed line algebra."""
    from .ring import CochainComplex, SparseMatrix

    deg0 = line_basis(support, 0)
    deg1 = line_basis(support, 1)
    idx1 = {f: i for i, f in enumerate(deg1)}
    entries = {}
    for j, f in enumerate(deg0):
        if f[0] == "Y":
            entries[(idx1[("w", f[1])], j)] = -1
    d0 = SparseMatrix(len(deg1), len(deg0), entries)
    return CochainComplex(dims={0: len(deg0), 1: len(deg1)}, diff={0: d0})
