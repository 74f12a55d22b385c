"""Difference forms on the standard r-simplex.

Words are (r+1)-fold tensors of line factors; the simplex algebra is the
quotient of the cube algebra by the span of words with no unit factor, so the
canonical basis is exactly the words containing at least one unit slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

from .line import (
    UNIT,
    SupportSet,
    factor_degree,
    factor_support,
    line_basis,
    theta_factor,
    _mul_factors,
)
from .ring import CochainComplex, RingSpec, SparseMatrix


class DimensionMismatch(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


def word_degree(w) -> int:
    return sum(factor_degree(f) for f in w)


def word_support(w) -> frozenset:
    out = set()
    for f in w:
        out.update(factor_support(f))
    return frozenset(out)


def word_is_canonical(w) -> bool:
    return any(f == UNIT for f in w)


@dataclass
class SimplexForm:
    """Element of the windowed form algebra on the r-simplex."""

    ring: RingSpec
    dimension: int
    terms: dict  # canonical word -> nonzero coefficient
    support: SupportSet

    def __post_init__(self):
        clean = {}
        for w, c in self.terms.items():
            if len(w) != self.dimension + 1:
                raise DimensionMismatch(f"word {w} has wrong length")
            if not word_is_canonical(w):
                continue  # lies in the quotient ideal
            c = self.ring.coerce(c)
            if not self.ring.is_zero(c):
                clean[w] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self):
        return sorted({word_degree(w) for w in self.terms})

    def degree_part(self, k: int) -> "SimplexForm":
        return SimplexForm(
            self.ring,
            self.dimension,
            {w: c for w, c in self.terms.items() if word_degree(w) == k},
            self.support,
        )

    def bump(self, w, c):
        nv = self.ring.add(self.terms.get(w, self.ring.zero()), c)
        if self.ring.is_zero(nv):
            self.terms.pop(w, None)
        else:
            self.terms[w] = nv

    def __add__(self, other: "SimplexForm") -> "SimplexForm":
        self._check(other)
        out = SimplexForm(self.ring, self.dimension, dict(self.terms), self.support)
        for w, c in other.terms.items():
            out.bump(w, c)
        out.support = self.support.union(other.support)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "SimplexForm":
        c = self.ring.coerce(c)
        return SimplexForm(
            self.ring,
            self.dimension,
            {w: self.ring.mul(c, v) for w, v in self.terms.items()},
            self.support,
        )

    def _check(self, other):
        if self.ring != other.ring:
            raise DimensionMismatch(f"ring mismatch {self.ring} vs {other.ring}")
        if self.dimension != other.dimension:
            raise DimensionMismatch(
                f"dimension mismatch {self.dimension} vs {other.dimension}"
            )

    def __eq__(self, other):
        return (
            isinstance(other, SimplexForm)
            and self.ring == other.ring
            and self.dimension == other.dimension
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in sorted(self.terms.items()):
            names = ["1" if fc == UNIT else f"{fc[0]}{fc[1]}" for fc in w]
            bits.append(f"{c}*" + "(x)".join(names))
        return " + ".join(bits)


def simplex_form(ring, dimension, terms, support=None) -> SimplexForm:
    if support is None:
        supp = set()
        for w in terms:
            supp.update(word_support(w))
        support = SupportSet(tuple(supp))
    return SimplexForm(ring, dimension, terms, support)


def simplex_unit(ring: RingSpec, dimension: int, support=None) -> SimplexForm:
    return simplex_form(ring, dimension, {(UNIT,) * (dimension + 1): 1}, support)


def simplex_basis(dimension: int, support: SupportSet, degree: int | None = None):
    """Canonical basis words (>=1 unit slot), sorted, optionally one degree."""
    letters = line_basis(support)
    words = []
    for w in product(letters, repeat=dimension + 1):
        if not word_is_canonical(w):
            continue
        if degree is not None and word_degree(w) != degree:
            continue
        words.append(w)
    return sorted(words)


def simplex_dimension_count(dimension: int, support_size: int) -> int:
    """Total rank of the simplex algebra: (2s+1)^{r+1} - (2s)^{r+1}."""
    return (2 * support_size + 1) ** (dimension + 1) - (2 * support_size) ** (
        dimension + 1
    )


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def simplex_mul(u: SimplexForm, v: SimplexForm) -> SimplexForm:
    u._check(v)
    ring = u.ring
    out = SimplexForm(ring, u.dimension, {}, u.support.union(v.support))
    for wa, ca in u.terms.items():
        degs_a = [factor_degree(f) for f in wa]
        for wb, cb in v.terms.items():
            # Koszul sign: each b_i of odd degree crosses a_j for j > i
            sign = 0
            factors = []
            dead = False
            for i, (fa, fb) in enumerate(zip(wa, wb)):
                prod = _mul_factors(fa, fb)
                if prod is None:
                    dead = True
                    break
                fc, s = prod
                if s < 0:
                    sign += 1
                if factor_degree(fb):
                    sign += sum(degs_a[i + 1 :])
                factors.append(fc)
            if dead:
                continue
            word = tuple(factors)
            if not word_is_canonical(word):
                continue  # reduction mod the no-unit ideal
            c = ring.mul(ca, cb)
            if sign % 2:
                c = ring.neg(c)
            out.bump(word, c)
    return out


def simplex_d(u: SimplexForm) -> SimplexForm:
    ring = u.ring
    out = SimplexForm(ring, u.dimension, {}, u.support)
    for w, c in u.terms.items():
        sign = 0
        for i, f in enumerate(w):
            if f[0] == "Y":
                nw = w[:i] + (("w", f[1]),) + w[i + 1 :]
                if word_is_canonical(nw):
                    # d Y = -w, plus the Koszul crossing sign
                    v = ring.neg(c) if sign % 2 == 0 else c
                    out.bump(nw, v)
            sign += factor_degree(f)
    return out


def _eval_minus_inf(f):
    """Evaluation at -inf: unit and Heaviside go to 1, Dirac dies."""
    return None if f[0] == "w" else 1


def face(u: SimplexForm, i: int) -> SimplexForm:
    """Set variable i to -inf and drop the slot."""
    r = u.dimension
    if not 0 <= i <= r:
        raise IndexOutOfRange(f"face index {i} for dimension {r}")
    if r == 0:
        raise IndexOutOfRange("face on dimension 0 is the augmentation; use augment0")
    ring = u.ring
    out = SimplexForm(ring, r - 1, {}, u.support)
    for w, c in u.terms.items():
        if _eval_minus_inf(w[i]) is None:
            continue
        nw = w[:i] + w[i + 1 :]
        if word_is_canonical(nw):
            out.bump(nw, c)
    return out


def augment0(u: SimplexForm):
    """Augmentation of a 0-dimensional form to the ring."""
    if u.dimension != 0:
        raise DimensionMismatch("augment0 needs dimension 0")
    return u.terms.get((UNIT,), u.ring.zero())


def restrict_to_slots(u: SimplexForm, keep: tuple) -> SimplexForm:
    """Iterated face: evaluate all slots outside `keep` at -inf."""
    r = u.dimension
    keep = tuple(keep)
    if any(not 0 <= k <= r for k in keep):
        raise IndexOutOfRange(f"slots {keep} out of range")
    ring = u.ring
    out = SimplexForm(ring, len(keep) - 1, {}, u.support)
    drop = [i for i in range(r + 1) if i not in keep]
    for w, c in u.terms.items():
        if any(_eval_minus_inf(w[i]) is None for i in drop):
            continue
        nw = tuple(w[k] for k in keep)
        if word_is_canonical(nw):
            out.bump(nw, c)
    return out


def degeneracy(u: SimplexForm, i: int) -> SimplexForm:
    """Split variable i into two consecutive ones via the coproduct."""
    r = u.dimension
    if not 0 <= i <= r:
        raise IndexOutOfRange(f"degeneracy index {i} for dimension {r}")
    ring = u.ring
    out = SimplexForm(ring, r + 1, {}, u.support)
    for w, c in u.terms.items():
        for pair in theta_factor(w[i]):
            nw = w[:i] + pair + w[i + 1 :]
            if word_is_canonical(nw):
                out.bump(nw, c)
    return out


def singular_support(u: SimplexForm) -> frozenset:
    out = set()
    for w in u.terms:
        out.update(word_support(w))
    return frozenset(out)


def embed_in_slots(u: SimplexForm, slots: tuple, dimension: int) -> SimplexForm:
    """Place the word factors in the given slots, units elsewhere."""
    if len(slots) != u.dimension + 1:
        raise DimensionMismatch("slot count must match the form dimension")
    ring = u.ring
    out = SimplexForm(ring, dimension, {}, u.support)
    for w, c in u.terms.items():
        nw = [UNIT] * (dimension + 1)
        for f, k in zip(w, slots):
            nw[k] = f
        out.bump(tuple(nw), c)
    return out


def heaviside_word(ring, dimension, slots, s, support=None) -> SimplexForm:
    """The word with Y_s in the given slots and units elsewhere."""
    w = [UNIT] * (dimension + 1)
    for k in slots:
        w[k] = ("Y", s)
    return simplex_form(ring, dimension, {tuple(w): 1}, support)


def homotopy_extension(u: SimplexForm, s: int) -> SimplexForm:
    """Append Y_s as a new last variable: kills faces below, last face gives u."""
    ring = u.ring
    out = SimplexForm(ring, u.dimension + 1, {}, u.support.widen((s,)))
    for w, c in u.terms.items():
        out.bump(w + (("Y", s),), c)
    return out


def translate_form(u: SimplexForm, power: int = 1) -> SimplexForm:
    """Slotwise translation T^power (power may be negative)."""
    from .line import factor_shift

    ring = u.ring
    terms = {}
    for w, c in u.terms.items():
        terms[tuple(factor_shift(f, power) for f in w)] = c
    return SimplexForm(
        ring, u.dimension, terms, u.support.union(u.support.shift(power))
    )


def translation_homotopy_form(u: SimplexForm) -> SimplexForm:
    """Slotwise K (x) T-tail homotopy with dK + Kd = T - 1 on words."""
    ring = u.ring
    out = SimplexForm(ring, u.dimension, {}, u.support.union(u.support.shift(1)))
    from .line import factor_shift

    for w, c in u.terms.items():
        sign = 0
        for i, f in enumerate(w):
            if f[0] == "w":
                s = f[1]
                tail = tuple(factor_shift(g, 1) for g in w[i + 1 :])
                for rep, sg in ((("Y", s), 1), (("Y", s - 1), -1)):
                    nw = w[:i] + (rep,) + tail
                    if word_is_canonical(nw):
                        v = ring.mul(c, ring.coerce(sg))
                        if sign % 2:
                            v = ring.neg(v)
                        out.bump(nw, v)
            sign += factor_degree(f)
    return out


# ---------------------------------------------------------------------------
# Cube algebra internals (section of 2.7, used by tests)
# ---------------------------------------------------------------------------


def cube_inclusion_exclusion(w: tuple) -> dict:
    """Sum_j (-1)^{j+1} S_j(w) inside the cube algebra (no quotient).

    S_j substitutes +inf into j slots: units evaluate to 1, other factors kill
    the term. Returns a word->coefficient dict in the cube algebra.
    """
    n = len(w)
    out: dict = {}
    unit_slots = [i for i, f in enumerate(w) if f == UNIT]
    for j in range(1, n + 1):
        sign = 1 if j % 2 == 1 else -1
        for subset in combinations(range(n), j):
            if any(i not in unit_slots for i in subset):
                continue  # a Heaviside or Dirac evaluates to 0 at +inf
            # substituting units leaves the word unchanged
            out[w] = out.get(w, 0) + sign
    return {k: v for k, v in out.items() if v}


def simplex_complex(dimension: int, support: SupportSet, ring: RingSpec) -> CochainComplex:
    """The cochain complex of the simplex algebra in its canonical basis."""
    bases = {}
    for k in range(dimension + 2):
        bases[k] = simplex_basis(dimension, support, k)
    dims = {k: len(b) for k, b in bases.items() if b or k == 0}
    diff = {}
    for k in range(dimension + 1):
        src = bases.get(k, [])
        dst = bases.get(k + 1, [])
        if not src:
            continue
        idx = {w: i for i, w in enumerate(dst)}
        entries = {}
        for j, w in enumerate(src):
            img = simplex_d(simplex_form(ring, dimension, {w: 1}, support))
            for nw, c in img.terms.items():
                entries[(idx[nw], j)] = c
        diff[k] = SparseMatrix(len(dst), len(src), entries)
    return CochainComplex(dims=dims, diff=diff)
