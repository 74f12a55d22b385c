import random

import pytest
from hypothesis import given, settings, strategies as st

from diffform.ring import GF2, GF3, QQ, ZZ, RingMismatch, cohomology_of_complex
from diffform.line import (
    UNIT,
    LineTensor,
    SupportSet,
    augment,
    braid,
    braid_inverse,
    coproduct_theta,
    dirac,
    heaviside,
    line_basis,
    line_complex,
    line_d,
    line_form,
    line_mul,
    line_unit,
    poincare_homotopy,
    tensor_mul_pair,
    tensor_of,
    translate,
    translate_inverse,
    translation_homotopy,
)

S3 = SupportSet.of(-1, 0, 1)


def f(terms, ring=ZZ):
    return line_form(ring, terms, S3)


def Y(s):
    return heaviside(s)


def w(s):
    return dirac(s)


# strategy: random forms over a small window
coeffs = st.integers(-4, 4)


def form_strategy(degree=None, ring=ZZ):
    factors = line_basis(SupportSet.of(-2, -1, 0, 1, 2), degree)
    return st.lists(
        st.tuples(st.sampled_from(factors), coeffs), min_size=0, max_size=4
    ).map(lambda pairs: line_form(ring, dict(pairs) if pairs else {}))


class TestMul:
    def test_heaviside_min(self):
        assert line_mul(f({Y(0): 1}), f({Y(1): 1})) == f({Y(0): 1})

    def test_dirac_kills_left_heaviside(self):
        # w_0 . Y_0 = 0 since 0 < 0 + 1
        assert line_mul(f({w(0): 1}), f({Y(0): 1})).is_zero()

    def test_heaviside_on_dirac(self):
        assert line_mul(f({Y(0): 1}), f({w(0): 1})) == f({w(0): 1})
        assert line_mul(f({Y(-1): 1}), f({w(0): 1})).is_zero()

    def test_unit(self):
        assert line_mul(line_unit(ZZ), f({w(1): 1})) == f({w(1): 1})

    def test_noncommutation_witness(self):
        a, b = f({Y(0): 1}), f({w(0): 1})
        assert line_mul(a, b) != line_mul(b, a)

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatch):
            line_mul(f({Y(0): 1}), f({Y(0): 1}, ring=GF2))

    @settings(max_examples=50, deadline=None)
    @given(form_strategy(), form_strategy(), form_strategy())
    def test_associative(self, a, b, c):
        assert line_mul(line_mul(a, b), c) == line_mul(a, line_mul(b, c))


class TestDifferential:
    def test_d_heaviside(self):
        assert line_d(f({Y(0): 1})) == f({w(0): -1})

    def test_d_unit(self):
        assert line_d(line_unit(ZZ)).is_zero()

    def test_linear(self):
        assert line_d(f({Y(1): 3, Y(-1): 2})) == f({w(1): -3, w(-1): -2})

    @settings(max_examples=50, deadline=None)
    @given(form_strategy())
    def test_dd_zero(self, a):
        assert line_d(line_d(a)).is_zero()

    @settings(max_examples=60, deadline=None)
    @given(form_strategy(0), form_strategy())
    def test_leibniz(self, a, b):
        # a homogeneous of degree 0: d(ab) = da.b + a.db
        left = line_d(line_mul(a, b))
        right = line_mul(line_d(a), b) + line_mul(a, line_d(b))
        assert left == right

    @settings(max_examples=40, deadline=None)
    @given(form_strategy(1), form_strategy())
    def test_leibniz_degree_one(self, a, b):
        # deg a = 1: d(ab) = da.b - a.db with da = 0
        left = line_d(line_mul(a, b))
        right = line_mul(a, line_d(b)).scale(-1)
        assert left == right


class TestPoincare:
    def test_primitive_of_dirac(self):
        assert poincare_homotopy(f({w(0): 1})) == f({UNIT: 1, Y(0): -1})

    def test_zero_on_degree_zero(self):
        assert poincare_homotopy(f({Y(0): 5, UNIT: 1})).is_zero()

    def test_difference_of_diracs(self):
        got = poincare_homotopy(line_form(ZZ, {w(2): 1, w(5): -1}))
        assert got == line_form(ZZ, {Y(5): 1, Y(2): -1})

    @settings(max_examples=60, deadline=None)
    @given(form_strategy())
    def test_homotopy_identity(self, a):
        # dI + Id = 1 - eps
        lhs = line_d(poincare_homotopy(a)) + poincare_homotopy(line_d(a))
        eps = augment(a, "-inf")
        rhs = a - line_unit(ZZ).scale(eps)
        assert lhs == rhs

    def test_line_cohomology(self):
        for support in (SupportSet.of(0), SupportSet.of(1, 5), S3):
            res = cohomology_of_complex(line_complex(support, ZZ), ZZ)
            assert res.free_ranks() == {0: 1, 1: 0}
            assert res.torsion() == {}


class TestAugment:
    def test_heaviside_ends(self):
        assert augment(f({Y(0): 1}), "-inf") == 1
        assert augment(f({Y(0): 1}), "+inf") == 0

    def test_linearity(self):
        assert augment(f({UNIT: 1, Y(1): 2}), "+inf") == 1
        assert augment(f({UNIT: 1, Y(1): 2}), "-inf") == 3

    def test_dirac_zero(self):
        assert augment(f({w(1): 7}), "+inf") == 0
        assert augment(f({w(1): 7}), "-inf") == 0


class TestCoproduct:
    def test_on_heaviside(self):
        t = coproduct_theta(f({Y(0): 1}))
        assert t == LineTensor(ZZ, 2, {(Y(0), Y(0)): 1})

    def test_on_dirac(self):
        t = coproduct_theta(f({w(0): 1}))
        assert t == LineTensor(ZZ, 2, {(w(0), Y(0)): 1, (Y(0), w(0)): 1})

    def test_on_unit(self):
        assert coproduct_theta(line_unit(ZZ)) == LineTensor(ZZ, 2, {(UNIT, UNIT): 1})

    @settings(max_examples=40, deadline=None)
    @given(form_strategy())
    def test_counit(self, a):
        # evaluating either slot at -inf returns the identity
        t = coproduct_theta(a)
        left = {}
        right = {}
        for (p, q), c in t.terms.items():
            lv = 1 if p == UNIT or p[0] == "Y" else None
            if lv is not None:
                left[q] = left.get(q, 0) + c
            rv = 1 if q == UNIT or q[0] == "Y" else None
            if rv is not None:
                right[p] = right.get(p, 0) + c
        assert line_form(ZZ, left) == a
        assert line_form(ZZ, right) == a


class TestTranslation:
    def test_translate_heaviside(self):
        assert translate(f({Y(3): 1})) == line_form(ZZ, {Y(2): 1})

    def test_homotopy_on_dirac(self):
        assert translation_homotopy(f({w(0): 1})) == line_form(ZZ, {Y(0): 1, Y(-1): -1})

    def test_check_on_heaviside(self):
        a = f({Y(0): 1})
        lhs = line_d(translation_homotopy(a)) + translation_homotopy(line_d(a))
        assert lhs == line_form(ZZ, {Y(-1): 1, Y(0): -1})
        assert lhs == translate(a) - a

    def test_inverse(self):
        a = f({Y(0): 2, w(1): 3, UNIT: 1})
        assert translate_inverse(translate(a)) == a

    @settings(max_examples=50, deadline=None)
    @given(form_strategy())
    def test_homotopy_identity(self, a):
        lhs = line_d(translation_homotopy(a)) + translation_homotopy(line_d(a))
        assert lhs == translate(a) - a

    @settings(max_examples=50, deadline=None)
    @given(form_strategy(), form_strategy())
    def test_algebra_automorphism(self, a, b):
        assert translate(line_mul(a, b)) == line_mul(translate(a), translate(b))


def homogeneous_strategy():
    return st.sampled_from([0, 1]).flatmap(lambda d: form_strategy(d, QQ))


class TestBraid:
    def test_swap_degree_zero(self):
        t = tensor_of([f({Y(0): 1}, QQ), f({Y(1): 1}, QQ)])
        assert braid(t) == LineTensor(QQ, 2, {(Y(1), Y(0)): 1})

    def test_dirac_heaviside(self):
        t = tensor_of([f({w(0): 1}, QQ), f({Y(0): 1}, QQ)])
        assert braid(t) == LineTensor(QQ, 2, {(Y(-1), w(0)): 1})

    def test_two_diracs(self):
        t = tensor_of([f({w(0): 1}, QQ), f({w(1): 1}, QQ)])
        assert braid(t) == LineTensor(QQ, 2, {(w(0), w(0)): -1})

    def test_unit_axiom(self):
        for a in (f({Y(0): 1}, QQ), f({w(1): 1}, QQ)):
            t = tensor_of([line_unit(QQ), a])
            got = braid(t)
            assert got == tensor_of([a, line_unit(QQ)])
            t2 = tensor_of([a, line_unit(QQ)])
            assert braid(t2) == tensor_of([line_unit(QQ), a])

    @settings(max_examples=60, deadline=None)
    @given(homogeneous_strategy(), homogeneous_strategy())
    def test_mul_compatible(self, a, b):
        # mu o R = mu  (braided-commutativity of the product)
        t = tensor_of([a, b])
        assert tensor_mul_pair(braid(t)) == tensor_mul_pair(t)

    @settings(max_examples=60, deadline=None)
    @given(homogeneous_strategy(), homogeneous_strategy())
    def test_invertible(self, a, b):
        t = tensor_of([a, b])
        assert braid_inverse(braid(t)) == t
        assert braid(braid_inverse(t)) == t

    @settings(max_examples=40, deadline=None)
    @given(homogeneous_strategy(), homogeneous_strategy(), homogeneous_strategy())
    def test_yang_baxter(self, a, b, c):
        t = tensor_of([a, b, c])
        lhs = braid(braid(braid(t, 0), 1), 0)
        rhs = braid(braid(braid(t, 1), 0), 1)
        assert lhs == rhs

    @settings(max_examples=30, deadline=None)
    @given(homogeneous_strategy(), homogeneous_strategy(), homogeneous_strategy())
    def test_hexagon_report(self, a, b, c):
        # 8.2(2): mu_23 . R_12 . R_23 = R_12 . mu_23 (tested, not assumed)
        t = tensor_of([a, b, c])
        lhs = braid(braid(t, 1), 0)
        rhs = braid(t, 1)

        def mul_last_two(x):
            ring = x.ring
            out = LineTensor(ring, 2, {})
            for word, cc in x.terms.items():
                from diffform.line import _mul_factors

                prod = _mul_factors(word[1], word[2])
                if prod is None:
                    continue
                h, sign = prod
                out.bump((word[0], h), ring.neg(cc) if sign < 0 else cc)
            return out

        assert mul_last_two(lhs) == mul_last_two(braid(rhs, 0))


class TestSupportWidening:
    def test_translate_widens(self):
        a = line_form(ZZ, {Y(0): 1}, SupportSet.of(0))
        assert -1 in translate(a).support

    def test_braid_leaves_window(self):
        t = tensor_of([f({w(0): 1}, QQ), f({Y(0): 1}, QQ)])
        got = braid(t)
        supports = {s for word in got.terms for fac in word for s in (fac[1:] or ())}
        assert -1 in supports
