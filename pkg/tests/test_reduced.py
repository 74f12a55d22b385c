import random

import pytest

from diffform.ring import GF2, QQ, ZZ, cohomology_of_complex
from diffform.line import LineTensor, SupportSet, UNIT, dirac, heaviside
from diffform.reduced import (
    commutativity_check,
    commuting_power,
    is_transversal,
    is_transversal_family,
    kunneth_compare,
    line_tensor_d,
    pairs_reduced,
    project_reduced,
    reduced_line_complex,
    reduced_tensor_basis,
    tensor_complex,
    tensor_expand_pairs,
)
from diffform.space import build_space, cached_space_basis
from diffform.corpus import load_corpus

S1 = SupportSet.of(0)
S3 = SupportSet.of(0, 1, 2)


def Y(s):
    return heaviside(s)


def w(s):
    return dirac(s)


class TestProjection:
    def test_shared_support_dies(self):
        t = LineTensor(ZZ, 2, {(Y(0), Y(0)): 1})
        assert project_reduced(t).is_zero()

    def test_disjoint_survives(self):
        t = LineTensor(ZZ, 2, {(Y(0), Y(1)): 1})
        assert project_reduced(t) == t

    def test_unit_slot(self):
        t = LineTensor(ZZ, 2, {(UNIT, w(0)): 1})
        assert project_reduced(t) == t

    def test_projection_idempotent_left_inverse(self):
        # P o inclusion = id on already reduced tensors
        t = LineTensor(ZZ, 3, {(Y(0), Y(1), w(2)): 2, (UNIT, w(1), Y(0)): -1})
        assert project_reduced(t) == t

    def test_dP_equals_Pd_exhaustive(self):
        from diffform.line import line_basis
        from itertools import product as iproduct

        letters = line_basis(SupportSet.of(0, 1))
        for word in iproduct(letters, repeat=2):
            t = LineTensor(ZZ, 2, {word: 1})
            lhs = line_tensor_d(project_reduced(t))
            lhs = project_reduced(lhs)
            rhs = project_reduced(line_tensor_d(t))
            assert lhs == rhs, word


class TestTransversal:
    def test_examples(self):
        assert is_transversal(SupportSet.of(0, 2), SupportSet.of(1, 3))
        assert not is_transversal(SupportSet.of(0), SupportSet.of(0))
        assert not is_transversal(SupportSet.of(0, 1), SupportSet.of(1))

    def test_family(self):
        assert is_transversal_family(
            [SupportSet.of(0), SupportSet.of(1), SupportSet.of(2)]
        )
        assert not is_transversal_family(
            [SupportSet.of(0, 1), SupportSet.of(0), SupportSet.of(1)]
        )


class TestReducedLinePowers:
    @pytest.mark.parametrize("slots", [2, 3])
    @pytest.mark.parametrize("size", [1, 2, 3])
    def test_acyclic(self, slots, size):
        support = SupportSet(tuple(range(size)))
        cx = reduced_line_complex(support, slots, ZZ)
        res = cohomology_of_complex(cx, ZZ)
        ranks = res.free_ranks()
        assert ranks.get(0) == 1
        assert all(v == 0 for k, v in ranks.items() if k > 0)

    def test_excluded_pairs_window_one(self):
        cx = reduced_line_complex(S1, 2, ZZ)
        # basis excludes Y0xY0, Y0xw0, w0xY0, w0xw0: 9 words minus 4
        assert sum(cx.dims.values()) == 5


class TestReducedTensorBasis:
    def test_single_factor_full(self):
        x = load_corpus("circle")
        full, cols, red = reduced_tensor_basis([x], [S1], GF2)
        assert red is None
        for d in full.index:
            assert len(cols[d]) == full.dim(d)

    def test_two_points(self):
        pt = build_space([[0]])
        full, cols, red = reduced_tensor_basis([pt, pt], [S1, S1], GF2)
        assert sum(len(c) for c in cols.values()) == 1

    def test_face_stability(self):
        # restriction to a smaller cell keeps word pairs disjoint
        from diffform.simplex import word_support, restrict_to_slots

        x = build_space([[0, 1, 2], [0, 1, 3]])
        full, cols, red = reduced_tensor_basis(
            [x, x], [SupportSet.of(0, 1), SupportSet.of(0, 1)], GF2
        )
        combos = full.index[1]
        rng = random.Random(2)
        for col in cols[1][:10]:
            # expand on a random maximal cell pair and check after faces
            forms = {}
            for idx, c in col.items():
                (da, ia), (db, ib) = combos[idx]
                fa = full.bases[0].to_form(da, {ia: c}, GF2)
                fb = full.bases[1].to_form(db, {ib: 1}, GF2)
                ca = rng.choice(x.maximal)
                cb = rng.choice(x.maximal)
                u, v = fa.values[ca], fb.values[cb]
                for i in range(3):
                    ru = restrict_to_slots(u, tuple(k for k in range(3) if k != i))
                    for j in range(3):
                        rv = restrict_to_slots(v, tuple(k for k in range(3) if k != j))
                        key = (ca, cb, i, j)
                        slot = forms.setdefault(key, {})
                        for wa, va in ru.terms.items():
                            for wb, vb in rv.terms.items():
                                cur = slot.get((wa, wb), 0)
                                slot[(wa, wb)] = (cur + va * vb) % 2
            for slot in forms.values():
                for (wa, wb), c in slot.items():
                    if c % 2:
                        assert not (word_support(wa) & word_support(wb))


class TestKunneth:
    def test_transversal_circles(self):
        rep = kunneth_compare(
            load_corpus("circle"), load_corpus("circle"), SupportSet.of(0), SupportSet.of(1), GF2
        )
        assert rep.verdict == "MATCH"
        assert rep.reduced_dims == [1, 2, 1]
        assert rep.transversal

    def test_sphere_times_point(self):
        pt = build_space([[9]])
        rep = kunneth_compare(load_corpus("sphere2"), pt, S1, SupportSet.of(1), GF2)
        assert rep.verdict == "MATCH"
        assert rep.reduced_dims == [1, 0, 1]

    def test_cardinality_bound_circles(self):
        for ring in (GF2, QQ):
            rep = kunneth_compare(load_corpus("circle"), load_corpus("circle"), S3, S3, ring)
            assert rep.verdict == "MATCH"
            assert rep.cardinality_bound
            assert rep.reduced_dims == [1, 2, 1]


class TestCommutativity:
    @pytest.mark.parametrize("name", ["circle", "sphere2"])
    def test_no_counterexamples(self, name):
        x = load_corpus(name)
        report = commutativity_check(x, S1, 30, GF2, seed=42)
        assert report["failures"] == []
        assert report["checked"] > 0

    def test_rational_signs(self):
        x = load_corpus("circle")
        report = commutativity_check(x, SupportSet.of(0, 1), 30, QQ, seed=7)
        assert report["failures"] == []


class TestCommutingPower:
    def setup_method(self):
        self.x = load_corpus("circle")

    def _form_with_support(self, supports, window):
        b = cached_space_basis(self.x, window)
        for d in b.degrees():
            for i in range(b.dim(d)):
                f = b.to_form(d, {i: 1}, ZZ)
                if f.singular_support() == frozenset(supports):
                    return f
        raise AssertionError("no form found")

    def test_already_reduced(self):
        a = self._form_with_support({0}, S1)
        b = self._form_with_support({5}, SupportSet.of(5))
        assert commuting_power([(a, b)], ZZ, scan_check=True) == 0

    def test_single_shift(self):
        a = self._form_with_support({0}, S1)
        assert commuting_power([(a, a)], ZZ, scan_check=True) == 1

    def test_spread_supports(self):
        a = self._form_with_support({0, 5}, SupportSet.of(0, 5))
        b = self._form_with_support({0}, S1)
        assert commuting_power([(a, b)], ZZ, scan_check=True) == 6

    def test_sum_of_decomposables(self):
        a = self._form_with_support({0}, S1)
        c = self._form_with_support({2}, SupportSet.of(2))
        m = commuting_power([(a, a), (c, a)], ZZ, scan_check=True)
        assert m == 3
