import pytest

from diffform.ring import GF2, FieldClassSpace
from diffform.line import SupportSet
from diffform.space import build_space, classical_complex
from diffform.steenrod import (
    CapExceeded,
    NotACocycle,
    UnsolvableLift,
    bockstein,
    lazy_sq1_class,
    lift_cup_family,
    lift_cup_family_auto,
    square_model,
    square_table,
)
from diffform.corpus import load_corpus

S1 = SupportSet.of(0)


@pytest.fixture(scope="module")
def circle_family():
    fam, win, tried = lift_cup_family_auto(load_corpus("circle"), S1, 1)
    return fam


@pytest.fixture(scope="module")
def rp2_family():
    fam, win, tried = lift_cup_family_auto(load_corpus("rp2"), S1, 1)
    return fam


class TestLift:
    def test_point_mu1_zero(self):
        pt = build_space([[0]])
        fam = lift_cup_family(pt, S1, 1)
        for deg in fam.square.degrees():
            for col in fam.square.tensor_columns(deg):
                assert fam.mu_mask(1, deg, col) == 0

    def test_circle_residual(self, circle_family):
        assert circle_family.residual(1)

    def test_circle_symmetric_on_reduced(self, circle_family):
        assert circle_family.symmetric_on_reduced()

    def test_escalation_reports_failures(self):
        with pytest.raises(UnsolvableLift) as exc:
            lift_cup_family(load_corpus("circle"), S1, 1)
        assert exc.value.needed == 3

    def test_cap_exceeded(self):
        with pytest.raises(CapExceeded):
            lift_cup_family(load_corpus("circle"), S1, 1, degree_cap=1)


class TestSquares:
    def test_sq0_identity_on_circle(self, circle_family):
        st = square_table(circle_family)
        assert st.square(1, (1,), 0) == (1,)

    def test_sq1_circle_zero(self, circle_family):
        st = square_table(circle_family)
        assert st.square(1, (1,), 1) == ()  # H^2(S^1) = 0

    def test_sq1_rp2_is_cup_square(self, rp2_family):
        st = square_table(rp2_family)
        got = st.square(1, (1,), 1)
        assert got == (1,)  # nonzero in H^2(RP^2)

    def test_sq0_rp2(self, rp2_family):
        st = square_table(rp2_family)
        assert st.square(1, (1,), 0) == (1,)
        assert st.square(2, (1,), 0) == (1,)

    def test_representative_independence(self, rp2_family):
        st = square_table(rp2_family)
        sq = rp2_family.square
        base = st.rep_basis_mask(1, (1,))
        reference = st.square_of_cocycle(1, base, 1)
        acx = sq.basis.cochain_complex(GF2)
        d0 = acx.differential(0)
        for j in range(min(4, d0.cols)):
            cob = 0
            for r, v in d0.column(j).items():
                if int(v) % 2:
                    cob ^= 1 << r
            assert st.square_of_cocycle(1, base ^ cob, 1) == reference

    def test_not_a_cocycle(self, rp2_family):
        st = square_table(rp2_family)
        sq = rp2_family.square
        # a noncocycle: any degree-1 basis vector outside the kernel
        acx = sq.basis.cochain_complex(GF2)
        d1 = acx.differential(1)
        bad = None
        for j in range(d1.cols):
            if any(int(v) % 2 for v in d1.column(j).values()):
                bad = 1 << j
                break
        assert bad is not None
        with pytest.raises(NotACocycle):
            st.square_of_cocycle(1, bad, 1)

    def test_lazy_matches_full(self, rp2_family):
        st = square_table(rp2_family)
        lazy = lazy_sq1_class(rp2_family.square, st.classes, 1, st.rep_basis_mask(1, (1,)))
        assert lazy == st.square(1, (1,), 1)


class TestBockstein:
    def _class_values(self, x, degree, k=0):
        cc = classical_complex(x, GF2)
        cls = FieldClassSpace(cc.cochain, degree, GF2)
        rep = cls.reps[k]
        return cc, cls, {cc.bases[degree][i]: v for i, v in rep.items()}

    def test_rp2_generator_nonzero(self):
        x = load_corpus("rp2")
        cc, cls, values = self._class_values(x, 1)
        beta = bockstein(x, 1, values)
        cls2 = FieldClassSpace(cc.cochain, 2, GF2)
        coords = {}
        for i, label in enumerate(cc.bases[2]):
            if beta.get(label):
                coords[i] = 1
        assert any(int(v) % 2 for v in cls2.class_of(coords))

    def test_circle_generator_zero(self):
        x = load_corpus("circle")
        cc, cls, values = self._class_values(x, 1)
        assert bockstein(x, 1, values) == {}

    def test_zero_class(self):
        x = load_corpus("rp2")
        assert bockstein(x, 1, {}) == {}

    def test_beta_squared_zero(self):
        x = load_corpus("rp2")
        cc, cls, values = self._class_values(x, 1)
        beta = bockstein(x, 1, values)
        cc2 = classical_complex(x, GF2)
        cls2 = FieldClassSpace(cc2.cochain, 2, GF2)
        beta2 = bockstein(x, 2, beta)
        coords = {}
        for i, label in enumerate(cc2.bases.get(3, [])):
            if beta2.get(label):
                coords[i] = 1
        assert not coords  # dim 3 empty on a surface anyway

    def test_sq1_equals_bockstein_rp2(self, rp2_family):
        # compare through the comparison chain map
        from diffform.space import comparison_map, cached_space_basis

        x = load_corpus("rp2")
        cc, cls, values = self._class_values(x, 1)
        st = square_table(rp2_family)
        cm = comparison_map(x, rp2_family.support, GF2)
        basis = cached_space_basis(x, rp2_family.support)
        theta = cm.apply(1, values)
        coords = basis.express(theta)
        rep_mask = 0
        for k, v in coords.items():
            if int(v) % 2:
                rep_mask |= 1 << k
        sq1 = st.square_of_cocycle(1, rep_mask, 1)
        beta = bockstein(x, 1, values)
        theta_beta = cm.apply(2, beta)
        bcoords = basis.express(theta_beta)
        beta_class = st.classes[2].class_of(
            {k: v for k, v in bcoords.items() if int(v) % 2}
        )
        assert sq1 == beta_class


class TestNaturality:
    def test_restriction_intertwines_squares(self, rp2_family):
        # restriction to a nonbounding circle inside the projective plane
        x = load_corpus("rp2")
        sub = x.subcomplex([(1, 4), (4, 5), (1, 5)])
        from diffform.space import SpaceForm, cached_space_basis

        sub_fam, win, _ = lift_cup_family_auto(sub, rp2_family.support, 1)
        st = square_table(rp2_family)
        st_sub = square_table(sub_fam)
        basis = cached_space_basis(x, rp2_family.support)
        sub_basis = cached_space_basis(sub, win)
        cache = {}
        for j in (0, 1):
            # restrict the rp2 class representative, then square downstairs
            rep_mask = st.rep_basis_mask(1, (1,))
            form = basis.to_form(1, {k: 1 for k in range(basis.dim(1)) if rep_mask >> k & 1}, GF2)
            vals = {m: form.at(m) for m in sub.maximal}
            sub_form = SpaceForm(GF2, sub, win, vals)
            coords = sub_basis.express(sub_form, cache)
            sub_mask = 0
            for k, v in coords.items():
                if int(v) % 2:
                    sub_mask |= 1 << k
            down = st_sub.square_of_cocycle(1, sub_mask, j)
            up = st.square(1, (1,), j)
            # push the upstairs square down and compare classes
            if 1 + j in st.classes and st.classes[1 + j].dim and 1 + j in st_sub.classes:
                up_mask = st.rep_basis_mask(1 + j, up) if up else 0
                form_up = basis.to_form(
                    1 + j, {k: 1 for k in range(basis.dim(1 + j)) if up_mask >> k & 1}, GF2
                )
                vals_up = {m: form_up.at(m) for m in sub.maximal}
                sub_up = SpaceForm(GF2, sub, win, vals_up)
                coords_up = sub_basis.express(sub_up, cache)
                mask_up = 0
                for k, v in coords_up.items():
                    if int(v) % 2:
                        mask_up |= 1 << k
                if st_sub.classes.get(1 + j) and st_sub.classes[1 + j].dim:
                    pushed = st_sub.classes[1 + j].class_of(
                        {k: 1 for k in range(sub_basis.dim(1 + j)) if mask_up >> k & 1}
                    )
                    assert pushed == down
