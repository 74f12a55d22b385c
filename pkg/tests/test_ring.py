import pytest
from fractions import Fraction
from hypothesis import given, settings, strategies as st

from diffform.ring import (
    GF2,
    GF3,
    QQ,
    ZZ,
    CochainComplex,
    NotAComplex,
    RingSpec,
    SparseMatrix,
    cohomology_of_complex,
    field_kernel_basis,
    field_rank,
    integer_kernel_basis,
    smith_normal_form,
)


def dense(m):
    return SparseMatrix.from_dense(m)


class TestRingSpec:
    def test_parse(self):
        assert RingSpec.parse("z") == ZZ
        assert RingSpec.parse("q") == QQ
        assert RingSpec.parse("f2") == GF2
        assert RingSpec.parse("fp:7") == RingSpec.prime_field(7)
        assert RingSpec.parse("zmod:4") == RingSpec.cyclic(4)

    def test_prime_required(self):
        with pytest.raises(ValueError):
            RingSpec.prime_field(6)
        with pytest.raises(ValueError):
            RingSpec.cyclic(1)

    def test_arithmetic(self):
        assert GF3.add(2, 2) == 1
        assert GF3.inv(2) == 2
        assert QQ.coerce(3) == Fraction(3)
        assert RingSpec.cyclic(4).coerce(-1) == 3


class TestSmith:
    def test_example_2_3(self):
        # [[2,0],[0,3]] -> [1,6]
        diag, rank = smith_normal_form(dense([[2, 0], [0, 3]]))
        assert diag == [1, 6]
        assert rank == 2

    def test_zero_matrix(self):
        diag, rank = smith_normal_form(dense([[0, 0, 0]] * 3))
        assert diag == []
        assert rank == 0

    def test_identity(self):
        diag, rank = smith_normal_form(dense([[1, 0], [0, 1]]))
        assert diag == [1, 1]
        assert rank == 2

    def test_divisibility_chain(self):
        diag, _ = smith_normal_form(dense([[2, 4, 4], [-6, 6, 12], [10, 4, 16]]))
        for a, b in zip(diag, diag[1:]):
            assert b % a == 0

    @settings(max_examples=60, deadline=None)
    @given(st.data())
    def test_unimodular_invariance(self, data):
        n = data.draw(st.integers(2, 4))
        m = data.draw(st.integers(2, 4))
        mat = [
            [data.draw(st.integers(-6, 6)) for _ in range(m)] for _ in range(n)
        ]
        diag, _ = smith_normal_form(dense(mat))
        # random unimodular row/column shears and swaps
        work = [row[:] for row in mat]
        for _ in range(data.draw(st.integers(1, 6))):
            kind = data.draw(st.integers(0, 3))
            if kind == 0 and n > 1:
                i, j = data.draw(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)))
                if i != j:
                    c = data.draw(st.integers(-3, 3))
                    work[i] = [a + c * b for a, b in zip(work[i], work[j])]
            elif kind == 1 and m > 1:
                i, j = data.draw(st.tuples(st.integers(0, m - 1), st.integers(0, m - 1)))
                if i != j:
                    c = data.draw(st.integers(-3, 3))
                    for row in work:
                        row[i] += c * row[j]
            elif kind == 2 and n > 1:
                work[0], work[-1] = work[-1], work[0]
            elif kind == 3 and m > 1:
                for row in work:
                    row[0], row[-1] = row[-1], row[0]
        diag2, _ = smith_normal_form(dense(work))
        assert diag == diag2


class TestKernels:
    def test_integer_kernel_saturated(self):
        # kernel of [2 -2] over Z is generated by (1,1), not (2,2)
        basis = integer_kernel_basis(dense([[2, -2]]))
        assert len(basis) == 1
        vec = basis[0]
        assert sorted(vec.values()) in ([1, 1], [-1, -1])

    def test_kernel_is_kernel(self):
        m = dense([[1, 2, 3], [4, 5, 6]])
        for vec in integer_kernel_basis(m):
            assert m.apply(vec) == {}

    def test_field_kernel_gf2(self):
        m = dense([[1, 1, 0], [0, 1, 1]])
        basis = field_kernel_basis(m, GF2)
        assert len(basis) == 1
        assert {k: v % 2 for k, v in m.apply(basis[0]).items() if v % 2} == {}

    def test_rank_drops_mod_p(self):
        m = dense([[2]])
        assert field_rank(m, QQ) == 1
        assert field_rank(m, GF2) == 0


def one_map_complex(value, ring=ZZ):
    return CochainComplex(
        dims={0: 1, 1: 1},
        diff={0: dense([[value]])},
    )


class TestCohomology:
    def test_single_term(self):
        cx = CochainComplex(dims={0: 1}, diff={})
        res = cohomology_of_complex(cx, ZZ)
        assert res.free_ranks() == {0: 1}
        assert res.torsion() == {}

    def test_times_two_over_z(self):
        res = cohomology_of_complex(one_map_complex(2), ZZ)
        assert res.free_ranks() == {0: 0, 1: 0}
        assert res.torsion() == {1: [2]}

    def test_identity_map(self):
        res = cohomology_of_complex(one_map_complex(1), ZZ)
        assert res.free_ranks() == {0: 0, 1: 0}
        assert res.torsion() == {}

    def test_times_two_over_q(self):
        res = cohomology_of_complex(one_map_complex(2), QQ)
        assert res.free_ranks() == {0: 0, 1: 0}

    def test_times_two_over_f2(self):
        res = cohomology_of_complex(one_map_complex(2), GF2)
        assert res.free_ranks() == {0: 1, 1: 1}

    def test_not_a_complex(self):
        cx = CochainComplex(
            dims={0: 1, 1: 1, 2: 1},
            diff={0: dense([[1]]), 1: dense([[1]])},
        )
        with pytest.raises(NotAComplex):
            cohomology_of_complex(cx, ZZ)

    def test_zmod4_of_times_two(self):
        # k --x2--> k over Z/4: H^0 = ker(2: Z/4 -> Z/4) = Z/2, H^1 = Z/2
        res = cohomology_of_complex(one_map_complex(2), RingSpec.cyclic(4))
        assert res.torsion() == {0: [2], 1: [2]}

    def test_field_rank_nullity(self):
        # rank(ker) + rank(im) = dim in each degree over a field
        cx = CochainComplex(
            dims={0: 3, 1: 2},
            diff={0: dense([[1, 1, 0], [0, 1, 1]])},
        )
        d = cx.differential(0)
        for ring in (QQ, GF2, GF3):
            r = field_rank(d, ring)
            k = len(field_kernel_basis(d, ring))
            assert r + k == 3
