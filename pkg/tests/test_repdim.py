from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monofischer.decomp import StableRangeError
from monofischer.repdim import (
    HighestWeight,
    Partition,
    RepError,
    gl_dim,
    graded_dim_identities,
    harmonic_sdim,
    klimyk_pairs,
    klimyk_spinor_tensor,
    pieri_wedge,
    rho,
    sdim,
    spinor_tensor_identity,
    spinor_weights,
    weyl_dim_so,
)
from monofischer.spaces import partitions, simplicial_harmonics

H = Fraction(1, 2)


class TestWeyl:
    def test_examples(self):
        assert weyl_dim_so(3, [H]) == 2
        assert weyl_dim_so(5, [1, 0]) == 5
        assert weyl_dim_so(5, [Fraction(3, 2), H]) == 16

    def test_non_dominant(self):
        with pytest.raises(RepError):
            weyl_dim_so(5, [0, 1])
        with pytest.raises(RepError):
            weyl_dim_so(5, [1, H])

    def test_even_allows_negative_last(self):
        assert weyl_dim_so(6, [1, 1, -1]) == weyl_dim_so(6, [1, 1, 1]) == 10

    def test_float_rejected(self):
        with pytest.raises(RepError):
            weyl_dim_so(5, [1.0, 0])

    def test_rho_series(self):
        assert rho(7) == (Fraction(5, 2), Fraction(3, 2), H)
        assert rho(6) == (2, 1, 0)

    @pytest.mark.parametrize("m", [3, 4, 5, 6, 7, 8])
    def test_vector_and_spinor(self, m):
        n = m // 2
        assert weyl_dim_so(m, [1] + [0] * (n - 1)) == m
        assert len(spinor_weights(m)) == 2 ** n
        signs = (1,) if m % 2 else (1, -1)
        spin = sum(weyl_dim_so(m, (H,) * (n - 1) + (s * H,)) for s in signs)
        assert spin == 2 ** n


class TestGl:
    def test_examples(self):
        assert gl_dim(2, [1, 0]) == 2
        assert gl_dim(3, [1, 1, 1]) == 1
        assert gl_dim(2, [1, 0], Fraction(4, 2)) == 2
        assert gl_dim(2, [1, 0], Fraction(5, 2)) == 2

    def test_non_dominant(self):
        with pytest.raises(RepError):
            gl_dim(2, [0, 1])

    def test_highest_weight_type(self):
        HighestWeight("gl", 3, (2, 1, 0))
        with pytest.raises(RepError):
            HighestWeight("so", 5, (0, 1))
        with pytest.raises(RepError):
            Partition((1, 2))


class TestKlimyk:
    def test_trivial(self):
        assert klimyk_spinor_tensor(5, [0, 0]) == [(H, H)]

    def test_vector_odd(self):
        out = klimyk_spinor_tensor(5, [1, 0])
        assert out == [(Fraction(3, 2), H), (H, H)]
        assert [weyl_dim_so(5, nu) for nu in out] == [16, 4]

    def test_vector_even(self):
        out = klimyk_spinor_tensor(4, [1, 0])
        assert sum(weyl_dim_so(4, nu) for nu in out) == 4 * 4
        assert len(out) == 4 and klimyk_pairs(4, out) == 2

    @settings(max_examples=100, deadline=None)
    @given(st.integers(3, 8), st.data())
    def test_dimension_and_count(self, m, data):
        n = m // 2
        k = data.draw(st.integers(1, n))
        head = sorted(data.draw(st.lists(st.integers(0, 3), min_size=k, max_size=k)), reverse=True)
        lam = head + [0] * (n - k)
        out = klimyk_spinor_tensor(m, lam)
        assert sum(weyl_dim_so(m, nu) for nu in out) == weyl_dim_so(m, lam) * 2 ** n
        assert len(set(out)) == len(out)
        assert klimyk_pairs(m, out) <= 2 ** k
        if m % 2:
            assert len(out) <= 2 ** k
        if k < n:
            assert len(out) <= 2 ** (k + 1)

    @pytest.mark.parametrize("m", [5, 7])
    def test_count_attained_in_chamber(self, m):
        n = m // 2
        lam = list(range(n, 0, -1))
        assert len(klimyk_spinor_tensor(m, lam)) == 2 ** n


class TestPieri:
    def test_examples(self):
        assert pieri_wedge(2, 1, (0, 0)) == [(1, 0)]
        assert pieri_wedge(2, 2, (1, 0)) == [(2, 1)]
        assert gl_dim(2, (2, 1)) == 2
        out = pieri_wedge(3, 1, (1, 1, 0))
        assert out == [(2, 1, 0), (1, 1, 1)]
        assert sum(gl_dim(3, b) for b in out) == 3 * gl_dim(3, (1, 1, 0))

    @pytest.mark.parametrize("k", [1, 2, 3, 4])
    def test_dimension_identity(self, k):
        for d in range(3 * k + 1):
            for a in partitions(d, k):
                if a and a[0] > 3:
                    continue
                for j in range(k + 1):
                    assert comb(k, j) * gl_dim(k, a) == sum(gl_dim(k, b) for b in pieri_wedge(k, j, a))


class TestSpinorDims:
    def test_sdim_examples(self):
        assert sdim(5, (1, 0)) == 16
        assert sdim(4, (1, 1)) == 8
        assert sdim(5, (0, 0)) == 4

    @pytest.mark.parametrize("m,k", [(4, 2), (5, 2), (6, 3), (7, 3), (8, 2)])
    def test_tensor_identity(self, m, k):
        for d in range(4):
            for a in partitions(d, k):
                assert spinor_tensor_identity(m, a)["pass"]

    @pytest.mark.parametrize("m,a", [(4, (1, 1)), (5, (2, 1)), (6, (1, 1, 0))])
    def test_harmonic_sdim_vs_kernel(self, m, a):
        assert harmonic_sdim(m, a) == simplicial_harmonics(m, len(a), a).dim

    def test_positive(self):
        for m in range(3, 9):
            for a in partitions(3, min(2, m // 2)):
                assert sdim(m, a) > 0 and harmonic_sdim(m, a) > 0


class TestGradedIdentities:
    def test_three_one_two(self):
        rep = graded_dim_identities(3, 1, 2)
        assert rep["pass"]
        assert rep["checks"]["c_fischer_count"]["lhs"] == 12

    def test_four_two_one(self):
        rep = graded_dim_identities(4, 2, 1)
        assert rep["checks"]["a_monogenic"]["lhs"] == 24
        assert rep["checks"]["c_fischer_count"] == {"lhs": 32, "rhs": 32, "pass": True}

    @pytest.mark.parametrize("m,k", [(3, 1), (5, 2), (6, 3)])
    def test_degree_zero(self, m, k):
        rep = graded_dim_identities(m, k, 0)
        assert rep["pass"] and rep["checks"]["a_monogenic"]["lhs"] == 2 ** (m // 2)

    def test_unstable_refused(self):
        with pytest.raises(StableRangeError):
            graded_dim_identities(3, 2, 1)
        assert graded_dim_identities(3, 2, 1, force=True)["checks"]["c_fischer_count"]["pass"]
