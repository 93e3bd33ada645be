from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monofischer.clifford import ExactScalar, build_spinor_frame
from monofischer.decomp import (
    StableRangeError,
    SummandIndex,
    build_summand_basis,
    enumerate_summands,
    fischer_decompose,
    harmonic_refinement,
    summand_operator,
    verify_scalar_fischer,
    verify_theorem1,
)
from monofischer.exactla import rank_of_vectors
from monofischer.operators import apply
from monofischer.poly import ClPoly
from monofischer.spaces import monogenic_space
from strategies import random_spinor_poly


def S(J, n, t):
    return SummandIndex(tuple(J), tuple(n), t)


class TestEnumerate:
    def test_k1_l2(self):
        assert set(enumerate_summands(1, 2)) == {S((), (1,), 0), S((), (0,), 2), S((1,), (0,), 1)}

    def test_k2_l1(self):
        assert enumerate_summands(2, 1) == [S((), (0, 0, 0), 1), S((1,), (0, 0, 0), 0), S((2,), (0, 0, 0), 0)]

    def test_k2_l2_count(self):
        out = enumerate_summands(2, 2)
        assert len(out) == len(set(out)) == 7
        assert [s.t for s in out] == sorted((s.t for s in out), reverse=True)

    @pytest.mark.parametrize("k,l", [(1, 5), (2, 4), (3, 3)])
    def test_degree_and_order(self, k, l):
        out = enumerate_summands(k, l)
        assert all(s.degree() == l for s in out)
        assert out == sorted(out, key=lambda s: (-s.t, s.J, s.n))


class TestSummandBasis:
    def test_trivial_summand(self):
        B = build_summand_basis(S((), (0,), 3), 4, 1)
        assert B.elements() == monogenic_space(4, 1, 3).elements()

    def test_vector_times_m1(self):
        B = build_summand_basis(S((1,), (0,), 1), 3, 1)
        assert B.dim == 4 and rank_of_vectors(B.vectors) == 4

    def test_two_vectors_times_spinors(self):
        B = build_summand_basis(S((1, 2), (0, 0, 0), 0), 4, 2)
        assert B.dim == 4 and rank_of_vectors(B.vectors) == 4
        fr = build_spinor_frame(4)
        op = summand_operator(S((1, 2), (0, 0, 0), 0), 2)
        expect = [apply(op, ClPoly.constant(4, 2, s)) for s in fr.basis]
        assert rank_of_vectors([B.chart.to_vector(P) for P in expect] + list(B.vectors)) == 4

    def test_unstable(self):
        with pytest.raises(StableRangeError):
            build_summand_basis(S((), (0, 0, 0), 1), 3, 2)


class TestVerify:
    def test_three_one_two(self):
        rep = verify_theorem1(3, 1, 2)
        assert rep["pass"] and [s["dim"] for s in rep["summands"]] == [6, 4, 2]

    def test_four_two_one(self):
        rep = verify_theorem1(4, 2, 1)
        assert rep["pass"] and [s["dim"] for s in rep["summands"]] == [24, 4, 4]

    def test_four_two_zero(self):
        rep = verify_theorem1(4, 2, 0)
        assert rep["pass"] and rep["total_dim"] == 4 and len(rep["summands"]) == 1

    def test_report_keys(self):
        rep = verify_theorem1(3, 1, 1)
        assert {"m", "k", "degree", "summands", "total_dim", "rank", "pass", "elapsed"} <= set(rep)

    def test_reversed_order_same_verdict(self):
        for m, k, d in [(4, 2, 2), (6, 3, 2)]:
            assert verify_theorem1(m, k, d, order="reversed")["pass"] == verify_theorem1(m, k, d)["pass"]

    def test_unstable_refused_then_probed(self):
        with pytest.raises(StableRangeError):
            verify_theorem1(3, 2, 1)
        rep = verify_theorem1(3, 2, 2, force=True)
        assert rep["stable_range"] is False

    def test_scalar_regression(self):
        for m, k, d in [(3, 1, 4), (4, 2, 3)]:
            assert verify_scalar_fischer(m, k, d)["pass"]


class TestDecompose:
    def test_monogenic_single_component(self):
        P = monogenic_space(5, 2, 2).elements()[7]
        res = fischer_decompose(P)
        assert list(res.components) == [S((), (0, 0, 0), 2)]
        assert res.components[S((), (0, 0, 0), 2)][0] == P

    def test_rsq_times_spinor(self):
        s = build_spinor_frame(3).basis[1]
        P = ClPoly.rsq(3, 1, 1, 1).clifford_right_mul(s)
        res = fischer_decompose(P)
        assert res.residual.is_zero() and res.reassemble() == P
        assert S((), (1,), 0) in res.components

    @pytest.mark.parametrize("seed", range(10))
    def test_random_four_two_two(self, seed):
        P = random_spinor_poly(4, 2, 2, random.Random(seed))
        res = fischer_decompose(P)
        assert res.residual.is_zero() and res.reassemble() == P
        for s, (mono, term) in res.components.items():
            assert apply(summand_operator(s, 2), mono) == term

    def test_inhomogeneous(self):
        rng = random.Random(3)
        P = random_spinor_poly(4, 1, 1, rng) + random_spinor_poly(4, 1, 3, rng)
        assert fischer_decompose(P).residual.is_zero()

    @settings(max_examples=15, deadline=None)
    @given(st.integers(0, 10 ** 6), st.integers(-3, 3), st.integers(-3, 3))
    def test_linearity(self, seed, a, b):
        rng = random.Random(seed)
        P = random_spinor_poly(4, 2, 2, rng)
        Q = random_spinor_poly(4, 2, 2, rng)
        alpha, beta = ExactScalar(a, 1), ExactScalar(b)
        rp, rq = fischer_decompose(P), fischer_decompose(Q)
        rc = fischer_decompose(P.scale(alpha) + Q.scale(beta))
        zero = ClPoly.zero(4, 2)
        for s in set(rp.components) | set(rq.components) | set(rc.components):
            lhs = rc.components.get(s, (zero,))[0]
            rhs = rp.components.get(s, (zero,))[0].scale(alpha) + rq.components.get(s, (zero,))[0].scale(beta)
            assert lhs == rhs

    def test_uniqueness_after_perturbation(self):
        rng = random.Random(11)
        P = random_spinor_poly(5, 2, 2, rng)
        res = fischer_decompose(P)
        s = next(iter(res.components))
        extra = monogenic_space(5, 2, s.t).elements()[0]
        Q = P + apply(summand_operator(s, 2), extra)
        res2 = fischer_decompose(Q)
        assert res2.components[s][0] == res.components[s][0] + extra
        for s2 in res.components:
            if s2 != s:
                assert res2.components[s2][0] == res.components[s2][0]

    def test_non_spinor_rejected(self):
        with pytest.raises(Exception):
            fischer_decompose(ClPoly.constant(4, 1, 1))


class TestHarmonicRefinement:
    def test_three_one_one(self):
        rep = harmonic_refinement(1, 3, 1)
        assert rep["pass"] and [p["dim_M"] for p in rep["parts"]] == [4, 2] and rep["harmonic_dim"] == 6

    def test_four_two_one(self):
        rep = harmonic_refinement(1, 4, 2)
        assert rep["pass"] and [p["dim_M"] for p in rep["parts"]] == [24, 4, 4] and rep["harmonic_dim"] == 32

    def test_degree_zero(self):
        rep = harmonic_refinement(0, 5, 2)
        assert rep["pass"] and rep["harmonic_dim"] == 4
