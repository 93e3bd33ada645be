from __future__ import annotations

import json
import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monofischer.clifford import ExactScalar, build_spinor_frame
from monofischer.exactla import is_direct_sum, rank_of_vectors
from monofischer.operators import GeneratorTag, apply, triangular_split
from monofischer.poly import ClPoly, fischer_inner
from monofischer.repdim import gl_dim, harmonic_sdim, sdim, weyl_dim_so
from monofischer.spaces import (
    SpaceError,
    export_manifest,
    generate_M_component,
    harmonic_projection,
    harmonic_space,
    monogenic_projection,
    monogenic_space,
    monogenic_span_check,
    monomial_basis,
    partitions,
    simplicial_harmonics,
    simplicial_monogenics,
    slice_chart,
)
from strategies import random_spinor_poly


def laplacians(k):
    return triangular_split(k)["p_minus"]


def diracs(k):
    return triangular_split(k)["f_minus"]


class TestMonomialBasis:
    def test_examples(self):
        assert monomial_basis(3, 1, 2, spinor=False).dim == 6
        assert monomial_basis(4, 2, 1).dim == 32
        assert monomial_basis(5, 2, 0).dim == 4

    @pytest.mark.parametrize("m,k,d", [(3, 2, 3), (5, 1, 4), (6, 3, 1)])
    def test_stars_and_bars(self, m, k, d):
        assert monomial_basis(m, k, d).dim == comb(d + m * k - 1, m * k - 1) * 2 ** (m // 2)


class TestHarmonic:
    def test_spherical(self):
        assert harmonic_space(3, 1, 2).dim == 5

    def test_degree_zero_is_full(self):
        assert harmonic_space(4, 1, 0, spinor=True).dim == 4

    def test_against_weyl_dims(self):
        # kernel dimension vs sum over partitions of dim H^S_a * dim F_a
        expect = sum(harmonic_sdim(4, a) * gl_dim(2, a) for a in partitions(2, 2))
        assert harmonic_space(4, 2, 2).dim == expect == 33

    def test_elements_are_harmonic(self):
        for P in harmonic_space(4, 2, 2).elements():
            for L in laplacians(2):
                assert apply(L, P).is_zero()


class TestMonogenic:
    @pytest.mark.parametrize("m,d", [(3, 2), (3, 4), (4, 3), (5, 2), (6, 2)])
    def test_single_variable_count(self, m, d):
        # classical count dim S * C(d+m-2, m-2)
        assert monogenic_space(m, 1, d).dim == 2 ** (m // 2) * comb(d + m - 2, m - 2)

    def test_two_variables_degree_one(self):
        # 32 minus the rank of the stacked Dirac map computed by the generic action
        chart = slice_chart(4, 2, 1, True)
        images = []
        for p in range(chart.dim):
            P = chart.element(p)
            cols = {}
            for g in diracs(2):
                for exp, c in apply(g, P).terms.items():
                    for mask, v in c.terms.items():
                        cols[(g, exp, mask)] = v
            images.append(cols)
        assert monogenic_space(4, 2, 1).dim == 32 - rank_of_vectors(images) == 24

    def test_constants(self):
        assert monogenic_space(6, 3, 0).dim == 8

    def test_elements_are_monogenic(self):
        for P in monogenic_space(5, 2, 2).elements():
            for D in diracs(2):
                assert apply(D, P).is_zero()


class TestSimplicial:
    def test_constants(self):
        assert simplicial_monogenics(5, 2, (0, 0)).dim == 4

    def test_weyl_odd(self):
        assert simplicial_monogenics(5, 2, (1, 0)).dim == weyl_dim_so(5, ["3/2", "1/2"]) == 16

    def test_even_two_halves(self):
        plus = simplicial_monogenics(4, 2, (1, 1), chirality=1).dim
        minus = simplicial_monogenics(4, 2, (1, 1), chirality=-1).dim
        assert simplicial_monogenics(4, 2, (1, 1)).dim == plus + minus
        assert sorted([plus, minus]) == sorted([weyl_dim_so(4, ["3/2", "3/2"]), weyl_dim_so(4, ["3/2", "-3/2"])])

    def test_harmonic_examples(self):
        assert simplicial_harmonics(5, 2, (0, 0)).dim == 1
        assert simplicial_harmonics(4, 1, (2,)).dim == weyl_dim_so(4, [2, 0]) == 9
        assert simplicial_harmonics(5, 2, (1, 1)).dim == weyl_dim_so(5, [1, 1]) == 10

    def test_non_partition(self):
        with pytest.raises(SpaceError):
            simplicial_monogenics(5, 2, (0, 1))

    @pytest.mark.parametrize("m,k", [(4, 2), (5, 2), (6, 3), (7, 2)])
    def test_dims_match_formulas(self, m, k):
        for d in range(3):
            for a in partitions(d, k):
                assert simplicial_monogenics(m, k, a).dim == sdim(m, a)
                assert simplicial_harmonics(m, k, a).dim == harmonic_sdim(m, a)


class TestProjections:
    def test_harmonic_fixed(self):
        for P in harmonic_space(4, 2, 2, spinor=True).elements()[:10]:
            assert harmonic_projection(P) == P

    def test_rsq_times_spinor(self):
        s = build_spinor_frame(3).basis[0]
        P = ClPoly.rsq(3, 1, 1, 1).clifford_right_mul(s)
        assert harmonic_projection(P).is_zero()

    def test_vector_times_monogenic(self):
        for M in monogenic_space(3, 1, 1).elements():
            X = apply(GeneratorTag("VECMUL", 1), M)
            H = harmonic_projection(X)
            assert not H.is_zero()
            for s in build_spinor_frame(3).basis:
                r2s = ClPoly.rsq(3, 1, 1, 1).clifford_right_mul(s)
                assert fischer_inner(H, r2s) == ExactScalar(0)

    def test_monogenic_fixed_and_killed(self):
        for P in monogenic_space(4, 2, 2).elements()[:10]:
            assert monogenic_projection(P) == P
        s = build_spinor_frame(4).basis[2]
        X = ClPoly.vector_variable(4, 2, 1).clifford_right_mul(s)
        assert monogenic_projection(X).is_zero()

    def test_inhomogeneous_rejected(self):
        s = build_spinor_frame(3).basis[0]
        P = ClPoly.constant(3, 1, s) + ClPoly.vector_variable(3, 1, 1).clifford_right_mul(s)
        with pytest.raises(Exception):
            harmonic_projection(P)

    def test_monogenic_remainder_in_image(self):
        # P - proj(P) = ux Q, solvable exactly in the vector-multiple span
        rng = random.Random(7)
        P = random_spinor_poly(3, 1, 2, rng)
        R = P - monogenic_projection(P)
        chart = slice_chart(3, 1, 2, True)
        low = slice_chart(3, 1, 1, True)
        span = [chart.to_vector(apply(GeneratorTag("VECMUL", 1), low.element(p))) for p in range(low.dim)]
        assert rank_of_vectors(span + [chart.to_vector(R)]) == rank_of_vectors(span)

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from([(3, 1, 3), (4, 1, 2), (4, 2, 2), (5, 2, 2)]), st.integers(0, 10 ** 6))
    def test_laws(self, cell, seed):
        m, k, d = cell
        P = random_spinor_poly(m, k, d, random.Random(seed))
        H = harmonic_projection(P)
        assert harmonic_projection(H) == H
        for L in laplacians(k):
            assert apply(L, H).is_zero()
        low = slice_chart(m, k, d - 2, True)
        for g in triangular_split(k)["p_plus"]:
            for p in range(0, low.dim, 3):
                assert fischer_inner(apply(g, low.element(p)), H) == ExactScalar(0)
        M = monogenic_projection(P)
        assert monogenic_projection(M) == M
        assert fischer_inner(P - M, M) == ExactScalar(0)


class TestGeneration:
    def test_k1_is_simplicial(self):
        assert generate_M_component(4, 1, (3,)).dim == simplicial_monogenics(4, 1, (3,)).dim

    def test_five_two(self):
        assert generate_M_component(5, 2, (1, 0)).dim == 16 * 2 == monogenic_space(5, 2, 1).dim

    @pytest.mark.parametrize("m,k,d", [(4, 2, 2), (5, 2, 2), (6, 3, 2)])
    def test_direct_sum_gives_M(self, m, k, d):
        parts = [generate_M_component(m, k, a) for a in partitions(d, k)]
        rep = is_direct_sum(parts, monogenic_space(m, k, d).dim)
        assert rep.passed
        for a, part in zip(partitions(d, k), parts):
            assert part.dim == sdim(m, a) * gl_dim(k, a)

    @pytest.mark.parametrize("m,k,d", [(4, 2, 2), (5, 2, 3), (6, 3, 2)])
    def test_span_identity(self, m, k, d):
        assert monogenic_span_check(m, k, d)["pass"]


def test_manifest():
    B = simplicial_monogenics(5, 2, (1, 0))
    man = export_manifest("MS", B)
    assert (man["space"], man["m"], man["k"], man["selector"], man["dim"]) == ("MS", 5, 2, [1, 0], 16)
    back = [ClPoly.from_json(e) for e in json.loads(json.dumps(man))["elements"]]
    assert back == B.elements()
