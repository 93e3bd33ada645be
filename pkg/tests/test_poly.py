from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monofischer.clifford import CliffordElement, ExactScalar, build_spinor_frame
from monofischer.operators import GeneratorTag, apply
from monofischer.poly import (
    ClPoly,
    GradedSlice,
    PolyError,
    PolyFormatError,
    fischer_inner,
    graded_component,
    multidegree,
)
from strategies import clifford_polys, spinor_polys


def x(m, k, i, j):
    return ClPoly.variable(m, k, i, j)


class TestArithmetic:
    def test_add(self):
        assert x(3, 1, 1, 1) + x(3, 1, 1, 1) == x(3, 1, 1, 1).scale(2)

    def test_left_clifford(self):
        e1 = CliffordElement.generator(3, 1)
        P = x(3, 1, 1, 1).clifford_left_mul(e1)
        assert P.clifford_left_mul(e1) == -x(3, 1, 1, 1)

    def test_zero_scale(self):
        assert x(3, 2, 2, 1).scale(0).is_zero()

    def test_mismatch(self):
        with pytest.raises(PolyError):
            x(3, 1, 1, 1) + x(4, 1, 1, 1)


class TestGrading:
    def test_total_degree(self):
        x11x12 = ClPoly.monomial(3, 2, (1, 1, 0, 0, 0, 0))
        P = x(3, 2, 1, 1) + x11x12
        assert graded_component(P, 2) == x11x12

    def test_above_degree(self):
        assert graded_component(x(3, 1, 1, 1), 5).is_zero()

    def test_multidegree(self):
        P = ClPoly.monomial(3, 2, (1, 1, 0, 0, 0, 0))
        assert graded_component(P, GradedSlice(multi=(1, 1))) == P

    def test_multidegree_is_column_sum(self):
        exp = (2, 0, 1, 3)  # m = 2, k = 2: rows (2,0), (1,3)
        assert multidegree(exp, 2) == (3, 3)

    @settings(max_examples=40, deadline=None)
    @given(clifford_polys(3, 2, 3))
    def test_components_partition_and_idempotent(self, P):
        acc = ClPoly.zero(3, 2)
        for d in range(4):
            c = graded_component(P, d)
            assert graded_component(c, d) == c
            acc = acc + c
        assert acc == P


class TestFischer:
    def test_square(self):
        P = ClPoly.monomial(3, 1, (2, 0, 0))
        assert fischer_inner(P, P) == ExactScalar(2)

    def test_disjoint(self):
        assert fischer_inner(x(3, 2, 1, 1), x(3, 2, 1, 2)) == ExactScalar(0)

    def test_clifford_coefficient(self):
        P = x(3, 1, 1, 1).clifford_left_mul(CliffordElement.generator(3, 1))
        assert fischer_inner(P, P) == ExactScalar(1)

    def test_mismatch(self):
        with pytest.raises(PolyError):
            fischer_inner(x(3, 1, 1, 1), x(3, 2, 1, 1))

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_positive_and_hermitian(self, data):
        m = data.draw(st.integers(3, 6))
        k = data.draw(st.integers(1, 3 if m >= 5 else 2))
        d = data.draw(st.integers(0, 3 if m * k <= 8 else 2))
        f = data.draw(spinor_polys(m, k, d))
        g = data.draw(spinor_polys(m, k, d))
        ff = fischer_inner(f, f)
        assert ff.im == 0 and ff.re >= 0
        assert (ff.re == 0) == f.is_zero()
        assert fischer_inner(f, g) == fischer_inner(g, f).conjugate()

    def test_monomial_gram_is_diagonal(self):
        fr = build_spinor_frame(4)
        basis = [ClPoly.monomial(4, 1, e).clifford_right_mul(CliffordElement.scalar(4, 1))
                 .clifford_left_mul(s) for e in [(1, 0, 0, 0), (0, 1, 0, 0)] for s in fr.basis]
        for p, f in enumerate(basis):
            for q, g in enumerate(basis):
                if p != q:
                    assert not fischer_inner(f, g)


def adjoint_sign():
    """sigma in <ux_j f, g> = sigma <f, dirac_j g>, fixed by one degree-1 instance."""
    fr = build_spinor_frame(3)
    f = ClPoly.constant(3, 1, fr.basis[0])
    g = ClPoly.vector_variable(3, 1, 1).clifford_right_mul(fr.idempotent)
    lhs = fischer_inner(apply(GeneratorTag("VECMUL", 1), f), g)
    rhs = fischer_inner(f, apply(GeneratorTag("DIRAC", 1), g))
    assert rhs
    return lhs / rhs


class TestAdjointness:
    def test_sign_is_minus_one(self):
        assert adjoint_sign() == ExactScalar(-1)

    @settings(max_examples=40, deadline=None)
    @given(st.data())
    def test_global_sign(self, data):
        sigma = adjoint_sign()
        m = data.draw(st.integers(3, 5))
        k = data.draw(st.integers(1, 2))
        j = data.draw(st.integers(1, k))
        d = data.draw(st.integers(0, 2))
        f = data.draw(spinor_polys(m, k, d))
        g = data.draw(spinor_polys(m, k, d + 1))
        lhs = fischer_inner(apply(GeneratorTag("VECMUL", j), f), g)
        rhs = fischer_inner(f, apply(GeneratorTag("DIRAC", j), g))
        assert lhs == sigma * rhs


class TestSerialization:
    @settings(max_examples=30, deadline=None)
    @given(clifford_polys(3, 2, 3))
    def test_roundtrip(self, P):
        assert ClPoly.loads(P.dumps()) == P
        assert ClPoly.loads(P.dumps()).dumps() == P.dumps()

    def test_parse_error_has_position(self):
        with pytest.raises(PolyFormatError, match="line"):
            ClPoly.loads('{"m": 3,\n "k": 1, "terms": [}')

    def test_path_annotated_error(self):
        bad = '{"m": 3, "k": 1, "terms": [{"exp": [[1],[0],[-1]], "coeff": []}]}'
        with pytest.raises(PolyFormatError, match=r"\$\.terms\[0\]\.exp"):
            ClPoly.loads(bad)

    def test_rational_strings(self):
        P = ClPoly.constant(3, 1, CliffordElement.scalar(3, ExactScalar("2/6")))
        assert '"1/3"' in P.dumps()
