"""Shared hypothesis strategies and random generators for the test suite."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from monofischer.clifford import CliffordElement, ExactScalar
from monofischer.poly import ClPoly
from monofischer.spaces import slice_chart

small_q = st.fractions(min_value=-3, max_value=3, max_denominator=4)
scalars = st.builds(ExactScalar, small_q, small_q)


@st.composite
def clifford_elements(draw, m: int, max_terms: int = 4):
    masks = draw(st.lists(st.integers(0, (1 << m) - 1), max_size=max_terms))
    return CliffordElement(m, {mk: draw(scalars) for mk in masks})


@st.composite
def spinor_polys(draw, m: int, k: int, degree: int, max_terms: int = 5):
    chart = slice_chart(m, k, degree, True)
    idx = draw(st.lists(st.integers(0, chart.dim - 1), max_size=max_terms, unique=True))
    vec = {p: draw(scalars) for p in idx}
    return chart.to_poly({p: v for p, v in vec.items() if v})


@st.composite
def clifford_polys(draw, m: int, k: int, max_degree: int, max_terms: int = 4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exp = tuple(draw(st.lists(st.integers(0, max_degree), min_size=m * k, max_size=m * k)))
        if sum(exp) > max_degree:
            continue
        terms[exp] = draw(clifford_elements(m, 3))
    return ClPoly(m, k, {e: c for e, c in terms.items() if c})


def random_spinor_poly(m: int, k: int, degree: int, rng: random.Random, nterms: int = 8) -> ClPoly:
    """Homogeneous spinor-valued polynomial with small Gaussian-rational coefficients."""
    chart = slice_chart(m, k, degree, True)
    vec = {}
    for p in rng.sample(range(chart.dim), min(nterms, chart.dim)):
        c = ExactScalar(rng.randint(-4, 4), rng.randint(-4, 4)) / rng.randint(1, 3)
        if c:
            vec[p] = c
    return chart.to_poly(vec)
