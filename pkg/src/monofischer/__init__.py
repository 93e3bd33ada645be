"""Exact monogenic Fischer decompositions of spinor-valued polynomials in several vector variables."""

from __future__ import annotations

from .clifford import CliffordElement, ExactScalar, SpinorFrame, build_spinor_frame
from .decomp import (
    DecompositionResult,
    StableRangeError,
    SummandIndex,
    enumerate_summands,
    fischer_decompose,
    harmonic_refinement,
    verify_scalar_fischer,
    verify_theorem1,
)
from .exactla import CoordinateChart, ExactMatrix, SubspaceBasis
from .operators import GeneratorTag, OperatorExpr, check_relation, relation_suite
from .poly import ClPoly, fischer_inner

__all__ = [
    "ClPoly",
    "CliffordElement",
    "CoordinateChart",
    "DecompositionResult",
    "ExactMatrix",
    "ExactScalar",
    "GeneratorTag",
    "OperatorExpr",
    "SpinorFrame",
    "StableRangeError",
    "SubspaceBasis",
    "SummandIndex",
    "build_spinor_frame",
    "check_relation",
    "enumerate_summands",
    "fischer_decompose",
    "fischer_inner",
    "harmonic_refinement",
    "relation_suite",
    "verify_scalar_fischer",
    "verify_theorem1",
]
