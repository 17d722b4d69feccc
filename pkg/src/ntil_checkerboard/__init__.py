"""Exact computations for no-three-in-line sets restricted to one colour of
the checkerboard: exhaustive maxima, the four-direction LP relaxation with its
symmetry-reduced duals, and the odd-fat continuum dual certificate over a
cubic number field."""

from .algebra import CubicField, FieldElem, RatPoly, field_sign, make_p_field, sturm_count
from .certificate import CertificateReport, verify_all
from .grid import GridPoint, LineId, ParityClass
from .lp import LpModel, LpSolution, check_certificate, solve
from .relaxation import (
    ReducedDualCase, build_four_direction, build_reduced, curvature_diagnostic, ratio_report, solve_reduced, unfold,
)
from .search import NtilWitness, max_ntil, verify_ntil

__version__ = "0.1.0"

__all__ = [
    "CubicField", "FieldElem", "RatPoly", "field_sign", "make_p_field", "sturm_count",
    "CertificateReport", "verify_all",
    "GridPoint", "LineId", "ParityClass",
    "LpModel", "LpSolution", "check_certificate", "solve",
    "ReducedDualCase", "build_four_direction", "build_reduced", "curvature_diagnostic", "ratio_report",
    "solve_reduced", "unfold",
    "NtilWitness", "max_ntil", "verify_ntil",
]
