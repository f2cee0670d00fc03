"""Exact solution of the residue-table system and its classification."""
from .classify import ClassificationReport, classify, label_of, support_components, swap_table, translate_table
from .gauge import GaugeTransform, find_gauge, gauge_apply, gauge_canonicalize, gauge_equivalent
from .identities import (Case3Report, Case3Sample, b_dichotomy_solutions, case3_symbolic, case3_values,
                         sample_case3, verify_case3_consequences, verify_det_identity)
from .search import SolutionOrbit, SolveResult, solve
from .system import Equation, EquationSystem, build_system

__all__ = [
    "Case3Report", "Case3Sample", "ClassificationReport", "Equation", "EquationSystem",
    "GaugeTransform", "SolutionOrbit", "SolveResult", "b_dichotomy_solutions", "build_system",
    "case3_symbolic", "case3_values", "classify", "find_gauge", "gauge_apply", "gauge_canonicalize",
    "gauge_equivalent", "label_of", "sample_case3", "solve", "support_components", "swap_table",
    "translate_table", "verify_case3_consequences", "verify_det_identity",
]
