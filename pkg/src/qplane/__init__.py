"""Exact computations with the derivation algebra of the quantum plane at a root of unity."""
from .algebra import ExpVec, LieElement, bracket, parse_element, render_element, verify_jacobi
from .scalars import Cyclotomic, MultiPoly, parse_cyclotomic, render, zeta_pow
from .tables import CTable, closed_form_table

__version__ = "0.1.0"

__all__ = [
    "CTable", "Cyclotomic", "ExpVec", "LieElement", "MultiPoly", "bracket", "closed_form_table",
    "parse_cyclotomic", "parse_element", "render", "render_element", "verify_jacobi", "zeta_pow",
]
