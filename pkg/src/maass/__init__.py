"""Exact computations with Siegel-Eisenstein series, Jacobi forms and Satake polynomials."""
from .exactalg import LaurentPoly, PolyMatrix, format_rational, parse_rational, weyl_action
from .qexp import JacobiExpansion, SiegelExpansion2
from .relations import VerificationReport
from .satake import SatakeVector

__all__ = [
    "JacobiExpansion",
    "LaurentPoly",
    "PolyMatrix",
    "SatakeVector",
    "SiegelExpansion2",
    "VerificationReport",
    "format_rational",
    "parse_rational",
    "weyl_action",
]

__version__ = "0.1.0"
