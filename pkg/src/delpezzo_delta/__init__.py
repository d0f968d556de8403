"""Exact rational checks of delta-invariant bounds for del Pezzo surfaces."""

from .errors import (
    DegenerateBound,
    DeltaError,
    IncompleteSweep,
    IrrationalThreshold,
    NotNef,
    NotNegativeDefinite,
    ParseError,
    PseudoeffectivityViolated,
    RangeError,
    UnknownCase,
    ValidationError,
)
from .lattice import CurveSystem, DivisorClass, Rational, check_decomposition, is_negative_definite, pair
from .volume import PiecewisePoly, expected_vanishing_order, integrate, tau, volume_function
from .zariski import ZariskiDecomposition, decompose

__version__ = "0.1.0"

__all__ = [
    "CurveSystem", "DegenerateBound", "DeltaError", "DivisorClass", "IncompleteSweep",
    "IrrationalThreshold", "NotNef", "NotNegativeDefinite", "ParseError", "PiecewisePoly",
    "PseudoeffectivityViolated", "RangeError", "Rational", "UnknownCase", "ValidationError",
    "ZariskiDecomposition", "check_decomposition", "decompose", "expected_vanishing_order",
    "integrate", "is_negative_definite", "pair", "tau", "volume_function",
]
