"""Numerical toolkit for weak-type inhomogeneous Strichartz estimates.

Submodules
----------
exponents
    Exact exponent geometry: admissible lines, theorem hypotheses, corollaries.
grid
    Periodic spatial grids, Fourier multipliers and Littlewood-Paley pieces.
norms
    Lebesgue, Lorentz, Sobolev, Besov and mixed space-time norms.
propagators
    Schrodinger and half-wave propagators, Duhamel quadrature, dispersive checks.
summation
    Dyadic summation into weak-type bounds.
counterexamples
    Gaussian and radial wave constructions with their decay rates.
extremizer
    Seeded search over input families for mixed-norm ratios.
"""
from .errors import (
    DomainError,
    NumericError,
    PeriodizationError,
    PreconditionError,
    RangeError,
    StrichartzError,
    TruncationError,
)
from .exponents import (
    ExponentPoint,
    SigmaContext,
    WeakCaseParams,
    beta,
    classify_pair,
    corollary_schrodinger,
    corollary_wave,
    theorem_hypotheses,
)
from .grid import GridField, LPPartition, SpaceTimeField, SpatialGrid, make_test_function
from .norms import NormSpec, besov_norm, lebesgue_norm, lorentz_norm, mixed_norm, sobolev_norm
from .propagators import DuhamelConfig, PropagatorKind, duhamel, dyadic_piece, propagate
from .summation import DyadicBounds, bourgain_parameters, choose_q1_q2, optimal_split, verify_summation

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "NumericError",
    "PeriodizationError",
    "PreconditionError",
    "RangeError",
    "StrichartzError",
    "TruncationError",
    "ExponentPoint",
    "SigmaContext",
    "WeakCaseParams",
    "beta",
    "classify_pair",
    "corollary_schrodinger",
    "corollary_wave",
    "theorem_hypotheses",
    "GridField",
    "LPPartition",
    "SpaceTimeField",
    "SpatialGrid",
    "make_test_function",
    "NormSpec",
    "besov_norm",
    "lebesgue_norm",
    "lorentz_norm",
    "mixed_norm",
    "sobolev_norm",
    "DuhamelConfig",
    "PropagatorKind",
    "duhamel",
    "dyadic_piece",
    "propagate",
    "DyadicBounds",
    "bourgain_parameters",
    "choose_q1_q2",
    "optimal_split",
    "verify_summation",
]
