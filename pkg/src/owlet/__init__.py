"""Online regression with periodized wavelet expansions.

Learns wavelet coefficients of an unknown regression function one point at a
time with per-coefficient parameter-free learners, and optionally aggregates
a tree of local models with sleeping-expert weights to adapt to spatially
varying smoothness.  Includes offline analysis tooling (smoothness norms,
best-term approximation, coefficient-decay diagnostics) and an experiment
harness with a CLI.
"""

from .errors import ConfigurationError, DomainError
from .wavelets import (
    DETAIL,
    SCALING,
    BasisIndex,
    WaveletBasis,
    WaveletFamily,
    build_basis,
    detail_index,
    scaling_index,
)

__all__ = [
    "BasisIndex",
    "ConfigurationError",
    "DETAIL",
    "DomainError",
    "SCALING",
    "WaveletBasis",
    "WaveletFamily",
    "build_basis",
    "detail_index",
    "scaling_index",
]

__version__ = "0.1.0"
