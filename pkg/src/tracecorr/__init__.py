"""Trace-norm geometric correlations of two-qubit X states and their decoherence."""

__version__ = "0.1.0"

from .correlations import (  # noqa: E402
    classical_correlation,
    correlations,
    oracle_classical,
    oracle_quantum,
    oracle_total,
    quantum_discord_1norm,
    total_correlation,
)
from .xstates import CorrelationParams, XDensityMatrix, effective_bell  # noqa: E402

__all__ = [
    "CorrelationParams",
    "XDensityMatrix",
    "classical_correlation",
    "correlations",
    "effective_bell",
    "oracle_classical",
    "oracle_quantum",
    "oracle_total",
    "quantum_discord_1norm",
    "total_correlation",
]
