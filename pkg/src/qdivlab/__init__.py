"""Quantum state divergences, polarization, reductions and their Monte-Carlo checks."""

from .config import DEFAULT_SEARCH, DEFAULT_TOLERANCES, SearchConfig, ToleranceConfig
from .divergences import (
    compute_report,
    fidelity_bures,
    qjs,
    qtd,
    qtd_alpha,
    qtd_meas,
    trace_distance,
)
from .errors import DimensionOverflow, InputError, NumericalError, QdivlabError
from .states import DensityMatrix, StatePair, from_bloch, from_distribution, make_density, make_pair

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_SEARCH",
    "DEFAULT_TOLERANCES",
    "DensityMatrix",
    "DimensionOverflow",
    "InputError",
    "NumericalError",
    "QdivlabError",
    "SearchConfig",
    "StatePair",
    "ToleranceConfig",
    "compute_report",
    "fidelity_bures",
    "from_bloch",
    "from_distribution",
    "make_density",
    "make_pair",
    "qjs",
    "qtd",
    "qtd_alpha",
    "qtd_meas",
    "trace_distance",
]
