"""Runtime configuration: numerical tolerances, measured-divergence search, logging."""

import logging
import os
from typing import Optional

import numpy as np
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigError

SCHEMA_VERSION = "1.0"
ENV_PREFIX = "QDIVLAB_"
LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


# =============================================================================
# Tolerances
# =============================================================================


class ToleranceConfig(BaseModel):
    """Numerical tolerances shared by every module."""

    model_config = ConfigDict(frozen=True)

    hermiticity_tol: float = Field(1e-10, gt=0, description="Max |A - A^dagger| entry")
    trace_tol: float = Field(1e-8, gt=0, description="Max |Tr A - 1|")
    psd_tol: float = Field(1e-10, gt=0, description="Most negative eigenvalue tolerated")
    reconstruction_tol: float = Field(1e-9, gt=0, description="Max |V L V^dagger - A| entry")
    support_threshold: Optional[float] = Field(
        default=None,
        ge=0,
        description="Eigenvalue cutoff for supports; None means safety * dim * eps * max|lambda|",
    )
    support_safety: float = Field(
        100.0,
        ge=1,
        description="Multiplier on dim * eps * max|lambda| in the default cutoff",
    )
    leak_tol: float = Field(
        1e-8, gt=0, description="Mass allowed outside a support before it counts as a violation"
    )
    completeness_tol: float = Field(1e-10, gt=0, description="Max |sum E_x - I| entry")
    dimension_cap: int = Field(4096, ge=1, description="Largest dimension ever materialized")
    slack: float = Field(1e-9, ge=0, description="One-sided slack for inequality verdicts")

    def threshold_for(self, eigenvalues, dim: int) -> float:
        """Support cutoff for a spectrum of the given dimension."""
        if self.support_threshold is not None:
            return self.support_threshold
        scale = float(np.max(np.abs(eigenvalues))) if len(eigenvalues) else 0.0
        return self.support_safety * dim * float(np.finfo(float).eps) * scale


class SearchConfig(BaseModel):
    """Candidate-basis search used for the measured QJS lower bound."""

    model_config = ConfigDict(frozen=True)

    restarts: int = Field(8, ge=0, description="Seeded random orthonormal bases tried")
    seed: int = Field(0, ge=0, description="Root seed for the random bases")
    refine: bool = Field(False, description="Locally refine the best basis with scipy.optimize")
    maxiter: int = Field(200, ge=1, description="Iteration budget per refinement")
    workers: int = Field(1, ge=1, description="Threads used across restarts")


DEFAULT_TOLERANCES = ToleranceConfig()
DEFAULT_SEARCH = SearchConfig()


# =============================================================================
# Environment loading
# =============================================================================


def _env_overrides(model: type[BaseModel]) -> dict[str, str]:
    overrides = {}
    for name in model.model_fields:
        value = os.getenv(f"{ENV_PREFIX}{name.upper()}")
        if value is not None and value != "":
            overrides[name] = value
    return overrides


def load_tolerances() -> ToleranceConfig:
    """
    Build tolerances from defaults plus QDIVLAB_* environment variables.

    A `.env` file in the working directory is honoured.

    Returns:
        ToleranceConfig with overrides applied.
    """
    load_dotenv()
    overrides = _env_overrides(ToleranceConfig)
    try:
        return ToleranceConfig(**overrides)
    except ValidationError as e:
        raise ConfigError(f"invalid tolerance override {sorted(overrides)}: {e}") from e


def load_search_config() -> SearchConfig:
    """Search settings from QDIVLAB_SEARCH_* environment variables."""
    load_dotenv()
    overrides = {}
    for name in SearchConfig.model_fields:
        value = os.getenv(f"{ENV_PREFIX}SEARCH_{name.upper()}")
        if value:
            overrides[name] = value
    try:
        return SearchConfig(**overrides)
    except ValidationError as e:
        raise ConfigError(f"invalid search override {sorted(overrides)}: {e}") from e


def configure_logging(verbosity: int = 0) -> None:
    """
    Configure root logging for CLI use.

    Args:
        verbosity: 0 uses QDIVLAB_LOG_LEVEL (default WARNING), 1 is INFO, 2+ is DEBUG.
    """
    load_dotenv()
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        name = os.getenv(f"{ENV_PREFIX}LOG_LEVEL", "WARNING").upper()
        level = logging.getLevelName(name)
        if not isinstance(level, int):
            raise ConfigError(f"unknown log level {name!r}")
    logging.basicConfig(level=level, format=LOG_FORMAT)
