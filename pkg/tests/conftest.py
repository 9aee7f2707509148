"""Shared fixtures and hypothesis strategies."""

from typing import Callable

import numpy as np
import pytest
from hypothesis import strategies as st

from qdivlab.config import ToleranceConfig
from qdivlab.harness import equality_pair, non_polarizing_pairs
from qdivlab.states import (
    StatePair,
    from_bloch,
    from_distribution,
    make_density,
    make_pair,
    random_mixed,
)

PairFactory = Callable[[int, int], StatePair]


@pytest.fixture
def tolerances() -> ToleranceConfig:
    return ToleranceConfig()


@pytest.fixture
def equality() -> StatePair:
    return equality_pair()


@pytest.fixture
def non_polarizing() -> tuple[StatePair, StatePair]:
    return non_polarizing_pairs()


@pytest.fixture
def orthogonal_qubits() -> StatePair:
    return make_pair(from_distribution([1.0, 0.0]), from_distribution([0.0, 1.0]))


@pytest.fixture
def orthogonal_plus_minus() -> StatePair:
    plus = make_density(np.full((2, 2), 0.5))
    minus = make_density(np.array([[0.5, -0.5], [-0.5, 0.5]]))
    return make_pair(plus, minus)


@pytest.fixture
def diagonal_pair() -> StatePair:
    """(1, 0) vs (1/2, 1/2): classical TD = 1/3."""
    return make_pair(from_distribution([1.0, 0.0]), from_distribution([0.5, 0.5]))


@pytest.fixture
def random_pair() -> PairFactory:
    """Full-rank random pair of the given dimension from one seed."""

    def build(dim: int, seed: int) -> StatePair:
        rng = np.random.default_rng(seed)
        return make_pair(random_mixed(dim, dim, rng), random_mixed(dim, dim, rng))

    return build


@pytest.fixture
def random_pair_ranked() -> Callable[[int, int, int], StatePair]:
    def build(dim: int, rank: int, seed: int) -> StatePair:
        rng = np.random.default_rng(seed)
        return make_pair(random_mixed(dim, rank, rng), random_mixed(dim, rank, rng))

    return build


# =============================================================================
# Strategies
# =============================================================================


@st.composite
def bloch_vectors(draw, pure: bool = False) -> np.ndarray:
    """Bloch vectors in the unit ball, or on the sphere when `pure`."""
    direction = np.array(
        draw(
            st.lists(
                st.floats(-1.0, 1.0, allow_nan=False), min_size=3, max_size=3
            ).filter(lambda v: np.linalg.norm(v) > 1e-3)
        )
    )
    direction = direction / np.linalg.norm(direction)
    radius = 1.0 if pure else draw(st.floats(0.0, 1.0))
    return radius * direction


@st.composite
def bloch_pairs(draw) -> StatePair:
    return make_pair(from_bloch(draw(bloch_vectors())), from_bloch(draw(bloch_vectors())))


@st.composite
def distributions(draw, size: int) -> np.ndarray:
    """Probability vectors whose nonzero entries stay well above the support cutoff."""
    entry = st.one_of(st.just(0.0), st.floats(1e-3, 1.0))
    weights = np.array(draw(st.lists(entry, min_size=size, max_size=size)))
    if weights.sum() < 1e-6:
        weights[0] = 1.0
    return weights / weights.sum()


seeds = st.integers(min_value=0, max_value=2**32 - 1)
