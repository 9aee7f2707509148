import numpy as np
import pytest
from hypothesis import given, settings

from conftest import bloch_pairs
from qdivlab.algorithms import (
    grover_single_iteration,
    grover_statevector,
    hs_td_bounds,
    nqp_decide,
    pp_floors,
    pp_hybrid_accept,
    purify,
    swap_test_prob,
    swap_test_statevector,
)
from qdivlab.config import ToleranceConfig
from qdivlab.divergences import trace_distance
from qdivlab.errors import DimensionMismatch, DimensionOverflow, OutOfRange
from qdivlab.states import from_distribution, make_density, make_pair, random_mixed

# =============================================================================
# SWAP test and purification
# =============================================================================


def test_swap_test_examples(orthogonal_qubits):
    assert swap_test_prob(orthogonal_qubits).p0_outcome == pytest.approx(0.5)
    rho = random_mixed(2, 1, 0)
    assert swap_test_prob(make_pair(rho, rho)).p0_outcome == pytest.approx(1.0)
    mixed = from_distribution([0.5, 0.5])
    assert swap_test_prob(make_pair(mixed, mixed)).p0_outcome == pytest.approx(0.75)


def test_purify_environment_size():
    assert purify(random_mixed(3, 1, 2)).env_dim == 1
    assert purify(make_density(np.eye(2) / 2)).env_dim == 2


@pytest.mark.parametrize("dim,rank", [(2, 1), (2, 2), (3, 2), (4, 4)])
def test_purify_reduces_back(dim, rank):
    rho = random_mixed(dim, rank, 7)
    pur = purify(rho)
    assert np.linalg.norm(pur.vector) == pytest.approx(1.0)
    np.testing.assert_allclose(pur.reduced_state().entries, rho.entries, atol=1e-10)


@pytest.mark.parametrize("dim", [2, 3])
def test_swap_statevector_matches_overlap(random_pair_ranked, dim):
    for seed in range(5):
        pair = random_pair_ranked(dim, 1 + seed % dim, seed)
        simulated = swap_test_statevector(purify(pair.rho0), purify(pair.rho1))
        assert simulated == pytest.approx(swap_test_prob(pair).p0_outcome, abs=1e-10)


def test_swap_statevector_errors():
    small, large = purify(random_mixed(2, 2, 0)), purify(random_mixed(3, 3, 0))
    with pytest.raises(DimensionMismatch):
        swap_test_statevector(small, large)
    with pytest.raises(DimensionOverflow):
        swap_test_statevector(large, large, ToleranceConfig(dimension_cap=64))


# =============================================================================
# Amplitude amplification and NQP
# =============================================================================


@pytest.mark.parametrize("p,expected", [(0.5, 0.0), (0.0, 1.0), (1.0, 0.5)])
def test_grover_examples(p, expected):
    assert grover_single_iteration(p).p_acc == pytest.approx(expected, abs=1e-12)


def test_grover_polynomial_matches_trigonometry():
    for p in np.linspace(0.0, 1.0, 10_001):
        assert grover_single_iteration(float(p)).trig_residual <= 1e-12


def test_grover_range():
    with pytest.raises(OutOfRange):
        grover_single_iteration(1.1)
    assert grover_single_iteration(-1e-13).p == 0.0


@pytest.mark.parametrize("dim", [2, 3])
def test_grover_statevector_matches_polynomial(random_pair_ranked, dim):
    for seed in range(5):
        pair = random_pair_ranked(dim, 1 + seed % dim, seed)
        assert grover_statevector(pair) == pytest.approx(nqp_decide(pair).p_acc, abs=1e-10)


def test_nqp_identical_maximally_mixed():
    mixed = from_distribution([0.5, 0.5])
    decision = nqp_decide(make_pair(mixed, mixed))
    assert decision.verdict == "accept" and decision.label == "close"
    assert decision.p_acc == pytest.approx(0.15625)
    assert decision.p_acc >= decision.lower_bound_yes >= decision.completeness_floor
    assert decision.completeness_floor == 2.0**-4


def test_nqp_rejects_orthogonal(orthogonal_qubits, orthogonal_plus_minus):
    for pair in (orthogonal_qubits, orthogonal_plus_minus):
        decision = nqp_decide(pair)
        assert decision.verdict == "reject" and decision.label == "far"
        assert decision.p_acc == pytest.approx(0.0, abs=1e-12)


def test_nqp_identical_pure():
    rho = random_mixed(2, 1, 5)
    assert nqp_decide(make_pair(rho, rho)).p_acc == pytest.approx(0.5)


@settings(max_examples=50, deadline=None)
@given(bloch_pairs())
def test_nqp_accepts_unless_orthogonal(pair):
    decision = nqp_decide(pair)
    if trace_distance(pair) < 1.0 - 1e-3:
        assert decision.verdict == "accept"
    assert decision.p_acc >= decision.lower_bound_yes - 1e-12


# =============================================================================
# PP hybrid and HS bounds
# =============================================================================


def test_pp_identical_and_orthogonal(orthogonal_qubits):
    rho = random_mixed(2, 2, 3)
    same = pp_hybrid_accept(make_pair(rho, rho))
    assert same.acceptance == pytest.approx(0.5)
    assert same.regime == "close"
    far = pp_hybrid_accept(orthogonal_qubits)
    assert far.acceptance == pytest.approx(0.25)
    assert far.regime == "far"
    assert far.acceptance <= far.no_ceiling


def test_pp_mixture_agrees(random_pair_ranked):
    for seed in range(10):
        decision = pp_hybrid_accept(random_pair_ranked(4, 1 + seed % 4, seed))
        assert decision.residual <= 1e-12
        assert decision.n == 2


def test_pp_floors_n1():
    yes, no, gap = pp_floors(1)
    assert yes == pytest.approx(0.5 - 2.0**-5)
    assert no == pytest.approx(0.5 - 2.0**-3 * (1 - 2.0**-1.5) ** 2)
    assert gap == 2.0**-6


@pytest.mark.parametrize("n", range(1, 21))
def test_pp_gap_floor(n):
    yes, no, gap = pp_floors(n)
    assert yes - no >= gap


def test_pp_promise_sides():
    base = random_mixed(4, 4, 8)
    other = random_mixed(4, 4, 9)
    close = make_density(0.99 * base.entries + 0.01 * other.entries)
    decision = pp_hybrid_accept(make_pair(base, close))
    assert decision.regime == "close"
    assert decision.acceptance >= decision.yes_floor

    half_a = from_distribution([0.5, 0.5, 0.0, 0.0])
    half_b = from_distribution([0.0, 0.0, 0.5, 0.5])
    decision = pp_hybrid_accept(make_pair(half_a, half_b))
    assert decision.regime == "far"
    assert decision.acceptance == pytest.approx(0.375)
    assert decision.acceptance <= decision.no_ceiling


def test_hs_td_bounds_orthogonal(orthogonal_qubits):
    bounds = hs_td_bounds(orthogonal_qubits)
    assert bounds.hs == pytest.approx(np.sqrt(2))
    assert bounds.lower == pytest.approx(1.0)
    assert bounds.rank_aware_upper == pytest.approx(1.0)
    assert bounds.ranks == (1, 1)
    assert bounds.holds


@pytest.mark.parametrize("dim", [2, 3, 4, 8])
def test_hs_td_bounds_random(random_pair_ranked, dim):
    for seed in range(10):
        assert hs_td_bounds(random_pair_ranked(dim, 1 + seed % dim, seed)).holds


@pytest.mark.slow
def test_swap_statevector_acceptance():
    rng = np.random.default_rng(99)
    for _ in range(200):
        dim = int(rng.integers(2, 4))
        rho0 = random_mixed(dim, int(rng.integers(1, dim + 1)), rng)
        rho1 = random_mixed(dim, int(rng.integers(1, dim + 1)), rng)
        simulated = swap_test_statevector(purify(rho0), purify(rho1))
        expected = swap_test_prob(make_pair(rho0, rho1)).p0_outcome
        assert simulated == pytest.approx(expected, abs=1e-10)
