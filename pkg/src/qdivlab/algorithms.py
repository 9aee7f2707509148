"""SWAP-test based decision procedures and their acceptance probabilities."""

import logging
import math

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .divergences import hs_distance_sq, trace_distance
from .errors import DimensionMismatch, DimensionOverflow, OutOfRange
from .schemas import (
    AmplificationState,
    HsTdBounds,
    NqpDecision,
    PpDecision,
    Purification,
    SwapTestResult,
)
from .states import DensityMatrix, StatePair, numerical_rank, purity, spectral_decomposition

logger = logging.getLogger(__name__)

# absolute threshold separating p_acc > 0 from exact rejection
ACCEPT_THRESHOLD = 1e-12
PROBABILITY_CLIP = 1e-12
MIXTURE_TOL = 1e-12

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2)


def qubit_count(dim: int) -> int:
    """Smallest n with 2^n >= dim (at least 1)."""
    return max(1, math.ceil(math.log2(dim))) if dim > 1 else 1


def _overlap(pair: StatePair) -> float:
    return float(np.real(np.vdot(pair.rho0.entries, pair.rho1.entries)))


# =============================================================================
# SWAP test
# =============================================================================


def swap_test_prob(pair: StatePair) -> SwapTestResult:
    """Probability of control outcome 0: (1 + Tr(rho0 rho1)) / 2."""
    overlap = _overlap(pair)
    return SwapTestResult(p0_outcome=0.5 * (1.0 + overlap), overlap=overlap)


def purify(
    rho: DensityMatrix, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> Purification:
    """Canonical purification sum_i sqrt(lambda_i) |v_i> (x) |i> over the support."""
    decomp = spectral_decomposition(rho.entries, tolerances)
    weights = np.sqrt(np.clip(decomp.eigenvalues[decomp.support_mask], 0.0, None))
    # column i of the support times sqrt(lambda_i): system index major, environment minor
    vector = (decomp.support * weights).reshape(-1)
    vector = vector / np.linalg.norm(vector)
    return Purification(vector=vector, system_dim=rho.dim, env_dim=int(weights.size))


def _swap_test_state(
    pur0: Purification, pur1: Purification, tolerances: ToleranceConfig
) -> np.ndarray:
    """State after H, controlled-SWAP of the systems, H; axes (control, s0, e0, s1, e1)."""
    if pur0.system_dim != pur1.system_dim:
        raise DimensionMismatch(
            f"system dimensions differ: {pur0.system_dim} vs {pur1.system_dim}"
        )
    d = pur0.system_dim
    total = 2 * d * d * pur0.env_dim * pur1.env_dim
    if total > tolerances.dimension_cap:
        raise DimensionOverflow(total, tolerances.dimension_cap, "swap test")

    joint = np.einsum(
        "ab,ce->abce",
        pur0.vector.reshape(d, pur0.env_dim),
        pur1.vector.reshape(d, pur1.env_dim),
    )
    state = np.zeros((2,) + joint.shape, dtype=complex)
    state[0] = joint
    state = np.tensordot(HADAMARD, state, axes=([1], [0]))
    state[1] = state[1].transpose(2, 1, 0, 3)
    return np.tensordot(HADAMARD, state, axes=([1], [0]))


def swap_test_statevector(
    pur0: Purification,
    pur1: Purification,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> float:
    """
    Simulate the SWAP test on explicit purifications.

    Returns:
        Probability that the control qubit reads 0.

    Raises:
        DimensionMismatch: system dimensions differ.
        DimensionOverflow: the joint vector exceeds the cap.
    """
    state = _swap_test_state(pur0, pur1, tolerances)
    return float(np.sum(np.abs(state[0]) ** 2))


# =============================================================================
# Exact amplitude amplification
# =============================================================================


def grover_single_iteration(p: float) -> AmplificationState:
    """
    One Grover iteration on an algorithm that succeeds with probability p/2.

    sin^2(theta) = p/2, and after the iteration the good amplitude is sin(3 theta), so
    Pr[both flags zero] = sin^2(3 theta) = 2p^3 - 6p^2 + 9p/2.

    Raises:
        OutOfRange: p outside [0, 1] beyond a 1e-12 clip.
    """
    if not -PROBABILITY_CLIP <= p <= 1.0 + PROBABILITY_CLIP:
        raise OutOfRange(f"p must lie in [0, 1], got {p}")
    p = min(max(p, 0.0), 1.0)
    theta = math.asin(math.sqrt(p / 2))
    trig = math.sin(3 * theta) ** 2
    poly = 2 * p**3 - 6 * p**2 + 4.5 * p
    return AmplificationState(
        p=p,
        theta=theta,
        success_prob=poly,
        p_acc=1.0 - poly,
        trig_residual=abs(trig - poly),
    )


def grover_statevector(
    pair: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> float:
    """
    p_acc from explicit reflections on the purified SWAP-test state.

    With |psi> = (H (x) U)|0>, the Grover operator acts as
    G|psi> = -(I - 2|psi><psi|)(I - 2 Pi_0)|psi>, Pi_0 projecting onto flag = control = 0.
    The procedure rejects on flag = control = 0.
    """
    pur0, pur1 = purify(pair.rho0, tolerances), purify(pair.rho1, tolerances)
    swap_state = _swap_test_state(pur0, pur1, tolerances)
    psi = np.stack([swap_state, swap_state]) / math.sqrt(2)
    psi = psi.reshape(2, 2, -1)

    reflected = psi.copy()
    reflected[0, 0] *= -1.0
    after = -(reflected - 2.0 * np.vdot(psi, reflected) * psi)
    return float(1.0 - np.sum(np.abs(after[0, 0]) ** 2))


def nqp_decide(pair: StatePair) -> NqpDecision:
    """
    One-sided decision: rejects with certainty on orthogonal supports (td = 1).

    p = (1 + Tr(rho0 rho1)) / 2 feeds one Grover iteration; p_acc = 1 - sin^2(3 theta).
    Identical states give p_acc >= (p - 1/2)^2 >= 2^(-2n-2).
    """
    n = pair.rho0.qubits or qubit_count(pair.dim)
    p = swap_test_prob(pair).p0_outcome
    amplified = grover_single_iteration(p)
    accept = amplified.p_acc > ACCEPT_THRESHOLD
    logger.info(f"[nqp] n={n} p={p:.12g} p_acc={amplified.p_acc:.3e}")
    return NqpDecision(
        n=n,
        p=p,
        p_acc=amplified.p_acc,
        lower_bound_yes=(p - 0.5) ** 2,
        completeness_floor=2.0 ** (-2 * n - 2),
        verdict="accept" if accept else "reject",
        label="close" if accept else "far",
    )


# =============================================================================
# PP hybrid algorithm and HS bounds
# =============================================================================


def pp_floors(n: int) -> tuple[float, float, float]:
    """(yes_floor, no_ceiling, gap_floor) for n-qubit states."""
    yes_floor = 0.5 - 2.0 ** (-n - 4)
    no_ceiling = 0.5 - 2.0 ** (-n - 2) * (1.0 - 2.0 ** (-n / 2 - 1)) ** 2
    return yes_floor, no_ceiling, 2.0 ** (-2 * n - 4)


def pp_hybrid_accept(pair: StatePair) -> PpDecision:
    """
    Acceptance 1/2 - HS^2/8 of the SWAP-test / purity-test mixture.

    Cross-checked against 1/2 p0(rho0, rho1) + 1/4 sum_i (1 - Tr rho_i^2)/2.
    """
    n = pair.rho0.qubits or qubit_count(pair.dim)
    hs_sq = hs_distance_sq(pair)
    acceptance = 0.5 - hs_sq / 8
    purities = [purity(r) for r in (pair.rho0, pair.rho1)]
    mixture = 0.5 * swap_test_prob(pair).p0_outcome + 0.25 * sum((1 - t) / 2 for t in purities)
    residual = abs(acceptance - mixture)
    if residual > MIXTURE_TOL:
        logger.warning(f"[pp] acceptance forms disagree by {residual:.3e}")

    td = trace_distance(pair)
    edge = 2.0 ** (-n / 2 - 1)
    if td <= edge:
        regime = "close"
    elif td >= 1.0 - edge:
        regime = "far"
    else:
        regime = "outside_promise"
    yes_floor, no_ceiling, gap_floor = pp_floors(n)
    return PpDecision(
        n=n,
        hs_sq=hs_sq,
        td=td,
        acceptance=acceptance,
        mixture_acceptance=mixture,
        residual=residual,
        yes_floor=yes_floor,
        no_ceiling=no_ceiling,
        gap_floor=gap_floor,
        regime=regime,
    )


def hs_td_bounds(
    pair: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> HsTdBounds:
    """HS/sqrt(2) <= td <= sqrt(r0 r1 / (r0 + r1)) HS <= sqrt(dim/2) HS."""
    hs = math.sqrt(max(hs_distance_sq(pair), 0.0))
    td = trace_distance(pair)
    r0, r1 = numerical_rank(pair.rho0, tolerances), numerical_rank(pair.rho1, tolerances)
    lower = hs / math.sqrt(2)
    rank_aware = math.sqrt(r0 * r1 / (r0 + r1)) * hs
    upper = math.sqrt(pair.dim / 2) * hs
    slack = tolerances.slack
    holds = lower <= td + slack and td <= rank_aware + slack and rank_aware <= upper + slack
    return HsTdBounds(
        td=td,
        hs=hs,
        lower=lower,
        rank_aware_upper=rank_aware,
        upper=upper,
        ranks=(r0, r1),
        holds=holds,
    )
