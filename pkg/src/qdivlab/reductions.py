"""Reductions between the promise problems, at the density-matrix level."""

import logging
import math
from typing import Literal, Optional

import numpy as np
from scipy.optimize import bisect

from .algorithms import qubit_count
from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .divergences import (
    LN2,
    binary_entropy,
    midpoint,
    qjs,
    qtd,
    qtd_meas,
    trace_distance,
    von_neumann_entropy,
)
from .errors import BadPromise, BisectionFailure, DimensionOverflow, OutOfRange
from .schemas import (
    ChainStep,
    GapAmplification,
    HardnessThresholds,
    ImplicationVerdict,
    QedpReduction,
    QsdpImplications,
    ReductionInstance,
    Side,
)
from .states import StatePair, cq_state, from_distribution, make_pair, tensor, tensor_power

logger = logging.getLogger(__name__)

InstanceKind = Literal["qsdp", "qjsp", "meas_qtdp", "qtdp", "qedp"]
HardnessTarget = Literal["qjsp", "meas_qtdp", "qedp"]

BISECTION_XTOL = 1e-12
IDENTITY_TOL = 1e-9
CHAIN_TOL = 1e-12


# =============================================================================
# Instances
# =============================================================================


def make_instance(
    kind: InstanceKind,
    pair: StatePair,
    alpha: Optional[float] = None,
    beta: Optional[float] = None,
    g: Optional[float] = None,
) -> ReductionInstance:
    """
    Bundle a pair with its promise parameters.

    Raises:
        BadPromise: distance kinds need 0 <= beta < alpha <= 1; qedp needs g > 0.
    """
    if kind == "qedp":
        if g is None or not g > 0:
            raise BadPromise(f"qedp needs a gap g > 0, got {g}")
    elif alpha is None or beta is None or not (0 <= beta < alpha <= 1):
        raise BadPromise(f"{kind} needs 0 <= beta < alpha <= 1, got alpha={alpha}, beta={beta}")
    return ReductionInstance(
        kind=kind, pair=pair, alpha=alpha, beta=beta, g=g, n=qubit_count(pair.dim)
    )


def instance_value(
    instance: ReductionInstance, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> float:
    """The quantity the instance's promise is about."""
    pair = instance.pair
    if instance.kind == "qsdp":
        return trace_distance(pair)
    if instance.kind == "qjsp":
        return qjs(pair, tolerances).bits
    if instance.kind == "meas_qtdp":
        return qtd_meas(pair, tolerances)
    if instance.kind == "qtdp":
        return qtd(pair, tolerances)
    return (
        von_neumann_entropy(pair.rho0, tolerances).nats
        - von_neumann_entropy(pair.rho1, tolerances).nats
    )


def promise_side(
    instance: ReductionInstance, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> Side:
    """yes / no / neither for the instance's pair; qedp compares S(rho0) - S(rho1) with +-g."""
    value = instance_value(instance, tolerances)
    slack = tolerances.slack
    if instance.kind == "qedp":
        if value >= instance.g - slack:
            return "yes"
        if value <= -instance.g + slack:
            return "no"
        return "neither"
    if value >= instance.alpha - slack:
        return "yes"
    if value <= instance.beta + slack:
        return "no"
    return "neither"


# =============================================================================
# QJSP -> QEDP
# =============================================================================


def solve_binary_entropy(target: float) -> float:
    """
    Lower-branch solution p in [0, 1/2] of H2(p) = target (bits).

    Raises:
        BisectionFailure: target outside [0, 1] or the bracket does not converge.
    """
    if not 0.0 <= target <= 1.0:
        raise BisectionFailure(f"H2(p) = {target} has no solution")
    if target == 0.0:
        return 0.0
    if target == 1.0:
        return 0.5
    try:
        return float(
            bisect(lambda p: binary_entropy(p) - target, 0.0, 0.5, xtol=BISECTION_XTOL)
        )
    except (ValueError, RuntimeError) as e:
        raise BisectionFailure(f"bisection for H2(p) = {target} failed: {e}") from e


def qjsp_to_qedp(
    pair: StatePair,
    alpha: float,
    beta: float,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> QedpReduction:
    """
    Map a QJSP[alpha, beta] instance to a QEDP instance.

    rho'_1 = 1/2 |0><0| (x) rho0 + 1/2 |1><1| (x) rho1 and
    rho'_0 = (p |0><0| + (1-p) |1><1|) (x) (rho0 + rho1)/2, with H2(p) = 1 - (alpha+beta)/2.
    The joint entropy theorem gives S2(rho'_0) - S2(rho'_1) = QJS2(rho0, rho1) - (alpha+beta)/2.

    Args:
        pair: QJSP instance states.
        alpha: Yes threshold on QJS2.
        beta: No threshold on QJS2.
        tolerances: Numerical tolerances.

    Returns:
        QedpReduction with the output pair, g = (ln2/2)(alpha - beta) and the identity residual.

    Raises:
        BadPromise: unless 0 <= beta < alpha <= 1.
    """
    if not (0 <= beta < alpha <= 1):
        raise BadPromise(f"need 0 <= beta < alpha <= 1, got alpha={alpha}, beta={beta}")
    shift = (alpha + beta) / 2
    p = solve_binary_entropy(1.0 - shift)

    rho1_out = cq_state([0.5, 0.5], [pair.rho0, pair.rho1], tolerances)
    rho0_out = tensor(from_distribution([p, 1.0 - p], tolerances), midpoint(pair), tolerances)
    pair_out = make_pair(rho0_out, rho1_out)

    qjs2 = qjs(pair, tolerances).bits
    difference = (
        von_neumann_entropy(rho0_out, tolerances).bits
        - von_neumann_entropy(rho1_out, tolerances).bits
    )
    residual = abs(difference - (qjs2 - shift))
    if residual > IDENTITY_TOL:
        logger.warning(f"[reduce] QJS-to-QED identity residual {residual:.3e} bits")
    g = (LN2 / 2) * (alpha - beta)
    logger.info(f"[reduce] qjsp -> qedp: p={p:.12g}, g={g:.6g} nats, residual={residual:.2e}")
    return QedpReduction(
        instance=make_instance("qedp", pair_out, g=g),
        p=p,
        g=g,
        qjs2_bits=qjs2,
        entropy_difference_bits=difference,
        identity_residual=residual,
    )


def qedp_gap_amplify(
    pair: StatePair,
    g: float,
    target: float,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> GapAmplification:
    """
    Replicate p = ceil(target / g) times; entropy is additive so the gap scales by p.

    The analytic gap never builds rho^(x)p. When d^p fits under the cap the tensor powers are
    built as well and their entropy difference is reported beside it.
    """
    if not g > 0:
        raise BadPromise(f"gap amplification needs g > 0, got {g}")
    copies = max(1, math.ceil(target / g * (1.0 - 1e-12)))
    gap = von_neumann_entropy(pair.rho0, tolerances).nats - von_neumann_entropy(
        pair.rho1, tolerances
    ).nats
    analytic = copies * gap

    materialized: Optional[float] = None
    residual: Optional[float] = None
    try:
        powered0 = tensor_power(pair.rho0, copies, tolerances)
        powered1 = tensor_power(pair.rho1, copies, tolerances)
    except DimensionOverflow:
        logger.debug(f"[reduce] gap amplification with p={copies} left analytic")
    else:
        materialized = (
            von_neumann_entropy(powered0, tolerances).nats
            - von_neumann_entropy(powered1, tolerances).nats
        )
        residual = abs(materialized - analytic)
    return GapAmplification(
        p_replications=copies,
        analytic_gap=analytic,
        materialized_gap=materialized,
        residual=residual,
    )


# =============================================================================
# Hardness parameter maps
# =============================================================================


def _step(description: str, lhs: float, rhs: float) -> ChainStep:
    return ChainStep(
        description=description,
        lhs=lhs,
        rhs=rhs,
        holds=lhs <= rhs + CHAIN_TOL * max(1.0, abs(rhs)),
    )


def _distance_chain(
    n: int, epsilon: float, target: HardnessTarget
) -> tuple[float, float, list[ChainStep], list[ChainStep]]:
    """Thresholds, unconditional steps and n(epsilon) steps for QSDP[1-s, s] -> target."""
    s = 2.0 ** -(n ** (0.5 - epsilon / 2))
    t = 2.0 ** -(n ** (0.5 - epsilon))
    if target == "meas_qtdp":
        chain = [
            _step("1 - 2s <= (1 - s)^2  [yes: qtd_meas >= td^2]", 1.0 - 2.0 * s, (1.0 - s) ** 2),
            _step("s <= 2^-n^(1/2-eps)  [no: qtd_meas <= td <= s <= beta]", s, t),
        ]
        large_n = [_step("1 - 2^-n^(1/2-eps) <= 1 - 2s", 1.0 - t, 1.0 - 2.0 * s)]
    else:
        sqrt_bound = 1.0 - 2.0 * 2.0 ** (-(n ** (0.5 - epsilon / 2) + 1) / 2)
        chain = [
            _step(
                "1 - 2*2^(-(n^(1/2-eps/2)+1)/2) <= 1 - H2(s/2)  [H2(x) <= 2 sqrt(x)]",
                sqrt_bound,
                1.0 - binary_entropy(s / 2),
            ),
            _step("s <= 2^-n^(1/2-eps)  [no: qjs2 <= td <= s <= beta]", s, t),
        ]
        large_n = [
            _step("1 - 2^-n^(1/2-eps) <= 1 - 2*2^(-(n^(1/2-eps/2)+1)/2)", 1.0 - t, sqrt_bound)
        ]
    return 1.0 - t, t, chain, large_n


def hardness_param_map(n: int, epsilon: float, target: HardnessTarget) -> HardnessThresholds:
    """
    Thresholds under which the target problem inherits QSZK-hardness from QSDP.

    qjsp and meas_qtdp: alpha <= 1 - 2^-n^(1/2-eps), beta >= 2^-n^(1/2-eps).
    qedp: g <= (ln2/2)(1 - 2^(-(n-3)^(1/2-eps)+1)), going through qjsp at n - 3 qubits.
    Each proof step is evaluated at s = 2^-n^(1/2-eps/2); steps that only hold for large
    enough n are listed apart.

    Raises:
        OutOfRange: epsilon outside (0, 1/2), n < 1, or n < 4 for qedp.
    """
    if not 0 < epsilon < 0.5:
        raise OutOfRange(f"epsilon must lie in (0, 1/2), got {epsilon}")
    if n < 1:
        raise OutOfRange(f"n must be >= 1, got {n}")
    if target not in ("qjsp", "meas_qtdp", "qedp"):
        raise OutOfRange(f"unknown hardness target {target!r}")

    if target != "qedp":
        alpha, beta, chain, large_n = _distance_chain(n, epsilon, target)
        return HardnessThresholds(
            n=n,
            epsilon=epsilon,
            target=target,
            alpha_threshold=alpha,
            beta_threshold=beta,
            derivation_chain=chain,
            large_n_conditions=large_n,
        )

    if n < 4:
        raise OutOfRange(f"qedp thresholds need n >= 4, got {n}")
    source_n = n - 3
    alpha, beta, chain, large_n = _distance_chain(source_n, epsilon, "qjsp")
    g = (LN2 / 2) * (alpha - beta)
    closed_form = (LN2 / 2) * (1.0 - 2.0 ** (-(source_n ** (0.5 - epsilon)) + 1))
    chain.append(
        _step("(ln2/2)(alpha - beta) <= (ln2/2)(1 - 2^(-(n-3)^(1/2-eps)+1))", g, closed_form)
    )
    vacuous = g <= 0.0
    if vacuous:
        logger.info(f"[reduce] qedp threshold at n={n}, eps={epsilon} is vacuous (g={g:.3g})")
    return HardnessThresholds(
        n=n,
        epsilon=epsilon,
        target="qedp",
        alpha_threshold=alpha,
        beta_threshold=beta,
        g_threshold=g,
        vacuous=vacuous,
        derivation_chain=chain,
        large_n_conditions=large_n,
    )


# =============================================================================
# QSDP -> QJSP implications
# =============================================================================


def _implication(triggered: bool, satisfied: bool) -> ImplicationVerdict:
    if not triggered:
        return "not_triggered"
    return "satisfied" if satisfied else "violated"


def qsdp_to_qjsp_verdict(
    pair: StatePair,
    alpha: float,
    beta: float,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> QsdpImplications:
    """
    Check the two implications behind QSDP[alpha^2, beta] <= QJSP on one pair.

    forward: QJS2 >= alpha^2 => td >= alpha^2.
    backward: QJS2 <= 2 ln2 beta^2 => td <= 2 ln2 beta (and the sqrt(2 ln2) beta variant).
    """
    qjs2 = qjs(pair, tolerances).bits
    td = trace_distance(pair)
    slack = tolerances.slack
    forward = _implication(qjs2 >= alpha**2, td >= alpha**2 - slack)
    backward_trigger = qjs2 <= 2 * LN2 * beta**2
    return QsdpImplications(
        qjs2_bits=qjs2,
        td=td,
        forward=forward,
        backward=_implication(backward_trigger, td <= 2 * LN2 * beta + slack),
        backward_stated=_implication(
            backward_trigger, td <= float(np.sqrt(2 * LN2)) * beta + slack
        ),
    )
