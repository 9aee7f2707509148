"""Error reduction and polarization for QTD and measured QTD.

Pipeline:
    pair -> [XOR, l] -> [tensor power, m] -> [XOR, k] -> polarized pair
Each stage is materialized while the dimension fits under the cap; past it the stage is
evaluated analytically from fidelities (tensor powers) or XOR multiplicativity of qtd, which
also caps measured QTD from above.
"""

import logging
import math
import time
from typing import Callable, Literal, Optional

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .divergences import fidelity_bures, qtd, qtd_meas, trace_distance
from .errors import DimensionOverflow, OutOfRange, RegimeViolation, ScheduleViolation
from .schemas import (
    PairEvaluation,
    PairMetrics,
    PolarizationRun,
    PolarizationSchedule,
    ScheduleCheck,
    Side,
    StageBound,
    StageResult,
)
from .states import DensityMatrix, StatePair, make_pair, tensor_power

logger = logging.getLogger(__name__)

Kind = Literal["meas_qtd", "qtd"]
Mode = Literal["materialized", "analytic"]

# guards ceil() against float noise just above an integer
CEIL_RTOL = 1e-12


def _ceil(x: float) -> int:
    return max(1, math.ceil(x * (1.0 - CEIL_RTOL)))


def _metric(kind: Kind) -> Callable[[StatePair, ToleranceConfig], float]:
    return qtd_meas if kind == "meas_qtd" else qtd


def _with_cap(tolerances: ToleranceConfig, cap: Optional[int]) -> ToleranceConfig:
    return tolerances if cap is None else tolerances.model_copy(update={"dimension_cap": cap})


# =============================================================================
# XOR and tensor-power reductions
# =============================================================================


def xor_combine(
    outer: StatePair, inner: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> StatePair:
    """
    One two-fold XOR step:
    rho~_0 = (o0 (x) i0 + o1 (x) i1) / 2, rho~_1 = (o0 (x) i1 + o1 (x) i0) / 2.
    """
    dim = outer.dim * inner.dim
    if dim > tolerances.dimension_cap:
        raise DimensionOverflow(dim, tolerances.dimension_cap, "xor")
    o0, o1 = outer.rho0.entries, outer.rho1.entries
    i0, i1 = inner.rho0.entries, inner.rho1.entries
    return make_pair(
        DensityMatrix(entries=(np.kron(o0, i0) + np.kron(o1, i1)) / 2),
        DensityMatrix(entries=(np.kron(o0, i1) + np.kron(o1, i0)) / 2),
    )


def xor_reduce(
    pair: StatePair, l: int, tolerances: ToleranceConfig = DEFAULT_TOLERANCES  # noqa: E741
) -> StatePair:
    """
    XOR of l copies: rho~_b averages rho_b1 (x) ... (x) rho_bl over strings of parity b.

    QTD and trace distance are exactly multiplicative under this map. Measured QTD is
    bounded below by its l-th power, with equality for commuting pairs.

    Raises:
        DimensionOverflow: d^l exceeds the cap.
    """
    if l < 1:
        raise OutOfRange(f"l must be >= 1, got {l}")
    if pair.dim**l > tolerances.dimension_cap:
        raise DimensionOverflow(pair.dim**l, tolerances.dimension_cap, "xor")
    current = pair
    for _ in range(l - 1):
        current = xor_combine(current, pair, tolerances)
    return current


def materialized_metrics(
    pair: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> PairMetrics:
    fb = fidelity_bures(pair, tolerances)
    return PairMetrics(
        fidelity=fb.fidelity,
        bures_sq=fb.bures_sq,
        td=trace_distance(pair),
        qtd=qtd(pair, tolerances),
        qtd_meas=qtd_meas(pair, tolerances),
    )


def analytic_metrics(fidelity: float, copies: int) -> PairMetrics:
    """
    Metrics of the copies-fold tensor power from the base fidelity alone.

    F is multiplicative, and 1/2 B^2 <= qtd_meas <= B^2, 1/2 B^2 <= qtd <= B bound the rest.
    """
    f = fidelity**copies
    b2 = 2.0 * (1.0 - f)
    return PairMetrics(
        fidelity=f,
        bures_sq=b2,
        qtd_meas_bounds=(0.5 * b2, min(1.0, b2)),
        qtd_bounds=(0.5 * b2, min(1.0, math.sqrt(max(b2, 0.0)))),
    )


def tensor_power_reduce(
    pair: StatePair,
    l: int,  # noqa: E741
    mode: Mode = "materialized",
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> PairEvaluation:
    """
    (rho0^(x)l, rho1^(x)l), either built explicitly or described by F^l.

    Args:
        pair: Input states.
        l: Number of copies.
        mode: "materialized" builds the states (d^l <= cap); "analytic" never does.
        tolerances: Numerical tolerances, including the dimension cap.
    """
    if l < 1:
        raise OutOfRange(f"l must be >= 1, got {l}")
    if mode == "analytic":
        return PairEvaluation(
            mode="analytic",
            base_dim=pair.dim,
            copies=l,
            metrics=analytic_metrics(fidelity_bures(pair, tolerances).fidelity, l),
        )
    if pair.dim**l > tolerances.dimension_cap:
        raise DimensionOverflow(pair.dim**l, tolerances.dimension_cap, "tensor power")
    powered = make_pair(
        tensor_power(pair.rho0, l, tolerances), tensor_power(pair.rho1, l, tolerances)
    )
    return PairEvaluation(
        mode="materialized",
        base_dim=pair.dim,
        copies=l,
        pair=powered,
        metrics=materialized_metrics(powered, tolerances),
    )


# =============================================================================
# Schedules
# =============================================================================


def _stage2_certified(kind: Kind, alpha: float, beta: float, l: int, m: int):  # noqa: E741
    if kind == "meas_qtd":
        return 1.0 - math.exp(-(alpha**l) * m / 2), min(1.0, 2 * m * beta**l)
    return 1.0 - math.exp(-(alpha ** (2 * l)) * m / 2), min(1.0, math.sqrt(2 * m) * beta ** (l / 2))


def make_schedule(
    alpha: float,
    beta: float,
    k: int,
    kind: Kind = "meas_qtd",
    strict: bool = False,
) -> PolarizationSchedule:
    """
    Derive lambda, l, m for the three-stage polarization.

    Args:
        alpha: Yes threshold.
        beta: No threshold.
        k: Target security parameter; the final gap is (1 - 2^-k, 2^-k).
        kind: "meas_qtd" (needs alpha > beta) or "qtd" (needs alpha^2 > beta).
        strict: Raise ScheduleViolation when any recorded check fails.

    Returns:
        PolarizationSchedule with claimed and integer-certified stage bounds.

    Raises:
        RegimeViolation: alpha <= beta (meas_qtd) or alpha^2 <= beta (qtd).
    """
    if not (0 < alpha <= 1 and 0 < beta <= 1):
        raise OutOfRange(f"alpha={alpha}, beta={beta} must lie in (0, 1]")
    if int(k) != k or k < 1:
        raise OutOfRange(f"k must be a positive integer, got {k}")
    k = int(k)

    if kind == "meas_qtd":
        if alpha <= beta:
            raise RegimeViolation(f"meas_qtd needs alpha > beta, got alpha={alpha} <= beta={beta}")
        ratio, target = alpha / beta, 8 * k
    elif kind == "qtd":
        if alpha**2 <= beta:
            raise RegimeViolation(
                f"qtd needs alpha^2 > beta, got alpha^2={alpha**2:.6g} <= beta={beta}"
            )
        ratio, target = alpha**2 / beta, 16 * k
    else:
        raise OutOfRange(f"unknown schedule kind {kind!r}")

    lam = min(ratio, 2.0)
    l = _ceil(math.log(target) / math.log(lam))  # noqa: E741
    if kind == "meas_qtd":
        m = _ceil(lam**l / (4 * alpha**l))
    else:
        m = _ceil(lam**l / (8 * alpha ** (2 * l)))

    yes2, no2 = _stage2_certified(kind, alpha, beta, l, m)
    stage_bounds = [
        StageBound(
            stage=1, operation="xor", parameter=l,
            claimed_yes=alpha**l, claimed_no=beta**l,
            certified_yes=alpha**l, certified_no=beta**l,
        ),
        StageBound(
            stage=2, operation="tensor", parameter=m,
            claimed_yes=1.0 - math.exp(-k), claimed_no=0.5,
            certified_yes=yes2, certified_no=no2,
        ),
        StageBound(
            stage=3, operation="xor", parameter=k,
            claimed_yes=1.0 - 2.0**-k, claimed_no=2.0**-k,
            certified_yes=yes2**k, certified_no=no2**k,
        ),
    ]

    if kind == "meas_qtd":
        soundness = ScheduleCheck(
            name="2 m beta^l <= 1/2", lhs=2 * m * beta**l, rhs=0.5, holds=2 * m * beta**l <= 0.5
        )
        exponent = alpha**l * m / 2
    else:
        value = math.sqrt(2 * m) * beta ** (l / 2)
        soundness = ScheduleCheck(
            name="sqrt(2m) beta^(l/2) <= 1/2", lhs=value, rhs=0.5, holds=value <= 0.5
        )
        exponent = alpha ** (2 * l) * m / 2
    checks = [
        soundness,
        ScheduleCheck(name="k <= stage-2 exponent", lhs=k, rhs=exponent, holds=k <= exponent),
        ScheduleCheck(
            name="k e^-k <= 2^-k",
            lhs=k * math.exp(-k), rhs=2.0**-k, holds=k * math.exp(-k) <= 2.0**-k,
        ),
        ScheduleCheck(
            name="certified final yes >= 1 - 2^-k",
            lhs=1.0 - 2.0**-k, rhs=yes2**k, holds=yes2**k >= 1.0 - 2.0**-k,
        ),
        ScheduleCheck(
            name="certified final no <= 2^-k", lhs=no2**k, rhs=2.0**-k, holds=no2**k <= 2.0**-k
        ),
    ]

    schedule = PolarizationSchedule(
        kind=kind, alpha=alpha, beta=beta, k=k, lam=lam, l=l, m=m,
        stage_bounds=stage_bounds, checks=checks,
    )
    failed = [c.name for c in checks if not c.holds]
    if failed:
        logger.info(f"[schedule] {kind} alpha={alpha} beta={beta} k={k}: failed checks {failed}")
        if strict:
            raise ScheduleViolation(f"schedule checks failed: {', '.join(failed)}")
    return schedule


# =============================================================================
# Polarization run
# =============================================================================


def _classify(value: float, schedule: PolarizationSchedule, slack: float) -> Side:
    if value >= schedule.alpha - slack:
        return "yes"
    if value <= schedule.beta + slack:
        return "no"
    return "neither"


def _judge(
    result: StageResult, bound: StageBound, side: Side, slack: float
) -> StageResult:
    if side == "yes":
        certified, claimed = bound.certified_yes, bound.claimed_yes
        certified_ok = result.value_low >= certified - slack
        claimed_ok = result.value_low >= claimed - slack
    elif side == "no":
        certified, claimed = bound.certified_no, bound.claimed_no
        certified_ok = result.value_high <= certified + slack
        claimed_ok = result.value_high <= claimed + slack
    else:
        return result
    return result.model_copy(
        update={
            "certified_bound": certified,
            "claimed_bound": claimed,
            "certified_ok": certified_ok,
            "claimed_ok": claimed_ok,
        }
    )


def _tensor_interval(
    kind: Kind, m: int, fidelity: Optional[float], low: float, high: float
) -> tuple[float, float, Optional[float], float]:
    """
    Value interval after m-fold tensoring, from a fidelity or from a value interval.

    Also returns the exact fidelity when known and the qtd <= B upper bound.
    """
    if fidelity is not None:
        f_low = f_high = fidelity
    elif kind == "meas_qtd":
        # B^2 in [x, 2x]
        f_low, f_high = 1.0 - high, 1.0 - low / 2
    else:
        # B^2 in [x^2, 2x]
        f_low, f_high = 1.0 - high, 1.0 - low**2 / 2
    f_low, f_high = min(max(f_low, 0.0), 1.0), min(max(f_high, 0.0), 1.0)
    b2_low, b2_high = 2.0 * (1.0 - f_high**m), 2.0 * (1.0 - f_low**m)
    b_high = min(1.0, math.sqrt(max(b2_high, 0.0)))
    upper = min(1.0, b2_high) if kind == "meas_qtd" else b_high
    exact = fidelity**m if fidelity is not None else None
    return 0.5 * b2_low, upper, exact, b_high


def polarize(
    pair: StatePair,
    schedule: PolarizationSchedule,
    cap: Optional[int] = None,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> PolarizationRun:
    """
    Run XOR(l), tensor power(m), XOR(k) on a pair.

    Stages are materialized smallest first while the dimension stays within the cap, then
    evaluated analytically. Each stage's value (or value interval) is judged against the
    schedule's certified and claimed bounds for the side of the promise the input lies on.

    Args:
        pair: Input states.
        schedule: Output of make_schedule.
        cap: Dimension budget; defaults to tolerances.dimension_cap.
        tolerances: Numerical tolerances.

    Returns:
        PolarizationRun with per-stage results and the final PairEvaluation.
    """
    started = time.perf_counter()
    tol = _with_cap(tolerances, cap)
    metric = _metric(schedule.kind)
    slack = tol.slack
    d, l, m, k = pair.dim, schedule.l, schedule.m, schedule.k  # noqa: E741

    value = metric(pair, tol)
    side = _classify(value, schedule, slack)
    logger.info(f"[polarize] input {schedule.kind}={value:.6g} classified {side}")
    bounds = {b.stage: b for b in schedule.stage_bounds}
    stages: list[StageResult] = []
    # upper bound on qtd of the current stage; qtd >= qtd_meas and qtd is XOR-multiplicative.
    # Commuting pairs stay commuting through every stage and there qtd_meas = qtd.
    tracks_value = schedule.kind == "qtd" or pair.commutes(tol.hermiticity_tol)
    ceiling = value if tracks_value else qtd(pair, tol)

    # Stage 1: XOR of l copies
    stage1: Optional[StatePair] = None
    fidelity1: Optional[float] = None
    ceiling = ceiling**l
    if d**l <= tol.dimension_cap:
        stage1 = xor_reduce(pair, l, tol)
        low = high = metric(stage1, tol)
        fidelity1 = fidelity_bures(stage1, tol).fidelity
        mode: Mode = "materialized"
    else:
        # product measurements give value^l from below only
        low, high = value**l, ceiling
        mode = "analytic"
    logger.info(f"[polarize] stage 1 {mode} (dim {d}^{l})")
    stages.append(_judge(
        StageResult(stage=1, operation="xor", mode=mode, copies=l, value_low=low, value_high=high),
        bounds[1], side, slack,
    ))

    # Stage 2: tensor power m
    stage2: Optional[StatePair] = None
    stage2_fidelity: Optional[float] = None
    if stage1 is not None and stage1.dim**m <= tol.dimension_cap:
        evaluation = tensor_power_reduce(stage1, m, "materialized", tol)
        stage2 = evaluation.pair
        low = high = metric(stage2, tol)
        stage2_fidelity = evaluation.metrics.fidelity
        ceiling = high if tracks_value else evaluation.metrics.qtd
        mode = "materialized"
    else:
        low, high, stage2_fidelity, b_high = _tensor_interval(
            schedule.kind, m, fidelity1, low, high
        )
        ceiling = high if tracks_value else b_high
        mode = "analytic"
    logger.info(f"[polarize] stage 2 {mode} (dim {d}^{l * m})")
    stages.append(_judge(
        StageResult(
            stage=2, operation="tensor", mode=mode, copies=l * m, value_low=low, value_high=high
        ),
        bounds[2], side, slack,
    ))

    # Stage 3: XOR of k copies
    stage3: Optional[StatePair] = None
    if stage2 is not None and stage2.dim**k <= tol.dimension_cap:
        stage3 = xor_reduce(stage2, k, tol)
        low = high = metric(stage3, tol)
        mode = "materialized"
    else:
        low, high = low**k, ceiling**k
        mode = "analytic"
    logger.info(f"[polarize] stage 3 {mode} (dim {d}^{l * m * k})")
    stages.append(_judge(
        StageResult(
            stage=3, operation="xor", mode=mode, copies=l * m * k, value_low=low, value_high=high
        ),
        bounds[3], side, slack,
    ))

    if stage3 is not None:
        result = PairEvaluation(
            mode="materialized",
            base_dim=d,
            copies=l * m * k,
            pair=stage3,
            metrics=materialized_metrics(stage3, tol),
        )
    else:
        interval = (low, high)
        # XOR does not act multiplicatively on fidelity, so only k = 1 carries it through
        final_fidelity = stage2_fidelity if k == 1 else None
        result = PairEvaluation(
            mode="analytic",
            base_dim=d,
            copies=l * m * k,
            metrics=PairMetrics(
                fidelity=final_fidelity,
                bures_sq=None if final_fidelity is None else 2.0 * (1.0 - final_fidelity),
                qtd_meas_bounds=interval if schedule.kind == "meas_qtd" else None,
                qtd_bounds=interval if schedule.kind == "qtd" else None,
            ),
        )

    return PolarizationRun(
        schedule=schedule,
        input_value=value,
        side=side,
        stages=stages,
        result=result,
        elapsed_seconds=time.perf_counter() - started,
    )
