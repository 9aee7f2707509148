"""Pydantic schemas for divergence records, procedures and reports."""

import math
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field

from .config import DEFAULT_TOLERANCES, SCHEMA_VERSION, ToleranceConfig
from .states import DensityMatrix, StatePair, make_density, partial_trace

RankProfile = Literal["full", "deficient", "pure"]
Side = Literal["yes", "no", "neither"]
ImplicationVerdict = Literal["not_triggered", "satisfied", "violated"]


# =============================================================================
# Divergences
# =============================================================================


class ClassicalDivergences(BaseModel):
    """Classical distances between two distributions on the same outcomes."""

    sd: float = Field(..., description="Statistical distance 1/2 sum |p0 - p1|")
    tdc: float = Field(..., description="Triangular discrimination 1/2 sum (p0-p1)^2/(p0+p1)")
    js2_bits: float = Field(..., description="Jensen-Shannon divergence, base 2")
    hellinger_sq: float = Field(..., description="Squared Hellinger distance")


class FidelityBures(BaseModel):
    fidelity: float
    bures_sq: float = Field(..., description="B^2 = 2(1 - F)")


class HellingerAffinity(BaseModel):
    q_half_affinity: float = Field(..., description="Tr(sqrt(rho0) sqrt(rho1))")
    qh_sq: float = Field(..., description="1 - Q_1/2")


class EntropyValue(BaseModel):
    nats: float
    bits: float


class QjsValue(BaseModel):
    nats: float
    bits: float
    cross_check_residual: float = Field(
        0.0, description="|entropy form - relative-entropy form| in nats"
    )


class BinaryEntropyBound(BaseModel):
    h2_bound: float = Field(..., description="1 - H2((1 - td)/2) in bits")
    series_bound: float = Field(..., description="Truncated series sum td^2v / (ln2 2v(2v-1))")
    terms: int
    tail_bound: float = Field(..., description="Upper bound on the omitted series tail")


class MeasurementEnsemble(BaseModel):
    """A POVM given by its elements."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    elements: list[np.ndarray] = Field(..., description="PSD effects E_x")
    completeness_residual: float = Field(..., description="max |sum E_x - I|")


class EqualityConditionReport(BaseModel):
    """Checks of the three conditions under which QTD equals the trace distance."""

    cond1_residual: float = Field(..., description="max |D S^+ D - S| on the joint support")
    cond1_ok: bool
    cond2_residual: float = Field(..., description="Spread of |lambda|^2 over supp(D)")
    cond2_ok: bool
    cond3_ok: bool = Field(..., description="Sorted-order eigenvalue sign pattern match")
    overall: bool
    tol: float


# closed ranges of report fields, each widened by REPORT_RANGE_TOL
REPORT_RANGE_TOL = 1e-9
REPORT_RANGES: dict[str, tuple[float, float]] = {
    "td": (0.0, 1.0),
    "fidelity": (0.0, 1.0),
    "bures_sq": (0.0, 2.0),
    "q_half_affinity": (0.0, 1.0),
    "qh_sq": (0.0, 1.0),
    "hs_sq": (0.0, 2.0),
    "qjs_nats": (0.0, math.log(2)),
    "qjs2_bits": (0.0, 1.0),
    "qtd": (0.0, 1.0),
    "qtd_meas": (0.0, 1.0),
    "measured_qjs2_lower_bound": (0.0, 1.0),
}


class DivergenceReport(BaseModel):
    """Every distance and divergence computed for one pair."""

    td: float
    fidelity: float
    bures_sq: float
    q_half_affinity: float
    qh_sq: float
    hs_sq: float
    qjs_nats: float
    qjs2_bits: float
    qtd: float
    qtd_meas: float
    measured_qjs2_lower_bound: float
    alpha: float = Field(0.5, description="alpha used for qtd_alpha")
    qtd_alpha: float = Field(..., description="QTD_alpha at `alpha`")
    cross_checks: dict[str, float] = Field(
        default_factory=dict, description="Residuals of internal identity cross-checks"
    )
    tolerances: ToleranceConfig = Field(default=DEFAULT_TOLERANCES)

    def range_violations(self) -> list[str]:
        """Fields that are non-finite or fall outside their widened range."""
        problems = []
        for name, (low, high) in REPORT_RANGES.items():
            value = getattr(self, name)
            inside = low - REPORT_RANGE_TOL <= value <= high + REPORT_RANGE_TOL
            if not (math.isfinite(value) and inside):
                problems.append(f"{name}={value!r} outside [{low:.6g}, {high:.6g}]")
        if not math.isfinite(self.qtd_alpha) or self.qtd_alpha < -REPORT_RANGE_TOL:
            problems.append(f"qtd_alpha={self.qtd_alpha!r} is not a finite non-negative value")
        return problems


class InequalityVerdict(BaseModel):
    """One inequality lhs <= rhs evaluated on one pair."""

    name: str
    kind: Literal["proven", "conjecture"] = "proven"
    lhs: float
    rhs: float
    margin: float = Field(..., description="rhs - lhs; negative beyond slack is a violation")
    holds: bool
    saturated: bool = Field(False, description="|margin| within the saturation tolerance")


class ComputeResult(BaseModel):
    """Divergence report plus the proven-inequality verdicts on the same pair."""

    report: DivergenceReport
    verdicts: list[InequalityVerdict]

    @computed_field
    @property
    def range_violations(self) -> list[str]:
        return self.report.range_violations()

    @property
    def passed(self) -> bool:
        return all(v.holds for v in self.verdicts) and not self.range_violations


# =============================================================================
# Polarization
# =============================================================================


class PairMetrics(BaseModel):
    """Partial divergence report. Analytic evaluations carry fidelity-derived values only."""

    fidelity: Optional[float] = None
    bures_sq: Optional[float] = None
    td: Optional[float] = None
    qtd: Optional[float] = None
    qtd_meas: Optional[float] = None
    qtd_bounds: Optional[tuple[float, float]] = None
    qtd_meas_bounds: Optional[tuple[float, float]] = None


class PairEvaluation(BaseModel):
    mode: Literal["materialized", "analytic"]
    base_dim: int
    copies: int = Field(..., description="Tensor factors of the base space")
    pair: Optional[StatePair] = Field(default=None, exclude=True)
    metrics: PairMetrics

    @property
    def dim(self) -> int:
        return self.base_dim**self.copies


class StageBound(BaseModel):
    """Yes/no guarantees after one polarization stage."""

    stage: int
    operation: Literal["xor", "tensor"]
    parameter: int
    claimed_yes: float
    claimed_no: float
    certified_yes: float = Field(..., description="Bound implied by the integer schedule")
    certified_no: float


class ScheduleCheck(BaseModel):
    name: str
    lhs: float
    rhs: float
    holds: bool


class PolarizationSchedule(BaseModel):
    kind: Literal["meas_qtd", "qtd"]
    alpha: float
    beta: float
    k: int
    lam: float = Field(..., description="lambda = min(ratio, 2)")
    l: int  # noqa: E741
    m: int
    stage_bounds: list[StageBound]
    checks: list[ScheduleCheck]

    @property
    def checks_pass(self) -> bool:
        return all(c.holds for c in self.checks)


class StageResult(BaseModel):
    stage: int
    operation: Literal["xor", "tensor"]
    mode: Literal["materialized", "analytic"]
    copies: int
    value_low: float
    value_high: float
    certified_bound: Optional[float] = None
    claimed_bound: Optional[float] = None
    certified_ok: Optional[bool] = None
    claimed_ok: Optional[bool] = None


class PolarizationRun(BaseModel):
    schedule: PolarizationSchedule
    input_value: float
    side: Side
    stages: list[StageResult]
    result: PairEvaluation
    elapsed_seconds: float

    @property
    def certified(self) -> bool:
        return all(s.certified_ok is not False for s in self.stages)


# =============================================================================
# Reductions
# =============================================================================


class ReductionInstance(BaseModel):
    kind: Literal["qsdp", "qjsp", "meas_qtdp", "qtdp", "qedp"]
    pair: Optional[StatePair] = Field(default=None, exclude=True)
    alpha: Optional[float] = None
    beta: Optional[float] = None
    g: Optional[float] = Field(default=None, description="Entropy gap in nats (qedp)")
    n: Optional[int] = Field(default=None, description="Qubit count of the states")


class QedpReduction(BaseModel):
    instance: ReductionInstance
    p: float = Field(..., description="Lower-branch solution of H2(p) = 1 - (alpha+beta)/2")
    g: float
    qjs2_bits: float
    entropy_difference_bits: float = Field(..., description="S2(rho'0) - S2(rho'1)")
    identity_residual: float

    @property
    def pair_out(self) -> StatePair:
        return self.instance.pair


class GapAmplification(BaseModel):
    p_replications: int
    analytic_gap: float = Field(..., description="p (S(rho0) - S(rho1)) in nats")
    materialized_gap: Optional[float] = None
    residual: Optional[float] = None


class ChainStep(BaseModel):
    description: str
    lhs: float
    rhs: float
    holds: bool


class HardnessThresholds(BaseModel):
    n: int
    epsilon: float
    target: Literal["qjsp", "meas_qtdp", "qedp"]
    alpha_threshold: Optional[float] = None
    beta_threshold: Optional[float] = None
    g_threshold: Optional[float] = None
    vacuous: bool = False
    derivation_chain: list[ChainStep] = Field(
        ..., description="Proof steps at the source regime; these hold for every n >= 1"
    )
    large_n_conditions: list[ChainStep] = Field(
        default_factory=list, description="Steps that need n >= n(epsilon)"
    )

    @property
    def chain_holds(self) -> bool:
        return all(step.holds for step in self.derivation_chain)

    @property
    def large_enough(self) -> bool:
        return all(step.holds for step in self.large_n_conditions)


class QsdpImplications(BaseModel):
    qjs2_bits: float
    td: float
    forward: ImplicationVerdict
    backward: ImplicationVerdict
    backward_stated: ImplicationVerdict = Field(
        ..., description="Backward check with the sqrt(2 ln 2) constant"
    )

    @property
    def forward_ok(self) -> bool:
        return self.forward != "violated"

    @property
    def backward_ok(self) -> bool:
        return self.backward != "violated"


# =============================================================================
# Algorithms
# =============================================================================


class SwapTestResult(BaseModel):
    p0_outcome: float
    overlap: float = Field(..., description="Tr(rho0 rho1)")


class Purification(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    vector: np.ndarray = Field(..., description="Unit vector on system (x) environment")
    system_dim: int
    env_dim: int

    def reduced_state(
        self, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
    ) -> DensityMatrix:
        """Partial trace over the environment."""
        projector = make_density(np.outer(self.vector, self.vector.conj()), tolerances)
        return partial_trace(projector, [self.system_dim, self.env_dim], keep=[0])


class AmplificationState(BaseModel):
    p: float
    theta: float = Field(..., description="arcsin(sqrt(p/2))")
    success_prob: float = Field(..., description="sin^2(3 theta) = 2p^3 - 6p^2 + 9p/2")
    p_acc: float
    trig_residual: float


class NqpDecision(BaseModel):
    n: int
    p: float
    p_acc: float
    lower_bound_yes: float = Field(..., description="(p - 1/2)^2")
    completeness_floor: float = Field(..., description="2^(-2n-2)")
    verdict: Literal["accept", "reject"]
    label: Literal["close", "far"]


class PpDecision(BaseModel):
    n: int
    hs_sq: float
    td: float
    acceptance: float
    mixture_acceptance: float
    residual: float
    yes_floor: float
    no_ceiling: float
    gap_floor: float
    regime: Literal["close", "far", "outside_promise"]


class HsTdBounds(BaseModel):
    td: float
    hs: float
    lower: float = Field(..., description="HS / sqrt(2)")
    rank_aware_upper: float = Field(..., description="sqrt(r0 r1 / (r0 + r1)) HS")
    upper: float = Field(..., description="sqrt(dim / 2) HS")
    ranks: tuple[int, int]
    holds: bool


# =============================================================================
# Harness
# =============================================================================


class SuiteConfig(BaseModel):
    """Settings of a Monte-Carlo inequality run."""

    seed: int = Field(1, ge=0)
    trials_per_dim: int = Field(1000, ge=1)
    dims: list[int] = Field(default_factory=lambda: [2, 3, 4, 8])
    rank_profiles: list[RankProfile] = Field(
        default_factory=lambda: ["full", "deficient", "pure"]
    )
    slack: float = Field(1e-9, ge=0)
    conjecture_mode: bool = False
    threads: int = Field(1, ge=1, exclude=True, description="Worker threads, never serialized")
    alphas: list[float] = Field(default_factory=lambda: [0.6, 0.75, 0.9])
    search_restarts: int = Field(0, ge=0, description="Random bases for the measured-QJS bound")


class InequalityStats(BaseModel):
    """Aggregate of one inequality over one (dim, profile) cell."""

    inequality: str
    dim: int
    profile: RankProfile
    checked: int = 0
    violations: int = 0
    saturated: int = 0
    worst_margin: Optional[float] = None
    worst_seed: Optional[int] = None


class InequalitySummary(BaseModel):
    inequality: str
    checked: int
    violations: int
    worst_margin: Optional[float] = None
    worst_seed: Optional[int] = None


class FixtureRelation(BaseModel):
    description: str
    lhs: float
    rhs: float
    holds: bool


class FixtureResult(BaseModel):
    name: str
    passed: bool
    relations: list[FixtureRelation]


class FixtureReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    fixtures: list[FixtureResult]

    @property
    def passed(self) -> bool:
        return all(f.passed for f in self.fixtures)


class ConjectureObservation(BaseModel):
    name: str
    statement: str
    status: Literal["conjecture"] = "conjecture"
    trials: int
    min_value: Optional[float] = None
    min_ratio: Optional[float] = None
    max_ratio: Optional[float] = None
    argmin_seed: Optional[int] = None


class SaturationExample(BaseModel):
    name: str
    values: dict[str, float]


class ConjectureReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    seed: int
    observations: list[ConjectureObservation]
    saturations: list[SaturationExample]


class XorWitness(BaseModel):
    """Largest observed |td(xor pair) - td^l|; exact when it stays at rounding level."""

    trials: int
    l: int  # noqa: E741
    max_deviation: float
    argmax_seed: Optional[int] = None
    exact: bool = Field(..., description="max_deviation within XOR_EXACT_TOL")


class SuiteReport(BaseModel):
    schema_version: str = SCHEMA_VERSION
    config: SuiteConfig
    entries: list[InequalityStats]
    summary: list[InequalitySummary]
    fixtures: Optional[FixtureReport] = None
    conjectures: Optional[ConjectureReport] = None
    xor_td_witness: Optional[XorWitness] = None
    passed: bool
