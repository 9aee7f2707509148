"""Monte-Carlo inequality suite, counterexample fixtures and conjecture search.

Suite Flow:
    SuiteConfig -> [validate] -> tasks (dim, profile, trial seed)
                -> [stage_trials] -> verdicts per trial (thread pool, ordered)
                -> [assemble_report] -> SuiteReport
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Optional, Sequence, TypeVar

import numpy as np

from .config import DEFAULT_TOLERANCES, SearchConfig, ToleranceConfig
from .divergences import (
    classical_divergences,
    compute_report,
    diagonal_distribution,
    fidelity_bures,
    qjs,
    qtd,
    qtd_alpha,
    qtd_equality_conditions,
    qtd_meas,
    trace_distance,
)
from .errors import FixtureFailure, OutOfRange
from .inequalities import (
    CLASSICAL_INEQUALITIES,
    QUANTUM_INEQUALITIES,
    alpha_inequality_name,
    evaluate_classical,
    evaluate_report,
)
from .polarization import xor_reduce
from .schemas import (
    ConjectureObservation,
    ConjectureReport,
    FixtureRelation,
    FixtureReport,
    FixtureResult,
    InequalityStats,
    InequalitySummary,
    InequalityVerdict,
    RankProfile,
    SaturationExample,
    SuiteConfig,
    SuiteReport,
    XorWitness,
)
from .states import StatePair, from_bloch, from_distribution, make_pair, random_bloch, random_mixed

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

PROFILES: tuple[RankProfile, ...] = ("full", "deficient", "pure")
FIXTURE_TOL = 1e-9
XOR_STREAM = 101
XOR_TRIALS = 200
XOR_EXACT_TOL = 1e-12
CONJECTURE_STREAM = 202

Task = tuple[int, RankProfile, int]


# =============================================================================
# Sampling
# =============================================================================


def trial_seed(seed: int, dim: int, profile: RankProfile, trial: int) -> int:
    """Per-trial seed; independent of execution order and thread count."""
    state = np.random.SeedSequence([seed, dim, PROFILES.index(profile), trial]).generate_state(1)
    return int(state[0])


def draw_pair(dim: int, profile: RankProfile, seed: int) -> StatePair:
    """
    Random pair for one trial, fully determined by (dim, profile, seed).

    Qubit trials draw from the Ginibre ensemble or from Bloch vectors with equal odds.
    """
    rng = np.random.default_rng(seed)
    if dim == 2 and rng.random() < 0.5:
        pure = profile != "full"
        return make_pair(
            from_bloch(random_bloch(rng, pure=pure)), from_bloch(random_bloch(rng, pure=pure))
        )
    if profile == "full":
        ranks = (dim, dim)
    elif profile == "pure":
        ranks = (1, 1)
    else:
        high = max(dim - 1, 1)
        ranks = (int(rng.integers(1, high + 1)), int(rng.integers(1, high + 1)))
    return make_pair(random_mixed(dim, ranks[0], rng), random_mixed(dim, ranks[1], rng))


def _ordered_map(fn: Callable[[T], R], items: Sequence[T], threads: int) -> list[R]:
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, items))


# =============================================================================
# Validation Functions
# =============================================================================


def validate_config(config: SuiteConfig) -> SuiteConfig:
    """Dims must be >= 2 and the profiles known."""
    bad = [d for d in config.dims if d < 2]
    if bad:
        raise OutOfRange(f"dimensions must be >= 2, got {bad}")
    if not config.rank_profiles:
        raise OutOfRange("at least one rank profile is required")
    return config


# =============================================================================
# Stage Functions
# =============================================================================


def evaluate_pair(
    pair: StatePair,
    config: SuiteConfig,
    seed: int = 0,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> list[InequalityVerdict]:
    """Every proven quantum and classical inequality on one pair."""
    search = SearchConfig(restarts=config.search_restarts, seed=seed)
    report = compute_report(pair, search=search, tolerances=tolerances)
    alphas = {a: qtd_alpha(pair, a, tolerances) for a in config.alphas}
    classical = classical_divergences(
        diagonal_distribution(pair.rho0), diagonal_distribution(pair.rho1), tolerances
    )
    return evaluate_report(report, config.slack, alphas) + evaluate_classical(
        classical, config.slack
    )


def stage_trials(
    config: SuiteConfig, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> list[tuple[Task, int, list[InequalityVerdict]]]:
    """Run every (dim, profile, trial) in a fixed order."""
    tasks: list[Task] = [
        (dim, profile, trial)
        for dim in config.dims
        for profile in config.rank_profiles
        for trial in range(config.trials_per_dim)
    ]

    def run(task: Task) -> tuple[Task, int, list[InequalityVerdict]]:
        dim, profile, trial = task
        seed = trial_seed(config.seed, dim, profile, trial)
        pair = draw_pair(dim, profile, seed)
        return task, seed, evaluate_pair(pair, config, seed, tolerances)

    logger.info(f"[suite] {len(tasks)} trials on {config.threads} thread(s)")
    return _ordered_map(run, tasks, config.threads)


def stage_xor_witness(config: SuiteConfig, l: int = 2) -> XorWitness:  # noqa: E741
    """Largest |td(xor pair) - td^l| over qubit pairs; td is exactly XOR-multiplicative."""
    trials = min(XOR_TRIALS, config.trials_per_dim)

    def run(trial: int) -> tuple[float, int]:
        seed = int(
            np.random.SeedSequence([config.seed, XOR_STREAM, trial]).generate_state(1)[0]
        )
        pair = draw_pair(2, "full", seed)
        return abs(trace_distance(xor_reduce(pair, l)) - trace_distance(pair) ** l), seed

    results = _ordered_map(run, list(range(trials)), config.threads)
    best, best_seed = -1.0, None
    for deviation, seed in results:
        if deviation > best:
            best, best_seed = deviation, seed
    deviation = max(best, 0.0)
    return XorWitness(
        trials=trials,
        l=l,
        max_deviation=deviation,
        argmax_seed=best_seed,
        exact=deviation <= XOR_EXACT_TOL,
    )


# =============================================================================
# Assembly
# =============================================================================


def inequality_names(config: SuiteConfig) -> list[str]:
    """Report order: quantum chain, QTD_alpha entries, classical chains."""
    return (
        list(QUANTUM_INEQUALITIES)
        + [alpha_inequality_name(a) for a in sorted(config.alphas)]
        + list(CLASSICAL_INEQUALITIES)
    )


def assemble_report(
    config: SuiteConfig,
    outcomes: Iterable[tuple[Task, int, list[InequalityVerdict]]],
    fixtures: Optional[FixtureReport] = None,
    conjectures: Optional[ConjectureReport] = None,
    xor_witness: Optional[XorWitness] = None,
) -> SuiteReport:
    """Fold per-trial verdicts into (inequality, dim, profile) cells, first worst case wins."""
    order = inequality_names(config)
    cells: dict[tuple[str, int, str], InequalityStats] = {
        (name, dim, profile): InequalityStats(inequality=name, dim=dim, profile=profile)
        for name in order
        for dim in config.dims
        for profile in config.rank_profiles
    }
    for (dim, profile, _), seed, verdicts in outcomes:
        for v in verdicts:
            cell = cells[(v.name, dim, profile)]
            cell.checked += 1
            cell.violations += 0 if v.holds else 1
            cell.saturated += 1 if v.saturated else 0
            if cell.worst_margin is None or v.margin < cell.worst_margin:
                cell.worst_margin, cell.worst_seed = v.margin, seed

    entries = list(cells.values())
    summary = []
    for name in order:
        group = [c for c in entries if c.inequality == name]
        seen = [c for c in group if c.worst_margin is not None]
        worst = min(seen, key=lambda c: c.worst_margin) if seen else None
        summary.append(
            InequalitySummary(
                inequality=name,
                checked=sum(c.checked for c in group),
                violations=sum(c.violations for c in group),
                worst_margin=worst.worst_margin if worst else None,
                worst_seed=worst.worst_seed if worst else None,
            )
        )

    passed = (
        all(s.violations == 0 for s in summary)
        and (fixtures is None or fixtures.passed)
        and (xor_witness is None or xor_witness.exact)
    )
    return SuiteReport(
        config=config,
        entries=entries,
        summary=summary,
        fixtures=fixtures,
        conjectures=conjectures,
        xor_td_witness=xor_witness,
        passed=passed,
    )


def run_inequality_suite(
    config: SuiteConfig,
    with_fixtures: bool = False,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> SuiteReport:
    """
    Check every proven inequality over seeded random pairs.

    Args:
        config: Seed, trial counts, dims, profiles, slack and threads.
        with_fixtures: Also reproduce the counterexample fixtures into the report.
        tolerances: Numerical tolerances.

    Returns:
        SuiteReport; identical configs give identical reports for any thread count.
    """
    config = validate_config(config)
    outcomes = stage_trials(config, tolerances)
    fixtures = reproduce_counterexamples(tolerances=tolerances) if with_fixtures else None
    conjectures = None
    if config.conjecture_mode:
        conjectures = conjecture_search(config, tolerances=tolerances)
    report = assemble_report(config, outcomes, fixtures, conjectures, stage_xor_witness(config))
    failed = [s.inequality for s in report.summary if s.violations]
    if failed:
        logger.warning(f"[suite] violations in {failed}")
    else:
        logger.info(f"[suite] all {len(report.summary)} inequalities hold")
    return report


# =============================================================================
# Counterexample fixtures
# =============================================================================


def _relation(description: str, lhs: float, rhs: float, holds: bool) -> FixtureRelation:
    return FixtureRelation(description=description, lhs=lhs, rhs=rhs, holds=bool(holds))


def equality_pair() -> StatePair:
    """Pure qubit pair on which QTD equals the trace distance."""
    return make_pair(from_bloch((6 / 7, 3 / 7, 2 / 7)), from_bloch((-3 / 7, -2 / 7, 6 / 7)))


def non_polarizing_pairs() -> tuple[StatePair, StatePair]:
    """Two qubit pairs where the larger trace distance squared falls below the smaller."""
    first = make_pair(from_bloch((1 / 7, 1 / 3, 1 / 4)), from_bloch((-1 / 7, -1 / 3, -1 / 4)))
    second = make_pair(
        from_bloch((-1 / 7, -1 / 5, -1 / 6)), from_bloch((1 / 7, 1 / 5, -1 / 6))
    )
    return first, second


def _fixture_equality(tolerances: ToleranceConfig) -> FixtureResult:
    pair = equality_pair()
    td = trace_distance(pair)
    half = qtd(pair, tolerances)
    three_quarters = qtd_alpha(pair, 0.75, tolerances)
    conditions = qtd_equality_conditions(pair, FIXTURE_TOL, tolerances)
    relations = [
        _relation("qtd_1/2 = td", half, td, abs(half - td) <= FIXTURE_TOL),
        _relation(
            "equality conditions hold", conditions.cond1_residual, conditions.tol,
            conditions.overall,
        ),
        _relation("qtd_0.75 > td", td, three_quarters, three_quarters > td),
    ]
    return FixtureResult(
        name="qtd-equals-td", passed=all(r.holds for r in relations), relations=relations
    )


def _fixture_separation(tolerances: ToleranceConfig) -> FixtureResult:
    pair = equality_pair()
    td = trace_distance(pair)
    half = qtd(pair, tolerances)
    meas = qtd_meas(pair, tolerances)
    b2 = fidelity_bures(pair, tolerances).bures_sq
    relations = [
        _relation("qtd_meas <= B^2", meas, b2, meas <= b2 + FIXTURE_TOL),
        _relation("B^2 < qtd_1/2", b2, half, b2 < half),
        _relation("qtd_1/2 = td", half, td, abs(half - td) <= FIXTURE_TOL),
        _relation("td < B", td, math.sqrt(b2), td < math.sqrt(b2)),
    ]
    return FixtureResult(
        name="meas-qtd-separation", passed=all(r.holds for r in relations), relations=relations
    )


def _fixture_non_polarizing(tolerances: ToleranceConfig) -> FixtureResult:
    first, second = non_polarizing_pairs()
    td, td2 = trace_distance(first), trace_distance(second)
    meas, meas2 = qtd_meas(first, tolerances), qtd_meas(second, tolerances)
    relations = [
        _relation("td > td'", td2, td, td > td2),
        _relation("td' > td^2", td**2, td2, td2 > td**2),
        _relation("qtd_meas > qtd_meas'", meas2, meas, meas > meas2),
    ]
    return FixtureResult(
        name="td-non-polarizing", passed=all(r.holds for r in relations), relations=relations
    )


def reproduce_counterexamples(
    strict: bool = False, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> FixtureReport:
    """
    Rebuild the published example pairs and check their stated relations.

    Raises:
        FixtureFailure: under `strict`, for the first relation that does not hold.
    """
    report = FixtureReport(
        fixtures=[
            _fixture_equality(tolerances),
            _fixture_separation(tolerances),
            _fixture_non_polarizing(tolerances),
        ]
    )
    for fixture in report.fixtures:
        for relation in fixture.relations:
            if relation.holds:
                continue
            logger.warning(f"[fixtures] {fixture.name}: {relation.description} failed")
            if strict:
                raise FixtureFailure(
                    f"{fixture.name}: {relation.description}",
                    {"lhs": relation.lhs, "rhs": relation.rhs},
                )
    return report


# =============================================================================
# Conjecture exploration
# =============================================================================


class _Tracker:
    """Running minimum of a value plus min/max of an optional ratio."""

    def __init__(self, name: str, statement: str):
        self.name, self.statement = name, statement
        self.trials = 0
        self.min_value: Optional[float] = None
        self.argmin_seed: Optional[int] = None
        self.min_ratio: Optional[float] = None
        self.max_ratio: Optional[float] = None

    def add(self, value: float, seed: int, ratio: Optional[float] = None) -> None:
        self.trials += 1
        if self.min_value is None or value < self.min_value:
            self.min_value, self.argmin_seed = value, seed
        if ratio is not None and math.isfinite(ratio):
            self.min_ratio = ratio if self.min_ratio is None else min(self.min_ratio, ratio)
            self.max_ratio = ratio if self.max_ratio is None else max(self.max_ratio, ratio)

    def observation(self) -> ConjectureObservation:
        return ConjectureObservation(
            name=self.name,
            statement=self.statement,
            trials=self.trials,
            min_value=self.min_value,
            min_ratio=self.min_ratio,
            max_ratio=self.max_ratio,
            argmin_seed=self.argmin_seed,
        )


def _ratio(num: float, den: float) -> Optional[float]:
    return num / den if den > 1e-12 else None


def conjecture_search(
    config: SuiteConfig, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> ConjectureReport:
    """
    Explore the open bounds; observations are reported, never asserted.

    qjs2 >= qtd^2 and qjs2 <= qtd on random pairs, and the sqrt(qtd) triangle inequality on
    random triples. The minima come with the seed that generated them.
    """
    lower = _Tracker("qjs2 - qtd^2", "qtd^2 <= qjs2")
    upper = _Tracker("qtd - qjs2", "qjs2 <= qtd")
    triangle = _Tracker(
        "sqrt-qtd triangle slack", "sqrt(qtd(r0,r2)) <= sqrt(qtd(r0,r1)) + sqrt(qtd(r1,r2))"
    )
    tasks = [(dim, trial) for dim in config.dims for trial in range(config.trials_per_dim)]

    def run(task: tuple[int, int]) -> tuple[int, float, float, float]:
        dim, trial = task
        sequence = np.random.SeedSequence([config.seed, CONJECTURE_STREAM, dim, trial])
        seed = int(sequence.generate_state(1)[0])
        rng = np.random.default_rng(seed)
        profile = PROFILES[int(rng.integers(0, len(PROFILES)))]
        states = [draw_pair(dim, profile, int(rng.integers(0, 2**32))) for _ in range(2)]
        r0, r1, r2 = states[0].rho0, states[0].rho1, states[1].rho0
        pair = make_pair(r0, r1)
        j = qjs(pair, tolerances).bits
        t01 = qtd(pair, tolerances)
        t12 = qtd(make_pair(r1, r2), tolerances)
        t02 = qtd(make_pair(r0, r2), tolerances)
        slack = math.sqrt(t01) + math.sqrt(t12) - math.sqrt(t02)
        return seed, j, t01, slack

    for seed, j, t, slack in _ordered_map(run, tasks, config.threads):
        lower.add(j - t**2, seed, _ratio(j, t**2))
        upper.add(t - j, seed, _ratio(j, t))
        triangle.add(slack, seed)

    orthogonal = make_pair(from_distribution([1.0, 0.0]), from_distribution([0.0, 1.0]))
    saturations = [
        SaturationExample(
            name="orthogonal pure pair",
            values={"qjs2": qjs(orthogonal, tolerances).bits, "qtd": qtd(orthogonal, tolerances)},
        )
    ]
    logger.info(f"[conjectures] {len(tasks)} trials, min triangle slack {triangle.min_value}")
    return ConjectureReport(
        seed=config.seed,
        observations=[lower.observation(), upper.observation(), triangle.observation()],
        saturations=saturations,
    )
