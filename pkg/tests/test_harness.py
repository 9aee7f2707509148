import pytest

from qdivlab.errors import OutOfRange
from qdivlab.harness import (
    assemble_report,
    conjecture_search,
    draw_pair,
    inequality_names,
    reproduce_counterexamples,
    run_inequality_suite,
    stage_trials,
    stage_xor_witness,
    trial_seed,
    validate_config,
)
from qdivlab.inequalities import CLASSICAL_INEQUALITIES, QUANTUM_INEQUALITIES
from qdivlab.reporting import to_csv, to_json
from qdivlab.schemas import SuiteConfig, XorWitness


def _small_config(**overrides) -> SuiteConfig:
    values = dict(seed=3, trials_per_dim=6, dims=[2, 3, 4])
    values.update(overrides)
    return SuiteConfig(**values)


# =============================================================================
# Sampling
# =============================================================================


def test_trial_seed_is_deterministic():
    assert trial_seed(1, 2, "full", 0) == trial_seed(1, 2, "full", 0)
    assert trial_seed(1, 2, "full", 0) != trial_seed(1, 2, "full", 1)
    assert trial_seed(1, 2, "full", 0) != trial_seed(1, 2, "pure", 0)


@pytest.mark.parametrize("profile", ["full", "deficient", "pure"])
def test_draw_pair_reproducible(profile):
    first, second = draw_pair(3, profile, 42), draw_pair(3, profile, 42)
    assert (first.rho0.entries == second.rho0.entries).all()
    assert (first.rho1.entries == second.rho1.entries).all()


def test_validate_config():
    with pytest.raises(OutOfRange):
        validate_config(_small_config(dims=[1, 2]))
    with pytest.raises(OutOfRange):
        validate_config(_small_config(rank_profiles=[]))


def test_suite_config_rejects_negative_slack():
    with pytest.raises(ValueError):
        SuiteConfig(slack=-1e-9)


# =============================================================================
# Suite
# =============================================================================


def test_small_suite_has_no_violations():
    config = _small_config()
    report = run_inequality_suite(config)
    assert report.passed
    assert [s.inequality for s in report.summary] == inequality_names(config)
    assert all(s.violations == 0 for s in report.summary)
    expected = len(config.dims) * len(config.rank_profiles) * config.trials_per_dim
    assert all(s.checked == expected for s in report.summary)
    assert report.xor_td_witness.exact


def test_inequality_names_order():
    names = inequality_names(_small_config(alphas=[0.9, 0.6]))
    assert names[: len(QUANTUM_INEQUALITIES)] == list(QUANTUM_INEQUALITIES)
    assert names[len(QUANTUM_INEQUALITIES)] == "qtd_1/2 <= qtd_0.6"
    assert names[-len(CLASSICAL_INEQUALITIES) :] == list(CLASSICAL_INEQUALITIES)


def test_suite_independent_of_thread_count():
    single = run_inequality_suite(_small_config(trials_per_dim=4, threads=1))
    pooled = run_inequality_suite(_small_config(trials_per_dim=4, threads=4))
    assert to_json(single) == to_json(pooled)
    assert single.summary == pooled.summary


def test_suite_at_zero_slack_counts_saturations():
    report = run_inequality_suite(_small_config(trials_per_dim=4, slack=0.0))
    pure = [e for e in report.entries if e.profile == "pure" and e.inequality == "qtd <= td"]
    # on a pure qubit pair qtd and td coincide
    qubit = next(e for e in pure if e.dim == 2)
    assert qubit.saturated == qubit.checked


def test_suite_with_fixtures_and_conjectures():
    report = run_inequality_suite(
        _small_config(trials_per_dim=2, dims=[2], conjecture_mode=True), with_fixtures=True
    )
    assert report.fixtures is not None and report.fixtures.passed
    assert report.conjectures is not None
    assert report.passed


def test_csv_has_one_row_per_cell():
    config = _small_config(trials_per_dim=2)
    report = run_inequality_suite(config)
    rows = to_csv(report).strip().split("\n")
    cells = len(inequality_names(config)) * len(config.dims) * len(config.rank_profiles)
    assert len(rows) == cells + 1
    assert rows[0].startswith("inequality,dim,profile")


@pytest.mark.slow
def test_acceptance_suite():
    report = run_inequality_suite(SuiteConfig(seed=1, trials_per_dim=1000, threads=4))
    assert report.passed


def test_xor_witness_records_exact_multiplicativity():
    witness = stage_xor_witness(_small_config(trials_per_dim=50))
    assert witness.trials == 50
    assert witness.max_deviation <= 1e-12
    assert witness.exact
    assert witness.argmax_seed is not None


def test_inexact_xor_witness_fails_the_suite():
    config = _small_config(trials_per_dim=1, dims=[2])
    witness = XorWitness(trials=1, l=2, max_deviation=1e-3, argmax_seed=0, exact=False)
    report = assemble_report(config, stage_trials(config), xor_witness=witness)
    assert all(s.violations == 0 for s in report.summary)
    assert not report.passed


# =============================================================================
# Fixtures and conjectures
# =============================================================================


def test_counterexample_fixtures_pass():
    report = reproduce_counterexamples()
    assert [f.name for f in report.fixtures] == [
        "qtd-equals-td",
        "meas-qtd-separation",
        "td-non-polarizing",
    ]
    assert report.passed
    assert reproduce_counterexamples(strict=True).passed


def test_non_polarizing_fixture_values():
    fixture = reproduce_counterexamples().fixtures[2]
    td_gap = fixture.relations[0]
    assert td_gap.rhs == pytest.approx(0.44048, abs=1e-4)
    assert td_gap.lhs == pytest.approx(0.24578, abs=1e-4)


def test_conjecture_report():
    report = conjecture_search(_small_config(trials_per_dim=5, dims=[2, 3]))
    names = [o.name for o in report.observations]
    assert names == ["qjs2 - qtd^2", "qtd - qjs2", "sqrt-qtd triangle slack"]
    assert all(o.status == "conjecture" and o.trials == 10 for o in report.observations)
    saturation = report.saturations[0]
    assert saturation.values["qjs2"] == pytest.approx(1.0, abs=1e-9)
    assert saturation.values["qtd"] == pytest.approx(1.0, abs=1e-9)


def test_conjecture_search_reproducible():
    config = _small_config(trials_per_dim=3, dims=[2])
    assert to_json(conjecture_search(config)) == to_json(
        conjecture_search(config.model_copy(update={"threads": 3}))
    )


@pytest.mark.slow
def test_acceptance_conjecture_search():
    config = SuiteConfig(seed=1, trials_per_dim=25_000, dims=[2, 3, 4, 8], threads=4)
    report = conjecture_search(config)
    assert all(o.trials == 100_000 for o in report.observations)
