import pytest

from qdivlab.divergences import classical_divergences, compute_report
from qdivlab.inequalities import (
    CLASSICAL_INEQUALITIES,
    QUANTUM_INEQUALITIES,
    alpha_inequality_name,
    evaluate_classical,
    evaluate_report,
    verdict,
)


def test_verdict_margin_and_slack():
    ok = verdict("a <= b", 0.3, 0.5, slack=1e-9)
    assert ok.holds and ok.margin == pytest.approx(0.2)
    near = verdict("a <= b", 0.5 + 5e-10, 0.5, slack=1e-9)
    assert near.holds and near.margin < 0
    bad = verdict("a <= b", 0.6, 0.5, slack=1e-9)
    assert not bad.holds


def test_verdict_slack_scales_with_operands():
    assert verdict("x", 10.0 + 5e-9, 10.0, slack=1e-9).holds
    assert not verdict("x", 1.0 + 5e-9, 1.0, slack=1e-9).holds


def test_verdict_saturation():
    assert verdict("x", 1.0, 1.0, slack=0.0).saturated
    assert not verdict("x", 0.5, 1.0, slack=0.0).saturated


def test_alpha_inequality_name():
    assert alpha_inequality_name(0.75) == "qtd_1/2 <= qtd_0.75"


def test_evaluate_report_covers_registry(equality):
    report = compute_report(equality)
    verdicts = evaluate_report(report, 1e-9, {0.75: 0.9})
    names = [v.name for v in verdicts]
    assert names == list(QUANTUM_INEQUALITIES) + ["qtd_1/2 <= qtd_0.75"]
    assert all(v.holds for v in verdicts)
    assert all(v.kind == "proven" for v in verdicts)


def test_evaluate_report_orthogonal_saturates(orthogonal_qubits):
    report = compute_report(orthogonal_qubits)
    verdicts = {v.name: v for v in evaluate_report(report, 0.0)}
    for name in ("qtd <= td", "td^2 <= qtd_meas", "qjs <= ln2 td"):
        assert verdicts[name].saturated
    assert all(v.holds for v in evaluate_report(report, 1e-9))


def test_evaluate_classical():
    out = evaluate_classical(classical_divergences([1, 0], [0.5, 0.5]), 1e-9)
    assert [v.name for v in out] == list(CLASSICAL_INEQUALITIES)
    assert all(v.holds for v in out)
