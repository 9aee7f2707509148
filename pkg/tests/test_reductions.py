import math

import numpy as np
import pytest

from qdivlab.algorithms import qubit_count
from qdivlab.divergences import LN2, binary_entropy, qjs
from qdivlab.errors import BadPromise, BisectionFailure, OutOfRange
from qdivlab.reductions import (
    hardness_param_map,
    make_instance,
    promise_side,
    qedp_gap_amplify,
    qjsp_to_qedp,
    qsdp_to_qjsp_verdict,
    solve_binary_entropy,
)
from qdivlab.states import from_distribution, make_pair, random_mixed


def test_make_instance_rejects_bad_promises(orthogonal_qubits):
    with pytest.raises(BadPromise):
        make_instance("qsdp", orthogonal_qubits, alpha=0.3, beta=0.5)
    with pytest.raises(BadPromise):
        make_instance("qjsp", orthogonal_qubits, alpha=0.9)
    with pytest.raises(BadPromise):
        make_instance("qedp", orthogonal_qubits, g=0.0)
    instance = make_instance("qtdp", orthogonal_qubits, alpha=0.9, beta=0.1)
    assert instance.n == 1


@pytest.mark.parametrize("dim", [2, 3, 4, 5, 8])
def test_instance_size_matches_register_width(dim):
    rho = random_mixed(dim, dim, 0)
    instance = make_instance("qsdp", make_pair(rho, rho), alpha=0.9, beta=0.1)
    assert instance.n == qubit_count(dim) == math.ceil(math.log2(dim))


def test_promise_side(orthogonal_qubits, diagonal_pair):
    assert promise_side(make_instance("qsdp", orthogonal_qubits, alpha=0.9, beta=0.1)) == "yes"
    assert promise_side(make_instance("qsdp", diagonal_pair, alpha=0.9, beta=0.1)) == "neither"
    rho = random_mixed(2, 2, 3)
    same = make_pair(rho, rho)
    assert promise_side(make_instance("meas_qtdp", same, alpha=0.9, beta=0.1)) == "no"

    mixed, pure = from_distribution([0.5, 0.5]), from_distribution([1.0, 0.0])
    assert promise_side(make_instance("qedp", make_pair(mixed, pure), g=0.1)) == "yes"
    assert promise_side(make_instance("qedp", make_pair(pure, mixed), g=0.1)) == "no"
    assert promise_side(make_instance("qedp", make_pair(pure, pure), g=0.1)) == "neither"


# =============================================================================
# QJSP -> QEDP
# =============================================================================


def test_solve_binary_entropy():
    assert solve_binary_entropy(0.0) == 0.0
    assert solve_binary_entropy(1.0) == 0.5
    p = solve_binary_entropy(0.5)
    assert p < 0.5
    assert binary_entropy(p) == pytest.approx(0.5, abs=1e-10)
    assert p == pytest.approx(0.110028, abs=1e-6)
    with pytest.raises(BisectionFailure):
        solve_binary_entropy(1.5)


def test_qjsp_to_qedp_identical_states():
    rho = random_mixed(2, 2, 11)
    out = qjsp_to_qedp(make_pair(rho, rho), alpha=0.6, beta=0.4)
    assert out.qjs2_bits == pytest.approx(0.0, abs=1e-12)
    assert out.entropy_difference_bits == pytest.approx(-0.5, abs=1e-9)
    assert out.identity_residual <= 1e-9


def test_qjsp_to_qedp_orthogonal_states(orthogonal_qubits):
    out = qjsp_to_qedp(orthogonal_qubits, alpha=1.0, beta=0.0)
    assert out.entropy_difference_bits == pytest.approx(0.5, abs=1e-9)
    assert out.g == pytest.approx(LN2 / 2)
    assert out.instance.kind == "qedp"
    assert out.instance.n == 2


@pytest.mark.parametrize("dim", [2, 3])
def test_qjsp_to_qedp_identity_on_random_pairs(random_pair, dim):
    for seed in range(10):
        pair = random_pair(dim, seed)
        out = qjsp_to_qedp(pair, alpha=0.7, beta=0.2)
        assert out.identity_residual <= 1e-9
        assert out.entropy_difference_bits == pytest.approx(
            qjs(pair).bits - 0.45, abs=1e-9
        )
        for state in (out.pair_out.rho0, out.pair_out.rho1):
            assert state.dim == 2 * dim
            assert np.trace(state.entries).real == pytest.approx(1.0, abs=1e-10)
            assert np.linalg.eigvalsh(state.entries).min() >= -1e-10


def test_qjsp_to_qedp_rejects_bad_thresholds(orthogonal_qubits):
    with pytest.raises(BadPromise):
        qjsp_to_qedp(orthogonal_qubits, alpha=0.3, beta=0.3)


# =============================================================================
# Gap amplification
# =============================================================================


def _entropy_gap_pair():
    return make_pair(from_distribution([0.5, 0.5]), from_distribution([0.9, 0.1]))


def test_gap_amplification_counts():
    pair = _entropy_gap_pair()
    gap = LN2 - binary_entropy(0.1) * LN2
    assert qedp_gap_amplify(pair, 0.5, 0.5).p_replications == 1
    large = qedp_gap_amplify(pair, 0.01, 0.5)
    assert large.p_replications == 50
    assert large.analytic_gap == pytest.approx(50 * gap)
    assert large.materialized_gap is None


def test_gap_amplification_materialized():
    out = qedp_gap_amplify(_entropy_gap_pair(), 0.25, 0.5)
    assert out.p_replications == 2
    assert out.materialized_gap == pytest.approx(out.analytic_gap, abs=1e-10)
    assert out.residual <= 1e-10


def test_gap_amplification_equal_entropies():
    rho = random_mixed(3, 3, 2)
    out = qedp_gap_amplify(make_pair(rho, rho), 0.1, 0.3)
    assert out.analytic_gap == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(BadPromise):
        qedp_gap_amplify(make_pair(rho, rho), 0.0, 0.3)


# =============================================================================
# Hardness parameter maps
# =============================================================================


def test_hardness_qjsp_thresholds():
    out = hardness_param_map(100, 0.1, "qjsp")
    t = 2.0 ** -(100**0.4)
    assert out.alpha_threshold == pytest.approx(1 - t)
    assert out.beta_threshold == pytest.approx(t)
    assert out.chain_holds
    assert not out.large_enough


def test_hardness_meas_qtdp_thresholds():
    out = hardness_param_map(100, 0.1, "meas_qtdp")
    assert out.chain_holds
    assert out.large_enough


@pytest.mark.parametrize("n", [1, 2, 5, 30, 1000])
def test_hardness_chain_holds_for_every_n(n):
    for target in ("qjsp", "meas_qtdp"):
        assert hardness_param_map(n, 0.2, target).chain_holds


def test_hardness_large_n_eventually_holds():
    assert hardness_param_map(10**6, 0.1, "qjsp").large_enough


def test_hardness_qedp():
    vacuous = hardness_param_map(4, 0.4, "qedp")
    assert vacuous.vacuous
    assert vacuous.g_threshold == pytest.approx(0.0, abs=1e-15)

    out = hardness_param_map(100, 0.1, "qedp")
    assert not out.vacuous
    expected = (LN2 / 2) * (1 - 2.0 ** (-(97**0.4) + 1))
    assert out.g_threshold == pytest.approx(expected)
    assert out.chain_holds
    with pytest.raises(OutOfRange):
        hardness_param_map(3, 0.1, "qedp")


def test_hardness_input_ranges():
    with pytest.raises(OutOfRange):
        hardness_param_map(100, 0.6, "qjsp")
    with pytest.raises(OutOfRange):
        hardness_param_map(100, 0.0, "qjsp")
    with pytest.raises(OutOfRange):
        hardness_param_map(0, 0.1, "qjsp")


def test_hardness_thresholds_monotone_in_n():
    alphas, betas = [], []
    for n in (2, 10, 50, 200):
        out = hardness_param_map(n, 0.1, "qjsp")
        alphas.append(out.alpha_threshold)
        betas.append(out.beta_threshold)
    assert alphas == sorted(alphas)
    assert betas == sorted(betas, reverse=True)
    assert all(b < 0.5 for b in betas[1:])
    assert not math.isclose(alphas[0], alphas[-1])


# =============================================================================
# QSDP -> QJSP implications
# =============================================================================


def test_qsdp_verdict_identical_states():
    rho = random_mixed(2, 1, 4)
    out = qsdp_to_qjsp_verdict(make_pair(rho, rho), alpha=0.9, beta=0.1)
    assert out.forward == "not_triggered"
    assert out.backward == "satisfied"
    assert out.backward_stated == "satisfied"


def test_qsdp_verdict_orthogonal_states(orthogonal_qubits):
    out = qsdp_to_qjsp_verdict(orthogonal_qubits, alpha=0.9, beta=0.1)
    assert out.forward == "satisfied"
    assert out.backward == "not_triggered"


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_qsdp_implications_never_violated(random_pair_ranked, dim):
    for seed in range(20):
        pair = random_pair_ranked(dim, 1 + seed % dim, seed)
        for alpha, beta in ((0.5, 0.3), (0.3, 0.6), (0.8, 0.2)):
            out = qsdp_to_qjsp_verdict(pair, alpha, beta)
            assert out.forward_ok
            assert out.backward_ok


@pytest.mark.slow
def test_qjsp_to_qedp_identity_acceptance():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        dim = int(rng.integers(2, 5))
        pair = make_pair(random_mixed(dim, dim, rng), random_mixed(dim, dim, rng))
        beta, alpha = sorted(rng.uniform(0.0, 1.0, size=2))
        if alpha == beta:
            continue
        assert qjsp_to_qedp(pair, float(alpha), float(beta)).identity_residual <= 1e-9
