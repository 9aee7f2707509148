"""Classical and quantum distances, divergences and the checks built on them.

Conventions:
    D = rho0 - rho1, S = rho0 + rho1, Delta = D / 2, mu = S / 2.
    Inverse powers are taken on the support of the matrix only.
    Entropies are in nats; *_bits / *2 variants divide by ln 2.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np
import scipy.linalg
import scipy.optimize
from scipy.special import entr

from .config import DEFAULT_SEARCH, DEFAULT_TOLERANCES, SearchConfig, ToleranceConfig
from .errors import (
    DegeneratePair,
    IncompleteMeasurement,
    InputError,
    InvalidDistribution,
    NegativeEigenvalue,
    NotPSD,
    OutOfRange,
    SupportInconsistency,
    SupportViolation,
)
from .schemas import (
    BinaryEntropyBound,
    ClassicalDivergences,
    DivergenceReport,
    EntropyValue,
    EqualityConditionReport,
    FidelityBures,
    HellingerAffinity,
    MeasurementEnsemble,
    QjsValue,
)
from .states import (
    DensityMatrix,
    StatePair,
    hermitian_part,
    make_pair,
    random_unitary,
    spectral_decomposition,
    spectral_fn,
    validate_distribution,
)

logger = logging.getLogger(__name__)

LN2 = math.log(2)

# Internal identity cross-checks; a miss is logged and carried in the report
QJS_CROSS_CHECK_TOL = 1e-9
HS_CROSS_CHECK_TOL = 1e-12
QTD_CROSS_CHECK_TOL = 1e-9


def binary_entropy(x: float) -> float:
    """H2(x) in bits."""
    return float((entr(x) + entr(1.0 - x)) / LN2)


def _shannon_nats(p: np.ndarray) -> float:
    return float(np.sum(entr(p)))


def basis_diagonal(a: np.ndarray, basis: np.ndarray) -> np.ndarray:
    """Real parts of <b_i|A|b_i> for the columns b_i of `basis`."""
    return np.real(np.sum(basis.conj() * (a @ basis), axis=0))


def midpoint(pair: StatePair) -> DensityMatrix:
    """mu = (rho0 + rho1) / 2."""
    return DensityMatrix(entries=hermitian_part(pair.total() / 2))


# =============================================================================
# Classical divergences
# =============================================================================


def classical_divergences(
    p0: Sequence[float],
    p1: Sequence[float],
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> ClassicalDivergences:
    """
    SD, TD, JS2 and squared Hellinger distance of two distributions.

    Raises:
        InvalidDistribution: either vector is not a distribution, or lengths differ.
    """
    try:
        a = validate_distribution(p0, tolerances)
        b = validate_distribution(p1, tolerances)
    except InputError as e:
        raise InvalidDistribution(str(e)) from e
    if a.shape != b.shape:
        raise InvalidDistribution(f"outcome spaces differ: {a.size} vs {b.size}")

    diff = a - b
    total = a + b
    on = total > 0
    tdc = 0.5 * float(np.sum(diff[on] ** 2 / total[on]))
    js_nats = _shannon_nats(total / 2) - 0.5 * (_shannon_nats(a) + _shannon_nats(b))

    return ClassicalDivergences(
        sd=0.5 * float(np.sum(np.abs(diff))),
        tdc=tdc,
        js2_bits=js_nats / LN2,
        hellinger_sq=0.5 * float(np.sum((np.sqrt(a) - np.sqrt(b)) ** 2)),
    )


def diagonal_distribution(rho: DensityMatrix) -> np.ndarray:
    """Outcome distribution of a computational-basis measurement."""
    p = np.clip(np.real(np.diag(rho.entries)), 0.0, None)
    return p / p.sum()


# =============================================================================
# Trace distance, fidelity, Hellinger, Hilbert-Schmidt
# =============================================================================


def trace_distance(pair: StatePair) -> float:
    """1/2 sum |lambda_i(rho0 - rho1)|."""
    return 0.5 * float(np.sum(np.abs(scipy.linalg.eigvalsh(hermitian_part(pair.difference())))))


def matrix_sqrt(rho: DensityMatrix, tolerances: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    return spectral_fn(rho.entries, np.sqrt, support_only=True, tolerances=tolerances)


def fidelity_bures(
    pair: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> FidelityBures:
    """F = sum of singular values of sqrt(rho0) sqrt(rho1); B^2 = 2(1 - F)."""
    product = matrix_sqrt(pair.rho0, tolerances) @ matrix_sqrt(pair.rho1, tolerances)
    fidelity = float(np.sum(scipy.linalg.svdvals(product)))
    return FidelityBures(fidelity=fidelity, bures_sq=2.0 * (1.0 - fidelity))


def quantum_hellinger(
    pair: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> HellingerAffinity:
    """Q_1/2 = Tr(sqrt(rho0) sqrt(rho1)) and QH^2 = 1 - Q_1/2, unclamped."""
    affinity = float(
        np.real(np.vdot(matrix_sqrt(pair.rho0, tolerances), matrix_sqrt(pair.rho1, tolerances)))
    )
    return HellingerAffinity(q_half_affinity=affinity, qh_sq=1.0 - affinity)


def _hs_cross_check(pair: StatePair) -> tuple[float, float]:
    d = pair.difference()
    direct = float(np.real(np.vdot(d, d)))
    a, b = pair.rho0.entries, pair.rho1.entries
    trace_form = float(np.real(np.vdot(a, a) + np.vdot(b, b) - 2 * np.vdot(a, b)))
    return direct, abs(direct - trace_form)


def hs_distance_sq(pair: StatePair) -> float:
    """Tr (rho0 - rho1)^2."""
    value, residual = _hs_cross_check(pair)
    if residual > HS_CROSS_CHECK_TOL:
        logger.warning(f"[hs] trace-form cross-check residual {residual:.3e}")
    return value


# =============================================================================
# Entropies
# =============================================================================


def _entropy_nats(rho: DensityMatrix, tolerances: ToleranceConfig) -> float:
    w = scipy.linalg.eigvalsh(rho.entries)
    if w[0] < -tolerances.psd_tol:
        raise NegativeEigenvalue(f"eigenvalue {w[0]:.6g} below -{tolerances.psd_tol:.1e}")
    return float(np.sum(entr(np.clip(w, 0.0, None))))


def von_neumann_entropy(
    rho: DensityMatrix, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> EntropyValue:
    """S(rho) = -sum lambda ln lambda with 0 ln 0 = 0."""
    nats = _entropy_nats(rho, tolerances)
    return EntropyValue(nats=nats, bits=nats / LN2)


def relative_entropy(
    rho: DensityMatrix,
    sigma: DensityMatrix,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> float:
    """
    D(rho || sigma) = Tr rho (ln rho - ln sigma) in nats, logarithms on supports.

    Raises:
        SupportViolation: rho puts more than leak_tol weight outside supp(sigma).
    """
    decomp = spectral_decomposition(sigma.entries, tolerances)
    weights = basis_diagonal(rho.entries, decomp.eigenvectors)
    outside = float(np.sum(weights[~decomp.support_mask]))
    if outside > tolerances.leak_tol:
        raise SupportViolation(
            f"rho has weight {outside:.3e} outside supp(sigma); relative entropy is +inf"
        )
    mask = decomp.support_mask
    cross = float(np.sum(weights[mask] * np.log(decomp.eigenvalues[mask])))
    return -_entropy_nats(rho, tolerances) - cross


def qjs(pair: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES) -> QjsValue:
    """
    QJS = S(mu) - (S(rho0) + S(rho1)) / 2.

    Cross-checked against 1/2 [D(rho0 || mu) + D(rho1 || mu)].
    """
    mu = midpoint(pair)
    nats = _entropy_nats(mu, tolerances) - 0.5 * (
        _entropy_nats(pair.rho0, tolerances) + _entropy_nats(pair.rho1, tolerances)
    )
    try:
        relative_form = 0.5 * sum(
            relative_entropy(rho, mu, tolerances) for rho in (pair.rho0, pair.rho1)
        )
        residual = abs(nats - relative_form)
    except SupportViolation as e:
        logger.warning(f"[qjs] relative-entropy cross-check skipped: {e}")
        residual = 0.0
    if residual > QJS_CROSS_CHECK_TOL:
        logger.warning(f"[qjs] entropy vs relative-entropy form residual {residual:.3e}")
    return QjsValue(nats=nats, bits=nats / LN2, cross_check_residual=residual)


def binary_entropy_bound(td_value: float, terms: int = 200) -> BinaryEntropyBound:
    """
    Lower bounds on QJS2 in terms of the trace distance.

    h2_bound = 1 - H2((1 - td)/2); series_bound is its Taylor series truncated after `terms`
    terms. The omitted tail is at most td^(2 terms + 2) / (4 terms ln 2).
    """
    if not 0.0 <= td_value <= 1.0:
        raise OutOfRange(f"td value {td_value} not in [0, 1]")
    if terms < 1:
        raise OutOfRange(f"terms must be >= 1, got {terms}")
    v = np.arange(1, terms + 1, dtype=float)
    series = float(np.sum(td_value ** (2 * v) / (LN2 * 2 * v * (2 * v - 1))))
    return BinaryEntropyBound(
        h2_bound=1.0 - binary_entropy((1.0 - td_value) / 2),
        series_bound=series,
        terms=terms,
        tail_bound=td_value ** (2 * terms + 2) / (4 * terms * LN2),
    )


# =============================================================================
# Quantum triangular discrimination
# =============================================================================


def qtd_alpha(
    pair: StatePair,
    alpha: float = 0.5,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> float:
    """
    QTD_alpha = Tr(Delta mu^-alpha Delta mu^(alpha-1)), powers on supp(mu).

    At alpha = 1/2 this is QTD and is checked against the (rho0+rho1)^-1/2 form.
    """
    if not 0.0 <= alpha <= 1.0:
        raise OutOfRange(f"alpha {alpha} not in [0, 1]")
    decomp = spectral_decomposition(pair.total() / 2, tolerances)
    basis = decomp.support
    beta = decomp.eigenvalues[decomp.support_mask]
    delta = basis.conj().T @ (pair.difference() / 2) @ basis
    weights = np.outer(beta ** (-alpha), beta ** (alpha - 1.0))
    value = float(np.sum(np.abs(delta) ** 2 * weights))

    if alpha == 0.5:
        residual = abs(value - qtd_definition_form(pair, tolerances))
        if residual > QTD_CROSS_CHECK_TOL:
            logger.warning(f"[qtd] eigenbasis vs definition form residual {residual:.3e}")
    return value


def qtd(pair: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    return qtd_alpha(pair, 0.5, tolerances)


def qtd_definition_form(
    pair: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> float:
    """1/2 Tr(D S^-1/2 D S^-1/2)."""
    d = pair.difference()
    s_inv_sqrt = spectral_fn(pair.total(), lambda x: x**-0.5, True, tolerances)
    return 0.5 * float(np.real(np.trace(d @ s_inv_sqrt @ d @ s_inv_sqrt)))


def qtd_meas(pair: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES) -> float:
    """
    Measured QTD, Tr(Delta X) with Omega_mu(X) = Delta solved in the eigenbasis of mu.

    Raises:
        SupportInconsistency: Delta has an entry above leak_tol where beta_i + beta_j
            is below the support threshold.
    """
    decomp = spectral_decomposition(pair.total() / 2, tolerances)
    v = decomp.eigenvectors
    x = v.conj().T @ (pair.difference() / 2) @ v
    denom = np.add.outer(decomp.eigenvalues, decomp.eigenvalues)
    on = denom > decomp.threshold
    if np.any(~on):
        leak = float(np.max(np.abs(x[~on])))
        if leak > tolerances.leak_tol:
            raise SupportInconsistency(
                f"difference has entry {leak:.3e} outside the support of the midpoint state"
            )
    return float(np.sum(2.0 * np.abs(x[on]) ** 2 / denom[on]))


# =============================================================================
# Measurements and the measured QJS lower bound
# =============================================================================


def make_ensemble(
    elements: Sequence[np.ndarray], tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> MeasurementEnsemble:
    """
    Validate POVM effects: each Hermitian PSD, together summing to the identity.

    Raises:
        NotPSD: an effect is not Hermitian or has an eigenvalue below -psd_tol.
        IncompleteMeasurement: max |sum E_x - I| exceeds completeness_tol.
    """
    effects = [np.asarray(e, dtype=complex) for e in elements]
    if not effects:
        raise IncompleteMeasurement("measurement has no effects")
    dim = effects[0].shape[0]
    for i, e in enumerate(effects):
        if e.shape != (dim, dim):
            raise IncompleteMeasurement(f"effect {i} has shape {e.shape}, expected {(dim, dim)}")
        if np.max(np.abs(e - e.conj().T)) > tolerances.hermiticity_tol:
            raise NotPSD(f"effect {i} is not Hermitian")
        lowest = float(scipy.linalg.eigvalsh(hermitian_part(e))[0])
        if lowest < -tolerances.psd_tol:
            raise NotPSD(f"effect {i} has eigenvalue {lowest:.6g} below -{tolerances.psd_tol:.1e}")
    residual = float(np.max(np.abs(sum(effects) - np.eye(dim))))
    if residual > tolerances.completeness_tol:
        raise IncompleteMeasurement(
            f"effects do not sum to I: completeness residual {residual:.3e}"
        )
    return MeasurementEnsemble(elements=effects, completeness_residual=residual)


def measurement_from_basis(
    basis: np.ndarray, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> MeasurementEnsemble:
    """
    Rank-one projective measurement onto the columns of `basis`.

    Raises:
        IncompleteMeasurement: the columns are not an orthonormal basis.
    """
    elements = [np.outer(basis[:, i], basis[:, i].conj()) for i in range(basis.shape[1])]
    return make_ensemble(elements, tolerances)


def induced_distribution(rho: DensityMatrix, ensemble: MeasurementEnsemble) -> np.ndarray:
    p = np.array([np.real(np.vdot(e, rho.entries)) for e in ensemble.elements])
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def measured_classical(
    pair: StatePair,
    ensemble: MeasurementEnsemble,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> ClassicalDivergences:
    """Classical divergences of the outcome distributions of one measurement."""
    return classical_divergences(
        induced_distribution(pair.rho0, ensemble),
        induced_distribution(pair.rho1, ensemble),
        tolerances,
    )


def helstrom_basis(pair: StatePair) -> np.ndarray:
    """Eigenbasis of rho0 - rho1."""
    return scipy.linalg.eigh(hermitian_part(pair.difference()))[1]


def _basis_js2(pair: StatePair, basis: np.ndarray) -> float:
    probs = []
    for rho in (pair.rho0, pair.rho1):
        p = np.clip(basis_diagonal(rho.entries, basis), 0.0, None)
        probs.append(p / p.sum())
    a, b = probs
    js_nats = _shannon_nats((a + b) / 2) - 0.5 * (_shannon_nats(a) + _shannon_nats(b))
    return js_nats / LN2


def _hermitian_from_params(x: np.ndarray, dim: int) -> np.ndarray:
    h = np.zeros((dim, dim), dtype=complex)
    iu = np.triu_indices(dim, 1)
    n_off = len(iu[0])
    h[iu] = x[:n_off] + 1j * x[n_off : 2 * n_off]
    h = h + h.conj().T
    h[np.diag_indices(dim)] = x[2 * n_off :]
    return h


def _refine_basis(pair: StatePair, basis: np.ndarray, search: SearchConfig) -> float:
    dim = basis.shape[0]

    def objective(x: np.ndarray) -> float:
        return -_basis_js2(pair, basis @ scipy.linalg.expm(1j * _hermitian_from_params(x, dim)))

    result = scipy.optimize.minimize(
        objective, np.zeros(dim * dim), method="L-BFGS-B", options={"maxiter": search.maxiter}
    )
    return -float(result.fun)


def measured_qjs2_lower_bound(
    pair: StatePair,
    search: SearchConfig = DEFAULT_SEARCH,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> float:
    """
    Lower bound on the measured QJS2 by searching projective measurements.

    Candidates: the Helstrom basis, the eigenbasis of mu, the computational basis and
    `search.restarts` Haar-random bases seeded from (search.seed, restart). The best
    candidate is optionally refined with scipy.optimize. This is a certified lower bound,
    never the exact value.
    """
    dim = pair.dim
    fixed = {
        "helstrom": helstrom_basis(pair),
        "midpoint": scipy.linalg.eigh(hermitian_part(pair.total() / 2))[1],
        "computational": np.eye(dim, dtype=complex),
    }
    scores = {name: _basis_js2(pair, basis) for name, basis in fixed.items()}

    def restart(r: int) -> tuple[float, np.ndarray]:
        seed = np.random.SeedSequence([search.seed, r])
        u = random_unitary(dim, np.random.default_rng(seed))
        return _basis_js2(pair, u), u

    with ThreadPoolExecutor(max_workers=search.workers) as pool:
        randoms = list(pool.map(restart, range(search.restarts)))

    best_name = max(scores, key=scores.get)
    best, best_basis = scores[best_name], fixed[best_name]
    for value, basis in randoms:
        if value > best:
            best, best_basis = value, basis
            best_name = "random"

    if search.refine and dim > 1:
        refined = _refine_basis(pair, best_basis, search)
        if refined > best:
            logger.debug(f"[measured-qjs] refinement {best:.6g} -> {refined:.6g}")
            best = refined
    logger.debug(f"[measured-qjs] best candidate {best_name}: {best:.6g} bits")
    return best


# =============================================================================
# Equality conditions and the flag embedding
# =============================================================================


def qtd_equality_conditions(
    pair: StatePair,
    tol: float = 1e-9,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> EqualityConditionReport:
    """
    Check the three conditions under which QTD equals the trace distance.

    (1) D S^-1 D = S, (2) D^dagger D proportional to I on supp(D), (3) the eigenvalue signs
    of D and S^-1/2 D S^1/2 agree when both are taken in descending order.

    Raises:
        DegeneratePair: rho0 and rho1 coincide within `tol`.
    """
    d = hermitian_part(pair.difference())
    if float(np.max(np.abs(d))) <= tol:
        raise DegeneratePair("rho0 equals rho1 within tolerance; conditions are undefined")
    s = pair.total()

    s_inv = spectral_fn(s, lambda x: 1.0 / x, True, tolerances)
    cond1 = float(np.max(np.abs(d @ s_inv @ d - s)))

    decomp_d = spectral_decomposition(d, tolerances)
    on_support = np.abs(decomp_d.eigenvalues) > decomp_d.threshold
    squares = decomp_d.eigenvalues[on_support] ** 2
    cond2 = float(np.max(np.abs(squares - squares.mean()))) if squares.size else 0.0

    similar = (
        spectral_fn(s, lambda x: x**-0.5, True, tolerances)
        @ d
        @ spectral_fn(s, np.sqrt, True, tolerances)
    )
    lam_similar = np.sort(np.real(np.linalg.eigvals(similar)))[::-1]
    lam_d = decomp_d.eigenvalues
    cond3 = bool(np.all(np.sign(lam_d[on_support]) == np.sign(lam_similar[on_support])))

    cond1_ok, cond2_ok = cond1 <= tol, cond2 <= tol
    return EqualityConditionReport(
        cond1_residual=cond1,
        cond1_ok=cond1_ok,
        cond2_residual=cond2,
        cond2_ok=cond2_ok,
        cond3_ok=cond3,
        overall=cond1_ok and cond2_ok and cond3,
        tol=tol,
    )


def jordan_decomposition(
    a: np.ndarray, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> tuple[np.ndarray, np.ndarray]:
    """A = P - N with P, N PSD and orthogonal supports."""
    decomp = spectral_decomposition(a, tolerances)
    v, w = decomp.eigenvectors, decomp.eigenvalues
    positive = hermitian_part((v * np.clip(w, 0.0, None)) @ v.conj().T)
    negative = hermitian_part((v * np.clip(-w, 0.0, None)) @ v.conj().T)
    return positive, negative


def flag_embedding_blocks(
    pair: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> dict[str, np.ndarray | float]:
    """
    Blocks of the qutrit flag construction.

    sigma0 = (D + |D|)/2, sigma1 = (|D| - D)/2, sigma2 = (S - |D|)/2, so that
    sigma2 + sigma0 = rho0, sigma2 + sigma1 = rho1 and Tr sigma0 = Tr sigma1 = td.
    sigma2 is PSD when rho0 and rho1 commute but not in general.
    """
    positive, negative = jordan_decomposition(pair.difference(), tolerances)
    sigma2 = hermitian_part(pair.total() - positive - negative) / 2
    return {
        "sigma0": positive,
        "sigma1": negative,
        "sigma2": sigma2,
        "sigma2_min_eigenvalue": float(scipy.linalg.eigvalsh(sigma2)[0]),
    }


def qutrit_flag_embedding(
    pair: StatePair, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> StatePair:
    """
    rho~_0 = sigma2 (x) |2><2| + sigma0 (x) |0><0|, rho~_1 = sigma2 (x) |2><2| + sigma1 (x) |1><1|.

    The flag is the second factor, so the result has dimension 3d.

    Raises:
        NotPSD: sigma2 has an eigenvalue below -psd_tol (non-commuting inputs).
    """
    blocks = flag_embedding_blocks(pair, tolerances)
    if blocks["sigma2_min_eigenvalue"] < -tolerances.psd_tol:
        raise NotPSD(
            f"sigma2 = (S - |D|)/2 has eigenvalue {blocks['sigma2_min_eigenvalue']:.6g}; "
            "the flag embedding is a state pair only when sigma2 is PSD"
        )
    flags = np.eye(3)
    shared = np.kron(blocks["sigma2"], np.diag(flags[2]))
    rho0 = shared + np.kron(blocks["sigma0"], np.diag(flags[0]))
    rho1 = shared + np.kron(blocks["sigma1"], np.diag(flags[1]))
    return make_pair(DensityMatrix(entries=rho0), DensityMatrix(entries=rho1))


# =============================================================================
# Full report
# =============================================================================


def compute_report(
    pair: StatePair,
    alpha: float = 0.5,
    search: SearchConfig = DEFAULT_SEARCH,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> DivergenceReport:
    """
    Evaluate every divergence on one pair.

    Args:
        pair: Input states.
        alpha: Exponent for the QTD_alpha entry.
        search: Candidate-basis search for the measured QJS lower bound.
        tolerances: Numerical tolerances.

    Returns:
        DivergenceReport, including internal cross-check residuals.
    """
    fb = fidelity_bures(pair, tolerances)
    qh = quantum_hellinger(pair, tolerances)
    jensen = qjs(pair, tolerances)
    hs, hs_residual = _hs_cross_check(pair)
    qtd_value = qtd(pair, tolerances)

    return DivergenceReport(
        td=trace_distance(pair),
        fidelity=fb.fidelity,
        bures_sq=fb.bures_sq,
        q_half_affinity=qh.q_half_affinity,
        qh_sq=qh.qh_sq,
        hs_sq=hs,
        qjs_nats=jensen.nats,
        qjs2_bits=jensen.bits,
        qtd=qtd_value,
        qtd_meas=qtd_meas(pair, tolerances),
        measured_qjs2_lower_bound=measured_qjs2_lower_bound(pair, search, tolerances),
        alpha=alpha,
        qtd_alpha=qtd_value if alpha == 0.5 else qtd_alpha(pair, alpha, tolerances),
        cross_checks={
            "qjs_relative_entropy_form": jensen.cross_check_residual,
            "hs_trace_form": hs_residual,
            "qtd_definition_form": abs(qtd_value - qtd_definition_form(pair, tolerances)),
        },
        tolerances=tolerances,
    )
