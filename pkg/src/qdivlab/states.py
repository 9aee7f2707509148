"""Density matrices: construction, validation, random generation, composition, spectra.

Every other module consumes `DensityMatrix` / `StatePair` values built here. Entries are
stored as read-only complex arrays so states can be shared freely across threads.
"""

import json
import logging
import math
from functools import reduce
from pathlib import Path
from typing import Callable, Optional, Sequence, Union

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field, field_validator

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import (
    BadFactorization,
    BadIndexSet,
    BadNormalization,
    BadRank,
    BadStateFile,
    BadTrace,
    BlochOutOfBall,
    DimensionMismatch,
    DimensionOverflow,
    MismatchedBlocks,
    NegativeProbability,
    NotHermitian,
    NotPSD,
    NotSquare,
    OutOfRange,
    SingularOnSupport,
)

logger = logging.getLogger(__name__)

SeedLike = Union[int, np.random.Generator]

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


# =============================================================================
# Types
# =============================================================================


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


class DensityMatrix(BaseModel):
    """A validated density matrix. Build through `make_density` and friends."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray = Field(..., description="d x d complex Hermitian PSD unit-trace matrix")

    @field_validator("entries", mode="before")
    @classmethod
    def _freeze(cls, v):
        return _readonly(v)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @property
    def qubits(self) -> Optional[int]:
        n = self.dim.bit_length() - 1
        return n if 2**n == self.dim else None

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim})"


class StatePair(BaseModel):
    """Two density matrices of equal dimension. Build through `make_pair`."""

    model_config = ConfigDict(frozen=True)

    rho0: DensityMatrix
    rho1: DensityMatrix

    @property
    def dim(self) -> int:
        return self.rho0.dim

    def swapped(self) -> "StatePair":
        return StatePair(rho0=self.rho1, rho1=self.rho0)

    def difference(self) -> np.ndarray:
        """rho0 - rho1."""
        return self.rho0.entries - self.rho1.entries

    def total(self) -> np.ndarray:
        """rho0 + rho1."""
        return self.rho0.entries + self.rho1.entries

    def commutes(self, atol: float) -> bool:
        """Max |[rho0, rho1]| entry within atol."""
        a, b = self.rho0.entries, self.rho1.entries
        return bool(np.max(np.abs(a @ b - b @ a)) <= atol)


class Spectrum(BaseModel):
    """Eigendecomposition of a Hermitian matrix, eigenvalues descending."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eigenvalues: np.ndarray = Field(..., description="Real eigenvalues, descending")
    eigenvectors: np.ndarray = Field(..., description="Unitary matrix, eigenvectors as columns")
    support_mask: np.ndarray = Field(..., description="eigenvalue > threshold")
    threshold: float = Field(..., description="Support cutoff used")

    @property
    def support(self) -> np.ndarray:
        """Columns of the eigenvectors spanning the support."""
        return self.eigenvectors[:, self.support_mask]

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.support_mask))


def make_pair(rho0: DensityMatrix, rho1: DensityMatrix) -> StatePair:
    """Pair two states, enforcing equal dimension."""
    if rho0.dim != rho1.dim:
        raise DimensionMismatch(f"pair dimensions differ: {rho0.dim} vs {rho1.dim}")
    return StatePair(rho0=rho0, rho1=rho1)


# =============================================================================
# Spectral utilities
# =============================================================================


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """(A + A^dagger) / 2."""
    return (a + a.conj().T) / 2


def _check_hermitian(a: np.ndarray, tol: float) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSquare(f"expected a square matrix, got shape {a.shape}")
    err = float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0
    if err > tol:
        raise NotHermitian(f"max |A - A^dagger| = {err:.3e} exceeds tolerance {tol:.1e}")


def spectral_decomposition(
    a: np.ndarray, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> Spectrum:
    """
    Eigendecompose a Hermitian matrix.

    Args:
        a: Hermitian matrix (symmetrized before the solver runs).
        tolerances: Hermiticity, support and reconstruction tolerances.

    Returns:
        Spectrum with eigenvalues descending and the support mask filled.
    """
    a = np.asarray(a, dtype=complex)
    _check_hermitian(a, tolerances.hermiticity_tol)
    h = hermitian_part(a)
    w, v = scipy.linalg.eigh(h)
    w, v = w[::-1], v[:, ::-1]
    threshold = tolerances.threshold_for(w, h.shape[0])

    residual = float(np.max(np.abs((v * w) @ v.conj().T - h))) if h.size else 0.0
    if residual > tolerances.reconstruction_tol:
        logger.warning(f"[spectrum] reconstruction residual {residual:.3e} above tolerance")

    return Spectrum(
        eigenvalues=w,
        eigenvectors=v,
        support_mask=w > threshold,
        threshold=threshold,
    )


def spectral_fn(
    a: np.ndarray,
    f: Callable[[np.ndarray], np.ndarray],
    support_only: bool = True,
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """
    Apply a scalar function to a Hermitian matrix through its eigenvalues.

    With `support_only`, f sees only eigenvalues above the support threshold and the rest map
    to 0 (pseudo-function: x^-1/2, x^-alpha, ln x on the support). Without it, f is applied
    everywhere and must stay finite.

    Raises:
        SingularOnSupport: f is non-finite at some eigenvalue and support_only is off.
    """
    decomp = spectral_decomposition(a, tolerances)
    values = np.zeros_like(decomp.eigenvalues)
    if support_only:
        mask = decomp.support_mask
        values[mask] = f(decomp.eigenvalues[mask])
    else:
        with np.errstate(all="ignore"):
            values = np.asarray(f(decomp.eigenvalues), dtype=float)
        bad = ~np.isfinite(values)
        if np.any(bad):
            raise SingularOnSupport(
                f"function undefined at eigenvalue(s) {decomp.eigenvalues[bad].tolist()}; "
                "use support_only"
            )
    v = decomp.eigenvectors
    return hermitian_part((v * values) @ v.conj().T)


def numerical_rank(rho: DensityMatrix, tolerances: ToleranceConfig = DEFAULT_TOLERANCES) -> int:
    return spectral_decomposition(rho.entries, tolerances).rank


def purity(rho: DensityMatrix) -> float:
    """Tr rho^2."""
    return float(np.real(np.vdot(rho.entries, rho.entries)))


# =============================================================================
# Construction
# =============================================================================


def make_density(
    matrix: np.ndarray, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """
    Validate a matrix as a density matrix.

    The Hermitian part is kept and the trace renormalized when it is within tolerance of 1.

    Raises:
        NotSquare, NotHermitian, BadTrace, NotPSD
    """
    a = np.asarray(matrix, dtype=complex)
    _check_hermitian(a, tolerances.hermiticity_tol)
    h = hermitian_part(a)

    trace = float(np.real(np.trace(h)))
    if abs(trace - 1.0) > tolerances.trace_tol:
        raise BadTrace(f"trace {trace:.12g} differs from 1 by more than {tolerances.trace_tol:.1e}")
    h = h / trace

    lowest = float(scipy.linalg.eigvalsh(h)[0])
    if lowest < -tolerances.psd_tol:
        raise NotPSD(f"minimum eigenvalue {lowest:.6g} below -{tolerances.psd_tol:.1e}")

    return DensityMatrix(entries=h)


def from_bloch(
    a: Sequence[float], tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """Qubit state (I + a.sigma) / 2 for a Bloch vector in the unit ball."""
    vec = np.asarray(a, dtype=float)
    if vec.shape != (3,):
        raise OutOfRange(f"Bloch vector must have 3 components, got shape {vec.shape}")
    norm = float(np.linalg.norm(vec))
    if norm > 1 + tolerances.psd_tol:
        raise BlochOutOfBall(f"Bloch vector norm {norm:.12g} exceeds 1")
    if norm > 1:
        vec = vec / norm
    matrix = (np.eye(2) + vec[0] * PAULI_X + vec[1] * PAULI_Y + vec[2] * PAULI_Z) / 2
    return make_density(matrix, tolerances)


def validate_distribution(
    p: Sequence[float], tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> np.ndarray:
    """Check a probability vector and return it renormalized."""
    vec = np.asarray(p, dtype=float)
    if vec.ndim != 1 or vec.size == 0:
        raise BadNormalization(f"expected a non-empty probability vector, got shape {vec.shape}")
    if np.any(vec < 0):
        raise NegativeProbability(f"negative entries {vec[vec < 0].tolist()}")
    total = float(vec.sum())
    if abs(total - 1.0) > tolerances.trace_tol:
        raise BadNormalization(f"probabilities sum to {total:.12g}")
    return vec / total


def from_distribution(
    p: Sequence[float], tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """Diagonal state diag(p)."""
    return DensityMatrix(entries=np.diag(validate_distribution(p, tolerances)))


def cq_state(
    weights: Sequence[float],
    blocks: Sequence[DensityMatrix],
    tolerances: ToleranceConfig = DEFAULT_TOLERANCES,
) -> DensityMatrix:
    """Classical-quantum state sum_i w_i |i><i| (x) rho_i, flag first, block diagonal."""
    w = validate_distribution(weights, tolerances)
    if len(w) != len(blocks):
        raise MismatchedBlocks(f"{len(w)} weights for {len(blocks)} blocks")
    dims = {b.dim for b in blocks}
    if len(dims) != 1:
        raise MismatchedBlocks(f"blocks have differing dimensions {sorted(dims)}")
    total = len(blocks) * blocks[0].dim
    if total > tolerances.dimension_cap:
        raise DimensionOverflow(total, tolerances.dimension_cap, "cq state")
    return DensityMatrix(
        entries=scipy.linalg.block_diag(*[wi * b.entries for wi, b in zip(w, blocks)])
    )


# =============================================================================
# Random states
# =============================================================================


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_mixed(dim: int, rank: int, seed: SeedLike) -> DensityMatrix:
    """
    Ginibre-induced random state GG^dagger / Tr(GG^dagger) with G of shape dim x rank.

    rank == dim samples the Hilbert-Schmidt measure; rank == 1 gives Haar-random pure states.
    The same (dim, rank, seed) always produces identical entries.
    """
    if dim < 1 or not 1 <= rank <= dim:
        raise BadRank(f"rank {rank} not in [1, {dim}]")
    g = _ginibre(_rng(seed), dim, rank)
    rho = g @ g.conj().T
    return DensityMatrix(entries=hermitian_part(rho / np.real(np.trace(rho))))


def random_unitary(dim: int, seed: SeedLike) -> np.ndarray:
    """Haar-random unitary from the QR decomposition of a Ginibre matrix."""
    q, r = np.linalg.qr(_ginibre(_rng(seed), dim, dim))
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_bloch(seed: SeedLike, pure: bool = False) -> np.ndarray:
    """Uniform Bloch vector in the unit ball, or on the sphere when `pure`."""
    rng = _rng(seed)
    direction = rng.standard_normal(3)
    direction /= np.linalg.norm(direction)
    radius = 1.0 if pure else rng.random() ** (1 / 3)
    return radius * direction


def conjugate(rho: DensityMatrix, unitary: np.ndarray) -> DensityMatrix:
    """U rho U^dagger."""
    return DensityMatrix(entries=hermitian_part(unitary @ rho.entries @ unitary.conj().T))


# =============================================================================
# Composition
# =============================================================================


def tensor(
    a: DensityMatrix, b: DensityMatrix, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """Kronecker product a (x) b."""
    dim = a.dim * b.dim
    if dim > tolerances.dimension_cap:
        raise DimensionOverflow(dim, tolerances.dimension_cap)
    return DensityMatrix(entries=np.kron(a.entries, b.entries))


def tensor_power(
    rho: DensityMatrix, copies: int, tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """rho^(x)copies."""
    if copies < 1:
        raise OutOfRange(f"copies must be >= 1, got {copies}")
    if rho.dim**copies > tolerances.dimension_cap:
        raise DimensionOverflow(rho.dim**copies, tolerances.dimension_cap)
    return reduce(lambda acc, _: tensor(acc, rho, tolerances), range(copies - 1), rho)


def partial_trace(
    rho: DensityMatrix, factor_dims: Sequence[int], keep: Sequence[int]
) -> DensityMatrix:
    """
    Reduced state on the kept tensor factors.

    Args:
        rho: State on the product space.
        factor_dims: Dimension of each tensor factor, in order.
        keep: Indices of factors to keep (order of the result follows factor order).

    Raises:
        BadFactorization: product of factor_dims differs from rho.dim.
        BadIndexSet: keep is empty, repeats an index, or points outside the factors.
    """
    dims = [int(d) for d in factor_dims]
    if any(d < 1 for d in dims) or math.prod(dims) != rho.dim:
        raise BadFactorization(f"factor dims {dims} do not multiply to {rho.dim}")
    kept = sorted(set(int(k) for k in keep))
    if not kept or len(kept) != len(keep) or kept[0] < 0 or kept[-1] >= len(dims):
        raise BadIndexSet(f"keep={list(keep)} invalid for {len(dims)} factors")

    n = len(dims)
    t = rho.entries.reshape(dims + dims)
    for axis in sorted(set(range(n)) - set(kept), reverse=True):
        t = np.trace(t, axis1=axis, axis2=axis + n)
        n -= 1
    out = math.prod(dims[k] for k in kept)
    return DensityMatrix(entries=hermitian_part(t.reshape(out, out)))


# =============================================================================
# State files
# =============================================================================


def state_from_json(obj: dict, tolerances: ToleranceConfig = DEFAULT_TOLERANCES) -> DensityMatrix:
    """
    Parse one of the state file shapes:
    {"dim", "re", "im"}, {"bloch": [x, y, z]} or {"diag": [p...]}.
    """
    if not isinstance(obj, dict):
        raise BadStateFile(f"state must be a JSON object, got {type(obj).__name__}")
    if "bloch" in obj:
        return from_bloch(obj["bloch"], tolerances)
    if "diag" in obj:
        return from_distribution(obj["diag"], tolerances)
    if "re" in obj:
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros_like(re)), dtype=float)
        if re.shape != im.shape:
            raise BadStateFile(f"re shape {re.shape} differs from im shape {im.shape}")
        if "dim" in obj and re.shape != (obj["dim"], obj["dim"]):
            raise BadStateFile(f"declared dim {obj['dim']} but entries have shape {re.shape}")
        return make_density(re + 1j * im, tolerances)
    raise BadStateFile(f"unrecognized state keys {sorted(obj)}")


def state_to_json(rho: DensityMatrix) -> dict:
    return {
        "dim": rho.dim,
        "re": np.real(rho.entries).tolist(),
        "im": np.imag(rho.entries).tolist(),
    }


def load_state(
    path: Union[str, Path], tolerances: ToleranceConfig = DEFAULT_TOLERANCES
) -> DensityMatrix:
    """Read and validate a state file."""
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise BadStateFile(f"cannot read state file {path}: {e}") from e
    return state_from_json(obj, tolerances)


def dump_state(rho: DensityMatrix, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(state_to_json(rho)))
