"""
Density matrices and state functionals

Purity, trace distance, fidelity, Schatten norms and relative entropy, plus
random-state samplers used by the property suites.
"""
from dataclasses import dataclass
from typing import Optional, Union
import logging

import numpy as np
from scipy.linalg import svdvals
from scipy.special import xlogy

from .constants import EIG_CLIP_TOL, HERMITIAN_TOL, PSD_TOL, STATE_MAX_QUBITS, TRACE_TOL
from .linalg import (
    DimensionError,
    NumericalError,
    clipped_eigh,
    dagger,
    hermitian_part,
    psd_sqrt,
    qubit_count,
)
from .pauli import VectorizedOperator, vectorize

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    n-qubit density matrix.

    Construction checks shape, Hermiticity and unit trace. Positivity is only
    checked by ``validate`` since it needs an eigen-decomposition.
    """

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        if not 0 <= self.n_qubits <= STATE_MAX_QUBITS:
            raise DimensionError(
                f"Density matrices are limited to {STATE_MAX_QUBITS} qubits, got {self.n_qubits}"
            )
        matrix = np.array(self.matrix, dtype=complex)
        dim = 2 ** self.n_qubits
        if matrix.shape != (dim, dim):
            raise DimensionError(f"Density matrix has shape {matrix.shape}, expected ({dim}, {dim})")
        if not np.all(np.isfinite(matrix)):
            raise NumericalError("Density matrix has non-finite entries")
        asymmetry = float(np.max(np.abs(matrix - dagger(matrix))))
        if asymmetry > HERMITIAN_TOL:
            raise NumericalError(f"Density matrix is not Hermitian (max deviation {asymmetry:.3e})")
        trace = np.trace(matrix).real
        if abs(trace - 1.0) > TRACE_TOL:
            raise NumericalError(f"Density matrix trace is {trace!r}, expected 1")
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_matrix(cls, matrix) -> "DensityMatrix":
        array = np.asarray(matrix, dtype=complex)
        return cls(qubit_count(array), array)

    @classmethod
    def from_statevector(cls, statevector) -> "DensityMatrix":
        psi = np.asarray(statevector, dtype=complex).reshape(-1)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise NumericalError("Zero state vector")
        psi = psi / norm
        return cls.from_matrix(np.outer(psi, psi.conj()))

    @classmethod
    def zero_state(cls, n_qubits: int) -> "DensityMatrix":
        matrix = np.zeros((2 ** n_qubits, 2 ** n_qubits), dtype=complex)
        matrix[0, 0] = 1.0
        return cls(n_qubits, matrix)

    @classmethod
    def basis_state(cls, bits: str) -> "DensityMatrix":
        """Computational basis state from a bit string such as "011" (qubit 0 first)"""
        n_qubits = len(bits)
        index = int(bits, 2) if bits else 0
        matrix = np.zeros((2 ** n_qubits, 2 ** n_qubits), dtype=complex)
        matrix[index, index] = 1.0
        return cls(n_qubits, matrix)

    @classmethod
    def plus_state(cls, n_qubits: int) -> "DensityMatrix":
        dim = 2 ** n_qubits
        return cls(n_qubits, np.full((dim, dim), 1.0 / dim, dtype=complex))

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        dim = 2 ** n_qubits
        return cls(n_qubits, np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self) -> int:
        return 2 ** self.n_qubits

    @property
    def purity(self) -> float:
        return purity(self)

    def validate(self) -> "DensityMatrix":
        """
        Check positivity on top of the construction-time checks.

        Raises:
            NumericalError: If the smallest eigenvalue is below -PSD_TOL
        """
        smallest = float(np.linalg.eigvalsh(hermitian_part(self.matrix))[0])
        if smallest < -PSD_TOL:
            raise NumericalError(f"Density matrix has negative eigenvalue {smallest:.3e}")
        return self

    def vectorize(self) -> VectorizedOperator:
        return vectorize(self.matrix, self.n_qubits)


StateLike = Union[DensityMatrix, np.ndarray]


def _as_matrix(state: StateLike) -> np.ndarray:
    if isinstance(state, DensityMatrix):
        return state.matrix
    return np.asarray(state, dtype=complex)


def _check_pair(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"Dimension mismatch: {a.shape} vs {b.shape}")


def purity(rho: StateLike) -> float:
    """Tr(rho^2)"""
    matrix = _as_matrix(rho)
    return float(np.vdot(matrix, matrix).real)


def overlap(rho: StateLike, sigma: StateLike) -> float:
    """Tr(rho sigma) for Hermitian arguments"""
    a, b = _as_matrix(rho), _as_matrix(sigma)
    _check_pair(a, b)
    return float(np.vdot(a, b).real)


def schatten_norm(operator, p: float) -> float:
    """
    Schatten p-norm (sum_i s_i^p)^{1/p} of the singular values.

    Args:
        operator: Any square matrix
        p: Order, p >= 1 or numpy.inf for the operator norm
    """
    if p < 1:
        raise ValueError(f"Schatten norm needs p >= 1, got {p}")
    singular = svdvals(_as_matrix(operator))
    if np.isinf(p):
        return float(singular[0]) if singular.size else 0.0
    return float(np.sum(singular ** p) ** (1.0 / p))


def trace_distance(rho: StateLike, sigma: StateLike) -> float:
    """T(rho, sigma) = ||rho - sigma||_1 / 2"""
    a, b = _as_matrix(rho), _as_matrix(sigma)
    _check_pair(a, b)
    eigenvalues = np.linalg.eigvalsh(hermitian_part(a - b))
    return float(min(1.0, 0.5 * np.sum(np.abs(eigenvalues))))


def fidelity(rho: StateLike, sigma: StateLike) -> float:
    """
    Root fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)).

    Computed as the nuclear norm of sqrt(rho) sqrt(sigma).
    """
    a, b = _as_matrix(rho), _as_matrix(sigma)
    _check_pair(a, b)
    value = float(np.sum(svdvals(psd_sqrt(a) @ psd_sqrt(b))))
    if value > 1.0 + EIG_CLIP_TOL:
        logger.warning(f"Fidelity {value!r} above one; clipping")
    return float(np.clip(value, 0.0, 1.0))


def von_neumann_entropy(rho: StateLike) -> float:
    """Entropy in bits"""
    values, _ = clipped_eigh(_as_matrix(rho))
    return float(-np.sum(xlogy(values, values)) / np.log(2))


def relative_entropy(rho: StateLike, sigma: StateLike) -> float:
    """
    Quantum relative entropy D(rho || sigma) in bits.

    Returns:
        Non-negative float, or numpy.inf when supp(rho) is not inside supp(sigma)
    """
    a, b = _as_matrix(rho), _as_matrix(sigma)
    _check_pair(a, b)
    rho_values, _ = clipped_eigh(a)
    sigma_values, sigma_vectors = clipped_eigh(b)

    # rho expressed in sigma's eigenbasis
    weights = np.einsum("ik,ij,jk->k", sigma_vectors.conj(), a, sigma_vectors).real
    kernel = sigma_values <= EIG_CLIP_TOL
    if np.any(weights[kernel] > EIG_CLIP_TOL):
        return float("inf")

    support = ~kernel
    cross = -np.sum(weights[support] * np.log2(sigma_values[support]))
    neg_entropy = np.sum(xlogy(rho_values, rho_values)) / np.log(2)
    return float(max(0.0, neg_entropy + cross))


def random_hermitian(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """Hermitian matrix drawn from the Gaussian unitary ensemble"""
    dim = 2 ** n_qubits
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return hermitian_part(g) / np.sqrt(2)


def random_pure_state(n_qubits: int, rng: np.random.Generator) -> DensityMatrix:
    """Haar-random pure state"""
    dim = 2 ** n_qubits
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return DensityMatrix.from_statevector(psi)


def random_density_matrix(
    n_qubits: int,
    rng: np.random.Generator,
    rank: Optional[int] = None,
) -> DensityMatrix:
    """
    Random mixed state G G^dagger / Tr(G G^dagger) with G a Ginibre matrix.

    Args:
        n_qubits: Number of qubits
        rng: Random generator
        rank: Number of columns of G (default: full rank)
    """
    dim = 2 ** n_qubits
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    matrix = g @ dagger(g)
    return DensityMatrix(n_qubits, hermitian_part(matrix / np.trace(matrix).real))
