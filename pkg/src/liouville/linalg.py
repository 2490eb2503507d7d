"""
Dense linear-algebra helpers

Shape checks, Hermitian eigen-decompositions and the exceptions shared by the
whole library.
"""
import logging

import numpy as np

from .constants import EIG_CLIP_TOL, HERMITIAN_TOL, UNITARY_TOL

logger = logging.getLogger(__name__)


class DimensionError(Exception):
    """Raised when operator or state dimensions do not match"""
    pass


class NumericalError(Exception):
    """Raised when a computation produces non-finite or unphysical values"""
    pass


def qubit_count(matrix: np.ndarray) -> int:
    """
    Number of qubits of a square 2^n x 2^n matrix.

    Raises:
        DimensionError: If the matrix is not square with a power-of-two side
    """
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError(f"Expected a square matrix, got shape {matrix.shape}")
    dim = matrix.shape[0]
    n = dim.bit_length() - 1
    if dim < 1 or 2 ** n != dim:
        raise DimensionError(f"Matrix side {dim} is not a power of two")
    return n


def as_operator(matrix, n_qubits: int, what: str = "operator") -> np.ndarray:
    """
    Convert to a complex 2^n x 2^n array, checking the shape.

    Raises:
        DimensionError: On shape mismatch
    """
    array = np.asarray(matrix, dtype=complex)
    dim = 2 ** n_qubits
    if array.shape != (dim, dim):
        raise DimensionError(
            f"{what} has shape {array.shape}, expected ({dim}, {dim}) for {n_qubits} qubit(s)"
        )
    return array


def ensure_finite(array: np.ndarray, what: str) -> np.ndarray:
    """Raise NumericalError if the array holds NaN or Inf"""
    if not np.all(np.isfinite(array)):
        logger.error(f"Non-finite entries in {what}")
        raise NumericalError(f"Non-finite entries in {what}")
    return array


def dagger(matrix: np.ndarray) -> np.ndarray:
    return matrix.conj().T


def is_hermitian(matrix: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(matrix - dagger(matrix)), initial=0.0) <= tol)


def is_unitary(matrix: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    identity = np.eye(matrix.shape[0])
    return bool(np.max(np.abs(dagger(matrix) @ matrix - identity)) <= tol)


def hermitian_part(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + dagger(matrix))


def clipped_eigh(matrix: np.ndarray, upper: float | None = 1.0):
    """
    Eigen-decomposition of a (numerically) PSD Hermitian matrix.

    Eigenvalues within EIG_CLIP_TOL below zero (or above ``upper``) are clipped.

    Returns:
        (eigenvalues, eigenvectors)

    Raises:
        NumericalError: If an eigenvalue lies outside the clip window
    """
    try:
        values, vectors = np.linalg.eigh(hermitian_part(matrix))
    except np.linalg.LinAlgError as e:
        logger.error(f"Eigen-decomposition failed: {e}")
        raise NumericalError(f"Eigen-decomposition failed: {e}") from e

    if values[0] < -EIG_CLIP_TOL:
        raise NumericalError(f"Matrix is not positive semidefinite (min eigenvalue {values[0]:.3e})")
    if upper is not None and values[-1] > upper + EIG_CLIP_TOL:
        raise NumericalError(f"Eigenvalue {values[-1]:.3e} exceeds {upper}")
    return np.clip(values, 0.0, upper), vectors


def psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    """Square root of a PSD Hermitian matrix"""
    values, vectors = clipped_eigh(matrix, upper=None)
    return (vectors * np.sqrt(values)) @ dagger(vectors)
