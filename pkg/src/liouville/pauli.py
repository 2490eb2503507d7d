"""
Pauli-basis machinery

Pauli labels, the normalized Pauli basis, vectorization of operators and
Pauli transfer matrices (PTMs) of superoperators.

Index convention: on each qubit the label (x, z) maps to the digit
I=(0,0)->0, X=(1,0)->1, Y=(1,1)->2, Z=(0,1)->3. The global index is the base-4
number with qubit 0 as the most significant digit, which is also the order of
Kronecker products with qubit 0 as the leftmost factor.
"""
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Tuple
import logging

import numpy as np

from .constants import BASIS_MAX_QUBITS, IMAG_TOL, PTM_MATCH_TOL, PTM_MAX_QUBITS, TP_TOL
from .linalg import DimensionError, as_operator, dagger, ensure_finite, qubit_count

logger = logging.getLogger(__name__)

SINGLE_QUBIT_PAULIS = np.array(
    [
        [[1, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
SINGLE_QUBIT_PAULIS.flags.writeable = False

_LETTERS = "IXYZ"
_DIGIT_OF_BITS = {(0, 0): 0, (1, 0): 1, (1, 1): 2, (0, 1): 3}
_BITS_OF_DIGIT = {digit: bits for bits, digit in _DIGIT_OF_BITS.items()}

# _TO_PAULI[r, 2i+j] = sigma_r[j, i], so contracting gives Tr(sigma_r A)
_TO_PAULI = SINGLE_QUBIT_PAULIS.transpose(0, 2, 1).reshape(4, 4)
# _FROM_PAULI[2i+j, r] = sigma_r[i, j]
_FROM_PAULI = SINGLE_QUBIT_PAULIS.reshape(4, 4).T.copy()


class NotTracePreservingError(Exception):
    """Raised when a Kraus set does not satisfy sum_j A_j^dagger A_j = I"""
    pass


@dataclass(frozen=True)
class PauliIndex:
    """Binary symplectic label r = (x, z) of an n-qubit Pauli operator"""

    x: Tuple[int, ...]
    z: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(int(b) for b in self.x))
        object.__setattr__(self, "z", tuple(int(b) for b in self.z))
        if len(self.x) != len(self.z):
            raise DimensionError(f"x has {len(self.x)} bits but z has {len(self.z)}")
        if any(b not in (0, 1) for b in self.x + self.z):
            raise ValueError(f"Pauli label bits must be 0 or 1, got x={self.x}, z={self.z}")

    @property
    def n_qubits(self) -> int:
        return len(self.x)

    @property
    def label(self) -> str:
        return "".join(_LETTERS[_DIGIT_OF_BITS[bits]] for bits in zip(self.x, self.z))

    @property
    def is_identity(self) -> bool:
        return not any(self.x) and not any(self.z)

    @classmethod
    def from_label(cls, label: str) -> "PauliIndex":
        """Build from a string such as "XZ" (qubit 0 first)"""
        try:
            bits = [_BITS_OF_DIGIT[_LETTERS.index(ch)] for ch in label.upper()]
        except ValueError as e:
            raise ValueError(f"Invalid Pauli label: {label!r}") from e
        return cls(tuple(b[0] for b in bits), tuple(b[1] for b in bits))

    @classmethod
    def from_int(cls, index: int, n_qubits: int) -> "PauliIndex":
        if not 0 <= index < 4 ** n_qubits:
            raise DimensionError(f"Pauli index {index} out of range for {n_qubits} qubit(s)")
        digits = [(index >> (2 * (n_qubits - 1 - q))) & 3 for q in range(n_qubits)]
        bits = [_BITS_OF_DIGIT[d] for d in digits]
        return cls(tuple(b[0] for b in bits), tuple(b[1] for b in bits))

    def to_int(self) -> int:
        index = 0
        for bits in zip(self.x, self.z):
            index = 4 * index + _DIGIT_OF_BITS[bits]
        return index


def pauli_op(r: PauliIndex) -> np.ndarray:
    """
    Matrix of P_r = i^{x.z} X(x) Z(z).

    Args:
        r: Pauli label

    Returns:
        2^n x 2^n Hermitian unitary matrix
    """
    matrix = np.ones((1, 1), dtype=complex)
    for bits in zip(r.x, r.z):
        matrix = np.kron(matrix, SINGLE_QUBIT_PAULIS[_DIGIT_OF_BITS[bits]])
    return matrix


@lru_cache(maxsize=None)
def pauli_basis(n_qubits: int) -> np.ndarray:
    """
    All 4^n normalized Pauli matrices P_r / 2^{n/2}, stacked in index order.

    Raises:
        DimensionError: If n exceeds BASIS_MAX_QUBITS
    """
    if n_qubits > BASIS_MAX_QUBITS:
        raise DimensionError(f"Explicit Pauli basis limited to {BASIS_MAX_QUBITS} qubits")
    basis = np.ones((1, 1, 1), dtype=complex)
    for _ in range(n_qubits):
        basis = np.einsum("aij,bkl->abikjl", basis, SINGLE_QUBIT_PAULIS / np.sqrt(2))
        count, dim = basis.shape[0] * 4, basis.shape[2] * 2
        basis = basis.reshape(count, dim, dim)
    basis.flags.writeable = False
    return basis


def pauli_coefficients(stack: np.ndarray, n_qubits: int) -> np.ndarray:
    """
    Pauli coefficients Tr(P_r A) / 2^{n/2} of one operator or a stack of operators.

    Uses a qubit-by-qubit transform, O(n 4^n) per operator.
    """
    array = np.asarray(stack, dtype=complex)
    single = array.ndim == 2
    if single:
        array = array[np.newaxis]
    count = array.shape[0]
    dim = 2 ** n_qubits
    if array.shape[1:] != (dim, dim):
        raise DimensionError(f"Operator shape {array.shape[1:]} does not match {n_qubits} qubit(s)")

    tensor = array.reshape((count,) + (2,) * (2 * n_qubits))
    perm = [0] + [axis for q in range(n_qubits) for axis in (1 + q, 1 + n_qubits + q)]
    tensor = tensor.transpose(perm).reshape((count,) + (4,) * n_qubits)
    for q in range(n_qubits):
        tensor = np.tensordot(tensor, _TO_PAULI, axes=([1 + q], [1]))
        tensor = np.moveaxis(tensor, -1, 1 + q)
    coefficients = tensor.reshape(count, 4 ** n_qubits) / 2 ** (n_qubits / 2)
    return coefficients[0] if single else coefficients


def operators_from_coefficients(coefficients: np.ndarray, n_qubits: int) -> np.ndarray:
    """Inverse of pauli_coefficients"""
    array = np.asarray(coefficients, dtype=complex)
    single = array.ndim == 1
    if single:
        array = array[np.newaxis]
    count = array.shape[0]
    if array.shape[1] != 4 ** n_qubits:
        raise DimensionError(f"Expected {4 ** n_qubits} coefficients, got {array.shape[1]}")

    tensor = array.reshape((count,) + (4,) * n_qubits)
    for q in range(n_qubits):
        tensor = np.tensordot(tensor, _FROM_PAULI, axes=([1 + q], [1]))
        tensor = np.moveaxis(tensor, -1, 1 + q)
    tensor = tensor.reshape((count,) + (2, 2) * n_qubits)
    perm = [0] + [1 + 2 * q for q in range(n_qubits)] + [2 + 2 * q for q in range(n_qubits)]
    dim = 2 ** n_qubits
    operators = tensor.transpose(perm).reshape(count, dim, dim) / 2 ** (n_qubits / 2)
    return operators[0] if single else operators


@dataclass(frozen=True)
class VectorizedOperator:
    """Pauli-basis coefficient vector |A>> of a 2^n x 2^n operator"""

    n_qubits: int
    coefficients: np.ndarray

    def __post_init__(self):
        coefficients = np.asarray(self.coefficients, dtype=complex)
        if coefficients.shape != (4 ** self.n_qubits,):
            raise DimensionError(
                f"Expected {4 ** self.n_qubits} coefficients, got shape {coefficients.shape}"
            )
        object.__setattr__(self, "coefficients", coefficients)

    def to_matrix(self) -> np.ndarray:
        return unvectorize(self)


def vectorize(matrix, n_qubits: int) -> VectorizedOperator:
    """
    Vectorize an operator in the normalized Pauli basis.

    Args:
        matrix: 2^n x 2^n operator
        n_qubits: Number of qubits

    Returns:
        VectorizedOperator with chi_A(r) = Tr(P_r A) / 2^{n/2}

    Raises:
        DimensionError: If the matrix is not 2^n x 2^n
    """
    operator = as_operator(matrix, n_qubits)
    return VectorizedOperator(n_qubits, pauli_coefficients(operator, n_qubits))


def unvectorize(vector: VectorizedOperator) -> np.ndarray:
    """Rebuild the operator sum_r chi(r) P_r / 2^{n/2}"""
    return operators_from_coefficients(vector.coefficients, vector.n_qubits)


@dataclass(frozen=True, eq=False)
class PTM:
    """Pauli transfer matrix of a superoperator on n qubits"""

    n_qubits: int
    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.matrix)
        side = 4 ** self.n_qubits
        if matrix.shape != (side, side):
            raise DimensionError(f"PTM has shape {matrix.shape}, expected ({side}, {side})")
        matrix = matrix.copy()
        matrix.flags.writeable = False
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, n_qubits: int) -> "PTM":
        return cls(n_qubits, np.eye(4 ** n_qubits))

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def is_trace_preserving(self, tol: float = PTM_MATCH_TOL) -> bool:
        """First row equals (1, 0, ..., 0)"""
        first_row = np.zeros(self.matrix.shape[0])
        first_row[0] = 1.0
        return bool(np.max(np.abs(self.matrix[0] - first_row)) <= tol)

    def is_unital(self, tol: float = PTM_MATCH_TOL) -> bool:
        """First column equals (1, 0, ..., 0)^T"""
        first_col = np.zeros(self.matrix.shape[0])
        first_col[0] = 1.0
        return bool(np.max(np.abs(self.matrix[:, 0] - first_col)) <= tol)

    def is_unitary_form(self, tol: float = PTM_MATCH_TOL) -> bool:
        """Trace preserving, unital and with an orthogonal lower-right block"""
        if not (self.is_trace_preserving(tol) and self.is_unital(tol)):
            return False
        block = self.matrix[1:, 1:]
        return bool(np.max(np.abs(block.T @ block - np.eye(block.shape[0])), initial=0.0) <= tol)

    def apply(self, vector: VectorizedOperator) -> VectorizedOperator:
        if vector.n_qubits != self.n_qubits:
            raise DimensionError(f"PTM on {self.n_qubits} qubit(s) applied to {vector.n_qubits}-qubit vector")
        return VectorizedOperator(self.n_qubits, self.matrix @ vector.coefficients)

    def compose(self, other: "PTM") -> "PTM":
        """PTM of self after other"""
        if other.n_qubits != self.n_qubits:
            raise DimensionError("Cannot compose PTMs on different qubit counts")
        return PTM(self.n_qubits, self.matrix @ other.matrix)

    def adjoint(self) -> "PTM":
        return PTM(self.n_qubits, self.matrix.T.conj())

    def kron(self, other: "PTM") -> "PTM":
        """PTM of the tensor product, self on the leading qubits"""
        return PTM(self.n_qubits + other.n_qubits, np.kron(self.matrix, other.matrix))


def superoperator_matrix(
    action: Callable[[np.ndarray], np.ndarray],
    n_qubits: int,
    chunk: int = 256,
) -> np.ndarray:
    """
    Pauli-basis matrix M[r, s] = Tr(P_r action(P_s)) / 2^n of a linear map.

    Args:
        action: Map acting on a stack of operators with shape (k, 2^n, 2^n)
        n_qubits: Number of qubits
        chunk: Number of basis elements pushed through ``action`` at once

    Returns:
        Complex 4^n x 4^n matrix
    """
    if n_qubits > PTM_MAX_QUBITS:
        raise DimensionError(f"PTM-level operations are limited to {PTM_MAX_QUBITS} qubits")
    side = 4 ** n_qubits
    chunk = max(1, min(chunk, 2 ** 22 // side))
    matrix = np.empty((side, side), dtype=complex)
    for start in range(0, side, chunk):
        stop = min(start + chunk, side)
        if n_qubits <= BASIS_MAX_QUBITS:
            inputs = pauli_basis(n_qubits)[start:stop]
        else:
            inputs = operators_from_coefficients(np.eye(side, dtype=complex)[start:stop], n_qubits)
        matrix[:, start:stop] = pauli_coefficients(action(inputs), n_qubits).T
    return ensure_finite(matrix, "superoperator matrix")


def real_ptm(matrix: np.ndarray, what: str = "PTM") -> np.ndarray:
    """Truncate the imaginary residue of a Hermiticity-preserving map's PTM"""
    residue = float(np.max(np.abs(matrix.imag), initial=0.0))
    if residue > IMAG_TOL:
        logger.warning(f"{what} has imaginary residue {residue:.3e}; truncating")
    return np.ascontiguousarray(matrix.real)


def check_trace_preserving(kraus: Sequence[np.ndarray], tol: float = TP_TOL) -> None:
    """
    Raises:
        NotTracePreservingError: If sum_j A_j^dagger A_j differs from I
    """
    dim = kraus[0].shape[0]
    total = sum(dagger(op) @ op for op in kraus)
    deviation = float(np.max(np.abs(total - np.eye(dim))))
    if deviation > tol:
        raise NotTracePreservingError(
            f"Kraus set is not trace preserving (max |sum A^dag A - I| = {deviation:.3e})"
        )


def ptm_from_kraus(kraus: Sequence[np.ndarray], n_qubits: int) -> PTM:
    """
    PTM of the map rho -> sum_j A_j rho A_j^dagger.

    Args:
        kraus: Kraus operators, each 2^n x 2^n
        n_qubits: Number of qubits

    Returns:
        Real PTM

    Raises:
        DimensionError: If a Kraus operator has the wrong shape
        NotTracePreservingError: If the Kraus set is not trace preserving
    """
    if not kraus:
        raise DimensionError("Kraus set is empty")
    operators = np.stack([as_operator(op, n_qubits, "Kraus operator") for op in kraus])
    check_trace_preserving(operators)

    adjoints = operators.conj().transpose(0, 2, 1)

    def action(stack: np.ndarray) -> np.ndarray:
        return np.einsum("kij,bjl,klm->bim", operators, stack, adjoints, optimize=True)

    logger.debug(f"Building PTM from {len(operators)} Kraus operator(s) on {n_qubits} qubit(s)")
    return PTM(n_qubits, real_ptm(superoperator_matrix(action, n_qubits)))


def unitary_ptm(unitary) -> PTM:
    """PTM of A -> U A U^dagger"""
    matrix = np.asarray(unitary, dtype=complex)
    return ptm_from_kraus([matrix], qubit_count(matrix))


def commutator_ptm(generator) -> np.ndarray:
    """
    Pauli-basis matrix of A -> [V, A].

    The result is anti-Hermitian (purely imaginary for Hermitian V).
    """
    matrix = np.asarray(generator, dtype=complex)
    n_qubits = qubit_count(matrix)

    def action(stack: np.ndarray) -> np.ndarray:
        return matrix @ stack - stack @ matrix

    return superoperator_matrix(action, n_qubits)
