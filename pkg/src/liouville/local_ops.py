"""
Local operator actions on density matrices

Applies operators that act on a contiguous block of qubits by reshaping the
density matrix into a tensor, so 2^n x 2^n operators are never formed.
"""
from typing import Sequence

import numpy as np

from .linalg import DimensionError


def _block_shape(n_qubits: int, start: int, width: int):
    if start < 0 or width < 1 or start + width > n_qubits:
        raise DimensionError(
            f"Block of {width} qubit(s) at {start} does not fit into {n_qubits} qubit(s)"
        )
    return 2 ** start, 2 ** width, 2 ** (n_qubits - start - width)


def apply_local(
    matrix: np.ndarray,
    operators: Sequence[np.ndarray],
    start: int,
    n_qubits: int,
    adjoint: bool = False,
) -> np.ndarray:
    """
    Apply sum_k A_k rho A_k^dagger with each A_k acting on qubits start..start+w-1.

    Args:
        matrix: 2^n x 2^n operator
        operators: Kraus operators (a single unitary is a one-element list)
        start: First qubit of the block
        n_qubits: Total number of qubits
        adjoint: Apply the Heisenberg-picture map sum_k A_k^dagger O A_k instead

    Returns:
        New 2^n x 2^n array
    """
    width = int(np.asarray(operators[0]).shape[0]).bit_length() - 1
    a, b, c = _block_shape(n_qubits, start, width)
    tensor = np.asarray(matrix).reshape(a, b, c, a, b, c)
    result = np.zeros_like(tensor, dtype=complex)
    for op in operators:
        op = np.asarray(op, dtype=complex)
        if adjoint:
            op = op.conj().T
        result += np.einsum("xb,abcdef,ye->axcdyf", op, tensor, op.conj(), optimize=True)
    dim = 2 ** n_qubits
    return result.reshape(dim, dim)


def apply_diagonal_phase(matrix: np.ndarray, phases: np.ndarray) -> np.ndarray:
    """rho -> D rho D^dagger for D = diag(phases)"""
    return matrix * np.outer(phases, phases.conj())


def apply_unitary_each_qubit(matrix: np.ndarray, unitary: np.ndarray, n_qubits: int) -> np.ndarray:
    """Apply the same single-qubit unitary to every qubit"""
    for q in range(n_qubits):
        matrix = apply_local(matrix, [unitary], q, n_qubits)
    return matrix


def apply_gate_to_statevector(psi: np.ndarray, gate: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """Apply a single-qubit gate to an amplitude vector"""
    a, _, c = _block_shape(n_qubits, qubit, 1)
    tensor = psi.reshape(a, 2, c)
    return np.einsum("xb,abc->axc", gate, tensor).reshape(-1)
