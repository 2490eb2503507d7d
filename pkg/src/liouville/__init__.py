"""Dense linear algebra, Pauli basis, states and sampling"""
from .linalg import DimensionError, NumericalError
from .pauli import (
    PTM,
    NotTracePreservingError,
    PauliIndex,
    VectorizedOperator,
    commutator_ptm,
    pauli_basis,
    pauli_op,
    ptm_from_kraus,
    unitary_ptm,
    unvectorize,
    vectorize,
)
from .sampling import haar_unitary, run_samples, sample_streams
from .states import (
    DensityMatrix,
    fidelity,
    purity,
    random_density_matrix,
    random_pure_state,
    relative_entropy,
    schatten_norm,
    trace_distance,
)

__all__ = [
    'DimensionError',
    'NumericalError',
    'NotTracePreservingError',
    'PTM',
    'PauliIndex',
    'VectorizedOperator',
    'DensityMatrix',
    'commutator_ptm',
    'pauli_basis',
    'pauli_op',
    'ptm_from_kraus',
    'unitary_ptm',
    'unvectorize',
    'vectorize',
    'haar_unitary',
    'run_samples',
    'sample_streams',
    'fidelity',
    'purity',
    'random_density_matrix',
    'random_pure_state',
    'relative_entropy',
    'schatten_norm',
    'trace_distance',
]
