"""Noisy QAOA for MaxCut and the universal line Hamiltonian"""
from .circuit import (
    FIRST_GAMMA,
    LAST_ALPHA,
    ParameterId,
    PauliRotation,
    QaoaError,
    QaoaInstance,
    QaoaParams,
    UniversalQaoaSpec,
    cost,
    gradient_fd,
    line_diagonal,
    maxcut_instance,
    problem_diagonal,
    qaoa_state,
    shift_rule_check,
    statevector_state,
    universal_qaoa_instance,
)
from .graphs import Graph, GraphError, complete_graph, erdos_renyi, random_regular_graph, read_graph, write_graph
from .statistics import derivative_statistics, haar_model_infidelity, purity_statistics, twirl_fidelity

__all__ = [
    'Graph',
    'GraphError',
    'QaoaError',
    'QaoaParams',
    'QaoaInstance',
    'ParameterId',
    'PauliRotation',
    'UniversalQaoaSpec',
    'FIRST_GAMMA',
    'LAST_ALPHA',
    'random_regular_graph',
    'erdos_renyi',
    'complete_graph',
    'read_graph',
    'write_graph',
    'problem_diagonal',
    'line_diagonal',
    'maxcut_instance',
    'universal_qaoa_instance',
    'qaoa_state',
    'statevector_state',
    'cost',
    'gradient_fd',
    'shift_rule_check',
    'purity_statistics',
    'derivative_statistics',
    'twirl_fidelity',
    'haar_model_infidelity',
]
