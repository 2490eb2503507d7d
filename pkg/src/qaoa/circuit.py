"""
Noisy QAOA circuits

Each layer applies the problem phase exp(-i gamma H_P), the mixer
exp(-i alpha sum_j X_j) and then the noise channel, starting from |+><+|^n.
H_P is diagonal, so the phase is an elementwise multiply on the density
matrix; the mixer acts qubit by qubit. No 2^n x 2^n unitary is formed.
"""
from dataclasses import dataclass, field, replace
from typing import Callable, List, Optional, Tuple
import logging

import numpy as np

from ..channels.channel import Channel, apply_matrix
from ..liouville.constants import FD_STEP
from ..liouville.local_ops import (
    apply_diagonal_phase,
    apply_gate_to_statevector,
    apply_local,
    apply_unitary_each_qubit,
)
from ..liouville.pauli import SINGLE_QUBIT_PAULIS
from ..liouville.states import DensityMatrix, trace_distance
from .graphs import Graph

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

# exact-zero comparisons for the universality conditions
_CONDITION_TOL = 1e-12


class QaoaError(Exception):
    """Raised when a QAOA instance, its parameters or its specification are invalid"""
    pass


@dataclass(frozen=True, eq=False)
class QaoaParams:
    """Mixer angles alphas and problem angles gammas, one per layer, stored in [0, 2 pi)"""

    alphas: np.ndarray
    gammas: np.ndarray

    def __post_init__(self):
        alphas = np.mod(np.asarray(self.alphas, dtype=float).reshape(-1), TWO_PI)
        gammas = np.mod(np.asarray(self.gammas, dtype=float).reshape(-1), TWO_PI)
        if alphas.size != gammas.size:
            raise QaoaError(f"alphas has {alphas.size} entries, gammas has {gammas.size}")
        alphas.flags.writeable = False
        gammas.flags.writeable = False
        object.__setattr__(self, "alphas", alphas)
        object.__setattr__(self, "gammas", gammas)

    @property
    def layers(self) -> int:
        return int(self.alphas.size)

    @classmethod
    def zeros(cls, layers: int) -> "QaoaParams":
        return cls(np.zeros(layers), np.zeros(layers))

    @classmethod
    def random(cls, layers: int, rng: np.random.Generator) -> "QaoaParams":
        """Angles drawn uniformly from [0, 2 pi), alphas first"""
        alphas = rng.uniform(0.0, TWO_PI, size=layers)
        gammas = rng.uniform(0.0, TWO_PI, size=layers)
        return cls(alphas, gammas)

    def shifted(self, which: "ParameterId", delta: float) -> "QaoaParams":
        """Copy with one angle moved by delta (wrapped back into [0, 2 pi))"""
        alphas, gammas = which.shift(self.alphas, self.gammas, delta)
        return QaoaParams(alphas, gammas)


@dataclass(frozen=True)
class ParameterId:
    """
    One circuit angle: kind "alpha" or "gamma" and a 0-based layer index.

    Negative layers count from the end, so ParameterId("alpha", -1) is the last mixer angle.
    """

    kind: str
    layer: int

    def __post_init__(self):
        if self.kind not in ("alpha", "gamma"):
            raise QaoaError(f"Unknown parameter kind {self.kind!r}; expected 'alpha' or 'gamma'")

    def index(self, layers: int) -> int:
        position = self.layer + layers if self.layer < 0 else self.layer
        if not 0 <= position < layers:
            raise QaoaError(f"Parameter {self} does not exist in a {layers}-layer circuit")
        return position

    def shift(self, alphas: np.ndarray, gammas: np.ndarray, delta: float) -> Tuple[np.ndarray, np.ndarray]:
        """Raw (unwrapped) angle arrays with this parameter moved by delta"""
        alphas = np.array(alphas, dtype=float)
        gammas = np.array(gammas, dtype=float)
        target = alphas if self.kind == "alpha" else gammas
        target[self.index(target.size)] += delta
        return alphas, gammas


FIRST_GAMMA = ParameterId("gamma", 0)
LAST_ALPHA = ParameterId("alpha", -1)


@dataclass(frozen=True, eq=False)
class QaoaInstance:
    """
    QAOA circuit: diagonal problem Hamiltonian, channel after every layer, depth L.

    ``graph`` is None for Hamiltonians that do not come from a graph.
    """

    diagonal: np.ndarray
    channel: Channel
    layers: int
    graph: Optional[Graph] = None
    label: str = field(default="")

    def __post_init__(self):
        diagonal = np.asarray(self.diagonal, dtype=float).reshape(-1)
        n_qubits = diagonal.size.bit_length() - 1
        if diagonal.size < 2 or 2 ** n_qubits != diagonal.size:
            raise QaoaError(f"Problem diagonal has length {diagonal.size}, not a power of two")
        if self.channel.n_qubits != n_qubits:
            raise QaoaError(f"Channel acts on {self.channel.n_qubits} qubit(s), circuit on {n_qubits}")
        if self.layers < 0:
            raise QaoaError(f"Number of layers must be non-negative, got {self.layers}")
        diagonal.flags.writeable = False
        object.__setattr__(self, "diagonal", diagonal)

    @property
    def n_qubits(self) -> int:
        return self.diagonal.size.bit_length() - 1

    def with_layers(self, layers: int) -> "QaoaInstance":
        return replace(self, layers=layers)


def z_signs(n_qubits: int) -> np.ndarray:
    """(2^n, n) array of Z eigenvalues +-1, qubit 0 as most significant bit"""
    states = np.arange(2 ** n_qubits)[:, None]
    bits = (states >> (n_qubits - 1 - np.arange(n_qubits))) & 1
    return 1 - 2 * bits


def problem_diagonal(graph: Graph) -> np.ndarray:
    """Diagonal of H_P = sum over edges Z_u Z_v (integers in [-|E|, |E|])"""
    signs = z_signs(graph.n_vertices)
    diagonal = np.zeros(2 ** graph.n_vertices, dtype=np.int64)
    for u, v in graph.edges:
        diagonal += signs[:, u] * signs[:, v]
    return diagonal


def maxcut_instance(graph: Graph, channel: Channel, layers: int) -> QaoaInstance:
    """MaxCut QAOA instance on a graph"""
    if graph.n_vertices < 2:
        raise QaoaError("MaxCut needs at least two vertices")
    instance = QaoaInstance(problem_diagonal(graph), channel, layers, graph=graph, label=graph.label)
    logger.info(
        f"MaxCut instance on {graph.label or 'graph'}: {graph.n_vertices} qubits, {graph.n_edges} edges, "
        f"L={layers}, channel={channel.label}"
    )
    return instance


@dataclass(frozen=True)
class UniversalQaoaSpec:
    """
    Weighted line Hamiltonian
    H_P = sum_j wA Z_2j + wB Z_2j+1 + gAB Z_2j Z_2j+1 + gBA Z_2j+1 Z_2j+2
    on an odd number of qubits.
    """

    n_qubits: int
    omega_a: float = 0.45
    omega_b: float = 0.54
    gamma_ab: float = 0.22
    gamma_ba: float = 0.52

    def __post_init__(self):
        if self.n_qubits < 3 or self.n_qubits % 2 == 0:
            raise QaoaError(f"Universal QAOA needs an odd number of qubits >= 3, got {self.n_qubits}")
        conditions = [
            ("omega_A^2 != omega_B^2", self.omega_a ** 2 - self.omega_b ** 2),
            ("gamma_AB^2 != gamma_BA^2", self.gamma_ab ** 2 - self.gamma_ba ** 2),
            ("gamma_AB^2 - 4 gamma_BA^2 != 0", self.gamma_ab ** 2 - 4.0 * self.gamma_ba ** 2),
            ("gamma_AB != 0", self.gamma_ab),
            ("gamma_BA != 0", self.gamma_ba),
        ]
        for name, value in conditions:
            if abs(value) <= _CONDITION_TOL:
                raise QaoaError(f"Universality condition violated: {name}")


def line_diagonal(spec: UniversalQaoaSpec) -> np.ndarray:
    """Diagonal of the weighted line Hamiltonian"""
    n = spec.n_qubits
    signs = z_signs(n).astype(float)
    diagonal = np.zeros(2 ** n)
    for q in range(n):
        diagonal += (spec.omega_a if q % 2 == 0 else spec.omega_b) * signs[:, q]
    for q in range(n - 1):
        diagonal += (spec.gamma_ab if q % 2 == 0 else spec.gamma_ba) * signs[:, q] * signs[:, q + 1]
    return diagonal


def universal_qaoa_instance(spec: UniversalQaoaSpec, channel: Channel, layers: int) -> QaoaInstance:
    """QAOA instance with the universal line Hamiltonian and the usual X mixer"""
    return QaoaInstance(line_diagonal(spec), channel, layers, label=f"universal({spec.n_qubits})")


def mixer_gate(alpha: float) -> np.ndarray:
    """exp(-i alpha X)"""
    return np.array(
        [[np.cos(alpha), -1j * np.sin(alpha)], [-1j * np.sin(alpha), np.cos(alpha)]],
        dtype=complex,
    )


def apply_layer(
    matrix: np.ndarray,
    diagonal: np.ndarray,
    alpha: float,
    gamma: float,
    channel: Optional[Channel],
) -> np.ndarray:
    """One layer: problem phase, mixer and (if given) the channel"""
    n_qubits = diagonal.size.bit_length() - 1
    matrix = apply_diagonal_phase(matrix, np.exp(-1j * gamma * diagonal))
    matrix = apply_unitary_each_qubit(matrix, mixer_gate(alpha), n_qubits)
    if channel is not None:
        matrix = apply_matrix(channel, matrix)
    return matrix


def invert_circuit(matrix: np.ndarray, diagonal: np.ndarray, alphas, gammas) -> np.ndarray:
    """Apply the inverse of the noiseless circuit, U^dagger rho U"""
    n_qubits = diagonal.size.bit_length() - 1
    for alpha, gamma in zip(reversed(alphas), reversed(gammas)):
        matrix = apply_unitary_each_qubit(matrix, mixer_gate(-alpha), n_qubits)
        matrix = apply_diagonal_phase(matrix, np.exp(1j * gamma * diagonal))
    return matrix


@dataclass(frozen=True)
class PauliRotation:
    """exp(-i theta P) on one qubit, inserted after the mixer of a layer (before the noise)"""

    layer: int
    qubit: int
    pauli: str = "Z"
    theta: float = 0.0

    def __post_init__(self):
        if self.pauli not in ("X", "Y", "Z"):
            raise QaoaError(f"Rotation Pauli must be X, Y or Z, got {self.pauli!r}")

    def gate(self, shift: float = 0.0) -> np.ndarray:
        angle = self.theta + shift
        pauli = SINGLE_QUBIT_PAULIS["IXYZ".index(self.pauli)]
        return np.cos(angle) * np.eye(2) - 1j * np.sin(angle) * pauli


def evolve(
    inst: QaoaInstance,
    alphas,
    gammas,
    record: Optional[Callable[[np.ndarray], float]] = None,
    rotation: Optional[PauliRotation] = None,
    rotation_shift: float = 0.0,
    stop_after: Optional[int] = None,
) -> Tuple[np.ndarray, List[float]]:
    """
    Evolve |+><+|^n through the layers given by the raw angle arrays.

    Args:
        inst: Instance (its ``layers`` field is not used)
        alphas, gammas: Angles, one per layer
        record: Called on the initial matrix and after every layer
        rotation: Extra Pauli rotation inserted into one layer
        rotation_shift: Added to the rotation angle
        stop_after: Stop after this many layers

    Returns:
        (final matrix, recorded values)
    """
    n_qubits = inst.n_qubits
    matrix = DensityMatrix.plus_state(n_qubits).matrix.copy()
    values: List[float] = [record(matrix)] if record else []
    depth = len(alphas) if stop_after is None else min(stop_after, len(alphas))
    for layer in range(depth):
        matrix = apply_layer(matrix, inst.diagonal, alphas[layer], gammas[layer], None)
        if rotation is not None and rotation.layer == layer:
            matrix = apply_local(matrix, [rotation.gate(rotation_shift)], rotation.qubit, n_qubits)
        matrix = apply_matrix(inst.channel, matrix)
        if record:
            values.append(record(matrix))
    return matrix, values


def _check_params(inst: QaoaInstance, params: QaoaParams) -> None:
    if params.layers != inst.layers:
        raise QaoaError(f"Parameters have {params.layers} layer(s), instance has {inst.layers}")


def qaoa_state(inst: QaoaInstance, params: QaoaParams) -> DensityMatrix:
    """
    Output state of the noisy circuit.

    Raises:
        QaoaError: If the parameter count does not match the depth
    """
    _check_params(inst, params)
    matrix, _ = evolve(inst, params.alphas, params.gammas)
    return DensityMatrix(inst.n_qubits, matrix)


def statevector_state(inst: QaoaInstance, params: QaoaParams) -> DensityMatrix:
    """
    Noiseless output state from amplitude-vector simulation.

    The channel is ignored. Used as an independent reference for qaoa_state.
    """
    _check_params(inst, params)
    n_qubits = inst.n_qubits
    psi = np.full(2 ** n_qubits, 2.0 ** (-n_qubits / 2), dtype=complex)
    for alpha, gamma in zip(params.alphas, params.gammas):
        psi = psi * np.exp(-1j * gamma * inst.diagonal)
        gate = mixer_gate(alpha)
        for q in range(n_qubits):
            psi = apply_gate_to_statevector(psi, gate, q, n_qubits)
    return DensityMatrix.from_statevector(psi)


def expectation(diagonal: np.ndarray, matrix: np.ndarray) -> float:
    """Tr(H rho) for diagonal H"""
    return float(np.dot(diagonal, np.diagonal(matrix).real))


def cost(inst: QaoaInstance, params: QaoaParams) -> float:
    """C = Tr(H_P rho(alpha, gamma))"""
    _check_params(inst, params)
    matrix, _ = evolve(inst, params.alphas, params.gammas)
    return expectation(inst.diagonal, matrix)


def _raw_cost(inst: QaoaInstance, alphas, gammas) -> float:
    matrix, _ = evolve(inst, alphas, gammas)
    return expectation(inst.diagonal, matrix)


def gradient_fd(
    inst: QaoaInstance,
    params: QaoaParams,
    which: ParameterId = FIRST_GAMMA,
    step: float = FD_STEP,
) -> float:
    """
    Central finite-difference derivative of the cost.

    Args:
        inst: Instance
        params: Evaluation point
        which: Parameter (FIRST_GAMMA, LAST_ALPHA or any ParameterId)
        step: Step h

    Returns:
        (C(+h) - C(-h)) / 2h
    """
    _check_params(inst, params)
    if step <= 0:
        raise QaoaError(f"Finite-difference step must be positive, got {step}")
    plus = _raw_cost(inst, *which.shift(params.alphas, params.gammas, step))
    minus = _raw_cost(inst, *which.shift(params.alphas, params.gammas, -step))
    return (plus - minus) / (2.0 * step)


@dataclass(frozen=True)
class ShiftRuleCheck:
    """Shift-rule derivative of an inserted Pauli rotation and its trace-distance bounds"""

    shift_rule: float
    finite_difference: float
    final_bound: float
    layer_bound: float

    @property
    def bound_holds(self) -> bool:
        slack = 1e-10 * max(1.0, self.final_bound)
        return abs(self.shift_rule) <= self.final_bound + slack and self.final_bound <= self.layer_bound + slack


def shift_rule_check(
    inst: QaoaInstance,
    params: QaoaParams,
    rotation: PauliRotation,
    step: float = FD_STEP,
) -> ShiftRuleCheck:
    """
    Derivative with respect to the angle of an inserted Pauli rotation.

    The shift rule gives dC/dtheta = C(theta + pi/4) - C(theta - pi/4). The check
    also evaluates 2 ||H_P||_inf T(rho_f+, rho_f-) at the circuit output and at
    the layer holding the rotation; the first bounds |dC/dtheta| and is bounded
    by the second since channels contract the trace distance.
    """
    _check_params(inst, params)
    if not 0 <= rotation.layer < inst.layers:
        raise QaoaError(f"Rotation layer {rotation.layer} outside 0..{inst.layers - 1}")
    if not 0 <= rotation.qubit < inst.n_qubits:
        raise QaoaError(f"Rotation qubit {rotation.qubit} outside 0..{inst.n_qubits - 1}")

    def output(shift: float, stop_after: Optional[int] = None) -> np.ndarray:
        return evolve(inst, params.alphas, params.gammas, rotation=rotation,
                      rotation_shift=shift, stop_after=stop_after)[0]

    quarter = np.pi / 4.0
    final_plus, final_minus = output(quarter), output(-quarter)
    layer_plus = output(quarter, rotation.layer + 1)
    layer_minus = output(-quarter, rotation.layer + 1)
    norm = float(np.max(np.abs(inst.diagonal)))

    shift_rule = expectation(inst.diagonal, final_plus) - expectation(inst.diagonal, final_minus)
    finite_difference = (
        expectation(inst.diagonal, output(step)) - expectation(inst.diagonal, output(-step))
    ) / (2.0 * step)
    return ShiftRuleCheck(
        shift_rule=shift_rule,
        finite_difference=finite_difference,
        final_bound=2.0 * norm * trace_distance(final_plus, final_minus),
        layer_bound=2.0 * norm * trace_distance(layer_plus, layer_minus),
    )
