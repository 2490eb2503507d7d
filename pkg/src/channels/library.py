"""
Channel constructors

Amplitude damping, depolarizing, Pauli, unitary and Lindbladian channels,
plus closed-form noise coefficients for the amplitude-damping family.
"""
from dataclasses import dataclass
from functools import partial
from typing import List, Optional, Tuple
import logging

import numpy as np
from scipy.linalg import expm
from scipy.optimize import brentq

from ..liouville.constants import PTM_MATCH_TOL, TRACELESS_TOL
from ..liouville.linalg import DimensionError, NumericalError, as_operator, dagger, is_unitary
from ..liouville.pauli import PTM, real_ptm, superoperator_matrix
from .channel import Channel, ChannelError, NoiseCoefficients, tensor_power

logger = logging.getLogger(__name__)

IDENTITY_2 = np.eye(2, dtype=complex)
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)


def identity_channel(n_qubits: int = 1) -> Channel:
    """Identity map on n qubits (a product of single-qubit identities)"""
    single = Channel(1, kraus=[IDENTITY_2], label="id")
    return tensor_power(single, n_qubits)


def _check_probability(name: str, value: float) -> float:
    if not 0.0 <= value <= 1.0:
        raise ChannelError(f"{name} out of [0,1]: {value!r}")
    return float(value)


def amplitude_damping(gamma_down: float) -> Channel:
    """
    Single-qubit amplitude damping toward |0>.

    Args:
        gamma_down: Decay probability in [0, 1]

    Returns:
        Channel with Kraus operators and the closed-form PTM

    Raises:
        ChannelError: If gamma is outside [0, 1]
    """
    gamma = _check_probability("gamma", gamma_down)
    root = np.sqrt(1.0 - gamma)
    kraus = [
        np.array([[1, 0], [0, root]], dtype=complex),
        np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex),
    ]
    ptm = np.array(
        [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, root, 0.0, 0.0],
            [0.0, 0.0, root, 0.0],
            [gamma, 0.0, 0.0, 1.0 - gamma],
        ]
    )
    return Channel(1, kraus=kraus, ptm=PTM(1, ptm), label=f"ad({gamma:g})")


def _depolarize(matrix: np.ndarray, p: float, dim: int) -> np.ndarray:
    return (1.0 - p) * matrix + p * np.trace(matrix) * np.eye(dim) / dim


def _depolarizing_ptm(p: float, n_qubits: int) -> PTM:
    diagonal = np.full(4 ** n_qubits, 1.0 - p)
    diagonal[0] = 1.0
    return PTM(n_qubits, np.diag(diagonal))


def depolarizing(p_eff: float, n_qubits: int = 1, label: Optional[str] = None) -> Channel:
    """
    Global depolarizing channel rho -> (1 - p) rho + p I / 2^n.

    Accepts p up to 1 + 1/(4^n - 1), the range reached by twirled channels.

    Raises:
        ChannelError: If p is out of range
    """
    side = 4 ** n_qubits
    upper = 1.0 + 1.0 / (side - 1)
    if not 0.0 <= p_eff <= upper + PTM_MATCH_TOL:
        raise ChannelError(f"depolarizing p out of [0, {upper:g}]: {p_eff!r}")
    p = float(p_eff)
    dim = 2 ** n_qubits
    action = partial(_depolarize, p=p, dim=dim)
    coefficients = NoiseCoefficients.from_invariants(
        n_qubits,
        nu=(1.0 + (side - 1) * (1.0 - p) ** 2) / side,
        eta=1.0 / dim,
        trace=1.0 + (side - 1) * (1.0 - p),
    )
    shrink = (1.0 - p) ** 2
    return Channel(
        n_qubits,
        ptm=partial(_depolarizing_ptm, p, n_qubits),
        action=action,
        adjoint_action=action,
        coefficients=coefficients,
        eigen_range=(min(1.0, shrink), max(1.0, shrink)),
        label=label or f"depol({p:g})",
    )


def pauli_channel(p_x: float, p_y: float, p_z: float) -> Channel:
    """Single-qubit Pauli channel with error probabilities p_x, p_y, p_z"""
    probabilities = [_check_probability(name, value) for name, value in (("p_x", p_x), ("p_y", p_y), ("p_z", p_z))]
    p_identity = 1.0 - sum(probabilities)
    if p_identity < -PTM_MATCH_TOL:
        raise ChannelError(f"Pauli error probabilities sum to {sum(probabilities)!r} > 1")
    paulis = [
        IDENTITY_2,
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]
    weights = [max(p_identity, 0.0)] + probabilities
    kraus = [np.sqrt(w) * op for w, op in zip(weights, paulis) if w > 0]
    return Channel(1, kraus=kraus, label=f"pauli({p_x:g},{p_y:g},{p_z:g})")


def unitary_channel(unitary, label: str = "unitary") -> Channel:
    """
    Channel rho -> U rho U^dagger.

    Raises:
        ChannelError: If U is not unitary
    """
    matrix = np.asarray(unitary, dtype=complex)
    n_qubits = matrix.shape[0].bit_length() - 1
    if not is_unitary(matrix):
        raise ChannelError("Matrix is not unitary")
    return Channel(n_qubits, kraus=[matrix], label=label)


@dataclass(frozen=True)
class LindbladSpec:
    """Traceless jump operators of a Lindblad dissipator on n qubits"""

    jump_ops: Tuple[np.ndarray, ...]
    n_qubits: int

    def __post_init__(self):
        try:
            operators = tuple(as_operator(op, self.n_qubits, "jump operator") for op in self.jump_ops)
        except DimensionError as e:
            raise ChannelError(str(e)) from e
        for k, op in enumerate(operators):
            if abs(np.trace(op)) >= TRACELESS_TOL:
                raise ChannelError(f"Jump operator {k} is not traceless (Tr L = {np.trace(op):.3e})")
        object.__setattr__(self, "jump_ops", operators)

    @property
    def total_rate(self) -> float:
        """sum_k Tr(L_k^dagger L_k)"""
        return float(sum(np.vdot(op, op).real for op in self.jump_ops))


def dissipator_ptm(jump: np.ndarray, n_qubits: int) -> np.ndarray:
    """
    Pauli-basis matrix of D[L](rho) = L rho L^dagger - {L^dagger L, rho} / 2.

    Raises:
        NumericalError: If Tr D differs from -2^n Tr(L^dagger L)
    """
    jump_dag = dagger(jump)
    decay = jump_dag @ jump

    def action(stack: np.ndarray) -> np.ndarray:
        return jump @ stack @ jump_dag - 0.5 * (decay @ stack + stack @ decay)

    generator = real_ptm(superoperator_matrix(action, n_qubits), "dissipator PTM")
    expected = -(2 ** n_qubits) * float(np.trace(decay).real)
    if abs(np.trace(generator) - expected) > PTM_MATCH_TOL * max(1.0, abs(expected)):
        raise NumericalError(f"Dissipator trace {np.trace(generator):.12g} differs from {expected:.12g}")
    return generator


def lindblad_channel(spec: LindbladSpec, strength: float) -> Channel:
    """
    Channel exp(strength * sum_k D[L_k]).

    The exponential uses scaling-and-squaring Pade (scipy.linalg.expm).

    Raises:
        ChannelError: If strength is negative
    """
    if strength < 0:
        raise ChannelError(f"Lindblad strength must be non-negative, got {strength!r}")
    if not spec.jump_ops:
        raise ChannelError("Lindblad spec has no jump operators")
    generator = sum(dissipator_ptm(op, spec.n_qubits) for op in spec.jump_ops)
    logger.info(f"Exponentiating Lindblad generator with {len(spec.jump_ops)} jump(s), strength {strength:g}")
    ptm = expm(strength * generator)
    return Channel(spec.n_qubits, ptm=PTM(spec.n_qubits, ptm), label=f"lindblad({strength:g})")


def amplitude_damping_coefficients(gamma_down: float, n_qubits: int) -> NoiseCoefficients:
    """Closed-form noise coefficients of amplitude damping on each of n qubits"""
    gamma = _check_probability("gamma", gamma_down)
    nu = ((2.0 + (gamma - 2.0) * gamma) / 2.0) ** n_qubits
    eta = ((1.0 + gamma ** 2) / 2.0) ** n_qubits
    trace = (2.0 - gamma + 2.0 * np.sqrt(1.0 - gamma)) ** n_qubits
    return NoiseCoefficients.from_invariants(n_qubits, nu, eta, trace)


def weak_lindblad_coefficients(spec: LindbladSpec, strength: float) -> NoiseCoefficients:
    """
    First-order predictions for exp(strength * D) at small strength.

    nu ~ 1 - strength sum Tr(L^dagger L) / 2^{n-1}, eta ~ 1/2^n,
    Tr PTM ~ 4^n - strength 2^n sum Tr(L^dagger L), hence r ~ 1 - 2 p_eff.
    """
    n = spec.n_qubits
    rate = strength * spec.total_rate
    return NoiseCoefficients.from_invariants(
        n,
        nu=1.0 - rate / 2 ** (n - 1),
        eta=1.0 / 2 ** n,
        trace=4 ** n - 2 ** n * rate,
    )


def gamma_for_peff(p_eff: float, n_qubits: int) -> float:
    """
    Amplitude-damping strength whose n-fold product has the given p_eff.

    Raises:
        ChannelError: If p_eff is outside [0, 1]
    """
    target = _check_probability("p_eff", p_eff)
    if target == 0.0:
        return 0.0
    if target == 1.0:
        return 1.0

    def residual(gamma: float) -> float:
        return amplitude_damping_coefficients(gamma, n_qubits).p_eff - target

    gamma = float(brentq(residual, 0.0, 1.0, xtol=1e-15))
    logger.debug(f"gamma {gamma:.6g} gives p_eff {target:g} on {n_qubits} qubit(s)")
    return gamma


def local_lindblad_spec(jump: np.ndarray, n_qubits: int) -> LindbladSpec:
    """The same single-qubit jump operator on every qubit of an n-qubit register"""
    jump = np.asarray(jump, dtype=complex)
    operators: List[np.ndarray] = []
    for q in range(n_qubits):
        left = np.eye(2 ** q)
        right = np.eye(2 ** (n_qubits - q - 1))
        operators.append(np.kron(np.kron(left, jump), right))
    return LindbladSpec(tuple(operators), n_qubits)
