"""
Quantum channel type

A Channel is a CPTP map on n qubits known through any of: a Kraus list, a PTM,
a list of tensor factors or a closed-form action. Everything else (PTM, Kraus
products, noise coefficients) is derived lazily and cached; a channel never
changes after construction.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, List, Optional, Sequence, Tuple, Union
import logging

import numpy as np

from ..liouville.constants import PTM_MATCH_TOL, PTM_MAX_QUBITS, STATE_MAX_QUBITS
from ..liouville.linalg import DimensionError, as_operator, ensure_finite
from ..liouville.local_ops import apply_local
from ..liouville.pauli import (
    PTM,
    NotTracePreservingError,
    check_trace_preserving,
    operators_from_coefficients,
    pauli_coefficients,
    ptm_from_kraus,
)
from ..liouville.states import DensityMatrix

logger = logging.getLogger(__name__)

MatrixMap = Callable[[np.ndarray], np.ndarray]


class ChannelError(Exception):
    """Raised when a channel cannot be constructed or used"""
    pass


@dataclass(frozen=True)
class NoiseCoefficients:
    """
    Scalar descriptors of a channel N on n qubits.

    Attributes:
        nu: Tr(N N^dagger) / 4^n of the PTM
        eta: purity of N(I / 2^n)
        r: (4^n nu - 2^n eta) / (4^n - 1)
        p_eff: strength of the Haar-twirled depolarizing channel
        trace: Tr of the PTM
        n_qubits: number of qubits
    """

    nu: float
    eta: float
    r: float
    p_eff: float
    trace: float
    n_qubits: int

    @classmethod
    def from_invariants(cls, n_qubits: int, nu: float, eta: float, trace: float) -> "NoiseCoefficients":
        """Derive r and p_eff from nu, eta and the PTM trace"""
        side = 4 ** n_qubits
        r = (side * nu - 2 ** n_qubits * eta) / (side - 1)
        p_eff = 1.0 - (trace - 1.0) / (side - 1)
        return cls(nu=float(nu), eta=float(eta), r=float(r), p_eff=float(p_eff),
                   trace=float(trace), n_qubits=n_qubits)

    @property
    def unital(self) -> bool:
        return abs(self.eta - 2.0 ** -self.n_qubits) <= PTM_MATCH_TOL

    def as_dict(self) -> dict:
        return {"nu": self.nu, "eta": self.eta, "r": self.r, "p_eff": self.p_eff}


class Channel:
    """CPTP map on n qubits"""

    def __init__(
        self,
        n_qubits: int,
        kraus: Optional[Sequence[np.ndarray]] = None,
        ptm: Union[PTM, Callable[[], PTM], None] = None,
        factors: Optional[Sequence["Channel"]] = None,
        action: Optional[MatrixMap] = None,
        adjoint_action: Optional[MatrixMap] = None,
        coefficients: Optional[NoiseCoefficients] = None,
        eigen_range: Optional[Tuple[float, float]] = None,
        label: str = "",
    ):
        """
        Initialize a channel.

        Args:
            n_qubits: Number of qubits
            kraus: Kraus operators, each 2^n x 2^n
            ptm: PTM, or a zero-argument factory building it on demand
            factors: Channels whose tensor product (first factor on qubit 0) is this channel
            action: Closed-form map on 2^n x 2^n matrices
            adjoint_action: Closed-form Heisenberg-picture map (required with ``action``)
            coefficients: Known noise coefficients
            eigen_range: Known (lambda_min, lambda_max) of PTM^dagger PTM
            label: Free text

        Raises:
            ChannelError: If no description is given, sizes disagree or the
                map is not trace preserving
        """
        if n_qubits < 1 or n_qubits > STATE_MAX_QUBITS:
            raise ChannelError(f"Channels support 1..{STATE_MAX_QUBITS} qubits, got {n_qubits}")
        if kraus is None and ptm is None and not factors and action is None:
            raise ChannelError("A channel needs Kraus operators, a PTM, factors or an action")
        if action is not None and adjoint_action is None:
            raise ChannelError("A closed-form action needs its adjoint")

        self.n_qubits = n_qubits
        self.label = label
        self._action = action
        self._adjoint_action = adjoint_action
        self._factors: Tuple[Channel, ...] = tuple(factors or ())
        self._coefficients = coefficients
        self._eigen_range = eigen_range
        self._ptm_factory: Optional[Callable[[], PTM]] = None
        self._kraus: Optional[Tuple[np.ndarray, ...]] = None

        if self._factors:
            total = sum(f.n_qubits for f in self._factors)
            if total != n_qubits:
                raise ChannelError(f"Factors act on {total} qubit(s), channel on {n_qubits}")

        if kraus is not None:
            self._kraus = self._validated_kraus(kraus)

        if isinstance(ptm, PTM):
            self._set_ptm(ptm)
        elif ptm is not None:
            self._ptm_factory = ptm

        logger.debug(f"Channel initialized: {self.label or 'unnamed'} on {n_qubits} qubit(s)")

    def _validated_kraus(self, kraus: Sequence[np.ndarray]) -> Tuple[np.ndarray, ...]:
        try:
            operators = tuple(as_operator(op, self.n_qubits, "Kraus operator") for op in kraus)
        except DimensionError as e:
            raise ChannelError(str(e)) from e
        if not operators:
            raise ChannelError("Kraus set is empty")
        try:
            check_trace_preserving(operators)
        except NotTracePreservingError as e:
            raise ChannelError(str(e)) from e
        for op in operators:
            op.flags.writeable = False
        return operators

    def _set_ptm(self, ptm: PTM) -> None:
        if ptm.n_qubits != self.n_qubits:
            raise ChannelError(f"PTM acts on {ptm.n_qubits} qubit(s), channel on {self.n_qubits}")
        if not ptm.is_trace_preserving():
            raise ChannelError("PTM first row is not (1, 0, ..., 0); map is not trace preserving")
        if self._kraus is not None:
            reference = ptm_from_kraus(self._kraus, self.n_qubits).matrix
            mismatch = float(np.max(np.abs(reference - ptm.matrix)))
            if mismatch > PTM_MATCH_TOL:
                raise ChannelError(f"Kraus operators and PTM disagree (max deviation {mismatch:.3e})")
        self.__dict__["ptm"] = ptm

    def __repr__(self) -> str:
        return f"Channel(label={self.label!r}, n_qubits={self.n_qubits})"

    @property
    def factors(self) -> Tuple["Channel", ...]:
        return self._factors

    @property
    def is_product(self) -> bool:
        return len(self._factors) > 1

    @property
    def has_closed_form(self) -> bool:
        return self._action is not None

    @cached_property
    def kraus(self) -> Optional[Tuple[np.ndarray, ...]]:
        """Kraus operators, or None when the channel has no stored Kraus form"""
        if self._kraus is not None:
            return self._kraus
        if self._factors and all(f.kraus is not None for f in self._factors):
            operators: List[np.ndarray] = [np.ones((1, 1), dtype=complex)]
            for factor in self._factors:
                operators = [np.kron(a, b) for a in operators for b in factor.kraus]
            return tuple(operators)
        return None

    @cached_property
    def ptm(self) -> PTM:
        """Dense PTM, built on first access"""
        if self.n_qubits > PTM_MAX_QUBITS:
            raise ChannelError(
                f"PTM of a {self.n_qubits}-qubit channel exceeds the {PTM_MAX_QUBITS}-qubit cap"
            )
        logger.debug(f"Materializing PTM of {self.label or 'unnamed channel'}")
        if self._ptm_factory is not None:
            ptm = self._ptm_factory()
        elif self._factors:
            ptm = self._factors[0].ptm
            for factor in self._factors[1:]:
                ptm = ptm.kron(factor.ptm)
        elif self._kraus is not None:
            ptm = ptm_from_kraus(self._kraus, self.n_qubits)
        else:
            identity = np.eye(4 ** self.n_qubits, dtype=complex)
            images = np.stack([self._action(op) for op in operators_from_coefficients(identity, self.n_qubits)])
            ptm = PTM(self.n_qubits, pauli_coefficients(images, self.n_qubits).T.real)
        return ptm

    @cached_property
    def coefficients(self) -> NoiseCoefficients:
        """Noise coefficients; product channels combine their factors' values"""
        if self._coefficients is not None:
            return self._coefficients
        if self._factors:
            nu = eta = trace = 1.0
            for factor in self._factors:
                c = factor.coefficients
                nu, eta, trace = nu * c.nu, eta * c.eta, trace * c.trace
            return NoiseCoefficients.from_invariants(self.n_qubits, nu, eta, trace)

        matrix = self.ptm.matrix
        side = matrix.shape[0]
        nu = float(np.sum(matrix ** 2)) / side
        eta = float(np.sum(matrix[:, 0] ** 2)) / 2 ** self.n_qubits
        return NoiseCoefficients.from_invariants(self.n_qubits, nu, eta, float(np.trace(matrix)))

    @cached_property
    def eigen_range(self) -> Tuple[float, float]:
        """(lambda_min, lambda_max) of PTM^dagger PTM"""
        if self._eigen_range is not None:
            return self._eigen_range
        if self._factors:
            low = high = 1.0
            for factor in self._factors:
                f_low, f_high = factor.eigen_range
                low, high = low * f_low, high * f_high
            return low, high
        matrix = self.ptm.matrix
        values = np.linalg.eigvalsh(matrix.T @ matrix)
        return max(float(values[0]), 0.0), float(values[-1])


def _local_kraus_layout(ch: Channel):
    """(start, kraus) per factor when every factor has a Kraus form, else None"""
    layout = []
    start = 0
    for factor in ch.factors:
        if factor.kraus is None or factor.n_qubits > 4:
            return None
        layout.append((start, factor.kraus))
        start += factor.n_qubits
    return layout


def apply_matrix(ch: Channel, matrix: np.ndarray, adjoint: bool = False) -> np.ndarray:
    """
    Apply the channel (or its adjoint) to a raw 2^n x 2^n matrix.

    Dispatch order: closed-form action, local factor action, Kraus sum, PTM.
    """
    matrix = np.asarray(matrix, dtype=complex)
    dim = 2 ** ch.n_qubits
    if matrix.shape != (dim, dim):
        raise DimensionError(f"Channel on {ch.n_qubits} qubit(s) applied to matrix of shape {matrix.shape}")

    if ch.has_closed_form:
        result = ch._adjoint_action(matrix) if adjoint else ch._action(matrix)
    elif ch.factors and (layout := _local_kraus_layout(ch)) is not None:
        result = matrix
        for start, kraus in layout:
            result = apply_local(result, kraus, start, ch.n_qubits, adjoint=adjoint)
    elif ch.kraus is not None and len(ch.kraus) <= dim:
        if adjoint:
            result = sum(op.conj().T @ matrix @ op for op in ch.kraus)
        else:
            result = sum(op @ matrix @ op.conj().T for op in ch.kraus)
    else:
        ptm = ch.ptm.matrix.T if adjoint else ch.ptm.matrix
        coefficients = pauli_coefficients(matrix, ch.n_qubits)
        result = operators_from_coefficients(ptm @ coefficients, ch.n_qubits)
    return ensure_finite(result, f"output of {ch.label or 'channel'}")


def apply(ch: Channel, rho: DensityMatrix) -> DensityMatrix:
    """
    Apply the channel to a density matrix.

    Raises:
        DimensionError: If qubit counts differ
        NumericalError: If the output is not a valid density matrix
    """
    if rho.n_qubits != ch.n_qubits:
        raise DimensionError(f"Channel on {ch.n_qubits} qubit(s) applied to {rho.n_qubits}-qubit state")
    return DensityMatrix(ch.n_qubits, apply_matrix(ch, rho.matrix))


def apply_adjoint(ch: Channel, observable) -> np.ndarray:
    """Heisenberg-picture action N^dagger(O)"""
    return apply_matrix(ch, observable, adjoint=True)


def tensor(channels: Sequence[Channel], label: Optional[str] = None) -> Channel:
    """
    Tensor product, first channel on qubit 0.

    Raises:
        ChannelError: If the product exceeds the state-level qubit cap
    """
    if not channels:
        raise ChannelError("Tensor product of no channels")
    if len(channels) == 1:
        return channels[0]
    factors: List[Channel] = []
    for ch in channels:
        factors.extend(ch.factors if ch.is_product else (ch,))
    n_qubits = sum(f.n_qubits for f in factors)
    if n_qubits > STATE_MAX_QUBITS:
        raise ChannelError(f"Tensor product on {n_qubits} qubits exceeds the {STATE_MAX_QUBITS}-qubit cap")
    if label is None:
        label = " ⊗ ".join(ch.label or "?" for ch in channels)
    return Channel(n_qubits, factors=factors, label=label)


def tensor_power(ch: Channel, count: int) -> Channel:
    """n-fold tensor product of a channel with itself"""
    if count < 1:
        raise ChannelError(f"Tensor power needs a positive exponent, got {count}")
    if count == 1:
        return ch
    return tensor([ch] * count, label=f"{ch.label}^{count}")

