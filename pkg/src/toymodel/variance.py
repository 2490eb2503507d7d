"""
Gradient-variance formula of the toy model

Var(dC/dtheta_lk) = G_lk * r^(L - l) / (4^n - 1) * Q, with Q the squared norm of
the traceless part of N^dagger(O). G_lk combines the beta recursion with
averages over the sub-layer that precedes the derivative point.

The Monte-Carlo harness builds each layer as W+ exp(-i theta V) W with W and W+
Haar-resampled per sample, so every layer is exactly Haar distributed while
theta stays differentiable.
"""
from dataclasses import dataclass
from functools import partial
from typing import Callable, List, Optional, Sequence
import logging

import numpy as np

from ..channels.channel import Channel, apply_adjoint, apply_matrix
from ..liouville.constants import FD_STEP, HERMITIAN_TOL, TRACELESS_TOL
from ..liouville.linalg import dagger, is_hermitian
from ..liouville.pauli import commutator_ptm, pauli_coefficients
from ..liouville.sampling import derive_seed, haar_unitary, run_samples
from ..liouville.states import DensityMatrix, StateLike, purity
from ..liouville.stats import LogLinearFit, fit_log_linear, variance_stderr
from .simulation import ToyModelError

logger = logging.getLogger(__name__)

SubLayer = Callable[[np.random.Generator], np.ndarray]

MAX_COEFFICIENT_QUBITS = 4
MAX_HARNESS_QUBITS = 3


@dataclass(frozen=True)
class VarianceCoefficients:
    """
    Coefficients entering G_lk.

    alphas/betas hold j = 1..max(l - 1, 1). rho_minus_avg is the l = 1 average
    E ||[V-, rho_in]||^2, used because no noise precedes the first layer.
    """

    n_qubits: int
    ell: int
    alphas: np.ndarray
    betas: np.ndarray
    eta_minus_avg: float
    nu_minus_avg: float
    rho_minus_avg: float
    G_lk: float
    G_stderr: float = 0.0
    eta_minus_stderr: float = 0.0
    nu_minus_stderr: float = 0.0


def _check_generator(generator) -> np.ndarray:
    matrix = np.asarray(generator, dtype=complex)
    if not is_hermitian(matrix, HERMITIAN_TOL):
        raise ToyModelError("Generator must be Hermitian")
    if abs(np.trace(matrix)) > TRACELESS_TOL:
        raise ToyModelError("Generator must be traceless")
    return matrix


def beta_coefficients(ch: Channel, purity_in: float, count: int) -> np.ndarray:
    """
    beta_1 = (Tr rho_in^2 - 1/2^n) / (4^n - 1),
    beta_j = (eta - 1/2^n) / (4^n - 1) + r beta_{j-1}.
    """
    c = ch.coefficients
    d = 2 ** ch.n_qubits
    side = d * d
    betas = np.empty(max(count, 1))
    betas[0] = (purity_in - 1.0 / d) / (side - 1)
    for j in range(1, betas.size):
        betas[j] = (c.eta - 1.0 / d) / (side - 1) + c.r * betas[j - 1]
    return betas


def _g_value(eta_minus, nu_minus, rho_minus, ell: int, beta_prev: float, dim: int):
    if ell == 1:
        return rho_minus
    return eta_minus / dim + nu_minus * beta_prev


def _rotation(generator: np.ndarray, theta: float) -> np.ndarray:
    values, vectors = np.linalg.eigh(generator)
    return (vectors * np.exp(-1j * theta * values)) @ dagger(vectors)


def _rotation_sample(generator: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return _rotation(generator, rng.uniform(0.0, 2.0 * np.pi))


def _haar_rotation_sample(generator: np.ndarray, n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    companion = haar_unitary(n_qubits, rng)
    return _rotation(generator, rng.uniform(0.0, 2.0 * np.pi)) @ companion


def rotation_sublayer(generator) -> SubLayer:
    """Sub-layer family exp(-i theta V), theta uniform in [0, 2 pi)"""
    return partial(_rotation_sample, _check_generator(generator))


def haar_rotation_sublayer(generator) -> SubLayer:
    """Sub-layer family exp(-i theta V) W with W Haar and theta uniform"""
    matrix = _check_generator(generator)
    return partial(_haar_rotation_sample, matrix, int(matrix.shape[0]).bit_length() - 1)


def estimate_G_coefficients(
    ch: Channel,
    generator,
    rho_in: StateLike,
    ell: int,
    samples: int,
    rng: np.random.Generator,
    sublayer: Optional[SubLayer] = None,
) -> VarianceCoefficients:
    """
    Monte-Carlo estimate of <eta->, <nu-> (and <rho-> for l = 1) and G_lk.

    Args:
        ch: Noise channel
        generator: Hermitian traceless V_k
        rho_in: Circuit input state
        ell: Layer of the differentiated parameter (>= 1)
        samples: Number of sub-layer samples
        rng: Random generator
        sublayer: Family of unitaries preceding the derivative point
            (default: Haar-completed rotation)

    Returns:
        VarianceCoefficients with standard errors of the averages
    """
    matrix = _check_generator(generator)
    n_qubits = ch.n_qubits
    if n_qubits > MAX_COEFFICIENT_QUBITS:
        raise ToyModelError(f"Coefficient estimation is limited to {MAX_COEFFICIENT_QUBITS} qubits")
    if ell < 1:
        raise ToyModelError(f"ell must be at least 1, got {ell}")
    if samples < 2:
        raise ToyModelError("At least two samples are needed")
    sublayer = sublayer or haar_rotation_sublayer(matrix)

    dim = 2 ** n_qubits
    ptm = ch.ptm.matrix
    projected = ptm.copy()
    projected[:, 0] = 0.0
    image_of_identity = ptm[:, 0]
    rho_matrix = rho_in.matrix if isinstance(rho_in, DensityMatrix) else np.asarray(rho_in, dtype=complex)
    rho_vector = pauli_coefficients(rho_matrix, n_qubits)
    betas = beta_coefficients(ch, purity(rho_in), max(ell - 1, 1))
    beta_prev = betas[ell - 2] if ell >= 2 else 0.0

    eta_minus = np.empty(samples)
    nu_minus = np.empty(samples)
    rho_minus = np.empty(samples)
    for k in range(samples):
        unitary = sublayer(rng)
        derivative = commutator_ptm(dagger(unitary) @ matrix @ unitary)
        eta_minus[k] = np.sum(np.abs(derivative @ image_of_identity) ** 2)
        nu_minus[k] = np.sum(np.abs(derivative @ projected) ** 2)
        rho_minus[k] = np.sum(np.abs(derivative @ rho_vector) ** 2)

    g_values = _g_value(eta_minus, nu_minus, rho_minus, ell, beta_prev, dim)
    logger.debug(f"Estimated G_{ell} over {samples} sample(s): {g_values.mean():.6g}")
    return VarianceCoefficients(
        n_qubits=n_qubits,
        ell=ell,
        alphas=np.full(betas.size, 1.0 / dim),
        betas=betas,
        eta_minus_avg=float(eta_minus.mean()),
        nu_minus_avg=float(nu_minus.mean()),
        rho_minus_avg=float(rho_minus.mean()),
        G_lk=float(g_values.mean()),
        G_stderr=float(g_values.std(ddof=1) / np.sqrt(samples)),
        eta_minus_stderr=float(eta_minus.std(ddof=1) / np.sqrt(samples)),
        nu_minus_stderr=float(nu_minus.std(ddof=1) / np.sqrt(samples)),
    )


def haar_sublayer_coefficients(ch: Channel, generator, rho_in: StateLike, ell: int) -> VarianceCoefficients:
    """
    Exact coefficients when the sub-layer before the derivative is Haar distributed.

    With Tr V^2 (superoperator) = 2^{n+1} Tr V^2:
    <eta-> = (2^n eta - 1) Tr V^2 / (4^n - 1), <nu-> = r Tr V^2, <rho-> = beta_1 Tr V^2.
    """
    matrix = _check_generator(generator)
    if ell < 1:
        raise ToyModelError(f"ell must be at least 1, got {ell}")
    c = ch.coefficients
    dim = 2 ** ch.n_qubits
    weight = 2.0 * dim * float(np.trace(matrix @ matrix).real)
    betas = beta_coefficients(ch, purity(rho_in), max(ell - 1, 1))
    eta_minus = (dim * c.eta - 1.0) * weight / (dim * dim - 1)
    nu_minus = c.r * weight
    rho_minus = betas[0] * weight
    beta_prev = betas[ell - 2] if ell >= 2 else 0.0
    return VarianceCoefficients(
        n_qubits=ch.n_qubits,
        ell=ell,
        alphas=np.full(betas.size, 1.0 / dim),
        betas=betas,
        eta_minus_avg=eta_minus,
        nu_minus_avg=nu_minus,
        rho_minus_avg=rho_minus,
        G_lk=float(_g_value(eta_minus, nu_minus, rho_minus, ell, beta_prev, dim)),
    )


def _traceless_norm(ch: Channel, observable) -> float:
    """||N^dagger(O)||^2 minus its trace part, Tr(A^2) - Tr(A)^2 / 2^n"""
    matrix = np.asarray(observable, dtype=complex)
    if not is_hermitian(matrix, HERMITIAN_TOL):
        raise ToyModelError("Observable must be Hermitian")
    if abs(np.trace(matrix)) > TRACELESS_TOL * max(1.0, np.linalg.norm(matrix)):
        raise ToyModelError("Observable must be traceless")
    heisenberg = apply_adjoint(ch, matrix)
    return float(np.vdot(heisenberg, heisenberg).real - abs(np.trace(heisenberg)) ** 2 / matrix.shape[0])


def variance_predictor(ch: Channel, observable, layers: int, ell: int, G_lk: float) -> float:
    """
    Predicted Var(dC/dtheta_lk) = G_lk r^(L - l) / (4^n - 1) * Q.

    Raises:
        ToyModelError: If l is outside 1..L or O is not Hermitian and traceless
    """
    if not 1 <= ell <= layers:
        raise ToyModelError(f"Need 1 <= ell <= L, got ell={ell}, L={layers}")
    side = 4 ** ch.n_qubits
    q = _traceless_norm(ch, observable)
    return G_lk * ch.coefficients.r ** (layers - ell) / (side - 1) * q


def variance_predictor_unital(ch: Channel, observable, layers: int, nu_minus: float, purity_in: float) -> float:
    """
    Unital specialization for l >= 2:
    <nu-> (Tr rho_in^2 - 1/2^n) / (4^n - 1)^2 * r^(L - 2) * Q.
    """
    if not ch.coefficients.unital:
        raise ToyModelError(f"{ch.label} is not unital")
    if layers < 2:
        raise ToyModelError("The unital form needs L >= 2")
    dim = 2 ** ch.n_qubits
    side = dim * dim
    q = _traceless_norm(ch, observable)
    return nu_minus * (purity_in - 1.0 / dim) / (side - 1) ** 2 * ch.coefficients.r ** (layers - 2) * q


@dataclass(frozen=True)
class VarianceCheck:
    """Monte-Carlo derivative variance next to the formula value"""

    layers: int
    ell: int
    mc_variance: float
    mc_stderr: float
    predicted: float
    predicted_stderr: float
    samples: int

    @property
    def combined_stderr(self) -> float:
        return float(np.hypot(self.mc_stderr, self.predicted_stderr))

    def within(self, standard_errors: float) -> bool:
        return abs(self.mc_variance - self.predicted) <= standard_errors * self.combined_stderr


def _layered_cost(
    layers: Sequence, generator: np.ndarray, ch: Channel, observable: np.ndarray,
    rho: np.ndarray, ell: int, shift: float,
) -> float:
    matrix = rho
    for index, (before, theta, after) in enumerate(layers):
        angle = theta + shift if index == ell - 1 else theta
        unitary = after @ _rotation(generator, angle) @ before
        matrix = apply_matrix(ch, unitary @ matrix @ dagger(unitary))
    return float(np.vdot(observable, matrix).real)


def _derivative_sample(
    ch: Channel, generator: np.ndarray, observable: np.ndarray, rho: np.ndarray,
    layers: int, ell: int, step: float, rng: np.random.Generator,
) -> float:
    n_qubits = ch.n_qubits
    circuit = [
        (haar_unitary(n_qubits, rng), rng.uniform(0.0, 2.0 * np.pi), haar_unitary(n_qubits, rng))
        for _ in range(layers)
    ]
    plus = _layered_cost(circuit, generator, ch, observable, rho, ell, step)
    minus = _layered_cost(circuit, generator, ch, observable, rho, ell, -step)
    return (plus - minus) / (2.0 * step)


def _default_observable(n_qubits: int) -> np.ndarray:
    z = np.diag([1.0, -1.0]).astype(complex)
    return np.kron(z, np.eye(2 ** (n_qubits - 1)))


def variance_mc_check(
    n_qubits: int,
    ch: Channel,
    generator,
    layers: int,
    ell: int,
    samples: int,
    rng: np.random.Generator,
    observable=None,
    rho_in: Optional[DensityMatrix] = None,
    coefficients: Optional[VarianceCoefficients] = None,
    g_samples: int = 20000,
    step: float = FD_STEP,
    workers: int = 1,
) -> VarianceCheck:
    """
    Compare the Monte-Carlo variance of dC/dtheta_l1 with variance_predictor.

    Args:
        n_qubits: Number of qubits (<= 3)
        ch: Noise channel
        generator: Hermitian traceless V
        layers: Circuit depth L
        ell: Differentiated layer
        samples: Number of circuit samples
        rng: Random generator
        observable: Traceless O (default Z on qubit 0)
        rho_in: Input state (default |0...0>)
        coefficients: Precomputed G coefficients for this ell
        g_samples: Samples for estimate_G_coefficients when coefficients are not given
        step: Central finite-difference step
        workers: Worker processes for the circuit samples

    Returns:
        VarianceCheck
    """
    if n_qubits > MAX_HARNESS_QUBITS:
        raise ToyModelError(f"The variance harness is limited to {MAX_HARNESS_QUBITS} qubits")
    if ch.n_qubits != n_qubits:
        raise ToyModelError(f"Channel acts on {ch.n_qubits} qubit(s), expected {n_qubits}")
    if samples < 2:
        raise ToyModelError("At least two samples are needed")
    matrix = _check_generator(generator)
    observable = _default_observable(n_qubits) if observable is None else np.asarray(observable, dtype=complex)
    rho_in = rho_in or DensityMatrix.zero_state(n_qubits)

    if coefficients is None:
        coefficients = estimate_G_coefficients(ch, matrix, rho_in, ell, g_samples, rng)
    predicted = variance_predictor(ch, observable, layers, ell, coefficients.G_lk)
    scale = predicted / coefficients.G_lk if coefficients.G_lk else 0.0

    job = partial(_derivative_sample, ch, matrix, observable, rho_in.matrix, layers, ell, step)
    derivatives = np.asarray(run_samples(job, derive_seed(rng), samples, workers))
    mc_variance, mc_stderr = variance_stderr(derivatives)
    logger.info(
        f"Variance check L={layers}, ell={ell}: MC {mc_variance:.6g} +- {mc_stderr:.2g}, predicted {predicted:.6g}"
    )
    return VarianceCheck(
        layers=layers,
        ell=ell,
        mc_variance=mc_variance,
        mc_stderr=mc_stderr,
        predicted=predicted,
        predicted_stderr=abs(scale) * coefficients.G_stderr,
        samples=samples,
    )


@dataclass(frozen=True)
class VarianceDecay:
    """Variance checks over several depths and the log-linear fit of the MC values"""

    checks: List[VarianceCheck]
    fit: LogLinearFit
    log_r: float

    @property
    def slope_consistent(self) -> bool:
        return self.fit.contains_slope(self.log_r)


def variance_decay_fit(
    n_qubits: int,
    ch: Channel,
    generator,
    layers: Sequence[int],
    ell: int,
    samples: int,
    rng: np.random.Generator,
    g_samples: int = 20000,
    workers: int = 1,
) -> VarianceDecay:
    """
    Run variance_mc_check for each depth and fit ln(variance) against L.

    The G coefficients are estimated once and shared by all depths.
    """
    rho_in = DensityMatrix.zero_state(n_qubits)
    coefficients = estimate_G_coefficients(ch, generator, rho_in, ell, g_samples, rng)
    checks = [
        variance_mc_check(
            n_qubits, ch, generator, depth, ell, samples, rng,
            rho_in=rho_in, coefficients=coefficients, workers=workers,
        )
        for depth in layers
    ]
    fit = fit_log_linear([c.layers for c in checks], [c.mc_variance for c in checks])
    return VarianceDecay(checks, fit, float(np.log(ch.coefficients.r)))
