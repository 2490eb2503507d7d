"""
QAOA sampling experiments

Purity and derivative statistics over uniformly random parameters, the twirl
fidelity of a circuit family and the infidelity between the noisy circuit and
its Haar-twirled replacement. Samples run as independent seeded jobs.
"""
from dataclasses import dataclass
from functools import partial
from typing import Sequence, Tuple
import logging

import numpy as np

from ..channels.analysis import haar_twirl
from ..channels.channel import Channel, apply_matrix
from ..liouville.sampling import derive_seed, run_samples, stack_results
from ..liouville.states import DensityMatrix, fidelity, purity
from ..liouville.stats import summarize
from .circuit import (
    FIRST_GAMMA,
    LAST_ALPHA,
    QaoaError,
    QaoaInstance,
    QaoaParams,
    apply_layer,
    evolve,
    gradient_fd,
    invert_circuit,
)

logger = logging.getLogger(__name__)

DEFAULT_TWIRL_SAMPLES = 768
TWIRL_BATCHES = 8


@dataclass(frozen=True)
class PurityStatistics:
    """Mean and unbiased variance of the purity for L = 0..L_max"""

    layers: np.ndarray
    mean: np.ndarray
    variance: np.ndarray
    stderr: np.ndarray
    samples: int


@dataclass(frozen=True)
class DerivativeStatistics:
    """Per-depth statistics of dC/dgamma_1 and dC/dalpha_L for L = 1..L_max"""

    layers: np.ndarray
    mean_abs_dgamma1: np.ndarray
    var_dgamma1: np.ndarray
    mean_abs_dalphaL: np.ndarray
    var_dalphaL: np.ndarray
    samples: int


@dataclass(frozen=True)
class TwirlFidelity:
    """Fidelity between the circuit-twirled and Haar-twirled |+> states per depth"""

    layers: np.ndarray
    fidelity: np.ndarray
    stderr: np.ndarray
    p_eff: float
    samples: int


@dataclass(frozen=True)
class InfidelityStatistics:
    """Mean 1 - F between noisy and twirled-noise circuit outputs for L = 0..L_max"""

    layers: np.ndarray
    mean: np.ndarray
    stderr: np.ndarray
    samples: int


def _check_samples(samples: int, minimum: int) -> None:
    if samples < minimum:
        raise QaoaError(f"At least {minimum} sample(s) needed, got {samples}")


def _purity_row(inst: QaoaInstance, layers: int, rng: np.random.Generator) -> np.ndarray:
    params = QaoaParams.random(layers, rng)
    _, values = evolve(inst, params.alphas, params.gammas, record=purity)
    return np.asarray(values)


def purity_statistics(
    inst: QaoaInstance,
    max_layers: int,
    samples: int,
    rng: np.random.Generator,
    workers: int = 1,
) -> PurityStatistics:
    """
    Purity of the circuit output for every depth up to L_max.

    Each sample draws one L_max-layer parameter vector and records the purity
    after every layer, so row L is the purity of its L-layer prefix.

    Args:
        inst: Instance (its depth is ignored)
        max_layers: Largest depth L_max
        samples: Number of parameter samples (>= 2)
        rng: Random generator
        workers: Worker processes

    Returns:
        PurityStatistics with L_max + 1 rows
    """
    _check_samples(samples, 2)
    logger.info(f"Purity statistics for {inst.label or 'instance'}: L_max={max_layers}, samples={samples}")
    rows = run_samples(partial(_purity_row, inst, max_layers), derive_seed(rng), samples, workers)
    summary = summarize(stack_results(rows))
    return PurityStatistics(np.arange(max_layers + 1), summary.mean, summary.variance, summary.stderr, samples)


def _derivative_pair(inst: QaoaInstance, rng: np.random.Generator) -> Tuple[float, float]:
    params = QaoaParams.random(inst.layers, rng)
    return gradient_fd(inst, params, FIRST_GAMMA), gradient_fd(inst, params, LAST_ALPHA)


def derivative_statistics(
    inst: QaoaInstance,
    max_layers: int,
    samples: int,
    rng: np.random.Generator,
    workers: int = 1,
) -> DerivativeStatistics:
    """
    Statistics of the first problem-angle and last mixer-angle derivatives.

    Fresh parameters are drawn for every depth L = 1..L_max.
    """
    _check_samples(samples, 2)
    if max_layers < 1:
        raise QaoaError(f"Derivative statistics need L_max >= 1, got {max_layers}")
    logger.info(f"Derivative statistics for {inst.label or 'instance'}: L_max={max_layers}, samples={samples}")

    columns = {name: np.empty(max_layers) for name in ("mg", "vg", "ma", "va")}
    for index, layers in enumerate(range(1, max_layers + 1)):
        job = partial(_derivative_pair, inst.with_layers(layers))
        values = np.asarray(run_samples(job, derive_seed(rng), samples, workers))
        columns["mg"][index] = np.mean(np.abs(values[:, 0]))
        columns["vg"][index] = np.var(values[:, 0], ddof=1)
        columns["ma"][index] = np.mean(np.abs(values[:, 1]))
        columns["va"][index] = np.var(values[:, 1], ddof=1)
        logger.debug(f"L={layers}: mean |dC/dgamma_1|={columns['mg'][index]:.6g}")

    return DerivativeStatistics(
        layers=np.arange(1, max_layers + 1),
        mean_abs_dgamma1=columns["mg"],
        var_dgamma1=columns["vg"],
        mean_abs_dalphaL=columns["ma"],
        var_dalphaL=columns["va"],
        samples=samples,
    )


def _conjugated_noise(inst: QaoaInstance, rng: np.random.Generator) -> np.ndarray:
    """U^dagger N U (|+><+|) for one random noiseless circuit U"""
    params = QaoaParams.random(inst.layers, rng)
    n_qubits = inst.n_qubits
    matrix = DensityMatrix.plus_state(n_qubits).matrix.copy()
    for alpha, gamma in zip(params.alphas, params.gammas):
        matrix = apply_layer(matrix, inst.diagonal, alpha, gamma, None)
    matrix = apply_matrix(inst.channel, matrix)
    return invert_circuit(matrix, inst.diagonal, params.alphas, params.gammas)


def twirl_fidelity(
    family: QaoaInstance,
    layer_list: Sequence[int],
    rng: np.random.Generator,
    samples: int = DEFAULT_TWIRL_SAMPLES,
    workers: int = 1,
) -> TwirlFidelity:
    """
    How well a QAOA circuit family twirls its channel.

    For each depth L, averages U^dagger N U (|+><+|^n) over ``samples`` random
    noiseless L-layer circuits U of the family and compares the average with
    (1 - p_eff)|+><+|^n + p_eff I / 2^n through the root fidelity
    Tr sqrt(sqrt(rho) sigma sqrt(rho)). L = 0 is the identity family. The
    standard error comes from 8 equal batches of the samples.

    Args:
        family: Instance giving the problem Hamiltonian and the channel (applied once)
        layer_list: Depths to evaluate
        rng: Random generator
        samples: Circuits per depth (multiple of 8 recommended)
        workers: Worker processes

    Returns:
        TwirlFidelity
    """
    _check_samples(samples, TWIRL_BATCHES)
    n_qubits = family.n_qubits
    plus = DensityMatrix.plus_state(n_qubits).matrix
    p_eff = family.channel.coefficients.p_eff
    target = (1.0 - p_eff) * plus + p_eff * np.eye(2 ** n_qubits) / 2 ** n_qubits
    logger.info(f"Twirl fidelity for {family.label or 'family'} with {family.channel.label}, p_eff={p_eff:.6g}")

    depths = np.asarray(list(layer_list), dtype=int)
    values = np.empty(depths.size)
    errors = np.empty(depths.size)
    for index, layers in enumerate(depths):
        job = partial(_conjugated_noise, family.with_layers(int(layers)))
        outputs = stack_results(run_samples(job, derive_seed(rng), samples, workers))
        values[index] = fidelity(outputs.mean(axis=0), target)
        batches = [fidelity(chunk.mean(axis=0), target) for chunk in np.array_split(outputs, TWIRL_BATCHES)]
        errors[index] = np.std(batches, ddof=1) / np.sqrt(TWIRL_BATCHES)
        logger.debug(f"L={layers}: F={values[index]:.8f} +- {errors[index]:.2g}")
    return TwirlFidelity(depths, values, errors, p_eff, samples)


def _infidelity_row(inst: QaoaInstance, twirled: Channel, layers: int, rng: np.random.Generator) -> np.ndarray:
    params = QaoaParams.random(layers, rng)
    noisy = DensityMatrix.plus_state(inst.n_qubits).matrix.copy()
    replaced = noisy.copy()
    row = np.zeros(layers + 1)
    for layer in range(layers):
        alpha, gamma = params.alphas[layer], params.gammas[layer]
        noisy = apply_layer(noisy, inst.diagonal, alpha, gamma, inst.channel)
        replaced = apply_layer(replaced, inst.diagonal, alpha, gamma, twirled)
        row[layer + 1] = 1.0 - fidelity(noisy, replaced)
    return row


def haar_model_infidelity(
    inst: QaoaInstance,
    max_layers: int,
    samples: int,
    rng: np.random.Generator,
    workers: int = 1,
) -> InfidelityStatistics:
    """
    Mean infidelity between the noisy circuit and the same circuit with the
    channel replaced by its Haar twirl, for L = 0..L_max.
    """
    _check_samples(samples, 1)
    twirled = haar_twirl(inst.channel)
    logger.info(f"Haar-model infidelity for {inst.label or 'instance'}: L_max={max_layers}, samples={samples}")
    rows = run_samples(partial(_infidelity_row, inst, twirled, max_layers), derive_seed(rng), samples, workers)
    summary = summarize(stack_results(rows))
    return InfidelityStatistics(np.arange(max_layers + 1), summary.mean, summary.stderr, samples)
