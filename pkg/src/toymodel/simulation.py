"""
Layered Haar/noise toy model

Each layer applies a Haar-random unitary followed by the noise channel. Purity
is recorded at the input and after every noise application.
"""
from dataclasses import dataclass
from functools import partial
from typing import Tuple
import logging

import numpy as np

from ..channels.channel import Channel, apply_matrix
from ..liouville.constants import PSD_TOL
from ..liouville.sampling import haar_unitary, run_samples, stack_results
from ..liouville.states import DensityMatrix, purity
from ..liouville.stats import SampleSummary, summarize

logger = logging.getLogger(__name__)

SEED_LIMIT = 2 ** 64


class ToyModelError(Exception):
    """Raised when a toy-model configuration or predictor is invalid"""
    pass


@dataclass(frozen=True)
class ToyModelConfig:
    """Monte-Carlo run of the layered toy model"""

    n_qubits: int
    layers: int
    channel: Channel
    initial_state: DensityMatrix
    samples: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.layers < 0:
            raise ToyModelError(f"layers must be non-negative, got {self.layers}")
        if self.samples < 1:
            raise ToyModelError(f"samples must be positive, got {self.samples}")
        if not 0 <= self.seed < SEED_LIMIT:
            raise ToyModelError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.channel.n_qubits != self.n_qubits:
            raise ToyModelError(f"Channel acts on {self.channel.n_qubits} qubit(s), model has {self.n_qubits}")
        if self.initial_state.n_qubits != self.n_qubits:
            raise ToyModelError(f"Initial state has {self.initial_state.n_qubits} qubit(s), model has {self.n_qubits}")


@dataclass(frozen=True)
class PurityTrace:
    """Purities Tr(rho_l^2) for l = 0..L, one row per sample"""

    values: np.ndarray
    n_qubits: int

    def __post_init__(self):
        values = np.atleast_2d(np.asarray(self.values, dtype=float))
        floor = 2.0 ** -self.n_qubits
        if np.any(values < floor - PSD_TOL) or np.any(values > 1.0 + PSD_TOL):
            raise ToyModelError(f"Purity outside [{floor:g}, 1]")
        object.__setattr__(self, "values", values)

    @property
    def layers(self) -> int:
        return self.values.shape[1] - 1

    @property
    def samples(self) -> int:
        return self.values.shape[0]

    def summary(self) -> SampleSummary:
        return summarize(self.values)

    def fraction_inside(self, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
        """Per-layer fraction of samples with lower <= purity <= upper"""
        inside = (self.values >= lower) & (self.values <= upper)
        return inside.mean(axis=0)


def _evolve(cfg: ToyModelConfig, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    matrix = cfg.initial_state.matrix
    row = np.empty(cfg.layers + 1)
    row[0] = purity(matrix)
    for layer in range(1, cfg.layers + 1):
        unitary = haar_unitary(cfg.n_qubits, rng)
        matrix = apply_matrix(cfg.channel, unitary @ matrix @ unitary.conj().T)
        row[layer] = purity(matrix)
    return row, matrix


def simulate_instance(cfg: ToyModelConfig, rng: np.random.Generator) -> Tuple[np.ndarray, DensityMatrix]:
    """
    One Monte-Carlo instance.

    Args:
        cfg: Model configuration (samples and seed are ignored)
        rng: Random generator

    Returns:
        (purity row of length L + 1, final state)
    """
    row, matrix = _evolve(cfg, rng)
    return row, DensityMatrix(cfg.n_qubits, matrix)


def _purity_row(cfg: ToyModelConfig, rng: np.random.Generator) -> np.ndarray:
    return _evolve(cfg, rng)[0]


def simulate(cfg: ToyModelConfig, workers: int = 1) -> PurityTrace:
    """
    Run cfg.samples independent instances.

    Sample k uses the k-th stream of cfg.seed, so the result does not depend
    on the number of workers.
    """
    logger.info(
        f"Simulating toy model: n={cfg.n_qubits}, L={cfg.layers}, channel={cfg.channel.label}, "
        f"samples={cfg.samples}, seed={cfg.seed}"
    )
    rows = run_samples(partial(_purity_row, cfg), cfg.seed, cfg.samples, workers)
    return PurityTrace(stack_results(rows), cfg.n_qubits)
