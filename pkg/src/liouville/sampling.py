"""
Random sampling and seeded sample streams

Haar-random unitaries and the per-sample stream contract: sample k of a run
draws from a generator seeded by the k-th child of SeedSequence(seed), so
results depend only on (seed, k) and never on how samples are scheduled.
"""
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar
import logging

import numpy as np
from scipy.linalg import qr

logger = logging.getLogger(__name__)

T = TypeVar("T")

SEED_BOUND = 2 ** 63


def haar_unitary(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """
    Haar-random unitary on n qubits.

    QR decomposition of a complex Ginibre matrix with the phases of R's
    diagonal moved into Q.

    Args:
        n_qubits: Number of qubits
        rng: Random generator

    Returns:
        2^n x 2^n unitary matrix
    """
    dim = 2 ** n_qubits
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def derive_seed(rng: np.random.Generator) -> int:
    """Draw a run seed from an existing generator"""
    return int(rng.integers(SEED_BOUND))


def sample_streams(seed: int, count: int) -> List[np.random.SeedSequence]:
    """Child seed sequences, one per sample"""
    return np.random.SeedSequence(seed).spawn(count)


def _run_one(job: Callable[[np.random.Generator], T], stream: np.random.SeedSequence) -> T:
    return job(np.random.default_rng(stream))


def run_samples(
    job: Callable[[np.random.Generator], T],
    seed: int,
    count: int,
    workers: int = 1,
) -> List[T]:
    """
    Run ``job`` once per sample with its own generator.

    Args:
        job: Picklable callable taking a Generator (module-level function or
            functools.partial of one when workers > 1)
        seed: Run seed
        count: Number of samples
        workers: Number of worker processes (1 runs in-process)

    Returns:
        Results in sample order
    """
    streams = sample_streams(seed, count)
    logger.debug(f"Running {count} sample(s) with seed {seed} on {workers} worker(s)")
    if workers <= 1 or count <= 1:
        return [_run_one(job, stream) for stream in streams]

    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(_run_one, [job] * count, streams))


def stack_results(rows: Sequence[np.ndarray]) -> np.ndarray:
    """Stack per-sample rows into a (samples, ...) array"""
    return np.stack([np.asarray(row) for row in rows])
