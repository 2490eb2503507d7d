"""
Channel analysis

Noise coefficients, Haar twirling and contraction-coefficient estimation.
"""
import logging

import numpy as np

from ..liouville.states import random_pure_state, trace_distance
from .channel import Channel, NoiseCoefficients, apply_matrix
from .library import depolarizing

logger = logging.getLogger(__name__)


def noise_coefficients(ch: Channel) -> NoiseCoefficients:
    """
    Noise coefficients nu, eta, r and p_eff of a channel.

    Product channels are handled factor-wise, so no 4^n x 4^n PTM is formed.
    """
    return ch.coefficients


def r_from_projector(ch: Channel) -> float:
    """r as Tr[N^T N (I - |P0>><<P0|)] / (4^n - 1), evaluated on the dense PTM"""
    matrix = ch.ptm.matrix
    side = matrix.shape[0]
    projector = np.eye(side)
    projector[0, 0] = 0.0
    return float(np.trace(matrix.T @ matrix @ projector)) / (side - 1)


def haar_twirl(ch: Channel) -> Channel:
    """
    Average of U^dagger N U over Haar-random U: depolarizing(p_eff).

    p_eff may exceed one by up to 1/(4^n - 1); tiny negative rounding is clipped to zero.
    """
    p_eff = ch.coefficients.p_eff
    if -1e-12 < p_eff < 0.0:
        p_eff = 0.0
    twirled = depolarizing(p_eff, ch.n_qubits, label=f"twirl({ch.label})")
    logger.debug(f"Twirled {ch.label} into depolarizing p_eff={p_eff:.6g}")
    return twirled


def contraction_estimate(ch: Channel, n_pairs: int, rng: np.random.Generator) -> float:
    """
    Empirical contraction ratio max T(N rho1, N rho2) / T(rho1, rho2).

    Pairs are Haar-random pure states, so the result is a LOWER bound on the
    contraction coefficient q_N (the supremum over all state pairs).

    Args:
        ch: Channel
        n_pairs: Number of sampled pairs (>= 1)
        rng: Random generator

    Returns:
        Largest observed ratio
    """
    if n_pairs < 1:
        raise ValueError(f"n_pairs must be at least 1, got {n_pairs}")
    best = 0.0
    for _ in range(n_pairs):
        first = random_pure_state(ch.n_qubits, rng).matrix
        second = random_pure_state(ch.n_qubits, rng).matrix
        before = trace_distance(first, second)
        if before == 0.0:
            continue
        after = trace_distance(apply_matrix(ch, first), apply_matrix(ch, second))
        best = max(best, after / before)
    logger.debug(f"Contraction estimate for {ch.label}: {best:.6g} over {n_pairs} pair(s)")
    return best
