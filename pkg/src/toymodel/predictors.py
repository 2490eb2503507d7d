"""
Closed-form predictors for the toy model

Average overlaps and purities after L layers, the Hoeffding single-instance
band and the purity-based cost concentration bound.
"""
from dataclasses import dataclass
from typing import Union
import logging

import numpy as np

from ..channels.channel import Channel
from ..liouville.states import StateLike, overlap, purity, schatten_norm
from .simulation import ToyModelError

logger = logging.getLogger(__name__)

Layers = Union[int, np.ndarray]

# r this close to one uses the L * offset limit
_UNIT_R_TOL = 1e-14


def _overlap_offset(ch: Channel) -> float:
    """2^n (2^n eta - nu) / (4^n - 1), the per-layer additive term"""
    c = ch.coefficients
    d = 2 ** ch.n_qubits
    return d * (d * c.eta - c.nu) / (d * d - 1)


def exact_avg_overlap(ch: Channel, rho_i: StateLike, rho_j: StateLike, layers: Layers):
    """
    Haar-averaged Tr(rho_i' rho_j') after L layers of (Haar unitary, channel).

    r^L Tr(rho_i rho_j) + (1 - r^L) / (1 - r) * 2^n (2^n eta - nu) / (4^n - 1),
    with the limit L * offset + Tr(rho_i rho_j) at r = 1.

    Args:
        ch: Noise channel
        rho_i, rho_j: Input states
        layers: Number of layers (int or array)

    Returns:
        float, or an array matching ``layers``
    """
    ells = np.asarray(layers, dtype=float)
    if np.any(ells < 0):
        raise ToyModelError("Number of layers must be non-negative")
    r = ch.coefficients.r
    start = overlap(rho_i, rho_j)
    offset = _overlap_offset(ch)
    if abs(1.0 - r) < _UNIT_R_TOL:
        result = start + ells * offset
    else:
        decay = r ** ells
        result = decay * start + (1.0 - decay) / (1.0 - r) * offset
    return float(result) if np.ndim(result) == 0 else result


def asymptotic_avg_overlap(ch: Channel) -> float:
    """
    Limit of the average overlap for L -> infinity.

    Raises:
        ToyModelError: If r = 1 (no decay, no plateau)
    """
    r = ch.coefficients.r
    if abs(1.0 - r) < _UNIT_R_TOL:
        raise ToyModelError("Asymptotic overlap undefined for r = 1")
    return _overlap_offset(ch) / (1.0 - r)


def twirled_overlap(ch: Channel, rho_i: StateLike, rho_j: StateLike, layers: Layers = 1):
    """
    Overlap after L applications of the Haar-twirled channel.

    q^2 Tr(rho_i rho_j) + (1 - q^2) / 2^n with q = (1 - p_eff)^L.
    """
    q = (1.0 - ch.coefficients.p_eff) ** np.asarray(layers, dtype=float)
    result = q ** 2 * overlap(rho_i, rho_j) + (1.0 - q ** 2) / 2 ** ch.n_qubits
    return float(result) if np.ndim(result) == 0 else result


def approx_avg_purity(ch: Channel, rho_in: StateLike, layers: Layers):
    """
    (1 - 2 p_eff)^L Tr(rho_in^2).

    Intended for purities well above 1/2^n; this is not enforced.
    """
    result = (1.0 - 2.0 * ch.coefficients.p_eff) ** np.asarray(layers, dtype=float) * purity(rho_in)
    return float(result) if np.ndim(result) == 0 else result


@dataclass(frozen=True)
class HoeffdingBand:
    """Multiplicative purity band per layer l = 0..L"""

    layers: np.ndarray
    center: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    r_ln: float
    width: float

    def ratio(self, layer: int) -> float:
        """upper / lower at a layer"""
        return float(self.upper[layer] / self.lower[layer])


def hoeffding_band(ch: Channel, rho_in: StateLike, layers: int, p_max: float) -> HoeffdingBand:
    """
    Hoeffding band center * exp(+-sqrt(ln(2 / P) / 2) * R_ln * sqrt(l)) around approx_avg_purity.

    R_ln = ln(lambda_max) - ln(lambda_min) of PTM^dagger PTM.

    Args:
        ch: Noise channel
        rho_in: Input state
        layers: Largest layer L
        p_max: Probability bound in (0, 2)

    Raises:
        ToyModelError: If p_max is out of range or lambda_min = 0
    """
    if not 0.0 < p_max < 2.0:
        raise ToyModelError(f"P_max must lie in (0, 2), got {p_max}")
    if layers < 0:
        raise ToyModelError("Number of layers must be non-negative")
    low, high = ch.eigen_range
    if low <= 0.0:
        logger.error(f"Hoeffding band undefined for {ch.label}: singular PTM^dagger PTM")
        raise ToyModelError("Hoeffding band undefined: lambda_min of PTM^dagger PTM is zero")

    r_ln = float(np.log(high) - np.log(low))
    width = float(np.sqrt(0.5 * np.log(2.0 / p_max)) * r_ln)
    ells = np.arange(layers + 1)
    center = np.asarray(approx_avg_purity(ch, rho_in, ells), dtype=float)
    spread = np.exp(width * np.sqrt(ells))
    return HoeffdingBand(ells, center, center / spread, center * spread, r_ln, width)


def cost_concentration_bound(observable, rho: StateLike) -> float:
    """
    Bound on |Tr(O rho) - Tr(O) / 2^n| from the purity.

    ||O||_inf * sqrt(2 ln 2 (n + log2 Tr rho^2)), from Hoelder and Pinsker
    applied to D(rho || I / 2^n) <= n + log2 Tr rho^2.
    """
    n_qubits = int(np.asarray(observable).shape[0]).bit_length() - 1
    entropy_gap = max(n_qubits + np.log2(purity(rho)), 0.0)
    return schatten_norm(observable, np.inf) * float(np.sqrt(2.0 * np.log(2.0) * entropy_gap))
