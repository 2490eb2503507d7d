"""
Sample statistics and log-linear fits
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import stats


@dataclass(frozen=True)
class SampleSummary:
    """Column-wise mean, unbiased variance and standard error of a sample array"""

    mean: np.ndarray
    variance: np.ndarray
    stderr: np.ndarray
    count: int


def summarize(samples: np.ndarray) -> SampleSummary:
    """
    Summarize along axis 0.

    Args:
        samples: Array of shape (count, ...)
    """
    values = np.asarray(samples, dtype=float)
    count = values.shape[0]
    mean = values.mean(axis=0)
    variance = values.var(axis=0, ddof=1) if count > 1 else np.zeros_like(mean)
    stderr = np.sqrt(variance / count)
    return SampleSummary(mean, variance, stderr, count)


def variance_stderr(samples: np.ndarray) -> Tuple[float, float]:
    """
    Unbiased variance of a 1-D sample and its standard error.

    The standard error uses the fourth central moment,
    se^2 = (m4 - (N-3)/(N-1) s^4) / N.
    """
    values = np.asarray(samples, dtype=float)
    count = values.size
    variance = float(values.var(ddof=1))
    m4 = float(np.mean((values - values.mean()) ** 4))
    spread = max(m4 - (count - 3) / (count - 1) * variance ** 2, 0.0)
    return variance, float(np.sqrt(spread / count))


@dataclass(frozen=True)
class LogLinearFit:
    """Least-squares line through (x, ln y)"""

    slope: float
    intercept: float
    r_squared: float
    slope_stderr: float
    slope_ci: Tuple[float, float]

    def contains_slope(self, value: float) -> bool:
        return self.slope_ci[0] <= value <= self.slope_ci[1]


def fit_log_linear(x, y, confidence: float = 0.95) -> LogLinearFit:
    """
    Fit ln y = slope * x + intercept.

    Args:
        x: Abscissae (at least three points)
        y: Positive ordinates
        confidence: Two-sided confidence level for the slope interval

    Raises:
        ValueError: If fewer than three points or a non-positive ordinate
    """
    xs = np.asarray(x, dtype=float)
    ys = np.asarray(y, dtype=float)
    if xs.size < 3:
        raise ValueError("A log-linear fit needs at least three points")
    if np.any(ys <= 0):
        raise ValueError("Log-linear fit requires positive values")

    result = stats.linregress(xs, np.log(ys))
    t_value = stats.t.ppf(0.5 + confidence / 2, xs.size - 2)
    half_width = t_value * result.stderr
    return LogLinearFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        r_squared=float(result.rvalue ** 2),
        slope_stderr=float(result.stderr),
        slope_ci=(float(result.slope - half_width), float(result.slope + half_width)),
    )
