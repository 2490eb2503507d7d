"""Layered Haar/noise toy model: simulation and closed-form predictors"""
from .predictors import (
    HoeffdingBand,
    approx_avg_purity,
    asymptotic_avg_overlap,
    cost_concentration_bound,
    exact_avg_overlap,
    hoeffding_band,
    twirled_overlap,
)
from .simulation import PurityTrace, ToyModelConfig, ToyModelError, simulate, simulate_instance
from .variance import (
    VarianceCheck,
    VarianceCoefficients,
    estimate_G_coefficients,
    haar_sublayer_coefficients,
    variance_decay_fit,
    variance_mc_check,
    variance_predictor,
    variance_predictor_unital,
)

__all__ = [
    'ToyModelConfig',
    'ToyModelError',
    'PurityTrace',
    'simulate',
    'simulate_instance',
    'HoeffdingBand',
    'exact_avg_overlap',
    'asymptotic_avg_overlap',
    'approx_avg_purity',
    'twirled_overlap',
    'hoeffding_band',
    'cost_concentration_bound',
    'VarianceCoefficients',
    'VarianceCheck',
    'estimate_G_coefficients',
    'haar_sublayer_coefficients',
    'variance_predictor',
    'variance_predictor_unital',
    'variance_mc_check',
    'variance_decay_fit',
]
