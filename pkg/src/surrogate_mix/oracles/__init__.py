"""Analytic and asymptotic risk predictors."""
from .hidim import EPS0, hidim_asymptotic_risk, hidim_fixed_point, hidim_risk_curve
from .lowdim import lowdim_optimal_alpha, lowdim_risk
from .mean import mean_optimal_alpha, mean_risk, naive_pooled_risk
from .nonparam import nonparam_risk, nonparam_tail_bound
from .sequence import noise_scale, sequence_lambda_star, sequence_risk

__all__ = [
    "EPS0",
    "hidim_asymptotic_risk",
    "hidim_fixed_point",
    "hidim_risk_curve",
    "lowdim_optimal_alpha",
    "lowdim_risk",
    "mean_optimal_alpha",
    "mean_risk",
    "naive_pooled_risk",
    "nonparam_risk",
    "nonparam_tail_bound",
    "noise_scale",
    "sequence_lambda_star",
    "sequence_risk",
]
