"""Exact risk of the penalized estimator in the Gaussian sequence model."""
import math

from .. import _kernels as K
from ..errors import InvalidConfig, ZeroEigenvalue
from ..model import MixtureConfig, SequenceModelSpec


def noise_scale(spec: SequenceModelSpec, alpha: float) -> float:
    """``s = (1-alpha)**2 sigma**2/n + alpha**2 sigma_s**2/m``."""
    return (1.0 - alpha) ** 2 * spec.sigma ** 2 / spec.n + alpha ** 2 * spec.sigma_s ** 2 / spec.m


def sequence_risk(spec: SequenceModelSpec, config: MixtureConfig):
    """Return ``(risk, bias, variance_count, noise_scale)``.

    ``risk = bias + noise_scale * variance_count`` where

    * ``bias = sum_k ((alpha + lam w_k) theta_k - alpha theta_s_k)**2 / (1 + lam w_k)**2``
    * ``variance_count = sum_k (1 + lam w_k)**-2``
    """
    alpha, lam = config.alpha, config.lam
    bias, var = K.sequence_parts(spec.theta_star, spec.theta_star_s, spec.omega, alpha, lam)
    s = noise_scale(spec, alpha)
    return bias + s * var, float(bias), float(var), s


def rate_exponent(spec: SequenceModelSpec) -> float:
    """``beta = 2 min(mu, rho) / (1 + 2 min(mu, rho))``."""
    k = min(spec.mu, spec.rho_decay)
    return 2.0 * k / (1.0 + 2.0 * k)


def sequence_lambda_star(spec: SequenceModelSpec, alpha: float) -> float:
    """Penalty placing the effective cutoff ``k1`` near ``s**(beta - 1)``.

    ``k1 = clamp(round(s**(beta-1)), 1, dim)`` (half-up rounding) and the
    returned penalty is ``1 / omega[k1 - 1]``.

    Raises:
        ZeroEigenvalue: the selected eigenvalue is 0.
    """
    if not 0.0 <= alpha <= 1.0:
        raise InvalidConfig("alpha", f"must lie in [0, 1], got {alpha}")
    beta = rate_exponent(spec)
    s = noise_scale(spec, alpha)
    if s == 0:
        k1 = spec.dim
    else:
        k1 = int(min(max(math.floor(s ** (beta - 1.0) + 0.5), 1), spec.dim))
    w = float(spec.omega[k1 - 1])
    if w == 0.0:
        raise ZeroEigenvalue(f"omega[{k1 - 1}] is 0")
    return 1.0 / w
