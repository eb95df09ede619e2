"""Risk of weighted Sobolev-penalized estimation in the white-noise model.

Everything lives on the frequency lattice ``q = 2 pi k``, ``k`` in ``Z^d``,
truncated to ``||k||_inf <= T``. With ``c_q = 1 + ||q||**(2p)`` the estimator
is ``((1-alpha) Y(q) + alpha Y_s(q)) / (1 + lam c_q)`` and its risk is

    sum_q |alpha (theta_s - theta)(q) - lam c_q theta(q)|**2 / (1 + lam c_q)**2
        + K * sum_q (1 + lam c_q)**-2

with ``K = (1-alpha)**2 sigma**2/n + alpha**2 sigma_s**2/m``.
"""
import math

import numpy as np

from ..errors import InvalidConfig, PenaltyTooWeak
from ..model import NonparamSpec


def _check(spec: NonparamSpec, alpha):
    if not 0.0 <= alpha <= 1.0:
        raise InvalidConfig("alpha", f"must lie in [0, 1], got {alpha}")
    if 2.0 * spec.penalty_order <= spec.dim / 2.0:
        raise PenaltyTooWeak(
            f"penalty_order={spec.penalty_order} must exceed dim/4={spec.dim / 4}"
        )


def variance_scale(spec: NonparamSpec, alpha: float) -> float:
    return (1 - alpha) ** 2 * spec.sigma ** 2 / spec.n + alpha ** 2 * spec.sigma_s ** 2 / spec.m


def lattice(spec: NonparamSpec) -> np.ndarray:
    """All integer points with ``||k||_inf <= truncation``, shape ``(N, dim)``."""
    r = np.arange(-spec.truncation, spec.truncation + 1)
    grids = np.meshgrid(*([r] * spec.dim), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _penalty_weight(k: np.ndarray, p: float) -> np.ndarray:
    sq = (2.0 * math.pi) ** 2 * np.sum(np.asarray(k, dtype=float) ** 2, axis=-1)
    return 1.0 + sq ** p


def nonparam_risk(spec: NonparamSpec, alpha: float) -> float:
    """Truncated risk sum; see :func:`nonparam_tail_bound` for the omitted part.

    Raises:
        PenaltyTooWeak: ``penalty_order <= dim / 4`` (the full sum diverges).
    """
    _check(spec, alpha)
    lam = spec.lam
    pts = lattice(spec)
    shrink = 1.0 / (1.0 + lam * _penalty_weight(pts, spec.penalty_order))
    var = float(np.sum(shrink * shrink))
    bias = 0.0
    if spec.target_coeffs:
        keys = np.array(sorted(spec.target_coeffs), dtype=float).reshape(-1, spec.dim)
        th = np.array([spec.target_coeffs[k] for k in sorted(spec.target_coeffs)])
        ths = np.array([spec.surrogate_coeffs[k] for k in sorted(spec.target_coeffs)])
        c = _penalty_weight(keys, spec.penalty_order)
        b = (alpha * (ths - th) - lam * c * th) / (1.0 + lam * c)
        bias = float(np.sum(b.real ** 2 + b.imag ** 2))
    return bias + variance_scale(spec, alpha) * var


def nonparam_tail_bound(spec: NonparamSpec, alpha: float) -> float:
    """Upper bound on the variance mass outside the truncated lattice.

    ``K lam**-2 (2 pi)**(-4p) 2d 3**(d-1) T**(d-4p) / (4p - d)``; infinite
    when ``lam = 0``.
    """
    _check(spec, alpha)
    if spec.lam == 0:
        return math.inf
    d, p, T = spec.dim, spec.penalty_order, spec.truncation
    count = 2.0 * d * 3.0 ** (d - 1)
    return (variance_scale(spec, alpha) / spec.lam ** 2 * (2 * math.pi) ** (-4 * p)
            * count * T ** (d - 4 * p) / (4 * p - d))
