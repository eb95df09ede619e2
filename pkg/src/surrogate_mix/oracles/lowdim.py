"""Leading-order excess risk for smooth, low-dimensional models.

The risk expansion keeps the three leading terms only; the remainder is of
higher order and is meaningful when ``n`` and ``m`` are large and the shift
term ``alpha**2 <g, H^-1 g>`` is small.
"""
import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ..errors import BadWeight, InvalidConfig
from ..model import LowDimCurvature


def _parts(curv: LowDimCurvature, n: int, m: int):
    c = cho_factor(curv.hessian)
    shift = float(curv.shift_gradient @ cho_solve(c, curv.shift_gradient))
    tr_o = float(np.trace(cho_solve(c, curv.cov_original)))
    tr_s = float(np.trace(cho_solve(c, curv.cov_surrogate)))
    return shift, tr_o, tr_s


def _check(n, m, alpha):
    if not 0.0 <= alpha <= 1.0:
        raise InvalidConfig("alpha", f"must lie in [0, 1], got {alpha}")
    if n < 0 or m < 0:
        raise InvalidConfig("n", "sample counts must be >= 0")
    if alpha > 0 and m == 0:
        raise BadWeight("alpha > 0 with no surrogate samples")
    if alpha < 1 and n == 0:
        raise BadWeight("alpha < 1 with no original samples")


def lowdim_risk(curv: LowDimCurvature, n: int, m: int, alpha: float) -> float:
    """``alpha**2 <g,H^-1 g> + (1-alpha)**2 Tr(H^-1 K)/n + alpha**2 Tr(H^-1 K_s)/m``."""
    _check(n, m, alpha)
    shift, tr_o, tr_s = _parts(curv, max(n, 1), max(m, 1))
    risk = 0.0
    if alpha > 0:
        risk += alpha * alpha * (shift + tr_s / m)
    if alpha < 1:
        risk += (1.0 - alpha) ** 2 * tr_o / n
    return risk


def lowdim_optimal_alpha(curv: LowDimCurvature, n: int, m: int):
    """Return ``(alpha_star, risk_star)`` with ``alpha_star = R_or / (R_su + R_or)``.

    ``R_or = Tr(H^-1 K)/n`` and ``R_su = <g,H^-1 g> + Tr(H^-1 K_s)/m``; the
    minimum is the half harmonic mean ``(1/R_or + 1/R_su)**-1``.
    """
    if n < 1 or m < 1:
        raise InvalidConfig("n", "both n and m must be >= 1")
    shift, tr_o, tr_s = _parts(curv, n, m)
    r_or, r_su = tr_o / n, shift + tr_s / m
    if r_or + r_su == 0:
        return 0.0, 0.0
    return r_or / (r_su + r_or), r_or * r_su / (r_or + r_su)
