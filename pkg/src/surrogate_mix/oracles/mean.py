"""Closed-form risks for estimating a Gaussian mean from two sources.

Original rows are ``N(theta*, I_d)``, surrogate rows ``N(theta_s, I_d)`` and
``gap = ||theta* - theta_s||**2``. The estimator is the weighted combination of
the two sample means.
"""
from ..errors import BadWeight, InvalidConfig


def _check(d, n, m, alpha, gap):
    if d < 1:
        raise InvalidConfig("d", f"must be >= 1, got {d}")
    if n < 0 or m < 0:
        raise InvalidConfig("n", "sample counts must be >= 0")
    if not 0.0 <= alpha <= 1.0:
        raise InvalidConfig("alpha", f"must lie in [0, 1], got {alpha}")
    if gap < 0:
        raise InvalidConfig("gap", f"must be >= 0, got {gap}")
    if alpha > 0 and m == 0:
        raise BadWeight("alpha > 0 with no surrogate samples")
    if alpha < 1 and n == 0:
        raise BadWeight("alpha < 1 with no original samples")


def mean_risk(d: int, n: int, m: int, alpha: float, gap: float) -> float:
    """Squared-error risk ``alpha**2 gap + (alpha**2/m + (1-alpha)**2/n) d``."""
    _check(d, n, m, alpha, gap)
    risk = 0.0
    if alpha > 0:
        risk += alpha * alpha * (gap + d / m)
    if alpha < 1:
        risk += (1.0 - alpha) ** 2 * d / n
    return risk


def mean_optimal_alpha(d: int, n: int, m: int, gap: float):
    """Return ``(alpha_star, risk_star)`` minimizing :func:`mean_risk`.

    With one side empty the only admissible weight is returned.
    """
    if n < 1 and m < 1:
        raise BadWeight("no samples on either side")
    if m == 0:
        return 0.0, mean_risk(d, n, m, 0.0, gap)
    if n == 0:
        return 1.0, mean_risk(d, n, m, 1.0, gap)
    _check(d, n, m, 0.5, gap)
    vo, su = d / n, gap + d / m
    return vo / (su + vo), su / (su + vo) * vo


def naive_pooled_risk(d: int, n: int, m: int, gap: float) -> float:
    """Risk of the unweighted mean of all ``n + m`` rows."""
    if n + m < 1:
        raise BadWeight("no samples on either side")
    if d < 1 or gap < 0 or n < 0 or m < 0:
        raise InvalidConfig("d", "need d >= 1, gap >= 0 and non-negative counts")
    frac = m / (n + m)
    return frac * frac * gap + d / (n + m)
