"""Proportional-asymptotics risk of weighted ridge regression.

The limiting test error is read off the minimizer of a three-variable convex
variational objective ``S(xi, xi_perp, omega)``. Its inner maximization over
``(rho, rho_s)`` collapses to the scalar fixed point ``rho_bar`` solved by
:func:`hidim_fixed_point`.
"""
from __future__ import annotations

import math

import numpy as np

from .. import _kernels as K
from .._parallel import ordered_map
from ..errors import InvalidConfig, NotConverged
from ..model import HiDimSolution, HiDimSpec, RiskCurve

#: Endpoint offset used when exact alpha in {0, 1} is not allowed.
EPS0 = 1e-3
#: Simplex diameter at which Nelder-Mead stops.
SIMPLEX_TOL = 1e-9
FIXED_POINT_TOL = 1e-10
MAX_FIXED_POINT_ITER = 10_000
_NM_MAX_ITER = 20_000
_RESTART_STEPS = (0.5, 0.1, 1.0, 0.02)


def effective_alpha(spec: HiDimSpec, alpha: float) -> float:
    """Map the endpoints to ``EPS0`` / ``1 - EPS0`` unless both ratios exceed 1."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise InvalidConfig("alpha", f"must lie in [0, 1], got {alpha}")
    if spec.delta > 1 and spec.delta_s > 1:
        return alpha
    if alpha == 0.0:
        return EPS0
    if alpha == 1.0:
        return 1.0 - EPS0
    return alpha


def _pack(spec: HiDimSpec, alpha: float) -> np.ndarray:
    return np.array([
        spec.delta, spec.delta_s, spec.r,
        spec.r_s * math.cos(spec.gamma), spec.r_s * math.sin(spec.gamma),
        spec.sigma, spec.sigma_s, spec.lam, 1.0 - alpha, alpha,
    ])


def _fp_tol(x):
    # absolute target, relaxed only where x**2 itself exceeds ~1e5
    return max(FIXED_POINT_TOL, 64 * np.finfo(float).eps * x * x)


def fixed_point_residual(spec, alpha, tau, tau_s, omega, rho_bar):
    """``|rho_bar**2 - RHS(rho_bar)|`` for the given state."""
    ca = spec.delta * (tau * tau + spec.sigma ** 2)
    cs = spec.delta_s * (tau_s * tau_s + spec.sigma_s ** 2)
    rhs = K.rhobar_rhs(rho_bar, ca, spec.delta, 1.0 - alpha, cs, spec.delta_s, alpha, omega)
    return abs(rho_bar * rho_bar - rhs)


def hidim_fixed_point(spec: HiDimSpec, alpha: float, tau: float, tau_s: float, omega: float):
    """Solve for ``rho_bar`` and split it into ``(rho, rho_s)``.

    Args:
        spec: problem description.
        alpha: surrogate weight in [0, 1]; a zero-weight side drops out.
        tau, tau_s: distances entering the noise levels ``tau**2 + sigma**2``.
        omega: non-negative coupling.

    Returns:
        ``(rho_bar, t, rho, rho_s)``. ``t`` is ``inf`` when only the
        surrogate side is active. ``rho_bar`` is 0 when the equation has no
        positive root, which can happen for large ``omega``.

    Raises:
        NotConverged: neither damped iteration nor bisection met the tolerance.
    """
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise InvalidConfig("alpha", f"must lie in [0, 1], got {alpha}")
    for name, v in (("tau", tau), ("tau_s", tau_s), ("omega", omega)):
        if not (v >= 0 and math.isfinite(v)):
            raise InvalidConfig(name, f"must be finite and >= 0, got {v}")
    a = tau * tau + spec.sigma ** 2
    a_s = tau_s * tau_s + spec.sigma_s ** 2
    if a == 0 and a_s == 0:
        raise InvalidConfig("tau", "tau**2 + sigma**2 and tau_s**2 + sigma_s**2 are both 0")
    ca, cs = spec.delta * a, spec.delta_s * a_s
    w0, w1 = 1.0 - alpha, alpha
    x, res, status = K.solve_rhobar(ca, spec.delta, w0, cs, spec.delta_s, w1, float(omega),
                                    MAX_FIXED_POINT_ITER)
    if status == K.FAILED or not res <= _fp_tol(x):
        raise NotConverged("rho_bar fixed point", iterate=x, residual=res)
    t, rho, rho_s = K.split_rhobar(x, ca, spec.delta, w0, cs, spec.delta_s, w1, float(omega))
    return float(x), float(t), float(rho), float(rho_s)


def hidim_objective(spec: HiDimSpec, alpha: float, xi: float, xi_perp: float, omega: float):
    """Value of ``S`` at a point, with ``xi_perp`` and ``omega`` folded to >= 0."""
    return float(K.hidim_state(xi, xi_perp, omega, _pack(spec, float(alpha)))[0])


def _minimize(p, scale):
    x0 = np.array([0.5 * (p[8] * p[2] + p[9] * p[3]), 0.5 * p[9] * p[4], 0.5 * scale])
    best_x, best_f, diam, _ = K.nelder_mead_hidim(x0, 0.25 * scale, p, SIMPLEX_TOL, _NM_MAX_ITER)
    for step in _RESTART_STEPS:
        x, f, d, _ = K.nelder_mead_hidim(best_x, step * scale, p, SIMPLEX_TOL, _NM_MAX_ITER)
        if f < best_f or (f == best_f and d < diam):
            best_x, best_f, diam = x, f, d
    return best_x, best_f, diam


def hidim_asymptotic_risk(spec: HiDimSpec, alpha: float) -> HiDimSolution:
    """Limiting test error ``||theta_hat - theta*||**2`` of weighted ridge.

    Exact endpoints are used when ``delta > 1`` and ``delta_s > 1``; otherwise
    ``alpha`` in {0, 1} is replaced by ``EPS0`` / ``1 - EPS0`` (the value used is
    stored in ``HiDimSolution.alpha``).

    Raises:
        NotConverged: the simplex never shrank below ``SIMPLEX_TOL``.
    """
    a = effective_alpha(spec, alpha)
    p = _pack(spec, a)
    scale = max(1.0, spec.r, spec.r_s)
    x, f, diam = _minimize(p, scale)
    if not diam <= SIMPLEX_TOL:
        raise NotConverged(f"Nelder-Mead at alpha={a}", iterate=x, residual=diam)
    xi, xi_perp, om = float(x[0]), abs(float(x[1])), abs(float(x[2]))
    s, tau2, tau_s2, rb, t, rho, rho_s, status = K.hidim_state(xi, xi_perp, om, p)
    if status == K.FAILED:
        raise NotConverged("rho_bar fixed point at the minimizer", iterate=rb)
    return HiDimSolution(
        xi=xi, xi_perp=xi_perp, omega=om, rho_bar=float(rb), t=float(t), rho=float(rho),
        rho_s=float(rho_s), tau=math.sqrt(tau2), tau_s=math.sqrt(tau_s2),
        risk=(xi - spec.r) ** 2 + xi_perp ** 2 + om ** 2, alpha=a, objective=float(s),
    )


def hidim_risk_curve(spec: HiDimSpec, alpha_grid, threads=None) -> RiskCurve:
    """Evaluate :func:`hidim_asymptotic_risk` over a strictly increasing grid.

    Grid points are solved in parallel; the output order follows the grid.
    """
    alphas = [float(a) for a in alpha_grid]
    sols = ordered_map(lambda a: hidim_asymptotic_risk(spec, a), alphas, threads)
    return RiskCurve(tuple((a, s.risk, 0.0) for a, s in zip(alphas, sols)))
