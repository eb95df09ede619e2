"""Hot numerical kernels.

Scalar kernels are written in a numba-compatible subset of Python and compiled
when numba is active. Array kernels have a separate vectorized numpy twin used
when it is not. Kernels never raise; they return status codes that the public
wrappers translate into exceptions.

The high-dimensional ridge kernels take a packed parameter vector::

    p = [delta, delta_s, r, rs_cos, rs_sin, sigma, sigma_s, lam, w0, w1]

where ``w0 = 1 - alpha`` and ``w1 = alpha``.
"""
import math

import numpy as np

from ._accel import ENABLED, njit

# solve_rhobar status codes
ITERATED = 0
BISECTED = 1
ZERO_ROOT = 2
CLOSED_FORM = 3
FAILED = -1

_INF = math.inf


@njit
def rhobar_rhs(x, ca, da, w0, cs, ds, w1, om):
    """Right-hand side of ``rho_bar**2 = RHS(rho_bar)``.

    ``ca = delta*(tau**2 + sigma**2)``, ``da = delta`` and likewise for the
    surrogate side. A side with zero weight contributes nothing.
    """
    tot = 0.0
    if w0 > 0.0:
        if om == 0.0:
            tot += ca * w0 * w0 / (da * da)
        else:
            den = da * x + om * w0
            tot += ca * w0 * w0 * x * x / (den * den)
    if w1 > 0.0:
        if om == 0.0:
            tot += cs * w1 * w1 / (ds * ds)
        else:
            den = ds * x + om * w1
            tot += cs * w1 * w1 * x * x / (den * den)
    return tot


@njit
def _ratio_minus_one(x, ca, da, w0, cs, ds, w1, om):
    # RHS(x)/x**2 - 1, strictly decreasing in x
    tot = 0.0
    if w0 > 0.0:
        den = da * x + om * w0
        tot += ca * w0 * w0 / (den * den)
    if w1 > 0.0:
        den = ds * x + om * w1
        tot += cs * w1 * w1 / (den * den)
    return tot - 1.0


@njit
def solve_rhobar(ca, da, w0, cs, ds, w1, om, max_iter):
    """Return ``(rho_bar, residual, status)``.

    Damped iteration ``x <- x/2 + sqrt(RHS(x))/2`` first, bisection on the
    monotone ratio if the iteration has not settled after ``max_iter`` steps.
    """
    hi = math.sqrt(rhobar_rhs(0.0, ca, da, w0, cs, ds, w1, 0.0))
    if om == 0.0 or hi == 0.0:
        return hi, abs(hi * hi - rhobar_rhs(hi, ca, da, w0, cs, ds, w1, om)), CLOSED_FORM
    f0 = 0.0
    if w0 > 0.0:
        f0 += ca
    if w1 > 0.0:
        f0 += cs
    if f0 <= om * om:
        return 0.0, 0.0, ZERO_ROOT

    x = math.sqrt(ca / (da * da) + cs / (ds * ds))
    for _ in range(max_iter):
        nxt = 0.5 * x + 0.5 * math.sqrt(rhobar_rhs(x, ca, da, w0, cs, ds, w1, om))
        if abs(nxt - x) <= 1e-15 * max(1.0, x):
            x = nxt
            return x, abs(x * x - rhobar_rhs(x, ca, da, w0, cs, ds, w1, om)), ITERATED
        x = nxt

    lo = 0.0
    up = hi
    for _ in range(400):
        mid = 0.5 * (lo + up)
        if mid <= lo or mid >= up:
            break
        if _ratio_minus_one(mid, ca, da, w0, cs, ds, w1, om) > 0.0:
            lo = mid
        else:
            up = mid
    x = 0.5 * (lo + up)
    res = abs(x * x - rhobar_rhs(x, ca, da, w0, cs, ds, w1, om))
    if not math.isfinite(x):
        return x, res, FAILED
    return x, res, BISECTED


@njit
def split_rhobar(x, ca, da, w0, cs, ds, w1, om):
    """Return ``(t, rho, rho_s)`` for a solved ``rho_bar = x``."""
    if w0 == 0.0:
        t = _INF
    elif w1 == 0.0:
        t = 0.0
    else:
        num = w1 * (om * w0 + da * x) * math.sqrt(cs)
        den = w0 * (om * w1 + ds * x) * math.sqrt(ca)
        if den == 0.0:
            t = _INF if num > 0.0 else 1.0
        else:
            t = num / den
    if t == _INF:
        return t, 0.0, x
    h = math.hypot(1.0, t)
    return t, x / h, x * (t / h)


@njit
def hidim_state(xi, xi_perp, om, p):
    """Evaluate the variational objective at ``(xi, |xi_perp|, |om|)``.

    Returns ``(S, tau2, tau_s2, rho_bar, t, rho, rho_s, status)``.
    """
    delta, delta_s = p[0], p[1]
    r, rs_c, rs_s = p[2], p[3], p[4]
    sigma, sigma_s, lam, w0, w1 = p[5], p[6], p[7], p[8], p[9]
    xi_perp = abs(xi_perp)
    om = abs(om)
    tau2 = (xi - r) ** 2 + xi_perp * xi_perp + om * om
    tau_s2 = (xi - rs_c) ** 2 + (xi_perp - rs_s) ** 2 + om * om
    ca = delta * (tau2 + sigma * sigma)
    cs = delta_s * (tau_s2 + sigma_s * sigma_s)
    x, _res, status = solve_rhobar(ca, delta, w0, cs, delta_s, w1, om, 10000)
    t, rho, rho_s = split_rhobar(x, ca, delta, w0, cs, delta_s, w1, om)
    s = -om * x + rho * math.sqrt(ca) + rho_s * math.sqrt(cs)
    if w0 > 0.0:
        s -= delta * rho * rho / (2.0 * w0)
    if w1 > 0.0:
        s -= delta_s * rho_s * rho_s / (2.0 * w1)
    s += 0.5 * lam * (xi * xi + xi_perp * xi_perp + om * om)
    return s, tau2, tau_s2, x, t, rho, rho_s, status


@njit
def _hidim_obj(v, p):
    return hidim_state(v[0], v[1], v[2], p)[0]


@njit
def _diameter(sim):
    d = 0.0
    k = sim.shape[0]
    for i in range(k):
        for j in range(i + 1, k):
            acc = 0.0
            for c in range(sim.shape[1]):
                acc += (sim[i, c] - sim[j, c]) ** 2
            d = max(d, math.sqrt(acc))
    return d


@njit
def nelder_mead_hidim(x0, step, p, tol, max_iter):
    """Minimize the folded objective with Nelder-Mead.

    Returns ``(x_best, f_best, diameter, iterations)``.
    """
    n = x0.shape[0]
    sim = np.empty((n + 1, n))
    fv = np.empty(n + 1)
    for i in range(n + 1):
        for c in range(n):
            sim[i, c] = x0[c]
        if i > 0:
            sim[i, i - 1] += step
        fv[i] = _hidim_obj(sim[i], p)

    it = 0
    diam = _diameter(sim)
    while it < max_iter:
        order = np.argsort(fv, kind="mergesort")
        sim = sim[order].copy()
        fv = fv[order].copy()
        diam = _diameter(sim)
        if diam <= tol:
            break
        it += 1
        cen = np.zeros(n)
        for i in range(n):
            cen += sim[i]
        cen /= n
        worst = sim[n]
        xr = cen + (cen - worst)
        fr = _hidim_obj(xr, p)
        if fr < fv[0]:
            xe = cen + 2.0 * (cen - worst)
            fe = _hidim_obj(xe, p)
            if fe < fr:
                sim[n] = xe
                fv[n] = fe
            else:
                sim[n] = xr
                fv[n] = fr
            continue
        if fr < fv[n - 1]:
            sim[n] = xr
            fv[n] = fr
            continue
        if fr < fv[n]:
            xc = cen + 0.5 * (xr - cen)
            fc = _hidim_obj(xc, p)
            if fc <= fr:
                sim[n] = xc
                fv[n] = fc
                continue
        else:
            xc = cen + 0.5 * (worst - cen)
            fc = _hidim_obj(xc, p)
            if fc < fv[n]:
                sim[n] = xc
                fv[n] = fc
                continue
        for i in range(1, n + 1):
            sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
            fv[i] = _hidim_obj(sim[i], p)

    best = 0
    for i in range(1, n + 1):
        if fv[i] < fv[best]:
            best = i
    return sim[best].copy(), fv[best], diam, it


def _seq_parts_loop(theta, theta_s, omega, alpha, lam):
    """Return ``(bias, variance_count)`` sums of the sequence-model risk."""
    bias = 0.0
    var = 0.0
    for k in range(theta.shape[0]):
        lo = lam * omega[k]
        if lo == _INF:
            bias += theta[k] * theta[k]
            continue
        shrink = 1.0 / (1.0 + lo)
        b = ((alpha + lo) * theta[k] - alpha * theta_s[k]) * shrink
        bias += b * b
        var += shrink * shrink
    return bias, var


def _seq_parts_numpy(theta, theta_s, omega, alpha, lam):
    """Return ``(bias, variance_count)`` sums of the sequence-model risk."""
    lo = lam * omega
    inf = np.isinf(lo)
    lo = np.where(inf, 0.0, lo)
    shrink = np.where(inf, 0.0, 1.0 / (1.0 + lo))
    b = np.where(inf, theta, ((alpha + lo) * theta - alpha * theta_s) * shrink)
    return float(np.sum(b * b)), float(np.sum(shrink * shrink))


sequence_parts = njit(_seq_parts_loop) if ENABLED else _seq_parts_numpy
