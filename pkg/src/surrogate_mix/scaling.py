"""Power-law fits and the mixture scaling law.

Each source is summarized by ``loss(n) = A + B n**(-beta)``. For a mixture
with surrogate weight ``alpha`` the predicted risk is

    R* + alpha**2 G + [alpha**2 (B_su m**-beta_su)**(1/beta)
                       + (1-alpha)**2 (B_or n**-beta_or)**(1/beta)]**beta

with ``R* = A_or``, ``G = max(A_su - A_or, 0)`` and ``beta = beta_or``.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from .errors import BadWeight, InvalidConfig, TooFewPoints
from .model import PowerLawFit, ScalingLawModel

BETA_MIN, BETA_MAX = 0.01, 4.0
BETA_GRID = np.geomspace(BETA_MIN, BETA_MAX, 200)
DEGENERATE_TOL = 1e-12
ALPHA_SCAN = 101
MAX_SURROGATE = 10**12
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f, lo, hi, tol=1e-12, max_iter=200):
    """Minimize a unimodal scalar ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = float(lo), float(hi)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol * max(1.0, abs(a) + abs(b)):
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def _nnls_line(x, y):
    """Least squares ``y ~ A + B x`` with ``A, B >= 0``; returns ``(A, B, sse)``."""
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    cands = []
    if sxx > 0:
        b = np.sum((x - xm) * (y - ym)) / sxx
        a = ym - b * xm
        if a >= 0 and b >= 0:
            cands.append((a, b))
    cands.append((max(ym, 0.0), 0.0))
    xx = x @ x
    cands.append((0.0, max(x @ y / xx, 0.0) if xx > 0 else 0.0))
    best = None
    for a, b in cands:
        r = y - a - b * x
        sse = float(r @ r)
        if best is None or sse < best[2]:
            best = (float(a), float(b), sse)
    return best


def _parse_points(points):
    try:
        arr = np.array([(float(n), float(loss)) for n, loss in points], dtype=float)
    except (TypeError, ValueError):
        raise InvalidConfig("points", "expected (n, loss) pairs") from None
    if arr.size == 0:
        raise TooFewPoints("no points given")
    n, y = arr[:, 0], arr[:, 1]
    if not np.all(np.isfinite(arr)):
        raise InvalidConfig("loss", "losses and sizes must be finite")
    if np.any(n < 1) or np.any(n != np.floor(n)):
        raise InvalidConfig("n", "sizes must be integers >= 1")
    if np.unique(n).size < 4:
        raise TooFewPoints(f"need >= 4 distinct n values, got {np.unique(n).size}")
    return n, y


def fit_power_law(points) -> PowerLawFit:
    """Fit ``A + B n**(-beta)`` by unweighted least squares in loss space.

    ``beta`` is scanned on a 200-point geometric grid over [0.01, 4]; ``(A, B)``
    is the closed-form non-negative least squares solution at each ``beta``;
    the best grid cell is then refined by golden-section search. Constant
    losses (spread <= 1e-12) return ``B = 0, beta = 1`` with ``degenerate`` set.

    Raises:
        TooFewPoints: fewer than four distinct ``n``.
    """
    n, y = _parse_points(points)
    if y.max() - y.min() <= DEGENERATE_TOL:
        a = float(max(y.mean(), 0.0))
        rmse = float(np.sqrt(np.mean((y - a) ** 2)))
        return PowerLawFit(a, 0.0, 1.0, rmse, degenerate=True)
    logn = np.log(n)

    def sse(beta):
        return _nnls_line(np.exp(-beta * logn), y)[2]

    scores = np.array([sse(b) for b in BETA_GRID])
    i = int(np.argmin(scores))
    lo = BETA_GRID[max(i - 1, 0)]
    hi = BETA_GRID[min(i + 1, len(BETA_GRID) - 1)]
    beta, s = golden_section(sse, lo, hi)
    if not s < scores[i]:
        beta = float(BETA_GRID[i])
    a, b, s = _nnls_line(np.exp(-beta * logn), y)
    return PowerLawFit(a, b, float(beta), math.sqrt(s / len(y)))


def build_model(original_points, surrogate_points) -> ScalingLawModel:
    """Fit both sources and assemble the mixture-law ingredients.

    ``gap_clamped`` is set when the surrogate asymptote falls below the
    original one and the gap was clamped to 0.
    """
    fo = fit_power_law(original_points)
    fs = fit_power_law(surrogate_points)
    raw = fs.asymptote - fo.asymptote
    return ScalingLawModel(
        bayes_risk=fo.asymptote,
        surrogate_gap=max(raw, 0.0),
        original_fit=fo,
        surrogate_fit=fs,
        beta=fo.exponent,
        gap_clamped=raw < 0,
    )


def _check(n, m, alpha):
    if not 0.0 <= alpha <= 1.0:
        raise InvalidConfig("alpha", f"must lie in [0, 1], got {alpha}")
    if n < 0 or m < 0:
        raise InvalidConfig("n", "sample counts must be >= 0")
    if alpha > 0 and m < 1:
        raise BadWeight("alpha > 0 with no surrogate samples")
    if alpha < 1 and n < 1:
        raise BadWeight("alpha < 1 with no original samples")


def _excess_su(model, m):
    return 0.0 if math.isinf(m) else model.surrogate_fit.excess(m)


def predict_mixture_risk(model: ScalingLawModel, n, m, alpha: float) -> float:
    """Mixture scaling-law prediction; endpoints use their exact one-source forms.

    ``m`` may be ``math.inf`` (surrogate excess vanishes).
    """
    alpha = float(alpha)
    _check(n, m, alpha)
    if alpha == 0.0:
        return model.bayes_risk + model.original_fit.excess(n)
    if alpha == 1.0:
        return model.bayes_risk + model.surrogate_gap + _excess_su(model, m)
    inv = 1.0 / model.beta
    bracket = (alpha * alpha * _excess_su(model, m) ** inv
               + (1.0 - alpha) ** 2 * model.original_fit.excess(n) ** inv)
    return model.bayes_risk + alpha * alpha * model.surrogate_gap + bracket ** model.beta


def optimal_alpha(model: ScalingLawModel, n, m):
    """Return ``(alpha_star, risk_star)`` over ``alpha`` in [0, 1].

    A 101-point scan locates the best cell, golden-section search refines it,
    and the best of the scan and the refinement is returned.
    """
    if m == 0:
        return 0.0, predict_mixture_risk(model, n, m, 0.0)
    if n == 0:
        return 1.0, predict_mixture_risk(model, n, m, 1.0)

    def f(a):
        return predict_mixture_risk(model, n, m, a)

    grid = np.linspace(0.0, 1.0, ALPHA_SCAN)
    vals = [f(a) for a in grid]
    i = int(np.argmin(vals))
    best = (float(grid[i]), float(vals[i]))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, ALPHA_SCAN - 1)]
    a, v = golden_section(f, lo, hi, tol=1e-13)
    if v < best[1]:
        best = (float(a), float(v))
    return best


def required_surrogate(model: ScalingLawModel, n, target_risk: float):
    """Smallest ``m <= 1e12`` whose optimal mixture risk is ``<= target_risk``.

    Returns ``None`` when no such ``m`` exists (including targets below the
    ``m -> inf`` limit).
    """
    target = float(target_risk)
    if not math.isfinite(target):
        raise InvalidConfig("target_risk", "must be finite")

    def risk(m):
        return optimal_alpha(model, n, m)[1]

    if risk(1) <= target:
        return 1
    if risk(math.inf) > target:
        return None
    hi = 2
    while risk(hi) > target:
        if hi >= MAX_SURROGATE:
            return None
        hi = min(2 * hi, MAX_SURROGATE)
    lo = hi // 2
    # invariant: risk(lo) > target >= risk(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if risk(mid) <= target:
            hi = mid
        else:
            lo = mid
    return hi


def read_loss_csv(path) -> list[tuple[int, float]]:
    """Read a ``n,loss`` table."""
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].lstrip().startswith("#")]
    if not rows or [c.strip() for c in rows[0]] != ["n", "loss"]:
        raise InvalidConfig("header", f"{path}: expected header 'n,loss'")
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise InvalidConfig("row", f"{path}:{lineno}: expected 2 columns")
        try:
            nval = float(row[0])
            loss = float(row[1])
        except ValueError:
            raise InvalidConfig("row", f"{path}:{lineno}: not numeric") from None
        if nval != int(nval):
            raise InvalidConfig("n", f"{path}:{lineno}: n must be an integer")
        out.append((int(nval), loss))
    return out


def write_loss_csv(path, points) -> None:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "loss"])
        for n, loss in points:
            w.writerow([int(n), format(float(loss), ".17g")])
