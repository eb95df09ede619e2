"""Weighted empirical risk minimizers.

All solvers minimize

    (1-alpha)/n * sum_i loss(theta; z_i) + alpha/m * sum_j loss(theta; z_j^s) + penalty(theta)

and drop a term whose weight is zero. A side with zero samples must carry zero
weight (``BadWeight`` otherwise), so ``alpha = 0`` runs the solver on the
original data alone and ``alpha = 1`` on the surrogate data alone, through the
same arithmetic as a single-dataset call.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.special import expit

from .errors import BadLabels, BadWeight, DimMismatch, InvalidConfig, NotConverged, SingularSystem
from .model import LabeledDataset, MixtureConfig, SequenceModelSpec

LOGISTIC_TOL = 1e-8
LOGISTIC_MAX_ITER = 100_000
_ARMIJO_C = 1e-4
_BACKTRACK = 0.5
_MAX_HALVINGS = 60


def _active_sides(original: LabeledDataset, surrogate: LabeledDataset, alpha: float):
    """Return ``[(weight / count, dataset), ...]`` for the sides that contribute."""
    if original.dim != surrogate.dim and original.count and surrogate.count:
        raise DimMismatch(f"original dim {original.dim} != surrogate dim {surrogate.dim}")
    sides = []
    for w, ds, name in ((1.0 - alpha, original, "original"), (alpha, surrogate, "surrogate")):
        if w == 0.0:
            continue
        if ds.count == 0:
            raise BadWeight(f"{name} side has weight {w} but no samples")
        sides.append((w / ds.count, ds))
    return sides


def _dim(original, surrogate):
    if original.count and surrogate.count and original.dim != surrogate.dim:
        raise DimMismatch(f"original dim {original.dim} != surrogate dim {surrogate.dim}")
    return original.dim if original.count or not surrogate.count else surrogate.dim


def weighted_mean(original: LabeledDataset, surrogate: LabeledDataset, alpha: float) -> np.ndarray:
    """``(1-alpha) * mean(original rows) + alpha * mean(surrogate rows)``.

    Raises:
        EmptyDataset: both sides are empty, or a weighted side is empty.
        DimMismatch: feature dimensions differ.
    """
    alpha = MixtureConfig(alpha).alpha
    _dim(original, surrogate)
    sides = _active_sides(original, surrogate, alpha)
    if alpha == 0.0:
        return original.features.mean(axis=0)
    if alpha == 1.0:
        return surrogate.features.mean(axis=0)
    (_, o), (_, s) = sides
    return (1.0 - alpha) * o.features.mean(axis=0) + alpha * s.features.mean(axis=0)


def _require_labels(ds: LabeledDataset, classification=False):
    if ds.responses is None:
        raise BadLabels(f"{ds.source.value} dataset has no responses")
    if classification and not np.all(np.abs(ds.responses) == 1.0):
        raise BadLabels(f"{ds.source.value} responses must be -1 or +1")


def weighted_ridge(original: LabeledDataset, surrogate: LabeledDataset,
                   config: MixtureConfig) -> np.ndarray:
    """Minimizer of the weighted squared loss plus ``lam/2 ||theta||**2``.

    Solves ``(lam I + sum_side w/k X^T X) theta = sum_side w/k X^T y`` by
    Cholesky factorization, where ``w/k`` is a side's weight over its count.

    Raises:
        SingularSystem: ``lam = 0`` and the weighted Gram matrix is singular.
        DimMismatch, BadWeight: see module docstring.
    """
    d = _dim(original, surrogate)
    sides = _active_sides(original, surrogate, config.alpha)
    gram = config.lam * np.eye(d)
    rhs = np.zeros(d)
    for c, ds in sides:
        _require_labels(ds)
        X = ds.features
        gram += c * (X.T @ X)
        rhs += c * (X.T @ ds.responses)
    if config.lam == 0.0:
        ev = np.linalg.eigvalsh(gram)
        if ev[0] <= d * np.finfo(float).eps * max(ev[-1], 1e-300):
            raise SingularSystem("lambda = 0 and the weighted Gram matrix is singular")
    try:
        return cho_solve(cho_factor(gram, lower=True), rhs)
    except LinAlgError:
        raise SingularSystem("weighted Gram matrix is not positive definite") from None


def ridge(data: LabeledDataset, lam: float) -> np.ndarray:
    """Single-dataset ridge; identical arithmetic to ``weighted_ridge`` at alpha = 0."""
    return weighted_ridge(data, LabeledDataset.empty(data.dim), MixtureConfig(0.0, lam))


def ridge_objective(theta, original, surrogate, config):
    """Return ``(value, gradient)`` of the weighted ridge objective."""
    theta = np.asarray(theta, dtype=float)
    val = 0.5 * config.lam * theta @ theta
    grad = config.lam * theta
    for c, ds in _active_sides(original, surrogate, config.alpha):
        r = ds.features @ theta - ds.responses
        val += 0.5 * c * r @ r
        grad = grad + c * (ds.features.T @ r)
    return float(val), grad


def logistic_objective(theta, original, surrogate, config):
    """Return ``(value, gradient)`` of the weighted logistic objective.

    The penalty is ``lam ||theta||**2`` (not halved).
    """
    theta = np.asarray(theta, dtype=float)
    val = config.lam * theta @ theta
    grad = 2.0 * config.lam * theta
    for c, ds in _active_sides(original, surrogate, config.alpha):
        margin = ds.responses * (ds.features @ theta)
        val += c * np.sum(np.logaddexp(0.0, -margin))
        grad = grad - c * (ds.features.T @ (ds.responses * expit(-margin)))
    return float(val), grad


def weighted_logistic(original: LabeledDataset, surrogate: LabeledDataset, config: MixtureConfig,
                      tol: float = LOGISTIC_TOL, max_iter: int = LOGISTIC_MAX_ITER) -> np.ndarray:
    """Penalized weighted logistic regression by full-batch gradient descent.

    Each iteration starts from step 1 and halves it until the Armijo condition
    ``f(theta - t g) <= f(theta) - 1e-4 t ||g||**2`` holds. Iteration stops
    when ``||g|| <= tol``.

    Raises:
        BadLabels: responses missing or outside {-1, +1}.
        InvalidConfig: ``lam <= 0``.
        NotConverged: ``max_iter`` reached; carries the last iterate and
            gradient norm.
    """
    if config.lam <= 0:
        raise InvalidConfig("lambda", "logistic regression requires lambda > 0")
    d = _dim(original, surrogate)
    for _, ds in _active_sides(original, surrogate, config.alpha):
        _require_labels(ds, classification=True)
    theta = np.zeros(d)
    f, g = logistic_objective(theta, original, surrogate, config)
    gn = float(np.linalg.norm(g))
    for _ in range(max_iter):
        if gn <= tol:
            return theta
        step = 1.0
        gg = gn * gn
        for _ in range(_MAX_HALVINGS):
            cand = theta - step * g
            fc, gc = logistic_objective(cand, original, surrogate, config)
            if fc <= f - _ARMIJO_C * step * gg:
                break
            step *= _BACKTRACK
        else:
            # no representable decrease left; accept only if already stationary
            raise NotConverged("line search stalled", iterate=theta, residual=gn)
        theta, f, g = cand, fc, gc
        gn = float(np.linalg.norm(g))
    if gn <= tol:
        return theta
    raise NotConverged(f"logistic descent hit max_iter={max_iter}", iterate=theta, residual=gn)


def sequence_estimate(spec: SequenceModelSpec, obs_mean, obs_mean_s,
                      config: MixtureConfig) -> np.ndarray:
    """Coordinate-wise ``((1-alpha) ybar + alpha ybar_s) / (1 + lam omega)``."""
    y = np.asarray(obs_mean, dtype=float)
    ys = np.asarray(obs_mean_s, dtype=float)
    if y.shape != (spec.dim,) or ys.shape != (spec.dim,):
        raise DimMismatch(f"observations must have shape ({spec.dim},)")
    a = config.alpha
    if a == 0.0:
        num = y.copy()
    elif a == 1.0:
        num = ys.copy()
    else:
        num = (1.0 - a) * y + a * ys
    if config.lam == 0.0:
        return num
    return num / (1.0 + config.lam * spec.omega)
