"""Monte Carlo harness: train on simulated data, score, aggregate.

Generator parameters (``ExperimentPlan.params``):

GaussianMean, HiDimLinear
    ``d`` (required); either ``gap`` (``theta* = 0``, ``theta_s = sqrt(gap) e1``)
    or ``r``, ``r_s``, ``gamma`` (``theta* = r e1``,
    ``theta_s = r_s (cos gamma e1 + sin gamma e2)``); ``sigma``, ``sigma_s``.
GaussianMixture
    ``d`` (required), ``gamma``: unit vectors ``e1`` and ``cos gamma e1 + sin gamma e2``.
SequenceModel
    either explicit ``theta_star``, ``theta_star_s``, ``omega`` lists, or a
    power-law construction from ``dim``, ``mu``, ``rho_decay`` and
    ``shift_amplitude`` (see :func:`power_law_sequence`); plus ``sigma``,
    ``sigma_s``, and optional ``lambda_rule = "star"`` to use the rate-optimal
    penalty instead of ``lambda_grid``.

Every cell ``(n, m, alpha)`` is numbered ``k`` in lexicographic order of the
grids; replicate ``j`` draws from streams keyed by ``(seed, k, j, purpose)``.
Cells whose empty side would carry weight are skipped (they keep their index).
When ``lambda_grid`` has several entries the penalty is chosen per replicate on
fresh validation draws of size ``max(1000, n)`` from the original distribution.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from itertools import product
from pathlib import Path

import numpy as np

from .. import estimators as est
from .._parallel import ordered_map
from ..errors import ExperimentError, InvalidConfig, TaskMismatch
from ..model import ExperimentPlan, GeneratorKind, LabeledDataset, MixtureConfig, SequenceModelSpec, Source
from ..oracles.sequence import sequence_lambda_star
from . import generators as gen
from .rng import TEST, TRAIN_ORIGINAL, TRAIN_SURROGATE, VALIDATION, as_generator, normals, signs, stream

TASKS = ("mean", "linear", "classification")
CSV_HEADER = "n,m,alpha,risk_mean,risk_se,replicates"
MIN_VALIDATION = 1000


def estimate_risk(task: str, theta_hat, truth, test_size: int = 10_000, stream=0):
    """Test risk of ``theta_hat`` and its standard error.

    For ``mean`` and ``linear`` the excess risk is exactly
    ``||theta_hat - theta*||**2`` (identity design covariance) and the
    standard error is 0. For ``classification`` the 0-1 error is measured on
    ``test_size`` fresh mixture draws with ties predicted as +1. Only the law
    of ``<x, theta_hat>`` matters, and given the label ``y`` it is
    ``y <theta*, theta_hat> + ||theta_hat|| z``, so one label and one normal
    per test point suffice.

    Args:
        task: one of ``mean``, ``linear``, ``classification``.
        theta_hat: fitted parameter.
        truth: ``theta*`` as a vector, or a mapping with key ``theta``.
        test_size: number of test draws (classification only).
        stream: generator, seed, or ``(seed, *key)`` tuple.

    Raises:
        TaskMismatch: unknown task or incompatible shapes.
    """
    if isinstance(truth, dict):
        truth = truth.get("theta")
    theta = np.asarray(truth, dtype=float)
    th = np.asarray(theta_hat, dtype=float)
    if task not in TASKS:
        raise TaskMismatch(f"unknown task {task!r}")
    if th.shape != theta.shape or th.ndim != 1:
        raise TaskMismatch(f"theta_hat shape {th.shape} != truth shape {theta.shape}")
    if task in ("mean", "linear"):
        diff = th - theta
        return float(diff @ diff), 0.0
    if abs(np.linalg.norm(theta) - 1.0) > 1e-8:
        raise TaskMismatch("classification truth must be a unit vector")
    if test_size < 1:
        raise InvalidConfig("test_size", "must be >= 1")
    g = as_generator(stream)
    y = signs(g, test_size)
    score = y * float(theta @ th) + float(np.linalg.norm(th)) * normals(g, test_size)
    pred = np.where(score >= 0.0, 1.0, -1.0)
    err = float(np.mean(pred != y))
    return err, math.sqrt(err * (1.0 - err) / test_size)


def validation_loss(kind: str, validation: LabeledDataset, theta_hat) -> float:
    """Loss of ``theta_hat`` on held-out original data.

    ``mean``: average squared distance of the rows to ``theta_hat``;
    ``ridge``: mean squared prediction error; ``logistic``: 0-1 error.
    """
    th = np.asarray(theta_hat, dtype=float)
    X = validation.features
    if kind == "mean":
        return float(np.mean(np.sum((X - th) ** 2, axis=1)))
    if kind == "ridge":
        r = validation.responses - X @ th
        return float(np.mean(r * r))
    if kind == "logistic":
        pred = np.where(X @ th >= 0.0, 1.0, -1.0)
        return float(np.mean(pred != validation.responses))
    raise TaskMismatch(f"unknown validation loss {kind!r}")


def select_by_validation(fit, alphas, lambdas, loss):
    """Grid search over ``(alpha, lambda)`` minimizing ``loss(fit(alpha, lambda))``.

    Candidates are visited with alpha ascending and lambda descending and a
    candidate replaces the incumbent only if strictly better, so ties go to
    the smaller alpha and then the larger lambda.

    Returns:
        ``(alpha, lambda, theta_hat)`` of the winner.
    """
    alphas = sorted(set(float(a) for a in alphas))
    lambdas = sorted(set(float(x) for x in lambdas), reverse=True)
    if not alphas or not lambdas:
        raise InvalidConfig("grid", "candidate grids must be non-empty")
    best = None
    for a in alphas:
        for lam in lambdas:
            th = fit(a, lam)
            v = loss(th)
            if best is None or v < best[0]:
                best = (v, a, lam, th)
    return best[1], best[2], best[3]


def power_law_sequence(dim, mu, rho_decay, shift_amplitude=0.0):
    """Eigenvalues ``k**(2 mu)``, ``theta*_k = k**-(rho + 1/2)`` and a shifted copy.

    The surrogate coefficients are ``theta*_k (1 + A s_k)`` with alternating
    signs ``s_k = (-1)**k``, so the shift has the same decay as ``theta*``.
    """
    k = np.arange(1, int(dim) + 1, dtype=float)
    omega = k ** (2.0 * mu)
    theta = k ** (-(rho_decay + 0.5))
    sgn = np.where(k % 2 == 0, 1.0, -1.0)
    return theta, theta * (1.0 + shift_amplitude * sgn), omega


@dataclass(frozen=True)
class ResultRow:
    n: int
    m: int
    alpha: float
    risk_mean: float
    risk_se: float
    replicates: int


@dataclass(frozen=True)
class _Setting:
    kind: GeneratorKind
    d: int
    theta: np.ndarray
    theta_s: np.ndarray
    sigma: float
    sigma_s: float
    estimator: str
    seq: SequenceModelSpec | None = None
    lambda_star: bool = False


_KNOWN = {
    GeneratorKind.GAUSSIAN_MEAN: {"d", "gap", "r", "r_s", "gamma", "sigma", "sigma_s"},
    GeneratorKind.HIDIM_LINEAR: {"d", "gap", "r", "r_s", "gamma", "sigma", "sigma_s"},
    GeneratorKind.GAUSSIAN_MIXTURE: {"d", "gamma"},
    GeneratorKind.SEQUENCE_MODEL: {"theta_star", "theta_star_s", "omega", "dim", "mu", "rho_decay",
                                   "shift_amplitude", "sigma", "sigma_s", "lambda_rule"},
}


def _num(params, key, default=None, lo=None):
    if key not in params:
        if default is None:
            raise InvalidConfig(f"params.{key}", "missing")
        return default
    try:
        v = float(params[key])
    except (TypeError, ValueError):
        raise InvalidConfig(f"params.{key}", f"not a number: {params[key]!r}") from None
    if not math.isfinite(v) or (lo is not None and v < lo):
        raise InvalidConfig(f"params.{key}", f"invalid value {v}")
    return v


def _pair(params, d):
    theta, theta_s = np.zeros(d), np.zeros(d)
    if "gap" in params:
        if {"r", "r_s", "gamma"} & set(params):
            raise InvalidConfig("params.gap", "give either gap or r/r_s/gamma, not both")
        theta_s[0] = math.sqrt(_num(params, "gap", lo=0.0))
        return theta, theta_s
    r, rs, g = _num(params, "r", 1.0, 0.0), _num(params, "r_s", 1.0, 0.0), _num(params, "gamma", 0.0)
    if d < 2 and math.sin(g) != 0.0:
        raise InvalidConfig("params.gamma", "a non-zero angle needs d >= 2")
    theta[0] = r
    theta_s[0] = rs * math.cos(g)
    if d >= 2:
        theta_s[1] = rs * math.sin(g)
    return theta, theta_s


def _setting(plan: ExperimentPlan) -> _Setting:
    p, kind = plan.params, plan.generator
    unknown = set(p) - _KNOWN[kind]
    if unknown:
        raise InvalidConfig(f"params.{sorted(unknown)[0]}", f"not a {kind.value} parameter")
    sigma, sigma_s = _num(p, "sigma", 1.0, 0.0), _num(p, "sigma_s", 1.0, 0.0)
    if kind is GeneratorKind.SEQUENCE_MODEL:
        if plan.estimator != "auto":
            raise InvalidConfig("estimator", "SequenceModel uses its own estimator; use 'auto'")
        if "theta_star" in p:
            th, ths, om = p["theta_star"], p.get("theta_star_s"), p.get("omega")
        else:
            th, ths, om = power_law_sequence(int(_num(p, "dim", lo=1)), _num(p, "mu"),
                                             _num(p, "rho_decay"), _num(p, "shift_amplitude", 0.0))
        spec = SequenceModelSpec(th, ths, om, sigma, sigma_s, 1, 1,
                                 _num(p, "mu", 1.0), _num(p, "rho_decay", 1.0))
        rule = p.get("lambda_rule")
        if rule not in (None, "star"):
            raise InvalidConfig("params.lambda_rule", f"unknown rule {rule!r}")
        return _Setting(kind, spec.dim, spec.theta_star, spec.theta_star_s, spec.sigma, spec.sigma_s,
                        "sequence", spec, rule == "star")
    d = int(_num(p, "d", lo=1))
    if kind is GeneratorKind.GAUSSIAN_MIXTURE:
        g = _num(p, "gamma", 0.0)
        theta, theta_s = np.zeros(d), np.zeros(d)
        theta[0] = 1.0
        theta_s[0] = math.cos(g)
        if d >= 2:
            theta_s[1] = math.sin(g)
        elif math.sin(g) != 0.0:
            raise InvalidConfig("params.gamma", "a non-zero angle needs d >= 2")
        estimator = "logistic" if plan.estimator == "auto" else plan.estimator
        if estimator == "logistic" and min(plan.lambda_grid) <= 0:
            raise InvalidConfig("lambda_grid", "logistic regression needs lambda > 0")
        return _Setting(kind, d, theta, theta_s, 1.0, 1.0, estimator)
    theta, theta_s = _pair(p, d)
    if kind is GeneratorKind.GAUSSIAN_MEAN:
        if plan.estimator not in ("auto",):
            raise InvalidConfig("estimator", "GaussianMean uses the weighted mean; use 'auto'")
        return _Setting(kind, d, theta, theta_s, sigma, sigma_s, "mean")
    if plan.estimator == "logistic":
        raise InvalidConfig("estimator", "HiDimLinear supports ridge only")
    return _Setting(kind, d, theta, theta_s, sigma, sigma_s, "ridge")


def _draw(s: _Setting, count, original, key):
    theta = s.theta if original else s.theta_s
    src = Source.ORIGINAL if original else Source.SURROGATE
    if s.kind is GeneratorKind.GAUSSIAN_MEAN:
        return gen.gen_gaussian_mean(s.d, count, theta, s.sigma if original else s.sigma_s, key, src)
    if s.kind is GeneratorKind.HIDIM_LINEAR:
        return gen.gen_hidim_linear(s.d, count, theta, s.sigma if original else s.sigma_s, key, src)
    return gen.gen_gaussian_mixture(s.d, count, theta, key, src)


def _fit(s: _Setting, orig, sur, alpha, lam):
    if s.estimator == "mean":
        return est.weighted_mean(orig, sur, alpha)
    cfg = MixtureConfig(alpha, lam)
    if s.estimator == "ridge":
        return est.weighted_ridge(orig, sur, cfg)
    return est.weighted_logistic(orig, sur, cfg)


def _replicate(s: _Setting, plan: ExperimentPlan, k, n, m, alpha, j) -> float:
    seed = plan.seed
    lambdas = plan.lambda_grid
    if s.kind is GeneratorKind.SEQUENCE_MODEL:
        spec = s.seq.with_counts(max(n, 1), max(m, 1))
        ybar, ybar_s = gen.gen_sequence_obs(spec, stream(seed, k, j, TRAIN_ORIGINAL))

        def fit(a, lam):
            return est.sequence_estimate(spec, ybar, ybar_s, MixtureConfig(a, lam))

        if s.lambda_star:
            th = fit(alpha, sequence_lambda_star(spec, alpha))
        elif len(lambdas) == 1:
            th = fit(alpha, lambdas[0])
        else:
            nv = max(MIN_VALIDATION, n)
            yv = spec.theta_star + spec.sigma / math.sqrt(nv) * normals(
                stream(seed, k, j, VALIDATION), spec.dim)
            _, _, th = select_by_validation(fit, [alpha], lambdas,
                                            lambda t: float(np.sum((yv - t) ** 2)))
        return estimate_risk("mean", th, spec.theta_star)[0]

    orig = _draw(s, n, True, stream(seed, k, j, TRAIN_ORIGINAL))
    sur = _draw(s, m, False, stream(seed, k, j, TRAIN_SURROGATE))
    if s.estimator == "mean" or len(lambdas) == 1:
        th = _fit(s, orig, sur, alpha, lambdas[0])
    else:
        val = _draw(s, max(MIN_VALIDATION, n), True, stream(seed, k, j, VALIDATION))
        _, _, th = select_by_validation(lambda a, lam: _fit(s, orig, sur, a, lam), [alpha], lambdas,
                                        lambda t: validation_loss(s.estimator, val, t))
    if s.kind is GeneratorKind.GAUSSIAN_MIXTURE:
        return estimate_risk("classification", th, s.theta, plan.test_size,
                             stream(seed, k, j, TEST))[0]
    task = "mean" if s.kind is GeneratorKind.GAUSSIAN_MEAN else "linear"
    return estimate_risk(task, th, s.theta)[0]


def cells(plan: ExperimentPlan):
    """Yield ``(k, n, m, alpha, runnable)`` in lexicographic grid order."""
    grid = product(sorted(set(plan.n_grid)), sorted(set(plan.m_grid)), sorted(set(plan.alpha_grid)))
    for k, (n, m, a) in enumerate(grid):
        runnable = not ((n == 0 and a < 1.0) or (m == 0 and a > 0.0))
        yield k, n, m, a, runnable


def run_experiment(plan: ExperimentPlan, threads=None) -> list[ResultRow]:
    """Run every runnable cell of ``plan``; rows come back in grid order.

    Replicates run on a thread pool; results are gathered by index so the
    output does not depend on the number of workers.

    Raises:
        ExperimentError: a replicate failed; the message names the cell.
    """
    s = _setting(plan)
    todo = [c for c in cells(plan) if c[4]]
    jobs = [(c, j) for c in todo for j in range(plan.replicates)]

    def work(job):
        (k, n, m, a, _), j = job
        try:
            return _replicate(s, plan, k, n, m, a, j)
        except Exception as exc:  # noqa: BLE001 - re-raised with cell context
            raise ExperimentError(
                f"cell n={n} m={m} alpha={a!r} replicate {j} failed: {type(exc).__name__}: {exc}"
            ) from exc

    risks = ordered_map(work, jobs, threads)
    rows = []
    R = plan.replicates
    for i, (k, n, m, a, _) in enumerate(todo):
        vals = np.array(risks[i * R:(i + 1) * R])
        se = float(np.std(vals, ddof=1) / math.sqrt(R)) if R > 1 else 0.0
        rows.append(ResultRow(n, m, a, float(np.mean(vals)), se, R))
    return rows


def format_results(rows) -> str:
    """CSV text with 17-significant-digit floats."""
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in rows:
        buf.write(f"{r.n},{r.m},{r.alpha:.17g},{r.risk_mean:.17g},{r.risk_se:.17g},{r.replicates}\n")
    return buf.getvalue()


def write_results(rows, path) -> None:
    Path(path).write_text(format_results(rows))


def read_results(path) -> list[ResultRow]:
    lines = Path(path).read_text().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise InvalidConfig("header", f"expected '{CSV_HEADER}'")
    out = []
    for line in lines[1:]:
        n, m, a, rm, se, R = line.split(",")
        out.append(ResultRow(int(n), int(m), float(a), float(rm), float(se), int(R)))
    return out
