"""Domain types shared by the estimators, oracles, scaling law and simulator.

Every type validates its invariants on construction and round-trips through
JSON via ``to_dict``/``from_dict`` (see :func:`dumps` and :func:`loads`).
Array fields are copied and frozen, so instances are safe to share.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any

import numpy as np

from .errors import InvalidConfig, InvalidRegime, SingularHessian

__all__ = [
    "Source",
    "GeneratorKind",
    "LabeledDataset",
    "MixtureConfig",
    "PowerLawFit",
    "ScalingLawModel",
    "RiskCurve",
    "SequenceModelSpec",
    "NonparamSpec",
    "HiDimSpec",
    "HiDimSolution",
    "LowDimCurvature",
    "ExperimentPlan",
    "dumps",
    "loads",
]


class Source(str, Enum):
    ORIGINAL = "Original"
    SURROGATE = "Surrogate"


class GeneratorKind(str, Enum):
    GAUSSIAN_MEAN = "GaussianMean"
    GAUSSIAN_MIXTURE = "GaussianMixture"
    HIDIM_LINEAR = "HiDimLinear"
    SEQUENCE_MODEL = "SequenceModel"


def _frozen(a, name, ndim=None, dtype=float):
    try:
        arr = np.array(a, dtype=dtype, copy=True)
    except (TypeError, ValueError) as exc:
        raise InvalidConfig(name, f"not numeric: {exc}") from None
    if ndim is not None and arr.ndim != ndim:
        raise InvalidConfig(name, f"expected {ndim}-d array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _finite(x, name):
    try:
        x = float(x)
    except (TypeError, ValueError):
        raise InvalidConfig(name, f"not a real number: {x!r}") from None
    if not math.isfinite(x):
        raise InvalidConfig(name, f"must be finite, got {x}")
    return x


def _positive_int(x, name, allow_zero=False):
    if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
        if isinstance(x, float) and x.is_integer():
            x = int(x)
        else:
            raise InvalidConfig(name, f"must be an integer, got {x!r}")
    x = int(x)
    if x < 0 or (x == 0 and not allow_zero):
        raise InvalidConfig(name, f"must be {'non-negative' if allow_zero else 'positive'}, got {x}")
    return x


class _ArrayEq:
    """Field-wise equality that understands numpy arrays."""

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        for f in fields(self):
            a, b = getattr(self, f.name), getattr(other, f.name)
            if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
                if a is None or b is None or not np.array_equal(a, b):
                    return False
            elif a != b:
                return False
        return True

    __hash__ = None


@dataclass(frozen=True, eq=False)
class LabeledDataset(_ArrayEq):
    """Design matrix plus optional responses, tagged by source.

    ``responses`` may be ``None`` for unlabeled (mean-estimation) samples.
    """

    features: np.ndarray
    responses: np.ndarray | None = None
    source: Source = Source.ORIGINAL

    def __post_init__(self):
        X = _frozen(self.features, "features")
        if X.ndim == 1:
            X = _frozen(X.reshape(-1, 1), "features")
        if X.ndim != 2:
            raise InvalidConfig("features", f"expected a matrix, got shape {X.shape}")
        object.__setattr__(self, "features", X)
        if self.responses is not None:
            y = _frozen(self.responses, "responses", ndim=1)
            if y.shape[0] != X.shape[0]:
                raise InvalidConfig(
                    "responses", f"length {y.shape[0]} != feature rows {X.shape[0]}"
                )
            object.__setattr__(self, "responses", y)
        try:
            object.__setattr__(self, "source", Source(self.source))
        except ValueError:
            raise InvalidConfig("source", f"unknown source {self.source!r}") from None

    @property
    def count(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]

    @classmethod
    def empty(cls, dim, source=Source.SURROGATE, labeled=True):
        return cls(np.zeros((0, dim)), np.zeros(0) if labeled else None, source)

    def to_dict(self):
        return {
            "features": self.features.tolist(),
            "responses": None if self.responses is None else self.responses.tolist(),
            "source": self.source.value,
        }

    @classmethod
    def from_dict(cls, d):
        X = np.array(d["features"], dtype=float)
        if X.size == 0:
            X = X.reshape(0, 0) if X.ndim < 2 else X
        return cls(X, d.get("responses"), d.get("source", Source.ORIGINAL))


@dataclass(frozen=True)
class MixtureConfig:
    """Surrogate weight ``alpha`` and ridge penalty ``lam`` (JSON key ``lambda``)."""

    alpha: float
    lam: float = 0.0

    def __post_init__(self):
        a = _finite(self.alpha, "alpha")
        lam = _finite(self.lam, "lambda")
        if not 0.0 <= a <= 1.0:
            raise InvalidConfig("alpha", f"must lie in [0, 1], got {a}")
        if lam < 0:
            raise InvalidConfig("lambda", f"must be >= 0, got {lam}")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "lam", lam)

    def to_dict(self):
        return {"alpha": self.alpha, "lambda": self.lam}

    @classmethod
    def from_dict(cls, d):
        return cls(d["alpha"], d.get("lambda", 0.0))


@dataclass(frozen=True)
class PowerLawFit:
    """``loss(n) = asymptote + coefficient * n**(-exponent)``."""

    asymptote: float
    coefficient: float
    exponent: float
    residual: float = 0.0
    degenerate: bool = False

    def __post_init__(self):
        for name in ("asymptote", "coefficient", "exponent", "residual"):
            object.__setattr__(self, name, _finite(getattr(self, name), name))
        if self.asymptote < 0:
            raise InvalidConfig("asymptote", f"must be >= 0, got {self.asymptote}")
        if self.coefficient < 0:
            raise InvalidConfig("coefficient", f"must be >= 0, got {self.coefficient}")
        if self.exponent <= 0:
            raise InvalidConfig("exponent", f"must be > 0, got {self.exponent}")
        if self.residual < 0:
            raise InvalidConfig("residual", f"must be >= 0, got {self.residual}")
        object.__setattr__(self, "degenerate", bool(self.degenerate))

    def excess(self, n):
        """Excess over the asymptote at sample size ``n``."""
        return self.coefficient * float(n) ** -self.exponent

    def predict(self, n):
        return self.asymptote + self.excess(n)

    def to_dict(self):
        return {
            "asymptote": self.asymptote,
            "coefficient": self.coefficient,
            "exponent": self.exponent,
            "residual": self.residual,
            "degenerate": self.degenerate,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["asymptote"], d["coefficient"], d["exponent"],
                   d.get("residual", 0.0), d.get("degenerate", False))


@dataclass(frozen=True)
class ScalingLawModel:
    """Fitted ingredients of the mixture scaling law.

    ``surrogate_gap`` is the surrogate asymptote minus the original one,
    clamped at zero (``gap_clamped`` records that the clamp fired).
    ``beta`` is the bracket exponent and always equals the original fit's.
    """

    bayes_risk: float
    surrogate_gap: float
    original_fit: PowerLawFit
    surrogate_fit: PowerLawFit
    beta: float
    gap_clamped: bool = False

    def __post_init__(self):
        object.__setattr__(self, "bayes_risk", _finite(self.bayes_risk, "bayes_risk"))
        object.__setattr__(self, "surrogate_gap", _finite(self.surrogate_gap, "surrogate_gap"))
        object.__setattr__(self, "beta", _finite(self.beta, "beta"))
        if self.beta <= 0:
            raise InvalidConfig("beta", f"must be > 0, got {self.beta}")
        if self.surrogate_gap < 0:
            raise InvalidConfig("surrogate_gap", f"must be >= 0, got {self.surrogate_gap}")
        if self.beta != self.original_fit.exponent:
            raise InvalidConfig("beta", "must equal original_fit.exponent")
        expected = max(self.surrogate_fit.asymptote - self.original_fit.asymptote, 0.0)
        if not math.isclose(self.surrogate_gap, expected, rel_tol=1e-12, abs_tol=1e-12):
            raise InvalidConfig(
                "surrogate_gap",
                f"{self.surrogate_gap} != surrogate asymptote - original asymptote ({expected})",
            )
        object.__setattr__(self, "gap_clamped", bool(self.gap_clamped))

    def to_dict(self):
        return {
            "bayes_risk": self.bayes_risk,
            "surrogate_gap": self.surrogate_gap,
            "original_fit": self.original_fit.to_dict(),
            "surrogate_fit": self.surrogate_fit.to_dict(),
            "beta": self.beta,
            "gap_clamped": self.gap_clamped,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(
                d["bayes_risk"],
                d["surrogate_gap"],
                PowerLawFit.from_dict(d["original_fit"]),
                PowerLawFit.from_dict(d["surrogate_fit"]),
                d["beta"],
                d.get("gap_clamped", False),
            )
        except KeyError as exc:
            raise InvalidConfig(exc.args[0], "missing field") from None


@dataclass(frozen=True)
class RiskCurve:
    """Sequence of ``(alpha, risk, std_error)`` points with increasing alpha."""

    points: tuple

    def __post_init__(self):
        pts = []
        for p in self.points:
            if len(p) != 3:
                raise InvalidConfig("points", f"expected (alpha, risk, std_error), got {p!r}")
            a, r, se = (float(v) for v in p)
            if not 0.0 <= a <= 1.0:
                raise InvalidConfig("points", f"alpha {a} outside [0, 1]")
            if not se >= 0:
                raise InvalidConfig("points", f"std_error must be >= 0, got {se}")
            pts.append((a, r, se))
        for (a0, _, _), (a1, _, _) in zip(pts, pts[1:]):
            if not a1 > a0:
                raise InvalidConfig("points", "alphas must be strictly increasing")
        object.__setattr__(self, "points", tuple(pts))

    @property
    def alphas(self):
        return np.array([p[0] for p in self.points])

    @property
    def risks(self):
        return np.array([p[1] for p in self.points])

    @property
    def std_errors(self):
        return np.array([p[2] for p in self.points])

    def argmin(self):
        """Return ``(alpha, risk)`` of the smallest risk (first on ties)."""
        i = int(np.argmin(self.risks))
        return self.points[i][0], self.points[i][1]

    def __len__(self):
        return len(self.points)

    def to_dict(self):
        return {"points": [list(p) for p in self.points]}

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(tuple(p) for p in d["points"]))


@dataclass(frozen=True, eq=False)
class SequenceModelSpec(_ArrayEq):
    """Gaussian sequence model with diagonal penalty eigenvalues ``omega``.

    ``mu`` and ``rho_decay`` describe the eigenvalue growth and the tail decay
    of ``theta_star``; they are metadata used by the penalty selection rule.
    """

    theta_star: np.ndarray
    theta_star_s: np.ndarray
    omega: np.ndarray
    sigma: float = 1.0
    sigma_s: float = 1.0
    n: int = 1
    m: int = 1
    mu: float = 1.0
    rho_decay: float = 1.0

    def __post_init__(self):
        th = _frozen(self.theta_star, "theta_star", ndim=1)
        ths = _frozen(self.theta_star_s, "theta_star_s", ndim=1)
        om = _frozen(self.omega, "omega", ndim=1)
        if not (th.shape == ths.shape == om.shape):
            raise InvalidConfig("omega", "theta_star, theta_star_s and omega must share a length")
        if th.size == 0:
            raise InvalidConfig("theta_star", "must be non-empty")
        if np.any(om < 0) or np.any(np.diff(om) < 0):
            raise InvalidConfig("omega", "must be non-negative and non-decreasing")
        for name, arr in (("theta_star", th), ("theta_star_s", ths), ("omega", om)):
            if not np.all(np.isfinite(arr)):
                raise InvalidConfig(name, "must be finite")
            object.__setattr__(self, name, arr)
        for name in ("sigma", "sigma_s", "rho_decay"):
            v = _finite(getattr(self, name), name)
            if v <= 0:
                raise InvalidConfig(name, f"must be > 0, got {v}")
            object.__setattr__(self, name, v)
        mu = _finite(self.mu, "mu")
        if mu <= 0.5:
            raise InvalidConfig("mu", f"must be > 1/2, got {mu}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "n", _positive_int(self.n, "n"))
        object.__setattr__(self, "m", _positive_int(self.m, "m"))

    @property
    def dim(self) -> int:
        return self.theta_star.shape[0]

    def with_counts(self, n, m):
        return SequenceModelSpec(self.theta_star, self.theta_star_s, self.omega, self.sigma,
                                 self.sigma_s, n, m, self.mu, self.rho_decay)

    def to_dict(self):
        return {
            "theta_star": self.theta_star.tolist(),
            "theta_star_s": self.theta_star_s.tolist(),
            "omega": self.omega.tolist(),
            "sigma": self.sigma,
            "sigma_s": self.sigma_s,
            "n": self.n,
            "m": self.m,
            "mu": self.mu,
            "rho_decay": self.rho_decay,
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(**{f.name: d[f.name] for f in fields(cls) if f.name in d})
        except TypeError as exc:
            raise InvalidConfig("sequence", str(exc)) from None


def _coeff_map(raw, name, dim):
    out = {}
    items = raw.items() if isinstance(raw, dict) else raw
    for key, value in items:
        q = tuple(int(v) for v in (key if np.ndim(key) else (key,)))
        if len(q) != dim:
            raise InvalidConfig(name, f"lattice point {q} does not have dimension {dim}")
        if isinstance(value, (list, tuple)):
            value = complex(float(value[0]), float(value[1]))
        out[q] = complex(value)
    return out


@dataclass(frozen=True, eq=False)
class NonparamSpec:
    """White-noise regression problem in the Fourier domain.

    Coefficient maps are keyed by integer lattice points ``k``; the actual
    frequency is ``q = 2*pi*k``. Lattice points absent from the maps carry
    zero coefficients but still contribute to the variance sum.
    """

    dim: int
    penalty_order: float
    target_coeffs: dict
    surrogate_coeffs: dict
    truncation: int = 32
    sigma: float = 1.0
    sigma_s: float = 1.0
    n: int = 1
    m: int = 1
    lam: float = 0.0

    def __post_init__(self):
        dim = _positive_int(self.dim, "dim")
        object.__setattr__(self, "dim", dim)
        p = _finite(self.penalty_order, "penalty_order")
        if p <= 0:
            raise InvalidConfig("penalty_order", f"must be > 0, got {p}")
        object.__setattr__(self, "penalty_order", p)
        T = _positive_int(self.truncation, "truncation")
        object.__setattr__(self, "truncation", T)
        tgt = _coeff_map(self.target_coeffs, "target_coeffs", dim)
        sur = _coeff_map(self.surrogate_coeffs, "surrogate_coeffs", dim)
        if set(tgt) != set(sur):
            raise InvalidConfig("surrogate_coeffs", "key set must equal that of target_coeffs")
        for name, cmap in (("target_coeffs", tgt), ("surrogate_coeffs", sur)):
            for q, v in cmap.items():
                if max(abs(c) for c in q) > T:
                    raise InvalidConfig(name, f"lattice point {q} beyond truncation {T}")
                neg = tuple(-c for c in q)
                if neg not in cmap:
                    raise InvalidConfig(name, f"missing mirrored lattice point {neg}")
                w = cmap[neg]
                if not (math.isclose(w.real, v.real, rel_tol=1e-12, abs_tol=1e-14)
                        and math.isclose(w.imag, -v.imag, rel_tol=1e-12, abs_tol=1e-14)):
                    raise InvalidConfig(name, f"value at {neg} is not the conjugate of {q}")
        object.__setattr__(self, "target_coeffs", tgt)
        object.__setattr__(self, "surrogate_coeffs", sur)
        for name in ("sigma", "sigma_s"):
            v = _finite(getattr(self, name), name)
            if v <= 0:
                raise InvalidConfig(name, f"must be > 0, got {v}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "n", _positive_int(self.n, "n"))
        object.__setattr__(self, "m", _positive_int(self.m, "m"))
        lam = _finite(self.lam, "lambda")
        if lam < 0:
            raise InvalidConfig("lambda", f"must be >= 0, got {lam}")
        object.__setattr__(self, "lam", lam)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return all(getattr(self, f.name) == getattr(other, f.name) for f in fields(self))

    __hash__ = None

    def to_dict(self):
        def enc(cmap):
            return [{"q": list(q), "value": [v.real, v.imag]} for q, v in sorted(cmap.items())]

        return {
            "dim": self.dim,
            "penalty_order": self.penalty_order,
            "target_coeffs": enc(self.target_coeffs),
            "surrogate_coeffs": enc(self.surrogate_coeffs),
            "truncation": self.truncation,
            "sigma": self.sigma,
            "sigma_s": self.sigma_s,
            "n": self.n,
            "m": self.m,
            "lambda": self.lam,
        }

    @classmethod
    def from_dict(cls, d):
        def dec(raw):
            if isinstance(raw, dict):
                return raw
            return [(tuple(e["q"]), tuple(e["value"])) for e in raw]

        try:
            return cls(d["dim"], d["penalty_order"], dec(d["target_coeffs"]),
                       dec(d["surrogate_coeffs"]), d.get("truncation", 32), d.get("sigma", 1.0),
                       d.get("sigma_s", 1.0), d.get("n", 1), d.get("m", 1), d.get("lambda", 0.0))
        except KeyError as exc:
            raise InvalidConfig(exc.args[0], "missing field") from None


@dataclass(frozen=True)
class HiDimSpec:
    """Proportional-asymptotics ridge problem with identity covariance."""

    delta: float
    delta_s: float
    r: float = 1.0
    r_s: float = 1.0
    gamma: float = 0.0
    sigma: float = 1.0
    sigma_s: float = 1.0
    lam: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            name = "lambda" if f.name == "lam" else f.name
            object.__setattr__(self, f.name, _finite(getattr(self, f.name), name))
        if self.delta <= 0 or self.delta_s <= 0:
            raise InvalidConfig("delta", "delta and delta_s must be > 0")
        for name in ("r", "r_s", "sigma", "sigma_s"):
            if getattr(self, name) < 0:
                raise InvalidConfig(name, "must be >= 0")
        if not 0.0 <= self.gamma <= math.pi:
            raise InvalidConfig("gamma", f"must lie in [0, pi], got {self.gamma}")
        if self.lam <= 0:
            raise InvalidConfig("lambda", f"must be > 0, got {self.lam}")
        if self.delta + self.delta_s <= 1:
            raise InvalidRegime("delta", "requires delta + delta_s > 1")

    def to_dict(self):
        return {
            "delta": self.delta, "delta_s": self.delta_s, "r": self.r, "r_s": self.r_s,
            "gamma": self.gamma, "sigma": self.sigma, "sigma_s": self.sigma_s,
            "lambda": self.lam,
        }

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        if "lambda" in d:
            d["lam"] = d.pop("lambda")
        try:
            return cls(**d)
        except TypeError as exc:
            raise InvalidConfig("hidim", str(exc)) from None


@dataclass(frozen=True)
class HiDimSolution:
    xi: float
    xi_perp: float
    omega: float
    rho_bar: float
    t: float
    rho: float
    rho_s: float
    tau: float
    tau_s: float
    risk: float
    alpha: float = float("nan")
    objective: float = float("nan")

    def to_dict(self):
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_dict(cls, d):
        return cls(**d)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        # NaN-aware so serialization round trips compare equal
        return all(
            a == b or (isinstance(a, float) and isinstance(b, float) and math.isnan(a) and math.isnan(b))
            for a, b in ((getattr(self, f.name), getattr(other, f.name)) for f in fields(self))
        )

    __hash__ = None


@dataclass(frozen=True, eq=False)
class LowDimCurvature(_ArrayEq):
    hessian: np.ndarray
    cov_original: np.ndarray
    cov_surrogate: np.ndarray
    shift_gradient: np.ndarray

    def __post_init__(self):
        H = _frozen(self.hessian, "hessian", ndim=2)
        K = _frozen(self.cov_original, "cov_original", ndim=2)
        Ks = _frozen(self.cov_surrogate, "cov_surrogate", ndim=2)
        g = _frozen(self.shift_gradient, "shift_gradient", ndim=1)
        d = g.shape[0]
        for name, M in (("hessian", H), ("cov_original", K), ("cov_surrogate", Ks)):
            if M.shape != (d, d):
                raise InvalidConfig(name, f"expected shape {(d, d)}, got {M.shape}")
            if not np.allclose(M, M.T, rtol=1e-10, atol=1e-12):
                raise InvalidConfig(name, "must be symmetric")
        for name, M in (("cov_original", K), ("cov_surrogate", Ks)):
            if np.linalg.eigvalsh(M).min() < -1e-10 * max(1.0, np.abs(M).max()):
                raise InvalidConfig(name, "must be positive semidefinite")
        try:
            np.linalg.cholesky(H)
        except np.linalg.LinAlgError:
            raise SingularHessian("hessian", "must be strictly positive definite") from None
        for name, arr in (("hessian", H), ("cov_original", K), ("cov_surrogate", Ks),
                          ("shift_gradient", g)):
            object.__setattr__(self, name, arr)

    @property
    def dim(self) -> int:
        return self.shift_gradient.shape[0]

    def to_dict(self):
        return {
            "hessian": self.hessian.tolist(),
            "cov_original": self.cov_original.tolist(),
            "cov_surrogate": self.cov_surrogate.tolist(),
            "shift_gradient": self.shift_gradient.tolist(),
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(d["hessian"], d["cov_original"], d["cov_surrogate"], d["shift_gradient"])
        except KeyError as exc:
            raise InvalidConfig(exc.args[0], "missing field") from None


def _grid(values, name, lo=None, hi=None, integer=False):
    if isinstance(values, (str, bytes)) or not hasattr(values, "__iter__"):
        raise InvalidConfig(name, "must be a list")
    out = []
    for v in values:
        if integer:
            out.append(_positive_int(v, name, allow_zero=True))
            continue
        v = _finite(v, name)
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            raise InvalidConfig(name, f"value {v} outside [{lo}, {hi}]")
        out.append(v)
    if not out:
        raise InvalidConfig(name, "must be non-empty")
    return tuple(out)


@dataclass(frozen=True)
class ExperimentPlan:
    """Monte Carlo experiment over an ``(n, m, alpha)`` grid.

    ``params`` holds generator parameters (see :mod:`surrogate_mix.sim.harness`).
    When ``lambda_grid`` has more than one entry the penalty is chosen per
    replicate on a fresh validation split.
    """

    n_grid: tuple
    m_grid: tuple
    alpha_grid: tuple
    lambda_grid: tuple = (0.0,)
    replicates: int = 10
    seed: int = 0
    generator: GeneratorKind = GeneratorKind.GAUSSIAN_MEAN
    params: dict = field(default_factory=dict)
    estimator: str = "auto"
    test_size: int = 10000

    def __post_init__(self):
        object.__setattr__(self, "n_grid", _grid(self.n_grid, "n_grid", integer=True))
        object.__setattr__(self, "m_grid", _grid(self.m_grid, "m_grid", integer=True))
        object.__setattr__(self, "alpha_grid", _grid(self.alpha_grid, "alpha", 0.0, 1.0))
        object.__setattr__(self, "lambda_grid", _grid(self.lambda_grid, "lambda_grid", 0.0))
        object.__setattr__(self, "replicates", _positive_int(self.replicates, "replicates"))
        seed = _positive_int(self.seed, "seed", allow_zero=True)
        if seed >= 2**64:
            raise InvalidConfig("seed", "must fit in 64 unsigned bits")
        object.__setattr__(self, "seed", seed)
        try:
            object.__setattr__(self, "generator", GeneratorKind(self.generator))
        except ValueError:
            raise InvalidConfig("generator", f"unknown generator {self.generator!r}") from None
        if not isinstance(self.params, dict):
            raise InvalidConfig("params", "must be an object")
        if self.estimator not in ("auto", "ridge", "logistic"):
            raise InvalidConfig("estimator", f"unknown estimator {self.estimator!r}")
        object.__setattr__(self, "test_size", _positive_int(self.test_size, "test_size"))
        if 0 in self.n_grid and 0 in self.m_grid:
            raise InvalidConfig("n_grid", "n_grid and m_grid both contain 0")

    def with_seed(self, seed):
        d = self.to_dict()
        d["seed"] = seed
        return ExperimentPlan.from_dict(d)

    def to_dict(self):
        return {
            "n_grid": list(self.n_grid),
            "m_grid": list(self.m_grid),
            "alpha_grid": list(self.alpha_grid),
            "lambda_grid": list(self.lambda_grid),
            "replicates": self.replicates,
            "seed": self.seed,
            "generator": self.generator.value,
            "params": self.params,
            "estimator": self.estimator,
            "test_size": self.test_size,
        }

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise InvalidConfig("plan", "must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise InvalidConfig(sorted(unknown)[0], "unknown field")
        for req in ("n_grid", "m_grid", "alpha_grid"):
            if req not in d:
                raise InvalidConfig(req, "missing field")
        return cls(**d)


_TYPES = {
    cls.__name__: cls
    for cls in (LabeledDataset, MixtureConfig, PowerLawFit, ScalingLawModel, RiskCurve,
                SequenceModelSpec, NonparamSpec, HiDimSpec, HiDimSolution, LowDimCurvature,
                ExperimentPlan)
}


def dumps(obj: Any, **kwargs) -> str:
    """Serialize any domain object to JSON (``repr``-exact floats)."""
    return json.dumps(obj.to_dict(), **kwargs)


def loads(cls, text: str):
    """Inverse of :func:`dumps`; ``cls`` is the type or its name."""
    if isinstance(cls, str):
        cls = _TYPES[cls]
    return cls.from_dict(json.loads(text))
