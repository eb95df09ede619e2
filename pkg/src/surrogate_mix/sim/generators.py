"""Synthetic data for the simulated settings."""
import numpy as np

from ..errors import NotUnitNorm, InvalidConfig
from ..model import LabeledDataset, SequenceModelSpec, Source
from .rng import as_generator, normals, signs


def _theta(theta, d):
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (d,):
        raise InvalidConfig("theta", f"expected shape ({d},), got {theta.shape}")
    return theta


def _check_sizes(d, n):
    if d < 1 or n < 0:
        raise InvalidConfig("d", f"need d >= 1 and n >= 0, got d={d}, n={n}")


def gen_gaussian_mean(d, n, theta, sigma, stream, source=Source.ORIGINAL) -> LabeledDataset:
    """``n`` unlabeled rows ``theta + sigma g`` with ``g ~ N(0, I_d)``."""
    _check_sizes(d, n)
    theta = _theta(theta, d)
    g = normals(as_generator(stream), (n, d))
    return LabeledDataset(theta + sigma * g, None, source)


def gen_gaussian_mixture(d, n, theta, stream, source=Source.ORIGINAL) -> LabeledDataset:
    """Labels uniform on {-1, +1}, features ``y theta + g``.

    Raises:
        NotUnitNorm: ``||theta||`` differs from 1 by more than 1e-8.
    """
    _check_sizes(d, n)
    theta = _theta(theta, d)
    if abs(np.linalg.norm(theta) - 1.0) > 1e-8:
        raise NotUnitNorm(f"||theta|| = {np.linalg.norm(theta)!r}")
    gen = as_generator(stream)
    y = signs(gen, n)
    x = y[:, None] * theta + normals(gen, (n, d))
    return LabeledDataset(x, y, source)


def gen_hidim_linear(d, n, theta, sigma, stream, source=Source.ORIGINAL) -> LabeledDataset:
    """Standard normal design ``X`` and responses ``X theta + sigma eps``."""
    _check_sizes(d, n)
    theta = _theta(theta, d)
    gen = as_generator(stream)
    X = normals(gen, (n, d))
    eps = normals(gen, n)
    return LabeledDataset(X, X @ theta + sigma * eps, source)


def gen_sequence_obs(spec: SequenceModelSpec, stream):
    """Sufficient statistics ``(ybar, ybar_s)`` of the two samples.

    The estimator only sees the sample means, so drawing
    ``ybar = theta* + sigma g / sqrt(n)`` directly is equivalent to drawing
    ``n`` rows and averaging.
    """
    gen = as_generator(stream)
    g = normals(gen, spec.dim)
    gs = normals(gen, spec.dim)
    ybar = spec.theta_star + spec.sigma / np.sqrt(spec.n) * g
    ybar_s = spec.theta_star_s + spec.sigma_s / np.sqrt(spec.m) * gs
    return ybar, ybar_s
