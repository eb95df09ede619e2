"""Counter-based random streams.

Every stream is a Philox generator keyed by ``(seed, *key)`` through
``SeedSequence.spawn_key``, so distinct keys give independent streams and the
draws depend only on the key, never on scheduling. Gaussians are produced by
the inverse normal CDF applied to one uniform per variate, which makes them
independent of how draws are batched.
"""
import numpy as np
from scipy.special import ndtri

# stream purposes within one replicate
TRAIN_ORIGINAL = 0
TRAIN_SURROGATE = 1
VALIDATION = 2
TEST = 3

_TINY = 2.0 ** -54


def stream(seed: int, *key: int) -> np.random.Generator:
    """Philox generator for ``seed`` and a tuple of non-negative integer keys."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def as_generator(s) -> np.random.Generator:
    """Accept a ``Generator``, an integer seed or a ``(seed, *key)`` tuple."""
    if isinstance(s, np.random.Generator):
        return s
    if isinstance(s, tuple):
        return stream(*s)
    return stream(int(s))


def normals(gen: np.random.Generator, shape) -> np.ndarray:
    """Standard normal draws by inverse CDF of ``U[0, 1)`` (zero nudged up)."""
    u = gen.random(shape)
    return ndtri(np.maximum(u, _TINY))


def signs(gen: np.random.Generator, n: int) -> np.ndarray:
    """Uniform draws on {-1, +1}."""
    return np.where(gen.random(n) < 0.5, 1.0, -1.0)
