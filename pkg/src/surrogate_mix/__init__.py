"""Weighted empirical risk minimization with surrogate data.

Estimators, risk oracles, the mixture scaling law and a Monte Carlo harness.
"""
from . import errors, estimators, model, oracles, scaling, sim
from ._accel import backend

__version__ = "0.1.0"

__all__ = ["backend", "errors", "estimators", "model", "oracles", "scaling", "sim", "__version__"]
