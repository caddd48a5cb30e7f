"""Learning probabilistic models of approval elections."""

import json

from ._core import (
    Election,
    IamlearnError,
    baseline,
    load_election,
    parse_pabulib,
    pearson,
    va_ham,
)
from . import _core

__all__ = [
    "Election",
    "IamlearnError",
    "absolute_distance",
    "baseline",
    "em_fit",
    "learn",
    "load_election",
    "log_likelihood",
    "parse_pabulib",
    "pearson",
    "run_experiment",
    "sample",
    "va_ham",
]


def _text(model):
    return model if isinstance(model, str) else json.dumps(model)


def learn(election, model, estimator="mle", seed=0, restarts=5, max_iter=300, tol=1e-6,
          samples=2000, burn_in=1000):
    """Fit `model` (e.g. "fulliam", "tiam:3", "mix:hamming:2") and return (model_dict, train_ll)."""
    text, ll = _core._learn(election, model, estimator, seed, restarts, max_iter, tol,
                            samples, burn_in)
    return json.loads(text), ll


def em_fit(election, k, family="fulliam", seed=0, restarts=5):
    """EM mixture fit; returns (model_dict, per-iteration log-likelihoods, converged)."""
    text, trace, converged = _core._em_trace(election, k, family, seed, restarts)
    return json.loads(text), trace, converged


def sample(model, n, seed=0):
    return _core._sample(_text(model), n, seed)


def log_likelihood(model, election):
    return _core._log_likelihood(_text(model), election)


def absolute_distance(model, election, seed=0):
    return _core._absolute_distance(_text(model), election, seed)


def run_experiment(directory, config=None):
    """Runs the protocol over a directory and returns the report as CSV text."""
    return _core._run_experiment(str(directory), json.dumps(config or {}))
