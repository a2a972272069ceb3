"""Markov-switching Gaussian sequences with known event structure."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import labels_to_boundaries

DEFAULT_MEANS = ((-7.8, 5.1), (-1.4, 2.8), (-2.9, 12.1), (2.5, 3.4))


@dataclass(frozen=True)
class SynthConfig:
    """Generator settings.

    ``sigma`` is the per-coordinate standard deviation.  After ``t`` frames
    in a state the sequence stays there with probability ``exp(-hazard * t)``.
    """

    N: int = 350
    means: tuple = DEFAULT_MEANS
    sigma: float = 3.7
    hazard: float = 0.0025
    seed: int = 0

    def __post_init__(self):
        if len(self.means) < 2:
            raise ValueError("at least two states are required")
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")
        if not self.hazard > 0:
            raise ValueError("hazard must be positive")
        if self.N < 2:
            raise ValueError("N must be >= 2")


def expected_segment_length(hazard: float, tol: float = 1e-15) -> float:
    """Mean state duration, the series sum_t prod_{s<=t} exp(-hazard * s)."""
    total, t, term = 0.0, 0, 1.0
    while term > tol:
        total += term
        t += 1
        term *= np.exp(-hazard * t)
    return total


def gen_markov_gaussian(config: SynthConfig = SynthConfig()):
    """Sample ``(X, labels, boundaries)``; labels are state indices from 0."""
    rng = np.random.default_rng(config.seed)
    means = np.asarray(config.means, dtype=np.float64)
    n_states = means.shape[0]
    labels = np.empty(config.N, dtype=np.int64)
    state = int(rng.integers(n_states))
    t = 0
    for k in range(config.N):
        if k > 0:
            t += 1
            if rng.random() >= np.exp(-config.hazard * t):
                others = [s for s in range(n_states) if s != state]
                state = int(others[rng.integers(len(others))])
                t = 0
        labels[k] = state
    X = means[labels] + config.sigma * rng.standard_normal((config.N, means.shape[1]))
    return X, labels, labels_to_boundaries(labels)
