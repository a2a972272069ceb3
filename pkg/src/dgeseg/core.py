"""Shared value types and the hyperparameter record.

Arrays are plain ``numpy.ndarray`` objects:

* feature matrix ``(N, n)``, one row per frame
* affinity matrix ``(N, N)``, symmetric, entries in ``[0, 1]``
* embedding matrix ``(N, d)``
* cluster labels, integer array of length ``N``
* boundary list, strictly increasing 0-based frame indices in ``[1, N-1]``;
  index ``b`` is the first frame of a new event
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field

import numpy as np


class ParameterError(ValueError):
    """Raised when a hyperparameter violates its constraints."""


@dataclass(frozen=True)
class Hyperparams:
    """Hyperparameters of the whole pipeline.

    Defaults are the values used for egocentric photo streams.  ``ltilde``
    left as ``None`` resolves to ``0.02 * d``.
    """

    M: int = 1
    L: int = 3
    h: float = 0.25
    lhat: float = 0.0025
    ltilde: float | None = None
    d: int = 15
    K: int = 2
    alpha: float = 0.1
    p: int = 3
    eta: float = 0.3
    mu: float = 0.1
    n_clusters: int = 10
    gd_iters: int = 150
    window: int = 5
    z: float = 1.0
    min_sep: int = 5
    seed: int = 0

    @property
    def ltilde_value(self) -> float:
        return 0.02 * self.d if self.ltilde is None else float(self.ltilde)

    def replace(self, **changes) -> "Hyperparams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Hyperparams":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ParameterError(f"unknown hyperparameters: {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        # repr-based float encoding in json round-trips bit-exactly
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Hyperparams":
        return cls.from_dict(json.loads(text))


def validate_params(params: Hyperparams, N: int | None = None, n: int | None = None) -> Hyperparams:
    """Check every constraint of ``params``; return it unchanged if valid.

    ``N`` and ``n`` (frame count, feature dimension) enable the
    size-dependent checks.  The first violated constraint is reported.
    """
    P = params
    checks = [
        (P.M >= 1, "M must be >= 1"),
        (P.L > P.M, "L must exceed M"),
        (P.h > 0, "h must be positive"),
        (P.lhat > 0, "lhat must be positive"),
        (P.ltilde is None or P.ltilde > 0, "ltilde must be positive"),
        (P.d >= 1, "embedding dim must be >= 1"),
        (P.K >= 0, "K must be >= 0"),
        (0.0 <= P.alpha <= 1.0, "alpha out of range"),
        (P.p >= 1 and P.p % 2 == 1, "p must be a positive odd integer"),
        (0.0 <= P.eta < 1.0, "eta out of range"),
        (0.0 <= P.mu < 1.0, "mu out of range"),
        (P.n_clusters >= 2, "n_clusters must be >= 2"),
        (P.gd_iters >= 1, "gd_iters must be >= 1"),
        (P.window >= 1, "window must be >= 1"),
        (np.isfinite(P.z), "z must be finite"),
        (P.min_sep >= 1, "min_sep must be >= 1"),
    ]
    if N is not None:
        checks += [
            (N >= 2, "frame count must be >= 2"),
            (P.d <= N, "embedding dim exceeds frame count"),
            (P.L < N / 2, "L must be below half the frame count"),
            (P.n_clusters <= N, "n_clusters exceeds frame count"),
        ]
    if n is not None:
        checks.append((P.d <= n, "embedding dim exceeds feature dim"))
    for ok, message in checks:
        if not ok:
            raise ParameterError(message)
    return params


def as_features(X, name: str = "features") -> np.ndarray:
    """Coerce to a finite float64 ``(N, n)`` array with ``N >= 2``."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2:
        raise ValueError(f"{name} must be a 2-D array, got shape {X.shape}")
    if X.shape[0] < 2 or X.shape[1] < 1:
        raise ValueError(f"{name} needs at least 2 rows and 1 column, got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite values")
    return X


def as_boundaries(indices, N: int | None = None) -> np.ndarray:
    """Validate a boundary list: strictly increasing integers in ``[1, N-1]``."""
    b = np.asarray(indices, dtype=np.int64).reshape(-1)
    if b.size and np.any(np.diff(b) <= 0):
        raise ValueError("boundary indices must be strictly increasing")
    if b.size and b[0] < 1:
        raise ValueError("boundary index 0 is not allowed")
    if N is not None and b.size and b[-1] > N - 1:
        raise ValueError(f"boundary index {b[-1]} outside [1, {N - 1}]")
    return b


def labels_to_boundaries(labels) -> np.ndarray:
    """Indices where the label sequence changes value."""
    labels = np.asarray(labels)
    return np.flatnonzero(labels[1:] != labels[:-1]) + 1


@dataclass
class DgeState:
    """Snapshot of the alternating loop after iteration ``i``."""

    i: int
    embedding: np.ndarray
    graph: np.ndarray
    labels: np.ndarray | None = None
    loss_history: list = field(default_factory=list)
