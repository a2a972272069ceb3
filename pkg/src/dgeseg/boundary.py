"""Contextual-prediction boundary detection on a learnt representation.

Each frame is predicted from the mean of the ``W`` frames before it and
the mean of the ``W`` frames after it; the cosine distance between the two
predictions scores how likely the frame is to open a new event.
"""

from __future__ import annotations

import numpy as np

from .core import Hyperparams


def context_predict(Y, k: int, W: int) -> tuple[np.ndarray, np.ndarray]:
    """Forward and backward context predictions for frame ``k``."""
    Y = np.asarray(Y, dtype=np.float64)
    N = Y.shape[0]
    if not W <= k <= N - 1 - W:
        raise ValueError(f"frame {k} outside admissible range [{W}, {N - 1 - W}]")
    return Y[k - W:k].mean(axis=0), Y[k + 1:k + 1 + W].mean(axis=0)


def _cosine_distance_rows(A, B):
    na = np.linalg.norm(A, axis=1)
    nb = np.linalg.norm(B, axis=1)
    denom = na * nb
    sim = np.where(denom > 0, (A * B).sum(axis=1) / np.where(denom > 0, denom, 1.0), 0.0)
    # two zero predictions agree perfectly
    sim = np.where((na == 0) & (nb == 0), 1.0, sim)
    return np.clip(1.0 - sim, 0.0, 2.0)


def boundary_scores(Y, W: int) -> np.ndarray:
    """Score every frame; the first and last ``W`` frames score 0."""
    Y = np.asarray(Y, dtype=np.float64)
    N = Y.shape[0]
    if N <= 2 * W:
        raise ValueError(f"sequence of {N} frames too short for window {W}")
    csum = np.vstack([np.zeros((1, Y.shape[1])), np.cumsum(Y, axis=0)])
    k = np.arange(W, N - W)
    fwd = (csum[k] - csum[k - W]) / W
    bwd = (csum[k + 1 + W] - csum[k + 1]) / W
    scores = np.zeros(N)
    scores[k] = _cosine_distance_rows(fwd, bwd)
    return scores


def detect_boundaries(scores, z: float = 1.0, min_sep: int = 5, W: int | None = None) -> np.ndarray:
    """Peaks of ``scores`` above ``mean + z * std``, at least ``min_sep`` apart.

    The threshold statistics use the admissible frames ``W..N-1-W`` when
    ``W`` is given, otherwise all frames.  A flat run of equal maxima
    counts as one peak located at its last frame.  Among peaks closer than
    ``min_sep`` the higher one wins, ties going to the earlier frame.
    """
    if min_sep < 1:
        raise ValueError("min_sep must be >= 1")
    s = np.asarray(scores, dtype=np.float64)
    N = s.size
    core = s[W:N - W] if W else s
    if core.size == 0:
        return np.zeros(0, dtype=np.int64)
    std = core.std()
    if std == 0:
        return np.zeros(0, dtype=np.int64)
    theta = core.mean() + z * std
    left = np.concatenate([[-np.inf], s[:-1]])
    right = np.concatenate([s[1:], [-np.inf]])
    peaks = np.flatnonzero((s >= theta) & (s >= left) & (s > right) & (s > 0))
    peaks = peaks[peaks >= 1]
    # greedy suppression in order of decreasing score, earlier frame first on ties
    order = sorted(peaks.tolist(), key=lambda k: (-s[k], k))
    kept: list[int] = []
    for k in order:
        if all(abs(k - q) >= min_sep for q in kept):
            kept.append(k)
    return np.array(sorted(kept), dtype=np.int64)


def segment_embedding(Y, params: Hyperparams) -> np.ndarray:
    """Boundary list for an embedding using the detector settings in ``params``."""
    scores = boundary_scores(Y, params.window)
    return detect_boundaries(scores, params.z, params.min_sep, params.window)
