"""Feature normalization and temporal non-local means denoising."""

from __future__ import annotations

import numpy as np

from .core import Hyperparams, as_features


def normalize_features(X) -> np.ndarray:
    """Min-max map every column to ``[-1, 1]``; constant columns become 0."""
    X = as_features(X)
    lo = X.min(axis=0)
    hi = X.max(axis=0)
    span = hi - lo
    out = np.zeros_like(X)
    varying = span > 0
    out[:, varying] = 2.0 * (X[:, varying] - lo[varying]) / span[varying] - 1.0
    return out


def _offsets(half: int) -> np.ndarray:
    return np.array([o for o in range(-half, half + 1) if o != 0], dtype=np.int64)


def search_window(k: int, N: int, L: int) -> np.ndarray:
    """Indices ``j`` with ``0 < |j - k| <= L``, clipped to the sequence."""
    j = k + _offsets(L)
    return j[(j >= 0) & (j < N)]


def patch_distance(X: np.ndarray, k: int, j: int, M: int) -> float:
    """Sum of l1 distances between the M-neighbourhoods of frames k and j.

    Neighbourhood offsets are paired position by position; indices that
    fall off either end are clipped to the nearest valid frame.
    """
    N = X.shape[0]
    o = _offsets(M)
    a = np.clip(k + o, 0, N - 1)
    b = np.clip(j + o, 0, N - 1)
    return float(np.abs(X[a] - X[b]).sum())


def nl_weights(X, k: int, params: Hyperparams) -> tuple[np.ndarray, np.ndarray]:
    """Non-local weights of frame ``k`` over its search window.

    Returns ``(indices, weights)`` with weights summing to one.
    """
    X = np.asarray(X, dtype=np.float64)
    j = search_window(k, X.shape[0], params.L)
    dist = np.array([patch_distance(X, k, jj, params.M) for jj in j])
    # shifting by the minimum leaves the normalized weights unchanged
    w = np.exp(-(dist - dist.min()) / params.h)
    return j, w / w.sum()


def nl_band_weights(X, params: Hyperparams) -> np.ndarray:
    """Non-local weights of every frame in banded form.

    Entry ``(k, s)`` is the weight of frame ``k + offset[s]`` for offsets
    ``-L..-1, 1..L``; offsets leaving the sequence get weight 0.
    """
    X = as_features(X)
    N = X.shape[0]
    o = _offsets(params.M)
    idx = np.clip(np.arange(N)[:, None] + o[None, :], 0, N - 1)
    patches = X[idx]  # (N, 2M, n)
    shifts = _offsets(params.L)
    dist = np.full((N, shifts.size), np.inf)
    for s, shift in enumerate(shifts):
        k = np.arange(max(0, -shift), min(N, N - shift))
        dist[k, s] = np.abs(patches[k] - patches[k + shift]).sum(axis=(1, 2))
    dist -= dist.min(axis=1, keepdims=True)
    E = np.exp(-dist / params.h)
    return E / E.sum(axis=1, keepdims=True)


def nl_weight_matrix(X, params: Hyperparams) -> np.ndarray:
    """Dense ``(N, N)`` version of :func:`nl_band_weights`."""
    B = nl_band_weights(X, params)
    N = B.shape[0]
    W = np.zeros((N, N))
    for s, shift in enumerate(_offsets(params.L)):
        k = np.arange(max(0, -shift), min(N, N - shift))
        W[k, k + shift] = B[k, s]
    return W


def nlmeans_1d(X, params: Hyperparams) -> np.ndarray:
    """Replace every frame by the non-local weighted mean of its neighbours."""
    X = as_features(X)
    N = X.shape[0]
    if N <= 2 * params.L:
        raise ValueError(
            f"sequence too short for non-local means: N={N} <= 2L={2 * params.L}"
        )
    B = nl_band_weights(X, params)
    out = np.zeros_like(X)
    for s, shift in enumerate(_offsets(params.L)):
        k = np.arange(max(0, -shift), min(N, N - shift))
        out[k] += B[k, s, None] * X[k + shift]
    return out
