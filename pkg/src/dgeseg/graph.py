"""Affinity kernels and the temporal/semantic graph priors."""

from __future__ import annotations

import logging

import numpy as np
from scipy.ndimage import correlate1d

log = logging.getLogger(__name__)


def unit_rows(Y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-normalize ``Y``; all-zero rows stay zero.  Returns ``(U, norms)``."""
    norms = np.linalg.norm(Y, axis=1)
    safe = np.where(norms > 0, norms, 1.0)
    return Y / safe[:, None], norms


def cosine_similarity(Y) -> np.ndarray:
    """Pairwise cosine similarity of rows, clipped to ``[-1, 1]``.

    A zero row has similarity 0 to everything (its angle is undefined).
    """
    Y = np.asarray(Y, dtype=np.float64)
    U, norms = unit_rows(Y)
    if np.any(norms == 0):
        log.warning("%d all-zero rows; their cosine similarity is set to 0", int(np.sum(norms == 0)))
    C = np.clip(U @ U.T, -1.0, 1.0)
    return C


def cosine_affinity(Y, l: float) -> np.ndarray:
    """Similarity graph ``exp(-(1 - cos_sim) / l)`` with unit diagonal."""
    if not l > 0:
        raise ValueError("kernel decay l must be positive")
    C = cosine_similarity(Y)
    G = np.exp(-(1.0 - C) / l)
    G = 0.5 * (G + G.T)
    np.fill_diagonal(G, 1.0)
    return G


def bump_weights(p: int) -> np.ndarray:
    """1-D samples of the mollifier ``exp(-1/(1-r^2))`` on ``p`` points, normalized."""
    if not (isinstance(p, (int, np.integer)) and p >= 1 and p % 2 == 1):
        raise ValueError(f"bump kernel size must be a positive odd integer, got {p!r}")
    o = np.arange(p) - (p - 1) // 2
    r = 2.0 * o / (p + 1)
    w = np.exp(-1.0 / (1.0 - r**2))
    return w / w.sum()


def make_bump_kernel(p: int) -> np.ndarray:
    """Separable ``p x p`` bump kernel summing to one."""
    w = bump_weights(p)
    K = np.outer(w, w)
    return K / K.sum()


def _separable_factor(kernel: np.ndarray) -> np.ndarray:
    w = kernel.sum(axis=1)
    if not np.allclose(np.outer(w, w), kernel, rtol=0, atol=1e-14):
        raise ValueError("local averaging expects a separable symmetric kernel")
    return w


def local_average(G, kernel) -> np.ndarray:
    """2-D convolution with ``kernel``; truncated and renormalized at borders."""
    G = np.asarray(G, dtype=np.float64)
    w = _separable_factor(np.asarray(kernel, dtype=np.float64))
    if w.size == 1:
        return G.copy()
    num = correlate1d(correlate1d(G, w, axis=0, mode="constant"), w, axis=1, mode="constant")
    ones = np.ones(G.shape[0])
    cover = correlate1d(ones, w, mode="constant")
    out = num / np.outer(cover, cover)
    if np.array_equal(G, G.T):
        out = 0.5 * (out + out.T)
    return out


def _check_factor(value: float, name: str) -> None:
    if not 0.0 <= value < 1.0:
        raise ValueError(f"{name} out of range [0, 1): {value}")


def temporal_shrink(G, eta: float) -> np.ndarray:
    """Scale by ``1 - eta`` every edge between frames more than one step apart."""
    _check_factor(eta, "eta")
    G = np.asarray(G, dtype=np.float64)
    N = G.shape[0]
    k = np.arange(N)
    far = np.abs(k[:, None] - k[None, :]) > 1
    return np.where(far, (1.0 - eta) * G, G)


def semantic_shrink(G, labels, mu: float) -> np.ndarray:
    """Scale by ``1 - mu`` every edge joining two different clusters."""
    _check_factor(mu, "mu")
    G = np.asarray(G, dtype=np.float64)
    labels = np.asarray(labels).reshape(-1)
    if labels.size != G.shape[0]:
        raise ValueError(f"label length {labels.size} does not match graph size {G.shape[0]}")
    cross = labels[:, None] != labels[None, :]
    return np.where(cross, (1.0 - mu) * G, G)
