"""The alternating graph/embedding loop and its k-means community step."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .core import DgeState, Hyperparams, as_features, validate_params
from .embed import ObjectiveSpec, bb_minimize, init_embedding
from .graph import cosine_affinity, local_average, make_bump_kernel, semantic_shrink, temporal_shrink
from .preprocess import nlmeans_1d, normalize_features

log = logging.getLogger(__name__)


class StageError(RuntimeError):
    """A pipeline stage failed; ``stage`` names it."""

    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage


@dataclass
class KmeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    n_iter: int
    inertia_history: list


def _sq_dists(X, C):
    d = (X * X).sum(1)[:, None] - 2.0 * X @ C.T + (C * C).sum(1)[None, :]
    return np.maximum(d, 0.0)


def kmeans_pp_init(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    N = X.shape[0]
    centers = [int(rng.integers(N))]
    closest = _sq_dists(X, X[centers]).ravel()
    for _ in range(1, k):
        total = closest.sum()
        if total <= 0:
            # fewer distinct points than clusters; take any unused row
            unused = np.setdiff1d(np.arange(N), centers)
            nxt = int(unused[0])
        else:
            nxt = int(rng.choice(N, p=closest / total))
        centers.append(nxt)
        closest = np.minimum(closest, _sq_dists(X, X[[nxt]]).ravel())
    return X[centers].copy()


def kmeans(X, n_clusters: int, seed: int = 0, max_iter: int = 300) -> KmeansResult:
    """Lloyd's algorithm from k-means++ seeding.

    Stops at an assignment fixpoint or after ``max_iter`` iterations.  An
    emptied cluster is re-seeded at the point farthest from its centroid.
    Labels are ``0..n_clusters-1``.
    """
    X = as_features(X, "embedding")
    N = X.shape[0]
    if N < n_clusters:
        raise ValueError(f"cannot form {n_clusters} clusters from {N} points")
    rng = np.random.default_rng(seed)
    C = kmeans_pp_init(X, n_clusters, rng)
    labels = np.full(N, -1)
    history = []
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        D = _sq_dists(X, C)
        new = np.argmin(D, axis=1)
        dist = D[np.arange(N), new]
        for c in range(n_clusters):
            if not np.any(new == c):
                far = int(np.argmax(dist))
                new[far] = c
                dist[far] = 0.0
        if np.array_equal(new, labels):
            break
        labels = new
        C = np.stack([X[labels == c].mean(axis=0) for c in range(n_clusters)])
        history.append(float(((X - C[labels]) ** 2).sum()))
    inertia = float(((X - C[labels]) ** 2).sum())
    return KmeansResult(labels, C, inertia, n_iter, history)


def graph_update(Y, params: Hyperparams, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Affinity of ``Y`` with temporal then semantic priors applied."""
    G = cosine_affinity(Y, params.ltilde_value)
    G = local_average(G, make_bump_kernel(params.p))
    G = temporal_shrink(G, params.eta)
    labels = kmeans(Y, params.n_clusters, seed).labels
    return semantic_shrink(G, labels, params.mu), labels


def embedding_update(state: DgeState, G0, params: Hyperparams):
    """Refit the embedding to the mix of the learnt graph and ``G0``."""
    spec = ObjectiveSpec.mixed(state.graph, G0, params.alpha, params.ltilde_value)
    return bb_minimize(spec, state.embedding, params.gd_iters)


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except StageError:
        raise
    except Exception as exc:  # noqa: BLE001 - re-raised with the stage name
        raise StageError(name, exc) from exc


def run_dge(
    X,
    params: Hyperparams,
    preprocess: bool = True,
    init: str = "fit",
) -> tuple[np.ndarray, np.ndarray, list[DgeState]]:
    """Learn an embedding and graph from per-frame features.

    Parameters
    ----------
    X : array (N, n)
        Raw features, one row per frame.
    params : Hyperparams
    preprocess : bool
        Normalize columns to [-1, 1] and apply temporal non-local means.
    init : {"fit", "pca", "raw"}
        Initial embedding: PCA refined to fit the initial graph, plain PCA,
        or the (preprocessed) features themselves, which needs ``d == n``.

    Returns
    -------
    embedding, graph, history
        Final embedding and graph, and one :class:`DgeState` per iteration
        ``0..K``.
    """
    X = _stage("input", as_features, X)
    N, n = X.shape
    _stage("validate", validate_params, params, N, n)
    if init not in ("fit", "pca", "raw"):
        raise ValueError(f"unknown init mode {init!r}")
    if init == "raw" and params.d != n:
        raise StageError("init", ValueError(f"raw init needs d == n ({params.d} != {n})"))

    if preprocess:
        X = _stage("normalize", normalize_features, X)
        X = _stage("nlmeans", nlmeans_1d, X, params)
    start = X if init == "raw" else None
    Y, G_tilde, G0, rep = _stage("init", init_embedding, X, params, start=start, fit=init == "fit")
    losses = rep.losses if rep is not None else []
    history = [DgeState(0, Y, G_tilde, None, list(losses))]
    for i in range(1, params.K + 1):
        Y, rep = _stage("embedding_update", embedding_update, history[-1], G0, params)
        G_tilde, labels = _stage("graph_update", graph_update, Y, params, params.seed + i)
        history.append(DgeState(i, Y, G_tilde, labels, list(rep.losses)))
        log.debug("iteration %d: loss %.6g -> %.6g", i, rep.initial_loss, rep.best_loss)
    return Y, G_tilde, history
