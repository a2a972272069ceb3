"""Embedding initialization and the cross-entropy graph-fitting objective.

The objective compares the cosine affinity of an embedding with one or two
target graphs through the mean binary cross-entropy over off-diagonal pairs.
It is minimized by gradient descent with Barzilai-Borwein step sizes.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numba
import numpy as np

from .core import Hyperparams, as_features
from .graph import cosine_affinity, cosine_similarity, unit_rows

log = logging.getLogger(__name__)

P_CLAMP = 1e-7


def pca_project(X, d: int) -> np.ndarray:
    """Centered projection of ``X`` onto its top ``d`` principal directions.

    Each direction's sign is fixed so that its largest-magnitude loading is
    positive.
    """
    X = as_features(X)
    N, n = X.shape
    if d > min(N, n):
        raise ValueError(f"embedding dim {d} exceeds min(N, n) = {min(N, n)}")
    Xc = X - X.mean(axis=0)
    _, _, Vt = np.linalg.svd(Xc, full_matrices=False)
    V = Vt[:d].T
    pivot = np.argmax(np.abs(V), axis=0)
    V = V * np.sign(V[pivot, np.arange(d)])
    return Xc @ V


_LOG_HI = np.log1p(-P_CLAMP)


def _log_affinity(C: np.ndarray, l: float) -> tuple[np.ndarray, np.ndarray]:
    """``log P`` capped at ``log(1 - P_CLAMP)`` and the mask where no cap applies.

    ``log P = (C - 1) / l`` is exact, so small affinities need no floor;
    a floor would make far-apart pairs gradient-free.
    """
    logP = C - 1.0
    logP /= l
    inside = logP < _LOG_HI
    np.minimum(logP, _LOG_HI, out=logP)
    return logP, inside


def _bce(logP: np.ndarray, Q: np.ndarray):
    P = np.exp(logP)
    log1mP = np.log1p(-P)
    # -(Q log P + (1 - Q) log(1 - P))
    bce = logP - log1mP
    bce *= Q
    bce += log1mP
    np.negative(bce, out=bce)
    return P, bce


def _check_pair(Y: np.ndarray, Q: np.ndarray) -> None:
    if Q.shape != (Y.shape[0], Y.shape[0]):
        raise ValueError(f"target shape {Q.shape} does not match {Y.shape[0]} frames")
    if not (np.all(np.isfinite(Y)) and np.all(np.isfinite(Q))):
        raise ValueError("non-finite entries in embedding or target")


def ce_loss(Y, target, l: float) -> float:
    """Mean binary cross-entropy between ``S_l(Y)`` and ``target`` over pairs k < j."""
    Y = np.asarray(Y, dtype=np.float64)
    Q = np.asarray(target, dtype=np.float64)
    _check_pair(Y, Q)
    logP, _ = _log_affinity(cosine_similarity(Y), l)
    _, bce = _bce(logP, Q)
    iu = np.triu_indices(Y.shape[0], k=1)
    return float(bce[iu].mean())


@dataclass
class ObjectiveSpec:
    """Weighted sum of cross-entropy fits to several target graphs.

    ``weights`` default to all ones.  Because the cross-entropy is linear
    in the target, the mixture equals a single fit to the weighted target.
    """

    targets: Sequence[np.ndarray]
    l: float
    weights: Sequence[float] | None = None

    def __post_init__(self):
        self.targets = [np.asarray(t, dtype=np.float64) for t in self.targets]
        if not self.targets:
            raise ValueError("at least one target graph is required")
        if self.weights is None:
            self.weights = [1.0] * len(self.targets)
        if len(self.weights) != len(self.targets):
            raise ValueError("one weight per target graph is required")
        if any(w < 0 for w in self.weights):
            raise ValueError("target weights must be nonnegative")
        shapes = {t.shape for t in self.targets}
        if len(shapes) != 1:
            raise ValueError(f"target graphs disagree in shape: {shapes}")
        self._target = None

    @classmethod
    def mixed(cls, learnt, initial, alpha: float, l: float) -> "ObjectiveSpec":
        """``(1 - alpha) * fit(learnt) + alpha * fit(initial)``."""
        if not 0.0 <= alpha <= 1.0:
            raise ValueError("alpha out of range")
        return cls([learnt, initial], l, [1.0 - alpha, alpha])

    def effective_target(self) -> np.ndarray:
        if self._target is None:
            Q = np.zeros_like(self.targets[0])
            for w, t in zip(self.weights, self.targets):
                if w:
                    Q += w * t
            if not np.all(np.isfinite(Q)):
                raise ValueError("non-finite entries in target graph")
            self._target = Q
        return self._target

    def value(self, Y) -> float:
        return float(sum(w * ce_loss(Y, t, self.l) for w, t in zip(self.weights, self.targets) if w))

    def __call__(self, Y) -> tuple[float, np.ndarray]:
        return ce_value_and_grad(Y, self.effective_target(), self.l, sum(self.weights))


@numba.njit(cache=True)
def _ce_kernel(U, Q, inv_l, log_hi):
    # fused pass over pairs k < j: loss sum and d loss / d U (unscaled)
    N, d = U.shape
    total = 0.0
    dU = np.zeros((N, d))
    for k in range(N):
        for j in range(k + 1, N):
            c = 0.0
            for t in range(d):
                c += U[k, t] * U[j, t]
            if c > 1.0:
                c = 1.0
            elif c < -1.0:
                c = -1.0
            logp = (c - 1.0) * inv_l
            q = Q[k, j]
            if logp < log_hi:
                p = np.exp(logp)
                if p < 1e-4:
                    # log1p(-p) series; truncation error below p**4 / 4
                    log1mp = -p * (1.0 + p * (0.5 + p / 3.0))
                else:
                    log1mp = np.log1p(-p)
                coef = (p - q) / (1.0 - p)
                for t in range(d):
                    dU[k, t] += coef * U[j, t]
                    dU[j, t] += coef * U[k, t]
            else:
                logp = log_hi
                log1mp = np.log1p(-np.exp(log_hi))
            total -= log1mp + q * (logp - log1mp)
    return total, dU


def ce_value_and_grad(Y, target, l: float, scale: float = 1.0) -> tuple[float, np.ndarray]:
    """Loss :func:`ce_loss` times ``scale`` and its gradient with respect to ``Y``."""
    Y = np.asarray(Y, dtype=np.float64)
    Q = np.ascontiguousarray(target, dtype=np.float64)
    if Q.shape != (Y.shape[0], Y.shape[0]):
        raise ValueError(f"target shape {Q.shape} does not match {Y.shape[0]} frames")
    if not np.all(np.isfinite(Y)):
        raise ValueError("non-finite entries in embedding")
    N = Y.shape[0]
    n_pairs = N * (N - 1) / 2
    U, norms = unit_rows(Y)
    total, dU = _ce_kernel(np.ascontiguousarray(U), Q, 1.0 / l, _LOG_HI)
    value = scale * total / n_pairs
    dU *= scale / (n_pairs * l)

    # project out the radial part: cosine similarity ignores row norms
    radial = np.sum(dU * U, axis=1, keepdims=True)
    zero = norms == 0
    if np.any(zero):
        log.warning("gradient undefined on %d all-zero rows; set to 0", int(zero.sum()))
    safe = np.where(zero, 1.0, norms)
    grad = (dU - radial * U) / safe[:, None]
    grad[zero] = 0.0
    return float(value), grad


def ce_grad(Y, spec: ObjectiveSpec) -> np.ndarray:
    return spec(Y)[1]


@dataclass
class QuadraticObjective:
    """``0.5 (x - c)^T A (x - c)`` on flattened coordinates; a reference problem."""

    A: np.ndarray
    center: np.ndarray

    def __call__(self, x) -> tuple[float, np.ndarray]:
        x = np.asarray(x, dtype=np.float64)
        r = (x - self.center).reshape(-1)
        g = self.A @ r
        return 0.5 * float(r @ g), g.reshape(x.shape)


@dataclass
class LossReport:
    initial_loss: float
    losses: list = field(default_factory=list)
    steps: list = field(default_factory=list)
    grad_norm: float = float("nan")
    best_iter: int = 0
    diverged: bool = False

    @property
    def best_loss(self) -> float:
        return self.initial_loss if self.best_iter == 0 else self.losses[self.best_iter - 1]


def bb_minimize(
    objective: Callable[[np.ndarray], tuple[float, np.ndarray]],
    x0,
    iters: int,
    step0: float = 1e-2,
    step_min: float = 1e-6,
    step_max: float = 1e2,
) -> tuple[np.ndarray, LossReport]:
    """Gradient descent with Barzilai-Borwein (BB1) step sizes.

    ``objective(x)`` returns ``(value, gradient)``.  The first step has
    size ``step0``; later steps use ``s.s / s.y`` clipped to
    ``[step_min, step_max]``, falling back to ``step0`` when ``s.y <= 0``.
    The iterate with the lowest objective (``x0`` included) is returned.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    x = np.array(x0, dtype=np.float64)
    f, g = objective(x)
    if not np.isfinite(f):
        raise ValueError("objective is not finite at the starting point")
    report = LossReport(initial_loss=float(f))
    best_x, best_f = x.copy(), f
    step = step0
    for t in range(1, iters + 1):
        x_new = x - step * g
        f_new, g_new = objective(x_new)
        if not (np.isfinite(f_new) and np.all(np.isfinite(g_new))):
            log.warning("objective diverged at step %d; returning best finite iterate", t)
            report.diverged = True
            break
        report.losses.append(float(f_new))
        report.steps.append(float(step))
        if f_new < best_f:
            best_x, best_f, report.best_iter = x_new.copy(), f_new, t
        s = (x_new - x).reshape(-1)
        y = (g_new - g).reshape(-1)
        sy = float(s @ y)
        step = float(np.clip(s @ s / sy, step_min, step_max)) if sy > 0 else step0
        x, g = x_new, g_new
    report.grad_norm = float(np.linalg.norm(g))
    return best_x, report


def init_embedding(
    X_hat,
    params: Hyperparams,
    start=None,
    fit: bool = True,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, LossReport | None]:
    """Initial embedding and graphs ``(X0, G_tilde0, G0, report)``.

    ``G0`` is the affinity of the denoised features.  The embedding starts
    from ``start`` (default: PCA of ``X_hat``) and, if ``fit``, is refined
    to reproduce ``G0``.
    """
    X_hat = as_features(X_hat)
    G0 = cosine_affinity(X_hat, params.lhat)
    Y = pca_project(X_hat, params.d) if start is None else as_features(start, "start")
    report = None
    if fit:
        spec = ObjectiveSpec([G0], params.ltilde_value)
        Y, report = bb_minimize(spec, Y, params.gd_iters)
    G_tilde = cosine_affinity(Y, params.ltilde_value)
    return Y, G_tilde, G0, report
