"""Boundary and clustering evaluation metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


@dataclass(frozen=True)
class PRF:
    tolerance: int
    precision: float
    recall: float
    f_score: float
    matched: int


def match_boundaries(pred, gt, tau: int) -> list[tuple[int, int]]:
    """Maximum one-to-one matching of boundaries with ``|p - g| <= tau``.

    Both lists must be sorted.  Scanning them together and pairing the
    earliest compatible elements is optimal because every tolerance
    window has the same width.
    """
    pred = [int(p) for p in pred]
    gt = [int(g) for g in gt]
    pairs = []
    i = j = 0
    while i < len(pred) and j < len(gt):
        p, g = pred[i], gt[j]
        if abs(p - g) <= tau:
            pairs.append((p, g))
            i += 1
            j += 1
        elif p < g:
            i += 1
        else:
            j += 1
    return pairs


def prf_at_tolerance(pred, gt, tau: int) -> PRF:
    """Precision, recall and F-score at tolerance ``tau``.

    Two empty lists score 1 everywhere; a single empty list gives 0.
    """
    n_pred, n_gt = len(pred), len(gt)
    if n_pred == 0 and n_gt == 0:
        return PRF(tau, 1.0, 1.0, 1.0, 0)
    m = len(match_boundaries(pred, gt, tau))
    precision = m / n_pred if n_pred else 0.0
    recall = m / n_gt if n_gt else 0.0
    f = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    return PRF(tau, precision, recall, f, m)


def prf_report(pred, gt, tolerances=(1, 2, 3, 4, 5)) -> list[PRF]:
    return [prf_at_tolerance(pred, gt, t) for t in tolerances]


def contingency(labels, gt_labels) -> np.ndarray:
    a = np.asarray(labels).reshape(-1)
    b = np.asarray(gt_labels).reshape(-1)
    if a.size != b.size:
        raise ValueError(f"label lengths differ: {a.size} vs {b.size}")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1), dtype=np.int64)
    np.add.at(table, (ai, bi), 1)
    return table


def clustering_accuracy(labels, gt_labels) -> float:
    """Fraction of frames correct under the best one-to-one cluster mapping."""
    table = contingency(labels, gt_labels)
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum() / table.sum())


def _entropy(counts: np.ndarray) -> float:
    p = counts[counts > 0] / counts.sum()
    return float(-(p * np.log(p)).sum())


def nmi(labels, gt_labels) -> float:
    """Mutual information normalized by the geometric mean of the entropies."""
    table = contingency(labels, gt_labels).astype(np.float64)
    ha = _entropy(table.sum(axis=1))
    hb = _entropy(table.sum(axis=0))
    if ha == 0 and hb == 0:
        return 1.0
    if ha == 0 or hb == 0:
        return 0.0
    total = table.sum()
    pij = table / total
    outer = np.outer(pij.sum(axis=1), pij.sum(axis=0))
    nz = pij > 0
    mi = float((pij[nz] * np.log(pij[nz] / outer[nz])).sum())
    return min(1.0, max(0.0, mi / np.sqrt(ha * hb)))
