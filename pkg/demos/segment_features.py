"""Segment a feature file end to end and inspect what each stage produces.

The script writes a 64-dimensional synthetic sequence to a temporary binary
feature file, reads it back, runs the full pipeline (normalization,
non-local means, embedding, alternating updates), detects boundaries and
saves the learnt graph as a PGM heatmap next to the features.
"""

import tempfile
from pathlib import Path

import numpy as np

from dgeseg import Hyperparams, SynthConfig, boundary_scores, detect_boundaries, gen_markov_gaussian, run_dge
from dgeseg.io import dump_graph_heatmap, load_features, write_features_binary
from dgeseg.metrics import prf_report

rng = np.random.default_rng(2024)
cfg = SynthConfig(means=tuple(map(tuple, rng.normal(size=(4, 64)))), sigma=1.5, seed=1)
X, labels, gt = gen_markov_gaussian(cfg)

out = Path(tempfile.mkdtemp(prefix="dgeseg-demo-"))
write_features_binary(X, out / "features.dgef")
X = load_features(out / "features.dgef")
print(f"loaded {X.shape[0]} frames of {X.shape[1]}-dim features from {out}")

params = Hyperparams(d=15, K=2)
Y, G, history = run_dge(X, params)
for state in history:
    losses = state.loss_history
    best = min(losses) if losses else float("nan")
    print(f"iteration {state.i}: {len(losses)} descent steps, best loss {best:.4f}")

scores = boundary_scores(Y, params.window)
pred = detect_boundaries(scores, z=params.z, min_sep=params.min_sep, W=params.window)
print(f"\npredicted boundaries: {list(map(int, pred))}")
print(f"true boundaries:      {list(map(int, gt))}")
for r in prf_report(pred, gt):
    print(f"  tau={r.tolerance}: P={r.precision:.2f} R={r.recall:.2f} F={r.f_score:.2f}")

dump_graph_heatmap(G, out / "graph.pgm", threshold_fraction=0.1)
print(f"\nheatmap written to {out / 'graph.pgm'}")
