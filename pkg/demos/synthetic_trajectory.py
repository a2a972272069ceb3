"""Watch boundary quality change over DGE iterations on a toy sequence.

A four-state two-dimensional Markov-switching Gaussian sequence is generated
for a handful of seeds. Each sequence is run through ten embedding/graph
rounds, and the boundary F-score at a tolerance of five frames is printed
after every round.

Run with ``python3 demos/synthetic_trajectory.py [n_seeds]``.
"""

import sys

import numpy as np

from dgeseg import Hyperparams, SynthConfig, gen_markov_gaussian, prf_at_tolerance, run_dge, segment_embedding

n_seeds = int(sys.argv[1]) if len(sys.argv) > 1 else 5
params = Hyperparams(d=2, K=10, n_clusters=4)

curves = []
for seed in range(n_seeds):
    X, labels, gt = gen_markov_gaussian(SynthConfig(seed=seed))
    # the raw data is already 2-D, so it serves as the starting embedding
    _, _, history = run_dge(X, params.replace(seed=seed), preprocess=False, init="raw")
    curve = [prf_at_tolerance(segment_embedding(s.embedding, params), gt, 5).f_score for s in history]
    curves.append(curve)
    print(f"seed {seed}: {len(gt)} true boundaries, F {curve[0]:.3f} -> {curve[-1]:.3f}")

mean = np.mean(curves, axis=0)
print("\nmean F by iteration")
for i, f in enumerate(mean):
    print(f"  {i:2d}  {f:.3f}  " + "#" * int(round(f * 40)))
