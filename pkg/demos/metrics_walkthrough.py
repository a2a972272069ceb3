"""Small worked examples for the evaluation helpers.

Boundary matching is one-to-one within a tolerance, so a predicted boundary
cannot be credited twice. Clustering accuracy searches for the best label
permutation, and NMI is insensitive to how clusters are named.
"""

import numpy as np

from dgeseg import clustering_accuracy, match_boundaries, nmi, prf_at_tolerance

gt = [10, 20, 30]
pred = [9, 11, 17, 29, 45]
print("gt", gt, "pred", pred)
for tau in (1, 2, 5):
    r = prf_at_tolerance(pred, gt, tau)
    print(f"  tau={tau}: matched {match_boundaries(pred, gt, tau)}  "
          f"P={r.precision:.2f} R={r.recall:.2f} F={r.f_score:.2f}")

truth = [0, 0, 0, 1, 1, 2, 2, 2]
renamed = [2, 2, 2, 0, 0, 1, 1, 1]
noisy = [2, 2, 1, 0, 0, 1, 1, 0]
print("\nlabels renamed: ACC", clustering_accuracy(renamed, truth), "NMI", round(nmi(renamed, truth), 3))
print("labels noisy:   ACC", clustering_accuracy(noisy, truth), "NMI", round(nmi(noisy, truth), 3))

rng = np.random.default_rng(0)
a, b = rng.integers(0, 5, 10_000), rng.integers(0, 5, 10_000)
print("independent labelings of length 1e4: NMI", round(nmi(a, b), 4))
