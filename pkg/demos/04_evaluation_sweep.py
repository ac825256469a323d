"""
Scoring annotated pairs
=======================

Threshold sweep, accuracy, F1 and Pearson on a toy set of scored pairs.
"""

import numpy as np

from tesim.evaluation import AnnotatedPair, evaluation_report, pearson, threshold_sweep

rng = np.random.default_rng(0)
label5 = rng.integers(1, 6, size=40)
label2 = (label5 >= 3).astype(int)
# noisy scores that loosely follow the 5-level label
scores = np.clip(label5 / 5 + rng.normal(0, 0.15, size=40), 0, 1)

print(pearson(scores, label5), pearson(scores, label2))

sweep = threshold_sweep(list(scores), list(label2))
best = sweep.best_f1()
print(best.threshold, best.counts, round(best.f1, 4))

pairs = [AnnotatedPair(f"a{i}", f"b{i}", int(y2), int(y5)) for i, (y2, y5) in enumerate(zip(label2, label5))]
print(evaluation_report(list(scores), pairs))
