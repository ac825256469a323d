"""
Latent semantic vectors as a term backend
=========================================
"""

import numpy as np

from tesim import Terminology
from tesim.termsim import build_lsa_space, cosine_score

docs = [
    "relation extraction kernel dependency relation entity".split(),
    "event extraction trigger argument event biomedical".split(),
    "machine translation alignment phrase decoder translation".split(),
    "neural machine translation encoder decoder attention".split(),
    "entity relation extraction supervised kernel".split(),
]
space = build_lsa_space(docs, k=2)
print(space.term_vectors.shape)
print(np.round(space.matrix, 2)[:4])

# rank-2 reconstruction versus the weighted matrix
print(np.linalg.norm(space.matrix - space.reconstruct()))

for u, v in [("relation", "kernel"), ("relation", "decoder"), ("translation", "decoder")]:
    print(u, v, round(cosine_score(space.vector(u), space.vector(v)), 3))

# phrases are sums of their word vectors; unknown words are skipped
backend = space.backend()
print(backend.score(Terminology("relation extraction"), Terminology("event extraction")))
print(backend.score(Terminology("relation extraction"), Terminology("quantum foam")))
