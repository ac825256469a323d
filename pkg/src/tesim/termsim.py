"""Terminology similarity backends and set-to-set aggregation.

Two interchangeable backends score a pair of terms in [0, 1]:

* :class:`OntologyBackend` links both terms to ontology nodes and returns
  their Wu-Palmer similarity.
* :class:`VectorBackend` composes word vectors (from an LSA space or a
  vector file) and returns the clamped cosine.

Both fall back to exact string equality for terms they cannot place.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np

from .model import Terminology
from .ontology import OntologyGraph, link_terminology, normalize_term, wu_palmer

__all__ = [
    "TermVector",
    "TermSimBackend",
    "OntologyBackend",
    "VectorBackend",
    "LsaSpace",
    "OutOfVocabulary",
    "build_lsa_space",
    "truncated_svd",
    "cosine_score",
    "ontology_backend_score",
    "set_similarity",
    "load_vectors",
    "dump_vectors",
]


class OutOfVocabulary(ValueError):
    """A term has no usable (non-zero) vector."""


class TermSimBackend(Protocol):
    def score(self, a: Terminology, b: Terminology) -> float: ...


def _surface_fallback(a: Terminology, b: Terminology) -> float:
    return 1.0 if normalize_term(a.surface) == normalize_term(b.surface) else 0.0


# -- ontology backend ------------------------------------------------------------


def _node_for(g: OntologyGraph, term: Terminology) -> str | None:
    if term.concept_id is not None and term.concept_id in g:
        return term.concept_id
    link = link_terminology(g, term)
    return link.node_id if link.confident else None


def ontology_backend_score(g: OntologyGraph, a: Terminology, b: Terminology) -> float:
    na, nb = _node_for(g, a), _node_for(g, b)
    if na is None or nb is None:
        return _surface_fallback(a, b)
    return wu_palmer(g, na, nb)


@dataclass(frozen=True)
class OntologyBackend:
    graph: OntologyGraph

    def score(self, a: Terminology, b: Terminology) -> float:
        return ontology_backend_score(self.graph, a, b)


# -- vectors -----------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TermVector:
    term: str
    components: np.ndarray


def cosine_score(u, v) -> float:
    """Cosine of two vectors, with negative values clamped to 0.

    Accepts :class:`TermVector` instances or plain sequences.
    """
    u = np.asarray(getattr(u, "components", u), dtype=float)
    v = np.asarray(getattr(v, "components", v), dtype=float)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise OutOfVocabulary("zero vector")
    c = float(np.dot(u, v) / (nu * nv))
    return min(1.0, max(0.0, c))


@dataclass(frozen=True, eq=False)
class VectorBackend:
    """Cosine similarity over word vectors; phrases use the sum of their words."""

    vectors: Mapping[str, np.ndarray]

    def phrase_vector(self, text: str) -> np.ndarray:
        words = [w for w in normalize_term(text).replace("-", " ").split() if w in self.vectors]
        if not words:
            raise OutOfVocabulary(text)
        return np.sum([self.vectors[w] for w in words], axis=0)

    def score(self, a: Terminology, b: Terminology) -> float:
        if _surface_fallback(a, b) == 1.0:
            return 1.0
        try:
            return cosine_score(self.phrase_vector(a.surface), self.phrase_vector(b.surface))
        except OutOfVocabulary:
            return 0.0


def load_vectors(text: str) -> dict[str, np.ndarray]:
    """Read ``k`` on the first line, then ``term c1 ... ck`` per line."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty vector file")
    k = int(lines[0].split()[0])
    if k < 1:
        raise ValueError("vector dimension must be >= 1")
    out = {}
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split()
        term, comps = " ".join(parts[:-k]), parts[-k:]
        if not term or len(comps) != k:
            raise ValueError(f"vector file line {lineno}: expected a term and {k} components")
        vec = np.array([float(c) for c in comps])
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"vector file line {lineno}: non-finite component")
        out[term] = vec
    return out


def dump_vectors(vectors: Mapping[str, np.ndarray]) -> str:
    items = list(vectors.items())
    k = len(items[0][1]) if items else 0
    rows = [str(k)]
    rows += [term + " " + " ".join(f"{c:.10g}" for c in vec) for term, vec in items]
    return "\n".join(rows) + "\n"


# -- LSA ---------------------------------------------------------------------------


def truncated_svd(matrix: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rank-k SVD ``U_k, s_k, Vt_k`` with a deterministic sign per component.

    Each left singular vector is flipped so its largest-magnitude entry is
    non-negative; the matching right vector flips with it.
    """
    m = np.asarray(matrix, dtype=float)
    if not 1 <= k <= min(m.shape):
        raise ValueError(f"rank k={k} outside 1..{min(m.shape)}")
    u, s, vt = np.linalg.svd(m, full_matrices=False)
    u, s, vt = u[:, :k], s[:k], vt[:k]
    pivot = np.abs(u).argmax(axis=0)
    signs = np.where(u[pivot, np.arange(k)] < 0, -1.0, 1.0)
    return u * signs, s, vt * signs[:, None]


@dataclass(frozen=True, eq=False)
class LsaSpace:
    vocabulary: Mapping[str, int]
    doc_ids: tuple[str, ...]
    k: int
    term_vectors: np.ndarray  # |V| x k, rows are U_k * s_k
    doc_vectors: np.ndarray = field(repr=False)  # #docs x k, rows of V_k
    matrix: np.ndarray = field(repr=False)  # weighted term-document matrix

    def vector(self, term: str) -> np.ndarray:
        try:
            return self.term_vectors[self.vocabulary[term]]
        except KeyError:
            raise OutOfVocabulary(term) from None

    def reconstruct(self) -> np.ndarray:
        return self.term_vectors @ self.doc_vectors.T

    def backend(self) -> VectorBackend:
        return VectorBackend({t: self.term_vectors[i] for t, i in self.vocabulary.items()})


def _weight(counts: np.ndarray, weighting: str) -> np.ndarray:
    if weighting == "raw":
        return counts
    if weighting != "tfidf":
        raise ValueError(f"unknown weighting {weighting!r}")
    n_docs = counts.shape[1]
    df = np.count_nonzero(counts, axis=1)
    # smoothed idf keeps terms that occur in every document non-zero
    idf = np.log((1 + n_docs) / (1 + df)) + 1.0
    return np.log1p(counts) * idf[:, None]


def build_lsa_space(
    docs: Sequence[Iterable[str]],
    k: int,
    doc_ids: Sequence[str] | None = None,
    weighting: str = "tfidf",
) -> LsaSpace:
    """Term-by-document matrix, weighted by log(1+tf)*idf, reduced by rank-k SVD.

    ``weighting="raw"`` keeps plain counts.  Vocabulary rows are sorted.
    """
    if not docs:
        raise ValueError("no documents")
    counters = [Counter(d) for d in docs]
    vocab = sorted(set().union(*counters))
    if not vocab:
        raise ValueError("empty vocabulary")
    index = {t: i for i, t in enumerate(vocab)}
    counts = np.zeros((len(vocab), len(docs)))
    for j, c in enumerate(counters):
        for term, n in c.items():
            counts[index[term], j] = n
    if not 1 <= k <= min(counts.shape):
        raise ValueError(f"rank k={k} outside 1..{min(counts.shape)}")
    weighted = _weight(counts, weighting)
    u, s, vt = truncated_svd(weighted, k)
    ids = tuple(doc_ids) if doc_ids is not None else tuple(str(i) for i in range(len(docs)))
    if len(ids) != len(docs):
        raise ValueError("doc_ids length differs from docs")
    return LsaSpace(index, ids, k, u * s, vt.T, weighted)


# -- aggregation -------------------------------------------------------------------


def set_similarity(
    a: Sequence[Terminology], b: Sequence[Terminology], backend: TermSimBackend
) -> float:
    """Symmetric greedy alignment of two term collections.

    Every term contributes its best match in the other collection; the sum
    is divided by the total number of terms.  Two empty collections agree
    (1.0); one empty collection scores 0.0.
    """
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    scores = [[backend.score(x, y) for y in b] for x in a]
    forward = sum(max(row) for row in scores)
    backward = sum(max(scores[i][j] for i in range(len(a))) for j in range(len(b)))
    total = (forward + backward) / (len(a) + len(b))
    return min(1.0, max(0.0, total))
