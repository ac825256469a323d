"""Rooted concept hierarchies with depth, LCS and Wu-Palmer queries.

Ontology files are UTF-8 text with one node per line::

    node_id <TAB> parent_id|- <TAB> label <TAB> synonym1;synonym2;...

``-`` marks the root and ``#`` starts a comment line.  The same format
carries both the domain ontology and the research-style hierarchy.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np
from rapidfuzz import process
from rapidfuzz.distance import Levenshtein

from .model import ResearchStyle, Terminology, normalize_text

__all__ = [
    "ConceptNode",
    "OntologyGraph",
    "OntologyError",
    "Link",
    "LOW_CONFIDENCE_RATIO",
    "normalize_term",
    "levenshtein",
    "load_ontology",
    "load_style_ontology",
    "lcs",
    "wu_palmer",
    "link_terminology",
]

#: Links whose distance / max(len) exceeds this ratio are low-confidence.
LOW_CONFIDENCE_RATIO = 0.4

_ARTICLE = re.compile(r"^(?:a|an|the) ")


class OntologyError(ValueError):
    pass


def normalize_term(text: str) -> str:
    """Lowercase, collapse whitespace and drop a leading article."""
    return _ARTICLE.sub("", normalize_text(text))


def levenshtein(a: str, b: str) -> int:
    """Unit-cost edit distance between the normalized forms of two strings."""
    return _raw_levenshtein(normalize_text(a), normalize_text(b))


def _raw_levenshtein(a: str, b: str) -> int:
    return Levenshtein.distance(a, b)


@dataclass(frozen=True)
class ConceptNode:
    node_id: str
    label: str
    synonyms: tuple[str, ...] = ()
    parent: str | None = None

    @property
    def names(self) -> tuple[str, ...]:
        return (self.label, *self.synonyms)


@dataclass(frozen=True)
class Link:
    node_id: str
    score: int
    matched: str
    confident: bool


@dataclass(frozen=True, eq=False)
class OntologyGraph:
    """Immutable single-parent concept tree.  The root has depth 1."""

    nodes: Mapping[str, ConceptNode]
    root: str
    depth_cache: Mapping[str, int] = field(repr=False)
    _ancestors: Mapping[str, tuple[str, ...]] = field(repr=False)
    _names: Mapping[str, tuple[str, ...]] = field(repr=False)

    @classmethod
    def from_nodes(cls, nodes: Iterable[ConceptNode]) -> "OntologyGraph":
        table: dict[str, ConceptNode] = {}
        for node in nodes:
            if node.node_id in table:
                raise OntologyError(f"duplicate node id {node.node_id!r}")
            if not normalize_text(node.label):
                raise OntologyError(f"node {node.node_id!r} has an empty label")
            table[node.node_id] = node
        if not table:
            raise OntologyError("ontology has no nodes")

        roots = sorted(n.node_id for n in table.values() if n.parent is None)
        if not roots:
            # every node has a parent, so following parents must loop
            raise OntologyError(f"cycle detected at node {_find_cycle(table)!r}")
        if len(roots) > 1:
            raise OntologyError(f"multiple roots: {', '.join(roots)}")
        for node in table.values():
            if node.parent is not None and node.parent not in table:
                raise OntologyError(
                    f"node {node.node_id!r} has dangling parent {node.parent!r}"
                )

        depth: dict[str, int] = {roots[0]: 1}
        ancestors: dict[str, tuple[str, ...]] = {roots[0]: (roots[0],)}
        for node_id in table:
            chain = []
            cur = node_id
            seen = set()
            while cur not in depth:
                if cur in seen:
                    raise OntologyError(f"cycle detected at node {cur!r}")
                seen.add(cur)
                chain.append(cur)
                cur = table[cur].parent  # type: ignore[assignment]
            for nid in reversed(chain):
                parent = table[nid].parent
                depth[nid] = depth[parent] + 1
                ancestors[nid] = ancestors[parent] + (nid,)

        names: dict[str, list[str]] = {}
        for node in table.values():
            for name in node.names:
                key = normalize_term(name)
                if key:
                    names.setdefault(key, []).append(node.node_id)
        return cls(
            nodes=table,
            root=roots[0],
            depth_cache=depth,
            _ancestors=ancestors,
            _names={k: tuple(v) for k, v in names.items()},
        )

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node_id: object) -> bool:
        return node_id in self.nodes

    def _require(self, node_id: str) -> None:
        if node_id not in self.nodes:
            raise KeyError(f"unknown node {node_id!r}")

    def depth(self, node_id: str) -> int:
        self._require(node_id)
        return self.depth_cache[node_id]

    def ancestors(self, node_id: str) -> tuple[str, ...]:
        """Root-to-node path, inclusive."""
        self._require(node_id)
        return self._ancestors[node_id]

    def children(self, node_id: str) -> list[str]:
        self._require(node_id)
        return [n.node_id for n in self.nodes.values() if n.parent == node_id]

    def leaves(self) -> list[str]:
        parents = {n.parent for n in self.nodes.values()}
        return [nid for nid in self.nodes if nid not in parents]

    @property
    def max_depth(self) -> int:
        return max(self.depth_cache.values())

    def depth_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.depth_cache.values()).items()))

    def find_label(self, text: str) -> list[str]:
        """Node ids whose label or synonym equals ``text`` after normalization."""
        return list(self._names.get(normalize_term(text), ()))

    def name_index(self) -> Mapping[str, tuple[str, ...]]:
        return self._names


def _find_cycle(table: Mapping[str, ConceptNode]) -> str:
    start = min(table)
    seen: list[str] = []
    cur: str | None = start
    while cur is not None and cur not in seen:
        seen.append(cur)
        cur = table[cur].parent if cur in table else None
    return cur if cur is not None else start


def load_ontology(source: bytes | str) -> OntologyGraph:
    """Parse ontology text and validate the tree invariants."""
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    nodes = []
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 3:
            raise OntologyError(f"line {lineno}: expected at least 3 tab-separated fields")
        node_id, parent, label = (p.strip() for p in parts[:3])
        synonyms = ()
        if len(parts) > 3:
            synonyms = tuple(s.strip() for s in parts[3].split(";") if s.strip())
        if not node_id:
            raise OntologyError(f"line {lineno}: empty node id")
        nodes.append(
            ConceptNode(node_id, label, synonyms, None if parent in ("", "-") else parent)
        )
    return OntologyGraph.from_nodes(nodes)


def load_style_ontology(source: bytes | str) -> OntologyGraph:
    """Load a style hierarchy; its leaves must be exactly the seven styles."""
    graph = load_ontology(source)
    leaves = set(graph.leaves())
    expected = {s.value for s in ResearchStyle}
    if leaves != expected:
        missing = sorted(expected - leaves)
        extra = sorted(leaves - expected)
        raise OntologyError(f"style leaves mismatch: missing={missing} extra={extra}")
    return graph


def lcs(g: OntologyGraph, a: str, b: str) -> str:
    """Deepest node that is an ancestor-or-self of both ``a`` and ``b``."""
    pa, pb = g.ancestors(a), g.ancestors(b)
    common = g.root
    for x, y in zip(pa, pb):
        if x != y:
            break
        common = x
    return common


def wu_palmer(g: OntologyGraph, a: str, b: str) -> float:
    """2 * depth(lcs) / (depth(a) + depth(b))."""
    da, db = g.depth(a), g.depth(b)
    return 2.0 * g.depth_cache[lcs(g, a, b)] / (da + db)


def link_terminology(g: OntologyGraph, term: Terminology | str) -> Link:
    """Map a term to the node whose label or synonym is closest in edit distance.

    Exact normalized matches score 0.  Ties break on the smallest label, then
    the smallest node id.  The link is flagged low-confidence when the
    distance exceeds ``LOW_CONFIDENCE_RATIO`` of the longer string.
    """
    surface = term.surface if isinstance(term, Terminology) else term
    return _link_cached(g, normalize_term(surface))


@lru_cache(maxsize=64)
def _name_list(g: OntologyGraph) -> tuple[str, ...]:
    return tuple(g.name_index())


@lru_cache(maxsize=65536)
def _link_cached(g: OntologyGraph, query: str) -> Link:
    exact = g.name_index().get(query)
    if exact:
        best = min(exact, key=lambda nid: (normalize_text(g.nodes[nid].label), nid))
        return Link(best, 0, query, True)

    names = _name_list(g)
    dists = process.cdist([query], names, scorer=Levenshtein.distance, dtype=np.int32)[0]
    dist = int(dists.min())
    best_key: tuple[str, str] | None = None
    best_name = ""
    for i in np.flatnonzero(dists == dist):
        for nid in g.name_index()[names[i]]:
            key = (normalize_text(g.nodes[nid].label), nid)
            if best_key is None or key < best_key:
                best_key, best_name = key, names[i]
    assert best_key is not None
    nid = best_key[1]
    longest = max(len(query), len(best_name), 1)
    return Link(nid, dist, best_name, dist / longest <= LOW_CONFIDENCE_RATIO)
