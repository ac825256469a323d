"""Bundled default resources and helpers to load user-supplied ones."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources as _res
from pathlib import Path

from .extraction import Resources, load_pattern_rules, load_style_rules, load_triggers
from .ontology import OntologyGraph, load_ontology, load_style_ontology

DATA_FILES = {
    "ontology": "cl_ontology.tsv",
    "style_ontology": "style_ontology.tsv",
    "patterns": "patterns.tsv",
    "style_rules": "style_rules.tsv",
    "triggers": "triggers.txt",
}


def data_text(name: str) -> str:
    """Text of a bundled data file, e.g. ``data_text("patterns.tsv")``."""
    return _res.files("tesim").joinpath("data", name).read_text(encoding="utf-8")


def _read(path: str | Path | None, key: str) -> str:
    if path is None:
        return data_text(DATA_FILES[key])
    return Path(path).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def default_ontology() -> OntologyGraph:
    return load_ontology(data_text(DATA_FILES["ontology"]))


@lru_cache(maxsize=None)
def default_style_ontology() -> OntologyGraph:
    return load_style_ontology(data_text(DATA_FILES["style_ontology"]))


def load_resources(
    ontology: str | Path | None = None,
    patterns: str | Path | None = None,
    style_rules: str | Path | None = None,
    triggers: str | Path | None = None,
) -> Resources:
    """Extraction resources; any path left as ``None`` uses the bundled file."""
    graph = default_ontology() if ontology is None else load_ontology(_read(ontology, "ontology"))
    return Resources(
        ontology=graph,
        patterns=tuple(load_pattern_rules(_read(patterns, "patterns"))),
        style_rules=tuple(load_style_rules(_read(style_rules, "style_rules"))),
        triggers=load_triggers(_read(triggers, "triggers")),
    )


def load_style_graph(path: str | Path | None = None) -> OntologyGraph:
    if path is None:
        return default_style_ontology()
    return load_style_ontology(_read(path, "style_ontology"))
