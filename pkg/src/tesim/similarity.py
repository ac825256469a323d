"""Document similarity as a weighted sum of topic event element similarities."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Mapping

from .model import PubDate, ResearchStyle, TopicEvent, ValidationError, validate_topic_event
from .ontology import OntologyGraph, wu_palmer
from .termsim import OntologyBackend, TermSimBackend, set_similarity

__all__ = [
    "ELEMENTS",
    "OPTIONAL_ELEMENTS",
    "DEFAULT_WEIGHTS",
    "ConfigError",
    "Settings",
    "SimilarityConfig",
    "SimilarityBreakdown",
    "style_similarity",
    "date_similarity",
    "te_similarity",
    "load_settings",
    "dump_settings",
]

ELEMENTS = ("target", "domain", "style", "methodology", "keywords", "date")
OPTIONAL_ELEMENTS = ("methodology", "keywords")
DEFAULT_WEIGHTS = MappingProxyType(
    {"target": 0.3, "domain": 0.25, "style": 0.25, "methodology": 0.1, "keywords": 0.05, "date": 0.05}
)
BACKENDS = ("onto", "lsa", "vectors")


class ConfigError(ValueError):
    pass


def _check_weights(weights: Mapping[str, float]) -> None:
    if set(weights) != set(ELEMENTS):
        raise ConfigError(f"weights must cover exactly {', '.join(ELEMENTS)}")
    for name, w in weights.items():
        if not math.isfinite(w) or w < 0:
            raise ConfigError(f"weight {name}={w} must be a non-negative number")
    total = sum(weights.values())
    if abs(total - 1.0) > 1e-9:
        raise ConfigError(f"weights sum to {total!r}, expected 1")


# -- element similarities --------------------------------------------------------


def style_similarity(s: OntologyGraph, a: ResearchStyle, b: ResearchStyle) -> float:
    """Wu-Palmer similarity of two styles in the style hierarchy."""
    a_id, b_id = ResearchStyle(a).value, ResearchStyle(b).value
    for node in (a_id, b_id):
        if node not in s:
            raise KeyError(f"style {node!r} not in style ontology")
    return wu_palmer(s, a_id, b_id)


def date_similarity(d1: PubDate, d2: PubDate) -> float:
    """1 / (1 + |fractional year difference|), months counted as twelfths."""
    gap = (d1.year - d2.year) + (d1.month - d2.month) / 12
    return 1.0 / (1.0 + abs(gap))


# -- configuration ---------------------------------------------------------------


@dataclass(frozen=True)
class Settings:
    """The file-level configuration: weights and backend choice."""

    weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    backend: str = "onto"
    lsa_rank: int = 100

    def __post_init__(self) -> None:
        _check_weights(self.weights)
        if self.backend not in BACKENDS:
            raise ConfigError(f"backend must be one of {', '.join(BACKENDS)}")
        if self.lsa_rank < 1:
            raise ConfigError("lsa_rank must be >= 1")


def load_settings(text: str) -> Settings:
    """Parse ``key=value`` lines (``weight.<element>``, ``backend``, ``lsa_rank``)."""
    weights = dict(DEFAULT_WEIGHTS)
    kwargs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (p.strip() for p in line.partition("="))
        if not sep:
            raise ConfigError(f"config line {lineno}: expected key=value")
        try:
            if key.startswith("weight."):
                name = key[len("weight."):]
                if name not in ELEMENTS:
                    raise ConfigError(f"config line {lineno}: unknown element {name!r}")
                weights[name] = float(value)
            elif key == "backend":
                kwargs["backend"] = value
            elif key == "lsa_rank":
                kwargs["lsa_rank"] = int(value)
            else:
                raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"config line {lineno}: {exc}") from None
    return Settings(weights=weights, **kwargs)


def dump_settings(settings: Settings) -> str:
    lines = [f"weight.{name}={settings.weights[name]:g}" for name in ELEMENTS]
    lines += [f"backend={settings.backend}", f"lsa_rank={settings.lsa_rank}"]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SimilarityConfig:
    """Weights plus the scorers used for each element.

    ``domain_backend`` defaults to ``backend`` when that is an ontology
    backend; it must be given explicitly alongside a vector backend.
    """

    backend: TermSimBackend
    style_ontology: OntologyGraph
    weights: Mapping[str, float] = field(default_factory=lambda: dict(DEFAULT_WEIGHTS))
    domain_backend: TermSimBackend | None = None

    def __post_init__(self) -> None:
        _check_weights(self.weights)
        if self.domain_backend is None:
            if not isinstance(self.backend, OntologyBackend):
                raise ConfigError("domain_backend is required with a non-ontology backend")
            object.__setattr__(self, "domain_backend", self.backend)

    def with_weights(self, weights: Mapping[str, float]) -> "SimilarityConfig":
        return replace(self, weights=dict(weights))


@dataclass(frozen=True)
class SimilarityBreakdown:
    scores: Mapping[str, float | None]  # None for an element left out
    weights: Mapping[str, float]  # effective weights after redistribution
    total: float

    def lines(self, digits: int = 4) -> list[str]:
        out = []
        for name in ELEMENTS:
            s = self.scores[name]
            shown = "absent" if s is None else f"{s:.{digits}f}"
            out.append(f"S.{name}={shown}")
            out.append(f"w.{name}={self.weights[name]:.{digits}f}")
        out.append(f"total={self.total:.{digits}f}")
        return out


def _effective_weights(base: Mapping[str, float], active: list[str]) -> dict[str, float]:
    mass = sum(base[n] for n in active)
    if mass > 0:
        return {n: (base[n] / mass if n in active else 0.0) for n in ELEMENTS}
    # all weight sat on dropped elements
    return {n: (1.0 / len(active) if n in active else 0.0) for n in ELEMENTS}


def te_similarity(e1: TopicEvent, e2: TopicEvent, cfg: SimilarityConfig) -> SimilarityBreakdown:
    """Weighted sum of the six element similarities.

    If methodology or keywords is empty in either event, that element is
    dropped and its weight is spread proportionally over the rest.
    """
    for te in (e1, e2):
        report = validate_topic_event(te)
        if report:
            raise ValidationError(report)

    scores: dict[str, float | None] = {
        "target": set_similarity(e1.target, e2.target, cfg.backend),
        "domain": cfg.domain_backend.score(e1.domain, e2.domain),  # type: ignore[union-attr]
        "style": style_similarity(cfg.style_ontology, e1.style, e2.style),  # type: ignore[arg-type]
        "methodology": None,
        "keywords": None,
        "date": date_similarity(e1.date, e2.date),  # type: ignore[arg-type]
    }
    for name in OPTIONAL_ELEMENTS:
        xs, ys = getattr(e1, name), getattr(e2, name)
        if xs and ys:
            scores[name] = set_similarity(xs, ys, cfg.backend)

    active = [n for n in ELEMENTS if scores[n] is not None]
    weights = _effective_weights(cfg.weights, active)
    total = sum(weights[n] * scores[n] for n in active)  # type: ignore[operator]
    return SimilarityBreakdown(scores, weights, min(1.0, max(0.0, total)))
