"""Topic Event records: the structured summary of one article.

A topic event carries six scored elements (target, domain, style,
methodology, keywords, date) plus identifiers and optional free-text
extras.  Records are serialized as JSON objects, one per file or one per
line in batch files.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

__all__ = [
    "ResearchStyle",
    "Terminology",
    "PubDate",
    "TopicEvent",
    "Violation",
    "RecordError",
    "ValidationError",
    "normalize_text",
    "validate_topic_event",
    "parse_topic_event",
    "parse_topic_events",
    "serialize_topic_event",
    "serialize_topic_events",
    "REQUIRED_FIELDS",
    "OPTIONAL_EXTRAS",
]

_WS = re.compile(r"\s+")

REQUIRED_FIELDS = ("eid", "did", "target", "domain", "style", "date")
OPTIONAL_EXTRAS = (
    "name",
    "object",
    "tools",
    "feature",
    "conclusion",
    "background",
    "forecast",
    "performance",
    "dataset",
    "metadata",
)


def normalize_text(text: str) -> str:
    """Lowercase and collapse runs of whitespace."""
    return _WS.sub(" ", text).strip().lower()


class ResearchStyle(str, enum.Enum):
    THEORETICAL_ORIGINATION = "TheoreticalOrigination"
    METHODOLOGY_IMPROVEMENT = "MethodologyImprovement"
    SYSTEM_IMPLEMENTATION = "SystemImplementation"
    ISSUE_SOLUTION = "IssueSolution"
    SURVEY = "Survey"
    ANALYSIS = "Analysis"
    PHENOMENON_DISCOVERY = "PhenomenonDiscovery"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Terminology:
    """An extracted term; ``concept_id`` is filled in once it is linked."""

    surface: str
    concept_id: str | None = None
    canonical: str = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "canonical", normalize_text(self.surface))


@dataclass(frozen=True)
class PubDate:
    year: int
    month: int
    #: True when the source gave only a year and month was defaulted to 6.
    month_imputed: bool = False

    @classmethod
    def parse(cls, text: str) -> "PubDate":
        m = re.fullmatch(r"\s*(\d{4})(?:-(\d{1,2}))?\s*", text)
        if m is None:
            raise ValueError(f"bad date {text!r}; expected YYYY-MM")
        if m.group(2) is None:
            return cls(int(m.group(1)), 6, month_imputed=True)
        month = int(m.group(2))
        if not 1 <= month <= 12:
            raise ValueError(f"bad date {text!r}; month must be 1..12")
        return cls(int(m.group(1)), month)

    def __str__(self) -> str:
        if self.month_imputed:
            return f"{self.year:04d}"
        return f"{self.year:04d}-{self.month:02d}"

    @property
    def fractional_year(self) -> float:
        return self.year + self.month / 12


@dataclass(frozen=True)
class TopicEvent:
    eid: str
    did: str
    target: tuple[Terminology, ...]
    domain: Terminology | None
    style: ResearchStyle | None
    date: PubDate | None
    methodology: tuple[Terminology, ...] = ()
    keywords: tuple[Terminology, ...] = ()
    extras: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for name in ("target", "methodology", "keywords"):
            value = getattr(self, name)
            if not isinstance(value, tuple):
                object.__setattr__(self, name, tuple(value))


@dataclass(frozen=True)
class Violation:
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message}"


class RecordError(ValueError):
    """Malformed TE record text."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)


class ValidationError(ValueError):
    """A TE record is well-formed but misses or violates required fields."""

    def __init__(self, violations: Iterable[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))

    @property
    def fields(self) -> list[str]:
        return [v.field for v in self.violations]


def _check_terms(name: str, terms: Iterable[Terminology], report: list[Violation]) -> None:
    for i, term in enumerate(terms):
        if not isinstance(term, Terminology):
            report.append(Violation(f"{name}[{i}]", "not a terminology"))
        elif not term.canonical:
            report.append(Violation(f"{name}[{i}]", "empty surface"))


def validate_topic_event(te: TopicEvent) -> list[Violation]:
    """Return every violated invariant; an empty list means ``te`` is valid."""
    report: list[Violation] = []
    for name in ("eid", "did"):
        value = getattr(te, name)
        if not isinstance(value, str) or not value.strip():
            report.append(Violation(name, "missing identifier"))

    if not te.target:
        report.append(Violation("target", "at least one terminology required"))
    _check_terms("target", te.target, report)
    _check_terms("methodology", te.methodology, report)
    _check_terms("keywords", te.keywords, report)

    if te.domain is None:
        report.append(Violation("domain", "missing"))
    elif not isinstance(te.domain, Terminology) or not te.domain.canonical:
        report.append(Violation("domain", "empty surface"))

    if te.style is None:
        report.append(Violation("style", "missing"))
    elif not isinstance(te.style, ResearchStyle):
        report.append(Violation("style", f"unknown style {te.style!r}"))

    if te.date is None:
        report.append(Violation("date", "missing"))
    else:
        if not 1900 <= te.date.year <= 2100:
            report.append(Violation("date.year", f"{te.date.year} outside 1900..2100"))
        if not 1 <= te.date.month <= 12:
            report.append(Violation("date.month", f"{te.date.month} outside 1..12"))
    return report


# -- serialization -----------------------------------------------------------


def _term_to_json(term: Terminology) -> Any:
    if term.concept_id is None:
        return term.surface
    return {"surface": term.surface, "concept_id": term.concept_id}


def _term_from_json(value: Any, where: str) -> Terminology:
    if isinstance(value, str):
        return Terminology(value)
    if isinstance(value, dict) and isinstance(value.get("surface"), str):
        cid = value.get("concept_id")
        return Terminology(value["surface"], None if cid is None else str(cid))
    raise RecordError(f"{where}: expected a string or {{surface, concept_id}} object")


def _term_list(value: Any, where: str) -> tuple[Terminology, ...]:
    if value is None:
        return ()
    if isinstance(value, (str, dict)):
        value = [value]
    if not isinstance(value, list):
        raise RecordError(f"{where}: expected a list")
    return tuple(_term_from_json(v, f"{where}[{i}]") for i, v in enumerate(value))


def te_to_dict(te: TopicEvent) -> dict[str, Any]:
    out: dict[str, Any] = {
        "eid": te.eid,
        "did": te.did,
        "target": [_term_to_json(t) for t in te.target],
        "methodology": [_term_to_json(t) for t in te.methodology],
        "domain": None if te.domain is None else _term_to_json(te.domain),
        "style": None if te.style is None else te.style.value,
        "keywords": [_term_to_json(t) for t in te.keywords],
        "date": None if te.date is None else str(te.date),
    }
    for key in OPTIONAL_EXTRAS:
        if key in te.extras:
            out[key] = te.extras[key]
    return out


def te_from_dict(data: Mapping[str, Any]) -> TopicEvent:
    if not isinstance(data, Mapping):
        raise RecordError("record is not a JSON object")
    problems = [
        Violation(name, "required field absent")
        for name in REQUIRED_FIELDS
        if data.get(name) in (None, "", [])
    ]
    absent = {v.field for v in problems}

    style = date = None
    if "style" not in absent:
        try:
            style = ResearchStyle(data["style"])
        except ValueError:
            problems.append(Violation("style", f"unknown style {data['style']!r}"))
    if "date" not in absent:
        try:
            date = PubDate.parse(str(data["date"]))
        except ValueError as exc:
            problems.append(Violation("date", str(exc)))
    if problems:
        raise ValidationError(problems)

    te = TopicEvent(
        eid=str(data["eid"]),
        did=str(data["did"]),
        target=_term_list(data["target"], "target"),
        methodology=_term_list(data.get("methodology"), "methodology"),
        domain=_term_from_json(data["domain"], "domain"),
        style=style,
        keywords=_term_list(data.get("keywords"), "keywords"),
        date=date,
        extras={k: data[k] for k in OPTIONAL_EXTRAS if k in data},
    )
    report = validate_topic_event(te)
    if report:
        raise ValidationError(report)
    return te


def serialize_topic_event(te: TopicEvent) -> str:
    """One-line JSON record, stable key order."""
    return json.dumps(te_to_dict(te), ensure_ascii=False)


def serialize_topic_events(tes: Iterable[TopicEvent]) -> str:
    return "".join(serialize_topic_event(te) + "\n" for te in tes)


def _decode(serialized: bytes | str) -> str:
    if isinstance(serialized, bytes):
        try:
            return serialized.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise RecordError("invalid UTF-8", exc.start) from None
    return serialized


def _loads(text: str, base_offset: int = 0) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        offset = base_offset + len(text[: exc.pos].encode("utf-8"))
        raise RecordError(f"malformed record: {exc.msg}", offset) from None


def parse_topic_event(serialized: bytes | str) -> TopicEvent:
    """Parse a single TE record.

    Raises :class:`RecordError` (with byte offset) for malformed text and
    :class:`ValidationError` naming each missing or invalid required field.
    """
    return te_from_dict(_loads(_decode(serialized)))


def parse_topic_events(serialized: bytes | str) -> list[TopicEvent]:
    """Parse a batch file holding one record per line (blank lines ignored)."""
    text = _decode(serialized)
    out = []
    offset = 0
    for line in text.splitlines(keepends=True):
        if line.strip():
            out.append(te_from_dict(_loads(line, offset)))
        offset += len(line.encode("utf-8"))
    return out
