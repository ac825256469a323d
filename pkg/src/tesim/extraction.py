"""Pattern-based topic event extraction from article text.

Pipeline per article: pick the title/abstract/introduction/conclusion
text, split it into sentences, keep the sentences that contain a trigger
word, chunk noun phrases, then let pre/post pattern rules choose the
Target and Methodology.  The style comes from title patterns and the
domain is the candidate concept most similar to the linked target.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import (
    PubDate,
    ResearchStyle,
    Terminology,
    TopicEvent,
    validate_topic_event,
)
from .ontology import OntologyGraph, link_terminology, normalize_term, wu_palmer
from .text import (
    DET,
    NOUN,
    Section,
    TaggedSentence,
    lemma_candidates,
    select_sections,
    split_sentences,
    tag_and_chunk,
    tokenize,
)

__all__ = [
    "ArticleText",
    "PatternRule",
    "StyleRule",
    "Resources",
    "ExtractionError",
    "ArticleFormatError",
    "parse_article",
    "load_pattern_rules",
    "load_style_rules",
    "load_triggers",
    "find_triggers",
    "match_element",
    "classify_style",
    "default_domain_candidates",
    "induce_domain",
    "extract_topic_event",
    "DEFAULT_STYLE",
]

ELEMENTS = ("Target", "Methodology")
DEFAULT_STYLE = ResearchStyle.ISSUE_SOLUTION
KEYWORD_LIMIT = 5


class ExtractionError(Exception):
    """Extraction could not produce a valid topic event."""


class ArticleFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ArticleText:
    did: str
    title: str
    sections: tuple[Section, ...]
    date: PubDate
    declared_keywords: tuple[str, ...] | None = None


@dataclass(frozen=True)
class PatternRule:
    element: str
    position: str
    pattern: tuple[str, ...]
    priority: int

    def __post_init__(self) -> None:
        if self.element not in ELEMENTS:
            raise ValueError(f"unknown element {self.element!r}")
        if self.position not in ("pre", "post"):
            raise ValueError(f"position must be pre or post, got {self.position!r}")
        if not self.pattern:
            raise ValueError("empty pattern")


@dataclass(frozen=True)
class StyleRule:
    style: ResearchStyle
    pattern: str
    priority: int

    def __post_init__(self) -> None:
        if not self.pattern.strip():
            raise ValueError("empty pattern")


@dataclass(frozen=True)
class Resources:
    ontology: OntologyGraph
    patterns: tuple[PatternRule, ...]
    style_rules: tuple[StyleRule, ...]
    triggers: frozenset[str]
    domain_candidates: tuple[str, ...] = field(default=())

    def candidates(self) -> list[str]:
        return list(self.domain_candidates) or default_domain_candidates(self.ontology)


# -- resource files ------------------------------------------------------------


def _data_lines(text: str) -> Iterable[tuple[int, list[str]]]:
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        yield lineno, [p.strip() for p in line.split("\t")]


def load_pattern_rules(text: str) -> list[PatternRule]:
    """``element <TAB> pre|post <TAB> pattern tokens <TAB> priority`` per line."""
    rules = []
    for lineno, parts in _data_lines(text):
        if len(parts) != 4:
            raise ValueError(f"pattern file line {lineno}: expected 4 fields")
        element, position, pattern, priority = parts
        tokens = tuple(t.lower() for t in tokenize(pattern))
        try:
            rules.append(PatternRule(element, position, tokens, int(priority)))
        except ValueError as exc:
            raise ValueError(f"pattern file line {lineno}: {exc}") from None
    return rules


def load_style_rules(text: str) -> list[StyleRule]:
    """``style <TAB> pattern-or-@tag <TAB> priority`` per line."""
    rules = []
    for lineno, parts in _data_lines(text):
        if len(parts) != 3:
            raise ValueError(f"style rule line {lineno}: expected 3 fields")
        style, pattern, priority = parts
        try:
            rules.append(StyleRule(ResearchStyle(style), pattern, int(priority)))
        except ValueError as exc:
            raise ValueError(f"style rule line {lineno}: {exc}") from None
    return rules


def load_triggers(text: str) -> frozenset[str]:
    return frozenset(
        line.strip().lower()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    )


# -- article input -------------------------------------------------------------

_HEADING = re.compile(r"^==\s*(.*?)\s*$")


def parse_article(text: str) -> ArticleText:
    """Parse the front-matter + ``== heading`` article format."""
    meta: dict[str, str] = {}
    sections: list[Section] = []
    heading: str | None = None
    body: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        m = _HEADING.match(line)
        if m:
            if heading is not None:
                sections.append(Section(heading, "\n".join(body).strip()))
            heading, body = m.group(1), []
        elif heading is not None:
            body.append(line)
        elif line.strip() and line.strip() != "---":
            key, sep, value = line.partition(":")
            if not sep:
                raise ArticleFormatError(f"line {lineno}: expected 'key: value' front matter")
            meta[key.strip().lower()] = value.strip()
    if heading is not None:
        sections.append(Section(heading, "\n".join(body).strip()))

    for key in ("did", "title", "date"):
        if not meta.get(key):
            raise ArticleFormatError(f"missing front-matter field {key!r}")
    if not sections:
        raise ArticleFormatError("article has no sections")
    try:
        date = PubDate.parse(meta["date"])
    except ValueError as exc:
        raise ArticleFormatError(str(exc)) from None
    keywords = None
    if meta.get("keywords"):
        keywords = tuple(k.strip() for k in meta["keywords"].split(",") if k.strip())
    return ArticleText(meta["did"], meta["title"], tuple(sections), date, keywords)


# -- operations ----------------------------------------------------------------


def find_triggers(sentence: TaggedSentence, trigger_lexicon: Iterable[str]) -> list[int]:
    """Token positions whose lemma is a trigger word."""
    lexicon = {w.lower() for w in trigger_lexicon}
    if not lexicon:
        raise ValueError("empty trigger lexicon")
    return [i for i, word in enumerate(sentence.words) if lemma_candidates(word) & lexicon]


def _core_start(sentence: TaggedSentence, start: int, end: int) -> int:
    if sentence.tokens[start][1] == DET and end - start > 1:
        return start + 1
    return start


def _fires(rule: PatternRule, sentence: TaggedSentence, words: Sequence[str],
           start: int, core: int, end: int) -> tuple[int, int] | None:
    """Span of the selected phrase if ``rule`` fires on this noun phrase."""
    n = len(rule.pattern)
    if rule.position == "pre":
        for anchor in (start, core):
            if anchor >= n and tuple(words[anchor - n : anchor]) == rule.pattern:
                return core, end
        return None
    if tuple(words[end : end + n]) == rule.pattern:
        return core, end
    # noun post-patterns ("system", "overview") end up inside the maximal
    # phrase; the noun-final part before them is the candidate
    cut = end - n
    if cut > core and tuple(words[cut:end]) == rule.pattern and sentence.tokens[cut - 1][1] == NOUN:
        return core, cut
    return None


def match_element(
    sentence: TaggedSentence, rules: Iterable[PatternRule], element: str
) -> Terminology | None:
    """Apply the element's rules in priority order; the first one to fire wins.

    A pre-rule fires when its tokens sit right before a noun phrase (or
    before the phrase's head after a leading determiner); a post-rule fires
    when its tokens follow the phrase, or close it after a noun-final prefix.
    The chosen phrase is returned without its determiner.
    """
    if element not in ELEMENTS:
        raise ValueError(f"unknown element {element!r}")
    words = [w.lower() for w in sentence.words]
    ordered = sorted(
        (r for r in rules if r.element == element), key=lambda r: r.priority
    )
    for rule in ordered:
        for start, end in sentence.np_spans:
            span = _fires(rule, sentence, words, start, _core_start(sentence, start, end), end)
            if span is not None:
                return Terminology(sentence.span_text(*span))
    return None


_COLON_TITLE = re.compile(r"^\s*[A-Z][A-Za-z0-9]*[A-Z0-9][A-Za-z0-9]*\s*[:\-–—]\s*\S")
_FUNCTION_WORDS = frozenset("a an the of for on in to and or with via by from at".split())


def _title_tokens(title: str) -> list[str]:
    return [t.lower() for t in tokenize(title) if t[0].isalnum()]


def _contains(tokens: Sequence[str], pattern: Sequence[str]) -> bool:
    n = len(pattern)
    for i in range(len(tokens) - n + 1):
        if all(
            t == p or t == p + "s" or t == p + "es"
            for t, p in zip(tokens[i : i + n], pattern)
        ):
            return True
    return False


def _style_rule_fires(rule: StyleRule, title: str, tokens: Sequence[str]) -> bool:
    if rule.pattern == "@colon":
        return bool(_COLON_TITLE.match(title))
    if rule.pattern == "@name":
        words = [t for t in tokenize(title)]
        return (
            1 <= len(words) <= 4
            and all(w[0].isupper() for w in words)
            and not any(w.lower() in _FUNCTION_WORDS for w in words)
        )
    if rule.pattern.startswith("@"):
        raise ValueError(f"unknown structural style rule {rule.pattern!r}")
    return _contains(tokens, _title_tokens(rule.pattern))


def classify_style(title: str, rules: Iterable[StyleRule]) -> ResearchStyle:
    """Style of the first rule, by priority, whose pattern matches the title."""
    tokens = _title_tokens(title)
    for rule in sorted(rules, key=lambda r: r.priority):
        if _style_rule_fires(rule, title, tokens):
            return rule.style
    return DEFAULT_STYLE


def default_domain_candidates(g: OntologyGraph) -> list[str]:
    """Children of the 'research topic' node, or of the root if there is none."""
    anchors = g.find_label("research topic")
    parent = min(anchors, key=g.depth) if anchors else g.root
    return sorted(g.children(parent))


def induce_domain(
    g: OntologyGraph, target: Terminology, domain_candidates: Sequence[str]
) -> str:
    """Candidate concept with the highest Wu-Palmer similarity to the target."""
    if not domain_candidates:
        raise ValueError("no domain candidates")
    link = link_terminology(g, target)
    if not link.confident:
        raise ExtractionError(
            f"target {target.surface!r} does not link to the ontology; "
            "manual domain assignment required"
        )
    return min(
        domain_candidates,
        key=lambda c: (
            -wu_palmer(g, link.node_id, c),
            g.depth(c),
            g.nodes[c].label.lower(),
        ),
    )


def _tagged_sentences(article: ArticleText) -> list[TaggedSentence]:
    out = []
    for body in select_sections(article.title, article.sections):
        out.extend(tag_and_chunk(s) for s in split_sentences(body))
    return out


def _linked(g: OntologyGraph, term: Terminology) -> Terminology:
    link = link_terminology(g, term)
    return Terminology(term.surface, link.node_id) if link.confident else term


def _fallback_keywords(g: OntologyGraph, sentences: Sequence[TaggedSentence]) -> list[Terminology]:
    counts: Counter[str] = Counter()
    first: dict[str, Terminology] = {}
    for sent in sentences:
        for start, end in sent.np_spans:
            surface = sent.span_text(_core_start(sent, start, end), end)
            key = normalize_term(surface)
            if key not in first:
                link = link_terminology(g, surface)
                if not link.confident:
                    continue
                first[key] = Terminology(key, link.node_id)
            counts[key] += 1
    order = {k: i for i, k in enumerate(first)}
    ranked = sorted(counts, key=lambda k: (-counts[k], order[k]))
    return [first[k] for k in ranked[:KEYWORD_LIMIT]]


def extract_topic_event(article: ArticleText, resources: Resources) -> TopicEvent:
    """Build a topic event for one article.

    Raises :class:`ExtractionError` when no implicated sentence yields a
    Target, when no target links to the ontology (the domain then needs a
    manual assignment), or when the result fails validation.
    """
    g = resources.ontology
    sentences = _tagged_sentences(article)
    implicated = [s for s in sentences if s.np_spans and find_triggers(s, resources.triggers)]

    targets = []
    methodology = None
    for sent in implicated:
        t = match_element(sent, resources.patterns, "Target")
        if t is not None:
            targets.append(t)
        if methodology is None:
            methodology = match_element(sent, resources.patterns, "Methodology")
    if not targets:
        raise ExtractionError(f"{article.did}: target not found")

    candidates = resources.candidates()
    domain_id = None
    for t in targets:
        if link_terminology(g, t).confident:
            domain_id = induce_domain(g, t, candidates)
            break
    if domain_id is None:
        raise ExtractionError(
            f"{article.did}: target {targets[0].surface!r} does not link to the ontology; "
            "manual domain assignment required"
        )

    if article.declared_keywords is not None:
        keywords = [Terminology(k) for k in article.declared_keywords]
    else:
        keywords = _fallback_keywords(g, sentences)

    te = TopicEvent(
        eid=f"TE-{article.did}",
        did=article.did,
        target=(_linked(g, targets[0]),),
        methodology=() if methodology is None else (_linked(g, methodology),),
        domain=Terminology(g.nodes[domain_id].label, domain_id),
        style=classify_style(article.title, resources.style_rules),
        keywords=tuple(keywords),
        date=article.date,
    )
    report = validate_topic_event(te)
    if report:
        missing = ", ".join(v.field for v in report)
        raise ExtractionError(f"{article.did}: invalid topic event ({missing})")
    return te
