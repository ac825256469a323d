"""Lightweight text processing: sectioning, sentences, coarse POS tags, NP chunks.

The tagger is a closed-class lexicon plus suffix rules over a seven-tag set.
It only needs to find noun-phrase boundaries well enough to capture
terminology, so unknown content words default to NOUN.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "TAGS",
    "Section",
    "TaggedSentence",
    "normalize_heading",
    "select_sections",
    "split_sentences",
    "tokenize",
    "tag_tokens",
    "chunk_noun_phrases",
    "tag_and_chunk",
    "lemma_candidates",
]

NOUN, VERB, ADJ, DET, PREP, PUNCT, OTHER = "NOUN", "VERB", "ADJ", "DET", "PREP", "PUNCT", "OTHER"
TAGS = (NOUN, VERB, ADJ, DET, PREP, PUNCT, OTHER)

SELECTED_HEADINGS = ("abstract", "introduction", "conclusion", "conclusions")

ABBREVIATIONS = frozenset(
    """et al fig figs eq eqs e.g i.e etc vs cf sec secs no nos tab dr mr mrs ms prof
    approx resp al dept univ vol pp ch""".split()
)


@dataclass(frozen=True)
class Section:
    heading: str
    body: str


# -- sections ----------------------------------------------------------------

_NUMBERING = re.compile(r"^\s*(?:(?:\d+(?:\.\d+)*|[ivxlc]+)\s*[.)]?\s+)", re.IGNORECASE)


def normalize_heading(heading: str) -> str:
    """'1. INTRODUCTION' -> 'introduction'; 'IV) Conclusions' -> 'conclusions'."""
    text = _NUMBERING.sub("", heading.strip())
    text = re.sub(r"[^\w\s]", " ", text.lower())
    return " ".join(text.split())


def _is_selected(heading: str) -> bool:
    norm = normalize_heading(heading)
    if not norm:
        return False
    first = norm.split()[0]
    return first in SELECTED_HEADINGS


def select_sections(title: str, sections: Sequence[Section]) -> list[str]:
    """Title plus the abstract/introduction/conclusion bodies, in order.

    Falls back to the title plus the first section when no heading matches.
    """
    chosen = [s.body for s in sections if _is_selected(s.heading)]
    if not chosen and sections:
        chosen = [sections[0].body]
    return [title, *chosen]


# -- sentences ---------------------------------------------------------------

_BOUNDARY = re.compile(r"[.!?]+[\"')\]]*(?=\s+[\"'(\[]?[A-Z])")
_LAST_WORD = re.compile(r"([A-Za-z][A-Za-z.]*)\.*$")


def _is_abbreviation(prefix: str) -> bool:
    m = _LAST_WORD.search(prefix)
    if m is None:
        return False
    return m.group(1).lower().rstrip(".") in ABBREVIATIONS


def split_sentences(body: str) -> list[str]:
    """Split on . ! ? followed by whitespace and a capital, guarding abbreviations.

    Blank lines also end a sentence.  Joining the pieces with whitespace
    gives back the input modulo whitespace.
    """
    out: list[str] = []
    for block in re.split(r"\n\s*\n", body):
        start = 0
        for m in _BOUNDARY.finditer(block):
            if m.group(0).startswith(".") and _is_abbreviation(block[start : m.start() + 1]):
                continue
            piece = block[start : m.end()].strip()
            if piece:
                out.append(piece)
            start = m.end()
        tail = block[start:].strip()
        if tail:
            out.append(tail)
    return out


# -- tagging -----------------------------------------------------------------

_TOKEN = re.compile(r"[A-Za-z0-9]+(?:[-'][A-Za-z0-9]+)*|[^\sA-Za-z0-9]")

_DETS = frozenset(
    "a an the this that these those each every some any no its their our his her my your".split()
)
_PREPS = frozenset(
    """of for in on at by with from to into onto via through over under between among about
    against during without within across toward towards upon than as like per after before
    beyond""".split()
)
_OTHER = frozenset(
    """we i you they it he she us them me him who whom whose which what where when why how
    and or but nor so yet also then not very more most much well only just however thus
    therefore furthermore moreover here there both either neither whether if while although
    because since until unless can could will would may might must shall should""".split()
)
_VERBS = frozenset(
    """is are was were be been being am has have had do does did propose proposes present
    presents describe describes introduce introduces develop develops implement implements
    evaluate evaluates analyze analyzes analyse investigate investigates compare compares build
    builds explore explores examine examines apply applies employ employs extend extends improve
    improves demonstrate demonstrates show shows shown report reports tackle tackles solve solves
    aim aims exploit exploits leverage leverages adopt adopts construct constructs discuss
    discusses outline outlines formulate formulates perform performs achieve achieves obtain
    obtains provide provides outperform outperforms take takes make makes give gives find finds
    allow allows enable enables require requires yield yields become becomes remain remains
    seem seems get gets using based called""".split()
)
# words that are nouns unless a pronoun, modal or "to" sits right before them
_NOUN_VERBS = frozenset(
    """study studies survey surveys design designs focus focuses address addresses use uses
    model models review reviews need needs work works approach approaches result results
    process processes""".split()
)
_VERB_CUES = frozenset(
    "we i you they it he she to can could will would may might must shall should also".split()
)
_AL_NOUNS = frozenset(
    """retrieval proposal approval arrival removal survival trial journal tutorial signal
    interval material potential terminal manual rival renewal denial referral""".split()
)

_NOUN_SUFFIX = ("tion", "sion", "ment", "ity", "ness", "ance", "ence", "ism", "ogy", "ing")
_VERB_SUFFIX = ("ize", "ise", "izes", "ises", "ed")
_ADJ_SUFFIX = ("ous", "al", "ive", "ic", "able", "ible", "ful", "less", "ian", "ar")


def tokenize(sentence: str) -> list[str]:
    return _TOKEN.findall(sentence)


def _lexical_tag(word: str) -> str:
    w = word.lower()
    if not any(c.isalnum() for c in w):
        return PUNCT
    if w in _DETS:
        return DET
    if w in _PREPS:
        return PREP
    if w in _OTHER:
        return OTHER
    if w in _VERBS:
        return VERB
    if w.isdigit():
        return OTHER
    if w in _AL_NOUNS:
        return NOUN
    if word.isupper() and len(word) > 1:
        return NOUN  # acronyms
    if w.endswith("ly") and len(w) > 4:
        return OTHER
    if w.endswith(_NOUN_SUFFIX):
        return NOUN
    if w.endswith(_VERB_SUFFIX) and len(w) > 4:
        return VERB
    if w.endswith(_ADJ_SUFFIX) and len(w) > 4:
        return ADJ
    return NOUN


def tag_tokens(tokens: Sequence[str]) -> list[str]:
    tags = [_lexical_tag(t) for t in tokens]
    for i, tok in enumerate(tokens):
        low = tok.lower()
        prev = tokens[i - 1].lower() if i else ""
        if low in _NOUN_VERBS:
            tags[i] = VERB if prev in _VERB_CUES else NOUN
        elif tags[i] == VERB and low.endswith("ed") and low not in _VERBS:
            # participle used attributively: "a supervised approach"
            nxt = tags[i + 1] if i + 1 < len(tags) else None
            if i and tags[i - 1] in (DET, ADJ) and nxt in (ADJ, NOUN, VERB):
                tags[i] = ADJ
    return tags


@dataclass(frozen=True)
class TaggedSentence:
    tokens: tuple[tuple[str, str], ...]
    np_spans: tuple[tuple[int, int], ...]  # half-open [start, end)

    @property
    def words(self) -> list[str]:
        return [t for t, _ in self.tokens]

    @property
    def tags(self) -> list[str]:
        return [g for _, g in self.tokens]

    def span_text(self, start: int, end: int) -> str:
        return " ".join(t for t, _ in self.tokens[start:end])

    def noun_phrases(self) -> list[str]:
        return [self.span_text(s, e) for s, e in self.np_spans]


def chunk_noun_phrases(tags: Sequence[str]) -> list[tuple[int, int]]:
    """Leftmost-longest matches of ``DET? ADJ* NOUN+`` over a tag sequence."""
    spans = []
    i, n = 0, len(tags)
    while i < n:
        j = i
        if tags[j] == DET:
            j += 1
        while j < n and tags[j] == ADJ:
            j += 1
        k = j
        while k < n and tags[k] == NOUN:
            k += 1
        if k > j:
            spans.append((i, k))
            i = k
        else:
            i += 1
    return spans


def tag_and_chunk(sentence: str) -> TaggedSentence:
    tokens = tokenize(sentence)
    tags = tag_tokens(tokens)
    return TaggedSentence(tuple(zip(tokens, tags)), tuple(chunk_noun_phrases(tags)))


# -- lemmas ------------------------------------------------------------------


def lemma_candidates(word: str) -> set[str]:
    """Possible base forms after stripping -s, -es, -ed or -ing."""
    w = word.lower()
    out = {w}
    if len(w) > 3 and w.endswith("s") and not w.endswith("ss"):
        out.add(w[:-1])
        if w.endswith("es"):
            out.add(w[:-2])
        if w.endswith("ies"):
            out.add(w[:-3] + "y")
    if len(w) > 4 and w.endswith("ed"):
        out.update({w[:-2], w[:-1]})
        if w.endswith("ied"):
            out.add(w[:-3] + "y")
        if len(w) > 5 and w[-3] == w[-4]:
            out.add(w[:-3])  # planned -> plan
    if len(w) > 5 and w.endswith("ing"):
        stem = w[:-3]
        out.update({stem, stem + "e"})
        if stem[-1] == stem[-2]:
            out.add(stem[:-1])
    return out
