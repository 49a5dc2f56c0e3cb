"""Plain-text paper ingestion: sentence splitting, repeat-splitting, year tokens.

All offsets index into the exact input string, so downstream consumers can
slice the original text.  The splitter is rule-based on purpose: it needs no
training data and its output is stable across runs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

# Tokens ending in '.' that must not terminate a sentence.  Compared
# case-insensitively against the whitespace-delimited word ending at the
# candidate boundary, after stripping leading brackets/quotes.
ABBREVIATION_EXCEPTIONS = frozenset({
    "al.", "bzw.", "ca.", "cf.", "d.h.", "dr.", "e.g.", "etc.",
    "fig.", "i.e.", "nr.", "no.", "prof.", "s.o.", "s.u.", "tab.",
    "u.a.", "vgl.", "vol.", "vs.", "z.b.",
})

_TERMINALS = ".!?"


@dataclass(frozen=True)
class PaperText:
    """A paper as plain text; ``paper_id`` usually comes from the file stem."""

    paper_id: str
    text: str
    language_hint: str | None = None

    def __post_init__(self):
        if not self.text:
            raise ValueError(f"paper {self.paper_id!r}: text must be non-empty")

    @classmethod
    def from_file(cls, path: str | Path, language_hint: str | None = None) -> "PaperText":
        path = Path(path)
        return cls(path.stem, path.read_text(encoding="utf-8"), language_hint)


@dataclass(frozen=True)
class SentenceSpan:
    start: int
    end: int
    index: int


def _word_before(text: str, end: int) -> str:
    """Whitespace-delimited word whose last character is text[end]."""
    i = end
    while i >= 0 and not text[i].isspace():
        i -= 1
    return text[i + 1 : end + 1].lstrip("([{\"'“‘")


def split_sentences(text: str, exceptions: frozenset[str] = ABBREVIATION_EXCEPTIONS) -> list[SentenceSpan]:
    """Split ``text`` into sentence spans.

    A boundary is a run of '.', '!' or '?' followed by whitespace and an
    uppercase letter or digit, unless the word ending at the run is a known
    abbreviation.  Spans are trimmed of surrounding whitespace and together
    cover every non-whitespace character.
    """
    n = len(text)
    boundaries: list[int] = []
    i = 0
    while i < n:
        if text[i] not in _TERMINALS:
            i += 1
            continue
        j = i
        while j + 1 < n and text[j + 1] in _TERMINALS:
            j += 1
        k = j + 1
        if k < n and text[k].isspace():
            m = k
            while m < n and text[m].isspace():
                m += 1
            if m < n and (text[m].isupper() or text[m].isdigit()):
                word = _word_before(text, j)
                if word.lower() not in exceptions:
                    boundaries.append(j + 1)
        i = j + 1

    spans: list[SentenceSpan] = []
    prev = 0
    for cut in boundaries + [n]:
        seg = text[prev:cut]
        stripped = seg.strip()
        if stripped:
            start = prev + (len(seg) - len(seg.lstrip()))
            spans.append(SentenceSpan(start, start + len(stripped), len(spans)))
        prev = cut
    return spans


def repeat_split_spans(length: int, occurrences: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Partition [0, length) into one segment per occurrence.

    Cut points are the midpoints between consecutive occurrences, so segment i
    contains exactly occurrence i.  Occurrences must be sorted and disjoint.
    """
    if not occurrences:
        raise ValueError("no occurrences to split on")
    cuts = [0]
    for (_, end_a), (start_b, _) in zip(occurrences, occurrences[1:]):
        cuts.append((end_a + start_b) // 2)
    cuts.append(length)
    return [(cuts[i], cuts[i + 1]) for i in range(len(occurrences))]


def subdivide_on_repeat(
    sentence_text: str,
    feature_surface: str,
    occurrences: list[tuple[int, int]] | None = None,
) -> list[str]:
    """Split a sentence into one piece per occurrence of ``feature_surface``.

    With a single occurrence the whole sentence is returned unchanged.  The
    feature must occur at least once; a miss signals a caller bug.  Callers
    that matched under a non-literal rule (e.g. case-insensitive phrases) pass
    their own occurrence offsets.
    """
    if occurrences is None:
        occurrences = []
        pos = sentence_text.find(feature_surface)
        while pos != -1:
            occurrences.append((pos, pos + len(feature_surface)))
            pos = sentence_text.find(feature_surface, pos + len(feature_surface))
    if not occurrences:
        raise ValueError(f"feature {feature_surface!r} does not occur in sentence")
    if len(occurrences) == 1:
        return [sentence_text]
    spans = repeat_split_spans(len(sentence_text), occurrences)
    return [sentence_text[s:e] for s, e in spans]


_YEAR_RE = re.compile(r"(?<![^\W_])((?:19|20)\d{2})(?![^\W_])")


def extract_years(text: str) -> list[tuple[int, int]]:
    """All 4-digit year tokens in 1900-2099 as (year, offset) pairs.

    Range notations like "1980-2012" yield both endpoint years because '-' is
    a token boundary.
    """
    return [(int(m.group(1)), m.start(1)) for m in _YEAR_RE.finditer(text)]
