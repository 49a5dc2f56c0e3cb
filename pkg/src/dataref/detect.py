"""Find dictionary features in papers and turn occurrences into mentions.

Abbreviations match case-sensitively (their signal is the capitalization),
phrases case-insensitively; both only on token boundaries, so "DAWN" never
fires inside "DAWNING".  A sentence containing the same feature twice is
subdivided so every mention gets its own query segment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .dictionary import ABBREVIATION, PHRASE, DictionaryEntry
from .textpipe import PaperText, extract_years, repeat_split_spans, split_sentences
from .tokens import tokenize

_BOUNDARY_L = r"(?<![^\W_])"
_BOUNDARY_R = r"(?![^\W_])"


@lru_cache(maxsize=4096)
def compile_feature_pattern(surface: str, kind: str) -> re.Pattern:
    if kind == ABBREVIATION:
        return re.compile(_BOUNDARY_L + re.escape(surface) + _BOUNDARY_R)
    if kind == PHRASE:
        toks = tokenize(surface)
        body = r"\s+".join(re.escape(t) for t in toks) if toks else re.escape(surface)
        return re.compile(_BOUNDARY_L + body + _BOUNDARY_R, re.IGNORECASE)
    raise ValueError(f"unknown feature kind {kind!r}")


def find_feature_occurrences(text: str, surface: str, kind: str) -> list[tuple[int, int]]:
    """Non-overlapping (start, end) occurrences of a feature in ``text``."""
    return [m.span() for m in compile_feature_pattern(surface, kind).finditer(text)]


def feature_occurs(text: str, surface: str, kind: str) -> bool:
    return compile_feature_pattern(surface, kind).search(text) is not None


@dataclass(frozen=True)
class ReferenceMention:
    """One occurrence of a dictionary feature in a paper."""

    paper_id: str
    surface: str
    kind: str
    sentence_index: int
    segment_text: str
    start: int  # offsets of the feature occurrence in the full paper text
    end: int
    query: str
    years_in_context: tuple[int, ...]

    @property
    def key(self) -> str:
        return mention_key(self.paper_id, self.start, self.end, self.kind, self.surface)


def mention_key(paper_id: str, start: int, end: int, kind: str, surface: str) -> str:
    # '|' cannot appear in surfaces (punctuation whitelist) nor in paper ids we derive
    return f"{paper_id}|{start}|{end}|{kind}|{surface}"


def detect_references(
    paper: PaperText, dictionary: Sequence[DictionaryEntry]
) -> list[ReferenceMention]:
    """All mentions of non-blacklisted dictionary entries in ``paper``.

    One mention per feature occurrence; repeated features within a sentence
    are assigned their repeat-split segment, otherwise the whole sentence.
    The query is the segment text.
    """
    active = [e for e in dictionary if not e.blacklisted]
    mentions: list[ReferenceMention] = []
    for span in split_sentences(paper.text):
        sentence = paper.text[span.start : span.end]
        for entry in active:
            occs = find_feature_occurrences(sentence, entry.surface, entry.kind)
            if not occs:
                continue
            seg_spans = repeat_split_spans(len(sentence), occs)
            for (ostart, oend), (sstart, send) in zip(occs, seg_spans):
                segment = sentence[sstart:send]
                mentions.append(
                    ReferenceMention(
                        paper_id=paper.paper_id,
                        surface=entry.surface,
                        kind=entry.kind,
                        sentence_index=span.index,
                        segment_text=segment,
                        start=span.start + ostart,
                        end=span.start + oend,
                        query=segment,
                        years_in_context=tuple(y for y, _ in extract_years(segment)),
                    )
                )
    mentions.sort(key=lambda m: (m.start, m.end, m.kind, m.surface))
    return mentions


def group_by_feature(
    mentions: Iterable[ReferenceMention],
) -> dict[str, list[ReferenceMention]]:
    """Partition mentions by feature surface, preserving document order."""
    groups: dict[str, list[ReferenceMention]] = {}
    for m in mentions:
        groups.setdefault(m.surface, []).append(m)
    return groups


# --- mentions file ----------------------------------------------------------
# TSV with a header; query text is backslash-escaped like the record store.

_MENTION_FIELDS = ("paper_id", "feature", "kind", "start", "end", "sentence_index", "query")


def _esc(value: str) -> str:
    return value.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")


def _unesc(value: str) -> str:
    out, i = [], 0
    while i < len(value):
        c = value[i]
        if c == "\\" and i + 1 < len(value):
            out.append({"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(value[i + 1], value[i + 1]))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def write_mentions(mentions: Sequence[ReferenceMention], path: str | Path) -> int:
    ordered = sorted(mentions, key=lambda m: (m.paper_id, m.start, m.end, m.kind, m.surface))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\t".join(_MENTION_FIELDS) + "\n")
        for m in ordered:
            fh.write(
                "\t".join(
                    (
                        m.paper_id,
                        _esc(m.surface),
                        m.kind,
                        str(m.start),
                        str(m.end),
                        str(m.sentence_index),
                        _esc(m.query),
                    )
                )
                + "\n"
            )
    return len(ordered)


def read_mentions(path: str | Path) -> list[ReferenceMention]:
    mentions = []
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        if tuple(header) != _MENTION_FIELDS:
            raise ValueError(f"{path}: unexpected mentions header {header}")
        for raw in fh:
            line = raw.rstrip("\n")
            if not line:
                continue
            paper_id, surface, kind, start, end, sent_idx, query = line.split("\t")
            query_text = _unesc(query)
            mentions.append(
                ReferenceMention(
                    paper_id=paper_id,
                    surface=_unesc(surface),
                    kind=kind,
                    sentence_index=int(sent_idx),
                    segment_text=query_text,
                    start=int(start),
                    end=int(end),
                    query=query_text,
                    years_in_context=tuple(y for y, _ in extract_years(query_text)),
                )
            )
    return mentions
