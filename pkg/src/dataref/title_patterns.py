"""Statistics over registry titles: which carry detectable features?

Used to sanity-check a harvested store before building a dictionary from
it.  A title counts for a group as soon as one feature of that kind occurs
in it; the filename group uses a deliberately narrow NAME.EXT token rule.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .detect import feature_occurs
from .dictionary import ABBREVIATION, PHRASE, DictionaryEntry
from .records import DatasetRecord
from .tokens import tokenize

FILENAME_EXTENSIONS = frozenset({"DAT", "TXT", "CSV", "SAV", "DTA", "POR"})

_FILENAME_RE = re.compile(r"(.{2,})\.([A-Za-z]{3})$", re.DOTALL)


def is_filename_token(token: str) -> bool:
    """True for tokens shaped NAME.EXT with a known data-file extension."""
    m = _FILENAME_RE.fullmatch(token)
    return bool(m) and m.group(2).upper() in FILENAME_EXTENSIONS


@dataclass(frozen=True)
class PatternStats:
    total_titles: int
    with_abbreviation: int
    with_phrase: int
    with_both: int
    with_filename: int

    def __post_init__(self) -> None:
        if self.with_both > min(self.with_abbreviation, self.with_phrase):
            raise ValueError("with_both exceeds one of its component counts")
        for name in ("with_abbreviation", "with_phrase", "with_both", "with_filename"):
            if getattr(self, name) > self.total_titles:
                raise ValueError(f"{name} exceeds total_titles")

    def pct(self, count: int) -> float:
        return 100.0 * count / self.total_titles if self.total_titles else 0.0

    def as_dict(self) -> dict:
        return {
            "total_titles": self.total_titles,
            "with_abbreviation": self.with_abbreviation,
            "with_phrase": self.with_phrase,
            "with_both": self.with_both,
            "with_filename": self.with_filename,
            "pct_abbreviation": self.pct(self.with_abbreviation),
            "pct_phrase": self.pct(self.with_phrase),
            "pct_both": self.pct(self.with_both),
            "pct_filename": self.pct(self.with_filename),
        }


def analyze_title_patterns(
    records: Sequence[DatasetRecord], dictionary: Iterable[DictionaryEntry]
) -> PatternStats:
    abbrevs = [e.surface for e in dictionary if e.kind == ABBREVIATION and not e.blacklisted]
    phrases = [e.surface for e in dictionary if e.kind == PHRASE and not e.blacklisted]
    n_abbrev = n_phrase = n_both = n_file = 0
    for rec in records:
        has_a = any(feature_occurs(rec.title, s, ABBREVIATION) for s in abbrevs)
        has_p = any(feature_occurs(rec.title, s, PHRASE) for s in phrases)
        has_f = any(is_filename_token(t) for t in tokenize(rec.title))
        n_abbrev += has_a
        n_phrase += has_p
        n_both += has_a and has_p
        n_file += has_f
    return PatternStats(
        total_titles=len(records),
        with_abbreviation=n_abbrev,
        with_phrase=n_phrase,
        with_both=n_both,
        with_filename=n_file,
    )


def render_stats(stats: PatternStats) -> str:
    d = stats.as_dict()
    lines = [f"titles analyzed: {d['total_titles']}"]
    for label, count_key, pct_key in (
        ("with abbreviation", "with_abbreviation", "pct_abbreviation"),
        ("with phrase", "with_phrase", "pct_phrase"),
        ("with both", "with_both", "pct_both"),
        ("with filename", "with_filename", "pct_filename"),
    ):
        lines.append(f"  {label:<18} {d[count_key]:>8}  ({d[pct_key]:.2f}%)")
    return "\n".join(lines)
