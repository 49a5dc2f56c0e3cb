"""Induce the feature dictionary from registry titles.

Abbreviations come from a cascade of capitalization heuristics over dataset
titles; special phrases are derived around a curated seed-term list.  A
blacklist maintained by a human expert flags known false positives (they stay
in the dictionary for auditability but are never used by detection).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Sequence

from .tokens import tokenize
from .wordlists import ConfigurationError, WordLists

ABBREVIATION = "abbreviation"
PHRASE = "phrase"

# The only punctuation allowed inside an abbreviation surface.
SURFACE_PUNCT = frozenset(".-/&*")


@dataclass(frozen=True)
class DictionaryEntry:
    surface: str
    kind: str  # ABBREVIATION or PHRASE
    source_title_ids: frozenset[str]
    blacklisted: bool = False


# 1..3999 in canonical form; applied to the uppercased token.
_ROMAN_RE = re.compile(r"M{0,3}(CM|CD|D?C{0,3})(XC|XL|L?X{0,3})(IX|IV|V?I{0,3})")


def is_roman_numeral(token: str) -> bool:
    """Strict-form Roman numeral check, I through MMMCMXCIX.

    Case-insensitive in the sense that "xiv" counts, but the token must be
    case-uniform: mixed-case words like "Mix" are not numerals.
    """
    if not token or not token.isalpha():
        return False
    if not (token.isupper() or token.islower()):
        return False
    return _ROMAN_RE.fullmatch(token.upper()) is not None


def _has_upper_after_first(token: str) -> bool:
    return any(c.isupper() for c in token[1:])


def _is_lowercase_except_first(token: str) -> bool:
    """No uppercase beyond the first character (single letters count too)."""
    return not _has_upper_after_first(token)


def _digits_and_punct_only(token: str) -> bool:
    return bool(token) and not any(c.isalpha() for c in token)


def _starts_with_digit(token: str) -> bool:
    return bool(token) and token[0].isdigit()


def _passes_token_shape(token: str) -> bool:
    """Rule-3 digit/numeral shape filters (capitalization is checked separately)."""
    if _digits_and_punct_only(token):
        return False
    if _starts_with_digit(token):
        return False
    if is_roman_numeral(token):
        return False
    return True


def _title_is_all_caps(title: str) -> bool:
    cased = [c for c in title if c.isalpha()]
    return len(cased) >= 2 and all(c.isupper() for c in cased)


def _punct_ok(surface: str) -> bool:
    for c in surface:
        if c.isalnum() or c.isspace():
            continue
        if c not in SURFACE_PUNCT:
            return False
    return True


def _bad_slash_dash(surface: str) -> bool:
    """Drop compounds like "News/ESPN" where some part looks like a plain word."""
    if "/" not in surface and "-" not in surface:
        return False
    for part in re.split(r"[/-]", surface):
        if any(c.isalpha() for c in part) and _is_lowercase_except_first(part):
            return True
    return False


def _single_tokens_before_delimiters(head: str) -> list[str]:
    """Single-token parts that precede a '-' or '(' in the title head.

    These bypass the capitalization test (otherwise the rule would add
    nothing new) but still respect the digit/numeral shape filters.
    """
    parts = re.split(r"[-(]", head)
    found = []
    for part in parts[:-1]:
        toks = tokenize(part)
        if len(toks) == 1 and _passes_token_shape(toks[0]):
            found.append(toks[0])
    return found


def extract_abbreviations(
    titles: Iterable[tuple[str, str]], wordlists: WordLists
) -> list[DictionaryEntry]:
    """Apply the abbreviation heuristics to (id, title) pairs.

    Pipeline: all-capital titles are set aside; the rest are cut at the first
    colon and tokenized; tokens survive if they are not plain capitalized
    words, not digit/punctuation runs, not Roman numerals and not
    digit-initial; single tokens before '-'/'(' delimiters are added; items
    with foreign punctuation or lowercase-looking slash/dash parts are
    dropped; known English/German words and country names are pruned unless
    the item carries capitals beyond its first letter.  All-capital titles
    are lowercased, pruned by the word lists, and their surviving tokens are
    re-added in original capitalization.
    """
    if not (wordlists.english_words or wordlists.german_words):
        raise ConfigurationError("word lists are required for abbreviation extraction")

    sources: dict[str, set[str]] = {}

    def add(surface: str, title_id: str) -> None:
        sources.setdefault(surface, set()).add(title_id)

    all_caps_titles: list[tuple[str, str]] = []
    for title_id, title in titles:
        if _title_is_all_caps(title):
            all_caps_titles.append((title_id, title))
            continue
        head = title.split(":", 1)[0]
        candidates = [
            t for t in tokenize(head)
            if not _is_lowercase_except_first(t) and _passes_token_shape(t)
        ]
        candidates += _single_tokens_before_delimiters(head)
        for token in candidates:
            if not _punct_ok(token) or _bad_slash_dash(token):
                continue
            if not _has_upper_after_first(token) and wordlists.is_known_word(token):
                continue
            add(token, title_id)

    for title_id, title in all_caps_titles:
        for token in tokenize(title):
            if len(token) < 2 or not _passes_token_shape(token):
                continue
            if wordlists.is_known_word(token):
                continue
            if not _punct_ok(token):
                continue
            add(token, title_id)

    return [
        DictionaryEntry(surface, ABBREVIATION, frozenset(ids))
        for surface, ids in sorted(sources.items())
    ]


def derive_phrases(
    titles: Iterable[tuple[str, str]], wordlists: WordLists
) -> list[DictionaryEntry]:
    """Derive special phrases from titles around the seed-term list.

    Three categories: seed-suffix compounds ("Singularisierungsstudie"),
    "Survey of"/"Study of" plus a following non-stop-word token, and adjacent
    token pairs where one token is a seed term and the companion is neither a
    stop word nor number-like.
    """
    if not wordlists.seed_terms:
        raise ConfigurationError("seed terms are required for phrase derivation")
    seeds_folded = {s.casefold() for s in wordlists.seed_terms}
    stops = wordlists.stop_words

    def companion_ok(token: str) -> bool:
        return (
            token.casefold() not in stops
            and not _starts_with_digit(token)
            and any(c.isalpha() for c in token)
        )

    sources: dict[str, set[str]] = {}

    def add(surface: str, title_id: str) -> None:
        sources.setdefault(surface, set()).add(title_id)

    for title_id, title in titles:
        toks = tokenize(title)
        folded = [t.casefold() for t in toks]

        for tok, low in zip(toks, folded):
            for seed in seeds_folded:
                if low.endswith(seed) and len(low) > len(seed):
                    add(tok, title_id)
                    break

        for i in range(len(toks) - 2):
            if folded[i] in ("survey", "study") and folded[i + 1] == "of":
                if companion_ok(toks[i + 2]):
                    add(f"{toks[i]} of {toks[i + 2]}", title_id)

        for i in range(len(toks) - 1):
            a, b = toks[i], toks[i + 1]
            if (folded[i] in seeds_folded and companion_ok(b)) or (
                folded[i + 1] in seeds_folded and companion_ok(a)
            ):
                add(f"{a} {b}", title_id)

    return [
        DictionaryEntry(surface, PHRASE, frozenset(ids))
        for surface, ids in sorted(sources.items())
    ]


def apply_blacklist(
    entries: Sequence[DictionaryEntry], blacklist: Iterable[str]
) -> list[DictionaryEntry]:
    """Flag blacklisted surfaces; nothing is deleted, only the flag changes."""
    banned = set(blacklist)
    return [
        replace(e, blacklisted=True) if e.surface in banned else e
        for e in entries
    ]


def build_dictionary(
    titles: Sequence[tuple[str, str]], wordlists: WordLists
) -> list[DictionaryEntry]:
    """Abbreviations plus phrases, with the word-list blacklist applied."""
    entries = extract_abbreviations(titles, wordlists) + derive_phrases(titles, wordlists)
    return apply_blacklist(entries, wordlists.blacklist)


# --- dictionary file format -------------------------------------------------
# One entry per line: surface <TAB> kind <TAB> 0|1 <TAB> comma-separated ids.
# Sorted by (kind, surface) so rebuilds are byte-identical.

def write_dictionary(entries: Iterable[DictionaryEntry], path: str | Path) -> int:
    ordered = sorted(entries, key=lambda e: (e.kind, e.surface))
    with open(path, "w", encoding="utf-8") as fh:
        for e in ordered:
            ids = ",".join(sorted(e.source_title_ids))
            fh.write(f"{e.surface}\t{e.kind}\t{int(e.blacklisted)}\t{ids}\n")
    return len(ordered)


def load_dictionary(path: str | Path) -> list[DictionaryEntry]:
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise ValueError(f"{path}:{lineno}: expected 4 tab-separated fields")
            surface, kind, flag, ids = parts
            if kind not in (ABBREVIATION, PHRASE):
                raise ValueError(f"{path}:{lineno}: unknown kind {kind!r}")
            id_set = frozenset(i for i in ids.split(",") if i)
            entries.append(DictionaryEntry(surface, kind, id_set, flag == "1"))
    return entries
