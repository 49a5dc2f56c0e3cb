"""Unicode-aware tokenization shared by dictionary induction, detection and ranking.

A token is a maximal run of letters/digits, optionally joined by single
punctuation characters from a keep-set ('.', '-', '/', '&', '*') that have word
characters on both sides.  This keeps surfaces like "U.S", "News/ESPN",
"AT&T" and "VIRGPT2.DAT" intact while stripping surrounding brackets,
commas and quotes.
"""
from __future__ import annotations

import re
from functools import lru_cache

# Punctuation allowed inside dictionary surfaces (underscore is not a word char here).
KEEP_DICT = ".-/&*"
# Ranking normalizes slightly tighter: no '*' inside terms.
KEEP_RANK = ".-/&"

_WORD = r"[^\W_]"  # letter or digit, Unicode-aware


@lru_cache(maxsize=8)
def _token_re(keep: str) -> re.Pattern:
    inner = "[" + re.escape(keep) + "]"
    return re.compile(rf"{_WORD}+(?:{inner}{_WORD}+)*")


def tokenize(text: str, keep: str = KEEP_DICT) -> list[str]:
    """Return the tokens of ``text`` in order."""
    return _token_re(keep).findall(text)


def tokenize_spans(text: str, keep: str = KEEP_DICT) -> list[tuple[str, int, int]]:
    """Return (token, start, end) triples with offsets into ``text``."""
    return [(m.group(0), m.start(), m.end()) for m in _token_re(keep).finditer(text)]


def rank_terms(text: str) -> list[str]:
    """Lowercased terms used for tf-idf weighting."""
    return [t.lower() for t in tokenize(text, keep=KEEP_RANK)]
