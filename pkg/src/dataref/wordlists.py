"""Word lists used to prune the induced dictionary.

English/German vocabularies, country names, stop words and the manually
curated seed-term list ship as plain text files (one entry per line, '#'
comments allowed) so a domain expert can edit them without touching code.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path


class ConfigurationError(RuntimeError):
    """A required word list or seed list is missing or empty."""


@dataclass
class WordLists:
    english_words: frozenset[str] = frozenset()
    german_words: frozenset[str] = frozenset()
    country_names: frozenset[str] = frozenset()
    stop_words: frozenset[str] = frozenset()
    seed_terms: frozenset[str] = frozenset()
    blacklist: frozenset[str] = frozenset()
    # casefolded view of country names, for pruning checks
    _countries_folded: frozenset[str] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_countries_folded", frozenset(c.casefold() for c in self.country_names)
        )

    def is_known_word(self, token: str) -> bool:
        """True if the token is an English/German word or a country name."""
        folded = token.casefold()
        return (
            folded in self.english_words
            or folded in self.german_words
            or folded in self._countries_folded
        )


def read_word_file(path: str | Path, lowercase: bool = True) -> frozenset[str]:
    entries = set()
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            entry = line.strip()
            if not entry or entry.startswith("#"):
                continue
            entries.add(entry.lower() if lowercase else entry)
    return frozenset(entries)


_FILES = {
    "english_words": ("english_words.txt", True),
    "german_words": ("german_words.txt", True),
    "country_names": ("countries.txt", False),
    "seed_terms": ("seed_terms.txt", False),
}
_STOP_FILES = ("stopwords_en.txt", "stopwords_de.txt")


def load_wordlists(directory: str | Path, blacklist_path: str | Path | None = None,
                   seeds_path: str | Path | None = None) -> WordLists:
    """Load word lists from a directory of the bundled file layout.

    Missing required files are a fatal configuration error; the blacklist is
    optional and defaults to empty.
    """
    directory = Path(directory)
    values: dict[str, frozenset[str]] = {}
    for fieldname, (filename, lowercase) in _FILES.items():
        path = directory / filename
        if fieldname == "seed_terms" and seeds_path is not None:
            path = Path(seeds_path)
        if not path.is_file():
            raise ConfigurationError(f"missing word list file: {path}")
        values[fieldname] = read_word_file(path, lowercase=lowercase)
    stops: set[str] = set()
    for filename in _STOP_FILES:
        path = directory / filename
        if not path.is_file():
            raise ConfigurationError(f"missing stop-word file: {path}")
        stops |= read_word_file(path, lowercase=True)
    blacklist: frozenset[str] = frozenset()
    if blacklist_path is not None and Path(blacklist_path).is_file():
        blacklist = read_word_file(blacklist_path, lowercase=False)
    return WordLists(stop_words=frozenset(stops), blacklist=blacklist, **values)


def bundled_dir() -> Path:
    """Directory holding the word lists shipped with the package."""
    return Path(resources.files("dataref").joinpath("data"))  # type: ignore[arg-type]


def default_wordlists(blacklist_path: str | Path | None = None) -> WordLists:
    return load_wordlists(bundled_dir(), blacklist_path=blacklist_path)


def read_blacklist(path: str | Path) -> list[str]:
    """Blacklisted surfaces in file order (exact case); [] for a missing file."""
    path = Path(path)
    if not path.is_file():
        return []
    surfaces = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            surface = line.strip()
            if surface and not surface.startswith("#") and surface not in surfaces:
                surfaces.append(surface)
    return surfaces


def add_blacklist_surface(path: str | Path, surface: str) -> bool:
    """Append a surface to the blacklist file; False if it was already there."""
    surface = surface.strip()
    if not surface:
        raise ValueError("empty blacklist surface")
    current = read_blacklist(path)
    if surface in current:
        return False
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(surface + "\n")
    return True
