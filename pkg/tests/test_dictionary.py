"""Dictionary induction: cascade worked examples, phrase rules, blacklisting."""
import pytest
from hypothesis import given, strategies as st

from dataref.dictionary import (
    DictionaryEntry,
    apply_blacklist,
    build_dictionary,
    derive_phrases,
    extract_abbreviations,
    is_roman_numeral,
    load_dictionary,
    write_dictionary,
)
from dataref.wordlists import ConfigurationError, WordLists


def surfaces(entries):
    return {e.surface for e in entries}


class TestExtractAbbreviations:
    def test_dawn_from_parenthesised_acronym(self, wordlists):
        entries = extract_abbreviations(
            [("d1", "Drug Abuse Warning Network (DAWN), 2008")], wordlists
        )
        assert "DAWN" in surfaces(entries)

    def test_nypd_known_false_positive_is_still_extracted(self, wordlists):
        entries = extract_abbreviations(
            [
                (
                    "d2",
                    "New York Police Department (NYPD) Stop, Question, and Frisk Database, 2006",
                )
            ],
            wordlists,
        )
        assert "NYPD" in surfaces(entries)

    def test_all_lowercase_title_gives_nothing(self, wordlists):
        assert extract_abbreviations([("d3", "eine allgemeine umfrage")], wordlists) == []

    def test_evs_from_dash_delimited_head(self, wordlists):
        entries = extract_abbreviations(
            [("d4", "EVS - European Values Study 1999 - Italy")], wordlists
        )
        assert "EVS" in surfaces(entries)

    def test_piaac_parenthetical(self, wordlists):
        entries = extract_abbreviations(
            [
                (
                    "d5",
                    "Programme for the International Assessment of Adult Competencies (PIAAC), Germany 2012",
                )
            ],
            wordlists,
        )
        assert "PIAAC" in surfaces(entries)

    def test_colon_keeps_first_part_only(self, wordlists):
        entries = extract_abbreviations(
            [("d6", "ALLBUS 2014: GESA Variant Edition")], wordlists
        )
        assert "ALLBUS" in surfaces(entries)
        assert "GESA" not in surfaces(entries)

    def test_years_and_roman_numerals_are_dropped(self, wordlists):
        entries = extract_abbreviations([("d7", "Wave XIV 2014 of the ISSP")], wordlists)
        assert surfaces(entries) == {"ISSP"}

    def test_mixed_case_is_exempt_from_wordlist_pruning(self, wordlists):
        # "ALLBUScompact" has capitals beyond position 0, so even if a word
        # list contained it, pruning must not remove it
        entries = extract_abbreviations([("d8", "ALLBUScompact 2014")], wordlists)
        assert "ALLBUScompact" in surfaces(entries)

    def test_plain_capitalized_known_words_are_pruned(self, wordlists):
        entries = extract_abbreviations([("d9", "The Fishing Survey USA")], wordlists)
        assert "Fishing" not in surfaces(entries)
        assert "USA" in surfaces(entries)

    def test_all_caps_title_tokens_survive_via_lowercase_pruning(self, wordlists):
        # an all-capitals title is lowercased, pruned, and re-added in caps;
        # plain words disappear, the acronym-like remainder stays
        entries = extract_abbreviations([("d10", "GENERAL SURVEY ALLBUS")], wordlists)
        assert "ALLBUS" in surfaces(entries)
        assert "GENERAL" not in surfaces(entries)
        assert "SURVEY" not in surfaces(entries)

    def test_slash_compound_with_lowercase_part_dropped(self, wordlists):
        entries = extract_abbreviations([("d11", "The News/ESPN Poll Data")], wordlists)
        assert "News/ESPN" not in surfaces(entries)

    def test_source_ids_are_merged_across_titles(self, wordlists):
        entries = extract_abbreviations(
            [("a", "PIAAC Study 2012"), ("b", "PIAAC Follow-up")], wordlists
        )
        by_surface = {e.surface: e for e in entries}
        assert by_surface["PIAAC"].source_title_ids == frozenset({"a", "b"})

    def test_missing_wordlists_is_fatal(self):
        empty = WordLists()
        with pytest.raises(ConfigurationError):
            extract_abbreviations([("x", "Some Title")], empty)


class TestDerivePhrases:
    def test_seed_suffix_compound(self, wordlists):
        entries = derive_phrases([("p1", "Singularisierungsstudie 1993")], wordlists)
        assert "Singularisierungsstudie" in surfaces(entries)

    def test_survey_of_plus_token(self, wordlists):
        entries = derive_phrases([("p2", "Survey of Hunting, 1980")], wordlists)
        assert "Survey of Hunting" in surfaces(entries)

    def test_seed_pair_freedom_poll(self, wordlists):
        entries = derive_phrases([("p3", "Freedom Poll")], wordlists)
        assert "Freedom Poll" in surfaces(entries)

    def test_exit_poll_from_czech_title(self, wordlists):
        entries = derive_phrases([("p4", "Czech Exit Poll 1996")], wordlists)
        assert "Exit Poll" in surfaces(entries)

    def test_stop_word_companion_is_rejected(self, wordlists):
        entries = derive_phrases([("p5", "The Study"), ("p6", "Study the Future")], wordlists)
        assert all("The" not in s.split() and "the" not in s.split() for s in surfaces(entries))

    def test_digit_initial_companion_is_rejected(self, wordlists):
        entries = derive_phrases([("p7", "Panel 2014")], wordlists)
        assert "Panel 2014" not in surfaces(entries)

    def test_empty_seeds_fatal(self):
        wl = WordLists(english_words=frozenset({"study"}))
        with pytest.raises(ConfigurationError):
            derive_phrases([("x", "Some Study")], wl)


class TestRomanNumerals:
    def test_canonical_true(self):
        for token in ("XIV", "I", "MMMCMXCIX", "xiv", "lx"):
            assert is_roman_numeral(token), token

    def test_non_canonical_false(self):
        for token in ("IIX", "VIIII", "XXXX", "IC"):
            assert not is_roman_numeral(token), token

    def test_mixed_case_is_not_a_numeral(self):
        assert not is_roman_numeral("Mix")
        assert not is_roman_numeral("Xi")

    def test_non_alpha_false(self):
        assert not is_roman_numeral("X1")
        assert not is_roman_numeral("")


class TestBlacklist:
    def test_flagging_preserves_everything_else(self):
        entries = [
            DictionaryEntry("DAWN", "abbreviation", frozenset({"a"})),
            DictionaryEntry("NYPD", "abbreviation", frozenset({"b"})),
        ]
        flagged = apply_blacklist(entries, {"NYPD"})
        assert [e.blacklisted for e in flagged] == [False, True]
        assert [e.surface for e in flagged] == ["DAWN", "NYPD"]
        assert [e.kind for e in flagged] == ["abbreviation", "abbreviation"]

    def test_empty_blacklist_is_identity(self):
        entries = [DictionaryEntry("EVS", "abbreviation", frozenset({"a"}))]
        assert apply_blacklist(entries, set()) == entries


class TestDictionaryProperties:
    def test_determinism(self, wordlists, datasets):
        titles = [(r.id, r.title) for r in datasets]
        assert build_dictionary(titles, wordlists) == build_dictionary(titles, wordlists)

    def test_no_surface_survives_wordlist_unless_mixed_case(self, wordlists, dictionary):
        for e in dictionary:
            if e.kind != "abbreviation":
                continue
            if any(c.isupper() for c in e.surface[1:]):
                continue
            assert not wordlists.is_known_word(e.surface), e.surface

    def test_punctuation_whitelist_holds(self, dictionary):
        allowed = set(".-/&*")
        for e in dictionary:
            for c in e.surface:
                assert c.isalnum() or c.isspace() or c in allowed, e.surface

    def test_source_ids_nonempty_and_known(self, dictionary, datasets):
        known = {r.id for r in datasets}
        for e in dictionary:
            assert e.source_title_ids
            assert e.source_title_ids <= known

    def test_file_roundtrip_and_stable_order(self, tmp_path, dictionary):
        path_a, path_b = tmp_path / "a.tsv", tmp_path / "b.tsv"
        write_dictionary(dictionary, path_a)
        loaded = load_dictionary(path_a)
        write_dictionary(loaded, path_b)
        assert path_a.read_bytes() == path_b.read_bytes()
        assert sorted(loaded, key=lambda e: (e.kind, e.surface)) == loaded

    @given(st.sets(st.sampled_from(["DAWN", "NYPD", "EVS", "PIAAC", "nope"])))
    def test_blacklist_monotonicity(self, banned):
        entries = [
            DictionaryEntry(s, "abbreviation", frozenset({"t"}))
            for s in ("DAWN", "NYPD", "EVS", "PIAAC")
        ]
        out = apply_blacklist(entries, banned)
        assert [(e.surface, e.kind, e.source_title_ids) for e in out] == [
            (e.surface, e.kind, e.source_title_ids) for e in entries
        ]
        for before, after in zip(entries, out):
            assert after.blacklisted == (before.surface in banned)
