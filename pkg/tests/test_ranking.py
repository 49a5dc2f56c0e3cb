"""tf-idf, cosine, candidate pooling, year re-ranking, and the toy corpus.

The toy fixture mirrors the two-title example that motivates the year
heuristic: a paper where "2014" is common and "study" rare, so plain cosine
prefers the wrong title and only the year re-rank recovers the right one.
"""
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from dataref.records import DatasetRecord
from dataref.ranking import (
    MentionRanking,
    RankedCandidate,
    build_ranking_corpus,
    build_tfidf,
    candidate_pool,
    cosine_similarity,
    rank_candidates,
    rank_mentions,
    read_rankings,
    record_years,
    write_rankings,
    year_adjust,
)


def rec(rid, title, year=None, rtype="dataset"):
    return DatasetRecord(id=rid, title=title, year=year, resource_type=rtype)


class TestTfidf:
    def test_idf_is_natural_log(self):
        model = build_tfidf(["a b", "a c", "a d", "b c"])
        assert model.idf("a") == pytest.approx(math.log(4 / 3))
        assert model.idf("b") == pytest.approx(math.log(4 / 2))
        assert model.idf("d") == pytest.approx(math.log(4 / 1))

    def test_unseen_term_counts_as_df_one(self):
        model = build_tfidf(["a b", "a c"])
        assert model.idf("zzz") == pytest.approx(math.log(2 / 1))

    def test_term_frequency_is_raw_count(self):
        model = build_tfidf(["a b", "c"])
        vec = model.vectorize("b b b")
        assert vec["b"] == pytest.approx(3 * math.log(2 / 1))

    def test_df_counts_documents_not_occurrences(self):
        model = build_tfidf(["a a a", "b"])
        assert model.doc_freq["a"] == 1

    def test_zero_weight_terms_dropped(self):
        # "a" occurs in every document, idf = ln(1) = 0
        model = build_tfidf(["a b", "a c"])
        assert "a" not in model.vectorize("a b")

    def test_empty_corpus_rejected(self):
        with pytest.raises(ValueError):
            build_tfidf([])

    def test_idf_monotone_in_document_frequency(self):
        model = build_tfidf(["a b", "a c", "b c", "a d"])
        # df: a=3, b=2, d=1 -> idf strictly decreasing in df
        assert model.idf("d") > model.idf("b") > model.idf("a")


class TestCosine:
    def test_example_pair(self):
        a = {"a": 1.0, "b": 1.0}
        b = {"a": 1.0}
        assert cosine_similarity(a, b) == pytest.approx(0.7071067811865475, abs=1e-9)

    def test_identical_vectors(self):
        v = {"x": 2.0, "y": 3.0}
        assert cosine_similarity(v, v) == pytest.approx(1.0)

    def test_disjoint_vectors(self):
        assert cosine_similarity({"a": 1.0}, {"b": 1.0}) == 0.0

    def test_empty_vector(self):
        assert cosine_similarity({}, {"a": 1.0}) == 0.0
        assert cosine_similarity({}, {}) == 0.0

    @given(
        st.dictionaries(st.sampled_from("abcdefgh"), st.floats(0.01, 50.0), max_size=6),
        st.dictionaries(st.sampled_from("abcdefgh"), st.floats(0.01, 50.0), max_size=6),
    )
    @settings(max_examples=300)
    def test_bounded_and_symmetric(self, a, b):
        s = cosine_similarity(a, b)
        assert 0.0 <= s <= 1.0
        assert s == pytest.approx(cosine_similarity(b, a))


class TestCandidatePool:
    def test_pool_contains_only_titles_with_the_feature(self):
        records = [
            rec("10.1/1", "German General Social Survey (ALLBUS) 2014"),
            rec("10.1/2", "ALLBUScompact 2014"),
            rec("10.1/3", "Unrelated Census"),
        ]
        pool = candidate_pool("ALLBUS", "abbreviation", records)
        assert [r.id for r in pool] == ["10.1/1"]

    def test_phrase_pool_is_case_insensitive(self):
        records = [rec("10.1/4", "Czech Exit Poll 1996"), rec("10.1/5", "Freedom Poll")]
        pool = candidate_pool("Exit Poll", "phrase", records)
        assert [r.id for r in pool] == ["10.1/4"]


class TestRankCandidates:
    def setup_method(self):
        self.records = [
            rec("10.1/a", "Allbus 2014", 2014),
            rec("10.1/b", "Study Allbus 2000", 2000),
        ]
        # paper text where "2014" is frequent and "study" rare
        segments = [
            "study allbus 2014",
            "waves of 2014 and 2000",
            "fieldwork 2014 and 2000",
            "sample 2014 and 2000",
            "response 2014",
            "archive 2014",
            "panel 2014",
        ]
        self.model = build_tfidf(build_ranking_corpus(self.records, segments))

    def test_plain_cosine_prefers_the_rare_term_title(self):
        ranked = rank_candidates("study allbus 2014", self.records, self.model)
        assert [c.record_id for c in ranked] == ["10.1/b", "10.1/a"]
        assert ranked[0].base_score == pytest.approx(0.915, abs=5e-3)
        assert ranked[1].base_score == pytest.approx(0.592, abs=5e-3)

    def test_year_adjust_flips_the_matching_year_to_rank_one(self):
        ranked = rank_candidates(
            "study allbus 2014", self.records, self.model, query_years=(2014,)
        )
        assert [c.record_id for c in ranked] == ["10.1/a", "10.1/b"]
        assert ranked[0].year_boosted and not ranked[1].year_boosted
        assert [c.final_rank for c in ranked] == [1, 2]
        # base scores are untouched by the re-rank
        assert ranked[0].base_score < ranked[1].base_score

    def test_no_years_in_context_is_a_noop(self):
        plain = rank_candidates("study allbus 2014", self.records, self.model)
        assert all(not c.year_boosted for c in plain)
        assert [c.final_rank for c in plain] == [1, 2]

    def test_threshold_cuts_candidates(self):
        ranked = rank_candidates("study allbus 2014", self.records, self.model, threshold=0.9)
        assert [c.record_id for c in ranked] == ["10.1/b"]

    def test_limit_truncates_after_year_adjust(self):
        ranked = rank_candidates(
            "study allbus 2014", self.records, self.model, query_years=(2014,), limit=1
        )
        assert [c.record_id for c in ranked] == ["10.1/a"]

    def test_tie_break_is_record_id_ascending(self):
        twins = [rec("10.1/z", "Allbus 2014"), rec("10.1/y", "Allbus 2014")]
        model = build_tfidf(build_ranking_corpus(twins, ["allbus text"]))
        ranked = rank_candidates("allbus 2014", twins, model)
        assert [c.record_id for c in ranked] == ["10.1/y", "10.1/z"]

    def test_scale_invariance_of_ordering(self):
        base = rank_candidates("study allbus 2014", self.records, self.model)
        scaled = rank_candidates(
            "study allbus 2014 study allbus 2014 study allbus 2014",
            self.records,
            self.model,
        )
        assert [c.record_id for c in base] == [c.record_id for c in scaled]


class TestYearAdjust:
    def test_two_block_stability(self):
        cands = [
            RankedCandidate("r1", "t1", 0.9),
            RankedCandidate("r2", "t2", 0.8, year_boosted=True),
            RankedCandidate("r3", "t3", 0.7),
            RankedCandidate("r4", "t4", 0.6, year_boosted=True),
        ]
        adjusted = year_adjust(cands)
        assert [c.record_id for c in adjusted] == ["r2", "r4", "r1", "r3"]
        assert [c.final_rank for c in adjusted] == [1, 2, 3, 4]

    def test_empty(self):
        assert year_adjust([]) == []


class TestRecordYears:
    def test_title_years_and_metadata_year(self):
        r = rec("10.1/x", "Panel 1984-2012", 2013)
        assert record_years(r) == frozenset({1984, 2012, 2013})

    def test_no_years(self):
        assert record_years(rec("10.1/y", "Some Census")) == frozenset()


def brute_force_rank(query, records, model, threshold, query_years):
    """Independent exhaustive scorer: dot products computed longhand."""

    def vec(text):
        out = {}
        for term in model_terms(text):
            out[term] = out.get(term, 0) + 1
        return {
            t: tf * math.log(model.n_docs / model.doc_freq.get(t, 1))
            for t, tf in out.items()
        }

    def model_terms(text):
        from dataref.tokens import rank_terms

        return rank_terms(text)

    def cos(a, b):
        shared = set(a) & set(b)
        dot = sum(a[t] * b[t] for t in shared)
        na = math.sqrt(sum(v * v for v in a.values()))
        nb = math.sqrt(sum(v * v for v in b.values()))
        if not na or not nb or not dot:
            return 0.0
        return min(1.0, max(0.0, dot / (na * nb)))

    qv = vec(query)
    years = frozenset(query_years)
    rows = []
    for r in records:
        s = cos(qv, vec(r.title))
        if s >= threshold:
            boosted = bool(years) and bool(years & record_years(r))
            rows.append((s, r.id, boosted))
    rows.sort(key=lambda t: (-t[0], t[1]))
    rows.sort(key=lambda t: not t[2])
    return [rid for _, rid, _ in rows]


VOCAB = ["survey", "study", "panel", "poll", "census", "wave", "german",
         "annual", "youth", "health", "2000", "2008", "2014", "allbus", "x-ray"]


def test_brute_force_equivalence_on_random_pools():
    rng = random.Random(20240817)
    for trial in range(100):
        n = rng.randint(1, 20)
        records = [
            rec(
                f"10.1/{trial}.{i}",
                " ".join(rng.choices(VOCAB, k=rng.randint(1, 6))),
                year=rng.choice([None, 2000, 2008, 2014]),
            )
            for i in range(n)
        ]
        segments = [" ".join(rng.choices(VOCAB, k=rng.randint(2, 8)))
                    for _ in range(rng.randint(0, 5))]
        model = build_tfidf(build_ranking_corpus(records, segments))
        query = " ".join(rng.choices(VOCAB, k=rng.randint(1, 7)))
        years = rng.choice([(), (2008,), (2000, 2014)])
        threshold = rng.choice([0.0, 0.1, 0.3])
        got = [
            c.record_id
            for c in rank_candidates(query, records, model, threshold=threshold, query_years=years)
        ]
        want = brute_force_rank(query, records, model, threshold, years)
        assert got == want, f"trial {trial}: {got} != {want}"


class TestRankMentions:
    def test_empty_pool_yields_empty_candidates(self, dictionary):
        from dataref.detect import detect_references
        from dataref.textpipe import PaperText

        paper = PaperText("px", "We use the EVS here.")
        mentions = detect_references(paper, dictionary)
        assert mentions
        # registry without any EVS title
        rankings = rank_mentions(mentions, [rec("10.1/q", "Quite Other Census")], ["seg"])
        assert all(r.candidates == () for r in rankings)

    def test_rankings_file_roundtrip_preserves_full_precision(self, tmp_path):
        r = MentionRanking(
            mention_key="p|0|3|abbreviation|EVS",
            paper_id="p",
            feature="EVS",
            kind="abbreviation",
            query="EVS 1999",
            candidates=(
                RankedCandidate("10.1/a", "EVS 1999", 0.12345678901234567, True, 1),
            ),
        )
        path = tmp_path / "ranked.jsonl"
        write_rankings([r], path)
        loaded = read_rankings(path)
        assert loaded[0].candidates[0].base_score == r.candidates[0].base_score
        assert loaded == [r]
