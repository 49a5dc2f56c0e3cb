"""Rank registry records against mention queries with tf-idf and cosine.

The ranking universe for a mention is its feature's candidate pool: the
records whose titles contain the feature.  The tf-idf model for a (paper,
feature) pair is built over the pool titles plus the paper's own segments;
raw term frequencies, idf = ln(N/n).  A query term the model never saw gets
idf = ln(N/1), i.e. it is treated as maximally rare instead of dropped.
Candidates whose title shares a year with the query context are lifted
above the rest in a stable two-block re-sort.
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .detect import ReferenceMention, feature_occurs
from .records import DatasetRecord
from .textpipe import extract_years
from .tokens import rank_terms

DEFAULT_THRESHOLD = 0.1


@dataclass(frozen=True)
class TfidfModel:
    n_docs: int
    doc_freq: Mapping[str, int]

    def idf(self, term: str) -> float:
        return math.log(self.n_docs / self.doc_freq.get(term, 1))

    def vectorize(self, text: str) -> dict[str, float]:
        """tf-idf vector of ``text``; zero-weight terms are dropped."""
        weights: dict[str, float] = {}
        for term, tf in Counter(rank_terms(text)).items():
            w = tf * self.idf(term)
            if w != 0.0:
                weights[term] = w
        return weights


def build_tfidf(documents: Iterable[str]) -> TfidfModel:
    df: Counter[str] = Counter()
    n = 0
    for doc in documents:
        n += 1
        df.update(set(rank_terms(doc)))
    if n == 0:
        raise ValueError("cannot build a tf-idf model from an empty corpus")
    return TfidfModel(n_docs=n, doc_freq=dict(df))


def cosine_similarity(a: Mapping[str, float], b: Mapping[str, float]) -> float:
    if not a or not b:
        return 0.0
    if len(b) < len(a):
        a, b = b, a
    dot = sum(w * b[t] for t, w in a.items() if t in b)
    if dot == 0.0:
        return 0.0
    norm_a = math.sqrt(sum(w * w for w in a.values()))
    norm_b = math.sqrt(sum(w * w for w in b.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    return min(1.0, max(0.0, dot / (norm_a * norm_b)))


@dataclass(frozen=True)
class RankedCandidate:
    record_id: str
    title: str
    base_score: float
    year_boosted: bool = False
    final_rank: int = 0


def record_years(record: DatasetRecord) -> frozenset[int]:
    """Years advertised by a record: any in its title plus the metadata year."""
    years = {y for y, _ in extract_years(record.title)}
    if record.year is not None:
        years.add(record.year)
    return frozenset(years)


def year_adjust(candidates: Sequence[RankedCandidate]) -> list[RankedCandidate]:
    """Move year-boosted candidates above the rest, order otherwise unchanged."""
    reordered = sorted(candidates, key=lambda c: not c.year_boosted)
    return [replace(c, final_rank=i) for i, c in enumerate(reordered, start=1)]


def rank_candidates(
    query: str,
    records: Sequence[DatasetRecord],
    model: TfidfModel,
    threshold: float = DEFAULT_THRESHOLD,
    query_years: Iterable[int] = (),
    limit: int | None = None,
) -> list[RankedCandidate]:
    """Candidates for ``query`` above ``threshold``, best first.

    Base order is cosine score descending with record id as tie-break; when
    the query context carries years, candidates sharing one are lifted to the
    top as a block.  ``limit`` truncates after the year adjustment.
    """
    qvec = model.vectorize(query)
    years = frozenset(query_years)
    scored: list[RankedCandidate] = []
    for rec in records:
        score = cosine_similarity(qvec, model.vectorize(rec.title))
        if score < threshold:
            continue
        boosted = bool(years) and not years.isdisjoint(record_years(rec))
        scored.append(RankedCandidate(record_id=rec.id, title=rec.title, base_score=score, year_boosted=boosted))
    scored.sort(key=lambda c: (-c.base_score, c.record_id))
    ranked = year_adjust(scored)
    if limit is not None:
        ranked = ranked[:limit]
    return ranked


def build_ranking_corpus(
    records: Sequence[DatasetRecord], paper_segments: Iterable[str] = ()
) -> list[str]:
    """Document pool for idf statistics: candidate titles plus paper segments."""
    corpus = [rec.title for rec in records]
    corpus.extend(paper_segments)
    return corpus


def candidate_pool(
    surface: str, kind: str, records: Iterable[DatasetRecord]
) -> list[DatasetRecord]:
    """Records whose title contains the feature, under detection semantics.

    Abbreviations match case-sensitively, phrases as case-insensitive token
    sequences, so e.g. the pool for ``ALLBUS`` excludes an ``ALLBUScompact``
    title while the pool for ``Exit Poll`` picks up ``Exit Poll Hungary``.
    """
    return [rec for rec in records if feature_occurs(rec.title, surface, kind)]


# --- rankings file ----------------------------------------------------------
# One JSON object per mention, candidates in final rank order.


@dataclass(frozen=True)
class MentionRanking:
    mention_key: str
    paper_id: str
    feature: str
    kind: str
    query: str
    candidates: tuple[RankedCandidate, ...]


def rank_mentions(
    mentions: Sequence[ReferenceMention],
    records: Sequence[DatasetRecord],
    paper_segments: Sequence[str] = (),
    threshold: float = DEFAULT_THRESHOLD,
    limit: int | None = None,
) -> list[MentionRanking]:
    """Rank every mention of one paper against its feature's candidate pool.

    A fresh tf-idf model is fitted for each distinct feature from the pool
    titles plus the paper's segments, so idf weights reflect exactly the
    documents a mention can be confused between.  Features without any
    matching registry title produce an empty candidate list.
    """
    pools: dict[tuple[str, str], list[DatasetRecord]] = {}
    models: dict[tuple[str, str], TfidfModel | None] = {}
    results = []
    for m in mentions:
        fkey = (m.surface, m.kind)
        if fkey not in pools:
            pool = candidate_pool(m.surface, m.kind, records)
            pools[fkey] = pool
            models[fkey] = (
                build_tfidf(build_ranking_corpus(pool, paper_segments))
                if pool
                else None
            )
        pool, model = pools[fkey], models[fkey]
        if pool:
            cands = rank_candidates(
                m.query,
                pool,
                model,
                threshold=threshold,
                query_years=m.years_in_context,
                limit=limit,
            )
        else:
            cands = []
        results.append(
            MentionRanking(
                mention_key=m.key,
                paper_id=m.paper_id,
                feature=m.surface,
                kind=m.kind,
                query=m.query,
                candidates=tuple(cands),
            )
        )
    return results


def write_rankings(rankings: Sequence[MentionRanking], path: str | Path) -> int:
    with open(path, "w", encoding="utf-8") as fh:
        for r in rankings:
            payload = {
                "mention_key": r.mention_key,
                "paper_id": r.paper_id,
                "feature": r.feature,
                "kind": r.kind,
                "query": r.query,
                "candidates": [
                    {
                        "record_id": c.record_id,
                        "title": c.title,
                        "base_score": c.base_score,
                        "year_boosted": c.year_boosted,
                        "final_rank": c.final_rank,
                    }
                    for c in r.candidates
                ],
            }
            fh.write(json.dumps(payload, sort_keys=True, ensure_ascii=False) + "\n")
    return len(rankings)


def read_rankings(path: str | Path) -> list[MentionRanking]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            out.append(
                MentionRanking(
                    mention_key=obj["mention_key"],
                    paper_id=obj["paper_id"],
                    feature=obj["feature"],
                    kind=obj["kind"],
                    query=obj["query"],
                    candidates=tuple(
                        RankedCandidate(
                            record_id=c["record_id"],
                            title=c["title"],
                            base_score=c["base_score"],
                            year_boosted=c["year_boosted"],
                            final_rank=c["final_rank"],
                        )
                        for c in obj["candidates"]
                    ),
                )
            )
    return out
