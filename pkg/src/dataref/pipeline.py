"""Batch orchestration: papers in, mentions/rankings/sessions out.

Each paper is processed independently (detect, rank, session) so one broken
input cannot sink a batch run; failures are collected and reported.  All
stage artifacts land in the output directory as plain files.
"""
from __future__ import annotations

import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .detect import ReferenceMention, detect_references, write_mentions
from .dictionary import DictionaryEntry, load_dictionary
from .ranking import (
    DEFAULT_THRESHOLD,
    MentionRanking,
    rank_mentions,
    write_rankings,
)
from .records import DatasetRecord, load_records
from .review import PER_FEATURE_CAP, PER_REFERENCE_CAP, WORKFLOWS, SessionStore, build_session
from .textpipe import PaperText, split_sentences
from .wordlists import ConfigurationError

log = logging.getLogger(__name__)

CONFIG_ENV_VAR = "DATAREF_CONFIG"


@dataclass
class PipelineConfig:
    records_path: str = "records.txt"
    dictionary_path: str = "dictionary.tsv"
    wordlists_dir: str | None = None  # None uses the bundled lists
    seeds_path: str | None = None
    blacklist_path: str | None = None
    output_dir: str = "out"
    threshold: float = DEFAULT_THRESHOLD
    per_reference_cap: int = PER_REFERENCE_CAP
    per_feature_cap: int = PER_FEATURE_CAP
    workflow: str = "per_reference"
    include_nondatasets: bool = False
    paper_corpus: bool = True  # pool paper sentences into the idf corpus
    host: str = "127.0.0.1"
    port: int = 8000
    ui_dir: str | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigurationError(f"threshold must be in [0,1], got {self.threshold}")
        if self.per_reference_cap < 1 or self.per_feature_cap < 1:
            raise ConfigurationError("candidate caps must be >= 1")
        if self.workflow not in WORKFLOWS:
            raise ConfigurationError(f"workflow must be one of {WORKFLOWS}, got {self.workflow!r}")

    @property
    def sessions_dir(self) -> str:
        return str(Path(self.output_dir) / "sessions")

    @property
    def exports_dir(self) -> str:
        return str(Path(self.output_dir) / "exports")

    def effective_blacklist_path(self) -> str:
        return self.blacklist_path or str(Path(self.output_dir) / "blacklist.txt")


def load_config(path: str | os.PathLike | None = None) -> PipelineConfig:
    """Config from an explicit path, the DATAREF_CONFIG env var, or defaults."""
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR)
    if path is None:
        return PipelineConfig()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path} is not valid JSON: {exc}") from exc
    known = {f.name for f in dataclasses.fields(PipelineConfig)}
    unknown = set(raw) - known
    if unknown:
        raise ConfigurationError(f"config {path}: unknown keys {sorted(unknown)}")
    return PipelineConfig(**raw)


@dataclass
class PipelineResult:
    mentions_path: str
    rankings_path: str
    sessions_dir: str
    papers_ok: list[str] = field(default_factory=list)
    papers_failed: dict[str, str] = field(default_factory=dict)
    papers_empty: list[str] = field(default_factory=list)
    session_ids: list[str] = field(default_factory=list)
    n_mentions: int = 0

    @property
    def ok(self) -> bool:
        return not self.papers_failed


def matching_records(records: Sequence[DatasetRecord], include_nondatasets: bool) -> list[DatasetRecord]:
    if include_nondatasets:
        return list(records)
    return [r for r in records if r.resource_type == "dataset"]


def process_paper(
    paper: PaperText,
    dictionary: Sequence[DictionaryEntry],
    records: Sequence[DatasetRecord],
    config: PipelineConfig,
) -> tuple[list[ReferenceMention], list[MentionRanking]]:
    """Detect and rank a single paper; models are fitted per (paper, feature)."""
    mentions = detect_references(paper, dictionary)
    segments = [paper.text[s.start : s.end] for s in split_sentences(paper.text)] if config.paper_corpus else []
    rankings = rank_mentions(mentions, records, segments, threshold=config.threshold)
    return mentions, rankings


def run_pipeline(
    config: PipelineConfig,
    paper_paths: Sequence[str | os.PathLike],
    overwrite_sessions: bool = False,
) -> PipelineResult:
    records = matching_records(load_records(config.records_path), config.include_nondatasets)
    if not records:
        raise ConfigurationError(f"no matching records in {config.records_path}")
    dictionary = load_dictionary(config.dictionary_path)
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    store = SessionStore(config.sessions_dir)

    result = PipelineResult(
        mentions_path=str(out_dir / "mentions.tsv"),
        rankings_path=str(out_dir / "ranked.jsonl"),
        sessions_dir=config.sessions_dir,
    )
    all_mentions: list[ReferenceMention] = []
    all_rankings: list[MentionRanking] = []
    for path in sorted(Path(p) for p in paper_paths):
        try:
            paper = PaperText.from_file(path)
            mentions, rankings = process_paper(paper, dictionary, records, config)
            session = build_session(paper.paper_id, config.workflow, mentions, rankings)
            if store.exists(session.session_id) and not overwrite_sessions:
                log.info("session %s exists, keeping it", session.session_id)
            else:
                store.create(session, overwrite=overwrite_sessions)
            result.session_ids.append(session.session_id)
            all_mentions.extend(mentions)
            all_rankings.extend(rankings)
            result.papers_ok.append(paper.paper_id)
            if not mentions:
                result.papers_empty.append(paper.paper_id)
        except Exception as exc:
            log.error("paper %s failed: %s", path, exc)
            result.papers_failed[str(path)] = str(exc)
    result.n_mentions = write_mentions(all_mentions, result.mentions_path)
    write_rankings(all_rankings, result.rankings_path)
    return result
