"""Expert review workflows and session persistence.

Two ways to clear a paper: decide every mention individually (top 5
candidates each), or decide once per feature using a top-6 list aggregated
from the member mentions' candidates.  Sessions live in append-only JSONL
event logs so that a crash can never lose a recorded decision.
"""
from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Mapping, Sequence

from .detect import ReferenceMention
from .ranking import MentionRanking

PER_REFERENCE = "per_reference"
PER_FEATURE = "per_feature"
WORKFLOWS = (PER_REFERENCE, PER_FEATURE)

NO_MATCH = "NO_MATCH"
SKIPPED = "SKIPPED"

PER_REFERENCE_CAP = 5
PER_FEATURE_CAP = 6


def parse_mention_key(key: str) -> tuple[str, int, int, str, str]:
    """Split a mention key back into (paper_id, start, end, kind, surface)."""
    parts = key.split("|")
    if len(parts) != 5:
        raise ValueError(f"malformed mention key {key!r}")
    paper_id, start, end, kind, surface = parts
    return paper_id, int(start), int(end), kind, surface


@dataclass(frozen=True)
class CandidateSummary:
    record_id: str
    title: str
    score: float  # cosine score (per_reference) or occurrence count (per_feature)


@dataclass(frozen=True)
class ReviewItem:
    key: str  # mention key (per_reference) or feature surface (per_feature)
    candidates: tuple[CandidateSummary, ...]
    mention_keys: tuple[str, ...]
    context: tuple[str, ...] = ()  # segment text per member mention, for display
    decision: str | None = None


@dataclass(frozen=True)
class MatchDecision:
    paper_id: str
    key: str
    choice: str  # record id, NO_MATCH, or SKIPPED
    decided_by: str
    timestamp: str


@dataclass
class ReviewSession:
    session_id: str
    paper_id: str
    workflow: str
    items: list[ReviewItem]
    decisions: list[MatchDecision] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "completed" if all(item.decision is not None for item in self.items) else "open"

    def item(self, key: str) -> ReviewItem:
        for it in self.items:
            if it.key == key:
                return it
        raise KeyError(f"no review item with key {key!r}")

    def apply_decision(self, decision: MatchDecision) -> None:
        self.items = [
            replace(it, decision=decision.choice) if it.key == decision.key else it
            for it in self.items
        ]
        self.decisions.append(decision)


def session_id_for(paper_id: str, workflow: str) -> str:
    return f"{paper_id}--{workflow}"


def per_reference_items(
    mentions: Sequence[ReferenceMention],
    rankings: Mapping[str, MentionRanking],
    cap: int = PER_REFERENCE_CAP,
) -> list[ReviewItem]:
    """One review item per mention, carrying its top candidates."""
    items = []
    for m in mentions:
        ranking = rankings.get(m.key)
        cands = ranking.candidates[:cap] if ranking else ()
        items.append(
            ReviewItem(
                key=m.key,
                candidates=tuple(
                    CandidateSummary(c.record_id, c.title, c.base_score) for c in cands
                ),
                mention_keys=(m.key,),
                context=(m.segment_text,),
            )
        )
    return items


def per_feature_items(
    feature_groups: Mapping[str, Sequence[ReferenceMention]],
    rankings: Mapping[str, MentionRanking],
    cap: int = PER_FEATURE_CAP,
    member_cap: int = PER_REFERENCE_CAP,
) -> list[ReviewItem]:
    """One review item per feature, aggregating the members' candidate lists.

    A record id is counted once per member top list it appears in; ids are
    ordered by descending count, then best cosine score, then id.
    """
    items = []
    for feature, group in feature_groups.items():
        counts: dict[str, int] = {}
        best_score: dict[str, float] = {}
        titles: dict[str, str] = {}
        for m in group:
            ranking = rankings.get(m.key)
            if ranking is None:
                continue
            for c in ranking.candidates[:member_cap]:
                counts[c.record_id] = counts.get(c.record_id, 0) + 1
                if c.base_score > best_score.get(c.record_id, -1.0):
                    best_score[c.record_id] = c.base_score
                titles[c.record_id] = c.title
        ordered = sorted(counts, key=lambda rid: (-counts[rid], -best_score[rid], rid))
        items.append(
            ReviewItem(
                key=feature,
                candidates=tuple(
                    CandidateSummary(rid, titles[rid], float(counts[rid])) for rid in ordered[:cap]
                ),
                mention_keys=tuple(m.key for m in group),
                context=tuple(m.segment_text for m in group),
            )
        )
    return items


def build_session(
    paper_id: str,
    workflow: str,
    mentions: Sequence[ReferenceMention],
    rankings: Sequence[MentionRanking],
) -> ReviewSession:
    if workflow not in WORKFLOWS:
        raise ValueError(f"unknown workflow {workflow!r}; expected one of {WORKFLOWS}")
    own = [m for m in mentions if m.paper_id == paper_id]
    by_key = {r.mention_key: r for r in rankings}
    if workflow == PER_REFERENCE:
        items = per_reference_items(own, by_key)
    else:
        groups: dict[str, list[ReferenceMention]] = {}
        for m in own:
            groups.setdefault(m.surface, []).append(m)
        items = per_feature_items(groups, by_key)
    return ReviewSession(
        session_id=session_id_for(paper_id, workflow),
        paper_id=paper_id,
        workflow=workflow,
        items=items,
    )


# --- links export -----------------------------------------------------------


@dataclass(frozen=True)
class LinkRow:
    paper_id: str
    start: int
    end: int
    feature: str
    record_id: str
    doi: str


@dataclass(frozen=True)
class LinksExport:
    links: tuple[LinkRow, ...]
    gaps: tuple[tuple[str, str], ...]  # (item key, NO_MATCH or SKIPPED)


def export_links(session: ReviewSession) -> LinksExport:
    """Resolve a completed session into one link row per decided mention.

    A per-feature decision fans out to every member mention.  Items decided
    NO_MATCH (or skipped) contribute no links and are listed as gaps.
    """
    if session.status != "completed":
        raise ValueError(f"session {session.session_id} is not completed")
    links: list[LinkRow] = []
    gaps: list[tuple[str, str]] = []
    for item in session.items:
        if item.decision in (NO_MATCH, SKIPPED):
            gaps.append((item.key, item.decision))
            continue
        for mkey in item.mention_keys:
            paper_id, start, end, _kind, surface = parse_mention_key(mkey)
            rid = item.decision or ""
            links.append(
                LinkRow(
                    paper_id=paper_id,
                    start=start,
                    end=end,
                    feature=surface,
                    record_id=rid,
                    doi=rid if rid.startswith("10.") else "",
                )
            )
    links.sort(key=lambda r: (r.paper_id, r.start, r.end))
    return LinksExport(links=tuple(links), gaps=tuple(gaps))


def render_links_tsv(export: LinksExport) -> str:
    lines = ["paper_id\tstart\tend\tfeature\trecord_id\tdoi"]
    for r in export.links:
        lines.append(f"{r.paper_id}\t{r.start}\t{r.end}\t{r.feature}\t{r.record_id}\t{r.doi}")
    lines.append("")
    lines.append("# gaps")
    lines.append("key\tstatus")
    for key, status in export.gaps:
        lines.append(f"{key}\t{status}")
    return "\n".join(lines) + "\n"


# --- persistence ------------------------------------------------------------
# One JSONL file per session.  First event describes the session, every
# decision is appended as its own event and fsynced before we report success.


class SessionStore:
    def __init__(self, directory: str | Path, clock: Callable[[], str] | None = None):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._clock = clock or (lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _path(self, session_id: str) -> Path:
        if "/" in session_id or "\\" in session_id or session_id.startswith("."):
            raise ValueError(f"invalid session id {session_id!r}")
        return self.directory / f"{session_id}.jsonl"

    def _lock(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def exists(self, session_id: str) -> bool:
        return self._path(session_id).exists()

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.directory.glob("*.jsonl"))

    def create(self, session: ReviewSession, overwrite: bool = False) -> None:
        path = self._path(session.session_id)
        if path.exists() and not overwrite:
            raise FileExistsError(f"session {session.session_id} already exists")
        event = {
            "event": "created",
            "session_id": session.session_id,
            "paper_id": session.paper_id,
            "workflow": session.workflow,
            "items": [
                {
                    "key": it.key,
                    "candidates": [
                        {"record_id": c.record_id, "title": c.title, "score": c.score}
                        for c in it.candidates
                    ],
                    "mention_keys": list(it.mention_keys),
                    "context": list(it.context),
                }
                for it in session.items
            ],
        }
        with self._lock(session.session_id):
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True, ensure_ascii=False) + "\n")
                fh.flush()
                os.fsync(fh.fileno())

    def load(self, session_id: str) -> ReviewSession:
        path = self._path(session_id)
        if not path.exists():
            raise FileNotFoundError(f"no session {session_id!r}")
        session: ReviewSession | None = None
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                if event["event"] == "created":
                    session = ReviewSession(
                        session_id=event["session_id"],
                        paper_id=event["paper_id"],
                        workflow=event["workflow"],
                        items=[
                            ReviewItem(
                                key=it["key"],
                                candidates=tuple(
                                    CandidateSummary(c["record_id"], c["title"], c["score"])
                                    for c in it["candidates"]
                                ),
                                mention_keys=tuple(it["mention_keys"]),
                                context=tuple(it.get("context", ())),
                            )
                            for it in event["items"]
                        ],
                    )
                elif event["event"] == "decision":
                    if session is None:
                        raise ValueError(f"{path}: decision before session creation event")
                    session.apply_decision(
                        MatchDecision(
                            paper_id=session.paper_id,
                            key=event["key"],
                            choice=event["choice"],
                            decided_by=event.get("decided_by", ""),
                            timestamp=event.get("timestamp", ""),
                        )
                    )
                else:
                    raise ValueError(f"{path}: unknown event type {event['event']!r}")
        if session is None:
            raise ValueError(f"{path}: no session creation event")
        return session

    def record_decision(
        self, session_id: str, key: str, choice: str, decided_by: str = ""
    ) -> MatchDecision:
        """Validate, append, and fsync one decision; returns what was written."""
        if not choice:
            raise ValueError("empty decision")
        with self._lock(session_id):
            session = self.load(session_id)
            session.item(key)  # raises KeyError for unknown keys
            decision = MatchDecision(
                paper_id=session.paper_id,
                key=key,
                choice=choice,
                decided_by=decided_by,
                timestamp=self._clock(),
            )
            event = {
                "event": "decision",
                "key": key,
                "choice": choice,
                "decided_by": decided_by,
                "timestamp": decision.timestamp,
            }
            with open(self._path(session_id), "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event, sort_keys=True, ensure_ascii=False) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
        return decision
