"""Two-phase evaluation against a gold standard.

Detection asks whether the right (paper, feature) occurrences were found at
all; matching asks, for the detection true positives only, whether the
suggested registry ids contain an acceptable one.  In the matching phase the
false-positive count is defined to equal the false-negative count, so its
precision and recall coincide.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .detect import ReferenceMention


@dataclass(frozen=True)
class GoldReference:
    """One expert-confirmed dataset reference in a paper."""

    paper_id: str
    feature: str
    record_ids: frozenset[str]
    start: int | None = None
    end: int | None = None

    def __post_init__(self) -> None:
        if not self.feature:
            raise ValueError("gold reference needs a feature surface")


class GoldStandard:
    """Gold references grouped per paper, in file order.

    ``paper_ids`` may name additional covered papers that carry no
    references, so that an empty paper is a valid (0/0) evaluation subject
    rather than a corpus mismatch.
    """

    def __init__(self, references: Iterable[GoldReference], paper_ids: Iterable[str] = ()):
        self._by_paper: dict[str, list[GoldReference]] = {}
        for paper_id in paper_ids:
            self._by_paper.setdefault(paper_id, [])
        for ref in references:
            self._by_paper.setdefault(ref.paper_id, []).append(ref)

    @property
    def paper_ids(self) -> list[str]:
        return list(self._by_paper)

    def references(self, paper_id: str) -> list[GoldReference]:
        return list(self._by_paper.get(paper_id, []))

    def __len__(self) -> int:
        return sum(len(refs) for refs in self._by_paper.values())

    def __contains__(self, paper_id: str) -> bool:
        return paper_id in self._by_paper


@dataclass(frozen=True)
class EvalReport:
    phase: str
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f_measure: float

    @classmethod
    def from_counts(cls, phase: str, tp: int, fp: int, fn: int) -> "EvalReport":
        p = tp / (tp + fp) if tp + fp else 0.0
        r = tp / (tp + fn) if tp + fn else 0.0
        return cls(phase=phase, tp=tp, fp=fp, fn=fn, precision=p, recall=r, f_measure=f_measure(p, r))


def f_measure(p: float, r: float) -> float:
    """Harmonic mean of precision and recall; 0 when both vanish."""
    if p + r == 0.0:
        return 0.0
    return 2.0 * p * r / (p + r)


def evaluate_detection(
    mentions: Sequence[ReferenceMention],
    gold: GoldStandard,
    strict_offsets: bool = False,
) -> EvalReport:
    """Score detected mentions against the gold references.

    Comparison is a multiset match on (paper, feature) pairs; with
    ``strict_offsets`` the character span must agree as well (gold entries
    without offsets then never match).
    """
    for m in mentions:
        if m.paper_id not in gold:
            raise ValueError(f"paper {m.paper_id!r} not covered by the gold standard")

    def sys_key(m: ReferenceMention):
        return (m.paper_id, m.surface, m.start, m.end) if strict_offsets else (m.paper_id, m.surface)

    def gold_key(g: GoldReference):
        return (g.paper_id, g.feature, g.start, g.end) if strict_offsets else (g.paper_id, g.feature)

    sys_counts = Counter(sys_key(m) for m in mentions)
    gold_counts = Counter(gold_key(g) for pid in gold.paper_ids for g in gold.references(pid))
    tp = sum(min(n, gold_counts[k]) for k, n in sys_counts.items())
    fp = sum(sys_counts.values()) - tp
    fn = sum(gold_counts.values()) - tp
    return EvalReport.from_counts("detection", tp, fp, fn)


def select_detection_tps(
    mentions: Sequence[ReferenceMention], gold: GoldStandard
) -> list[tuple[ReferenceMention, GoldReference]]:
    """Pair detection true positives with their gold references.

    Within each (paper, feature) group the i-th mention in document order is
    paired with the i-th gold reference in file order; surplus on either side
    is dropped (those are the FPs and FNs).
    """
    pairs: list[tuple[ReferenceMention, GoldReference]] = []
    by_group: dict[tuple[str, str], list[ReferenceMention]] = {}
    for m in mentions:
        by_group.setdefault((m.paper_id, m.surface), []).append(m)
    for (paper_id, feature), group in by_group.items():
        gold_refs = [g for g in gold.references(paper_id) if g.feature == feature]
        group = sorted(group, key=lambda m: (m.start, m.end))
        pairs.extend(zip(group, gold_refs))
    pairs.sort(key=lambda pair: (pair[0].paper_id, pair[0].start, pair[0].end))
    return pairs


def evaluate_matching(
    system_matches: Mapping[str, Sequence[tuple[str, frozenset[str] | set[str]]]],
    gold: GoldStandard,
) -> EvalReport:
    """Score suggested record ids for the detection true positives.

    ``system_matches`` maps paper id to (feature, suggested ids) pairs in
    document order; the i-th pair for a feature is matched to the i-th gold
    reference of that feature.  An item is a TP when the suggestion set
    intersects the gold set, or when both sets are empty (correctly
    suggesting nothing for a reference with no registry match).  FP is
    defined to equal FN, so P = R here.
    """
    tp = fn = 0
    for paper_id, items in system_matches.items():
        if paper_id not in gold:
            raise ValueError(f"paper {paper_id!r} not covered by the gold standard")
        by_feature: dict[str, list[GoldReference]] = {}
        for g in gold.references(paper_id):
            by_feature.setdefault(g.feature, []).append(g)
        seen: Counter[str] = Counter()
        for feature, suggested in items:
            refs = by_feature.get(feature, [])
            if seen[feature] >= len(refs):
                raise ValueError(
                    f"{paper_id}: item {seen[feature] + 1} for feature {feature!r} "
                    "is not among the detection true positives"
                )
            gold_ref = refs[seen[feature]]
            seen[feature] += 1
            suggested_set = frozenset(suggested)
            if suggested_set & gold_ref.record_ids or not (suggested_set | gold_ref.record_ids):
                tp += 1
            else:
                fn += 1
    return EvalReport.from_counts("matching", tp, fn, fn)


# --- gold standard file -----------------------------------------------------
# Per-paper blocks:
#   [paper-id]
#   feature<TAB>id1,id2          acceptable ids, may be empty
#   feature<TAB>ids<TAB>start:end  optional character offsets
# '#' lines and blank lines are ignored.


def parse_gold_file(path: str | Path) -> GoldStandard:
    references: list[GoldReference] = []
    paper_ids: list[str] = []
    paper_id: str | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if line.startswith("[") and line.rstrip().endswith("]"):
                paper_id = line.strip()[1:-1].strip()
                if not paper_id:
                    raise ValueError(f"{path}:{lineno}: empty paper id")
                paper_ids.append(paper_id)
                continue
            if paper_id is None:
                raise ValueError(f"{path}:{lineno}: reference before any [paper] header")
            parts = line.split("\t")
            if len(parts) not in (2, 3):
                raise ValueError(f"{path}:{lineno}: expected 2 or 3 tab-separated fields")
            feature = parts[0].strip()
            ids = frozenset(t.strip() for t in parts[1].split(",") if t.strip())
            start = end = None
            if len(parts) == 3 and parts[2].strip():
                try:
                    s, e = parts[2].split(":")
                    start, end = int(s), int(e)
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad offset field {parts[2]!r}") from exc
            references.append(
                GoldReference(paper_id=paper_id, feature=feature, record_ids=ids, start=start, end=end)
            )
    return GoldStandard(references, paper_ids=paper_ids)


def write_gold_file(gold: GoldStandard, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for paper_id in sorted(gold.paper_ids):
            fh.write(f"[{paper_id}]\n")
            for ref in gold.references(paper_id):
                line = f"{ref.feature}\t{','.join(sorted(ref.record_ids))}"
                if ref.start is not None and ref.end is not None:
                    line += f"\t{ref.start}:{ref.end}"
                fh.write(line + "\n")
            fh.write("\n")


# --- reports ----------------------------------------------------------------


def write_report(reports: Sequence[EvalReport], path: str | Path) -> None:
    payload = {
        r.phase: {
            "tp": r.tp,
            "fp": r.fp,
            "fn": r.fn,
            "precision": r.precision,
            "recall": r.recall,
            "f_measure": r.f_measure,
        }
        for r in reports
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def render_report_table(reports: Sequence[EvalReport]) -> str:
    """Human-readable summary; scores rounded for display only."""
    lines = [
        f"{'phase':<12}{'tp':>6}{'fp':>6}{'fn':>6}{'P':>8}{'R':>8}{'F':>8}",
        "-" * 54,
    ]
    for r in reports:
        lines.append(
            f"{r.phase:<12}{r.tp:>6}{r.fp:>6}{r.fn:>6}"
            f"{r.precision:>8.2f}{r.recall:>8.2f}{r.f_measure:>8.2f}"
        )
    return "\n".join(lines)
