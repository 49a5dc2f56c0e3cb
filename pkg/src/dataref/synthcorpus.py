"""A small fully synthetic corpus: registry, papers, and gold standard.

Everything downstream of harvesting can be exercised against this corpus
without network access or the original registry dump.  Papers 01-10 carry
13 seeded references between them (paper-10 has none on purpose); paper-11
is a large appendix-style paper with 45 mentions of 3 features for the
review workflows; the extra NYPD paper exists to exercise blacklisting.

The texts are written so that detection finds exactly the seeded features:
when editing them, mind that phrases match case-insensitively ("exit poll")
and that the dictionary derived from the titles also contains pair noise
like "Social Survey" or "Longitudinal Study".
"""
from __future__ import annotations

from pathlib import Path

from .detect import ReferenceMention, find_feature_occurrences
from .dictionary import DictionaryEntry, build_dictionary
from .evaluation import GoldReference, GoldStandard, write_gold_file
from .records import DatasetRecord, write_records
from .textpipe import PaperText
from .wordlists import WordLists, default_wordlists

_RECORDS = (
    ("10.4232/1.10001", "ALLBUS - Allgemeine Bevölkerungsumfrage der Sozialwissenschaften 1980", 1980, "de", "dataset"),
    ("10.4232/1.10002", "German General Social Survey (ALLBUS) 2014", 2014, "en", "dataset"),
    ("10.4232/1.10003", "German General Social Survey (ALLBUS) 2016", 2016, "en", "dataset"),
    ("10.4232/1.10004", "ALLBUScompact 2014", 2014, "de", "dataset"),
    ("10.4232/1.10005", "Programme for the International Assessment of Adult Competencies (PIAAC), Germany 2012", 2012, "en", "dataset"),
    ("10.4232/1.10006", "PIAAC Longitudinal Study, Germany 2015", 2015, "en", "dataset"),
    ("10.4232/1.10007", "EVS - European Values Study 1999 - Italy", 1999, "en", "dataset"),
    ("10.4232/1.10008", "EVS - European Values Study 2008 - Germany", 2008, "en", "dataset"),
    ("10.4232/1.10009", "Czech Exit Poll 1996", 1996, "en", "dataset"),
    ("10.4232/1.10010", "Exit Poll Hungary 2006", 2006, "en", "dataset"),
    ("10.4232/1.10011", "Drug Abuse Warning Network (DAWN), 2008", 2008, "en", "dataset"),
    ("10.4232/1.10012", "New York Police Department (NYPD) Stop, Question, and Frisk Database, 2006", 2006, "en", "dataset"),
    ("10.4232/1.10013", "Survey of Hunting, 1980", 1980, "en", "dataset"),
    ("10.4232/1.10014", "Singularisierungsstudie 1993", 1993, "de", "dataset"),
    ("10.4232/1.10015", "Freedom Poll", None, "en", "dataset"),
    ("10.4232/1.10016", "Eurobarometer 42", None, "en", "dataset"),
    ("10.4232/1.90001", "Codebook for the German General Social Survey (ALLBUS) 2014", 2014, "en", "text"),
    ("10.4232/1.90002", "Miscellaneous research materials", None, "en", "other"),
)

ALLBUS_IDS = frozenset({"10.4232/1.10001", "10.4232/1.10002", "10.4232/1.10003"})
PIAAC_IDS = frozenset({"10.4232/1.10005", "10.4232/1.10006"})
EXIT_POLL_IDS = frozenset({"10.4232/1.10009", "10.4232/1.10010"})

WORKFLOW_PAPER_ID = "paper-11"
WORKFLOW_COUNTS = {"ALLBUS": 20, "PIAAC": 15, "Exit Poll": 10}  # 45 mentions, 3 features


def synthetic_records() -> list[DatasetRecord]:
    return [
        DatasetRecord(id=rid, title=title, year=year, language=lang, resource_type=rtype)
        for rid, title, year, lang, rtype in _RECORDS
    ]


def dataset_records() -> list[DatasetRecord]:
    return [r for r in synthetic_records() if r.resource_type == "dataset"]


_EVAL_PAPERS = {
    "paper-01": (
        "Public opinion research in Germany rests on long-running measurement programmes.",
        "Our first source is the ALLBUS 2014 wave.",
        "We also use the ALLBUS 1980 baseline.",
        "Skill measures come from the PIAAC round of 2012.",
        "We merged the files at the regional level and weighted all analyses.",
    ),
    "paper-02": (
        "Values change slowly across European societies.",
        "We examine religiosity using the EVS wave collected in 1999 in Italy.",
        "The analysis replicates earlier cross-national comparisons.",
    ),
    "paper-03": (
        "Electoral forecasting in new democracies remains difficult.",
        "The Czech exit poll of 1996 is our primary example.",
        "We contrast this with the ALLBUS 2016 survey round.",
    ),
    "paper-04": (
        "Adult competencies are measured in successive international assessments.",
        "We rely on the second PIAAC round from 2015 for Germany.",
        "Our models adjust for age, gender, and education.",
    ),
    "paper-05": (
        "Emergency department reporting captures drug-related episodes nationwide.",
        "We draw on the DAWN drug episode records from 2008.",
        "Reporting practices differ across hospitals and states.",
    ),
    "paper-06": (
        "Wildlife management policy depends on reliable participation data.",
        "The Survey of Hunting conducted in 1980 remains the richest source.",
        "We reanalyse its stratified sample using modern weighting.",
    ),
    "paper-07": (
        "Lebensläufe in der späten Moderne sind zunehmend entstandardisiert.",
        "Unsere Analysen stützen sich auf die Singularisierungsstudie von 1993.",
        "Die Ergebnisse zeigen deutliche Kohorteneffekte.",
    ),
    "paper-08": (
        "Cross-national value comparisons require harmonised instruments.",
        "Our analysis uses the European EVS fieldwork of 2008.",
        "Additional trend context comes from Eurobarometer 42.",
    ),
    "paper-09": (
        "Civil liberties surveys expanded rapidly after 1990.",
        "We use the Freedom Poll to examine tolerance of dissent.",
        "Item wording is held constant across years.",
    ),
    "paper-10": (
        "This methodological note reviews nonresponse adjustments in panel research.",
        "No single weighting scheme dominates across applications.",
        "We recommend transparent reporting of design choices.",
    ),
}


def workflow_paper_text() -> str:
    lines = ["This appendix lists every data source consulted for the replication audit."]
    allbus_years = (1980, 2014, 2016)
    for i in range(WORKFLOW_COUNTS["ALLBUS"]):
        lines.append(f"Another source in the audit is the ALLBUS round of {allbus_years[i % 3]}.")
    for i in range(WORKFLOW_COUNTS["PIAAC"]):
        lines.append(f"Another competency profile relies on PIAAC scaling for {2012 if i % 2 == 0 else 2015}.")
    for i in range(WORKFLOW_COUNTS["Exit Poll"]):
        lines.append(f"Projection {i + 1} was validated against the exit poll conducted in {1996 + i}.")
    return "\n".join(lines) + "\n"


def synthetic_papers(include_workflow: bool = True) -> list[PaperText]:
    papers = [
        PaperText(paper_id=pid, text="\n".join(sentences) + "\n")
        for pid, sentences in _EVAL_PAPERS.items()
    ]
    if include_workflow:
        papers.append(PaperText(paper_id=WORKFLOW_PAPER_ID, text=workflow_paper_text()))
    return papers


def nypd_paper() -> PaperText:
    return PaperText(
        paper_id="paper-nypd",
        text=(
            "Street-level policing data became widely available after 2010.\n"
            "Stop-and-frisk practices were recorded by the NYPD throughout 2006.\n"
            "We discuss the resulting measurement problems.\n"
        ),
    )


def eval_gold_references() -> list[GoldReference]:
    """The 13 seeded references of papers 01-10, in document order."""
    g = GoldReference
    return [
        g("paper-01", "ALLBUS", frozenset({"10.4232/1.10002"})),
        g("paper-01", "ALLBUS", frozenset({"10.4232/1.10001"})),
        g("paper-01", "PIAAC", frozenset({"10.4232/1.10005"})),
        g("paper-02", "EVS", frozenset({"10.4232/1.10007"})),
        g("paper-03", "Exit Poll", frozenset({"10.4232/1.10009"})),
        g("paper-03", "ALLBUS", ALLBUS_IDS),
        g("paper-04", "PIAAC", frozenset({"10.4232/1.10006"})),
        g("paper-05", "DAWN", frozenset({"10.4232/1.10011"})),
        g("paper-06", "Survey of Hunting", frozenset({"10.4232/1.10013"})),
        g("paper-07", "Singularisierungsstudie", frozenset({"10.4232/1.10014"})),
        g("paper-08", "EVS", frozenset({"10.4232/1.10008"})),
        g("paper-08", "Eurobarometer", frozenset({"10.4232/1.10016"})),
        g("paper-09", "Freedom Poll", frozenset({"10.4232/1.10015"})),
    ]


def workflow_gold_references() -> list[GoldReference]:
    ids = {"ALLBUS": ALLBUS_IDS, "PIAAC": PIAAC_IDS, "Exit Poll": EXIT_POLL_IDS}
    refs = []
    for feature in ("ALLBUS", "PIAAC", "Exit Poll"):
        refs.extend(
            GoldReference(WORKFLOW_PAPER_ID, feature, ids[feature])
            for _ in range(WORKFLOW_COUNTS[feature])
        )
    return refs


def eval_gold() -> GoldStandard:
    return GoldStandard(eval_gold_references(), paper_ids=list(_EVAL_PAPERS))


def full_gold() -> GoldStandard:
    return GoldStandard(
        eval_gold_references() + workflow_gold_references(),
        paper_ids=list(_EVAL_PAPERS) + [WORKFLOW_PAPER_ID],
    )


def synthetic_dictionary(wordlists: WordLists | None = None) -> list[DictionaryEntry]:
    wl = wordlists or default_wordlists()
    return build_dictionary([(r.id, r.title) for r in dataset_records()], wl)


def mentions_from_gold(gold: GoldStandard, papers: list[PaperText]) -> list[ReferenceMention]:
    """Turn gold references into mention stubs located in the paper texts.

    The i-th gold reference of a feature gets the offsets of the i-th
    occurrence of that feature in the paper; used to feed the gold standard
    back through the evaluation as a perfect system.
    """
    kinds = {e.surface: e.kind for e in synthetic_dictionary()}
    by_id = {p.paper_id: p for p in papers}
    mentions = []
    for paper_id in gold.paper_ids:
        paper = by_id.get(paper_id)
        if paper is None:
            continue
        seen: dict[str, int] = {}
        for ref in gold.references(paper_id):
            kind = kinds.get(ref.feature, "abbreviation")
            occs = find_feature_occurrences(paper.text, ref.feature, kind)
            idx = seen.get(ref.feature, 0)
            seen[ref.feature] = idx + 1
            if idx >= len(occs):
                raise ValueError(
                    f"{paper_id}: gold lists occurrence {idx + 1} of {ref.feature!r} "
                    f"but the text has only {len(occs)}"
                )
            start, end = occs[idx]
            mentions.append(
                ReferenceMention(
                    paper_id=paper_id,
                    surface=ref.feature,
                    kind=kind,
                    sentence_index=0,
                    segment_text=ref.feature,
                    start=start,
                    end=end,
                    query=ref.feature,
                    years_in_context=(),
                )
            )
    mentions.sort(key=lambda m: (m.paper_id, m.start, m.end))
    return mentions


def write_corpus(base_dir: str | Path) -> dict[str, str]:
    """Materialize the corpus under ``base_dir``; returns the created paths."""
    base = Path(base_dir)
    papers_dir = base / "papers"
    extra_dir = base / "extra"
    papers_dir.mkdir(parents=True, exist_ok=True)
    extra_dir.mkdir(parents=True, exist_ok=True)
    records_path = base / "records.txt"
    gold_path = base / "gold.txt"
    write_records(synthetic_records(), records_path)
    for paper in synthetic_papers():
        (papers_dir / f"{paper.paper_id}.txt").write_text(paper.text, encoding="utf-8")
    extra = nypd_paper()
    (extra_dir / f"{extra.paper_id}.txt").write_text(extra.text, encoding="utf-8")
    write_gold_file(full_gold(), gold_path)
    return {
        "records": str(records_path),
        "papers_dir": str(papers_dir),
        "extra_dir": str(extra_dir),
        "gold": str(gold_path),
    }
