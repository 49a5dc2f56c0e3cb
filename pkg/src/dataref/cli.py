"""Command-line entry points for the whole toolchain.

Each stage reads and writes plain files, so any step can be rerun or
inspected in isolation: harvest -> build-dict -> detect -> rank -> review
-> (serve / export / evaluate).  `run` chains detect, rank, and review for
a batch of papers.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import api, pipeline
from .detect import detect_references, read_mentions, write_mentions
from .dictionary import apply_blacklist, build_dictionary, load_dictionary, write_dictionary
from .evaluation import (
    evaluate_detection,
    evaluate_matching,
    parse_gold_file,
    render_report_table,
    select_detection_tps,
    write_report,
)
from .harvest import HarvestError, harvest_oai
from .ranking import rank_mentions, read_rankings, write_rankings
from .records import load_records, write_records
from .review import NO_MATCH, SKIPPED, SessionStore, build_session, export_links, render_links_tsv
from .textpipe import PaperText, split_sentences
from .title_patterns import analyze_title_patterns, render_stats
from .wordlists import bundled_dir, load_wordlists, read_blacklist

log = logging.getLogger(__name__)


def _add_harvest(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("harvest", help="harvest an OAI-PMH endpoint into a record store")
    p.add_argument("--endpoint", required=True)
    p.add_argument("--set", dest="set_spec", default=None)
    p.add_argument("--from", dest="from_date", default=None, metavar="DATE")
    p.add_argument("--resume-token", default=None, help="resumption token from a failed run")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_harvest)


def cmd_harvest(args: argparse.Namespace) -> int:
    try:
        records = list(
            harvest_oai(
                args.endpoint,
                set_spec=args.set_spec,
                from_date=args.from_date,
                resumption_token=args.resume_token,
            )
        )
    except HarvestError as exc:
        log.error("%s", exc)
        if exc.resumption_token:
            log.error("resume with --resume-token %s", exc.resumption_token)
        return 1
    n = write_records(records, args.out)
    print(f"harvested {n} records -> {args.out}")
    return 0


def _add_build_dict(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("build-dict", help="induce the feature dictionary from record titles")
    p.add_argument("--records", required=True)
    p.add_argument("--wordlists", default=None, help="directory of word list files (default: bundled)")
    p.add_argument("--seeds", default=None, help="seed-term file override")
    p.add_argument("--blacklist", default=None)
    p.add_argument("--include-nondatasets", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_build_dict)


def cmd_build_dict(args: argparse.Namespace) -> int:
    wl = load_wordlists(args.wordlists or bundled_dir(), blacklist_path=args.blacklist,
                        seeds_path=args.seeds)
    records = load_records(args.records)
    if not args.include_nondatasets:
        records = [r for r in records if r.resource_type == "dataset"]
    titles = [(r.id, r.title) for r in records]
    entries = build_dictionary(titles, wl)
    n = write_dictionary(entries, args.out)
    n_black = sum(1 for e in entries if e.blacklisted)
    print(f"built dictionary with {n} entries ({n_black} blacklisted) -> {args.out}")
    return 0


def _add_analyze_titles(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("analyze-titles", help="title-pattern statistics for a record store")
    p.add_argument("--records", required=True)
    p.add_argument("--dict", dest="dict_path", default=None, help="combined dictionary file")
    p.add_argument("--abbrevs", default=None, help="dictionary file used for abbreviations")
    p.add_argument("--phrases", default=None, help="dictionary file used for phrases")
    p.set_defaults(func=cmd_analyze_titles)


def cmd_analyze_titles(args: argparse.Namespace) -> int:
    from .dictionary import ABBREVIATION, PHRASE

    entries = []
    if args.dict_path:
        entries.extend(load_dictionary(args.dict_path))
    if args.abbrevs:
        entries.extend(e for e in load_dictionary(args.abbrevs) if e.kind == ABBREVIATION)
    if args.phrases:
        entries.extend(e for e in load_dictionary(args.phrases) if e.kind == PHRASE)
    if not entries:
        log.error("no dictionary given; use --dict or --abbrevs/--phrases")
        return 2
    records = load_records(args.records)
    print(render_stats(analyze_title_patterns(records, entries)))
    return 0


def _add_detect(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("detect", help="find dictionary features in paper texts")
    p.add_argument("--dict", dest="dict_path", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("papers", nargs="+", help="paper text files")
    p.set_defaults(func=cmd_detect)


def cmd_detect(args: argparse.Namespace) -> int:
    dictionary = load_dictionary(args.dict_path)
    mentions = []
    for path in sorted(args.papers):
        paper = PaperText.from_file(path)
        found = detect_references(paper, dictionary)
        log.info("%s: %d mentions", paper.paper_id, len(found))
        mentions.extend(found)
    n = write_mentions(mentions, args.out)
    print(f"detected {n} mentions -> {args.out}")
    return 0


def _add_rank(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("rank", help="rank registry candidates for detected mentions")
    p.add_argument("--mentions", required=True)
    p.add_argument("--records", required=True)
    p.add_argument("--threshold", type=float, default=pipeline.DEFAULT_THRESHOLD)
    p.add_argument("--include-nondatasets", action="store_true")
    p.add_argument("--paper-dir", default=None,
                   help="directory of paper texts; their sentences join the idf corpus")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_rank)


def cmd_rank(args: argparse.Namespace) -> int:
    mentions = read_mentions(args.mentions)
    records = load_records(args.records)
    if not args.include_nondatasets:
        records = [r for r in records if r.resource_type == "dataset"]
    rankings = []
    by_paper: dict[str, list] = {}
    for m in mentions:
        by_paper.setdefault(m.paper_id, []).append(m)
    for paper_id in sorted(by_paper):
        segments: list[str] = []
        if args.paper_dir:
            paper_path = Path(args.paper_dir) / f"{paper_id}.txt"
            if paper_path.is_file():
                paper = PaperText.from_file(paper_path)
                segments = [paper.text[s.start : s.end] for s in split_sentences(paper.text)]
            else:
                log.warning("no %s in --paper-dir; using title-only corpus", paper_path.name)
        rankings.extend(rank_mentions(by_paper[paper_id], records, segments, threshold=args.threshold))
    n = write_rankings(rankings, args.out)
    print(f"ranked {n} mentions -> {args.out}")
    return 0


def _add_review(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("review", help="create review sessions from ranked mentions")
    p.add_argument("--mentions", required=True)
    p.add_argument("--ranked", required=True)
    p.add_argument("--sessions", required=True, help="session store directory")
    p.add_argument("--workflow", choices=["per_reference", "per_feature"], default="per_reference")
    p.add_argument("--paper-id", default=None, help="only this paper (default: all in the file)")
    p.add_argument("--overwrite", action="store_true")
    p.set_defaults(func=cmd_review)


def cmd_review(args: argparse.Namespace) -> int:
    mentions = read_mentions(args.mentions)
    rankings = read_rankings(args.ranked)
    store = SessionStore(args.sessions)
    paper_ids = [args.paper_id] if args.paper_id else sorted({m.paper_id for m in mentions})
    for paper_id in paper_ids:
        session = build_session(paper_id, args.workflow, mentions, rankings)
        if store.exists(session.session_id) and not args.overwrite:
            log.info("session %s exists, keeping it", session.session_id)
            continue
        store.create(session, overwrite=args.overwrite)
        print(f"created session {session.session_id} with {len(session.items)} items")
    return 0


def _add_evaluate(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("evaluate", help="two-phase evaluation against a gold standard")
    p.add_argument("--mentions", required=True)
    p.add_argument("--ranked", default=None)
    p.add_argument("--gold", required=True)
    p.add_argument("--phase", choices=["detection", "matching", "both"], default="both")
    p.add_argument("--top-k", type=int, default=5, help="suggestion depth for matching")
    p.add_argument("--decisions-from", default=None,
                   help="session directory; score expert decisions instead of top-k lists")
    p.add_argument("--strict-offsets", action="store_true")
    p.add_argument("--report", default=None, help="write a machine-readable report here")
    p.set_defaults(func=cmd_evaluate)


def _decisions_by_mention(sessions_dir: str) -> dict[str, str]:
    store = SessionStore(sessions_dir)
    decided: dict[str, str] = {}
    for sid in store.list_ids():
        session = store.load(sid)
        for item in session.items:
            if item.decision is None:
                continue
            for mkey in item.mention_keys:
                decided[mkey] = item.decision
    return decided


def cmd_evaluate(args: argparse.Namespace) -> int:
    mentions = read_mentions(args.mentions)
    gold = parse_gold_file(args.gold)
    reports = []
    if args.phase in ("detection", "both"):
        reports.append(evaluate_detection(mentions, gold, strict_offsets=args.strict_offsets))
    if args.phase in ("matching", "both"):
        pairs = select_detection_tps(mentions, gold)
        if args.decisions_from:
            decided = _decisions_by_mention(args.decisions_from)

            def suggestions(mention):
                choice = decided.get(mention.key)
                if choice is None or choice in (NO_MATCH, SKIPPED):
                    return frozenset()
                return frozenset({choice})

        else:
            if not args.ranked:
                log.error("matching phase needs --ranked (or --decisions-from)")
                return 2
            by_key = {r.mention_key: r for r in read_rankings(args.ranked)}

            def suggestions(mention):
                ranking = by_key.get(mention.key)
                if ranking is None:
                    return frozenset()
                return frozenset(c.record_id for c in ranking.candidates[: args.top_k])

        system_matches: dict[str, list[tuple[str, frozenset[str]]]] = {}
        for mention, _gold_ref in pairs:
            system_matches.setdefault(mention.paper_id, []).append(
                (mention.surface, suggestions(mention))
            )
        reports.append(evaluate_matching(system_matches, gold))
    print(render_report_table(reports))
    if args.report:
        write_report(reports, args.report)
        print(f"report -> {args.report}")
    return 0


def _add_serve(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("serve", help="serve the review API (and UI when built)")
    p.add_argument("--config", default=None, help="pipeline config JSON (or DATAREF_CONFIG)")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    config = pipeline.load_config(args.config)
    host = args.host or config.host
    port = args.port if args.port is not None else config.port
    uvicorn.run(api.create_app(config), host=host, port=port, log_level="info")
    return 0


def _add_export(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("export", help="export resolved links from a completed session")
    p.add_argument("--sessions", required=True)
    p.add_argument("--session-id", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)


def cmd_export(args: argparse.Namespace) -> int:
    store = SessionStore(args.sessions)
    try:
        export = export_links(store.load(args.session_id))
    except (FileNotFoundError, ValueError) as exc:
        log.error("%s", exc)
        return 1
    Path(args.out).write_text(render_links_tsv(export), encoding="utf-8")
    print(f"exported {len(export.links)} links, {len(export.gaps)} gaps -> {args.out}")
    return 0


def _add_run(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("run", help="detect + rank + create sessions for a batch of papers")
    p.add_argument("--config", default=None, help="pipeline config JSON (or DATAREF_CONFIG)")
    p.add_argument("--overwrite-sessions", action="store_true")
    p.add_argument("papers", nargs="*", help="paper text files")
    p.set_defaults(func=cmd_run)


def cmd_run(args: argparse.Namespace) -> int:
    config = pipeline.load_config(args.config)
    result = pipeline.run_pipeline(config, args.papers, overwrite_sessions=args.overwrite_sessions)
    print(
        f"{len(result.papers_ok)} papers processed, {result.n_mentions} mentions, "
        f"{len(result.session_ids)} sessions -> {config.output_dir}"
    )
    for paper_id in result.papers_empty:
        print(f"  note: no features detected in {paper_id}")
    for path, error in sorted(result.papers_failed.items()):
        print(f"  FAILED {path}: {error}", file=sys.stderr)
    return 0 if result.ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dataref",
        description="find dataset references in papers and link them to a registry",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for add in (
        _add_harvest,
        _add_build_dict,
        _add_analyze_titles,
        _add_detect,
        _add_rank,
        _add_review,
        _add_evaluate,
        _add_serve,
        _add_export,
        _add_run,
    ):
        add(sub)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
