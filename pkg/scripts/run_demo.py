#!/usr/bin/env python3
"""End-to-end demo on the bundled synthetic corpus.

Materializes the corpus into a working directory, builds the feature
dictionary from the registry titles, runs detection + ranking + session
creation, and scores the result against the corpus gold standard.

    python3 scripts/run_demo.py --workdir /tmp/dataref-demo
"""
import argparse
import logging
import sys
from pathlib import Path

from dataref.detect import read_mentions
from dataref.dictionary import write_dictionary
from dataref.evaluation import (
    evaluate_detection,
    evaluate_matching,
    parse_gold_file,
    render_report_table,
    select_detection_tps,
)
from dataref.pipeline import PipelineConfig, run_pipeline
from dataref.ranking import read_rankings
from dataref.synthcorpus import synthetic_dictionary, write_corpus

log = logging.getLogger("run_demo")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--workdir", default="demo-workdir",
                        help="where corpus and artifacts are written")
    parser.add_argument("--workflow", choices=["per_reference", "per_feature"],
                        default="per_reference")
    parser.add_argument("--top-k", type=int, default=5,
                        help="suggestion depth scored in the matching phase")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    workdir = Path(args.workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    paths = write_corpus(workdir / "corpus")
    dict_path = workdir / "dictionary.tsv"
    n_entries = write_dictionary(synthetic_dictionary(), dict_path)
    log.info("corpus in %s, dictionary with %d entries", paths["papers_dir"], n_entries)

    config = PipelineConfig(
        records_path=paths["records"],
        dictionary_path=str(dict_path),
        output_dir=str(workdir / "out"),
        workflow=args.workflow,
    )
    papers = sorted(Path(paths["papers_dir"]).glob("*.txt"))
    result = run_pipeline(config, papers, overwrite_sessions=True)
    print(f"processed {len(result.papers_ok)} papers, "
          f"{result.n_mentions} mentions, {len(result.session_ids)} sessions")
    for paper_id in result.papers_empty:
        print(f"  no features detected in {paper_id}")
    for path, error in sorted(result.papers_failed.items()):
        print(f"  FAILED {path}: {error}", file=sys.stderr)

    gold = parse_gold_file(paths["gold"])
    mentions = read_mentions(result.mentions_path)
    by_key = {r.mention_key: r for r in read_rankings(result.rankings_path)}
    system_matches = {}
    for mention, _ref in select_detection_tps(mentions, gold):
        ranking = by_key.get(mention.key)
        ids = frozenset(c.record_id for c in ranking.candidates[: args.top_k]) if ranking else frozenset()
        system_matches.setdefault(mention.paper_id, []).append((mention.surface, ids))
    reports = [evaluate_detection(mentions, gold), evaluate_matching(system_matches, gold)]
    print()
    print(render_report_table(reports))
    print()
    print(f"review sessions under {result.sessions_dir}; "
          f"serve them with: python3 scripts/serve_demo.py --workdir {workdir}")
    return 0 if result.ok else 1


if __name__ == "__main__":
    sys.exit(main())
