"""End-to-end command-line flows over temporary working directories."""
import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from dataref.cli import main
from dataref.dictionary import load_dictionary
from dataref.evaluation import parse_gold_file
from dataref.records import load_records
from dataref.review import NO_MATCH, SessionStore, parse_mention_key

ONE_PAGE = (
    '<?xml version="1.0"?>'
    '<OAI-PMH xmlns="http://www.openarchives.org/OAI/2.0/"><ListRecords>'
    "<record><header><identifier>oai:x:1</identifier></header>"
    '<metadata><oai_dc:dc xmlns:oai_dc="http://www.openarchives.org/OAI/2.0/oai_dc/" '
    'xmlns:dc="http://purl.org/dc/elements/1.1/">'
    "<dc:title>Tiny Survey 2003</dc:title>"
    "<dc:identifier>https://doi.org/10.77/tiny</dc:identifier>"
    "<dc:type>Dataset</dc:type><dc:date>2003</dc:date>"
    "</oai_dc:dc></metadata></record>"
    "</ListRecords></OAI-PMH>"
)


class OnePageHandler(BaseHTTPRequestHandler):
    def do_GET(self):
        body = ONE_PAGE.encode("utf-8")
        self.send_response(200)
        self.send_header("Content-Type", "text/xml")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def log_message(self, *args):
        pass


@pytest.fixture()
def oai_endpoint():
    server = ThreadingHTTPServer(("127.0.0.1", 0), OnePageHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{server.server_address[1]}/oai"
    server.shutdown()
    thread.join()


def paper_args(corpus_dir):
    return sorted(str(p) for p in Path(corpus_dir["papers_dir"]).glob("*.txt"))


def table_rows(text):
    """Report table lines with runs of spaces collapsed, for layout-proof asserts."""
    return [" ".join(line.split()) for line in text.splitlines()]


def test_full_chain(corpus_dir, tmp_path, capsys):
    """build-dict -> detect -> rank -> review -> decide -> evaluate -> export."""
    work = tmp_path / "work"
    work.mkdir()
    dict_path = work / "dict.tsv"
    mentions_path = work / "mentions.tsv"
    ranked_path = work / "ranked.jsonl"
    sessions_dir = work / "sessions"

    assert main(["build-dict", "--records", corpus_dir["records"], "--out", str(dict_path)]) == 0
    assert "built dictionary with 20 entries" in capsys.readouterr().out
    assert load_dictionary(dict_path)

    argv = ["detect", "--dict", str(dict_path), "--out", str(mentions_path)]
    assert main(argv + paper_args(corpus_dir)) == 0
    assert "detected 58 mentions" in capsys.readouterr().out

    assert main([
        "rank", "--mentions", str(mentions_path), "--records", corpus_dir["records"],
        "--paper-dir", corpus_dir["papers_dir"], "--out", str(ranked_path),
    ]) == 0
    assert "ranked 58 mentions" in capsys.readouterr().out

    assert main([
        "review", "--mentions", str(mentions_path), "--ranked", str(ranked_path),
        "--sessions", str(sessions_dir),
    ]) == 0
    created = [l for l in capsys.readouterr().out.splitlines() if l.startswith("created session")]
    assert len(created) == 10  # papers that had at least one mention

    # score the top-5 suggestion lists against the gold standard
    report_path = work / "report.json"
    assert main([
        "evaluate", "--mentions", str(mentions_path), "--ranked", str(ranked_path),
        "--gold", corpus_dir["gold"], "--report", str(report_path),
    ]) == 0
    rows = table_rows(capsys.readouterr().out)
    assert "detection 58 0 0 1.00 1.00 1.00" in rows
    assert "matching 58 0 0 1.00 1.00 1.00" in rows
    report = json.loads(report_path.read_text())
    assert report["detection"]["tp"] == 58
    assert report["matching"]["f_measure"] == 1.0

    # resolve every item the way the gold standard says, then score decisions;
    # same-feature references are consumed in document order per paper
    gold = parse_gold_file(corpus_dir["gold"])
    queues = {}
    for paper_id in gold.paper_ids:
        for ref in gold.references(paper_id):
            queues.setdefault((paper_id, ref.feature), []).append(sorted(ref.record_ids)[0])
    store = SessionStore(sessions_dir)
    for sid in store.list_ids():
        for item in store.load(sid).items:
            paper_id, _, _, _, surface = parse_mention_key(item.key)
            queue = queues.get((paper_id, surface), [])
            choice = queue.pop(0) if queue else NO_MATCH
            store.record_decision(sid, item.key, choice, "gold")
    assert main([
        "evaluate", "--mentions", str(mentions_path), "--gold", corpus_dir["gold"],
        "--phase", "matching", "--decisions-from", str(sessions_dir),
    ]) == 0
    assert "matching 58 0 0 1.00 1.00 1.00" in table_rows(capsys.readouterr().out)

    # export one completed session
    out_tsv = work / "links.tsv"
    sid = "paper-01--per_reference"
    assert main(["export", "--sessions", str(sessions_dir), "--session-id", sid,
                 "--out", str(out_tsv)]) == 0
    assert "exported 3 links" in capsys.readouterr().out
    assert out_tsv.read_text().startswith("paper_id\tstart\tend\tfeature\trecord_id\tdoi\n")


def test_evaluate_matching_needs_rankings(corpus_dir, tmp_path, capsys):
    work = tmp_path / "w"
    work.mkdir()
    dict_path = corpus_dir["dictionary"]
    mentions_path = work / "mentions.tsv"
    main(["detect", "--dict", dict_path, "--out", str(mentions_path)] + paper_args(corpus_dir))
    rc = main(["evaluate", "--mentions", str(mentions_path), "--gold", corpus_dir["gold"],
               "--phase", "matching"])
    assert rc == 2


def test_export_incomplete_session_fails(corpus_dir, tmp_path, capsys):
    work = tmp_path / "w"
    work.mkdir()
    mentions_path = work / "mentions.tsv"
    ranked_path = work / "ranked.jsonl"
    sessions_dir = work / "sessions"
    main(["detect", "--dict", corpus_dir["dictionary"], "--out", str(mentions_path)]
         + paper_args(corpus_dir))
    main(["rank", "--mentions", str(mentions_path), "--records", corpus_dir["records"],
          "--out", str(ranked_path)])
    main(["review", "--mentions", str(mentions_path), "--ranked", str(ranked_path),
          "--sessions", str(sessions_dir), "--paper-id", "paper-01"])
    capsys.readouterr()
    rc = main(["export", "--sessions", str(sessions_dir),
               "--session-id", "paper-01--per_reference", "--out", str(work / "x.tsv")])
    assert rc == 1
    assert not (work / "x.tsv").exists()


def test_review_keeps_existing_sessions(corpus_dir, tmp_path, capsys):
    work = tmp_path / "w"
    work.mkdir()
    mentions_path = work / "mentions.tsv"
    ranked_path = work / "ranked.jsonl"
    sessions_dir = work / "sessions"
    main(["detect", "--dict", corpus_dir["dictionary"], "--out", str(mentions_path)]
         + paper_args(corpus_dir))
    main(["rank", "--mentions", str(mentions_path), "--records", corpus_dir["records"],
          "--out", str(ranked_path)])
    argv = ["review", "--mentions", str(mentions_path), "--ranked", str(ranked_path),
            "--sessions", str(sessions_dir), "--paper-id", "paper-01"]
    main(argv)
    capsys.readouterr()
    assert main(argv) == 0  # second run leaves the session alone
    assert "created session" not in capsys.readouterr().out
    assert main(argv + ["--overwrite"]) == 0
    assert "created session paper-01--per_reference" in capsys.readouterr().out


def test_harvest_roundtrip(oai_endpoint, tmp_path, capsys):
    out = tmp_path / "records.txt"
    assert main(["harvest", "--endpoint", oai_endpoint, "--out", str(out)]) == 0
    assert "harvested 1 records" in capsys.readouterr().out
    records = load_records(out)
    assert records[0].id == "10.77/tiny"
    assert records[0].title == "Tiny Survey 2003"


def test_harvest_dead_endpoint_fails(tmp_path):
    rc = main(["harvest", "--endpoint", "http://127.0.0.1:9/oai",
               "--out", str(tmp_path / "r.txt")])
    assert rc == 1


def test_analyze_titles(corpus_dir, capsys):
    rc = main(["analyze-titles", "--records", corpus_dir["records"],
               "--dict", corpus_dir["dictionary"]])
    assert rc == 0
    out = capsys.readouterr().out
    assert "titles analyzed: 18" in out  # every record, datasets and not
    assert "abbreviation" in out

    assert main(["analyze-titles", "--records", corpus_dir["records"]]) == 2


def test_run_with_config_file(corpus_dir, tmp_path, capsys):
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({
        "records_path": corpus_dir["records"],
        "dictionary_path": corpus_dir["dictionary"],
        "output_dir": str(tmp_path / "out"),
    }))
    rc = main(["run", "--config", str(config_path)] + paper_args(corpus_dir))
    assert rc == 0
    out = capsys.readouterr().out
    assert "11 papers processed, 58 mentions, 11 sessions" in out
    assert "no features detected in paper-10" in out


def test_run_reports_failures(corpus_dir, tmp_path, capsys):
    config_path = tmp_path / "config.json"
    config_path.write_text(json.dumps({
        "records_path": corpus_dir["records"],
        "dictionary_path": corpus_dir["dictionary"],
        "output_dir": str(tmp_path / "out"),
    }))
    broken = tmp_path / "broken.txt"
    broken.write_text("")
    rc = main(["run", "--config", str(config_path), str(broken)] + paper_args(corpus_dir))
    assert rc == 1
    captured = capsys.readouterr()
    assert "FAILED" in captured.err


def test_unknown_command_exits_with_usage_error():
    with pytest.raises(SystemExit) as excinfo:
        main(["no-such-command"])
    assert excinfo.value.code == 2
