"""Shared fixtures plus the acceptance-criteria summary printer.

Tests marked ``@pytest.mark.acceptance("...")`` get one PASS/FAIL line each
at the end of the run, so the release checklist can be read off the tail of
the pytest output.
"""
from __future__ import annotations

import pytest

from dataref.dictionary import write_dictionary
from dataref.synthcorpus import (
    dataset_records,
    synthetic_dictionary,
    synthetic_papers,
    synthetic_records,
    write_corpus,
)
from dataref.wordlists import default_wordlists

_ACCEPTANCE: dict[str, str] = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "acceptance(name): ties a test to a named acceptance criterion"
    )


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    name = marker.args[0]
    if report.when == "call":
        _ACCEPTANCE[name] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and (report.failed or report.skipped):
        _ACCEPTANCE[name] = "FAIL"


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, verdict in _ACCEPTANCE.items():
        terminalreporter.write_line(f"{verdict}  {name}")


@pytest.fixture(scope="session")
def wordlists():
    return default_wordlists()


@pytest.fixture(scope="session")
def records():
    return synthetic_records()


@pytest.fixture(scope="session")
def datasets():
    return dataset_records()


@pytest.fixture(scope="session")
def dictionary(wordlists):
    return synthetic_dictionary(wordlists)


@pytest.fixture(scope="session")
def papers():
    return synthetic_papers()


@pytest.fixture(scope="session")
def papers_by_id(papers):
    return {p.paper_id: p for p in papers}


@pytest.fixture()
def corpus_dir(tmp_path):
    """A materialized corpus plus dictionary file in a fresh tmp dir."""
    paths = write_corpus(tmp_path)
    dict_path = tmp_path / "dictionary.tsv"
    write_dictionary(synthetic_dictionary(), dict_path)
    paths["dictionary"] = str(dict_path)
    paths["base"] = str(tmp_path)
    return paths
