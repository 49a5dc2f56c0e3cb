"""Pull dataset metadata from an OAI-PMH endpoint into DatasetRecords.

Only the small slice of OAI-PMH we need: ListRecords with oai_dc metadata
and resumption tokens.  Malformed records are skipped with a log line, never
aborting the stream; a dead network raises HarvestError carrying the last
good resumption token so a harvest can be resumed.
"""
from __future__ import annotations

import logging
import re
import time
import xml.etree.ElementTree as ET
from typing import Iterator, Optional

import requests

from .records import DatasetRecord

log = logging.getLogger(__name__)

OAI_NS = "http://www.openarchives.org/OAI/2.0/"
DC_NS = "http://purl.org/dc/elements/1.1/"

_YEAR_RE = re.compile(r"(?<!\d)(19\d{2}|20\d{2})(?!\d)")

# dc:type keywords, checked in order against the lowercased value
_TYPE_MAP = (
    ("dataset", "dataset"),
    ("research data", "dataset"),
    ("collection", "collection"),
    ("video", "video"),
    ("audiovisual", "video"),
    ("interactive", "interactive"),
    ("text", "text"),
    ("article", "text"),
    ("publication", "text"),
)

_LANG_MAP = {"eng": "en", "ger": "de", "deu": "de", "en": "en", "de": "de"}


class HarvestError(RuntimeError):
    """Harvest aborted; resume with the stored resumption token."""

    def __init__(self, message: str, resumption_token: Optional[str] = None):
        super().__init__(message)
        self.resumption_token = resumption_token


def map_resource_type(values: list[str]) -> str:
    for value in values:
        low = value.lower()
        for needle, mapped in _TYPE_MAP:
            if needle in low:
                return mapped
    return "other"


def map_language(values: list[str]) -> Optional[str]:
    for value in values:
        code = _LANG_MAP.get(value.strip().lower())
        if code:
            return code
    return None


def extract_year(date_values: list[str], title: str) -> Optional[int]:
    """Year from Dublin Core dates, else the last plausible year in the title."""
    for value in date_values:
        m = _YEAR_RE.search(value)
        if m:
            return int(m.group(1))
    matches = _YEAR_RE.findall(title)
    return int(matches[-1]) if matches else None


def _dc_values(metadata: ET.Element, field: str) -> list[str]:
    return [
        el.text.strip()
        for el in metadata.iter(f"{{{DC_NS}}}{field}")
        if el.text and el.text.strip()
    ]


def parse_oai_record(record: ET.Element) -> Optional[DatasetRecord]:
    """One <record> element to a DatasetRecord; None for deleted/unusable ones."""
    header = record.find(f"{{{OAI_NS}}}header")
    if header is None:
        raise ValueError("record without header")
    if header.get("status") == "deleted":
        return None
    oai_id_el = header.find(f"{{{OAI_NS}}}identifier")
    oai_id = oai_id_el.text.strip() if oai_id_el is not None and oai_id_el.text else ""
    metadata = record.find(f"{{{OAI_NS}}}metadata")
    if metadata is None:
        raise ValueError(f"record {oai_id or '<no id>'} without metadata")
    titles = _dc_values(metadata, "title")
    if not titles:
        raise ValueError(f"record {oai_id or '<no id>'} without title")
    record_id = oai_id
    for ident in _dc_values(metadata, "identifier"):
        if ident.startswith("10.") or "doi.org/" in ident:
            record_id = ident.split("doi.org/")[-1]
            break
    if not record_id:
        raise ValueError("record without any identifier")
    title = titles[0]
    return DatasetRecord(
        id=record_id,
        title=title,
        year=extract_year(_dc_values(metadata, "date"), title),
        language=map_language(_dc_values(metadata, "language")),
        resource_type=map_resource_type(_dc_values(metadata, "type")),
        author="; ".join(_dc_values(metadata, "creator")) or None,
    )


def _fetch(session: requests.Session, endpoint: str, params: dict, retries: int,
           wait: float, token: Optional[str]) -> ET.Element:
    last_exc: Exception | None = None
    for attempt in range(retries):
        try:
            resp = session.get(endpoint, params=params, timeout=60)
            resp.raise_for_status()
            return ET.fromstring(resp.content)
        except (requests.RequestException, ET.ParseError) as exc:
            last_exc = exc
            if attempt + 1 < retries:
                log.warning("harvest request failed (%s), retrying in %.1fs", exc, wait)
                time.sleep(wait)
    raise HarvestError(f"harvest failed after {retries} attempts: {last_exc}", token)


def harvest_oai(
    endpoint: str,
    set_spec: Optional[str] = None,
    from_date: Optional[str] = None,
    resumption_token: Optional[str] = None,
    session: Optional[requests.Session] = None,
    retries: int = 3,
    retry_wait: float = 1.0,
) -> Iterator[DatasetRecord]:
    """Stream all records from ``endpoint`` via ListRecords/oai_dc."""
    own_session = session is None
    sess = session or requests.Session()
    token = resumption_token
    try:
        while True:
            if token:
                params = {"verb": "ListRecords", "resumptionToken": token}
            else:
                params = {"verb": "ListRecords", "metadataPrefix": "oai_dc"}
                if set_spec:
                    params["set"] = set_spec
                if from_date:
                    params["from"] = from_date
            root = _fetch(sess, endpoint, params, retries, retry_wait, token)
            error = root.find(f"{{{OAI_NS}}}error")
            if error is not None:
                code = error.get("code", "")
                if code == "noRecordsMatch":
                    return
                raise HarvestError(f"OAI error {code}: {error.text or ''}".strip(), token)
            list_el = root.find(f"{{{OAI_NS}}}ListRecords")
            if list_el is None:
                raise HarvestError("response without ListRecords element", token)
            for rec_el in list_el.findall(f"{{{OAI_NS}}}record"):
                try:
                    record = parse_oai_record(rec_el)
                except ValueError as exc:
                    log.warning("skipping malformed record: %s", exc)
                    continue
                if record is not None:
                    yield record
            token_el = list_el.find(f"{{{OAI_NS}}}resumptionToken")
            next_token = token_el.text.strip() if token_el is not None and token_el.text else ""
            if not next_token:
                return
            token = next_token
    finally:
        if own_session:
            sess.close()
