"""HTTP API that drives the review UI.

All mutations funnel through the session store (decisions) or the blacklist
file (dictionary curation), and are durable on disk before a response goes
out.  The UI, when built, is served as static files under /ui; nothing in
the API depends on it.
"""
from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .dictionary import apply_blacklist, load_dictionary, write_dictionary
from .pipeline import PipelineConfig
from .review import ReviewSession, SessionStore, export_links, render_links_tsv
from .wordlists import add_blacklist_surface, read_blacklist


class DecisionRequest(BaseModel):
    choice: str
    decided_by: str = ""


class BlacklistRequest(BaseModel):
    surface: str


def _session_summary(session: ReviewSession) -> dict:
    return {
        "session_id": session.session_id,
        "paper_id": session.paper_id,
        "workflow": session.workflow,
        "status": session.status,
        "n_items": len(session.items),
        "n_decided": sum(1 for it in session.items if it.decision is not None),
    }


def _item_payload(session: ReviewSession) -> list[dict]:
    return [
        {
            "key": it.key,
            "candidates": [
                {"record_id": c.record_id, "title": c.title, "score": c.score}
                for c in it.candidates
            ],
            "mention_keys": list(it.mention_keys),
            "context": list(it.context),
            "decision": it.decision,
        }
        for it in session.items
    ]


def create_app(config: PipelineConfig | None = None, store: SessionStore | None = None) -> FastAPI:
    config = config or PipelineConfig()
    store = store or SessionStore(config.sessions_dir)
    app = FastAPI(title="dataref review service", docs_url=None, redoc_url=None)

    def get_session(session_id: str) -> ReviewSession:
        try:
            return store.load(session_id)
        except (FileNotFoundError, ValueError) as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/sessions")
    def list_sessions() -> list[dict]:
        return [_session_summary(store.load(sid)) for sid in store.list_ids()]

    @app.get("/sessions/{session_id}")
    def session_detail(session_id: str) -> dict:
        session = get_session(session_id)
        payload = _session_summary(session)
        payload["items"] = _item_payload(session)
        return payload

    @app.get("/sessions/{session_id}/items")
    def session_items(session_id: str) -> list[dict]:
        return _item_payload(get_session(session_id))

    @app.post("/sessions/{session_id}/items/{key:path}/decision")
    def post_decision(session_id: str, key: str, body: DecisionRequest) -> dict:
        get_session(session_id)
        try:
            decision = store.record_decision(session_id, key, body.choice, body.decided_by)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        session = store.load(session_id)
        return {
            "key": decision.key,
            "choice": decision.choice,
            "decided_by": decision.decided_by,
            "timestamp": decision.timestamp,
            "session_status": session.status,
            "n_decided": sum(1 for it in session.items if it.decision is not None),
        }

    @app.post("/sessions/{session_id}/export")
    def post_export(session_id: str) -> dict:
        session = get_session(session_id)
        try:
            export = export_links(session)
        except ValueError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        tsv = render_links_tsv(export)
        exports_dir = Path(config.exports_dir)
        exports_dir.mkdir(parents=True, exist_ok=True)
        out_path = exports_dir / f"{session_id}.tsv"
        out_path.write_text(tsv, encoding="utf-8")
        return {
            "session_id": session_id,
            "links": [
                {
                    "paper_id": r.paper_id,
                    "start": r.start,
                    "end": r.end,
                    "feature": r.feature,
                    "record_id": r.record_id,
                    "doi": r.doi,
                }
                for r in export.links
            ],
            "gaps": [{"key": key, "status": status} for key, status in export.gaps],
            "tsv": tsv,
            "path": str(out_path),
        }

    @app.get("/blacklist")
    def get_blacklist() -> dict:
        return {"surfaces": sorted(read_blacklist(config.effective_blacklist_path()))}

    @app.post("/blacklist")
    def post_blacklist(body: BlacklistRequest) -> dict:
        surface = body.surface.strip()
        if not surface:
            raise HTTPException(status_code=400, detail="empty surface")
        added = add_blacklist_surface(config.effective_blacklist_path(), surface)
        surfaces = read_blacklist(config.effective_blacklist_path())
        dict_path = Path(config.dictionary_path)
        if dict_path.is_file():
            entries = apply_blacklist(load_dictionary(dict_path), set(surfaces))
            write_dictionary(entries, dict_path)
        return {"surface": surface, "added": added, "surfaces": sorted(surfaces)}

    @app.get("/dictionary")
    def get_dictionary(kind: str | None = None) -> list[dict]:
        dict_path = Path(config.dictionary_path)
        entries = load_dictionary(dict_path) if dict_path.is_file() else []
        return [
            {
                "surface": e.surface,
                "kind": e.kind,
                "blacklisted": e.blacklisted,
                "n_source_titles": len(e.source_title_ids),
            }
            for e in entries
            if kind is None or e.kind == kind
        ]

    ui_dir = Path(config.ui_dir) if config.ui_dir else None
    if ui_dir and ui_dir.is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

        @app.get("/")
        def root() -> RedirectResponse:
            return RedirectResponse(url="/ui/")

    else:

        @app.get("/")
        def root() -> dict:
            return {"service": "dataref review service", "ui": False}

    return app
