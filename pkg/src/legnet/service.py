"""Session-holding HTTP facade over the library.

JSON over HTTP/1.1; every error is ``{"code", "message", "detail"}``.
Mutations on a session are serialized by a per-session lock; responses are
built from plain dicts in a fixed key order, so identical state and request
always produce identical bytes.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .errors import (
    ImpossibleEvidence,
    InvalidConstraint,
    InvalidQuery,
    LegNetError,
    FilterExhausted,
    FilterRequired,
    UnknownEvent,
    UnknownLeg,
    UnknownSession,
    UnknownUpdate,
)
from .explain import explain, explanation_to_dict, parse_query, render, set_causal_links
from .kb import make_archive, new_session, session_from_archive
from .table import prob
from .update import EvidenceSpec, Session, apply_evidence, initialize

_STATUS = {
    UnknownSession: 404,
    UnknownLeg: 404,
    UnknownUpdate: 404,
    UnknownEvent: 404,
    ImpossibleEvidence: 409,
    FilterRequired: 422,
    FilterExhausted: 422,
}


def _status_for(exc: LegNetError) -> int:
    for cls, status in _STATUS.items():
        if isinstance(exc, cls):
            return status
    return 400


@dataclass
class _Entry:
    session: Session
    kb_doc: dict
    lock: threading.RLock = field(default_factory=threading.RLock)


def _leg_summary(session: Session, leg_id: str) -> dict:
    leg = session.net.leg(leg_id)
    return {
        "id": leg.id,
        "events": [
            {"name": name, "probability": prob(leg.cmd, {name: True})}
            for name in leg.cmd.events
        ],
    }


def _update_summary(session: Session, record) -> dict:
    changes = {}
    for touched in record.touched:
        changes[touched.leg_id] = {
            name: {
                "before": prob(touched.before, {name: True}),
                "after": prob(touched.after, {name: True}),
            }
            for name in touched.before.events
        }
    return {
        "index": record.index,
        "source_leg": record.evidence.source_leg,
        "constraints": dict(record.evidence.constraints),
        "touched": list(record.propagation_order),
        "propagation_order": list(record.propagation_order),
        "marginal_changes": changes,
    }


def create_app(kb_document: dict | None = None, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="legnet", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    store: dict[str, _Entry] = {}
    store_lock = threading.Lock()

    def entry_for(session_id: str) -> _Entry:
        with store_lock:
            entry = store.get(session_id)
        if entry is None:
            raise UnknownSession(f"unknown session {session_id!r}", {"session": session_id})
        return entry

    @app.exception_handler(LegNetError)
    def _handle_error(request: Request, exc: LegNetError) -> JSONResponse:
        return JSONResponse(
            status_code=_status_for(exc),
            content={"code": exc.code, "message": str(exc), "detail": exc.detail},
        )

    def _register(kb_doc: dict) -> str:
        session = new_session(kb_doc)
        session_id = uuid.uuid4().hex
        with store_lock:
            store[session_id] = _Entry(session=session, kb_doc=dict(kb_doc))
        return session_id

    if kb_document is not None:
        app.state.default_session = _register(kb_document)

    @app.get("/api/sessions")
    def list_sessions() -> dict:
        with store_lock:
            ids = list(store)
        return {"sessions": ids}

    @app.post("/api/sessions", status_code=201)
    async def create_session(request: Request) -> dict:
        body = await request.json()
        if not isinstance(body, dict):
            raise InvalidQuery("session body must be a knowledge-base object")
        session_id = _register(body)
        entry = entry_for(session_id)
        return {"id": session_id, "legs": [leg.id for leg in entry.session.net.legs]}

    @app.get("/api/sessions/{session_id}/net")
    def get_net(session_id: str) -> dict:
        entry = entry_for(session_id)
        with entry.lock:
            net = entry.session.net
            links = entry.session.causal.links if entry.session.causal else ()
            return {
                "legs": [{"id": leg.id, "events": list(leg.cmd.events)} for leg in net.legs],
                "events": list(net.vocabulary),
                "edges": [
                    {"a": a, "b": b, "shared": list(shared)} for a, b, shared in net.edges()
                ],
                "causal_links": [{"from": a, "to": b} for a, b in links],
                "updates": len(entry.session.history),
            }

    @app.get("/api/sessions/{session_id}/legs/{leg_id}")
    def get_leg(session_id: str, leg_id: str) -> dict:
        entry = entry_for(session_id)
        with entry.lock:
            return _leg_summary(entry.session, leg_id)

    @app.post("/api/sessions/{session_id}/evidence")
    async def post_evidence(session_id: str, request: Request) -> dict:
        body = await request.json()
        if not isinstance(body, dict) or "leg" not in body or "constraints" not in body:
            raise InvalidQuery("evidence body needs 'leg' and 'constraints'")
        raw = body["constraints"]
        if not isinstance(raw, dict) or not raw:
            raise InvalidConstraint("'constraints' must be a non-empty object")
        constraints = {}
        for name, value in raw.items():
            try:
                constraints[str(name)] = float(value)
            except (TypeError, ValueError):
                raise InvalidConstraint(f"constraint for {name!r} is not a number") from None
        entry = entry_for(session_id)
        with entry.lock:
            record = apply_evidence(
                entry.session, EvidenceSpec(str(body["leg"]), constraints)
            )
            return _update_summary(entry.session, record)

    @app.post("/api/sessions/{session_id}/explain")
    async def post_explain(session_id: str, request: Request) -> dict:
        body = await request.json()
        if not isinstance(body, dict):
            raise InvalidQuery("explanation body must be an object")
        query = parse_query(body)
        entry = entry_for(session_id)
        with entry.lock:
            explanation = explain(entry.session, query)
            return {
                "explanation": explanation_to_dict(explanation),
                "rendered_text": render(explanation, query.detail),
            }

    @app.get("/api/sessions/{session_id}/history")
    def get_history(session_id: str) -> dict:
        entry = entry_for(session_id)
        with entry.lock:
            return {
                "updates": [
                    _update_summary(entry.session, record)
                    for record in entry.session.history
                ]
            }

    @app.put("/api/sessions/{session_id}/structure")
    async def put_structure(session_id: str, request: Request) -> dict:
        body = await request.json()
        if not isinstance(body, dict) or "links" not in body or not isinstance(body["links"], list):
            raise InvalidQuery("structure body needs a 'links' list")
        entry = entry_for(session_id)
        with entry.lock:
            graph = set_causal_links(entry.session, body["links"])
            return {"links": [{"from": a, "to": b} for a, b in graph.links]}

    @app.post("/api/sessions/{session_id}/initialize")
    def post_initialize(session_id: str) -> dict:
        entry = entry_for(session_id)
        with entry.lock:
            initialize(entry.session)
            return {"status": "initialized", "updates": 0}

    @app.get("/api/sessions/{session_id}/archive")
    def get_archive(session_id: str) -> dict:
        entry = entry_for(session_id)
        with entry.lock:
            return make_archive(entry.kb_doc, entry.session)

    @app.put("/api/sessions/{session_id}/archive")
    async def put_archive(session_id: str, request: Request) -> dict:
        body = await request.json()
        session, kb_doc = session_from_archive(body)
        with store_lock:
            store[session_id] = _Entry(session=session, kb_doc=kb_doc)
        return {"id": session_id, "updates": len(session.history)}

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
