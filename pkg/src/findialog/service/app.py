"""HTTP facade over the curation store for the expert review workflow.

Mutations flow through the single-writer question store with optimistic
revision checks; the audit line hits the round's verdicts log before the
HTTP response is sent. When the run is not awaiting review the service
serves read-only views and rejects mutations with 423.
"""

from __future__ import annotations

import socket
import threading
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..augmentation.rounds import complete_review, load_batch
from ..augmentation.state import StateDir
from ..curation.review import QuestionStore
from ..curation.types import QuestionRecord, ReviewBatch, Verdict
from ..errors import (
    EmptyText,
    InvalidTransition,
    PipelineError,
    PortInUse,
    RevisionConflict,
    StateLocked,
    UnknownQuestion,
)

_STATUS_BY_CODE = {
    "unknown_question": ("not_found", 404),
    "revision_conflict": ("conflict", 409),
    "invalid_transition": ("invalid", 422),
    "empty_text": ("invalid", 422),
    "nothing_pending": ("invalid", 422),
    "locked": ("locked", 423),
}

_FALLBACK_PAGE = """<!doctype html>
<html><head><meta charset="utf-8"><title>findialog review</title></head>
<body><h1>findialog review service</h1>
<p>The review UI bundle is not built. Build it with <code>npm run build</code>
in <code>frontend/</code> and pass <code>--ui-dir frontend/dist</code>, or use
the JSON API under <code>/api/</code>.</p></body></html>
"""


class VerdictBody(BaseModel):
    action: str
    reviewer: str
    expected_revision: int
    new_text: Optional[str] = None


class QuestionBody(BaseModel):
    text: str
    reviewer: str
    cluster_hint: Optional[int] = None


def _question_view(q: QuestionRecord, batch: ReviewBatch) -> dict:
    is_rep = any(e.question_id == q.id and e.is_representative for e in batch.entries)
    view = q.to_record()
    view["effective_text"] = q.effective_text
    view["is_representative"] = is_rep
    return view


def create_app(statedir: StateDir, token: Optional[str] = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="findialog review service")
    app.add_middleware(
        CORSMiddleware,
        allow_origin_regex=r"https?://(localhost|127\.0\.0\.1)(:\d+)?",
        allow_methods=["*"],
        allow_headers=["*"],
    )

    state = statedir.load_state()
    round_no = state.round
    batch = load_batch(statedir, round_no) if statedir.batch_path(round_no).exists() \
        else ReviewBatch(id=f"batch-{round_no:04d}", round=round_no)
    store = QuestionStore(statedir.questions_path,
                          audit_path=statedir.verdicts_path(round_no),
                          autosave=True)
    phase_lock = threading.Lock()
    app.state.statedir = statedir
    app.state.run_state = state
    app.state.batch = batch
    app.state.store = store

    def _require_reviewable() -> None:
        if app.state.run_state.phase != "awaiting_review":
            raise StateLocked(f"run is in phase {app.state.run_state.phase}; review closed")

    @app.middleware("http")
    async def check_token(request: Request, call_next):
        if token and request.url.path.startswith("/api/"):
            if request.headers.get("x-review-token") != token:
                return JSONResponse(status_code=401, content={
                    "code": "invalid", "message": "missing or bad X-Review-Token", "detail": {}})
        return await call_next(request)

    @app.exception_handler(PipelineError)
    async def pipeline_error_handler(_request: Request, exc: PipelineError):
        code, status = _STATUS_BY_CODE.get(exc.code, ("invalid", 422))
        return JSONResponse(status_code=status, content={
            "code": code, "message": str(exc), "detail": exc.detail})

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/api/rounds/current")
    def current_round():
        entry_ids = [e.question_id for e in app.state.batch.entries]
        progress = {"pending": 0, "kept": 0, "removed": 0, "edited": 0}
        for qid in entry_ids:
            progress[store.get(qid).status] += 1
        return {
            "round": app.state.run_state.round,
            "phase": app.state.run_state.phase,
            "batch": {
                "id": app.state.batch.id,
                "entries": len(entry_ids),
                "clusters": len({e.cluster for e in app.state.batch.entries}),
            },
            "progress": progress,
        }

    @app.get("/api/clusters")
    def clusters():
        rows = []
        by_cluster: dict[int, list[str]] = {}
        for entry in app.state.batch.entries:
            by_cluster.setdefault(entry.cluster, []).append(entry.question_id)
        for cluster_idx in sorted(by_cluster):
            qids = by_cluster[cluster_idx]
            reviewed = sum(1 for qid in qids if store.get(qid).status != "pending")
            rows.append({
                "cluster": cluster_idx,
                "theme_label": app.state.batch.themes.get(cluster_idx, f"cluster {cluster_idx}"),
                "size": app.state.batch.cluster_sizes.get(cluster_idx, len(qids)),
                "entries": len(qids),
                "reviewed_count": reviewed,
            })
        return rows

    @app.get("/api/clusters/{cluster_id}/questions")
    def cluster_questions(cluster_id: int, status: Optional[str] = None):
        qids = [e.question_id for e in app.state.batch.entries if e.cluster == cluster_id]
        views = [_question_view(store.get(qid), app.state.batch) for qid in qids]
        if status:
            views = [v for v in views if v["status"] == status]
        return views

    @app.post("/api/questions/{question_id}/verdict")
    def post_verdict(question_id: str, body: VerdictBody):
        _require_reviewable()
        try:
            verdict = Verdict(question_id=question_id, action=body.action,
                              reviewer=body.reviewer,
                              expected_revision=body.expected_revision,
                              new_text=body.new_text)
        except ValueError as exc:
            raise InvalidTransition(str(exc)) from exc
        updated = store.apply_verdict(verdict)
        return _question_view(updated, app.state.batch)

    @app.post("/api/questions")
    def post_question(body: QuestionBody):
        _require_reviewable()
        created = store.add_expert_question(body.text, body.cluster_hint, body.reviewer,
                                            app.state.run_state.round)
        return _question_view(created, app.state.batch)

    @app.post("/api/rounds/current/complete-review")
    def post_complete_review():
        with phase_lock:
            _require_reviewable()
            pending_ids = [e.question_id for e in app.state.batch.entries
                           if store.get(e.question_id).status == "pending"]
            if pending_ids:
                return JSONResponse(status_code=422, content={
                    "code": "invalid",
                    "message": f"{len(pending_ids)} batch entries still pending",
                    "detail": {"pending_ids": pending_ids},
                })
            app.state.run_state = complete_review(statedir, app.state.run_state)
            return {"round": app.state.run_state.round, "phase": app.state.run_state.phase}

    ui_path = Path(ui_dir) if ui_dir else None
    if ui_path and ui_path.is_dir():
        app.mount("/", StaticFiles(directory=str(ui_path), html=True), name="ui")
    else:
        @app.get("/", response_class=HTMLResponse)
        def index():
            return _FALLBACK_PAGE

    return app


def serve(state_dir: str | Path, bind_addr: str = "127.0.0.1:8787", *,
          token: Optional[str] = None, ui_dir: str | Path | None = None) -> None:
    """Run the review service (blocking). Raises port_in_use before binding
    uvicorn if the address is taken."""
    import uvicorn

    host, _, port_text = bind_addr.rpartition(":")
    if not host or not port_text.isdigit():
        raise ValueError(f"bad bind address: {bind_addr!r} (want host:port)")
    port = int(port_text)
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise PortInUse(f"cannot bind {bind_addr}: {exc}") from exc
    finally:
        probe.close()

    app = create_app(StateDir(state_dir), token=token, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
