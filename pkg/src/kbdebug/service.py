"""HTTP session service: JSON over a small REST surface.

Endpoints: POST /sessions, GET /sessions/{id}, POST /sessions/{id}/answer,
DELETE /sessions/{id}, GET /healthz.  Formulas travel in the ASCII grammar,
diagnoses as id arrays.  Leading-diagnosis computation runs off the request
path in a per-session worker thread; snapshots read immutable copies, and
mutations on one session serialize through its lock.
"""

from __future__ import annotations

import itertools
import math
import threading
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from typing import Any, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .dpi import DpiError, is_admissible, parse_dpi, solution_kb
from .formulas import render
from .interactive import (
    SessionError,
    SessionParams,
    SessionState,
    best_candidate,
    compute_leading,
    prepare_query,
    record_answer,
    session_done,
)
from .probability import (
    ProbabilityError,
    default_adaptation_factor,
    formula_fault_probs,
    parse_element_probs,
    raw_formula_fault_probs,
    uniform_formula_probs,
)
from .query import QueryError

AWAITING = "awaiting_answer"
COMPUTING = "computing"
DONE = "done"
FAILED = "failed"


class SessionRequest(BaseModel):
    dpi: str
    element_probs: Optional[str] = None
    uniform: bool = False
    mode: str = "static"
    sigma: float = 0.0
    nmin: int = 2
    nmax: Optional[int] = None
    timeout_ms: int = 1000
    pool_size: int = 1
    measure: str = "ENT"
    adaptation: Optional[float] = None


class AnswerRequest(BaseModel):
    answer: Any  # true | false | "skip"


@dataclass
class _Record:
    state: SessionState
    lock: threading.Lock = field(default_factory=threading.Lock)
    status: str = COMPUTING
    error: Optional[str] = None
    snapshot: dict = field(default_factory=dict)
    solution: Optional[list[str]] = None
    solution_diagnosis: Optional[list[int]] = None


class SessionManager:
    def __init__(self):
        self._records: dict[str, _Record] = {}
        self._ids = itertools.count(1)
        self._registry_lock = threading.Lock()

    def create(self, req: SessionRequest) -> str:
        dpi = parse_dpi(req.dpi)
        if not is_admissible(dpi):
            raise DpiError("instance admits no diagnosis (background or positive tests violate a constraint)")
        if req.uniform or req.element_probs is None:
            probs = uniform_formula_probs(dpi.kb)
        else:
            elem = parse_element_probs(req.element_probs)
            raw = raw_formula_fault_probs(dpi.kb, elem)
            c = req.adaptation if req.adaptation is not None else default_adaptation_factor(raw)
            probs = formula_fault_probs(dpi.kb, elem, c)
        params = SessionParams(
            mode=req.mode,
            sigma=req.sigma,
            n_min=req.nmin,
            n_max=req.nmax if req.nmax is not None else math.inf,
            timeout_s=req.timeout_ms / 1000.0,
            pool_size=req.pool_size,
            measure=req.measure.upper(),
        )
        state = SessionState(dpi=dpi, probs=probs, params=params)
        with self._registry_lock:
            handle = f"s{next(self._ids)}"
            record = _Record(state=state)
            self._records[handle] = record
        record.snapshot = self._snapshot(record)
        self._spawn_compute(handle, record)
        return handle

    def _spawn_compute(self, handle: str, record: _Record) -> None:
        thread = threading.Thread(target=self._advance, args=(record,), daemon=True)
        thread.start()

    def _advance(self, record: _Record) -> None:
        with record.lock:
            try:
                state = record.state
                compute_leading(state)
                if session_done(state):
                    d_max, _ = best_candidate(state)
                    record.solution = [
                        render(f)
                        for f in solution_kb(
                            state.dpi, d_max, tuple(state.new_positive), state.params.mode
                        )
                    ]
                    record.solution_diagnosis = sorted(d_max)
                    record.status = DONE
                else:
                    prepare_query(state)
                    record.status = AWAITING
                record.snapshot = self._snapshot(record)
            except Exception as exc:  # surfaced via the snapshot, session is dead
                record.status = FAILED
                record.error = str(exc)
                record.snapshot = self._snapshot(record)

    def _snapshot(self, record: _Record) -> dict:
        state = record.state
        snap: dict = {
            "status": record.status,
            "mode": state.params.mode,
            "sigma": state.params.sigma,
            "params": {
                "n_min": state.params.n_min,
                "n_max": None if math.isinf(state.params.n_max) else state.params.n_max,
                "timeout_ms": int(state.params.timeout_s * 1000),
                "pool_size": None if math.isinf(state.params.pool_size) else state.params.pool_size,
                "measure": state.params.measure,
            },
            "history": [
                {"query": sorted(render(f) for f in q), "answer": a} for q, a in state.qa
            ],
            "error": record.error,
        }
        # an answer filters the leading set before the next compute publishes a
        # fresh posterior; renormalize so every snapshot shows a distribution
        weights = {d: state.distribution.get(d, 0.0) for d in state.leading}
        total = sum(weights.values())
        snap["leading"] = [
            {"ids": sorted(d), "probability": w / total if total > 0 else 0.0}
            for d, w in weights.items()
        ]
        if record.status == AWAITING and state.pending is not None:
            query, pt = state.pending
            snap["pending_query"] = [render(f) for f in query]
            snap["qpartition_sizes"] = {
                "dx": len(pt.dx),
                "dnx": len(pt.dnx),
                "dz": len(pt.dz),
            }
        else:
            snap["pending_query"] = None
            snap["qpartition_sizes"] = None
        snap["solution"] = record.solution
        snap["solution_diagnosis"] = record.solution_diagnosis
        return snap

    def get(self, handle: str) -> _Record:
        record = self._records.get(handle)
        if record is None:
            raise KeyError(handle)
        return record

    def snapshot(self, handle: str) -> dict:
        # reads the last published snapshot; never blocks on a computing session
        record = self.get(handle)
        return dict(record.snapshot)

    def answer(self, handle: str, value) -> dict:
        record = self.get(handle)
        with record.lock:
            if record.status != AWAITING:
                raise SessionError(f"session is {record.status}, not awaiting an answer")
            state = record.state
            if value == "skip":
                prepare_query(state)
                record.snapshot = self._snapshot(record)
                return dict(record.snapshot)
            if not isinstance(value, bool):
                raise SessionError("answer must be true, false or \"skip\"")
            query, pt = state.pending
            record_answer(state, query, pt, value)
            record.status = COMPUTING
            record.snapshot = self._snapshot(record)
        self._spawn_compute(handle, record)
        return self.snapshot(handle)

    def delete(self, handle: str) -> None:
        with self._registry_lock:
            if handle not in self._records:
                raise KeyError(handle)
            del self._records[handle]

    def dump(self, path: str) -> None:
        """Write every session's last snapshot as one JSON document."""
        import json

        with self._registry_lock:
            payload = {handle: record.snapshot for handle, record in self._records.items()}
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)


def create_app(
    manager: Optional[SessionManager] = None,
    snapshot_path: Optional[str] = None,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    """App factory; ``snapshot_path`` enables the dump-on-shutdown option and
    ``ui_dir`` serves a built frontend under /ui."""
    mgr = manager or SessionManager()

    lifespan = None
    if snapshot_path:
        @asynccontextmanager
        async def lifespan(_app):
            yield
            mgr.dump(snapshot_path)

    app = FastAPI(title="kbdebug", lifespan=lifespan)
    app.state.manager = mgr

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session(req: SessionRequest):
        try:
            handle = mgr.create(req)
        except (DpiError, ProbabilityError, SessionError, QueryError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"id": handle, "status": COMPUTING}

    @app.get("/sessions/{handle}")
    def get_session(handle: str):
        try:
            snap = mgr.snapshot(handle)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no session {handle!r}")
        snap["id"] = handle
        return snap

    @app.post("/sessions/{handle}/answer")
    def answer_session(handle: str, req: AnswerRequest):
        try:
            snap = mgr.answer(handle, req.answer)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no session {handle!r}")
        except SessionError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        snap["id"] = handle
        return snap

    @app.delete("/sessions/{handle}", status_code=204)
    def delete_session(handle: str):
        try:
            mgr.delete(handle)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"no session {handle!r}")

    return app


app = create_app()
