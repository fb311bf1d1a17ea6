"""HTTP wire interface around session stores.

Each endpoint translates its typed body into the equivalent REPL command and
runs it through the session machinery, so the wire and the REPL produce the
same state transitions by construction. Reports come back as the same
line-oriented text the REPL prints.
"""
from __future__ import annotations

import threading
import uuid
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .errors import EngineError
from .session import CommandResult, Session, SessionConfig


class SessionStore:
    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._mutex = threading.Lock()

    def create(self, theory: str, config: SessionConfig, name: Optional[str] = None) -> str:
        session = Session(theory, config, name=name)
        session_id = uuid.uuid4().hex[:12]
        with self._mutex:
            self._sessions[session_id] = session
            self._locks[session_id] = threading.Lock()
        return session_id

    def run(self, session_id: str, command: str) -> CommandResult:
        with self._mutex:
            session = self._sessions.get(session_id)
            lock = self._locks.get(session_id)
        if session is None or lock is None:
            raise KeyError(session_id)
        # One serialized command stream per session; reads share the model
        # snapshot safely because snapshots are immutable.
        with lock:
            return session.run(command)


class CreateSessionRequest(BaseModel):
    theory: str
    name: Optional[str] = None
    depth: int = 2
    mode: str = "paper"
    batch_policy: str = Field(default="leave", alias="batchPolicy")

    model_config = {"populate_by_name": True}


class CreateSessionResponse(BaseModel):
    session_id: str
    report: str


class CommandRequest(BaseModel):
    line: str


class EvalRequest(BaseModel):
    formula: str
    world: Optional[str] = None
    time: Optional[str] = None
    mode: Optional[str] = None


class ForceRequest(BaseModel):
    atom: str
    value: str


class AddRequest(BaseModel):
    sort: str
    name: str


class EqRequest(BaseModel):
    left: str
    right: str
    force: bool = False


class PendingInfo(BaseModel):
    atom: str
    formula: str
    choices: list[str]


class CommandResponse(BaseModel):
    output: str
    pending: Optional[PendingInfo] = None
    data: dict = {}


def create_app(store: Optional[SessionStore] = None) -> FastAPI:
    app = FastAPI(title="gdiagram", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions = store or SessionStore()
    app.state.store = sessions

    def run(session_id: str, line: str) -> CommandResponse:
        try:
            result = sessions.run(session_id, line)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown session: {session_id}")
        except EngineError as err:
            raise HTTPException(status_code=400, detail=str(err))
        pending = PendingInfo(**result.pending.as_dict()) if result.pending else None
        return CommandResponse(output=result.output, pending=pending, data=result.data)

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", response_model=CreateSessionResponse)
    def create_session(body: CreateSessionRequest) -> CreateSessionResponse:
        config = SessionConfig(depth=body.depth, mode=body.mode, batch_policy=body.batch_policy)
        try:
            session_id = sessions.create(body.theory, config, name=body.name)
        except EngineError as err:
            raise HTTPException(status_code=400, detail=str(err))
        report = sessions.run(session_id, "model").output
        return CreateSessionResponse(session_id=session_id, report=report)

    @app.get("/sessions/{session_id}/model", response_model=CommandResponse)
    def get_model(session_id: str) -> CommandResponse:
        return run(session_id, "model")

    @app.post("/sessions/{session_id}/command", response_model=CommandResponse)
    def post_command(session_id: str, body: CommandRequest) -> CommandResponse:
        return run(session_id, body.line)

    @app.post("/sessions/{session_id}/eval", response_model=CommandResponse)
    def post_eval(session_id: str, body: EvalRequest) -> CommandResponse:
        line = f"eval {body.formula}"
        if body.world is not None and body.time is not None:
            line += f" at {body.world} {body.time}"
        if body.mode is not None:
            line += f" mode {body.mode}"
        return run(session_id, line)

    @app.post("/sessions/{session_id}/force", response_model=CommandResponse)
    def post_force(session_id: str, body: ForceRequest) -> CommandResponse:
        return run(session_id, f"force {body.atom} {body.value}")

    @app.post("/sessions/{session_id}/add", response_model=CommandResponse)
    def post_add(session_id: str, body: AddRequest) -> CommandResponse:
        return run(session_id, f"add {body.sort} {body.name}")

    @app.post("/sessions/{session_id}/eq", response_model=CommandResponse)
    def post_eq(session_id: str, body: EqRequest) -> CommandResponse:
        verb = "eqforce" if body.force else "eqtest"
        return run(session_id, f"{verb} {body.left} {body.right}")

    @app.post("/sessions/{session_id}/undo", response_model=CommandResponse)
    def post_undo(session_id: str) -> CommandResponse:
        return run(session_id, "undo")

    @app.get("/sessions/{session_id}/history", response_model=CommandResponse)
    def get_history(session_id: str) -> CommandResponse:
        return run(session_id, "history")

    @app.get("/sessions/{session_id}/worlds", response_model=CommandResponse)
    def get_worlds(session_id: str) -> CommandResponse:
        return run(session_id, "worlds")

    @app.get("/sessions/{session_id}/truthset", response_model=CommandResponse)
    def get_truthset(
        session_id: str,
        f: str,
        time: Optional[str] = None,
        mode: Optional[str] = None,
    ) -> CommandResponse:
        line = f"truthset {f}"
        if time is not None:
            line += f" at {time}"
        if mode is not None:
            line += f" mode {mode}"
        return run(session_id, line)

    return app


app = create_app()
