"""HTTP facade for live sessions.

Endpoints (JSON in/out, errors as {code, message, details}):

    POST /sessions                create from a preset or an explicit config
    GET  /sessions/{id}           public view (proposals, buffer, status)
    POST /sessions/{id}/feedback  submit one round, get the next proposal
    GET  /sessions/{id}/posterior full per-action mean/std grid
    GET  /sessions/{id}/history   accepted feedback events
    POST /sessions/{id}/close     stop the session
    GET  /sessions/{id}/export    canonical snapshot
    POST /sessions/import         restore a snapshot
    GET  /presets                 available named configurations
"""

from __future__ import annotations

import os
from typing import Literal, Optional, Union

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import presets as presets_mod
from .engine import EngineConfig
from .errors import (
    ConfigurationError,
    CosparError,
    NumericalError,
    ProtocolError,
    SnapshotError,
)
from .grid import ActionSpace
from .kernels import KernelParams
from .sessions import (
    CLOSED,
    SessionStore,
    StaleIterationError,
    apply_feedback,
    new_session,
    posterior_view,
    session_view,
)

DEFAULT_SNAPSHOT_DIR = "cospar-sessions"


class DimensionModel(BaseModel):
    name: str
    min: float
    max: float
    count: int


class KernelModel(BaseModel):
    lengthscales: list[float]
    signal_variance: float
    noise_variance: float
    preference_noise: float


class ConfigModel(BaseModel):
    actions_per_iteration: int = 1
    buffer_size: int = 1
    coactive_weight: float = 1.0
    kernel: KernelModel
    coactive_steps: list[tuple[float, float]]


class CreateSessionRequest(BaseModel):
    preset: Optional[str] = None
    label: str = ""
    seed: Optional[int] = None
    config: Optional[ConfigModel] = None
    space: Optional[list[DimensionModel]] = None


class AgainstRef(BaseModel):
    kind: Literal["current", "buffer"]
    index: int


class PreferenceItem(BaseModel):
    current_index: int
    against: AgainstRef
    verdict: Literal["prefer_current", "prefer_other", "no_preference"]


class CoactiveItem(BaseModel):
    current_index: int
    dimension: Union[int, str]
    level: int


class FeedbackRequest(BaseModel):
    iteration: int
    preferences: list[PreferenceItem] = Field(default_factory=list)
    coactive: list[CoactiveItem] = Field(default_factory=list)
    note: Optional[str] = None


def _error(status: int, code: str, message: str, details=None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "details": details or {}},
    )


def create_app(
    snapshot_dir=None, cors_origins=("*",), presets_file=None
) -> FastAPI:
    snapshot_dir = snapshot_dir or os.environ.get(
        "COSPAR_SNAPSHOT_DIR", DEFAULT_SNAPSHOT_DIR
    )
    presets_file = presets_file or os.environ.get("COSPAR_PRESETS_FILE")
    if presets_file:
        presets_mod.load_custom_presets(presets_file)
    store = SessionStore(snapshot_dir)
    app = FastAPI(title="cospar session service")
    app.state.store = store
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        details = [
            {"loc": [str(x) for x in err.get("loc", ())], "msg": str(err.get("msg"))}
            for err in exc.errors()
        ]
        return _error(422, "validation_error", "request failed validation", details)

    @app.exception_handler(StaleIterationError)
    async def _stale_handler(request: Request, exc: StaleIterationError):
        return _error(409, "stale_iteration", str(exc))

    @app.exception_handler(SnapshotError)
    async def _snapshot_handler(request: Request, exc: SnapshotError):
        return _error(400, "unsupported_snapshot", str(exc))

    @app.exception_handler(ProtocolError)
    async def _protocol_handler(request: Request, exc: ProtocolError):
        return _error(422, "protocol_error", str(exc))

    @app.exception_handler(ConfigurationError)
    async def _config_handler(request: Request, exc: ConfigurationError):
        return _error(422, "invalid_config", str(exc))

    @app.exception_handler(NumericalError)
    async def _numerical_handler(request: Request, exc: NumericalError):
        return _error(500, "numerical_error", str(exc))

    @app.exception_handler(CosparError)
    async def _fallback_handler(request: Request, exc: CosparError):
        return _error(400, "error", str(exc))

    def _get_session(session_id: str):
        try:
            return store.get(session_id)
        except KeyError:
            return None

    @app.get("/presets")
    def list_presets():
        return {"presets": presets_mod.describe_presets()}

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionRequest):
        config = space = None
        if body.config is not None and body.space is not None:
            config = EngineConfig(
                actions_per_iteration=body.config.actions_per_iteration,
                buffer_size=body.config.buffer_size,
                coactive_weight=body.config.coactive_weight,
                kernel=KernelParams.from_dict(body.config.kernel.model_dump()),
                coactive_steps=tuple(body.config.coactive_steps),
            )
            space = ActionSpace.from_dict_list(
                [d.model_dump() for d in body.space]
            )
        session = new_session(
            preset=body.preset,
            config=config,
            space=space,
            label=body.label,
            seed=body.seed,
        )
        store.add(session)
        return session_view(session)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id!r}")
        return session_view(session)

    @app.post("/sessions/{session_id}/feedback")
    def submit_feedback(session_id: str, body: FeedbackRequest):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id!r}")
        with store.lock(session_id):
            try:
                event = apply_feedback(session, body.model_dump())
            except StaleIterationError:
                raise
            except Exception:
                # a half-applied round must not outlive the request: restore
                # the last acknowledged snapshot before propagating
                store.reload(session_id)
                raise
            store.save(session)  # durable before the response leaves
        return {
            "session": session_view(session),
            "recorded": event["recorded"],
            "dropped_coactive": event["dropped_coactive"],
        }

    @app.get("/sessions/{session_id}/posterior")
    def get_posterior(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id!r}")
        return posterior_view(session)

    @app.get("/sessions/{session_id}/history")
    def get_history(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id!r}")
        return {"id": session.id, "events": session.history}

    @app.post("/sessions/{session_id}/close")
    def close_session(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id!r}")
        with store.lock(session_id):
            session.status = CLOSED
            store.save(session)
        return session_view(session)

    @app.get("/sessions/{session_id}/export")
    def export_session(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id!r}")
        return session.snapshot()

    @app.post("/sessions/import", status_code=201)
    def import_session(body: dict):
        session = store.import_snapshot(body)
        return session_view(session)

    return app
