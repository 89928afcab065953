"""Live elicitation sessions: lifecycle, feedback translation, durable snapshots.

Transport-agnostic: the HTTP layer in :mod:`cospar.service` and the CLI replay
command both drive sessions through this module.  Every accepted mutation is
written to disk (atomic replace) before the caller builds a response.
"""

from __future__ import annotations

import datetime as _dt
import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .engine import CoSparEngine, EngineConfig, FeedbackBundle
from .errors import ConfigurationError, ProtocolError, SnapshotError
from .grid import ActionSpace
from .presets import session_preset

SESSION_SCHEMA = "cospar/session@1"

AWAITING_FEEDBACK = "awaiting_feedback"
PROPOSING = "proposing"
CLOSED = "closed"

VERDICTS = ("prefer_current", "prefer_other", "no_preference")


@dataclass
class Session:
    """One user's interaction loop plus its audit trail."""

    id: str
    created_at: str
    label: str
    preset: str | None
    seed: int | None
    engine: CoSparEngine
    status: str = AWAITING_FEEDBACK
    history: list = field(default_factory=list)

    def snapshot(self) -> dict:
        return {
            "schema": SESSION_SCHEMA,
            "id": self.id,
            "created_at": self.created_at,
            "label": self.label,
            "preset": self.preset,
            "seed": self.seed,
            "status": self.status,
            "engine": self.engine.snapshot(),
            "history": self.history,
        }

    @classmethod
    def from_snapshot(cls, snapshot: dict) -> "Session":
        if not isinstance(snapshot, dict):
            raise SnapshotError("session snapshot must be a JSON object")
        schema = snapshot.get("schema")
        if schema != SESSION_SCHEMA:
            raise SnapshotError(
                f"unsupported session snapshot schema {schema!r}; "
                f"expected {SESSION_SCHEMA!r}"
            )
        try:
            engine = CoSparEngine.from_snapshot(snapshot["engine"])
        except KeyError as exc:
            raise SnapshotError(f"session snapshot missing field {exc}") from exc
        status = snapshot.get("status", AWAITING_FEEDBACK)
        if status not in (AWAITING_FEEDBACK, PROPOSING, CLOSED):
            raise SnapshotError(f"unknown session status {status!r}")
        return cls(
            id=str(snapshot["id"]),
            created_at=str(snapshot.get("created_at", "")),
            label=str(snapshot.get("label", "")),
            preset=snapshot.get("preset"),
            seed=snapshot.get("seed"),
            engine=engine,
            status=status,
            history=list(snapshot.get("history", [])),
        )


def _coords_dict(space: ActionSpace, index: int) -> dict:
    point = space.coordinates(index)
    return {dim.name: float(v) for dim, v in zip(space.dims, point)}


def _action_entry(space: ActionSpace, slot: int | None, index: int) -> dict:
    entry = {"index": int(index), "coordinates": _coords_dict(space, index)}
    if slot is not None:
        entry["slot"] = slot
    return entry


def session_view(session: Session) -> dict:
    engine = session.engine
    space = engine.space
    view = {
        "id": session.id,
        "label": session.label,
        "preset": session.preset,
        "status": session.status,
        "iteration": engine.iteration,
        "iteration_token": None if session.status == CLOSED else engine.iteration,
        "action_space": {"dims": space.dims_as_dict()},
        "coactive_steps": [list(p) for p in engine.config.coactive_steps],
        "current": [],
        "previous": [
            _action_entry(space, None, idx) for idx in engine.buffer
        ],  # oldest first
        "history_length": len(session.history),
    }
    if session.status != CLOSED:
        view["current"] = [
            _action_entry(space, slot, idx) for slot, idx in enumerate(engine.pending)
        ]
    return view


def posterior_view(session: Session) -> dict:
    engine = session.engine
    mean, std = engine.posterior_summary()
    space = engine.space
    return {
        "id": session.id,
        "iteration": engine.iteration,
        "actions": [
            {
                "index": i,
                "coordinates": _coords_dict(space, i),
                "mean": float(mean[i]),
                "std": float(std[i]),
            }
            for i in range(space.size)
        ],
    }


def translate_feedback(engine: CoSparEngine, payload: dict) -> FeedbackBundle:
    """Turn a submitted feedback payload into the engine's bundle encoding."""
    n = engine.config.actions_per_iteration
    b = engine.config.buffer_size
    bundle = FeedbackBundle(n, b)
    for item in payload.get("preferences", ()):
        verdict = item.get("verdict")
        if verdict not in VERDICTS:
            raise ProtocolError(f"unknown verdict {verdict!r}")
        if verdict == "no_preference":
            continue
        j = int(item["current_index"])
        against = item.get("against") or {}
        kind = against.get("kind")
        k = int(against.get("index", -1))
        current_wins = verdict == "prefer_current"
        if kind == "current":
            if k == j:
                continue  # self-comparison carries no information
            row, col = (j, k) if j < k else (k, j)
            value = current_wins if row == j else not current_wins
            bundle.set_preference(row, col, value)
        elif kind == "buffer":
            if not 0 <= k < b:
                raise ProtocolError(f"buffer reference {k} outside [0, {b})")
            bundle.set_preference(j, n + k, current_wins)
        else:
            raise ProtocolError(f"against.kind must be 'current' or 'buffer', got {kind!r}")
    merged: dict[int, dict[int, int]] = {}
    for item in payload.get("coactive", ()):
        slot = int(item["current_index"])
        dim = item["dimension"]
        if isinstance(dim, str):
            names = [d.name for d in engine.space.dims]
            if dim not in names:
                raise ProtocolError(
                    f"unknown dimension {dim!r}; expected one of {names}"
                )
            dim = names.index(dim)
        dim = int(dim)
        level = int(item["level"])
        slot_levels = merged.setdefault(slot, {})
        if dim in slot_levels:
            raise ProtocolError(
                f"duplicate coactive suggestion for slot {slot}, dimension {dim}"
            )
        slot_levels[dim] = level
    for slot, levels in merged.items():
        bundle.set_coactive(slot, levels)
    return bundle


def new_session(
    preset: str | None = None,
    config: EngineConfig | None = None,
    space: ActionSpace | None = None,
    label: str = "",
    seed: int | None = None,
) -> Session:
    """Create a session and immediately draw its first proposal."""
    if preset is not None:
        config, space = session_preset(preset)
    if config is None or space is None:
        raise ConfigurationError("provide either a preset name or config plus space")
    if seed is None:
        seed = int(np.random.SeedSequence().generate_state(1)[0])
    engine = CoSparEngine(config, space, seed=int(seed))
    session = Session(
        id=uuid.uuid4().hex,
        created_at=_dt.datetime.now(_dt.timezone.utc).isoformat(),
        label=label,
        preset=preset,
        seed=int(seed),
        engine=engine,
    )
    engine.propose_actions()
    session.status = AWAITING_FEEDBACK
    return session


def apply_feedback(session: Session, payload: dict) -> dict:
    """Record one feedback round and draw the next proposal.

    The payload must echo the iteration token of the proposal it answers;
    a mismatch (double submit, stale tab) leaves the session untouched.
    """
    if session.status == CLOSED:
        raise ProtocolError("session is closed")
    engine = session.engine
    token = payload.get("iteration")
    if token is None or int(token) != engine.iteration:
        raise StaleIterationError(
            f"expected iteration token {engine.iteration}, got {token}"
        )
    executed = [
        _action_entry(engine.space, slot, idx)
        for slot, idx in enumerate(engine.pending)
    ]
    bundle = translate_feedback(engine, payload)
    outcome = engine.record_feedback(bundle)
    engine.propose_actions()
    event = {
        "iteration": engine.iteration - 1,
        "executed": executed,
        "preferences": list(payload.get("preferences", ())),
        "coactive": list(payload.get("coactive", ())),
        "recorded": {
            "pairwise": outcome.pairwise_count,
            "coactive": outcome.coactive_count,
        },
        "dropped_coactive": [
            {
                "slot": slot,
                "levels": {str(d): lv for d, lv in levels.items()},
                "reason": "suggestion_snapped_to_executed_action",
            }
            for slot, levels in outcome.dropped_coactive
        ],
    }
    if payload.get("note"):
        event["note"] = str(payload["note"])
    session.history.append(event)
    return event


class StaleIterationError(ProtocolError):
    """Feedback carried an iteration token that does not match the pending one."""


class SessionStore:
    """Directory-backed session map; snapshot-before-acknowledge durability."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        for path in sorted(self.directory.glob("*.json")):
            snapshot = json.loads(path.read_text(encoding="utf-8"))
            session = Session.from_snapshot(snapshot)
            self._sessions[session.id] = session

    def lock(self, session_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._locks.setdefault(session_id, threading.Lock())

    def __contains__(self, session_id: str) -> bool:
        return session_id in self._sessions

    def ids(self) -> list[str]:
        return sorted(self._sessions)

    def get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise KeyError(f"no session with id {session_id!r}")

    def add(self, session: Session) -> Session:
        if session.id in self._sessions:
            raise ProtocolError(f"session id {session.id!r} already exists")
        self.save(session)
        self._sessions[session.id] = session
        return session

    def save(self, session: Session):
        """Durably persist: write to a temp file, then atomically replace."""
        path = self.directory / f"{session.id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(
            json.dumps(session.snapshot(), sort_keys=True) + "\n", encoding="utf-8"
        )
        os.replace(tmp, path)

    def reload(self, session_id: str) -> Session:
        """Drop in-memory state and restore the last durable snapshot."""
        path = self.directory / f"{session_id}.json"
        session = Session.from_snapshot(json.loads(path.read_text(encoding="utf-8")))
        self._sessions[session.id] = session
        return session

    def import_snapshot(self, snapshot: dict) -> Session:
        session = Session.from_snapshot(snapshot)
        return self.add(session)
