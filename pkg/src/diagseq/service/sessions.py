"""In-memory diagnosis sessions.

A session walks one symptom's test sequence: it tracks the posterior over
the remaining candidates as tests pass, and ends either with a diagnosis
(a test failed) or exhausted (every candidate tested clean, which the
single-fault assumption says should not happen). Sessions are ephemeral:
they live in process memory and expire after a TTL of inactivity.

State transitions take a per-session lock and re-validate against current
state, so of two racing reports for the same recommendation exactly one
wins and the other surfaces a conflict instead of silently overwriting.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

from .. import engine
from ..model import Symptom, normalize

DEFAULT_TTL_SECONDS = 24 * 60 * 60.0

ACTIVE = "active"
DIAGNOSED = "diagnosed"
EXHAUSTED = "exhausted"


class SessionError(Exception):
    pass


class SessionNotFound(SessionError):
    pass


class SessionInactive(SessionError):
    pass


class UnknownComponent(SessionError):
    pass


class ComponentAlreadyTested(SessionError):
    pass


class OutOfOrderReport(SessionError):
    def __init__(self, expected_id: str):
        self.expected_id = expected_id
        super().__init__(
            f"component is not the current recommendation "
            f"(expected {expected_id!r}); set override=true to test out of order"
        )


@dataclass
class HistoryEntry:
    component_id: str
    outcome: str  # "pass" | "fail"
    at: float


@dataclass
class Session:
    id: str
    symptom_id: str
    original: Symptom  # normalized snapshot taken at creation
    remaining: Symptom | None  # normalized posterior; None once exhausted
    status: str
    history: list[HistoryEntry]
    diagnosis: str | None
    created_at: float
    updated_at: float
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def recommendation_id(self) -> str | None:
        if self.status != ACTIVE or self.remaining is None:
            return None
        return engine.cp_sequence(self.remaining)[0].component_id

    def remaining_expected_cost(self) -> float:
        if self.status != ACTIVE or self.remaining is None:
            return 0.0
        return engine.expected_cost(
            engine.cp_strategy(self.remaining), self.remaining
        ).expected_cost


class SessionStore:
    def __init__(
        self, ttl_seconds: float = DEFAULT_TTL_SECONDS, clock=time.time
    ):
        self._ttl = ttl_seconds
        self._clock = clock
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, symptom: Symptom) -> Session:
        normalized = normalize(symptom)
        now = self._clock()
        session = Session(
            id=uuid.uuid4().hex,
            symptom_id=symptom.id,
            original=normalized,
            remaining=normalized,
            status=ACTIVE,
            history=[],
            diagnosis=None,
            created_at=now,
            updated_at=now,
        )
        with self._lock:
            self._purge(now)
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session:
        with self._lock:
            self._purge(self._clock())
            session = self._sessions.get(session_id)
        if session is None:
            raise SessionNotFound(f"no session {session_id!r} (it may have expired)")
        return session

    def report_outcome(
        self, session_id: str, component_id: str, outcome: str, override: bool = False
    ) -> Session:
        if outcome not in ("pass", "fail"):
            raise ValueError(f"outcome must be 'pass' or 'fail', got {outcome!r}")
        session = self.get(session_id)
        with session.lock:
            if session.status != ACTIVE:
                raise SessionInactive(
                    f"session {session_id!r} is {session.status}; "
                    f"no further outcomes can be reported"
                )
            assert session.remaining is not None
            original_ids = session.original.component_ids()
            if component_id not in original_ids:
                raise UnknownComponent(
                    f"unknown component {component_id!r} for symptom "
                    f"{session.symptom_id!r}; known: {', '.join(original_ids)}"
                )
            remaining_ids = session.remaining.component_ids()
            if component_id not in remaining_ids:
                raise ComponentAlreadyTested(
                    f"component {component_id!r} was already tested in this session"
                )
            expected = engine.cp_sequence(session.remaining)[0].component_id
            if component_id != expected and not override:
                raise OutOfOrderReport(expected)
            now = self._clock()
            session.history.append(
                HistoryEntry(component_id=component_id, outcome=outcome, at=now)
            )
            if outcome == "fail":
                session.status = DIAGNOSED
                session.diagnosis = component_id
            elif len(remaining_ids) == 1:
                # the last candidate tested clean: no diagnosis possible
                session.status = EXHAUSTED
                session.remaining = None
            else:
                session.remaining = engine.condition_on_pass(
                    session.remaining, component_id
                )
            session.updated_at = now
        return session

    def _purge(self, now: float) -> None:
        expired = [
            sid
            for sid, s in self._sessions.items()
            if now - s.updated_at > self._ttl
        ]
        for sid in expired:
            del self._sessions[sid]
