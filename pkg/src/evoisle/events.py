"""The run's event stream: ordered, typed records of everything that happens.

The event log is the sole source for persistence, replay, and the dashboard.
Sequence numbers are gapless and strictly increasing within a run; appends are
serialized by the log's lock and can be mirrored to a line-delimited JSON sink.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass
from typing import Callable, Iterable

EVENT_TYPES = (
    "run_started",
    "candidate_generated",
    "candidate_evaluated",
    "generation_completed",
    "migration",
    "intervention_applied",
    "task_failed",
    "run_finished",
)


class CorruptLogError(RuntimeError):
    """The event log has a gap or malformed line."""

    def __init__(self, message: str, missing_seq: int | None = None):
        super().__init__(message)
        self.missing_seq = missing_seq


@dataclass(frozen=True)
class Event:
    seq: int
    ts_ms: int
    run_id: str
    type: str
    payload: dict

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "ts_ms": self.ts_ms,
            "run_id": self.run_id,
            "type": self.type,
            "payload": self.payload,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "Event":
        return cls(
            seq=data["seq"],
            ts_ms=data["ts_ms"],
            run_id=data["run_id"],
            type=data["type"],
            payload=data["payload"],
        )


class EventLog:
    """In-memory, thread-safe event sequencer with optional line sinks."""

    def __init__(self, run_id: str):
        self.run_id = run_id
        self._events: list[Event] = []
        self._lock = threading.Lock()
        self._cond = threading.Condition(self._lock)
        self._sinks: list[Callable[[Event], None]] = []

    def add_sink(self, sink: Callable[[Event], None]) -> None:
        with self._lock:
            self._sinks.append(sink)

    def append(self, event_type: str, payload: dict) -> Event:
        if event_type not in EVENT_TYPES:
            raise ValueError(f"unknown event type {event_type!r}")
        with self._lock:
            ev = Event(
                seq=len(self._events) + 1,
                ts_ms=int(time.time() * 1000),
                run_id=self.run_id,
                type=event_type,
                payload=payload,
            )
            self._events.append(ev)
            # sinks run under the lock so the persisted line order matches seq
            for sink in self._sinks:
                sink(ev)
            self._cond.notify_all()
        return ev

    def __len__(self) -> int:
        with self._lock:
            return len(self._events)

    def all(self) -> list[Event]:
        with self._lock:
            return list(self._events)

    def events_from(self, seq: int) -> list[Event]:
        """Events with sequence number >= seq (seq is 1-based)."""
        with self._lock:
            start = max(seq - 1, 0)
            return self._events[start:]

    def wait_for_more(self, have_seq: int, timeout: float) -> bool:
        """Block until an event with seq > have_seq exists; False on timeout."""
        with self._cond:
            if len(self._events) > have_seq:
                return True
            return self._cond.wait_for(lambda: len(self._events) > have_seq, timeout)


def check_gapless(events: Iterable[Event]) -> None:
    """Raise CorruptLogError naming the first missing sequence number."""
    expected = 1
    for ev in events:
        if ev.seq != expected:
            raise CorruptLogError(
                f"event log gap: expected seq {expected}, found {ev.seq}",
                missing_seq=expected,
            )
        expected += 1
