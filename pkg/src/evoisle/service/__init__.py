"""Delivery surface: CLI, HTTP API, event-log persistence, and replay."""

from .persistence import (
    EventFileWriter,
    read_events,
    read_snapshot,
    replay,
    snapshot_bytes,
    verify_replay,
    write_snapshot,
)
from .runs import RunManager, engine_from_config

__all__ = [
    "EventFileWriter",
    "read_events",
    "read_snapshot",
    "replay",
    "snapshot_bytes",
    "verify_replay",
    "write_snapshot",
    "RunManager",
    "engine_from_config",
]
