"""Run persistence: line-delimited event logs, snapshot documents, and the
replay fold that reconstructs engine state from a log.

Replay is the correctness oracle for persistence: folding the events of any
run must rebuild its final snapshot byte-for-byte.
"""

from __future__ import annotations

import copy
import json
import os
import threading
from pathlib import Path
from typing import Iterable

from ..core import Candidate, FitnessReport, PopulationDB
from ..events import CorruptLogError, Event
from ..islands import IslandState
from ..pipeline import OVERRIDE_PATHS, build_snapshot
from ..sampling import ClusterAssignment


class EventFileWriter:
    """Append-only JSONL sink for an event log."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8")
        self._lock = threading.Lock()

    def __call__(self, event: Event) -> None:
        with self._lock:
            self._fh.write(event.to_json() + "\n")
            self._fh.flush()

    def close(self) -> None:
        with self._lock:
            self._fh.close()


def read_events(path: str | Path) -> list[Event]:
    """Parse a JSONL event log; raises CorruptLogError on gaps or bad lines."""
    events = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                events.append(Event.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError) as exc:
                raise CorruptLogError(f"malformed event at line {lineno}: {exc}") from exc
    expected = 1
    for ev in events:
        if ev.seq != expected:
            raise CorruptLogError(
                f"event log gap: expected seq {expected}, found {ev.seq}",
                missing_seq=expected,
            )
        expected += 1
    return events


def write_snapshot(path: str | Path, snapshot: dict) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(snapshot_bytes(snapshot).decode("utf-8"), encoding="utf-8")


def read_snapshot(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def snapshot_bytes(snapshot: dict) -> bytes:
    return json.dumps(snapshot, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _apply_override_to_config(config: dict, path: str, value) -> None:
    coerce = OVERRIDE_PATHS[path]
    if path.startswith("migration."):
        config["migration"][path.split(".", 1)[1]] = coerce(value)
    else:
        config["sampler"][path] = coerce(value)


def replay(events: Iterable[Event]) -> dict:
    """Fold an ordered event sequence into the engine's snapshot document."""
    run_id = None
    seed = None
    workload = None
    bounds = None
    config: dict | None = None
    finished = False
    db: PopulationDB | None = None
    islands: dict[int, IslandState] = {}

    def island(island_id: int) -> IslandState:
        if island_id not in islands:
            islands[island_id] = IslandState(id=island_id, elite=db.elite(island_id))
        return islands[island_id]

    for ev in events:
        if ev.type == "run_started":
            run_id = ev.run_id
            seed = ev.payload["seed"]
            workload = ev.payload["workload"]
            bounds = ev.payload["bounds"]
            config = copy.deepcopy(ev.payload["config"])
            db = PopulationDB(elite_capacity=config["engine"]["elite_capacity"])
        elif ev.type == "candidate_generated":
            cand = Candidate.from_dict(ev.payload["candidate"])
            db.restore_candidate(cand)
            island(cand.island_id)
        elif ev.type == "candidate_evaluated":
            report = FitnessReport.from_dict(ev.payload["report"])
            db.try_record_fitness(ev.payload["id"], report)
            island(ev.payload["island_id"])
        elif ev.type == "generation_completed":
            isl = island(ev.payload["island_id"])
            isl.generation = ev.payload["generation"]
            isl.diversity = ev.payload["diversity"]
            clusters = ev.payload.get("clusters")
            isl.clusters = (
                ClusterAssignment(
                    cluster_ids=dict(clusters["cluster_ids"]),
                    centroids=list(clusters["centroids"]),
                )
                if clusters
                else None
            )
        elif ev.type == "intervention_applied":
            kind = ev.payload["kind"]
            if kind == "param_override":
                _apply_override_to_config(config, ev.payload["path"], ev.payload["value"])
            elif kind == "guidance":
                for g in config["generators"]:
                    g["guidance"] = ev.payload["text"]
        elif ev.type == "run_finished":
            finished = True

    if db is None:
        raise CorruptLogError("event log has no run_started event")

    records = []
    for rec in db.all_records():
        records.append(
            {
                "candidate": rec.candidate.to_dict(),
                "report": rec.report.to_dict() if rec.report else None,
            }
        )
    return build_snapshot(
        run_id=run_id,
        seed=seed,
        workload=workload,
        bounds=bounds,
        config=config,
        finished=finished,
        islands=[isl.to_dict() for isl in islands.values()],
        records=records,
        next_seq=db.next_seq,
    )


def verify_replay(events: Iterable[Event], snapshot: dict) -> None:
    """Assert byte-for-byte equality between the folded state and a snapshot."""
    folded = replay(events)
    if snapshot_bytes(folded) != snapshot_bytes(snapshot):
        raise AssertionError("replayed state does not match snapshot")


def data_dir_from(cli_value: str | None) -> Path:
    """Resolve the data directory: CLI flag beats FMAGENT_DATA_DIR beats cwd."""
    if cli_value:
        return Path(cli_value)
    env = os.environ.get("FMAGENT_DATA_DIR")
    if env:
        return Path(env)
    return Path("./fmagent-data")
