"""Run lifecycle management for the HTTP service: construct engines from run
config documents, execute them on background threads, persist their event
logs and snapshots, and expose live state to the API layer.
"""

from __future__ import annotations

import logging
import threading
import uuid
from pathlib import Path

from ..evaluation import EvaluatorSpec
from ..events import EventLog
from ..generation import GeneratorSpec
from ..islands import MigrationPolicy
from ..pipeline import Engine, EngineConfig, PipelineConfig, StopCondition
from ..sampling import SamplerConfig
from ..workloads import workload_bounds
from . import persistence

logger = logging.getLogger(__name__)

DEFAULT_GENERATORS = [
    {"name": "gaussian", "kind": "gaussian_mutation", "params": {"sigma_frac": 0.05}},
    {"name": "blend", "kind": "blend_crossover", "params": {"alpha": 0.5}},
    {"name": "reseed", "kind": "reseed", "params": {}},
]


def _build_dataclass(cls, data: dict | None):
    obj = cls()
    for key, value in (data or {}).items():
        if not hasattr(obj, key):
            raise ValueError(f"unknown {cls.__name__} field {key!r}")
        setattr(obj, key, type(getattr(obj, key))(value) if getattr(obj, key) is not None else value)
    return obj


def engine_from_config(config: dict, run_id: str, event_log: EventLog, snapshot_sink=None) -> tuple[Engine, StopCondition]:
    """Build an Engine from a run config document."""
    workload = config.get("workload", "sphere")
    seed = int(config.get("seed", 42))
    dim = config.get("dim")
    bounds = workload_bounds(workload, int(dim) if dim else None)

    engine_cfg = _build_dataclass(EngineConfig, {
        "n_islands": config.get("islands", 4),
        **{k: config[k] for k in (
            "cold_start_size", "children_per_generation", "elite_capacity",
            "min_generation_seconds",
        ) if k in config},
    })
    sampler = _build_dataclass(SamplerConfig, config.get("sampler"))
    if isinstance(config.get("sampler"), str):
        sampler = SamplerConfig(strategy=config["sampler"])
    migration = _build_dataclass(MigrationPolicy, config.get("migration"))
    pipeline_cfg = _build_dataclass(PipelineConfig, config.get("pipeline"))

    generators = [
        GeneratorSpec(name=g["name"], kind=g["kind"], params=dict(g.get("params", {})),
                      guidance=g.get("guidance"))
        for g in config.get("generators", DEFAULT_GENERATORS)
    ]
    evaluator = EvaluatorSpec(
        workload=workload,
        timeout_seconds=float(config.get("timeout_seconds", 120.0)),
        w_e=float(config.get("w_e", 1.0)),
        w_j=float(config.get("w_j", 0.0)),
    )
    stop = StopCondition(
        max_generations=int(config.get("generations", 100)),
        wall_clock_seconds=config.get("wall_clock_seconds"),
        target_combined=config.get("target_combined"),
    )
    engine = Engine(
        run_id=run_id,
        seed=seed,
        evaluator=evaluator,
        generators=generators,
        bounds=bounds,
        sampler=sampler,
        migration=migration,
        pipeline=pipeline_cfg,
        engine=engine_cfg,
        event_log=event_log,
        snapshot_sink=snapshot_sink,
    )
    return engine, stop


class LiveRun:
    def __init__(self, run_id: str, engine: Engine, stop: StopCondition, run_dir: Path):
        self.run_id = run_id
        self.engine = engine
        self.stop = stop
        self.run_dir = run_dir
        self.error: str | None = None
        self._thread = threading.Thread(target=self._execute, name=f"run-{run_id}", daemon=True)

    def start(self) -> None:
        self._thread.start()

    def _execute(self) -> None:
        try:
            self.engine.run(self.stop)
        except Exception as exc:
            logger.exception("run %s crashed", self.run_id)
            self.error = str(exc)

    @property
    def finished(self) -> bool:
        return not self._thread.is_alive() and self._thread.ident is not None

    def join(self, timeout: float | None = None) -> None:
        self._thread.join(timeout)


class RunManager:
    """Owns all runs started through the service."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.runs_dir = self.data_dir / "runs"
        self.runs_dir.mkdir(parents=True, exist_ok=True)
        self._runs: dict[str, LiveRun] = {}
        self._lock = threading.Lock()

    def start_run(self, config: dict) -> str:
        run_id = config.get("run_id") or uuid.uuid4().hex
        run_dir = self.runs_dir / run_id
        run_dir.mkdir(parents=True, exist_ok=True)
        event_log = EventLog(run_id)
        event_log.add_sink(persistence.EventFileWriter(run_dir / "events.jsonl"))
        sink = lambda snap: persistence.write_snapshot(run_dir / "snapshot.json", snap)
        engine, stop = engine_from_config(config, run_id, event_log, snapshot_sink=sink)
        live = LiveRun(run_id, engine, stop, run_dir)
        with self._lock:
            self._runs[run_id] = live
        live.start()
        return run_id

    def get(self, run_id: str) -> LiveRun | None:
        with self._lock:
            return self._runs.get(run_id)

    def all_runs(self) -> list[str]:
        with self._lock:
            return sorted(self._runs)
