"""The asynchronous generation-evaluation engine: two in-process worker pools
with bounded queues, bounded retries, and idempotent effects.

Producers block when a queue is full (backpressure, nothing is dropped).
Delivery is at-least-once; effects (candidate insert, fitness record, event
emission) are guarded by candidate-id idempotency so retried tasks apply
exactly once. Generation advances in lockstep across islands: within a
generation every island's tasks flow through the shared pools concurrently,
and the boundary between generations is a barrier where interventions apply
and migration runs.
"""

from __future__ import annotations

import logging
import queue
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .core import Candidate, FitnessReport, Genome, PopulationDB, validate_genome
from .evaluation import EvaluatorSpec, evaluate
from .events import Event, EventLog
from .generation import GenerationError, GeneratorSpec, cold_start_generate, propose
from .islands import (
    IslandState,
    MigrationPolicy,
    cold_start_partition,
    migrate,
    refresh_island,
    snapshot_island,
)
from .sampling import SamplerConfig, select_parents
from .seeds import derive_id, derive_rng, derive_seed

logger = logging.getLogger(__name__)

SNAPSHOT_EVERY = 100  # generations between periodic snapshots

# parameter paths an operator may override mid-run, with their coercions
OVERRIDE_PATHS: dict[str, type] = {
    "tau_min": float,
    "tau_max": float,
    "epsilon_max": float,
    "p_elite": float,
    "migration.interval": int,
    "migration.count": int,
}

INTERVENTION_KINDS = ("pause", "resume", "param_override", "guidance", "seed_candidate")


class PipelineError(RuntimeError):
    pass


@dataclass
class PipelineConfig:
    gen_workers: int = 4
    eval_workers: int = 8
    queue_capacity: int = 64
    max_retries: int = 3

    def validate(self) -> None:
        if min(self.gen_workers, self.eval_workers, self.queue_capacity) < 1:
            raise ValueError("worker counts and queue capacity must be positive")
        if self.max_retries < 0:
            raise ValueError("max_retries must be non-negative")

    def to_dict(self) -> dict:
        return {
            "gen_workers": self.gen_workers,
            "eval_workers": self.eval_workers,
            "queue_capacity": self.queue_capacity,
            "max_retries": self.max_retries,
        }


@dataclass
class EngineConfig:
    n_islands: int = 4
    cold_start_size: int = 40
    children_per_generation: int = 4
    elite_capacity: int = 10
    min_generation_seconds: float = 0.0

    def validate(self) -> None:
        if self.n_islands < 1 or self.children_per_generation < 0:
            raise ValueError("need >= 1 island and >= 0 children per generation")
        if self.cold_start_size < self.n_islands:
            raise ValueError("cold start pool must be at least the island count")
        if self.elite_capacity < 1:
            raise ValueError("elite capacity must be positive")

    def to_dict(self) -> dict:
        return {
            "n_islands": self.n_islands,
            "cold_start_size": self.cold_start_size,
            "children_per_generation": self.children_per_generation,
            "elite_capacity": self.elite_capacity,
            "min_generation_seconds": self.min_generation_seconds,
        }


@dataclass
class StopCondition:
    max_generations: int = 100
    wall_clock_seconds: float | None = None
    target_combined: float | None = None

    def to_dict(self) -> dict:
        return {
            "max_generations": self.max_generations,
            "wall_clock_seconds": self.wall_clock_seconds,
            "target_combined": self.target_combined,
        }


@dataclass
class Task:
    kind: str  # generate | evaluate
    key: str  # candidate id, the idempotency key
    payload: dict = field(default_factory=dict)
    attempt: int = 1


_CLOSE = object()


class TaskQueue:
    """Bounded queue with blocking submit (backpressure) and explicit close."""

    def __init__(self, capacity: int):
        self._q: queue.Queue = queue.Queue(maxsize=capacity)
        self._closed = False

    def submit(self, task: Task) -> None:
        if self._closed:
            raise PipelineError("pipeline is shut down")
        self._q.put(task)

    def take(self):
        return self._q.get()

    def close(self, n_workers: int) -> None:
        self._closed = True
        for _ in range(n_workers):
            self._q.put(_CLOSE)

    @property
    def closed(self) -> bool:
        return self._closed


class StepLatch:
    """Tracks a set of task keys until each reaches a terminal state."""

    def __init__(self, keys):
        self._pending = set(keys)
        self._failed: set[str] = set()
        self._cond = threading.Condition()

    def resolve(self, key: str, failed: bool = False) -> None:
        with self._cond:
            if key in self._pending:
                self._pending.discard(key)
                if failed:
                    self._failed.add(key)
                self._cond.notify_all()

    def wait(self) -> set[str]:
        with self._cond:
            self._cond.wait_for(lambda: not self._pending)
            return set(self._failed)


@dataclass
class RunResult:
    run_id: str
    best: tuple[Candidate, FitnessReport] | None
    stats: dict
    events: list[Event]
    snapshot: dict


def build_snapshot(
    *,
    run_id: str,
    seed: int,
    workload: str,
    bounds,
    config: dict,
    finished: bool,
    islands: list[dict],
    records: list[dict],
    next_seq: int,
) -> dict:
    """Canonical snapshot document; replay must rebuild it byte-for-byte."""
    best = None
    for rec in records:
        rep = rec["report"]
        if rep is None or not rep["correct"]:
            continue
        if best is None or (
            rep["combined"],
            -rec["candidate"]["created_seq"],
        ) > (best["combined"], -best["created_seq"]):
            best = {
                "id": rec["candidate"]["id"],
                "combined": rep["combined"],
                "created_seq": rec["candidate"]["created_seq"],
            }
    return {
        "run_id": run_id,
        "seed": seed,
        "workload": workload,
        "bounds": [list(b) for b in bounds],
        "config": config,
        "finished": finished,
        "islands": sorted(islands, key=lambda d: d["id"]),
        "db": {"next_seq": next_seq, "records": records},
        "best": best,
    }


class Engine:
    """One evolution run: population database, islands, worker pools, events."""

    def __init__(
        self,
        *,
        run_id: str,
        seed: int,
        evaluator: EvaluatorSpec,
        generators: list[GeneratorSpec],
        bounds,
        sampler: SamplerConfig | None = None,
        migration: MigrationPolicy | None = None,
        pipeline: PipelineConfig | None = None,
        engine: EngineConfig | None = None,
        event_log: EventLog | None = None,
        snapshot_sink: Callable[[dict], None] | None = None,
        fault_injector: Callable[[Task, str], None] | None = None,
    ):
        self.run_id = run_id
        self.seed = seed
        self.evaluator = evaluator
        self.generators = list(generators)
        self.bounds = tuple((float(lo), float(hi)) for lo, hi in bounds)
        self.sampler = sampler or SamplerConfig()
        self.migration = migration or MigrationPolicy()
        self.pipeline = pipeline or PipelineConfig()
        self.engine_cfg = engine or EngineConfig()
        self.evaluator.validate()
        for spec in self.generators:
            spec.validate()
        self.sampler.validate()
        self.pipeline.validate()
        self.engine_cfg.validate()
        self.migration.validate(self.engine_cfg.elite_capacity)

        self.db = PopulationDB(elite_capacity=self.engine_cfg.elite_capacity)
        # explicit None check: an empty EventLog is falsy via __len__
        self.log = event_log if event_log is not None else EventLog(run_id)
        self.islands: list[IslandState] = []
        self._snapshot_sink = snapshot_sink
        self._fault = fault_injector

        self._gen_queue = TaskQueue(self.pipeline.queue_capacity)
        self._eval_queue = TaskQueue(self.pipeline.queue_capacity)
        self._threads: list[threading.Thread] = []

        self._iv_lock = threading.Lock()
        self._iv_queue: list[dict] = []
        self._iv_applied: set[str] = set()
        self._paused = False
        self._current_generation = 0
        self._finished = False
        self._stats_lock = threading.Lock()
        self._stats = {"evaluations": 0, "generation_failures": 0, "evaluation_failures": 0}
        self._series: dict[int, list[dict]] = {}
        self._start_time: float | None = None
        self._stop: StopCondition | None = None

    # ------------------------------------------------------------- config

    def config_dict(self) -> dict:
        return {
            "engine": self.engine_cfg.to_dict(),
            "sampler": self.sampler.to_dict(),
            "migration": self.migration.to_dict(),
            "pipeline": self.pipeline.to_dict(),
            "evaluator": self.evaluator.to_dict(),
            "generators": [g.to_dict() for g in self.generators],
            "stop": self._stop.to_dict() if self._stop else None,
        }

    # ------------------------------------------------------- interventions

    def submit_intervention(self, intervention: dict) -> dict:
        """Queue an operator intervention; applied at the next boundary."""
        kind = intervention.get("kind")
        if kind not in INTERVENTION_KINDS:
            raise ValueError(f"unknown intervention kind {kind!r}")
        if kind == "param_override":
            path = intervention.get("path")
            if path not in OVERRIDE_PATHS:
                raise ValueError(f"parameter path {path!r} is not overridable")
            OVERRIDE_PATHS[path](intervention["value"])  # raises early on bad value
        if kind == "guidance" and not isinstance(intervention.get("text"), str):
            raise ValueError("guidance intervention needs a text field")
        if kind == "seed_candidate":
            genome = Genome.from_dict(intervention["genome"])
            validate_genome(genome)
            if genome.kind == "real_vector" and genome.bounds != self.bounds:
                raise ValueError("seeded genome bounds must match the run's genome space")
        if self._finished:
            raise PipelineError("run already finished")
        with self._iv_lock:
            entry = dict(intervention)
            entry.setdefault("id", derive_id("intervention", self.run_id, len(self._iv_queue), time.time()))
            entry["applies_at_generation"] = self._current_generation + 1
            self._iv_queue.append(entry)
            return {"accepted": True, "applies_at_generation": entry["applies_at_generation"],
                    "id": entry["id"]}

    def _drain_interventions(self) -> list[dict]:
        with self._iv_lock:
            pending, self._iv_queue = self._iv_queue, []
            return pending

    def _apply_interventions(self, pending: list[dict]) -> None:
        for iv in pending:
            if iv["id"] in self._iv_applied:
                continue
            self._iv_applied.add(iv["id"])
            kind = iv["kind"]
            if kind == "pause":
                self._paused = True
            elif kind == "resume":
                self._paused = False
            elif kind == "param_override":
                self._apply_override(iv["path"], iv["value"])
            elif kind == "guidance":
                for spec in self.generators:
                    spec.guidance = iv["text"]
            elif kind == "seed_candidate":
                self._apply_seed_candidate(iv)
            payload = {k: v for k, v in iv.items() if k != "id"}
            self.log.append(
                "intervention_applied",
                {"intervention_id": iv["id"], **payload},
            )

    def _apply_override(self, path: str, value) -> None:
        coerce = OVERRIDE_PATHS[path]
        if path.startswith("migration."):
            setattr(self.migration, path.split(".", 1)[1], coerce(value))
        else:
            setattr(self.sampler, path, coerce(value))

    def _apply_seed_candidate(self, iv: dict) -> None:
        island_id = int(iv.get("island", 0)) % self.engine_cfg.n_islands
        island = self.islands[island_id]
        cand = Candidate(
            id=derive_id("seeded", self.run_id, iv["id"]),
            genome=Genome.from_dict(iv["genome"]),
            parent_ids=(),
            island_id=island_id,
            generation=self._current_generation,
            provenance="intervention",
        )
        if not self.db.insert_candidate(cand):
            return
        island.member_ids.append(cand.id)
        stored = self.db.get(cand.id).candidate
        self.log.append("candidate_generated", {"candidate": stored.to_dict()})
        report = evaluate(self.evaluator, cand.genome)
        self.db.try_record_fitness(cand.id, report)
        self.log.append(
            "candidate_evaluated",
            {"id": cand.id, "island_id": island_id, "report": report.to_dict()},
        )
        with self._stats_lock:
            self._stats["evaluations"] += 1

    # ------------------------------------------------------------ workers

    def _start_workers(self) -> None:
        for i in range(self.pipeline.gen_workers):
            t = threading.Thread(target=self._gen_worker, name=f"gen-{i}", daemon=True)
            t.start()
            self._threads.append(t)
        for i in range(self.pipeline.eval_workers):
            t = threading.Thread(target=self._eval_worker, name=f"eval-{i}", daemon=True)
            t.start()
            self._threads.append(t)

    def _stop_workers(self) -> None:
        self._gen_queue.close(self.pipeline.gen_workers)
        self._eval_queue.close(self.pipeline.eval_workers)
        for t in self._threads:
            t.join(timeout=30)
        self._threads.clear()

    def _gen_worker(self) -> None:
        while True:
            task = self._gen_queue.take()
            if task is _CLOSE:
                return
            self._run_generate_task(task)

    def _eval_worker(self) -> None:
        while True:
            task = self._eval_queue.take()
            if task is _CLOSE:
                return
            self._run_evaluate_task(task)

    def _inject(self, task: Task, phase: str) -> None:
        if self._fault is not None:
            self._fault(task, phase)

    def _run_generate_task(self, task: Task) -> None:
        meta = task.payload
        latch: StepLatch = meta["latch"]
        spec: GeneratorSpec = self.generators[meta["spec_index"]]
        inserted = False
        forwarded = False
        last_error: Exception | None = None
        for attempt in range(1, self.pipeline.max_retries + 2):
            task.attempt = attempt
            try:
                self._inject(task, "pre")
                if not inserted:
                    rng = derive_rng(self.seed, task.key, attempt)
                    parents = [self.db.get(pid).candidate for pid in meta["parent_ids"]]
                    genome = propose(spec, parents, rng, bounds=self.bounds)
                    self.db.insert_candidate(
                        Candidate(
                            id=task.key,
                            genome=genome,
                            parent_ids=tuple(meta["parent_ids"]),
                            island_id=meta["island_id"],
                            generation=meta["generation"],
                            provenance=spec.name,
                        )
                    )
                    inserted = True
                if not forwarded:
                    self._eval_queue.submit(
                        Task(
                            kind="evaluate",
                            key=task.key,
                            payload={"latch": latch, "emit_generated": True},
                        )
                    )
                    forwarded = True
                self._inject(task, "post")
                return
            except Exception as exc:
                last_error = exc
        with self._stats_lock:
            self._stats["generation_failures"] += 1
        self.log.append(
            "task_failed",
            {
                "kind": "generate",
                "key": task.key,
                "attempts": self.pipeline.max_retries + 1,
                "error": str(last_error),
            },
        )
        latch.resolve(task.key, failed=True)

    def _run_evaluate_task(self, task: Task) -> None:
        meta = task.payload
        latch: StepLatch = meta["latch"]
        if meta.get("emit_generated", False):
            # insertion already happened; the record must reach the log even
            # if every evaluation attempt below fails
            cand = self.db.get(task.key).candidate
            self.log.append("candidate_generated", {"candidate": cand.to_dict()})
        applied = False
        evaluated_emitted = False
        last_error: Exception | None = None
        for attempt in range(1, self.pipeline.max_retries + 2):
            task.attempt = attempt
            try:
                self._inject(task, "pre")
                if not applied:
                    genome = self.db.get(task.key).candidate.genome
                    report = evaluate(self.evaluator, genome)
                    self.db.try_record_fitness(task.key, report)
                    applied = True
                if not evaluated_emitted:
                    rec = self.db.get(task.key)
                    self.log.append(
                        "candidate_evaluated",
                        {
                            "id": task.key,
                            "island_id": rec.candidate.island_id,
                            "report": rec.report.to_dict(),
                        },
                    )
                    evaluated_emitted = True
                self._inject(task, "post")
                with self._stats_lock:
                    self._stats["evaluations"] += 1
                latch.resolve(task.key)
                return
            except Exception as exc:
                last_error = exc
        with self._stats_lock:
            self._stats["evaluation_failures"] += 1
        self.log.append(
            "task_failed",
            {
                "kind": "evaluate",
                "key": task.key,
                "attempts": self.pipeline.max_retries + 1,
                "error": str(last_error),
            },
        )
        latch.resolve(task.key, failed=True)

    # ---------------------------------------------------------- run stages

    def _cold_start(self) -> None:
        cfg = self.engine_cfg
        rng = derive_rng(self.seed, "coldstart")
        seeding_specs = self.generators
        if not any(s.kind in ("reseed", "mock_llm", "external") for s in seeding_specs):
            # parentful operators cannot seed an empty population
            seeding_specs = [GeneratorSpec(name="reseed", kind="reseed")]
        pool = cold_start_generate(
            seeding_specs,
            cfg.cold_start_size,
            self.bounds,
            rng,
            make_id=lambda i: derive_id(self.seed, "cold", i),
        )
        self.islands = cold_start_partition(pool, cfg.n_islands, derive_seed(self.seed, "partition"))
        by_id = {c.id: c for c in pool}
        latch = StepLatch([c.id for c in pool])
        for island in self.islands:
            island.elite = self.db.elite(island.id)
            for cid in island.member_ids:
                cand = by_id[cid]
                self.db.insert_candidate(
                    Candidate(
                        id=cand.id,
                        genome=cand.genome,
                        parent_ids=(),
                        island_id=island.id,
                        generation=0,
                        provenance=cand.provenance,
                    )
                )
        for island in self.islands:
            for cid in island.member_ids:
                self._eval_queue.submit(
                    Task(kind="evaluate", key=cid, payload={"latch": latch, "emit_generated": True})
                )
        latch.wait()
        for island in self.islands:
            self._refresh_and_report(island, generation=0)

    def _refresh_and_report(self, island: IslandState, generation: int, failures: int = 0) -> None:
        refresh_island(
            island,
            self.db,
            self.sampler.clusters_per_island,
            derive_seed(self.seed, "cluster", island.id, generation),
        )
        pool = self.db.evaluated_on_island(island.id)
        best = max((r.combined for _, r in pool), default=None)
        mean = sum(r.combined for _, r in pool) / len(pool) if pool else None
        payload = {
            "island_id": island.id,
            "generation": generation,
            "best_combined": best,
            "mean_combined": mean,
            "diversity": island.diversity,
            "evaluated": len(pool),
            "failed": failures,
            "clusters": island.clusters.to_dict() if island.clusters else None,
        }
        island.generation = generation
        self._series.setdefault(island.id, []).append(
            {k: payload[k] for k in ("generation", "best_combined", "mean_combined", "diversity")}
        )
        self.log.append("generation_completed", payload)

    def _island_step(self, island: IslandState, generation: int) -> int:
        """Sample parents, submit the island's generation tasks, await them.
        Returns the number of terminally failed tasks."""
        cfg = self.engine_cfg
        n_children = cfg.children_per_generation
        if n_children == 0:
            return 0
        snapshot = snapshot_island(island, self.db)
        rng = derive_rng(self.seed, "sample", island.id, generation)
        tasks = []
        for slot in range(n_children):
            spec_index = slot % len(self.generators)
            spec = self.generators[spec_index]
            if spec.kind == "blend_crossover":
                n_parents = 2
            elif spec.kind == "reseed":
                n_parents = 0
            else:
                n_parents = 1
            if n_parents > 0 and snapshot.pool:
                parent_ids = select_parents(snapshot, self.sampler, n_parents, rng)
            else:
                parent_ids = []  # nothing sampleable yet: fall back to reseeding
            if n_parents > 0 and not parent_ids:
                spec_index = next(
                    (i for i, s in enumerate(self.generators) if s.kind == "reseed"), spec_index
                )
            cid = derive_id(self.seed, "child", island.id, generation, slot)
            tasks.append(
                Task(
                    kind="generate",
                    key=cid,
                    payload={
                        "island_id": island.id,
                        "generation": generation,
                        "slot": slot,
                        "spec_index": spec_index,
                        "parent_ids": parent_ids,
                    },
                )
            )
        latch = StepLatch([t.key for t in tasks])
        for t in tasks:
            t.payload["latch"] = latch
            self._gen_queue.submit(t)
        failed = latch.wait()
        for t in tasks:
            if t.key in self.db:
                island.member_ids.append(t.key)
        return len(failed)

    # --------------------------------------------------------------- run

    def best(self) -> tuple[Candidate, FitnessReport] | None:
        return self.db.best()

    def status(self) -> dict:
        best = self.best()
        return {
            "state": "finished" if self._finished else ("paused" if self._paused else "running"),
            "generation": self._current_generation,
            "best_combined": best[1].combined if best else None,
            "islands": [
                {
                    "id": isl.id,
                    "generation": isl.generation,
                    "diversity": isl.diversity,
                    "members": len(isl.member_ids),
                }
                for isl in self.islands
            ],
        }

    def snapshot_state(self) -> dict:
        records = []
        for rec in self.db.all_records():
            records.append(
                {
                    "candidate": rec.candidate.to_dict(),
                    "report": rec.report.to_dict() if rec.report else None,
                }
            )
        return build_snapshot(
            run_id=self.run_id,
            seed=self.seed,
            workload=self.evaluator.workload,
            bounds=self.bounds,
            config=self.config_dict(),
            finished=self._finished,
            islands=[isl.to_dict() for isl in self.islands],
            records=records,
            next_seq=self.db.next_seq,
        )

    def _emit_snapshot(self) -> None:
        if self._snapshot_sink is not None:
            self._snapshot_sink(self.snapshot_state())

    def _wall_clock_exceeded(self) -> bool:
        stop = self._stop
        return (
            stop is not None
            and stop.wall_clock_seconds is not None
            and time.time() - self._start_time >= stop.wall_clock_seconds
        )

    def _target_reached(self) -> bool:
        stop = self._stop
        if stop is None or stop.target_combined is None:
            return False
        best = self.best()
        return best is not None and best[1].combined >= stop.target_combined

    def _boundary(self, generation: int) -> None:
        with self._iv_lock:
            pending = list(self._iv_queue)
            self._iv_queue.clear()
            self._current_generation = generation
        self._apply_interventions(pending)
        while self._paused and not self._wall_clock_exceeded():
            time.sleep(0.02)
            self._apply_interventions(self._drain_interventions())

    def run(self, stop: StopCondition | None = None) -> RunResult:
        self._stop = stop or StopCondition()
        self._start_time = time.time()
        self.log.append(
            "run_started",
            {
                "seed": self.seed,
                "workload": self.evaluator.workload,
                "bounds": [list(b) for b in self.bounds],
                "config": self.config_dict(),
            },
        )
        self._start_workers()
        reason = "max_generations"
        island_pool: ThreadPoolExecutor | None = None
        try:
            self._cold_start()
            if self.engine_cfg.n_islands > 1:
                island_pool = ThreadPoolExecutor(
                    max_workers=self.engine_cfg.n_islands, thread_name_prefix="island"
                )
            if self._target_reached():
                reason = "target_reached"
            else:
                for generation in range(1, self._stop.max_generations + 1):
                    self._boundary(generation)
                    if self._wall_clock_exceeded():
                        reason = "wall_clock"
                        break
                    gen_started = time.time()
                    failures: dict[int, int] = {}
                    if island_pool is None:
                        failures[0] = self._island_step(self.islands[0], generation)
                    else:
                        futs = {
                            isl.id: island_pool.submit(self._island_step, isl, generation)
                            for isl in self.islands
                        }
                        failures = {i: f.result() for i, f in futs.items()}
                    for island in self.islands:
                        island.generation = generation
                    if (
                        len(self.islands) > 1
                        and generation % self.migration.interval == 0
                    ):
                        record = migrate(
                            self.islands,
                            self.db,
                            self.migration,
                            make_id=lambda *parts: derive_id(self.seed, generation, *parts),
                        )
                        if record.pairs:
                            for pair in record.pairs:
                                rec = self.db.get(pair["new_id"])
                                self.log.append(
                                    "candidate_generated", {"candidate": rec.candidate.to_dict()}
                                )
                                self.log.append(
                                    "candidate_evaluated",
                                    {
                                        "id": pair["new_id"],
                                        "island_id": rec.candidate.island_id,
                                        "report": rec.report.to_dict(),
                                    },
                                )
                            self.log.append(
                                "migration",
                                {
                                    "interval": self.migration.interval,
                                    "count": self.migration.count,
                                    "pairs": record.pairs,
                                },
                            )
                    for island in self.islands:
                        self._refresh_and_report(island, generation, failures.get(island.id, 0))
                    if generation % SNAPSHOT_EVERY == 0:
                        self._emit_snapshot()
                    if self._target_reached():
                        reason = "target_reached"
                        break
                    if self._wall_clock_exceeded():
                        reason = "wall_clock"
                        break
                    throttle = self.engine_cfg.min_generation_seconds - (time.time() - gen_started)
                    if throttle > 0:
                        time.sleep(throttle)
        finally:
            if island_pool is not None:
                island_pool.shutdown(wait=True)
            self._finished = True
            best = self.best()
            self.log.append(
                "run_finished",
                {
                    "reason": reason,
                    "generations_completed": self._current_generation,
                    "best": {"id": best[0].id, "combined": best[1].combined} if best else None,
                    "elapsed_seconds": time.time() - self._start_time,
                },
            )
            self._stop_workers()
            self._emit_snapshot()

        with self._stats_lock:
            stats = dict(self._stats)
        stats["generations_completed"] = self._current_generation
        stats["series"] = {i: list(s) for i, s in self._series.items()}
        best = self.best()
        stats["best_combined"] = best[1].combined if best else None
        return RunResult(
            run_id=self.run_id,
            best=best,
            stats=stats,
            events=self.log.all(),
            snapshot=self.snapshot_state(),
        )


def run_pipeline(engine: Engine, stop: StopCondition | None = None) -> RunResult:
    """Functional entry point over Engine.run."""
    return engine.run(stop)
