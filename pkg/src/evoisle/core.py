"""Core domain types: genomes, candidates, fitness reports, elite pools, and
the population database shared by every other part of the engine.

The database and elite pools are the only shared mutable state in the system;
both are guarded by a single lock so their operations linearize. Everything
else here is an immutable value object that can move freely between worker
threads.
"""

from __future__ import annotations

import math
import sys
import threading
from dataclasses import dataclass, field, replace

# Incorrect candidates sort below every real score but stay finite so that
# ordering stays total and JSON serialization stays clean.
SENTINEL_MIN = -sys.float_info.max

GENOME_KINDS = ("real_vector", "text")


class GenomeError(ValueError):
    """A genome violates its structural invariants."""


class PopulationError(RuntimeError):
    """An operation on the population database broke a precondition."""


@dataclass(frozen=True)
class Genome:
    """A candidate solution payload: a bounded real vector or opaque text."""

    kind: str
    values: tuple[float, ...] | None = None
    bounds: tuple[tuple[float, float], ...] | None = None
    text: str | None = None

    def to_dict(self) -> dict:
        if self.kind == "real_vector":
            return {
                "kind": self.kind,
                "values": list(self.values or ()),
                "bounds": [list(b) for b in (self.bounds or ())],
            }
        return {"kind": self.kind, "text": self.text}

    @classmethod
    def from_dict(cls, data: dict) -> "Genome":
        if data["kind"] == "real_vector":
            return real_vector(data["values"], data["bounds"])
        return text_genome(data["text"])


def real_vector(values, bounds) -> Genome:
    g = Genome(
        kind="real_vector",
        values=tuple(float(v) for v in values),
        bounds=tuple((float(lo), float(hi)) for lo, hi in bounds),
    )
    validate_genome(g)
    return g


def text_genome(text: str) -> Genome:
    g = Genome(kind="text", text=text)
    validate_genome(g)
    return g


def validate_genome(g: Genome) -> None:
    """Raise GenomeError unless g satisfies the type invariants."""
    if g.kind == "real_vector":
        if g.values is None or g.bounds is None:
            raise GenomeError("real_vector genome needs values and bounds")
        if len(g.values) != len(g.bounds):
            raise GenomeError(
                f"values/bounds length mismatch: {len(g.values)} != {len(g.bounds)}"
            )
        for i, (v, (lo, hi)) in enumerate(zip(g.values, g.bounds)):
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
                raise GenomeError(f"invalid bound at index {i}: ({lo}, {hi})")
            if not math.isfinite(v):
                raise GenomeError(f"non-finite value at index {i}")
            if v < lo or v > hi:
                raise GenomeError(f"value {v} at index {i} outside [{lo}, {hi}]")
    elif g.kind == "text":
        if not g.text:
            raise GenomeError("text genome must be non-empty")
    else:
        raise GenomeError(f"unknown genome kind: {g.kind!r}")


@dataclass(frozen=True)
class Candidate:
    """A genome plus lineage, island, generation, and provenance metadata."""

    id: str
    genome: Genome
    parent_ids: tuple[str, ...] = ()
    island_id: int = -1
    generation: int = 0
    provenance: str = ""
    created_seq: int = 0

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "genome": self.genome.to_dict(),
            "parent_ids": list(self.parent_ids),
            "island_id": self.island_id,
            "generation": self.generation,
            "provenance": self.provenance,
            "created_seq": self.created_seq,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Candidate":
        return cls(
            id=data["id"],
            genome=Genome.from_dict(data["genome"]),
            parent_ids=tuple(data["parent_ids"]),
            island_id=data["island_id"],
            generation=data["generation"],
            provenance=data["provenance"],
            created_seq=data["created_seq"],
        )


@dataclass(frozen=True)
class FitnessReport:
    """Evaluation outcome: correctness gate, score, optional judge, combined key."""

    correct: bool
    effectiveness: float
    combined: float
    judge_score: float | None = None
    eval_seconds: float = 0.0
    failure: str | None = None

    def to_dict(self) -> dict:
        return {
            "correct": self.correct,
            "effectiveness": self.effectiveness,
            "combined": self.combined,
            "judge_score": self.judge_score,
            "eval_seconds": self.eval_seconds,
            "failure": self.failure,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FitnessReport":
        return cls(
            correct=data["correct"],
            effectiveness=data["effectiveness"],
            combined=data["combined"],
            judge_score=data["judge_score"],
            eval_seconds=data["eval_seconds"],
            failure=data["failure"],
        )


def make_report(
    correct: bool,
    effectiveness: float,
    w_e: float = 1.0,
    w_j: float = 0.0,
    judge_score: float | None = None,
    eval_seconds: float = 0.0,
    failure: str | None = None,
) -> FitnessReport:
    """Build a report with the combined-fitness invariant applied."""
    if correct:
        combined = w_e * effectiveness + w_j * (judge_score if judge_score is not None else 0.0)
    else:
        combined = SENTINEL_MIN
        effectiveness = SENTINEL_MIN
    return FitnessReport(
        correct=correct,
        effectiveness=effectiveness,
        combined=combined,
        judge_score=judge_score,
        eval_seconds=eval_seconds,
        failure=failure,
    )


@dataclass(frozen=True)
class EliteEntry:
    id: str
    combined: float
    created_seq: int


class ElitePool:
    """Fixed-capacity archive of the best candidates on one island.

    Entries are kept sorted by combined fitness descending, ties broken by
    created_seq ascending (older candidate wins). Membership is therefore a
    pure function of the set of updates applied, independent of their order.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("elite capacity must be positive")
        self.capacity = capacity
        self.entries: list[EliteEntry] = []

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def ids(self) -> list[str]:
        return [e.id for e in self.entries]

    def update(self, candidate_id: str, combined: float, created_seq: int) -> bool:
        """Offer a candidate to the pool; return True iff it is now a member."""
        if any(e.id == candidate_id for e in self.entries):
            return False
        self.entries.append(EliteEntry(candidate_id, combined, created_seq))
        self.entries.sort(key=lambda e: (-e.combined, e.created_seq))
        dropped = self.entries[self.capacity:]
        del self.entries[self.capacity:]
        return all(e.id != candidate_id for e in dropped)

    def top(self, n: int) -> list[EliteEntry]:
        return self.entries[:n]

    def to_list(self) -> list[dict]:
        return [
            {"id": e.id, "combined": e.combined, "created_seq": e.created_seq}
            for e in self.entries
        ]


def elite_update(pool: ElitePool, candidate_id: str, combined: float, created_seq: int) -> bool:
    """Functional alias for ElitePool.update."""
    return pool.update(candidate_id, combined, created_seq)


@dataclass
class Record:
    candidate: Candidate
    report: FitnessReport | None = None


class PopulationDB:
    """Append-only store of candidates and their fitness reports.

    Inserts are idempotent by candidate id; created_seq strictly increases
    across accepted inserts. Each island gets an elite pool that is updated
    whenever a correct report is recorded.
    """

    def __init__(self, elite_capacity: int = 10):
        self._records: dict[str, Record] = {}
        self._island_ids: dict[int, list[str]] = {}
        self._cluster_index: dict[int, dict[str, int]] = {}
        self._elites: dict[int, ElitePool] = {}
        self._next_seq = 1
        self._lock = threading.Lock()
        self.elite_capacity = elite_capacity

    def insert_candidate(self, c: Candidate) -> bool:
        """Insert a candidate, assigning its created_seq. False if id exists."""
        validate_genome(c.genome)
        if len(c.parent_ids) > 2:
            raise PopulationError(f"candidate {c.id} has {len(c.parent_ids)} parents")
        if c.island_id < 0:
            raise PopulationError(f"candidate {c.id} has no island assignment")
        with self._lock:
            if c.id in self._records:
                return False
            for pid in c.parent_ids:
                if pid not in self._records:
                    raise PopulationError(f"unknown parent id {pid} for candidate {c.id}")
            stored = replace(c, created_seq=self._next_seq)
            self._next_seq += 1
            self._records[c.id] = Record(candidate=stored)
            self._island_ids.setdefault(c.island_id, []).append(c.id)
            return True

    def record_fitness(self, candidate_id: str, report: FitnessReport) -> None:
        """Store a report exactly once; raises on unknown or already-evaluated id."""
        if not self.try_record_fitness(candidate_id, report):
            raise PopulationError(f"candidate {candidate_id} already evaluated")

    def try_record_fitness(self, candidate_id: str, report: FitnessReport) -> bool:
        """Idempotent report application; False if a report already exists."""
        if not report.correct and report.combined != SENTINEL_MIN:
            raise PopulationError("incorrect candidate must carry the sentinel combined")
        with self._lock:
            rec = self._records.get(candidate_id)
            if rec is None:
                raise PopulationError(f"unknown candidate id {candidate_id}")
            if rec.report is not None:
                return False
            rec.report = report
            if report.correct:
                pool = self._elite_pool_locked(rec.candidate.island_id)
                pool.update(candidate_id, report.combined, rec.candidate.created_seq)
            return True

    def _elite_pool_locked(self, island_id: int) -> ElitePool:
        pool = self._elites.get(island_id)
        if pool is None:
            pool = ElitePool(self.elite_capacity)
            self._elites[island_id] = pool
        return pool

    def elite(self, island_id: int) -> ElitePool:
        with self._lock:
            return self._elite_pool_locked(island_id)

    def get(self, candidate_id: str) -> Record:
        with self._lock:
            rec = self._records.get(candidate_id)
            if rec is None:
                raise PopulationError(f"unknown candidate id {candidate_id}")
            return Record(rec.candidate, rec.report)

    def __contains__(self, candidate_id: str) -> bool:
        with self._lock:
            return candidate_id in self._records

    def __len__(self) -> int:
        with self._lock:
            return len(self._records)

    @property
    def next_seq(self) -> int:
        with self._lock:
            return self._next_seq

    def island_ids(self) -> list[int]:
        with self._lock:
            return sorted(self._island_ids)

    def candidates_on_island(self, island_id: int) -> list[Candidate]:
        with self._lock:
            return [self._records[i].candidate for i in self._island_ids.get(island_id, [])]

    def evaluated_on_island(self, island_id: int) -> list[tuple[Candidate, FitnessReport]]:
        """Evaluated correct candidates on an island, sorted by candidate id.

        Id order is derived purely from the run seed, so downstream consumers
        (clustering, selection, diversity) see the same input regardless of
        how concurrent inserts interleaved.
        """
        with self._lock:
            out = []
            for cid in self._island_ids.get(island_id, []):
                rec = self._records[cid]
                if rec.report is not None and rec.report.correct:
                    out.append((rec.candidate, rec.report))
        out.sort(key=lambda cr: cr[0].id)
        return out

    def set_clusters(self, island_id: int, cluster_ids: dict[str, int]) -> None:
        with self._lock:
            self._cluster_index[island_id] = dict(cluster_ids)

    def clusters(self, island_id: int) -> dict[str, int]:
        with self._lock:
            return dict(self._cluster_index.get(island_id, {}))

    def best(self) -> tuple[Candidate, FitnessReport] | None:
        """Best evaluated correct candidate by (combined desc, created_seq asc)."""
        with self._lock:
            best = None
            for rec in self._records.values():
                if rec.report is None or not rec.report.correct:
                    continue
                key = (-rec.report.combined, rec.candidate.created_seq)
                if best is None or key < best[0]:
                    best = (key, rec)
            if best is None:
                return None
            return best[1].candidate, best[1].report

    def all_records(self) -> list[Record]:
        """All records in created_seq order."""
        with self._lock:
            recs = [Record(r.candidate, r.report) for r in self._records.values()]
        recs.sort(key=lambda r: r.candidate.created_seq)
        return recs

    # restore path for event-log replay: trusts recorded created_seq values
    def restore_candidate(self, c: Candidate) -> None:
        with self._lock:
            if c.id in self._records:
                return
            self._records[c.id] = Record(candidate=c)
            self._island_ids.setdefault(c.island_id, []).append(c.id)
            self._next_seq = max(self._next_seq, c.created_seq + 1)


def insert_candidate(db: PopulationDB, c: Candidate) -> bool:
    return db.insert_candidate(c)


def record_fitness(db: PopulationDB, candidate_id: str, report: FitnessReport) -> None:
    db.record_fitness(candidate_id, report)
