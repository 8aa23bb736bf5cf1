"""Island lifecycle: cold-start partitioning of the seed population into
islands by genome similarity, per-island state refresh, and periodic ring
migration of elites between islands.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .core import Candidate, ElitePool, PopulationDB
from .sampling import ClusterAssignment, IslandSnapshot, cluster_island, compute_diversity, genome_distance

logger = logging.getLogger(__name__)


@dataclass
class MigrationPolicy:
    topology: str = "ring"
    interval: int = 10
    count: int = 2

    def validate(self, elite_capacity: int) -> None:
        if self.topology != "ring":
            raise ValueError(f"unknown topology {self.topology!r}")
        if self.interval < 1 or self.count < 1:
            raise ValueError("interval and count must be positive")
        if self.count > elite_capacity:
            raise ValueError("migration count cannot exceed elite capacity")

    def to_dict(self) -> dict:
        return {"topology": self.topology, "interval": self.interval, "count": self.count}


@dataclass
class IslandState:
    id: int
    elite: ElitePool | None = None
    generation: int = 0
    clusters: ClusterAssignment | None = None
    diversity: float = 0.0
    member_ids: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "generation": self.generation,
            "diversity": self.diversity,
            "clusters": self.clusters.to_dict() if self.clusters else None,
            "elite": self.elite.to_list() if self.elite else [],
        }


def cold_start_partition(
    candidates: list[Candidate], n_islands: int, seed: int
) -> list[IslandState]:
    """Split the seed pool into n_islands by clustering genome similarity.

    Cluster j seeds island j. Clustering can leave fewer than n_islands
    nonempty groups (duplicate genomes); empty islands are backfilled by
    moving the farthest-from-centroid member out of the largest cluster.
    """
    if n_islands < 1:
        raise ValueError("need at least one island")
    if len(candidates) < n_islands:
        raise ValueError(f"{len(candidates)} candidates cannot seed {n_islands} islands")

    assignment = cluster_island(candidates, n_islands, seed)
    groups: dict[int, list[Candidate]] = {}
    for c in candidates:
        groups.setdefault(assignment.cluster_ids[c.id], []).append(c)
    buckets = [groups.get(j, []) for j in range(n_islands)]

    while any(not b for b in buckets):
        target = next(j for j, b in enumerate(buckets) if not b)
        donor = max(range(n_islands), key=lambda j: len(buckets[j]))
        moved = _farthest_member(buckets[donor])
        buckets[donor].remove(moved)
        buckets[target].append(moved)

    islands = []
    for j, bucket in enumerate(buckets):
        islands.append(
            IslandState(id=j, member_ids=[c.id for c in bucket])
        )
    return islands


def _farthest_member(bucket: list[Candidate]) -> Candidate:
    """Member farthest from the bucket's medoid-style center."""
    if len(bucket) == 1:
        return bucket[0]
    total = [
        sum(genome_distance(a.genome, b.genome) for b in bucket if b is not a)
        for a in bucket
    ]
    return bucket[int(np.argmax(total))]


def refresh_island(island: IslandState, db: PopulationDB, k: int, seed: int) -> None:
    """Recompute clusters and diversity over the island's evaluated-correct
    population (the sampleable pool)."""
    pool = db.evaluated_on_island(island.id)
    if not pool:
        island.clusters = None
        island.diversity = 0.0
        return
    candidates = [c for c, _ in pool]
    island.clusters = cluster_island(candidates, k, seed)
    island.diversity = compute_diversity([c.genome for c in candidates])
    db.set_clusters(island.id, island.clusters.cluster_ids)


def snapshot_island(island: IslandState, db: PopulationDB) -> IslandSnapshot:
    return IslandSnapshot(
        pool=db.evaluated_on_island(island.id),
        elite_ids=island.elite.ids if island.elite else [],
        clusters=island.clusters,
        diversity=island.diversity,
    )


@dataclass
class MigrationRecord:
    pairs: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"pairs": list(self.pairs)}


def migrate(
    islands: list[IslandState],
    db: PopulationDB,
    policy: MigrationPolicy,
    make_id,
) -> MigrationRecord:
    """Ring migration: island i copies its top elites to island (i+1) mod n as
    fresh candidates (new ids, provenance "migration"); sources keep theirs.
    Islands holding fewer elites than the policy count send what they have.
    The copied candidates are inserted with their source's fitness report.
    """
    record = MigrationRecord()
    n = len(islands)
    if n <= 1:
        return record
    # snapshot elites first so same-boundary arrivals cannot cascade around the ring
    outgoing = {isl.id: (isl.elite.top(policy.count) if isl.elite else []) for isl in islands}
    for idx, source in enumerate(islands):
        target = islands[(idx + 1) % n]
        for entry in outgoing[source.id]:
            src = db.get(entry.id)
            new_id = make_id("migration", source.id, target.id, entry.id)
            copy = Candidate(
                id=new_id,
                genome=src.candidate.genome,
                parent_ids=(entry.id,),
                island_id=target.id,
                generation=target.generation,
                provenance="migration",
            )
            if not db.insert_candidate(copy):
                continue  # same migration already applied
            db.record_fitness(new_id, src.report)
            target.member_ids.append(new_id)
            record.pairs.append(
                {
                    "source_id": entry.id,
                    "new_id": new_id,
                    "from_island": source.id,
                    "to_island": target.id,
                }
            )
    return record
