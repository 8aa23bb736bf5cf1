"""Parent selection: the adaptive diversity-driven strategy plus the random
and top-k baselines used in ablations.

The adaptive strategy clusters each island's evaluated-correct population,
then picks clusters and members by softmax over min-max-normalized combined
fitness at a temperature tied to the island's genome-space diversity: high
diversity softens selection (exploration), low diversity sharpens it
(exploitation) while boosting the chance of a uniform cluster pick.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .core import Candidate, FitnessReport, Genome

STRATEGIES = ("adaptive", "random", "top_k")


@dataclass
class SamplerConfig:
    strategy: str = "adaptive"
    k: int = 10
    tau_min: float = 0.05
    tau_max: float = 0.3
    epsilon_max: float = 0.25
    p_elite: float = 0.3
    clusters_per_island: int = 5

    def validate(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        if self.k < 1 or self.clusters_per_island < 1:
            raise ValueError("k and clusters_per_island must be positive")
        if not (0 < self.tau_min <= self.tau_max):
            raise ValueError("need 0 < tau_min <= tau_max")
        if not (0 <= self.epsilon_max <= 1 and 0 <= self.p_elite <= 1):
            raise ValueError("epsilon_max and p_elite must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "k": self.k,
            "tau_min": self.tau_min,
            "tau_max": self.tau_max,
            "epsilon_max": self.epsilon_max,
            "p_elite": self.p_elite,
            "clusters_per_island": self.clusters_per_island,
        }


@dataclass
class ClusterAssignment:
    """Candidate-to-cluster map plus per-cluster centroids (or medoid ids)."""

    cluster_ids: dict[str, int] = field(default_factory=dict)
    centroids: list = field(default_factory=list)

    @property
    def n_clusters(self) -> int:
        return len(self.centroids)

    def to_dict(self) -> dict:
        return {"cluster_ids": dict(self.cluster_ids), "centroids": list(self.centroids)}


def _tokens(text: str) -> Counter:
    return Counter(text.split())


def _jaccard_multiset(a: Counter, b: Counter) -> float:
    inter = sum((a & b).values())
    union = sum((a | b).values())
    if union == 0:
        return 1.0
    return inter / union


def genome_distance(a: Genome, b: Genome) -> float:
    """Normalized distance in [0, 1]; zero iff equal values/tokens."""
    if a.kind != b.kind:
        raise ValueError(f"genome kind mismatch: {a.kind} vs {b.kind}")
    if a.kind == "real_vector":
        if a.bounds != b.bounds:
            raise ValueError("real_vector genomes must share bounds")
        ua = _normalize(np.asarray(a.values), a.bounds)
        ub = _normalize(np.asarray(b.values), b.bounds)
        return float(np.linalg.norm(ua - ub) / np.sqrt(len(a.values)))
    return 1.0 - _jaccard_multiset(_tokens(a.text), _tokens(b.text))


def _normalize(values: np.ndarray, bounds) -> np.ndarray:
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    span = hi - lo
    span[span == 0] = 1.0  # degenerate dimension contributes zero distance
    return (values - lo) / span


def compute_diversity(genomes: list[Genome]) -> float:
    """Mean pairwise genome_distance over all unordered pairs; 0 for singleton."""
    if not genomes:
        raise ValueError("empty population has no diversity")
    n = len(genomes)
    if n == 1:
        return 0.0
    if genomes[0].kind == "real_vector":
        mat = np.array([_normalize(np.asarray(g.values), g.bounds) for g in genomes])
        dists = pdist(mat) / np.sqrt(mat.shape[1])
        return float(np.mean(dists))
    total = 0.0
    toks = [_tokens(g.text) for g in genomes]
    for i in range(n):
        for j in range(i + 1, n):
            total += 1.0 - _jaccard_multiset(toks[i], toks[j])
    return total / (n * (n - 1) / 2)


def _farthest_point_seeds(dist: np.ndarray, k: int, rng: np.random.Generator) -> list[int]:
    n = dist.shape[0]
    first = int(rng.integers(n))
    chosen = [first]
    nearest = dist[first].copy()
    while len(chosen) < k:
        idx = int(np.argmax(nearest))  # argmax takes the lowest index on ties
        chosen.append(idx)
        nearest = np.minimum(nearest, dist[idx])
    return chosen


def cluster_island(candidates: list[Candidate], k: int, seed: int) -> ClusterAssignment:
    """K-means on normalized coordinates (real vectors) or K-medoids under
    genome_distance (text), with seeded farthest-point initialization and at
    most 50 refinement rounds. Empty clusters are dropped."""
    if not candidates:
        raise ValueError("cannot cluster an empty population")
    k = min(k, len(candidates))
    rng = np.random.default_rng(seed)
    if candidates[0].genome.kind == "real_vector":
        return _kmeans(candidates, k, rng)
    return _kmedoids(candidates, k, rng)


def _kmeans(candidates: list[Candidate], k: int, rng: np.random.Generator) -> ClusterAssignment:
    mat = np.array([_normalize(np.asarray(c.genome.values), c.genome.bounds) for c in candidates])
    dist = squareform(pdist(mat)) if len(candidates) > 1 else np.zeros((1, 1))
    seeds = _farthest_point_seeds(dist, k, rng)
    centroids = mat[seeds].copy()
    labels = None
    for _round in range(50):
        d2 = ((mat[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = np.argmin(d2, axis=1)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            members = mat[labels == j]
            if len(members):
                centroids[j] = members.mean(axis=0)
    return _pack_assignment(candidates, labels, [centroids[j].tolist() for j in range(k)])


def _kmedoids(candidates: list[Candidate], k: int, rng: np.random.Generator) -> ClusterAssignment:
    n = len(candidates)
    toks = [_tokens(c.genome.text) for c in candidates]
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            d = 1.0 - _jaccard_multiset(toks[i], toks[j])
            dist[i, j] = dist[j, i] = d
    medoids = _farthest_point_seeds(dist, k, rng)
    labels = np.argmin(dist[:, medoids], axis=1)
    for _ in range(50):
        new_medoids = []
        for j in range(len(medoids)):
            members = np.where(labels == j)[0]
            if len(members) == 0:
                new_medoids.append(medoids[j])
                continue
            within = dist[np.ix_(members, members)].sum(axis=1)
            new_medoids.append(int(members[int(np.argmin(within))]))
        new_labels = np.argmin(dist[:, new_medoids], axis=1)
        if new_medoids == medoids and np.array_equal(new_labels, labels):
            break
        medoids, labels = new_medoids, new_labels
    return _pack_assignment(candidates, labels, [candidates[m].id for m in medoids])


def _pack_assignment(candidates, labels, centroids) -> ClusterAssignment:
    used = sorted(set(int(l) for l in labels))
    remap = {old: new for new, old in enumerate(used)}
    return ClusterAssignment(
        cluster_ids={c.id: remap[int(l)] for c, l in zip(candidates, labels)},
        centroids=[centroids[old] for old in used],
    )


@dataclass
class IslandSnapshot:
    """Read-only view of one island's sampleable state."""

    pool: list[tuple[Candidate, FitnessReport]]  # evaluated correct, created_seq order
    elite_ids: list[str]
    clusters: ClusterAssignment | None
    diversity: float


def _softmax_pick(rng: np.random.Generator, scores: np.ndarray, tau: float) -> int:
    span = scores.max() - scores.min()
    z = (scores - scores.min()) / span if span > 0 else np.zeros_like(scores)
    w = np.exp((z - z.max()) / tau)  # max-shifted to keep exp finite at tiny tau
    return int(rng.choice(len(scores), p=w / w.sum()))


def select_parents(
    snapshot: IslandSnapshot,
    config: SamplerConfig,
    n_parents: int,
    rng: np.random.Generator,
) -> list[str]:
    """Select parent candidate ids; never returns an unevaluated or incorrect one."""
    if n_parents not in (1, 2):
        raise ValueError("n_parents must be 1 or 2")
    pool = snapshot.pool
    if not pool:
        raise ValueError("island has no evaluated correct candidate")
    if config.strategy == "random":
        return [pool[int(rng.integers(len(pool)))][0].id for _ in range(n_parents)]
    if config.strategy == "top_k":
        ranked = sorted(pool, key=lambda cr: (-cr[1].combined, cr[0].created_seq))
        top = ranked[: min(config.k, len(ranked))]
        return [top[int(rng.integers(len(top)))][0].id for _ in range(n_parents)]
    return [_adaptive_pick(snapshot, config, rng) for _ in range(n_parents)]


def _adaptive_pick(snapshot: IslandSnapshot, config: SamplerConfig, rng) -> str:
    pool = snapshot.pool
    pool_ids = {c.id for c, _ in pool}
    if snapshot.elite_ids and rng.random() < config.p_elite:
        usable = [i for i in snapshot.elite_ids if i in pool_ids]
        if usable:
            return usable[int(rng.integers(len(usable)))]
    d = snapshot.diversity
    tau = config.tau_min + (config.tau_max - config.tau_min) * d

    by_cluster: dict[int, list[tuple[Candidate, FitnessReport]]] = {}
    assigned = snapshot.clusters.cluster_ids if snapshot.clusters else {}
    for cand, rep in pool:
        by_cluster.setdefault(assigned.get(cand.id, 0), []).append((cand, rep))
    cluster_keys = sorted(by_cluster)

    if len(cluster_keys) == 1:
        members = by_cluster[cluster_keys[0]]
    else:
        eps = config.epsilon_max * (1.0 - d)
        if rng.random() < eps:
            members = by_cluster[cluster_keys[int(rng.integers(len(cluster_keys)))]]
        else:
            best = np.array(
                [max(r.combined for _, r in by_cluster[key]) for key in cluster_keys]
            )
            members = by_cluster[cluster_keys[_softmax_pick(rng, best, tau)]]
    scores = np.array([r.combined for _, r in members])
    return members[_softmax_pick(rng, scores, tau)][0].id
