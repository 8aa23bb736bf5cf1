"""evoisle: an island-model evolutionary search engine.

Cold-start population seeding, adaptive diversity-driven parent sampling,
pluggable generators and evaluators, an asynchronous generate-evaluate
pipeline, and a live operator intervention channel, shipped with numerical
workloads (circle packing, point-set ratio minimization, an
uncertainty-inequality bound, and synthetic benchmark landscapes).
"""

from .core import (
    SENTINEL_MIN,
    Candidate,
    ElitePool,
    FitnessReport,
    Genome,
    GenomeError,
    PopulationDB,
    PopulationError,
    elite_update,
    insert_candidate,
    make_report,
    real_vector,
    record_fitness,
    text_genome,
    validate_genome,
)
from .evaluation import EvaluatorSpec, evaluate, judge_score, mock_judge
from .events import CorruptLogError, Event, EventLog
from .generation import GenerationError, GeneratorSpec, cold_start_generate, propose
from .islands import (
    IslandState,
    MigrationPolicy,
    cold_start_partition,
    migrate,
    refresh_island,
    snapshot_island,
)
from .pipeline import (
    Engine,
    EngineConfig,
    PipelineConfig,
    RunResult,
    StopCondition,
    Task,
    run_pipeline,
)
from .sampling import (
    ClusterAssignment,
    IslandSnapshot,
    SamplerConfig,
    cluster_island,
    compute_diversity,
    genome_distance,
    select_parents,
)
from .seeds import derive_id, derive_rng, derive_seed

__version__ = "0.1.0"

__all__ = [
    "SENTINEL_MIN",
    "Candidate",
    "ElitePool",
    "FitnessReport",
    "Genome",
    "GenomeError",
    "PopulationDB",
    "PopulationError",
    "elite_update",
    "insert_candidate",
    "make_report",
    "real_vector",
    "record_fitness",
    "text_genome",
    "validate_genome",
    "EvaluatorSpec",
    "evaluate",
    "judge_score",
    "mock_judge",
    "CorruptLogError",
    "Event",
    "EventLog",
    "GenerationError",
    "GeneratorSpec",
    "cold_start_generate",
    "propose",
    "IslandState",
    "MigrationPolicy",
    "cold_start_partition",
    "migrate",
    "refresh_island",
    "snapshot_island",
    "Engine",
    "EngineConfig",
    "PipelineConfig",
    "RunResult",
    "StopCondition",
    "Task",
    "run_pipeline",
    "ClusterAssignment",
    "IslandSnapshot",
    "SamplerConfig",
    "cluster_island",
    "compute_diversity",
    "genome_distance",
    "select_parents",
    "derive_id",
    "derive_rng",
    "derive_seed",
]
