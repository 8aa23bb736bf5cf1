"""Workload registry: maps workload names to genome spaces and scorers so the
evaluator and the run presets can be configured by name."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..core import Genome
from . import benchmarks, hermite, packing, pointset
from .benchmarks import rastrigin, sphere
from .hermite import (
    HermiteCoeffs,
    build_quotient,
    de_search,
    hermite_coefficients,
    uncertainty_objective,
)
from .packing import (
    PackingHyperparams,
    construct_packing,
    lattice_init,
    packing_gradients,
    solve_radii_lp,
    validate_packing,
)
from .pointset import (
    calculate_ratio,
    initial_configurations,
    multi_start_ratio_solve,
    ratio_constraints,
)
from .temporal import TemporalSeries, ew_changes, ewma, ewvol, risk_score


@dataclass(frozen=True)
class WorkloadDef:
    """A named genome space plus a scorer returning (correct, effectiveness, note)."""

    name: str
    default_bounds: tuple[tuple[float, float], ...]
    score: Callable[[Genome], tuple[bool, float, str | None]]
    dim_configurable: bool = False


def _score_sphere(genome: Genome):
    return True, sphere(genome.values), None


def _score_rastrigin(genome: Genome):
    return True, rastrigin(genome.values), None


def _score_packing(genome: Genome):
    centers = np.asarray(genome.values, dtype=float).reshape(-1, 2)
    radii = packing.solve_radii_lp(centers)
    ok, violations = packing.validate_packing(centers, radii, tol=1e-9)
    if not ok:
        return False, 0.0, "; ".join(violations[:3])
    return True, float(radii.sum()), None


def _score_pointset(genome: Genome):
    points = np.asarray(genome.values, dtype=float).reshape(-1, 2)
    ratio = pointset.calculate_ratio(points)
    if ratio >= pointset.RATIO_SENTINEL:
        return False, 0.0, "degenerate point set (coincident points)"
    return True, -float(ratio) ** 2, None


def _score_hermite(genome: Genome):
    c = hermite.HermiteCoeffs(*[float(v) for v in genome.values])
    return True, -hermite.uncertainty_objective(c), None


def _uniform_bounds(lo: float, hi: float, dim: int):
    return tuple((lo, hi) for _ in range(dim))


WORKLOADS: dict[str, WorkloadDef] = {
    "sphere": WorkloadDef(
        "sphere", _uniform_bounds(-5.12, 5.12, 10), _score_sphere, dim_configurable=True
    ),
    "rastrigin": WorkloadDef(
        "rastrigin", _uniform_bounds(-5.12, 5.12, 10), _score_rastrigin, dim_configurable=True
    ),
    "packing": WorkloadDef(
        "packing", _uniform_bounds(0.001, 0.999, 52), _score_packing
    ),
    "pointset": WorkloadDef(
        "pointset", _uniform_bounds(-3.0, 3.0, 32), _score_pointset
    ),
    "hermite": WorkloadDef("hermite", hermite.COEFF_BOUNDS, _score_hermite),
}


def workload_bounds(name: str, dim: int | None = None) -> tuple[tuple[float, float], ...]:
    wd = WORKLOADS[name]
    if dim is not None:
        if not wd.dim_configurable:
            raise ValueError(f"workload {name} has a fixed dimension")
        lo, hi = wd.default_bounds[0]
        return _uniform_bounds(lo, hi, dim)
    return wd.default_bounds


__all__ = [
    "WORKLOADS",
    "WorkloadDef",
    "workload_bounds",
    "sphere",
    "rastrigin",
    "benchmarks",
    "PackingHyperparams",
    "construct_packing",
    "lattice_init",
    "packing_gradients",
    "solve_radii_lp",
    "validate_packing",
    "calculate_ratio",
    "ratio_constraints",
    "multi_start_ratio_solve",
    "initial_configurations",
    "HermiteCoeffs",
    "hermite_coefficients",
    "build_quotient",
    "uncertainty_objective",
    "de_search",
    "TemporalSeries",
    "ewma",
    "ewvol",
    "risk_score",
    "ew_changes",
]
