"""Candidate production: built-in variation operators, a deterministic mock
standing in for an LLM generator, and a generic HTTP client for external
generators. Also the cold-start routine that seeds the initial population by
cycling a set of generator specs round-robin.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field

import numpy as np
import requests

from .core import Candidate, Genome, real_vector, text_genome
from .seeds import derive_rng

logger = logging.getLogger(__name__)

GENERATOR_KINDS = ("gaussian_mutation", "blend_crossover", "reseed", "mock_llm", "external")

DEFAULT_SIGMA_FRAC = 0.05
DEFAULT_ALPHA = 0.5
DEFAULT_TIMEOUT = 30.0


class GenerationError(RuntimeError):
    """A generator failed to produce a genome (retryable at the pipeline level)."""


@dataclass
class GeneratorSpec:
    name: str
    kind: str
    params: dict = field(default_factory=dict)
    guidance: str | None = None

    def validate(self) -> None:
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.kind == "gaussian_mutation" and self.sigma_frac <= 0:
            raise ValueError("sigma_frac must be positive")
        if self.kind == "blend_crossover" and not (0 < self.alpha <= 1):
            raise ValueError("alpha must lie in (0, 1]")
        if self.kind == "external" and not self.params.get("endpoint"):
            raise ValueError("external generator needs an endpoint")

    @property
    def sigma_frac(self) -> float:
        return float(self.params.get("sigma_frac", DEFAULT_SIGMA_FRAC))

    @property
    def alpha(self) -> float:
        return float(self.params.get("alpha", DEFAULT_ALPHA))

    def to_dict(self) -> dict:
        return {"name": self.name, "kind": self.kind, "params": dict(self.params),
                "guidance": self.guidance}


def _arity(kind: str) -> tuple[int, int]:
    return {
        "gaussian_mutation": (1, 1),
        "blend_crossover": (2, 2),
        "reseed": (0, 0),
        "mock_llm": (0, 1),
        "external": (0, 2),
    }[kind]


def propose(
    spec: GeneratorSpec,
    parents: list[Candidate],
    rng: np.random.Generator,
    bounds=None,
) -> Genome:
    """Produce a child genome. Out-of-bounds coordinates are always clamped,
    so the result satisfies the genome invariants whenever the inputs do."""
    lo_n, hi_n = _arity(spec.kind)
    if not (lo_n <= len(parents) <= hi_n):
        raise GenerationError(
            f"{spec.kind} takes {lo_n}..{hi_n} parents, got {len(parents)}"
        )
    if bounds is None and parents and parents[0].genome.kind == "real_vector":
        bounds = parents[0].genome.bounds

    if spec.kind == "gaussian_mutation":
        return _gaussian_mutation(spec, parents[0].genome, rng)
    if spec.kind == "blend_crossover":
        return _blend_crossover(spec, parents[0].genome, parents[1].genome, rng)
    if spec.kind == "reseed":
        return _reseed(bounds, rng)
    if spec.kind == "mock_llm":
        if not parents:
            return _reseed(bounds, rng)
        return _mock_llm(spec, parents[0].genome)
    return _external(spec, parents, bounds)


def _require_bounds(bounds):
    if not bounds:
        raise GenerationError("generator needs bounds for a parentless proposal")
    return [(float(lo), float(hi)) for lo, hi in bounds]


def _clamp(values: np.ndarray, bounds) -> np.ndarray:
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    return np.clip(values, lo, hi)


def _gaussian_mutation(spec: GeneratorSpec, parent: Genome, rng) -> Genome:
    if parent.kind != "real_vector":
        raise GenerationError("gaussian_mutation needs a real_vector parent")
    bounds = parent.bounds
    widths = np.array([hi - lo for lo, hi in bounds])
    child = np.asarray(parent.values) + rng.normal(0.0, 1.0, len(bounds)) * (
        spec.sigma_frac * widths
    )
    return real_vector(_clamp(child, bounds), bounds)


def _blend_crossover(spec: GeneratorSpec, a: Genome, b: Genome, rng) -> Genome:
    if a.kind != "real_vector" or b.kind != "real_vector":
        raise GenerationError("blend_crossover needs real_vector parents")
    if a.bounds != b.bounds:
        raise GenerationError("blend_crossover parents must share bounds")
    u = rng.uniform(-spec.alpha, 1.0 + spec.alpha, len(a.values))
    child = u * np.asarray(a.values) + (1.0 - u) * np.asarray(b.values)
    return real_vector(_clamp(child, a.bounds), a.bounds)


def _reseed(bounds, rng) -> Genome:
    bounds = _require_bounds(bounds)
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    return real_vector(lo + rng.random(len(bounds)) * (hi - lo), bounds)


def _mock_llm(spec: GeneratorSpec, parent: Genome) -> Genome:
    """Deterministic stand-in for an LLM: a pure function of the parent genome,
    the guidance text, and the spec params."""
    key = hashlib.sha256()
    if parent.kind == "real_vector":
        key.update(repr(tuple(parent.values)).encode())
        key.update(repr(tuple(parent.bounds)).encode())
    else:
        key.update(parent.text.encode())
    key.update((spec.guidance or "").encode())
    key.update(repr(sorted(spec.params.items())).encode())
    rng = derive_rng("mock_llm", key.hexdigest())
    if parent.kind == "text":
        words = parent.text.split()
        rng.shuffle(words)
        return text_genome(" ".join(words) or parent.text)
    widths = np.array([hi - lo for lo, hi in parent.bounds])
    child = np.asarray(parent.values) + rng.normal(0.0, 1.0, len(parent.bounds)) * (
        spec.sigma_frac * widths
    )
    return real_vector(_clamp(child, parent.bounds), parent.bounds)


def _external(spec: GeneratorSpec, parents: list[Candidate], bounds) -> Genome:
    bounds = _require_bounds(bounds)
    body = {
        "parents": [p.genome.to_dict() for p in parents],
        "guidance": spec.guidance or "",
        "bounds": [list(b) for b in bounds],
    }
    timeout = float(spec.params.get("timeout_seconds", DEFAULT_TIMEOUT))
    try:
        resp = requests.post(spec.params["endpoint"], json=body, timeout=timeout)
    except requests.RequestException as exc:
        raise GenerationError(f"external generator request failed: {exc}") from exc
    if not (200 <= resp.status_code < 300):
        raise GenerationError(f"external generator returned {resp.status_code}")
    try:
        values = resp.json()["values"]
        if len(values) != len(bounds):
            raise ValueError(f"expected {len(bounds)} values, got {len(values)}")
        arr = np.asarray([float(v) for v in values])
    except (ValueError, KeyError, TypeError) as exc:
        raise GenerationError(f"malformed external generator reply: {exc}") from exc
    if not np.all(np.isfinite(arr)):
        raise GenerationError("external generator reply contains non-finite values")
    return real_vector(_clamp(arr, bounds), bounds)


def cold_start_generate(
    specs: list[GeneratorSpec],
    budget: int,
    bounds,
    rng: np.random.Generator,
    make_id,
) -> list[Candidate]:
    """Produce exactly `budget` generation-0 candidates by cycling the specs
    round-robin; a failing spec's slot degrades to a reseed draw."""
    if budget < 0:
        raise ValueError("budget must be non-negative")
    if not specs:
        specs = [GeneratorSpec(name="reseed", kind="reseed")]
    if not any(_arity(s.kind)[0] == 0 for s in specs):
        raise ValueError("cold start needs at least one zero-parent-capable generator")
    out = []
    for i in range(budget):
        spec = specs[i % len(specs)]
        if _arity(spec.kind)[0] > 0:  # parentful operator cannot run yet
            spec = GeneratorSpec(name=spec.name, kind="reseed")
        try:
            genome = propose(spec, [], rng, bounds=bounds)
        except GenerationError as exc:
            logger.warning("cold start generator %s failed (%s); reseeding", spec.name, exc)
            genome = _reseed(bounds, rng)
        out.append(
            Candidate(
                id=make_id(i),
                genome=genome,
                parent_ids=(),
                island_id=-1,
                generation=0,
                provenance=spec.name,
            )
        )
    return out
