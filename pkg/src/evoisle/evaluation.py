"""The evaluator contract: turn a genome into a FitnessReport, never raising.

Every failure mode (invalid genome, workload crash, timeout, judge error) is
encoded in the report so the pipeline can treat evaluation as total. A
watchdog thread enforces the per-call timeout; stalled workloads are reported
as timeouts while the stuck thread is abandoned as a daemon.
"""

from __future__ import annotations

import hashlib
import logging
import math
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

import requests

from .core import FitnessReport, Genome, make_report
from .workloads import WORKLOADS

logger = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 120.0


@dataclass
class EvaluatorSpec:
    workload: str
    timeout_seconds: float = DEFAULT_TIMEOUT
    w_e: float = 1.0
    w_j: float = 0.0
    judge: Callable | str | None = None
    custom_score: Callable[[Genome], tuple[bool, float, str | None]] | None = None
    params: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.timeout_seconds <= 0:
            raise ValueError("timeout_seconds must be positive")
        if self.workload == "custom":
            if self.custom_score is None:
                raise ValueError("custom workload needs a custom_score hook")
        elif self.workload not in WORKLOADS:
            raise ValueError(f"unknown workload {self.workload!r}")

    def to_dict(self) -> dict:
        return {
            "workload": self.workload,
            "timeout_seconds": self.timeout_seconds,
            "w_e": self.w_e,
            "w_j": self.w_j,
            "judge": self.judge if isinstance(self.judge, str) else bool(self.judge),
        }


def _genome_validity(genome: Genome) -> str | None:
    if genome.kind == "real_vector":
        for i, v in enumerate(genome.values):
            if not math.isfinite(v):
                return f"non-finite value at index {i}"
    elif not genome.text:
        return "empty text genome"
    return None


def _run_with_timeout(fn, timeout: float):
    """Run fn() on a watchdog thread; raises TimeoutError if it overruns."""
    result: list = []
    error: list = []

    def target():
        try:
            result.append(fn())
        except BaseException as exc:  # noqa: BLE001 - must be encoded in the report
            error.append(exc)

    worker = threading.Thread(target=target, daemon=True)
    worker.start()
    worker.join(timeout)
    if worker.is_alive():
        raise TimeoutError
    if error:
        raise error[0]
    return result[0]


def evaluate(spec: EvaluatorSpec, genome: Genome) -> FitnessReport:
    """Total evaluation: any genome satisfying the type invariants yields a
    report; deterministic workloads yield identical scores on repeat calls."""
    start = time.perf_counter()

    def fail(reason: str) -> FitnessReport:
        return make_report(
            correct=False,
            effectiveness=0.0,
            w_e=spec.w_e,
            w_j=spec.w_j,
            eval_seconds=time.perf_counter() - start,
            failure=reason,
        )

    problem = _genome_validity(genome)
    if problem is not None:
        return fail(problem)

    scorer = spec.custom_score if spec.workload == "custom" else WORKLOADS[spec.workload].score
    try:
        correct, effectiveness, note = _run_with_timeout(
            lambda: scorer(genome), spec.timeout_seconds
        )
    except TimeoutError:
        return fail("timeout")
    except Exception as exc:  # workload crash is a verdict, not a pipeline error
        return fail(f"evaluator crashed: {exc}")

    if not correct:
        return fail(note or "workload validity check failed")
    if not math.isfinite(effectiveness):
        return fail("non-finite effectiveness")

    judge = None
    if spec.judge is not None and spec.w_j != 0.0:
        judge = judge_score(spec.judge, genome, effectiveness)
    return make_report(
        correct=True,
        effectiveness=float(effectiveness),
        w_e=spec.w_e,
        w_j=spec.w_j,
        judge_score=judge,
        eval_seconds=time.perf_counter() - start,
        failure=None,
    )


def mock_judge(genome: Genome, effectiveness: float) -> float:
    """Deterministic hash-derived score in [0, 1]; stands in for an LLM judge."""
    key = hashlib.sha256()
    if genome.kind == "real_vector":
        key.update(repr(tuple(genome.values)).encode())
    else:
        key.update(genome.text.encode())
    return int.from_bytes(key.digest()[:8], "big") / 2**64


def judge_score(hook: Callable | str, genome: Genome, effectiveness: float) -> float:
    """Clamped judge score; failures yield 0 with a warning."""
    try:
        if isinstance(hook, str):
            resp = requests.post(
                hook,
                json={"genome": genome.to_dict(), "effectiveness": effectiveness},
                timeout=DEFAULT_TIMEOUT,
            )
            resp.raise_for_status()
            score = float(resp.json()["score"])
        else:
            score = float(hook(genome, effectiveness))
    except Exception as exc:
        logger.warning("judge hook failed (%s); scoring 0", exc)
        return 0.0
    return min(1.0, max(0.0, score))
