"""Shared fixtures and helpers for the test suite."""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer

import numpy as np
import pytest

from evoisle import (
    Candidate,
    Engine,
    EngineConfig,
    EvaluatorSpec,
    GeneratorSpec,
    PipelineConfig,
    SamplerConfig,
    StopCondition,
    make_report,
    real_vector,
)
from evoisle.islands import MigrationPolicy
from evoisle.service import persistence
from evoisle.workloads import workload_bounds

UNIT_BOUNDS_2D = ((0.0, 1.0), (0.0, 1.0))


def vec(values, bounds=None):
    if bounds is None:
        bounds = tuple((0.0, 1.0) for _ in values)
    return real_vector(values, bounds)


def candidate(cid, values, bounds=None, island=0, seq=0, parents=()):
    return Candidate(
        id=cid,
        genome=vec(values, bounds),
        parent_ids=tuple(parents),
        island_id=island,
        generation=0,
        provenance="test",
        created_seq=seq,
    )


def report(effectiveness, correct=True, judge=None, w_e=1.0, w_j=0.0):
    return make_report(
        correct=correct,
        effectiveness=effectiveness,
        w_e=w_e,
        w_j=w_j,
        judge_score=judge,
    )


def build_engine(
    *,
    run_id="test-run",
    seed=7,
    workload="sphere",
    dim=4,
    n_islands=2,
    cold_start=8,
    children=4,
    strategy="adaptive",
    generators=None,
    migration=None,
    pipeline=None,
    fault_injector=None,
    min_generation_seconds=0.0,
    elite_capacity=10,
):
    if generators is None:
        generators = [
            GeneratorSpec(name="gauss", kind="gaussian_mutation", params={"sigma_frac": 0.05}),
            GeneratorSpec(name="reseed", kind="reseed"),
        ]
    return Engine(
        run_id=run_id,
        seed=seed,
        evaluator=EvaluatorSpec(workload=workload),
        generators=generators,
        bounds=workload_bounds(workload, dim) if workload in ("sphere", "rastrigin") else workload_bounds(workload),
        sampler=SamplerConfig(strategy=strategy),
        migration=migration or MigrationPolicy(),
        pipeline=pipeline or PipelineConfig(),
        engine=EngineConfig(
            n_islands=n_islands,
            cold_start_size=cold_start,
            children_per_generation=children,
            elite_capacity=elite_capacity,
            min_generation_seconds=min_generation_seconds,
        ),
        fault_injector=fault_injector,
    )


def assert_replay_matches(result):
    """Folding the event log must rebuild the final snapshot byte-for-byte."""
    folded = persistence.replay(result.events)
    assert persistence.snapshot_bytes(folded) == persistence.snapshot_bytes(result.snapshot)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


class StubEndpoint(BaseHTTPRequestHandler):
    """Records POSTed JSON bodies and replies with a configurable document."""

    requests_seen: list[dict] = []
    reply: dict | None = None
    status: int = 200

    def do_POST(self):
        body = json.loads(self.rfile.read(int(self.headers["Content-Length"])))
        type(self).requests_seen.append(body)
        payload = json.dumps(type(self).reply or {}).encode()
        self.send_response(type(self).status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture
def stub_server():
    server = HTTPServer(("127.0.0.1", 0), StubEndpoint)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    StubEndpoint.requests_seen = []
    StubEndpoint.reply = None
    StubEndpoint.status = 200
    yield f"http://127.0.0.1:{server.server_port}/hook"
    server.shutdown()
