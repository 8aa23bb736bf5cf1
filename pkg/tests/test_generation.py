"""Variation operators, the mock LLM, the external client, and cold start."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.stats import kstest

from evoisle import (
    GenerationError,
    GeneratorSpec,
    cold_start_generate,
    compute_diversity,
    propose,
)
from evoisle.seeds import derive_id, derive_rng
from conftest import StubEndpoint, candidate


BOUNDS3 = ((0.0, 1.0), (0.0, 1.0), (0.0, 1.0))


class TestGaussianMutation:
    def test_sigma_zero_keeps_parent(self, rng):
        # the limit sigma_frac -> 0 must leave the parent untouched
        spec = GeneratorSpec(name="g", kind="gaussian_mutation", params={"sigma_frac": 1e-300})
        parent = candidate("p", [0.25, 0.5], BOUNDS3[:2])
        child = propose(spec, [parent], rng)
        assert child.values == pytest.approx(parent.genome.values, abs=1e-12)

    def test_always_in_bounds(self, rng):
        spec = GeneratorSpec(name="g", kind="gaussian_mutation", params={"sigma_frac": 5.0})
        parent = candidate("p", [0.5, 0.5], BOUNDS3[:2])
        for _ in range(200):
            child = propose(spec, [parent], rng)
            for v, (lo, hi) in zip(child.values, child.bounds):
                assert lo <= v <= hi

    def test_arity_enforced(self, rng):
        spec = GeneratorSpec(name="g", kind="gaussian_mutation")
        with pytest.raises(GenerationError, match="parents"):
            propose(spec, [], rng, bounds=BOUNDS3)


class TestBlendCrossover:
    def test_identical_parents_reproduce(self, rng):
        spec = GeneratorSpec(name="x", kind="blend_crossover", params={"alpha": 0.9})
        p = candidate("p", [0.3, 0.6], BOUNDS3[:2])
        q = candidate("q", [0.3, 0.6], BOUNDS3[:2])
        child = propose(spec, [p, q], rng)
        assert child.values == pytest.approx(p.genome.values, abs=1e-15)

    def test_mismatched_bounds_rejected(self, rng):
        spec = GeneratorSpec(name="x", kind="blend_crossover")
        p = candidate("p", [0.3], [(0.0, 1.0)])
        q = candidate("q", [0.3], [(0.0, 2.0)])
        with pytest.raises(GenerationError, match="share bounds"):
            propose(spec, [p, q], rng)


class TestReseed:
    def test_uniformity_ks(self):
        spec = GeneratorSpec(name="r", kind="reseed")
        rng = derive_rng(7)
        n = 100_000
        draws = np.array([propose(spec, [], rng, bounds=BOUNDS3).values for _ in range(n)])
        assert draws.min() >= 0.0 and draws.max() <= 1.0
        for dim in range(3):
            stat, _ = kstest(draws[:, dim], "uniform")
            assert stat < 0.01

    def test_needs_bounds(self, rng):
        with pytest.raises(GenerationError, match="bounds"):
            propose(GeneratorSpec(name="r", kind="reseed"), [], rng)


class TestMockLLM:
    def test_pure_function_of_genome_guidance_params(self, rng):
        spec = GeneratorSpec(name="m", kind="mock_llm", guidance="explore corners")
        a = candidate("idA", [0.4, 0.4], BOUNDS3[:2])
        b = candidate("idB", [0.4, 0.4], BOUNDS3[:2])  # same genome, different id
        out1 = propose(spec, [a], rng)
        out2 = propose(spec, [b], rng)
        assert out1.values == out2.values

    def test_guidance_changes_output(self, rng):
        a = candidate("idA", [0.4, 0.4], BOUNDS3[:2])
        g1 = propose(GeneratorSpec(name="m", kind="mock_llm", guidance="one"), [a], rng)
        g2 = propose(GeneratorSpec(name="m", kind="mock_llm", guidance="two"), [a], rng)
        assert g1.values != g2.values

    def test_parentless_acts_as_reseed(self, rng):
        out = propose(GeneratorSpec(name="m", kind="mock_llm"), [], rng, bounds=BOUNDS3)
        assert len(out.values) == 3


class TestExternalGenerator:
    def test_protocol_round_trip(self, stub_server, rng):
        StubEndpoint.reply = {"values": [0.1, 0.2, 0.3]}
        spec = GeneratorSpec(
            name="ext", kind="external", params={"endpoint": stub_server}, guidance="go left"
        )
        parent = candidate("p", [0.5, 0.5, 0.5], BOUNDS3)
        child = propose(spec, [parent], rng, bounds=BOUNDS3)
        assert child.values == (0.1, 0.2, 0.3)
        sent = StubEndpoint.requests_seen[0]
        assert sent["guidance"] == "go left"
        assert sent["bounds"] == [[0.0, 1.0]] * 3
        assert sent["parents"][0]["values"] == [0.5, 0.5, 0.5]

    def test_non_2xx_is_generation_failure(self, stub_server, rng):
        StubEndpoint.status = 500
        spec = GeneratorSpec(name="ext", kind="external", params={"endpoint": stub_server})
        with pytest.raises(GenerationError, match="500"):
            propose(spec, [], rng, bounds=BOUNDS3)

    def test_malformed_reply_is_generation_failure(self, stub_server, rng):
        StubEndpoint.reply = {"values": [0.1]}  # wrong length
        spec = GeneratorSpec(name="ext", kind="external", params={"endpoint": stub_server})
        with pytest.raises(GenerationError, match="malformed"):
            propose(spec, [], rng, bounds=BOUNDS3)

    def test_out_of_bounds_reply_clamped(self, stub_server, rng):
        StubEndpoint.reply = {"values": [5.0, -5.0, 0.5]}
        spec = GeneratorSpec(name="ext", kind="external", params={"endpoint": stub_server})
        child = propose(spec, [], rng, bounds=BOUNDS3)
        assert child.values == (1.0, 0.0, 0.5)


class TestColdStart:
    def test_single_reseed_spec(self, rng):
        specs = [GeneratorSpec(name="reseed", kind="reseed")]
        out = cold_start_generate(specs, 26, BOUNDS3, rng, make_id=lambda i: derive_id("c", i))
        assert len(out) == 26
        assert all(c.generation == 0 and c.island_id == -1 for c in out)

    def test_zero_budget(self, rng):
        assert cold_start_generate([], 0, BOUNDS3, rng, make_id=str) == []

    def test_round_robin_provenance(self, rng):
        specs = [
            GeneratorSpec(name="reseed", kind="reseed"),
            GeneratorSpec(name="mock", kind="mock_llm"),
        ]
        out = cold_start_generate(specs, 10, BOUNDS3, rng, make_id=str)
        assert [c.provenance for c in out] == ["reseed", "mock"] * 5

    def test_failures_replaced_by_reseed(self, rng):
        specs = [
            GeneratorSpec(name="reseed", kind="reseed"),
            GeneratorSpec(name="dead", kind="external", params={"endpoint": "http://127.0.0.1:1/x", "timeout_seconds": 0.2}),
        ]
        out = cold_start_generate(specs, 6, BOUNDS3, rng, make_id=str)
        assert len(out) == 6

    def test_seeded_diversity_floor(self):
        # guards against degenerate RNG wiring in the cold start path
        bounds = tuple((0.0, 1.0) for _ in range(8))
        rng = derive_rng(42, "coldstart-diversity")
        out = cold_start_generate(
            [GeneratorSpec(name="reseed", kind="reseed")], 50, bounds, rng, make_id=str
        )
        assert compute_diversity([c.genome for c in out]) >= 0.2
