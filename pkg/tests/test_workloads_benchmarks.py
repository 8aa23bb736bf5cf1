"""Synthetic benchmark landscapes (negated: higher is better)."""

import numpy as np
import pytest

from evoisle.workloads import rastrigin, sphere


def test_global_optima_at_origin():
    assert sphere(np.zeros(5)) == 0.0
    assert rastrigin(np.zeros(5)) == 0.0


def test_sphere_value():
    assert sphere([1.0, 1.0]) == -2.0


def test_rastrigin_value():
    # -(10*2 + (0.25 - 10*cos(pi)) + (0 - 10*cos(0))) = -20.25
    assert rastrigin([0.5, 0.0]) == pytest.approx(-20.25, abs=1e-12)


def test_everywhere_nonpositive():
    rng = np.random.default_rng(8)
    for _ in range(20):
        x = rng.uniform(-5.12, 5.12, size=6)
        assert sphere(x) <= 0.0
        assert rastrigin(x) <= 1e-9
