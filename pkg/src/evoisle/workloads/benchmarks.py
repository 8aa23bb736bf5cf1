"""Synthetic test landscapes, negated so higher is better engine-wide."""

from __future__ import annotations

import numpy as np


def sphere(x) -> float:
    """-sum(x_i^2); global optimum 0 at the origin."""
    v = np.asarray(x, dtype=float)
    return float(-np.sum(v * v))


def rastrigin(x) -> float:
    """-(10 n + sum(x_i^2 - 10 cos(2 pi x_i))); global optimum 0 at the origin."""
    v = np.asarray(x, dtype=float)
    n = v.size
    return float(-(10.0 * n + np.sum(v * v - 10.0 * np.cos(2.0 * np.pi * v))))
