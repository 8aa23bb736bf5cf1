"""Recency-weighted temporal features for per-entity series.

Weights follow an exponential recency scheme w_i = (1 - alpha)^(n - i), so
the most recent observation always gets weight 1 and older ones decay
geometrically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_ALPHA = 0.3


@dataclass
class TemporalSeries:
    values: list
    alpha: float = DEFAULT_ALPHA

    def __post_init__(self):
        if not self.values:
            raise ValueError("series must be non-empty")
        if not (0 < self.alpha < 1):
            raise ValueError("alpha must lie in (0, 1)")

    @property
    def weights(self) -> np.ndarray:
        n = len(self.values)
        return (1.0 - self.alpha) ** (n - 1 - np.arange(n))


def ewma(s: TemporalSeries) -> float:
    w = s.weights
    x = np.asarray(s.values, dtype=float)
    return float(np.dot(w, x) / w.sum())


def ewvol(s: TemporalSeries) -> float:
    w = s.weights
    x = np.asarray(s.values, dtype=float)
    mean = np.dot(w, x) / w.sum()
    return float(np.sqrt(np.dot(w, (x - mean) ** 2) / w.sum()))


def risk_score(s: TemporalSeries, risk_map: dict, default_rate: float = 0.0) -> float:
    """Recency-weighted mean of the per-category risk encoding."""
    w = s.weights
    r = np.array([float(risk_map.get(c, default_rate)) for c in s.values])
    return float(np.dot(w, r) / w.sum())


def ew_changes(s: TemporalSeries) -> float:
    """Recency-weighted count of category switches (not normalized)."""
    w = s.weights
    changed = np.array(
        [0.0] + [1.0 if s.values[i] != s.values[i - 1] else 0.0 for i in range(1, len(s.values))]
    )
    return float(np.dot(w, changed))
