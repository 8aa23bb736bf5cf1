"""16 points in the plane minimizing the ratio of maximum to minimum pairwise
distance.

The non-smooth ratio objective is reformulated as a smooth constrained
program: minimize the maximum squared distance subject to every squared
distance lying in [1, D_max_sq]. Five diverse seeded starts (hexagonal
lattice, two concentric-ring layouts, a square grid, and a random cloud) are
each normalized to unit minimum distance and solved with SLSQP using a fully
vectorized constraint Jacobian; the best start wins.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np
from scipy.optimize import minimize
from scipy.spatial.distance import pdist

N_POINTS = 16
N_VARS = 2 * N_POINTS
_PAIRS = list(combinations(range(N_POINTS), 2))
N_PAIRS = len(_PAIRS)
_I = np.array([i for i, _ in _PAIRS])
_J = np.array([j for _, j in _PAIRS])

RATIO_SENTINEL = 1e18  # stands in for +infinity when points collapse


def calculate_ratio(points: np.ndarray) -> float:
    """d_max / d_min over all pairs; sentinel when d_min < 1e-9 or < 2 points."""
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or len(points) < 2:
        return RATIO_SENTINEL
    d = pdist(points)
    d_min = d.min()
    if d_min < 1e-9:
        return RATIO_SENTINEL
    return float(d.max() / d_min)


def ratio_constraints(variables: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Constraint values and Jacobian for the smooth reformulation.

    variables = 32 flattened coordinates followed by D_max_sq. Block 1 holds
    d_ij^2 - 1 >= 0 (120 rows), block 2 holds D_max_sq - d_ij^2 >= 0
    (120 rows). Assembled with vectorized index arithmetic, no per-pair loop.
    """
    x = np.asarray(variables, dtype=float)
    points = x[:N_VARS].reshape(N_POINTS, 2)
    sq = pdist(points, "sqeuclidean")
    values = np.concatenate((sq - 1.0, x[-1] - sq))

    jac = np.zeros((2 * N_PAIRS, N_VARS + 1))
    diffs = 2.0 * (points[_I] - points[_J])
    k = np.arange(N_PAIRS)
    jac[k, 2 * _I] = diffs[:, 0]
    jac[k, 2 * _I + 1] = diffs[:, 1]
    jac[k, 2 * _J] = -diffs[:, 0]
    jac[k, 2 * _J + 1] = -diffs[:, 1]
    jac[k + N_PAIRS, 2 * _I] = -diffs[:, 0]
    jac[k + N_PAIRS, 2 * _I + 1] = -diffs[:, 1]
    jac[k + N_PAIRS, 2 * _J] = diffs[:, 0]
    jac[k + N_PAIRS, 2 * _J + 1] = diffs[:, 1]
    jac[N_PAIRS:, -1] = 1.0
    return values, jac


def initial_configurations(seed: int = 42) -> dict[str, np.ndarray]:
    """The five diverse starting layouts."""
    cfg: dict[str, np.ndarray] = {}

    pts = []
    s32 = np.sqrt(3.0) / 2.0
    for v in range(4):
        for u in range(4):
            pts.append([(u - 1.5) + 0.5 * (v - 1.5), (v - 1.5) * s32])
    cfg["hexagonal"] = np.array(pts)

    pts = [[0.0, 0.0]]
    for i in range(5):
        a = i * 2.0 * np.pi / 5.0
        pts.append([np.cos(a), np.sin(a)])
    for i in range(10):
        a = i * 2.0 * np.pi / 10.0 + np.pi / 10.0
        pts.append([1.992 * np.cos(a), 1.992 * np.sin(a)])
    cfg["concentric_1_5_10"] = np.array(pts)

    pts = []
    for i in range(6):
        a = i * np.pi / 3.0
        pts.append([np.cos(a), np.sin(a)])
    for i in range(10):
        a = i * 2.0 * np.pi / 10.0 + np.pi / 10.0
        pts.append([1.9 * np.cos(a), 1.9 * np.sin(a)])
    cfg["concentric_6_10"] = np.array(pts)

    cfg["grid_4x4"] = np.array(
        [[i - 1.5, j - 1.5] for i in range(4) for j in range(4)], dtype=float
    )

    rng = np.random.RandomState(seed)
    cfg["random"] = rng.rand(N_POINTS, 2) * 5.0 - 2.5
    return cfg


def kkt_residual(variables: np.ndarray) -> float:
    """First-order stationarity residual with least-squares multipliers over
    near-active constraints (complementarity enforced by construction)."""
    values, jac = ratio_constraints(variables)
    grad_obj = np.zeros(N_VARS + 1)
    grad_obj[-1] = 1.0
    active = values < 1e-6
    if not np.any(active):
        return float(np.linalg.norm(grad_obj))
    a = jac[active].T  # stationarity: grad_obj = sum lambda_i * grad c_i
    lam, *_ = np.linalg.lstsq(a, grad_obj, rcond=None)
    lam = np.maximum(lam, 0.0)
    return float(np.linalg.norm(grad_obj - a @ lam))


def multi_start_ratio_solve(seed: int = 42) -> tuple[np.ndarray, float]:
    """Run all five starts; return (points, ratio_squared) of the best.

    The returned point set is centered and rescaled to unit minimum pairwise
    distance. Falls back to the 1-5-10 layout if every start fails.
    """
    best_points = None
    best_sq = np.inf

    def objective(x):
        return x[-1]

    def objective_jac(x):
        g = np.zeros_like(x)
        g[-1] = 1.0
        return g

    constraint = {
        "type": "ineq",
        "fun": lambda x: ratio_constraints(x)[0],
        "jac": lambda x: ratio_constraints(x)[1],
    }
    configs = initial_configurations(seed)
    for _name, pts in configs.items():
        p = pts.copy()
        d_min = pdist(p).min()
        if d_min > 1e-9:
            p /= d_min
        x0 = np.append(p.ravel(), np.max(pdist(p) ** 2))
        res = minimize(
            objective,
            x0,
            method="SLSQP",
            jac=objective_jac,
            constraints=constraint,
            options={"maxiter": 3000, "ftol": 1e-12},
        )
        if res.success and res.fun < best_sq:
            best_sq = float(res.fun)
            best_points = res.x[:N_VARS].reshape(N_POINTS, 2)

    if best_points is None:
        best_points = configs["concentric_1_5_10"]

    best_points = best_points - best_points.mean(axis=0)
    d_min = pdist(best_points).min()
    if d_min > 1e-9:
        best_points = best_points / d_min
    return best_points, float(calculate_ratio(best_points) ** 2)
