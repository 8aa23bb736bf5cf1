"""Upper bound for the uncertainty-inequality constant via Hermite expansions.

The candidate function is P(x) exp(-pi x^2) with P a combination of the
physicists' Hermite polynomials H_0, H_4, H_8, H_12. The constraint P(0) = 0
pins the H_12 coefficient, making P even with a double root at the origin, so
the quotient polynomial P(x)/x^2 is exact and its largest positive real root
r gives the objective r^2 / (2 pi). The search runs a best/1/bin differential
evolution over the three free coefficients followed by a derivative-free
polish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

HERMITE_ORDERS = (0, 4, 8, 12)
COEFF_BOUNDS = ((-5.0, 5.0), (-1.0, 1.0), (-0.1, 0.1))
PENALTY = 1e12


def hermite_coefficients(n: int) -> list[int]:
    """Exact integer coefficients (degree-descending) of the physicists'
    Hermite polynomial H_n via H_{m+1} = 2x H_m - 2m H_{m-1}."""
    if n not in HERMITE_ORDERS:
        raise ValueError(f"order {n} not in {HERMITE_ORDERS}")
    h_prev = [1]
    if n == 0:
        return h_prev
    h = [2, 0]
    for m in range(1, n):
        nxt = [2 * c for c in h] + [0]
        for i, c in enumerate(h_prev):
            nxt[len(nxt) - len(h_prev) + i] -= 2 * m * c
        h_prev, h = h, nxt
    return h


_H = {n: hermite_coefficients(n) for n in HERMITE_ORDERS}
_H_AT_ZERO = {n: _H[n][-1] for n in HERMITE_ORDERS}  # H_0..H_12 at x=0


@dataclass(frozen=True)
class HermiteCoeffs:
    c0: float
    c1: float
    c2: float

    @property
    def c3(self) -> float:
        # enforces P(0) = 0
        return -(
            self.c0 * _H_AT_ZERO[0] + self.c1 * _H_AT_ZERO[4] + self.c2 * _H_AT_ZERO[8]
        ) / _H_AT_ZERO[12]

    def validate(self) -> None:
        for v, (lo, hi) in zip((self.c0, self.c1, self.c2), COEFF_BOUNDS):
            if not (lo <= v <= hi):
                raise ValueError(f"coefficient {v} outside [{lo}, {hi}]")


def _padded(n: int) -> np.ndarray:
    coeffs = _H[n]
    return np.concatenate([np.zeros(13 - len(coeffs)), np.asarray(coeffs, dtype=float)])


def build_quotient(c: HermiteCoeffs) -> tuple[np.ndarray, float]:
    """Coefficients (degree-descending, length 11) of gq(x) = P(x)/x^2 and the
    leading coefficient of P. gq is negated when P's leading coefficient is
    negative so that P(x) > 0 for large |x|."""
    p = (
        c.c0 * _padded(0)
        + c.c1 * _padded(4)
        + c.c2 * _padded(8)
        + c.c3 * _padded(12)
    )
    leading = float(p[0])
    gq = p[:-2]  # P is even with P(0)=0: division by x^2 drops the two lowest terms
    if leading < 0:
        gq = -gq
    return gq, leading


def uncertainty_objective(c: HermiteCoeffs) -> float:
    """r_max^2 / (2 pi) for the largest positive real root of the quotient
    polynomial; 0 when no positive real root survives; a large penalty for
    degenerate polynomials or root-solver failure."""
    gq, _leading = build_quotient(c)
    if abs(gq[0]) < 1e-12:
        return PENALTY
    try:
        roots = np.roots(gq)
    except np.linalg.LinAlgError:
        return PENALTY
    real = roots[np.abs(roots.imag) <= 1e-8].real
    positive = real[real > 1e-9]
    if positive.size == 0:
        return 0.0
    return float(np.max(positive) ** 2 / (2.0 * np.pi))


def _objective_vec(x: np.ndarray) -> float:
    return uncertainty_objective(HermiteCoeffs(float(x[0]), float(x[1]), float(x[2])))


def de_search(
    bounds=COEFF_BOUNDS,
    seed: int = 42,
    population_size: int = 30,
    max_iterations: int = 300,
    recombination: float = 0.7,
    init: np.ndarray | None = None,
    polish: bool = True,
) -> tuple[HermiteCoeffs, float]:
    """best/1/bin differential evolution with per-generation dithered mutation
    factor F ~ U[0.5, 1), bound clipping, greedy selection, and spread-based
    convergence, followed by a local polish of the best member."""
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    dim = len(bounds)

    if init is not None:
        pop = np.array(init, dtype=float).copy()
        if pop.shape != (population_size, dim):
            raise ValueError(f"init must have shape ({population_size}, {dim})")
    else:
        pop = lo + rng.random((population_size, dim)) * (hi - lo)
    fitness = np.array([_objective_vec(x) for x in pop])

    for _gen in range(max_iterations):
        best_idx = int(np.argmin(fitness))
        f_scale = rng.uniform(0.5, 1.0)
        for i in range(population_size):
            r1, r2 = rng.choice(population_size, size=2, replace=False)
            mutant = pop[best_idx] + f_scale * (pop[r1] - pop[r2])
            cross = rng.random(dim) < recombination
            cross[int(rng.integers(dim))] = True  # guaranteed crossover dimension
            trial = np.clip(np.where(cross, mutant, pop[i]), lo, hi)
            f_trial = _objective_vec(trial)
            if f_trial <= fitness[i]:
                pop[i] = trial
                fitness[i] = f_trial
        if np.std(fitness) <= 1e-10 * abs(np.mean(fitness)) + 1e-15:
            break

    best_idx = int(np.argmin(fitness))
    best_x = pop[best_idx]
    best_f = float(fitness[best_idx])
    if polish:
        res = minimize(
            _objective_vec,
            best_x,
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 6000},
        )
        clipped = np.clip(res.x, lo, hi)
        f_clipped = float(res.fun) if np.array_equal(clipped, res.x) else _objective_vec(clipped)
        if f_clipped <= best_f:
            best_x, best_f = clipped, f_clipped
    coeffs = HermiteCoeffs(float(best_x[0]), float(best_x[1]), float(best_x[2]))
    return coeffs, best_f
