"""Independent reference implementations used as test oracles.

These deliberately avoid the package's own numerics: the objective uses
scipy.stats.norm.logcdf directly, linear solves go through numpy, and the
MAP oracle is a derivative-free minimizer.
"""

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm

from cospar import (
    KernelParams,
    PreferenceDataset,
    PreferenceRecord,
    build_action_grid,
    prior_covariance,
)

SQRT2 = np.sqrt(2.0)


def dense_objective(f, records, cov, sigma):
    """Straightforward S(f) evaluation from the defining formula."""
    f = np.asarray(f, dtype=float)
    total = 0.5 * float(f @ np.linalg.solve(cov, f))
    for r in records:
        sigma_k = sigma / np.sqrt(r.weight)
        z = (f[r.winner] - f[r.loser]) / (SQRT2 * sigma_k)
        total -= float(norm.logcdf(z))
    return total


def fd_gradient(func, f, step_scale=1e-6):
    f = np.asarray(f, dtype=float)
    grad = np.zeros_like(f)
    for i in range(f.size):
        h = step_scale * (1.0 + abs(f[i]))
        fp, fm = f.copy(), f.copy()
        fp[i] += h
        fm[i] -= h
        grad[i] = (func(fp) - func(fm)) / (2.0 * h)
    return grad


def fd_jacobian(vector_func, f, step_scale=1e-6):
    f = np.asarray(f, dtype=float)
    cols = []
    for i in range(f.size):
        h = step_scale * (1.0 + abs(f[i]))
        fp, fm = f.copy(), f.copy()
        fp[i] += h
        fm[i] -= h
        cols.append((vector_func(fp) - vector_func(fm)) / (2.0 * h))
    return np.stack(cols, axis=1)


def brute_force_map(records, cov, sigma):
    """Derivative-free minimizer of the dense objective, run to tight tolerance."""
    A = cov.shape[0]
    result = minimize(
        lambda f: dense_objective(f, records, cov, sigma),
        np.zeros(A),
        method="Nelder-Mead",
        options={
            "xatol": 1e-10,
            "fatol": 1e-14,
            "maxiter": 40000,
            "maxfev": 40000,
        },
    )
    return result.x


def random_instance(rng, max_actions=10, max_records=20, min_actions=2):
    """Random grid, kernel, and dataset for derivative/MAP checks."""
    A = int(rng.integers(min_actions, max_actions + 1))
    n_records = int(rng.integers(1, max_records + 1))
    space = build_action_grid([(0.0, 1.0, A)])
    kernel = KernelParams(
        lengthscales=(float(rng.uniform(0.2, 0.8)),),
        signal_variance=float(rng.uniform(0.5, 2.0)),
        noise_variance=float(rng.uniform(1e-6, 1e-4)),
        preference_noise=float(rng.uniform(0.1, 0.5)),
    )
    data = PreferenceDataset()
    for _ in range(n_records):
        winner = int(rng.integers(A))
        loser = int(rng.integers(A))
        while loser == winner:
            loser = int(rng.integers(A))
        weight = float(rng.choice([0.5, 1.0, 2.0]))
        source = "pairwise" if weight == 1.0 else "coactive"
        data.append(PreferenceRecord(winner, loser, weight, source))
    cov = prior_covariance(space, kernel)
    return space, kernel, data, cov


def relative_error(approx, exact):
    approx = np.asarray(approx, dtype=float)
    exact = np.asarray(exact, dtype=float)
    denom = max(float(np.max(np.abs(exact))), 1e-12)
    return float(np.max(np.abs(approx - exact))) / denom
