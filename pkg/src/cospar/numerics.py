"""Shared numerical machinery: stabilized Cholesky and probit special functions.

The probit helpers work in the log domain throughout so that likelihood terms
and the inverse Mills ratio stay finite far into the tails (scipy's
``log_ndtr`` switches to the scaled-complementary-error-function evaluation
there).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import solve_triangular
from scipy.special import log_ndtr, ndtr

from .errors import NumericalError

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

# Jitter ladder applied when a Cholesky factorization fails: start at
# 1e-10 * mean diagonal, escalate tenfold up to 1e-4 * mean diagonal.
_JITTER_START = 1e-10
_JITTER_LIMIT = 1e-4


def jittered_cholesky(matrix: np.ndarray, label: str = "matrix"):
    """Lower Cholesky factor of a symmetric PSD matrix under the jitter policy.

    Returns (L, jitter_added).  Raises NumericalError once the escalation
    ladder is exhausted.
    """
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    try:
        return np.linalg.cholesky(matrix), 0.0
    except np.linalg.LinAlgError:
        pass
    scale = float(np.trace(matrix)) / n
    if not np.isfinite(scale) or scale <= 0.0:
        scale = 1.0
    jitter = _JITTER_START * scale
    limit = _JITTER_LIMIT * scale
    eye = np.eye(n)
    while jitter <= limit:
        try:
            return np.linalg.cholesky(matrix + jitter * eye), jitter
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise NumericalError(
        f"Cholesky factorization of {label} failed even with jitter {limit:g}"
    )


def solve_lower(L: np.ndarray, b: np.ndarray) -> np.ndarray:
    return solve_triangular(L, b, lower=True, check_finite=False)


def quadratic_form_inv(L: np.ndarray, f: np.ndarray) -> float:
    """0.5 * f^T (L L^T)^{-1} f given the lower factor L."""
    half = solve_lower(L, f)
    return 0.5 * float(half @ half)


def normal_cdf(z):
    """Standard normal CDF, clamped into the open interval (0, 1)."""
    p = ndtr(z)
    return np.clip(p, np.nextafter(0.0, 1.0), np.nextafter(1.0, 0.0))


def log_normal_cdf(z):
    return log_ndtr(z)


def inverse_mills(z):
    """phi(z) / Phi(z), evaluated as exp(log phi - log Phi) for tail stability."""
    z = np.asarray(z, dtype=float)
    out = np.exp(-0.5 * z * z - _LOG_SQRT_2PI - log_ndtr(z))
    return out if out.ndim else float(out)


def draw_multivariate_normal(
    mean: np.ndarray, chol_lower: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """One draw mean + L z with z iid standard normal."""
    z = rng.standard_normal(mean.shape[0])
    return mean + chol_lower @ z
