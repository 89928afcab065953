"""Bayesian preference model over a finite action grid.

Latent utilities f (one per action) get a Gaussian prior; each observed
comparison contributes a probit likelihood term
Phi((f[winner] - f[loser]) / (sqrt(2) * sigma_k)), where sigma_k is the
preference noise rescaled by the record weight (sigma_k = sigma / sqrt(w)).
The posterior is approximated as a Gaussian centered at the MAP with
covariance equal to the inverse Hessian of the negative log posterior.

The MAP lives in the span of the prior covariance columns of the actions
that appear in the dataset, so the Newton iteration and the covariance
update are carried out through that low-rank representation; iterates and
results agree with the dense formulation, which the tests check against
directly computed references.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .errors import ConfigurationError, NumericalError
from .grid import ActionSpace
from .kernels import KernelParams, prior_covariance
from .numerics import (
    inverse_mills,
    jittered_cholesky,
    log_normal_cdf,
    normal_cdf,
)
from .preferences import PreferenceDataset

_SQRT2 = np.sqrt(2.0)

GRADIENT_TOL = 1e-6
# A stalled line search (no representable S decrease left) is accepted as
# converged when either the gradient or the full Newton displacement, which
# bounds the remaining distance to the optimum, is already negligible.
_STALL_TOL = 1e-5
_STALL_DISPLACEMENT = 1e-8
MAX_NEWTON_ITER = 100
MAX_HALVINGS = 20


def pair_likelihood(f_winner, f_loser, noise_scale):
    """Probability that the winner is reported as preferred.

    Phi((f_winner - f_loser) / (sqrt(2) * noise_scale)); clamped into the
    open interval (0, 1).  Accepts scalars or arrays.
    """
    noise_scale = np.asarray(noise_scale, dtype=float)
    if np.any(noise_scale <= 0):
        raise ConfigurationError("noise_scale must be positive")
    z = (np.asarray(f_winner, dtype=float) - np.asarray(f_loser, dtype=float)) / (
        _SQRT2 * noise_scale
    )
    p = normal_cdf(z)
    return p if np.ndim(p) else float(p)


def record_noise_scales(data: PreferenceDataset, preference_noise: float) -> np.ndarray:
    """Per-record noise scale sigma_k = sigma / sqrt(weight_k)."""
    return preference_noise / np.sqrt(data.weights())


def _comparison_arrays(data: PreferenceDataset, kernel: KernelParams):
    winners = data.winners()
    losers = data.losers()
    coef = 1.0 / (_SQRT2 * record_noise_scales(data, kernel.preference_noise))
    return winners, losers, coef


def negative_log_posterior(
    f: np.ndarray,
    data: PreferenceDataset,
    prior_cov: np.ndarray,
    kernel: KernelParams,
) -> float:
    """S(f) = 0.5 f^T Sigma^-1 f - sum_k ln Phi(z_k), up to f-independent constants."""
    f = np.asarray(f, dtype=float)
    L, _ = jittered_cholesky(prior_cov, "prior covariance")
    half = solve_triangular(L, f, lower=True, check_finite=False)
    value = 0.5 * float(half @ half)
    if len(data):
        winners, losers, coef = _comparison_arrays(data, kernel)
        z = coef * (f[winners] - f[losers])
        value -= float(np.sum(log_normal_cdf(z)))
    return value


def negative_log_posterior_grad(
    f: np.ndarray,
    data: PreferenceDataset,
    prior_cov: np.ndarray,
    kernel: KernelParams,
) -> np.ndarray:
    """Gradient Sigma^-1 f - sum_k c_k r(z_k) (e_winner - e_loser)."""
    f = np.asarray(f, dtype=float)
    L, _ = jittered_cholesky(prior_cov, "prior covariance")
    grad = cho_solve((L, True), f, check_finite=False)
    if len(data):
        winners, losers, coef = _comparison_arrays(data, kernel)
        z = coef * (f[winners] - f[losers])
        pull = coef * inverse_mills(z)
        np.subtract.at(grad, winners, pull)
        np.add.at(grad, losers, pull)
    return grad


def _curvatures(z: np.ndarray, coef: np.ndarray) -> np.ndarray:
    """Per-record likelihood curvature c_k^2 r(z)(z + r(z)), non-negative."""
    r = inverse_mills(z)
    return coef * coef * r * (z + r)


def _accumulate_curvature(size, wpos, lpos, lam) -> np.ndarray:
    """Assemble the likelihood Hessian block from per-record curvatures."""
    block = np.zeros((size, size))
    np.add.at(block, (wpos, wpos), lam)
    np.add.at(block, (lpos, lpos), lam)
    np.subtract.at(block, (wpos, lpos), lam)
    np.subtract.at(block, (lpos, wpos), lam)
    return block


def negative_log_posterior_hess(
    f: np.ndarray,
    data: PreferenceDataset,
    prior_cov: np.ndarray,
    kernel: KernelParams,
) -> np.ndarray:
    """Hessian Sigma^-1 + Lambda(f); Lambda is positive semidefinite."""
    f = np.asarray(f, dtype=float)
    L, _ = jittered_cholesky(prior_cov, "prior covariance")
    hess = cho_solve((L, True), np.eye(prior_cov.shape[0]), check_finite=False)
    hess = 0.5 * (hess + hess.T)
    if len(data):
        winners, losers, coef = _comparison_arrays(data, kernel)
        z = coef * (f[winners] - f[losers])
        lam = _curvatures(z, coef)
        hess += _accumulate_curvature(len(f), winners, losers, lam)
    return hess


class UtilityPosterior:
    """Gaussian posterior over the per-action utilities: mean and covariance."""

    def __init__(self, mean: np.ndarray, covariance: np.ndarray):
        self.mean = np.asarray(mean, dtype=float)
        self.covariance = np.asarray(covariance, dtype=float)
        if self.covariance.shape != (self.mean.size, self.mean.size):
            raise ConfigurationError(
                f"covariance shape {self.covariance.shape} does not match "
                f"mean length {self.mean.size}"
            )
        self._chol = None

    @property
    def size(self) -> int:
        return self.mean.size

    def std(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))

    def cholesky(self) -> np.ndarray:
        if self._chol is None:
            self._chol, _ = jittered_cholesky(self.covariance, "posterior covariance")
        return self._chol


def laplace_posterior(
    data: PreferenceDataset,
    space: ActionSpace,
    kernel: KernelParams,
    prior_cov: np.ndarray | None = None,
) -> UtilityPosterior:
    """Gaussian approximation of the utility posterior.

    Mean is the minimizer of S(f) found by damped Newton iteration started at
    f = 0 (step halved until S decreases, stop once the gradient infinity
    norm drops below 1e-6); covariance is (Sigma^-1 + Lambda(f_MAP))^-1.
    Deterministic given its inputs.  An empty dataset reproduces the prior
    exactly.
    """
    kernel.check_space(space)
    data.validate_indices(space)
    if prior_cov is None:
        prior_cov = prior_covariance(space, kernel)
    if not len(data):
        return UtilityPosterior(np.zeros(space.size), prior_cov.copy())

    winners, losers, coef = _comparison_arrays(data, kernel)
    touched = np.unique(np.concatenate([winners, losers]))
    wpos = np.searchsorted(touched, winners)
    lpos = np.searchsorted(touched, losers)
    m = touched.size
    cov_tt = prior_cov[np.ix_(touched, touched)]
    cov_cols = prior_cov[:, touched]

    def value_and_terms(a):
        ft = cov_tt @ a
        z = coef * (ft[wpos] - ft[lpos])
        value = 0.5 * float(a @ ft) - float(np.sum(log_normal_cdf(z)))
        return value, z

    # Newton in the representer parametrization f = Sigma[:, touched] a; the
    # full-space gradient of S is exactly (a - g) scattered onto the touched
    # actions, so the stopping rule below is the full-space gradient norm.
    a = np.zeros(m)
    value, z = value_and_terms(a)
    grad_norm = np.inf
    converged = False
    for _ in range(MAX_NEWTON_ITER):
        pull = coef * inverse_mills(z)
        g = np.zeros(m)
        np.add.at(g, wpos, pull)
        np.subtract.at(g, lpos, pull)
        residual = a - g
        grad_norm = float(np.max(np.abs(residual)))
        if grad_norm < GRADIENT_TOL:
            converged = True
            break
        lam = _curvatures(z, coef)
        lam_tt = _accumulate_curvature(m, wpos, lpos, lam)
        try:
            step = np.linalg.solve(np.eye(m) + lam_tt @ cov_tt, -residual)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"Newton system solve failed: {exc}") from exc
        alpha = 1.0
        accepted = False
        for _ in range(MAX_HALVINGS + 1):
            candidate = a + alpha * step
            cand_value, cand_z = value_and_terms(candidate)
            if cand_value < value:
                a, value, z = candidate, cand_value, cand_z
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            displacement = float(np.max(np.abs(cov_cols @ step)))
            if grad_norm < _STALL_TOL or displacement < _STALL_DISPLACEMENT:
                converged = True
                break
            raise NumericalError(
                f"Newton line search stalled with gradient norm {grad_norm:.3e} "
                f"and step size {displacement:.3e}"
            )
    if not converged:
        raise NumericalError(
            f"Newton did not converge in {MAX_NEWTON_ITER} iterations; "
            f"last gradient norm {grad_norm:.3e}"
        )

    mean = cov_cols @ a

    # Covariance (Sigma^-1 + Lambda)^-1 through the Woodbury identity with
    # Lambda = B B^T supported on the touched block; z is at the final a on
    # every loop exit path.
    lam = _curvatures(z, coef)
    lam_tt = _accumulate_curvature(m, wpos, lpos, lam)
    eigvals, eigvecs = np.linalg.eigh(lam_tt)
    keep = eigvals > max(0.0, eigvals[-1] * 1e-14) if eigvals.size else eigvals > 0
    if not np.any(keep):
        covariance = prior_cov.copy()
    else:
        factor = eigvecs[:, keep] * np.sqrt(eigvals[keep])
        capacitance = factor.T @ cov_tt @ factor
        capacitance[np.diag_indices_from(capacitance)] += 1.0
        L_cap, _ = jittered_cholesky(capacitance, "Newton capacitance")
        gain = cov_cols @ factor
        half = solve_triangular(L_cap, gain.T, lower=True, check_finite=False)
        covariance = prior_cov - half.T @ half
        covariance = 0.5 * (covariance + covariance.T)
    return UtilityPosterior(mean, covariance)


def sample_utility(posterior: UtilityPosterior, rng: np.random.Generator) -> np.ndarray:
    """One joint utility draw: mean + L z with L the covariance Cholesky factor."""
    z = rng.standard_normal(posterior.size)
    return posterior.mean + posterior.cholesky() @ z


def _as_pair_array(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=int)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ConfigurationError(
            f"pairs must be an (N, 2) array of [winner, loser] indices, "
            f"got shape {arr.shape}"
        )
    return arr


class PreferenceGP:
    """Estimator-style wrapper around the preference model.

    Follows the fit/predict convention: hyperparameters go to ``__init__``
    and are introspectable via get_params/set_params, comparison data goes
    to ``fit``, and fitted state lives in trailing-underscore attributes.

    Parameters
    ----------
    space : ActionSpace
        Finite action grid the utilities are defined over.
    lengthscales : float or sequence of float
        Kernel lengthscale per grid dimension (a scalar is broadcast).
    signal_variance, noise_variance : float
        Prior amplitude and diagonal jitter.
    preference_noise : float
        Likelihood noise scale applied to every comparison.
    """

    def __init__(
        self,
        space: ActionSpace,
        lengthscales=0.1,
        signal_variance=1e-4,
        noise_variance=1e-8,
        preference_noise=0.01,
    ):
        self.space = space
        self.lengthscales = lengthscales
        self.signal_variance = signal_variance
        self.noise_variance = noise_variance
        self.preference_noise = preference_noise
        self._prior_cache = None

    def get_params(self, deep=True) -> dict:
        return {
            "space": self.space,
            "lengthscales": self.lengthscales,
            "signal_variance": self.signal_variance,
            "noise_variance": self.noise_variance,
            "preference_noise": self.preference_noise,
        }

    def set_params(self, **params) -> "PreferenceGP":
        valid = self.get_params()
        for key, value in params.items():
            if key not in valid:
                raise ConfigurationError(f"unknown parameter {key!r}")
            setattr(self, key, value)
        self._prior_cache = None
        return self

    def kernel_params(self) -> KernelParams:
        ls = self.lengthscales
        if np.ndim(ls) == 0:
            ls = (float(ls),) * self.space.ndim
        return KernelParams(
            lengthscales=tuple(float(l) for l in ls),
            signal_variance=float(self.signal_variance),
            noise_variance=float(self.noise_variance),
            preference_noise=float(self.preference_noise),
        )

    def prior(self) -> np.ndarray:
        if self._prior_cache is None:
            self._prior_cache = prior_covariance(self.space, self.kernel_params())
        return self._prior_cache

    def fit(self, pairs, sample_weight=None) -> "PreferenceGP":
        """Fit the utility posterior to [winner, loser] index pairs."""
        arr = _as_pair_array(pairs)
        if sample_weight is None:
            weights = np.ones(arr.shape[0])
        else:
            weights = np.asarray(sample_weight, dtype=float)
            if weights.shape != (arr.shape[0],):
                raise ConfigurationError(
                    f"sample_weight length {weights.shape} does not match "
                    f"{arr.shape[0]} pairs"
                )
        dataset = PreferenceDataset()
        from .preferences import PreferenceRecord

        for (winner, loser), w in zip(arr, weights):
            dataset.append(PreferenceRecord(int(winner), int(loser), float(w)))
        posterior = laplace_posterior(
            dataset, self.space, self.kernel_params(), prior_cov=self.prior()
        )
        self.dataset_ = dataset
        self.posterior_ = posterior
        self.mean_ = posterior.mean
        self.covariance_ = posterior.covariance
        return self

    def _fitted(self) -> UtilityPosterior:
        if not hasattr(self, "posterior_"):
            raise ConfigurationError("this PreferenceGP instance is not fitted yet")
        return self.posterior_

    def predict(self, indices=None, return_std=False):
        """Posterior mean utilities (and optionally stds) on the grid."""
        posterior = self._fitted()
        if indices is None:
            mean = posterior.mean
            std = posterior.std()
        else:
            idx = np.asarray(indices, dtype=int)
            mean = posterior.mean[idx]
            std = posterior.std()[idx]
        return (mean, std) if return_std else mean

    def sample_y(self, rng: np.random.Generator, n_samples: int = 1) -> np.ndarray:
        """Joint posterior utility draws, one row per sample."""
        posterior = self._fitted()
        return np.stack([sample_utility(posterior, rng) for _ in range(n_samples)])
