"""Squared-exponential prior covariance over a finite action grid."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import ConfigurationError
from .grid import ActionSpace


@dataclass(frozen=True)
class KernelParams:
    """Hyperparameters of the utility prior and the preference likelihood.

    lengthscales are in the same physical units as the matching grid
    dimension; noise_variance is diagonal jitter added to the prior
    covariance; preference_noise is the likelihood noise scale applied to
    every comparison (rescaled per record by its weight).
    """

    lengthscales: tuple[float, ...]
    signal_variance: float
    noise_variance: float
    preference_noise: float

    def __post_init__(self):
        object.__setattr__(self, "lengthscales", tuple(float(l) for l in self.lengthscales))
        for l in self.lengthscales:
            if not l > 0:
                raise ConfigurationError(f"lengthscales must be positive, got {l}")
        if not self.signal_variance > 0:
            raise ConfigurationError(
                f"signal_variance must be positive, got {self.signal_variance}"
            )
        if self.noise_variance < 0:
            raise ConfigurationError(
                f"noise_variance must be non-negative, got {self.noise_variance}"
            )
        if not self.preference_noise > 0:
            raise ConfigurationError(
                f"preference_noise must be positive, got {self.preference_noise}"
            )

    def check_space(self, space: ActionSpace):
        if len(self.lengthscales) != space.ndim:
            raise ConfigurationError(
                f"kernel has {len(self.lengthscales)} lengthscales but the "
                f"action space has {space.ndim} dimensions"
            )

    def with_lengthscales(self, lengthscales: Sequence[float]) -> "KernelParams":
        return replace(self, lengthscales=tuple(float(l) for l in lengthscales))

    def to_dict(self) -> dict:
        return {
            "lengthscales": list(self.lengthscales),
            "signal_variance": self.signal_variance,
            "noise_variance": self.noise_variance,
            "preference_noise": self.preference_noise,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "KernelParams":
        return cls(
            lengthscales=tuple(float(l) for l in d["lengthscales"]),
            signal_variance=float(d["signal_variance"]),
            noise_variance=float(d["noise_variance"]),
            preference_noise=float(d["preference_noise"]),
        )


def prior_covariance(space: ActionSpace, kernel: KernelParams) -> np.ndarray:
    """Dense prior covariance: squared-exponential Gram matrix plus diagonal jitter.

    Entry (i, j) = signal_variance * exp(-0.5 * sum_d (x_id - x_jd)^2 / l_d^2),
    with noise_variance added on the diagonal.
    """
    kernel.check_space(space)
    sq = np.zeros((space.size, space.size))
    for d in range(space.ndim):
        col = space.points[:, d]
        diff = (col[:, None] - col[None, :]) / kernel.lengthscales[d]
        sq += diff * diff
    cov = kernel.signal_variance * np.exp(-0.5 * sq)
    if kernel.noise_variance:
        cov[np.diag_indices_from(cov)] += kernel.noise_variance
    return cov
