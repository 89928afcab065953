import math

import numpy as np
import pytest

from cospar import ConfigurationError, KernelParams, build_action_grid, prior_covariance


def test_diagonal_is_signal_plus_noise_variance():
    space = build_action_grid([(0.08, 0.18, 15)])
    kernel = KernelParams((0.025,), 1e-4, 1e-8, 0.01)
    cov = prior_covariance(space, kernel)
    np.testing.assert_allclose(np.diag(cov), 1e-4 + 1e-8, rtol=0, atol=0)


def test_off_diagonal_at_one_lengthscale():
    # two points exactly one lengthscale apart: v * exp(-1/2)
    space = build_action_grid([(0.0, 0.025, 2)])
    kernel = KernelParams((0.025,), 1e-4, 0.0, 0.01)
    cov = prior_covariance(space, kernel)
    expected = 1e-4 * math.exp(-0.5)
    assert abs(cov[0, 1] - expected) < 1e-18
    assert abs(expected - 6.065306597126334e-05) < 1e-15


def test_constant_limit_with_huge_lengthscale():
    space = build_action_grid([(0.0, 1.0, 5)])
    kernel = KernelParams((1e12,), 1.0, 1e-9, 0.01)
    cov = prior_covariance(space, kernel)
    off_diag = cov[~np.eye(5, dtype=bool)]
    np.testing.assert_allclose(off_diag, 1.0, rtol=1e-12)
    np.testing.assert_allclose(np.diag(cov), 1.0 + 1e-9, rtol=1e-12)


def test_symmetry_and_anisotropy():
    space = build_action_grid([(0, 1, 4), (0, 2, 3)])
    kernel = KernelParams((0.3, 0.9), 2.0, 1e-6, 0.1)
    cov = prior_covariance(space, kernel)
    np.testing.assert_array_equal(cov, cov.T)
    # hand evaluation for one off-diagonal pair
    i, j = 0, 7
    xi, xj = space.points[i], space.points[j]
    expected = 2.0 * math.exp(
        -0.5 * (((xi[0] - xj[0]) / 0.3) ** 2 + ((xi[1] - xj[1]) / 0.9) ** 2)
    )
    assert abs(cov[i, j] - expected) < 1e-14


def test_dimension_mismatch_rejected():
    space = build_action_grid([(0, 1, 4), (0, 1, 4)])
    kernel = KernelParams((0.3,), 1.0, 0.0, 0.1)
    with pytest.raises(ConfigurationError):
        prior_covariance(space, kernel)


def test_invalid_hyperparameters_rejected():
    with pytest.raises(ConfigurationError):
        KernelParams((0.0,), 1.0, 0.0, 0.1)
    with pytest.raises(ConfigurationError):
        KernelParams((0.1,), 0.0, 0.0, 0.1)
    with pytest.raises(ConfigurationError):
        KernelParams((0.1,), 1.0, -1e-9, 0.1)
    with pytest.raises(ConfigurationError):
        KernelParams((0.1,), 1.0, 0.0, 0.0)
