"""Preference-based interactive optimization over finite action grids.

A Gaussian-process utility model fitted to pairwise comparisons (probit
likelihood, Gaussian approximation at the MAP) drives a posterior-sampling
selection loop; users answer "which trial was better" queries and may
suggest improved actions, which enter the dataset as weighted preferences.
"""

__version__ = "0.1.0"

from .engine import (
    CoSparEngine,
    EngineConfig,
    FeedbackBundle,
    apply_coactive_suggestion,
)
from .errors import (
    ConfigurationError,
    CosparError,
    DegenerateObjectiveError,
    NumericalError,
    ObjectiveParseError,
    ProtocolError,
    SnapshotError,
)
from .grid import ActionSpace, GridDimension, build_action_grid
from .kernels import KernelParams, prior_covariance
from .model import (
    PreferenceGP,
    UtilityPosterior,
    laplace_posterior,
    negative_log_posterior,
    negative_log_posterior_grad,
    negative_log_posterior_hess,
    pair_likelihood,
    sample_utility,
)
from .objectives import (
    ObjectiveTable,
    load_objective_csv,
    normalize_objective,
    sample_gp_objective,
    write_objective_csv,
)
from .oracles import (
    CoactiveOracleConfig,
    coactive_oracle,
    gradient_table,
    preference_oracle,
)
from .preferences import PreferenceDataset, PreferenceRecord

__all__ = [
    "ActionSpace",
    "CoSparEngine",
    "CoactiveOracleConfig",
    "ConfigurationError",
    "CosparError",
    "DegenerateObjectiveError",
    "EngineConfig",
    "FeedbackBundle",
    "GridDimension",
    "KernelParams",
    "NumericalError",
    "ObjectiveParseError",
    "ObjectiveTable",
    "PreferenceDataset",
    "PreferenceGP",
    "PreferenceRecord",
    "ProtocolError",
    "SnapshotError",
    "UtilityPosterior",
    "apply_coactive_suggestion",
    "build_action_grid",
    "coactive_oracle",
    "gradient_table",
    "laplace_posterior",
    "load_objective_csv",
    "negative_log_posterior",
    "negative_log_posterior_grad",
    "negative_log_posterior_hess",
    "normalize_objective",
    "pair_likelihood",
    "preference_oracle",
    "prior_covariance",
    "sample_gp_objective",
    "sample_utility",
    "write_objective_csv",
]
