"""The interaction loop: propose actions by posterior sampling, absorb feedback.

Each iteration draws one utility sample per requested action, executes the
per-sample argmax actions, and then folds the returned feedback bundle
(pairwise verdicts against current and recently executed actions, plus
optional user-suggested improvements) into the preference dataset before
refitting the posterior.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigurationError, ProtocolError, SnapshotError
from .grid import ActionSpace
from .kernels import KernelParams, prior_covariance
from .model import UtilityPosterior, laplace_posterior, sample_utility
from .preferences import COACTIVE, PAIRWISE, PreferenceDataset, PreferenceRecord

ENGINE_SCHEMA = "cospar/engine-state@1"

VALID_LEVELS = (-2, -1, 1, 2)


@dataclass(frozen=True)
class EngineConfig:
    """Loop parameters: proposals per iteration, comparison buffer, weights.

    coactive_steps holds one (small, large) pair per grid dimension, as
    fractions of that dimension's physical range.
    """

    actions_per_iteration: int
    buffer_size: int
    coactive_weight: float
    kernel: KernelParams
    coactive_steps: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.actions_per_iteration < 1:
            raise ConfigurationError(
                f"actions_per_iteration must be >= 1, got {self.actions_per_iteration}"
            )
        if self.buffer_size < 0:
            raise ConfigurationError(
                f"buffer_size must be >= 0, got {self.buffer_size}"
            )
        if not self.coactive_weight > 0:
            raise ConfigurationError(
                f"coactive_weight must be positive, got {self.coactive_weight}"
            )
        steps = tuple((float(s), float(l)) for s, l in self.coactive_steps)
        object.__setattr__(self, "coactive_steps", steps)
        for d, (small, large) in enumerate(steps):
            if not (0.0 < small < large <= 1.0):
                raise ConfigurationError(
                    f"coactive_steps[{d}] must satisfy 0 < small < large <= 1, "
                    f"got ({small}, {large})"
                )

    def check_space(self, space: ActionSpace):
        self.kernel.check_space(space)
        if len(self.coactive_steps) != space.ndim:
            raise ConfigurationError(
                f"coactive_steps has {len(self.coactive_steps)} entries but the "
                f"action space has {space.ndim} dimensions"
            )

    def to_dict(self) -> dict:
        return {
            "actions_per_iteration": self.actions_per_iteration,
            "buffer_size": self.buffer_size,
            "coactive_weight": self.coactive_weight,
            "kernel": self.kernel.to_dict(),
            "coactive_steps": [list(p) for p in self.coactive_steps],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        return cls(
            actions_per_iteration=int(d["actions_per_iteration"]),
            buffer_size=int(d["buffer_size"]),
            coactive_weight=float(d["coactive_weight"]),
            kernel=KernelParams.from_dict(d["kernel"]),
            coactive_steps=tuple(tuple(p) for p in d["coactive_steps"]),
        )


class FeedbackBundle:
    """Feedback for one iteration: sparse verdict cells plus improvement hints.

    Pairwise cells live in an n x (n + b) layout: columns 0..n-1 are the
    current actions in proposal order, columns n..n+b-1 the buffered actions
    oldest first.  A cell value of 1 means the row's current action won, 0
    that the column action won; unset cells mean no comparison.  Within the
    current-vs-current block only the strict upper triangle is read.
    """

    def __init__(self, n: int, b: int):
        self.n = int(n)
        self.b = int(b)
        self.pairwise: dict[tuple[int, int], int] = {}
        self.coactive: dict[int, dict[int, int]] = {}

    def set_preference(self, row: int, col: int, current_wins) -> "FeedbackBundle":
        if not 0 <= row < self.n:
            raise ProtocolError(f"row {row} outside [0, {self.n})")
        if not 0 <= col < self.n + self.b:
            raise ProtocolError(f"column {col} outside [0, {self.n + self.b})")
        value = int(bool(current_wins))
        self.pairwise[(row, col)] = value
        return self

    def set_coactive(self, slot: int, levels: Mapping[int, int]) -> "FeedbackBundle":
        if not 0 <= slot < self.n:
            raise ProtocolError(f"coactive slot {slot} outside [0, {self.n})")
        cleaned = {}
        for dim, level in levels.items():
            if int(level) not in VALID_LEVELS:
                raise ProtocolError(
                    f"coactive level must be one of {VALID_LEVELS}, got {level}"
                )
            cleaned[int(dim)] = int(level)
        if cleaned:
            self.coactive[int(slot)] = cleaned
        return self

    @classmethod
    def from_matrix(cls, matrix, coactive=None) -> "FeedbackBundle":
        """Build from a dense n x (n+b) array where unset cells are None/NaN."""
        rows = len(matrix)
        cols = len(matrix[0]) if rows else 0
        bundle = cls(rows, cols - rows)
        for j in range(rows):
            for k in range(cols):
                cell = matrix[j][k]
                if cell is None:
                    continue
                if isinstance(cell, float) and np.isnan(cell):
                    continue
                bundle.set_preference(j, k, int(cell))
        for slot, levels in (coactive or {}).items():
            bundle.set_coactive(slot, levels)
        return bundle


def apply_coactive_suggestion(
    space: ActionSpace,
    action: int,
    levels: Mapping[int, int],
    steps: Sequence[tuple[float, float]],
):
    """Resolve improvement levels into a grid action, or None if it lands back.

    Each nonzero level shifts its coordinate by sign * (small or large
    fraction) of the dimension range (|level| 1 -> small, 2 -> large), clips
    to the physical bounds, and snaps to the nearest grid value (ties toward
    the lower index).
    """
    action = space.check_index(action)
    coords = space.coordinates(action).astype(float).copy()
    for dim, level in levels.items():
        dim = int(dim)
        if not 0 <= dim < space.ndim:
            raise ProtocolError(
                f"coactive dimension {dim} outside [0, {space.ndim})"
            )
        level = int(level)
        if level == 0:
            continue
        if level not in VALID_LEVELS:
            raise ProtocolError(f"coactive level must be in {VALID_LEVELS}, got {level}")
        small, large = steps[dim]
        fraction = small if abs(level) == 1 else large
        bound = space.dims[dim]
        coords[dim] = np.clip(
            coords[dim] + np.sign(level) * fraction * bound.span,
            bound.lower,
            bound.upper,
        )
    snapped = space.snap(coords)
    return None if snapped == action else snapped


@dataclass
class FeedbackOutcome:
    """What one feedback round appended; dropped improvements snapped onto
    the executed action (boundary absorption)."""

    appended: list[PreferenceRecord] = field(default_factory=list)
    dropped_coactive: list[tuple[int, dict[int, int]]] = field(default_factory=list)

    @property
    def pairwise_count(self) -> int:
        return sum(1 for r in self.appended if r.source == PAIRWISE)

    @property
    def coactive_count(self) -> int:
        return sum(1 for r in self.appended if r.source == COACTIVE)


class CoSparEngine:
    """Stateful interaction loop; one engine per session, never shared mutably."""

    def __init__(
        self,
        config: EngineConfig,
        space: ActionSpace,
        seed=None,
        rng: np.random.Generator | None = None,
        _defer_posterior: bool = False,
    ):
        config.check_space(space)
        self.config = config
        self.space = space
        self.seed = seed
        self.rng = rng if rng is not None else np.random.default_rng(seed)
        self.prior_cov = prior_covariance(space, config.kernel)
        self.dataset = PreferenceDataset()
        self.buffer: list[int] = []
        self.pending: list[int] = []
        self.iteration = 0
        if not _defer_posterior:
            self.posterior = UtilityPosterior(
                np.zeros(space.size), self.prior_cov.copy()
            )

    def propose_actions(self) -> list[int]:
        """Draw one posterior utility sample per slot and take each argmax.

        Ties break toward the lowest action index; duplicate proposals across
        slots are allowed and executed as distinct trials.
        """
        if self.pending:
            raise ProtocolError("previous proposals still await feedback")
        proposals = []
        for _ in range(self.config.actions_per_iteration):
            sample = sample_utility(self.posterior, self.rng)
            proposals.append(int(np.argmax(sample)))
        self.pending = proposals
        return list(proposals)

    def record_feedback(self, bundle: FeedbackBundle) -> FeedbackOutcome:
        """Translate a feedback bundle into records, refit, advance the loop."""
        if not self.pending:
            raise ProtocolError("no pending proposals; call propose_actions first")
        n, b = self.config.actions_per_iteration, self.config.buffer_size
        if (bundle.n, bundle.b) != (n, b):
            raise ProtocolError(
                f"bundle shaped {bundle.n}x{bundle.n + bundle.b} does not match "
                f"engine shape {n}x{n + b}"
            )
        outcome = FeedbackOutcome()
        for row, col in sorted(bundle.pairwise):
            value = bundle.pairwise[(row, col)]
            current = self.pending[row]
            if col < n:
                if col <= row:
                    continue  # strict upper triangle only; diagonal ignored
                other = self.pending[col]
            else:
                slot = col - n
                if slot >= len(self.buffer):
                    raise ProtocolError(
                        f"pairwise cell ({row}, {col}) references buffer slot "
                        f"{slot} but only {len(self.buffer)} actions are buffered"
                    )
                other = self.buffer[slot]
            if current == other:
                continue  # self-comparison carries no information
            winner, loser = (current, other) if value == 1 else (other, current)
            outcome.appended.append(PreferenceRecord(winner, loser, 1.0, PAIRWISE))
        for slot in sorted(bundle.coactive):
            levels = bundle.coactive[slot]
            if slot >= len(self.pending):
                raise ProtocolError(f"coactive slot {slot} has no executed action")
            executed = self.pending[slot]
            suggestion = apply_coactive_suggestion(
                self.space, executed, levels, self.config.coactive_steps
            )
            if suggestion is None:
                outcome.dropped_coactive.append((slot, dict(levels)))
            else:
                outcome.appended.append(
                    PreferenceRecord(
                        suggestion, executed, self.config.coactive_weight, COACTIVE
                    )
                )
        self.dataset.extend(outcome.appended)
        self.posterior = laplace_posterior(
            self.dataset, self.space, self.config.kernel, prior_cov=self.prior_cov
        )
        if b > 0:
            self.buffer = (self.buffer + self.pending)[-b:]
        self.pending = []
        self.iteration += 1
        return outcome

    def posterior_summary(self):
        """Per-action posterior mean and standard deviation."""
        return self.posterior.mean.copy(), self.posterior.std()

    # -- persistence ---------------------------------------------------

    def snapshot(self) -> dict:
        state = {
            "schema": ENGINE_SCHEMA,
            "config": self.config.to_dict(),
            "space": self.space.dims_as_dict(),
            "iteration": self.iteration,
            "buffer": list(self.buffer),
            "pending": list(self.pending),
            "records": self.dataset.to_dict_list(),
            "seed": self.seed,
            "rng": self.rng.bit_generator.state,
        }
        return state

    @classmethod
    def from_snapshot(cls, state: dict) -> "CoSparEngine":
        schema = state.get("schema")
        if schema != ENGINE_SCHEMA:
            raise SnapshotError(
                f"unsupported engine snapshot schema {schema!r}; "
                f"expected {ENGINE_SCHEMA!r}"
            )
        space = ActionSpace.from_dict_list(state["space"])
        config = EngineConfig.from_dict(state["config"])
        engine = cls(config, space, seed=state.get("seed"), _defer_posterior=True)
        if state.get("rng") is not None:
            engine.rng.bit_generator.state = state["rng"]
        engine.iteration = int(state["iteration"])
        for name in ("buffer", "pending"):
            for idx in state[name]:
                space.check_index(idx)
        if len(state["buffer"]) > config.buffer_size:
            raise SnapshotError(
                f"snapshot buffer holds {len(state['buffer'])} actions but the "
                f"configured buffer size is {config.buffer_size}"
            )
        engine.buffer = [int(i) for i in state["buffer"]]
        engine.pending = [int(i) for i in state["pending"]]
        engine.dataset = PreferenceDataset.from_dict_list(state["records"])
        try:
            engine.dataset.validate_indices(space)
        except Exception as exc:
            raise SnapshotError(f"snapshot records invalid: {exc}") from exc
        engine.posterior = laplace_posterior(
            engine.dataset, space, config.kernel, prior_cov=engine.prior_cov
        )
        return engine
