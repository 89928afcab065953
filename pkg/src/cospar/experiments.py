"""Simulation protocols: seeded repetitions, learning curves, manifests.

A run repeats the interaction loop against a synthetic or file-backed
objective for a fixed number of executed trials, scoring every executed
action by its normalized objective value.  Repetitions are independent
(child seeds derived from the master seed) and aggregate to a mean and
standard-error curve per trial index.
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass, field
from multiprocessing import get_context
from pathlib import Path

import numpy as np

from .engine import CoSparEngine, EngineConfig, FeedbackBundle
from .errors import ConfigurationError, NumericalError
from .grid import ActionSpace
from .kernels import KernelParams
from .objectives import (
    ObjectiveTable,
    load_objective_csv,
    normalize_objective,
    sample_gp_objective,
)
from .oracles import CoactiveOracleConfig, coactive_oracle, preference_oracle

EXPERIMENT_SCHEMA = "cospar/experiment-run@1"


def child_seed(master_seed: int, index: int) -> int:
    """Stable 128-bit repetition seed derived from (master seed, index)."""
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int.from_bytes(ss.generate_state(4, np.uint32).tobytes(), "little")


@dataclass
class ExperimentConfig:
    """One simulation cell: engine settings + objective source + budget."""

    engine: EngineConfig
    space: ActionSpace
    trials_total: int
    repetitions: int
    coactive_enabled: bool
    objective_source: dict  # {"kind": "gp_prior", "generation": kernel} | {"kind": "file", "path": ...}

    def __post_init__(self):
        if self.trials_total < 1 or self.repetitions < 1:
            raise ConfigurationError("trials_total and repetitions must be >= 1")
        n = self.engine.actions_per_iteration
        if self.trials_total % n:
            raise ConfigurationError(
                f"trials_total {self.trials_total} is not divisible by "
                f"actions_per_iteration {n}"
            )
        kind = self.objective_source.get("kind")
        if kind not in ("gp_prior", "file"):
            raise ConfigurationError(f"unknown objective source kind {kind!r}")

    def to_dict(self) -> dict:
        return {
            "engine": self.engine.to_dict(),
            "space": self.space.dims_as_dict(),
            "trials_total": self.trials_total,
            "repetitions": self.repetitions,
            "coactive_enabled": self.coactive_enabled,
            "objective_source": self.objective_source,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(
            engine=EngineConfig.from_dict(d["engine"]),
            space=ActionSpace.from_dict_list(d["space"]),
            trials_total=int(d["trials_total"]),
            repetitions=int(d["repetitions"]),
            coactive_enabled=bool(d["coactive_enabled"]),
            objective_source=dict(d["objective_source"]),
        )


@dataclass
class LearningCurve:
    """Per-repetition normalized trial scores plus their aggregate curve."""

    per_repetition: np.ndarray  # (repetitions, trials)
    mean: np.ndarray
    standard_error: np.ndarray
    se_degenerate: bool
    child_seeds: list[int] = field(default_factory=list)


def summarize_curves(curves) -> tuple[np.ndarray, np.ndarray, bool]:
    """Per-trial mean and standard error (sample std / sqrt(reps)) across runs."""
    stacked = np.asarray(curves, dtype=float)
    if stacked.ndim != 2:
        raise ConfigurationError("curves must be a rectangular (reps, trials) array")
    mean = stacked.mean(axis=0)
    if stacked.shape[0] < 2:
        warnings.warn("standard error undefined for fewer than 2 repetitions")
        return mean, np.zeros_like(mean), True
    se = stacked.std(axis=0, ddof=1) / np.sqrt(stacked.shape[0])
    return mean, se, False


def simulate_feedback(
    table: ObjectiveTable,
    pending,
    buffer,
    bundle_shape,
    coactive_enabled: bool,
    oracle_cfg: CoactiveOracleConfig | None,
) -> FeedbackBundle:
    """Oracle-generated bundle: all current pairs, all current-vs-buffer pairs."""
    n, b = bundle_shape
    bundle = FeedbackBundle(n, b)
    for j in range(len(pending)):
        for k in range(j + 1, len(pending)):
            winner = preference_oracle(table, pending[j], pending[k])
            if winner is not None:
                bundle.set_preference(j, k, winner == pending[j])
        for i, past in enumerate(buffer):
            winner = preference_oracle(table, pending[j], past)
            if winner is not None:
                bundle.set_preference(j, n + i, winner == pending[j])
    if coactive_enabled:
        for j in range(len(pending)):
            levels = coactive_oracle(table, pending[j], oracle_cfg)
            if levels:
                bundle.set_coactive(j, levels)
    return bundle


def _resolve_objective(config: ExperimentConfig, seed: int, shared_table):
    if shared_table is not None:
        return shared_table
    generation = KernelParams.from_dict(config.objective_source["generation"])
    objective_rng = np.random.default_rng([seed, 0])
    return sample_gp_objective(config.space, generation, objective_rng)


def run_repetition(
    config: ExperimentConfig, seed: int, shared_table: ObjectiveTable | None = None
) -> np.ndarray:
    """One full repetition; returns the normalized value of every executed trial."""
    table = normalize_objective(_resolve_objective(config, seed, shared_table))
    oracle_cfg = (
        CoactiveOracleConfig.from_objective(table) if config.coactive_enabled else None
    )
    engine_rng = np.random.default_rng([seed, 1])
    engine = CoSparEngine(config.engine, table.space, rng=engine_rng)
    n, b = config.engine.actions_per_iteration, config.engine.buffer_size
    values = []
    for _ in range(config.trials_total // n):
        pending = engine.propose_actions()
        bundle = simulate_feedback(
            table, pending, engine.buffer, (n, b), config.coactive_enabled, oracle_cfg
        )
        engine.record_feedback(bundle)
        values.extend(table.values[a] for a in pending)
    return np.asarray(values)


def _repetition_task(args):
    config_dict, rep, seed, objective_path = args
    config = ExperimentConfig.from_dict(config_dict)
    shared = load_objective_csv(objective_path) if objective_path else None
    try:
        return run_repetition(config, seed, shared)
    except NumericalError as exc:
        raise NumericalError(
            f"repetition {rep} (child seed {seed}) failed: {exc}"
        ) from exc


def run_experiment(
    config: ExperimentConfig, master_seed: int, jobs: int = 1
) -> LearningCurve:
    """All repetitions of one cell, optionally across a worker pool.

    Aggregation is keyed by repetition index, so results are identical
    regardless of worker completion order.
    """
    seeds = [child_seed(master_seed, rep) for rep in range(config.repetitions)]
    objective_path = None
    shared = None
    if config.objective_source["kind"] == "file":
        objective_path = config.objective_source["path"]
        shared = load_objective_csv(objective_path)

    if jobs > 1 and config.repetitions > 1:
        tasks = [
            (config.to_dict(), rep, seed, objective_path)
            for rep, seed in enumerate(seeds)
        ]
        ctx = get_context("fork" if os.name == "posix" else "spawn")
        with ctx.Pool(processes=min(jobs, config.repetitions)) as pool:
            curves = pool.map(_repetition_task, tasks)
    else:
        curves = []
        for rep, seed in enumerate(seeds):
            try:
                curves.append(run_repetition(config, seed, shared))
            except NumericalError as exc:
                raise NumericalError(
                    f"repetition {rep} (child seed {seed}) failed: {exc}"
                ) from exc

    mean, se, degenerate = summarize_curves(curves)
    return LearningCurve(
        per_repetition=np.asarray(curves),
        mean=mean,
        standard_error=se,
        se_degenerate=degenerate,
        child_seeds=seeds,
    )


def run_checkpointed_session(
    table: ObjectiveTable,
    engine_config: EngineConfig,
    iterations: int,
    seed: int,
    checkpoints=(1, 3, 5, 10),
    coactive_enabled: bool = False,
):
    """Single seeded run that dumps the posterior after selected iterations."""
    normalized = normalize_objective(table)
    oracle_cfg = (
        CoactiveOracleConfig.from_objective(normalized) if coactive_enabled else None
    )
    engine = CoSparEngine(engine_config, normalized.space, seed=seed)
    n, b = engine_config.actions_per_iteration, engine_config.buffer_size
    executed = []
    dumps = {}
    for it in range(1, iterations + 1):
        pending = engine.propose_actions()
        bundle = simulate_feedback(
            normalized, pending, engine.buffer, (n, b), coactive_enabled, oracle_cfg
        )
        engine.record_feedback(bundle)
        executed.extend(pending)
        if it in set(checkpoints):
            mean, std = engine.posterior_summary()
            dumps[it] = {"mean": mean, "std": std}
    mean, std = engine.posterior_summary()
    return {
        "executed": executed,
        "values": np.asarray([normalized.values[a] for a in executed]),
        "checkpoints": dumps,
        "final_mean": mean,
        "final_std": std,
        "final_argmax": int(np.argmax(mean)),
        "true_argmax": normalized.argmax(),
    }


# -- output files -------------------------------------------------------


def format_float(x: float) -> str:
    return repr(float(x))


def write_results_csv(path, rows):
    """rows: iterable of (config_id, trial_index, mean, standard_error)."""
    lines = ["config_id,trial_index,mean,standard_error"]
    for config_id, trial_index, mean, se in rows:
        lines.append(
            f"{config_id},{trial_index},{format_float(mean)},{format_float(se)}"
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def curve_rows(config_id: str, curve: LearningCurve):
    for t in range(curve.mean.shape[0]):
        yield config_id, t + 1, curve.mean[t], curve.standard_error[t]


def write_manifest(path, payload: dict):
    """Canonical manifest JSON: sorted keys, bit-exact reproduction inputs."""
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def read_manifest(path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))
