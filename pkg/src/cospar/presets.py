"""Named configurations for the live elicitation protocol and the simulations."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .engine import EngineConfig
from .errors import ConfigurationError
from .grid import ActionSpace, build_action_grid
from .kernels import KernelParams

STEP_LENGTH_1D = "step-length-1d"
STEP_LENGTH_DURATION_2D = "step-length-duration-2d"
STEP_LENGTH_WIDTH_2D = "step-length-width-2d"
SIM_COT_1D = "sim-cot-1d"
SIM_SYNTHETIC_2D = "sim-2d-synthetic"


def _session_presets() -> dict:
    return {
        # Live protocol: compare each trial against the previous one, allow
        # +-10% / +-20% of range step-length suggestions.
        STEP_LENGTH_1D: {
            "description": "15 step lengths, 0.08-0.18 m, one comparison per trial",
            "space": [("step_length_m", 0.08, 0.18, 15)],
            "kernel": KernelParams((0.03,), 0.005, 1e-7, 0.02),
            "actions_per_iteration": 1,
            "buffer_size": 1,
            "coactive_weight": 1.0,
            "coactive_steps": ((0.10, 0.20),),
        },
        STEP_LENGTH_DURATION_2D: {
            "description": "15 step lengths x 10 step durations (0.85-1.15 s)",
            "space": [
                ("step_length_m", 0.08, 0.18, 15),
                ("step_duration_s", 0.85, 1.15, 10),
            ],
            "kernel": KernelParams((0.03, 0.08), 0.005, 1e-7, 0.02),
            "actions_per_iteration": 1,
            "buffer_size": 1,
            "coactive_weight": 1.0,
            "coactive_steps": ((0.10, 0.20), (0.10, 0.20)),
        },
        STEP_LENGTH_WIDTH_2D: {
            "description": "15 step lengths x 6 step widths (0.25-0.30 m)",
            "space": [
                ("step_length_m", 0.08, 0.18, 15),
                ("step_width_m", 0.25, 0.30, 6),
            ],
            "kernel": KernelParams((0.03, 0.03), 0.005, 1e-7, 0.02),
            "actions_per_iteration": 1,
            "buffer_size": 1,
            "coactive_weight": 1.0,
            "coactive_steps": ((0.10, 0.20), (0.20, 0.40)),
        },
        # Simulation protocols.
        SIM_COT_1D: {
            "description": "1D cost-curve protocol: two fresh proposals per iteration",
            "space": [("step_length_m", 0.08, 0.18, 15)],
            "kernel": KernelParams((0.025,), 1e-4, 1e-8, 0.01),
            "actions_per_iteration": 2,
            "buffer_size": 0,
            "coactive_weight": 1.0,
            "coactive_steps": ((0.05, 0.10),),
        },
        SIM_SYNTHETIC_2D: {
            "description": "30x30 unit-square grid for synthetic-objective studies",
            "space": [("x0", 0.0, 1.0, 30), ("x1", 0.0, 1.0, 30)],
            "kernel": KernelParams((0.15, 0.15), 1e-4, 1e-5, 0.01),
            "actions_per_iteration": 1,
            "buffer_size": 1,
            "coactive_weight": 1.0,
            "coactive_steps": ((0.05, 0.10), (0.05, 0.10)),
        },
    }


_custom_presets: dict = {}


def preset_names() -> list[str]:
    return sorted(set(_session_presets()) | set(_custom_presets))


def describe_presets() -> dict:
    out = {}
    for name in preset_names():
        config, space, description = _resolve(name)
        out[name] = {
            "description": description,
            "dims": space.dims_as_dict(),
            "actions_per_iteration": config.actions_per_iteration,
            "buffer_size": config.buffer_size,
            "kernel": config.kernel.to_dict(),
            "coactive_steps": [list(p) for p in config.coactive_steps],
        }
    return out


def _resolve(name: str):
    registry = dict(_session_presets())
    registry.update(_custom_presets)
    if name not in registry:
        raise ConfigurationError(
            f"unknown preset {name!r}; available: {', '.join(sorted(registry))}"
        )
    entry = registry[name]
    space = build_action_grid(entry["space"])
    kernel = entry["kernel"]
    if isinstance(kernel, dict):
        kernel = KernelParams.from_dict(kernel)
    config = EngineConfig(
        actions_per_iteration=int(entry["actions_per_iteration"]),
        buffer_size=int(entry["buffer_size"]),
        coactive_weight=float(entry["coactive_weight"]),
        kernel=kernel,
        coactive_steps=tuple(tuple(p) for p in entry["coactive_steps"]),
    )
    return config, space, entry.get("description", "")


def session_preset(name: str) -> tuple[EngineConfig, ActionSpace]:
    config, space, _ = _resolve(name)
    return config, space


def load_custom_presets(path):
    """Merge preset definitions from a JSON file: {name: {space, kernel, ...}}."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, dict):
        raise ConfigurationError("preset file must map names to definitions")
    for name, entry in data.items():
        entry = dict(entry)
        entry["space"] = [
            (d["name"], d["min"], d["max"], d["count"]) for d in entry["space"]
        ]
        entry["coactive_steps"] = tuple(tuple(p) for p in entry["coactive_steps"])
        _custom_presets[name] = entry


def bundled_cot_curve_path() -> Path:
    """Packaged unimodal step-length cost curve for the 1D protocol."""
    return Path(resources.files("cospar").joinpath("data/cot_step_length.csv"))


def default_2d_suite(repetitions: int = 100, trials_total: int = 150) -> dict:
    """The six-cell synthetic 2D study: {(2,0),(3,0),(1,1)} x {plain, coactive}."""
    base, space, _ = _resolve(SIM_SYNTHETIC_2D)
    cells = []
    for n, b in ((2, 0), (3, 0), (1, 1)):
        for coactive in (False, True):
            cells.append(
                {
                    "id": f"n{n}b{b}" + ("_coactive" if coactive else ""),
                    "actions_per_iteration": n,
                    "buffer_size": b,
                    "coactive_enabled": coactive,
                }
            )
    return {
        "schema": "cospar/experiment-suite@1",
        "space": space.dims_as_dict(),
        "kernel": base.kernel.to_dict(),
        "coactive_weight": base.coactive_weight,
        "coactive_steps": [list(p) for p in base.coactive_steps],
        "objective_source": {
            "kind": "gp_prior",
            # Generation amplitude is irrelevant to orderings (scale-invariant
            # oracles); tiny diagonal keeps the factorization stable.
            "generation": {
                "lengthscales": [0.15, 0.15],
                "signal_variance": 1.0,
                "noise_variance": 1e-6,
                "preference_noise": 0.01,
            },
        },
        "trials_total": trials_total,
        "repetitions": repetitions,
        "cells": cells,
    }
