"""Command-line entry point.

Subcommands: simulate-1d, simulate-2d, gen-objective, replay, serve, presets.
Exit codes: 0 success, 2 usage/config error, 3 numerical failure.  Every
output-writing run leaves a manifest JSON beside its outputs that is
sufficient to reproduce the results bit-exactly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .engine import EngineConfig
from .errors import (
    ConfigurationError,
    CosparError,
    NumericalError,
    ObjectiveParseError,
    ProtocolError,
    SnapshotError,
)
from .experiments import (
    ExperimentConfig,
    child_seed,
    curve_rows,
    format_float,
    run_checkpointed_session,
    run_experiment,
    write_manifest,
    write_results_csv,
)
from .grid import ActionSpace, build_action_grid
from .kernels import KernelParams
from .objectives import load_objective_csv, sample_gp_objective, write_objective_csv
from .presets import (
    SIM_COT_1D,
    bundled_cot_curve_path,
    describe_presets,
    load_custom_presets,
    session_preset,
)
from .sessions import Session, apply_feedback, session_view


def _default_out(subcommand: str) -> Path:
    root = os.environ.get("COSPAR_OUT", "cospar-out")
    return Path(root) / subcommand


def _parse_grid(text: str):
    try:
        counts = [int(tok) for tok in text.lower().split("x")]
    except ValueError:
        raise ConfigurationError(f"bad --grid value {text!r}; expected e.g. 30x30")
    if not counts or any(c < 1 for c in counts):
        raise ConfigurationError(f"bad --grid value {text!r}")
    return counts


def _parse_lengthscales(text: str, ndim: int):
    values = [float(tok) for tok in text.split(",")]
    if len(values) == 1:
        values = values * ndim
    if len(values) != ndim:
        raise ConfigurationError(
            f"--lengthscale needs 1 or {ndim} values, got {len(values)}"
        )
    return values


def _parse_checkpoints(text: str):
    try:
        values = sorted({int(tok) for tok in text.split(",") if tok.strip()})
    except ValueError:
        raise ConfigurationError(f"bad --checkpoints value {text!r}")
    if any(v < 1 for v in values):
        raise ConfigurationError("checkpoints must be >= 1")
    return values


def cmd_simulate_2d(args) -> int:
    from .presets import default_2d_suite

    if args.config:
        suite = json.loads(Path(args.config).read_text(encoding="utf-8"))
    else:
        suite = default_2d_suite()
    if args.repetitions is not None:
        suite["repetitions"] = args.repetitions
    if args.trials is not None:
        suite["trials_total"] = args.trials

    all_cells = suite["cells"]
    selected = list(enumerate(all_cells))
    if args.cells:
        wanted = set(args.cells.split(","))
        selected = [(i, c) for i, c in selected if c["id"] in wanted]
        missing = wanted - {c["id"] for _, c in selected}
        if missing:
            raise ConfigurationError(f"unknown cell ids: {sorted(missing)}")
    if not selected:
        raise ConfigurationError("no cells selected")

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    kernel = KernelParams.from_dict(suite["kernel"])
    combined = []
    manifest_cells = []
    final_means = {}
    for index, cell in selected:
        engine = EngineConfig(
            actions_per_iteration=int(cell["actions_per_iteration"]),
            buffer_size=int(cell["buffer_size"]),
            coactive_weight=float(suite["coactive_weight"]),
            kernel=kernel,
            coactive_steps=tuple(tuple(p) for p in suite["coactive_steps"]),
        )
        config = ExperimentConfig(
            engine=engine,
            space=ActionSpace.from_dict_list(suite["space"]),
            trials_total=int(suite["trials_total"]),
            repetitions=int(suite["repetitions"]),
            coactive_enabled=bool(cell["coactive_enabled"]),
            objective_source=dict(suite["objective_source"]),
        )
        cell_seed = child_seed(args.seed, index)
        curve = run_experiment(config, cell_seed, jobs=args.jobs)
        rows = list(curve_rows(cell["id"], curve))
        write_results_csv(out / f"cell_{cell['id']}.csv", rows)
        combined.extend(rows)
        final_means[cell["id"]] = float(curve.mean[-1])
        manifest_cells.append(
            {
                "id": cell["id"],
                "index": index,
                "config": config.to_dict(),
                "master_seed": cell_seed,
                "child_seeds": curve.child_seeds,
            }
        )
        print(
            f"cell {cell['id']}: mean objective at final trial "
            f"{format_float(curve.mean[-1])}"
        )
    write_results_csv(out / "summary.csv", combined)
    write_manifest(
        out / "manifest.json",
        {
            "schema": "cospar/simulate-2d-manifest@1",
            "version": __version__,
            "command": "simulate-2d",
            "suite": suite,
            "seed": args.seed,
            "jobs": args.jobs,
            "cells": manifest_cells,
            "final_means": final_means,
        },
    )
    return 0


def cmd_simulate_1d(args) -> int:
    objective_path = Path(args.objective) if args.objective else bundled_cot_curve_path()
    if not objective_path.exists():
        raise ConfigurationError(f"objective file not found: {objective_path}")
    table = load_objective_csv(objective_path)
    config, _ = session_preset(args.preset)
    if table.space.ndim != len(config.kernel.lengthscales):
        raise ConfigurationError(
            f"preset {args.preset!r} is {len(config.kernel.lengthscales)}-dimensional "
            f"but the objective has {table.space.ndim} dimensions"
        )
    checkpoints = _parse_checkpoints(args.checkpoints)
    result = run_checkpointed_session(
        table, config, args.iterations, args.seed, checkpoints
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    dim_names = [d.name for d in table.space.dims]
    lines = ["trial_index,action_index," + ",".join(dim_names) + ",value"]
    for t, action in enumerate(result["executed"]):
        coords = table.space.points[action]
        lines.append(
            ",".join(
                [str(t + 1), str(action)]
                + [format_float(c) for c in coords]
                + [format_float(result["values"][t])]
            )
        )
    (out / "trials.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    for it, dump in result["checkpoints"].items():
        lines = ["action_index," + ",".join(dim_names) + ",mean,std"]
        for i in range(table.space.size):
            coords = table.space.points[i]
            lines.append(
                ",".join(
                    [str(i)]
                    + [format_float(c) for c in coords]
                    + [format_float(dump["mean"][i]), format_float(dump["std"][i])]
                )
            )
        (out / f"posterior_iter_{it:03d}.csv").write_text(
            "\n".join(lines) + "\n", encoding="utf-8"
        )

    write_manifest(
        out / "manifest.json",
        {
            "schema": "cospar/simulate-1d-manifest@1",
            "version": __version__,
            "command": "simulate-1d",
            "objective": str(objective_path),
            "preset": args.preset,
            "seed": args.seed,
            "iterations": args.iterations,
            "checkpoints": checkpoints,
            "engine": config.to_dict(),
            "posterior_argmax": result["final_argmax"],
            "objective_argmax": result["true_argmax"],
            "assumptions": {
                "candidate_grid_points": table.space.shape[0],
                "note": "grid resolution of the bundled curve is a protocol "
                "choice, not a reported value",
            },
        },
    )
    print(
        f"final posterior argmax {result['final_argmax']}, "
        f"objective argmax {result['true_argmax']}"
    )
    return 0


def cmd_gen_objective(args) -> int:
    counts = _parse_grid(args.grid)
    dims = [(f"dim_{i}", 0.0, 1.0, c) for i, c in enumerate(counts)]
    space = build_action_grid(dims)
    lengthscales = _parse_lengthscales(args.lengthscale, space.ndim)
    kernel = KernelParams(
        lengthscales=tuple(lengthscales),
        signal_variance=args.signal_variance,
        noise_variance=args.noise_variance,
        preference_noise=0.01,
    )
    import numpy as np

    table = sample_gp_objective(space, kernel, np.random.default_rng(args.seed))
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_objective_csv(table, out, orientation="utility")
    write_manifest(
        Path(str(out) + ".manifest.json"),
        {
            "schema": "cospar/gen-objective-manifest@1",
            "version": __version__,
            "command": "gen-objective",
            "grid": counts,
            "kernel": kernel.to_dict(),
            "seed": args.seed,
            "output": str(out),
        },
    )
    print(f"wrote {space.size}-action objective to {out}")
    return 0


def cmd_replay(args) -> int:
    import numpy as np

    snapshot = json.loads(Path(args.snapshot).read_text(encoding="utf-8"))
    session = Session.from_snapshot(snapshot)
    steps = []
    if args.script:
        steps = json.loads(Path(args.script).read_text(encoding="utf-8"))
        if not isinstance(steps, list):
            raise SnapshotError("script must be a JSON list of feedback payloads")

    def describe(view):
        parts = []
        for entry in view["current"]:
            coords = ", ".join(f"{k}={v:.6g}" for k, v in entry["coordinates"].items())
            parts.append(f"#{entry['index']} ({coords})")
        return "; ".join(parts) if parts else "(none)"

    view = session_view(session)
    mean, _ = session.engine.posterior_summary()
    print(f"step 0: proposal {describe(view)}; posterior argmax {int(np.argmax(mean))}")
    for i, payload in enumerate(steps, start=1):
        if not isinstance(payload, dict):
            raise SnapshotError(f"script step {i} is not an object")
        payload = dict(payload)
        payload.setdefault("iteration", session.engine.iteration)
        try:
            apply_feedback(session, payload)
        except CosparError as exc:
            raise SnapshotError(f"script step {i} failed: {exc}") from exc
        view = session_view(session)
        mean, _ = session.engine.posterior_summary()
        print(
            f"step {i}: proposal {describe(view)}; "
            f"posterior argmax {int(np.argmax(mean))}"
        )
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        snapshot_dir=args.snapshot_dir,
        cors_origins=args.cors_origin or ("*",),
        presets_file=args.presets_file,
    )
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_presets(args) -> int:
    if args.presets_file:
        load_custom_presets(args.presets_file)
    print(json.dumps(describe_presets(), indent=2, sort_keys=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cospar",
        description="Preference-based interactive optimization toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("simulate-2d", help="run the synthetic 2D study cells")
    p.add_argument("--config", help="suite JSON (default: built-in six-cell study)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repetitions", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--cells", help="comma-separated subset of cell ids")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--out", default=str(_default_out("simulate-2d")))
    p.set_defaults(func=cmd_simulate_2d)

    p = sub.add_parser("simulate-1d", help="run the 1D objective-curve protocol")
    p.add_argument("--objective", help="objective CSV (default: bundled cost curve)")
    p.add_argument("--preset", default=SIM_COT_1D)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--iterations", type=int, default=30)
    p.add_argument("--checkpoints", default="1,3,5,10")
    p.add_argument("--out", default=str(_default_out("simulate-1d")))
    p.set_defaults(func=cmd_simulate_1d)

    p = sub.add_parser("gen-objective", help="sample a synthetic objective CSV")
    p.add_argument("--grid", default="30x30")
    p.add_argument("--lengthscale", default="0.15")
    p.add_argument("--signal-variance", type=float, default=1.0)
    p.add_argument("--noise-variance", type=float, default=1e-6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=str(_default_out("objective") / "objective.csv"))
    p.set_defaults(func=cmd_gen_objective)

    p = sub.add_parser("replay", help="replay a session snapshot with a script")
    p.add_argument("--snapshot", required=True)
    p.add_argument("--script", help="JSON list of feedback payloads")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("serve", help="start the live session HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument(
        "--snapshot-dir",
        default=os.environ.get("COSPAR_SNAPSHOT_DIR", "cospar-sessions"),
    )
    p.add_argument("--cors-origin", action="append")
    p.add_argument(
        "--presets-file", default=os.environ.get("COSPAR_PRESETS_FILE")
    )
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("presets", help="list available presets")
    p.add_argument("--presets-file", default=None)
    p.set_defaults(func=cmd_presets)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except (
        ConfigurationError,
        ObjectiveParseError,
        ProtocolError,
        SnapshotError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
