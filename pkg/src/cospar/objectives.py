"""Ground-truth objective tables used by simulated feedback oracles.

Tables always store *utilities* (larger is better); cost curves are negated
on load.  The on-disk format is a CSV with a leading orientation comment:

    # orientation: cost
    dim_0,dim_1,value
    0.0,0.0,1.25
    ...

Rows must form a complete cartesian grid with equally spaced coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DegenerateObjectiveError, ObjectiveParseError
from .grid import ActionSpace, GridDimension
from .kernels import KernelParams, prior_covariance
from .numerics import jittered_cholesky

ORIENTATIONS = ("cost", "utility")


@dataclass
class ObjectiveTable:
    """Utility value for every action of a grid."""

    space: ActionSpace
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.space.size,):
            raise ObjectiveParseError(
                f"values length {self.values.shape} does not match grid size "
                f"{self.space.size}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ObjectiveParseError("objective values must be finite")

    def argmax(self) -> int:
        return int(np.argmax(self.values))

    def __eq__(self, other):
        if not isinstance(other, ObjectiveTable):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.values, other.values)


def sample_gp_objective(
    space: ActionSpace, kernel: KernelParams, rng: np.random.Generator
) -> ObjectiveTable:
    """Draw one zero-mean table with the kernel's prior covariance."""
    cov = prior_covariance(space, kernel)
    chol, _ = jittered_cholesky(cov, "objective prior covariance")
    values = chol @ rng.standard_normal(space.size)
    return ObjectiveTable(space, values)


def normalize_objective(table: ObjectiveTable) -> ObjectiveTable:
    """Affinely rescale so the grid minimum is 0 and the maximum is 1."""
    lo = float(np.min(table.values))
    hi = float(np.max(table.values))
    if hi <= lo:
        raise DegenerateObjectiveError(
            "objective is constant over the grid; cannot normalize"
        )
    return ObjectiveTable(table.space, (table.values - lo) / (hi - lo))


def write_objective_csv(table: ObjectiveTable, path, orientation: str = "utility"):
    """Write in the objective CSV format; `cost` negates the stored utilities."""
    if orientation not in ORIENTATIONS:
        raise ObjectiveParseError(f"unknown orientation {orientation!r}")
    values = -table.values if orientation == "cost" else table.values
    d = table.space.ndim
    lines = [f"# orientation: {orientation}"]
    lines.append(",".join([f"dim_{i}" for i in range(d)] + ["value"]))
    for i in range(table.space.size):
        coords = table.space.points[i]
        lines.append(",".join([repr(float(c)) for c in coords] + [repr(float(values[i]))]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_objective_csv(path) -> ObjectiveTable:
    """Parse an objective CSV back into a utility table.

    Raises ObjectiveParseError (with the 1-based file row) on malformed
    numbers, duplicate points, incomplete grids, or uneven spacing.
    """
    text = Path(path).read_text(encoding="utf-8")
    lines = [ln for ln in text.splitlines()]
    if not lines or not lines[0].strip().startswith("#"):
        raise ObjectiveParseError("missing '# orientation:' comment line", row=1)
    header_comment = lines[0].split(":", 1)
    orientation = header_comment[1].strip() if len(header_comment) == 2 else ""
    if orientation not in ORIENTATIONS:
        raise ObjectiveParseError(
            f"orientation must be one of {ORIENTATIONS}, got {orientation!r}", row=1
        )
    if len(lines) < 3:
        raise ObjectiveParseError("file has no data rows", row=len(lines))
    header = [tok.strip() for tok in lines[1].split(",")]
    if len(header) < 2 or header[-1] != "value":
        raise ObjectiveParseError(
            "header must be dim_0,...,dim_{d-1},value", row=2
        )
    d = len(header) - 1

    rows = []
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        toks = line.split(",")
        if len(toks) != d + 1:
            raise ObjectiveParseError(
                f"expected {d + 1} columns, got {len(toks)}", row=lineno
            )
        try:
            nums = [float(t) for t in toks]
        except ValueError:
            raise ObjectiveParseError(f"non-numeric entry in {line!r}", row=lineno)
        if not all(np.isfinite(nums)):
            raise ObjectiveParseError("non-finite entry", row=lineno)
        rows.append((lineno, nums[:d], nums[d]))
    if not rows:
        raise ObjectiveParseError("file has no data rows", row=len(lines))

    axes = []
    for dim in range(d):
        axes.append(np.unique([r[1][dim] for r in rows]))
    counts = [len(a) for a in axes]
    expected = int(np.prod(counts))

    positions = [{v: i for i, v in enumerate(axis)} for axis in axes]
    shape = tuple(counts)
    values = np.full(expected, np.nan)
    filled_row = {}
    for lineno, coords, value in rows:
        multi = tuple(positions[dim][coords[dim]] for dim in range(d))
        flat = int(np.ravel_multi_index(multi, shape))
        if flat in filled_row:
            raise ObjectiveParseError(
                f"duplicate grid point (first seen at row {filled_row[flat]})",
                row=lineno,
            )
        filled_row[flat] = lineno
        values[flat] = value
    if len(rows) != expected or np.any(np.isnan(values)):
        raise ObjectiveParseError(
            f"incomplete grid: got {len(rows)} rows, expected {expected}",
            row=rows[-1][0],
        )

    dims = []
    for dim in range(d):
        axis = axes[dim]
        lo, hi = float(axis[0]), float(axis[-1])
        if counts[dim] > 1:
            ideal = np.linspace(lo, hi, counts[dim])
            tol = 1e-8 * max(hi - lo, abs(hi), 1.0)
            if np.max(np.abs(axis - ideal)) > tol:
                raise ObjectiveParseError(
                    f"column {header[dim]} is not equally spaced", row=2
                )
        dims.append(GridDimension(header[dim], lo, hi, counts[dim]))
    space = ActionSpace(dims)
    if orientation == "cost":
        values = -values
    return ObjectiveTable(space, values)
