"""Finite action grids: equally spaced d-dimensional lattices of candidate actions.

An action space is the cartesian product of per-dimension linspaces, flattened
in row-major (C) order so the last dimension varies fastest.  All algorithm
code addresses actions by their flat index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError, ProtocolError


@dataclass(frozen=True)
class GridDimension:
    """One axis of the grid: physical range plus number of grid points."""

    name: str
    lower: float
    upper: float
    count: int

    def validate(self):
        if self.count < 1:
            raise ConfigurationError(
                f"dimension {self.name!r}: count must be >= 1, got {self.count}"
            )
        if not (np.isfinite(self.lower) and np.isfinite(self.upper)):
            raise ConfigurationError(f"dimension {self.name!r}: bounds must be finite")
        if self.count == 1:
            if self.lower > self.upper:
                raise ConfigurationError(
                    f"dimension {self.name!r}: lower {self.lower} > upper {self.upper}"
                )
        elif not self.lower < self.upper:
            raise ConfigurationError(
                f"dimension {self.name!r}: need lower < upper when count > 1 "
                f"(got [{self.lower}, {self.upper}] with count {self.count})"
            )

    @property
    def span(self) -> float:
        return self.upper - self.lower

    def axis(self) -> np.ndarray:
        return np.linspace(self.lower, self.upper, self.count)


class ActionSpace:
    """Row-major flattened grid of d-dimensional actions.

    Index ``i`` maps bijectively to a tuple of per-dimension grid indices via
    C-order raveling; ``points[i]`` holds the physical coordinates.
    """

    def __init__(self, dims: Sequence[GridDimension]):
        if not dims:
            raise ConfigurationError("action space needs at least one dimension")
        for dim in dims:
            dim.validate()
        self.dims = tuple(dims)
        self.axes = tuple(dim.axis() for dim in self.dims)
        self.shape = tuple(dim.count for dim in self.dims)
        self.size = int(np.prod(self.shape))
        mesh = np.meshgrid(*self.axes, indexing="ij")
        self.points = np.stack([m.ravel(order="C") for m in mesh], axis=-1)

    @property
    def ndim(self) -> int:
        return len(self.dims)

    def check_index(self, index: int) -> int:
        index = int(index)
        if not 0 <= index < self.size:
            raise ProtocolError(
                f"action index {index} out of range [0, {self.size})"
            )
        return index

    def coordinates(self, index: int) -> np.ndarray:
        return self.points[self.check_index(index)]

    def multi_index(self, index: int) -> tuple[int, ...]:
        return tuple(int(v) for v in np.unravel_index(self.check_index(index), self.shape))

    def flat_index(self, multi: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(int(m) for m in multi), self.shape))

    def snap(self, coords: Iterable[float]) -> int:
        """Nearest grid action to arbitrary coordinates; ties go to the lower index."""
        coords = np.asarray(list(coords), dtype=float)
        if coords.shape != (self.ndim,):
            raise ProtocolError(
                f"expected {self.ndim} coordinates, got shape {coords.shape}"
            )
        multi = []
        for axis, value in zip(self.axes, coords):
            # argmin returns the first minimiser, which is the lower grid index
            multi.append(int(np.argmin(np.abs(axis - value))))
        return self.flat_index(multi)

    def dims_as_dict(self) -> list[dict]:
        return [
            {"name": d.name, "min": d.lower, "max": d.upper, "count": d.count}
            for d in self.dims
        ]

    @classmethod
    def from_dict_list(cls, dims: Sequence[dict]) -> "ActionSpace":
        return cls(
            [
                GridDimension(
                    name=str(d.get("name", f"dim_{i}")),
                    lower=float(d["min"]),
                    upper=float(d["max"]),
                    count=int(d["count"]),
                )
                for i, d in enumerate(dims)
            ]
        )

    def __eq__(self, other):
        if not isinstance(other, ActionSpace):
            return NotImplemented
        return self.dims == other.dims

    def __repr__(self):
        inner = ", ".join(
            f"{d.name}[{d.lower}..{d.upper}x{d.count}]" for d in self.dims
        )
        return f"ActionSpace({inner})"


def build_action_grid(dims: Sequence) -> ActionSpace:
    """Build an ActionSpace from (min, max, count) or (name, min, max, count) tuples."""
    converted = []
    for i, spec in enumerate(dims):
        if isinstance(spec, GridDimension):
            converted.append(spec)
        elif len(spec) == 4:
            name, lo, hi, count = spec
            converted.append(GridDimension(str(name), float(lo), float(hi), int(count)))
        elif len(spec) == 3:
            lo, hi, count = spec
            converted.append(GridDimension(f"dim_{i}", float(lo), float(hi), int(count)))
        else:
            raise ConfigurationError(
                f"dimension {i}: expected (min, max, count) or (name, min, max, count)"
            )
    return ActionSpace(converted)
