"""Observed comparisons: one record per elicited preference."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import ConfigurationError, ProtocolError
from .grid import ActionSpace

PAIRWISE = "pairwise"
COACTIVE = "coactive"
_SOURCES = (PAIRWISE, COACTIVE)


@dataclass(frozen=True)
class PreferenceRecord:
    """winner was preferred to loser; weight scales the likelihood noise.

    Pairwise comparisons carry weight 1; user-suggested improvements carry the
    configured coactive weight.
    """

    winner: int
    loser: int
    weight: float = 1.0
    source: str = PAIRWISE

    def __post_init__(self):
        if self.winner == self.loser:
            raise ConfigurationError(
                f"a preference needs distinct actions, got {self.winner} twice"
            )
        if not self.weight > 0:
            raise ConfigurationError(f"record weight must be positive, got {self.weight}")
        if self.source not in _SOURCES:
            raise ConfigurationError(f"unknown record source {self.source!r}")

    def to_dict(self) -> dict:
        return {
            "winner": self.winner,
            "loser": self.loser,
            "weight": self.weight,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PreferenceRecord":
        return cls(
            winner=int(d["winner"]),
            loser=int(d["loser"]),
            weight=float(d["weight"]),
            source=str(d["source"]),
        )


class PreferenceDataset:
    """Append-only, elicitation-ordered list of preference records."""

    def __init__(self, records: Iterable[PreferenceRecord] = ()):
        self._records: list[PreferenceRecord] = list(records)

    def append(self, record: PreferenceRecord):
        self._records.append(record)

    def extend(self, records: Iterable[PreferenceRecord]):
        self._records.extend(records)

    def __len__(self) -> int:
        return len(self._records)

    def __iter__(self) -> Iterator[PreferenceRecord]:
        return iter(self._records)

    def __getitem__(self, i) -> PreferenceRecord:
        return self._records[i]

    @property
    def records(self) -> tuple[PreferenceRecord, ...]:
        return tuple(self._records)

    def winners(self) -> np.ndarray:
        return np.array([r.winner for r in self._records], dtype=int)

    def losers(self) -> np.ndarray:
        return np.array([r.loser for r in self._records], dtype=int)

    def weights(self) -> np.ndarray:
        return np.array([r.weight for r in self._records], dtype=float)

    def validate_indices(self, space: ActionSpace):
        for k, r in enumerate(self._records):
            if not (0 <= r.winner < space.size and 0 <= r.loser < space.size):
                raise ProtocolError(
                    f"record {k} references action outside [0, {space.size}): "
                    f"{r.winner} vs {r.loser}"
                )

    def copy(self) -> "PreferenceDataset":
        return PreferenceDataset(self._records)

    def reversed_roles(self) -> "PreferenceDataset":
        """Same comparisons with winner and loser swapped (diagnostics/tests)."""
        return PreferenceDataset(
            PreferenceRecord(r.loser, r.winner, r.weight, r.source) for r in self._records
        )

    def to_dict_list(self) -> list[dict]:
        return [r.to_dict() for r in self._records]

    @classmethod
    def from_dict_list(cls, items: Iterable[dict]) -> "PreferenceDataset":
        return cls(PreferenceRecord.from_dict(d) for d in items)
