"""Container for d co-observed time series with n realisations each."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, EmptyInput, ModeMismatch, NonFiniteValue, TooFewVariables


@dataclass(frozen=True)
class TimeSeriesPanel:
    """d named variables, each an ``n x T_j`` array (realisations x time).

    The realisation count ``n`` is shared by every variable. Series lengths
    may differ across variables unless the panel is used in single-realisation
    mode (``n == 1``), where all lengths must agree.
    """

    names: tuple[str, ...]
    data: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.names) == 0:
            raise EmptyInput("panel has no variables")
        if len(self.names) != len(self.data):
            raise DimensionMismatch("names and data differ in length")
        if len(set(self.names)) != len(self.names):
            raise DimensionMismatch(f"duplicate variable names in {self.names}")
        arrays = []
        for name, x in zip(self.names, self.data):
            x = np.asarray(x, dtype=float)
            if x.ndim == 1:
                x = x[None, :]
            if x.ndim != 2 or x.shape[0] < 1 or x.shape[1] < 1:
                raise DimensionMismatch(f"variable {name!r}: expected (n, T) array, got {x.shape}")
            if not np.all(np.isfinite(x)):
                raise NonFiniteValue(f"variable {name!r} contains non-finite values")
            x = np.ascontiguousarray(x)
            x.setflags(write=False)
            arrays.append(x)
        counts = {x.shape[0] for x in arrays}
        if len(counts) != 1:
            raise DimensionMismatch(f"realisation counts differ across variables: {sorted(counts)}")
        object.__setattr__(self, "names", tuple(str(n) for n in self.names))
        object.__setattr__(self, "data", tuple(arrays))

    @classmethod
    def from_dict(cls, variables: dict[str, np.ndarray]) -> TimeSeriesPanel:
        return cls(tuple(variables), tuple(variables.values()))

    @property
    def d(self) -> int:
        return len(self.names)

    @property
    def n(self) -> int:
        return self.data[0].shape[0]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(x.shape[1] for x in self.data)

    @property
    def is_single(self) -> bool:
        return self.n == 1

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[self.names.index(name)]

    def select(self, names: Sequence[str]) -> TimeSeriesPanel:
        missing = [v for v in names if v not in self.names]
        if missing:
            raise KeyError(f"unknown variables: {missing}")
        return TimeSeriesPanel(tuple(names), tuple(self[v] for v in names))

    def require_single(self) -> int:
        """Check single-realisation shape and return the common length T."""
        if self.n != 1:
            raise ModeMismatch(f"single-realisation mode needs n=1, got n={self.n}")
        if len(set(self.lengths)) != 1:
            raise ModeMismatch(f"single-realisation mode needs equal lengths, got {self.lengths}")
        return self.lengths[0]

    def require_multi(self) -> int:
        if self.n < 2:
            raise ModeMismatch("multi-realisation mode needs n >= 2")
        return self.n

    def require_variables(self, minimum: int = 2) -> None:
        if self.d < minimum:
            raise TooFewVariables(f"need at least {minimum} variables, got {self.d}")

    def equals(self, other: TimeSeriesPanel) -> bool:
        """Exact (bitwise) equality of names and values."""
        return self.names == other.names and all(
            a.shape == b.shape and np.array_equal(a, b) for a, b in zip(self.data, other.data)
        )
