"""Shared base for label-indexed square similarity matrices."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


class LabeledMatrix:
    """Square float matrix whose rows/columns are named by string labels.

    Instances are immutable after construction; ``nearest`` never mutates
    the matrix, so repeated queries with growing visited sets are safe.
    """

    def __init__(self, index: Sequence[str], values: np.ndarray) -> None:
        values = np.asarray(values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError("matrix must be square")
        if values.shape[0] != len(index):
            raise ValueError("index length does not match matrix size")
        self.index: list[str] = list(index)
        self.values = values
        self._positions = {label: i for i, label in enumerate(self.index)}

    def __len__(self) -> int:
        return len(self.index)

    def position(self, label: str) -> int:
        try:
            return self._positions[label]
        except KeyError:
            raise KeyError(f"unknown label: {label!r}") from None

    def nearest(self, i: int, visited: Iterable[int] = ()) -> int | None:
        """Index of the most similar unvisited neighbor of row ``i``.

        The row element itself is never a candidate.  Ties resolve to the
        lowest index.  Returns None once every candidate has been visited.
        """
        n = len(self.index)
        if not 0 <= i < n:
            raise IndexError(f"row {i} out of range for size {n}")
        blocked = set(visited)
        blocked.add(i)
        best = None
        best_value = -np.inf
        row = self.values[i]
        for k in range(n):
            if k in blocked:
                continue
            v = row[k]
            if v > best_value:
                best = k
                best_value = v
        return best
