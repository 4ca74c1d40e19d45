"""Nearest-neighbor effect baseline over aligned similarity matrices.

Given a binary matrix E of known positive effects (compounds x species),
a compound similarity matrix S and a species similarity matrix A that
share E's indexing, the baseline answers a (compound, species) query by
scanning observed effects in a similarity neighborhood anchored at the
query:

* the query cell itself;
* the ``t_max`` compounds most similar to the query compound (never the
  query compound itself), each paired with the query species and with
  the ``t_max - 1`` species nearest to the query species.

Exploration is budgeted, never mutates the matrices, breaks ties toward
the lowest index, and returns 1 as soon as any visited cell of E is
positive; exhausting the neighborhood yields 0.  Growing ``t_max`` only
ever enlarges the visited set, so predictions are monotone in the
budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._matrix import LabeledMatrix


@dataclass(frozen=True)
class M1Config:
    """Budget for the neighborhood walk (compounds and species per compound)."""

    t_max: int = 30

    def __post_init__(self) -> None:
        if self.t_max < 1:
            raise ValueError(f"t_max must be >= 1, got {self.t_max}")


def predict_m1(E: np.ndarray, A: LabeledMatrix, S: LabeledMatrix,
               compound: int, species: int,
               config: M1Config = M1Config()) -> int:
    """Predict a binary effect for one (compound, species) query.

    ``E`` must be indexed consistently with ``S`` (rows) and ``A``
    (columns).  Returns 1 iff a positive entry of E is found within the
    budgeted neighborhood described in the module docstring.
    """
    n_compounds, n_species = E.shape
    if len(S) != n_compounds:
        raise ValueError("compound similarity size does not match E rows")
    if len(A) != n_species:
        raise ValueError("species similarity size does not match E columns")
    if not 0 <= compound < n_compounds:
        raise IndexError(f"compound index {compound} out of range")
    if not 0 <= species < n_species:
        raise IndexError(f"species index {species} out of range")

    if E[compound, species] > 0:
        return 1

    visited_compounds: set[int] = set()
    for _ in range(config.t_max):
        neighbor = S.nearest(compound, visited_compounds)
        if neighbor is None:
            break  # every other compound already visited
        visited_compounds.add(neighbor)
        # The species cursor restarts at the query species for each
        # compound, so (neighbor, species) is always the first cell.
        if E[neighbor, species] > 0:
            return 1
        visited_species: set[int] = set()
        for _ in range(config.t_max - 1):
            near = A.nearest(species, visited_species)
            if near is None:
                break
            visited_species.add(near)
            if E[neighbor, near] > 0:
                return 1
    return 0


def predict_m1_batch(E: np.ndarray, A: LabeledMatrix, S: LabeledMatrix,
                     queries: list[tuple[int, int]],
                     config: M1Config = M1Config()) -> np.ndarray:
    """Vector of predictions for many queries (shared neighbor ranking).

    Equivalent to calling :func:`predict_m1` per query; neighbor
    rankings are precomputed per row so large evaluation sets stay
    cheap.
    """
    n_compounds, n_species = E.shape
    budget = min(config.t_max, n_compounds - 1)
    species_budget = min(config.t_max - 1, n_species - 1)

    compound_rank = _ranked_neighbors(S.values, budget)
    species_rank = _ranked_neighbors(A.values, species_budget)

    out = np.zeros(len(queries), dtype=np.int8)
    for q, (compound, species) in enumerate(queries):
        if not 0 <= compound < n_compounds:
            raise IndexError(f"compound index {compound} out of range")
        if not 0 <= species < n_species:
            raise IndexError(f"species index {species} out of range")
        if E[compound, species] > 0:
            out[q] = 1
            continue
        neighbors = compound_rank[compound]
        near = species_rank[species]
        if E[neighbors, species].any() or E[np.ix_(neighbors, near)].any():
            out[q] = 1
    return out


def _ranked_neighbors(values: np.ndarray, budget: int) -> list[np.ndarray]:
    """Per row: the ``budget`` best other indexes, ties toward low index.

    ``np.argsort`` with a stable kind on the negated row yields exactly
    the tie-break used by ``LabeledMatrix.nearest``.
    """
    n = values.shape[0]
    ranks: list[np.ndarray] = []
    for i in range(n):
        row = values[i].copy()
        row[i] = -np.inf  # the row element itself is never a candidate
        order = np.argsort(-row, kind="stable")
        ranks.append(order[: max(budget, 0)])
    return ranks
