"""Test-side oracles: finite differences and brute-force references.

Everything here is written independently of the package internals so the
tests compare two derivations of the same quantity rather than the code
against itself.
"""

from __future__ import annotations

import numpy as np

FD_STEP = 1e-5


def central_diff(f, x: np.ndarray, h: float = FD_STEP) -> np.ndarray:
    """Central finite-difference gradient of scalar ``f`` at ``x``."""
    x = np.asarray(x, dtype=np.float64)
    grad = np.empty_like(x)
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        grad[i] = (f(xp) - f(xm)) / (2.0 * h)
    return grad


def max_rel_err(analytic: np.ndarray, numeric: np.ndarray,
                floor: float = 1e-6) -> float:
    """Worst relative disagreement; coordinates below ``floor`` in both
    are compared absolutely so exact zeros do not divide by zero."""
    a = np.asarray(analytic, dtype=np.float64).ravel()
    b = np.asarray(numeric, dtype=np.float64).ravel()
    denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    return float(np.max(np.abs(a - b) / denom))


def brute_circular_correlation(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """O(d^2) definition: out[k] = sum_i a[i] * b[(i + k) % d]."""
    d = len(a)
    out = np.zeros(d)
    for k in range(d):
        for i in range(d):
            out[k] += a[i] * b[(i + k) % d]
    return out


def brute_rank_auc(labels: np.ndarray, scores: np.ndarray) -> float:
    """Mann-Whitney statistic over every (positive, negative) pair,
    ties counted half."""
    labels = np.asarray(labels)
    scores = np.asarray(scores, dtype=np.float64)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    diff = pos[:, None] - neg[None, :]
    wins = np.count_nonzero(diff > 0)
    ties = np.count_nonzero(diff == 0)
    return (wins + 0.5 * ties) / (pos.size * neg.size)


def ranked_other_indexes(values: np.ndarray, anchor: int) -> list[int]:
    """All indexes except ``anchor`` sorted by similarity to it,
    descending, ties toward the lower index (pure-python sort)."""
    n = values.shape[0]
    others = [k for k in range(n) if k != anchor]
    return sorted(others, key=lambda k: (-values[anchor, k], k))


def oracle_visited_cells(A: np.ndarray, S: np.ndarray, compound: int,
                         species: int, t_max: int) -> set[tuple[int, int]]:
    """Cells inspected by the budgeted neighborhood walk.

    The walk checks the query cell, then for each of the ``t_max``
    compounds most similar to the query compound it restarts the species
    cursor at the query species: the neighbor's cell at the query
    species plus the cells at the ``t_max - 1`` species nearest the
    query species.
    """
    cells = {(compound, species)}
    compound_rank = ranked_other_indexes(S, compound)[:t_max]
    species_rank = ranked_other_indexes(A, species)[: max(t_max - 1, 0)]
    for c in compound_rank:
        cells.add((c, species))
        for s in species_rank:
            cells.add((c, s))
    return cells


def oracle_predict_m1(E: np.ndarray, A: np.ndarray, S: np.ndarray,
                      compound: int, species: int, t_max: int) -> int:
    """Brute-force reference: max of E over the visited-cell set."""
    cells = oracle_visited_cells(A, S, compound, species, t_max)
    return int(any(E[c, s] > 0 for c, s in cells))
