"""Binary classification metrics, ROC curves and threshold sweeps.

Predictions are thresholded strictly (predicted positive iff score >
threshold).  Accuracy, precision, recall and the F-measure family

    F_beta = (1 + beta^2) * P * R / (beta^2 * P + R)

are computed from confusion counts; any 0/0 quotient is reported as 0
with a ``degenerate`` flag rather than an error.  ROC curves are traced
over an inclusive threshold grid (default step 0.01) and integrated by
the trapezoidal rule after anchoring at (0, 0) and (1, 1).  A pairwise
rank comparison (the probability that a positive outscores a negative,
ties at half weight) is provided as an independent AUC estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .io import atomic_write_text


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricReport:
    accuracy: float
    precision: float
    recall: float
    f_beta: float
    beta: float
    degenerate: bool


@dataclass(frozen=True)
class RocCurve:
    """(fpr, tpr) points aligned with a descending threshold grid."""

    thresholds: np.ndarray
    points: np.ndarray  # shape (n, 2): columns fpr, tpr


def _as_arrays(labels, scores) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(labels)
    s = np.asarray(scores, dtype=np.float64)
    if y.shape != s.shape or y.ndim != 1:
        raise ValueError("labels and scores must be 1-d and aligned")
    if y.size == 0:
        raise ValueError("no examples to evaluate")
    if not np.isin(y, (0, 1)).all():
        raise ValueError("labels must be binary (0/1)")
    return y.astype(np.int64), s


def confusion(labels, scores, threshold: float) -> ConfusionCounts:
    """Confusion counts under strict thresholding (score > threshold)."""
    y, s = _as_arrays(labels, scores)
    pred = s > threshold
    pos = y == 1
    return ConfusionCounts(
        tp=int(np.count_nonzero(pred & pos)),
        fp=int(np.count_nonzero(pred & ~pos)),
        tn=int(np.count_nonzero(~pred & ~pos)),
        fn=int(np.count_nonzero(~pred & pos)),
    )


def _safe_div(num: float, den: float) -> tuple[float, bool]:
    if den == 0:
        return 0.0, True
    return num / den, False


def metrics(counts: ConfusionCounts, beta: float = 1.0) -> MetricReport:
    """Accuracy, precision, recall and F_beta from confusion counts."""
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if counts.total == 0:
        raise ValueError("empty confusion table")
    accuracy = (counts.tp + counts.tn) / counts.total
    precision, p_deg = _safe_div(counts.tp, counts.tp + counts.fp)
    recall, r_deg = _safe_div(counts.tp, counts.tp + counts.fn)
    b2 = beta * beta
    f_beta, f_deg = _safe_div(
        (1.0 + b2) * precision * recall, b2 * precision + recall
    )
    return MetricReport(
        accuracy=accuracy,
        precision=precision,
        recall=recall,
        f_beta=f_beta,
        beta=beta,
        degenerate=p_deg or r_deg or f_deg,
    )


def threshold_grid(step: float) -> np.ndarray:
    """Inclusive grid 0, step, ..., 1 (the end is forced onto the grid)."""
    if not 0.0 < step <= 1.0:
        raise ValueError(f"step must lie in (0, 1], got {step}")
    count = int(round(1.0 / step))
    grid = np.minimum(np.arange(count + 1) * step, 1.0)
    if grid[-1] < 1.0:
        grid = np.append(grid, 1.0)
    return grid


def roc_auc(labels, scores, step: float = 0.01) -> tuple[RocCurve, float]:
    """ROC curve over a threshold grid plus its trapezoidal area.

    Requires both classes to be present.  The returned curve lists
    thresholds in descending order; the area is computed on the curve
    points sorted by false-positive rate with (0, 0) and (1, 1) anchors
    appended.
    """
    y, s = _as_arrays(labels, scores)
    n_pos = int(np.count_nonzero(y == 1))
    n_neg = y.size - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs at least one example of each class")
    thresholds = threshold_grid(step)[::-1]
    points = np.empty((thresholds.size, 2))
    for i, th in enumerate(thresholds):
        pred = s > th
        tp = int(np.count_nonzero(pred & (y == 1)))
        fp = int(np.count_nonzero(pred & (y == 0)))
        points[i] = (fp / n_neg, tp / n_pos)
    curve = RocCurve(thresholds=thresholds, points=points)
    return curve, _trapezoid_area(points)


def _trapezoid_area(points: np.ndarray) -> float:
    xs = np.concatenate(([0.0], points[:, 0], [1.0]))
    ys = np.concatenate(([0.0], points[:, 1], [1.0]))
    order = np.lexsort((ys, xs))
    xs, ys = xs[order], ys[order]
    return float(np.sum((xs[1:] - xs[:-1]) * (ys[1:] + ys[:-1]) * 0.5))


def pairwise_rank_auc(labels, scores) -> float:
    """P(score of a positive > score of a negative), ties count half.

    Exact over all positive/negative pairs; depends only on the ranking
    of the scores, so any strictly monotone transform leaves it fixed.
    """
    y, s = _as_arrays(labels, scores)
    pos = np.sort(s[y == 1])
    neg = np.sort(s[y == 0])
    if pos.size == 0 or neg.size == 0:
        raise ValueError("rank AUC needs at least one example of each class")
    # Count via sorted-side binary search instead of the n_pos*n_neg grid.
    wins = np.searchsorted(neg, pos, side="left").sum()
    ties = (np.searchsorted(neg, pos, side="right")
            - np.searchsorted(neg, pos, side="left")).sum()
    return float((wins + 0.5 * ties) / (pos.size * neg.size))


@dataclass(frozen=True)
class SweepRow:
    threshold: float
    accuracy: float
    precision: float
    recall: float
    f1: float
    f2: float


def threshold_sweep(labels, scores, step: float = 0.01) -> list[SweepRow]:
    """Metrics at every grid threshold, ascending, both ends included."""
    y, s = _as_arrays(labels, scores)
    rows = []
    for th in threshold_grid(step):
        counts = confusion(y, s, float(th))
        m1 = metrics(counts, beta=1.0)
        m2 = metrics(counts, beta=2.0)
        rows.append(
            SweepRow(
                threshold=float(th),
                accuracy=m1.accuracy,
                precision=m1.precision,
                recall=m1.recall,
                f1=m1.f_beta,
                f2=m2.f_beta,
            )
        )
    return rows


def write_sweep_csv(path: str, rows: list[SweepRow]) -> None:
    """Write a sweep as CSV with six-decimal fixed-point values."""
    lines = ["threshold,accuracy,precision,recall,f1,f2"]
    for r in rows:
        lines.append(
            f"{r.threshold:.6f},{r.accuracy:.6f},{r.precision:.6f},"
            f"{r.recall:.6f},{r.f1:.6f},{r.f2:.6f}"
        )
    atomic_write_text(path, "\n".join(lines) + "\n")
