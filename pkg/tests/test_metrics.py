"""Confusion counts, F-scores, ROC/AUC, threshold sweeps."""

import numpy as np
import pytest

from helpers import brute_rank_auc

from toxkg.metrics import (
    ConfusionCounts,
    confusion,
    metrics,
    pairwise_rank_auc,
    roc_auc,
    threshold_grid,
    threshold_sweep,
    write_sweep_csv,
)


def _counts(tp, fp, fn, tn):
    return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


# -- confusion -----------------------------------------------------------------


def test_confusion_counts_and_strict_threshold():
    labels = np.array([1, 1, 0, 0, 1])
    scores = np.array([0.9, 0.5, 0.6, 0.1, 0.2])
    table = confusion(labels, scores, threshold=0.5)
    # A score equal to the threshold is NOT predicted positive.
    assert (table.tp, table.fp, table.fn, table.tn) == (1, 1, 2, 1)
    table = confusion(labels, scores, threshold=0.45)
    assert (table.tp, table.fp, table.fn, table.tn) == (2, 1, 1, 1)


def test_confusion_validation():
    with pytest.raises(ValueError):
        confusion(np.array([1, 0]), np.array([0.5]), 0.5)
    with pytest.raises(ValueError):
        confusion(np.array([]), np.array([]), 0.5)
    with pytest.raises(ValueError):
        confusion(np.array([2, 0]), np.array([0.5, 0.5]), 0.5)


# -- derived metrics -------------------------------------------------------------


def test_pinned_f_scores_from_fixed_precision_recall():
    # 188/(188+212) = 0.47 precision and 188/(188+47) = 0.80 recall exactly.
    report1 = metrics(_counts(188, 212, 47, 53), beta=1.0)
    assert report1.precision == pytest.approx(0.47)
    assert report1.recall == pytest.approx(0.80)
    assert report1.f_beta == pytest.approx(0.59, abs=0.005)
    assert report1.f_beta == pytest.approx(2 * 0.47 * 0.80 / (0.47 + 0.80))

    report2 = metrics(_counts(188, 212, 47, 53), beta=2.0)
    assert report2.f_beta == pytest.approx(0.70, abs=0.005)
    assert report2.f_beta == pytest.approx(5 * 0.47 * 0.80 / (4 * 0.47 + 0.80))


def test_metrics_accuracy_and_scale_invariance():
    small = metrics(_counts(2, 1, 1, 4))
    big = metrics(_counts(20, 10, 10, 40))
    assert small.accuracy == pytest.approx(0.75)
    for field in ("accuracy", "precision", "recall", "f_beta"):
        assert getattr(small, field) == pytest.approx(getattr(big, field))


def test_large_beta_approaches_recall():
    report = metrics(_counts(30, 25, 10, 35), beta=100.0)
    assert abs(report.f_beta - report.recall) < 0.01


def test_degenerate_cases_report_zero_and_flag():
    no_predicted = metrics(_counts(0, 0, 5, 5))
    assert no_predicted.precision == 0.0
    assert no_predicted.degenerate
    no_positive = metrics(_counts(0, 5, 0, 5))
    assert no_positive.recall == 0.0
    assert no_positive.degenerate
    healthy = metrics(_counts(1, 1, 1, 1))
    assert not healthy.degenerate


def test_metrics_validation():
    with pytest.raises(ValueError):
        metrics(_counts(0, 0, 0, 0))
    with pytest.raises(ValueError):
        metrics(_counts(1, 1, 1, 1), beta=0.0)
    with pytest.raises(ValueError):
        metrics(_counts(1, 1, 1, 1), beta=-2.0)


# -- threshold grid ---------------------------------------------------------------


def test_threshold_grid():
    default = threshold_grid(0.01)
    assert len(default) == 101
    assert default[0] == 0.0
    assert default[-1] == 1.0
    assert np.allclose(np.diff(default), 0.01)
    assert list(threshold_grid(0.5)) == pytest.approx([0.0, 0.5, 1.0])
    with pytest.raises(ValueError):
        threshold_grid(0.0)
    with pytest.raises(ValueError):
        threshold_grid(1.5)


# -- ROC / AUC ---------------------------------------------------------------------


def test_roc_auc_perfect_and_random():
    labels = np.array([0, 0, 1, 1])
    _, perfect = roc_auc(labels, np.array([0.1, 0.2, 0.8, 0.9]))
    assert perfect == pytest.approx(1.0, abs=1e-6)
    _, inverted = roc_auc(labels, np.array([0.9, 0.8, 0.2, 0.1]))
    assert inverted == pytest.approx(0.0, abs=0.02)
    rng = np.random.default_rng(0)
    labels = rng.integers(2, size=2000)
    _, chance = roc_auc(labels, rng.random(2000))
    assert abs(chance - 0.5) < 0.05


def test_roc_auc_requires_both_classes():
    with pytest.raises(ValueError):
        roc_auc(np.ones(4), np.linspace(0, 1, 4))
    with pytest.raises(ValueError):
        roc_auc(np.zeros(4), np.linspace(0, 1, 4))


def test_roc_curve_is_monotone_through_the_corners():
    rng = np.random.default_rng(1)
    labels = rng.integers(2, size=300)
    scores = rng.random(300)
    curve, _ = roc_auc(labels, scores, step=0.01)
    assert np.all(np.diff(curve.thresholds) < 0)  # descending grid
    fpr, tpr = curve.points[:, 0], curve.points[:, 1]
    assert (fpr[0], tpr[0]) == (0.0, 0.0)    # threshold 1: nothing predicted
    assert (fpr[-1], tpr[-1]) == (1.0, 1.0)  # threshold 0: everything is
    assert np.all(np.diff(fpr) >= 0)
    assert np.all(np.diff(tpr) >= 0)


def test_trapezoid_auc_close_to_rank_auc():
    rng = np.random.default_rng(2)
    for trial in range(20):
        labels = rng.integers(2, size=500)
        # Mix informative and noisy scores so AUC varies across trials.
        scores = np.clip(
            0.3 * labels + 0.7 * rng.random(500) * (0.5 + trial / 40.0),
            0.0, 1.0)
        _, grid_auc = roc_auc(labels, scores, step=0.01)
        exact = brute_rank_auc(labels, scores)
        assert abs(grid_auc - exact) < 0.01


def test_pairwise_rank_auc_matches_brute_force_and_rank_invariance():
    rng = np.random.default_rng(3)
    labels = rng.integers(2, size=400)
    scores = rng.random(400)
    scores[:100] = np.round(scores[:100], 1)  # force ties
    auc = pairwise_rank_auc(labels, scores)
    assert auc == pytest.approx(brute_rank_auc(labels, scores), abs=1e-12)
    # Invariant under any strictly increasing transform of the scores.
    assert pairwise_rank_auc(labels, scores**3) == pytest.approx(auc)


# -- sweeps ------------------------------------------------------------------------


def _sweep_inputs():
    rng = np.random.default_rng(4)
    labels = rng.integers(2, size=200)
    scores = np.clip(0.4 * labels + 0.6 * rng.random(200), 0.0, 1.0)
    return labels, scores


def test_threshold_sweep_shape_and_monotone_recall():
    labels, scores = _sweep_inputs()
    rows = threshold_sweep(labels, scores, step=0.01)
    assert len(rows) == 101
    thresholds = [r.threshold for r in rows]
    assert thresholds == pytest.approx(list(np.linspace(0, 1, 101)))
    recalls = [r.recall for r in rows]
    assert all(a >= b for a, b in zip(recalls, recalls[1:]))
    assert rows[0].recall == 1.0  # no score lies at or below zero here


def test_threshold_sweep_agrees_with_direct_metrics():
    labels, scores = _sweep_inputs()
    rows = threshold_sweep(labels, scores, step=0.01)
    at_half = rows[50]
    table = confusion(labels, scores, threshold=0.5)
    f1 = metrics(table, beta=1.0)
    f2 = metrics(table, beta=2.0)
    assert at_half.threshold == pytest.approx(0.5)
    assert at_half.accuracy == pytest.approx(f1.accuracy)
    assert at_half.precision == pytest.approx(f1.precision)
    assert at_half.recall == pytest.approx(f1.recall)
    assert at_half.f1 == pytest.approx(f1.f_beta)
    assert at_half.f2 == pytest.approx(f2.f_beta)


def test_write_sweep_csv_golden(tmp_path):
    labels = np.array([1, 0])
    scores = np.array([1.0, 0.0])
    rows = threshold_sweep(labels, scores, step=0.5)
    out = tmp_path / "sweep.csv"
    write_sweep_csv(str(out), rows)
    text = out.read_text().splitlines()
    assert text[0] == "threshold,accuracy,precision,recall,f1,f2"
    assert text[1] == "0.000000,1.000000,1.000000,1.000000,1.000000,1.000000"
    assert text[2] == "0.500000,1.000000,1.000000,1.000000,1.000000,1.000000"
    # At the top threshold nothing is predicted positive.
    assert text[3] == "1.000000,0.500000,0.000000,0.000000,0.000000,0.000000"
    assert len(text) == 4
