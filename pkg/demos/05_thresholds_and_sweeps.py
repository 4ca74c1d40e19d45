"""
Picking an operating point: ROC curves and threshold sweeps
===========================================================

A trained model emits scores in [0, 1]; turning them into decisions
means choosing a threshold.  The metrics module provides the full
machinery: confusion counts at a threshold, precision/recall/F-scores,
a trapezoid ROC/AUC, and a sweep over an entire threshold grid written
as CSV.
"""

from pathlib import Path

from toxkg.classifier import TrainConfig, train_model
from toxkg.embeddings import ScoreKind
from toxkg.metrics import roc_auc, threshold_sweep, write_sweep_csv
from toxkg.pipeline import DatasetPaths, standard_experiment
from toxkg.synth import SyntheticSpec, generate

out = Path(__file__).resolve().parent / "output" / "05"

# 1. Corpus, split, one jointly trained model.
generate(SyntheticSpec(seed=5), str(out / "corpus"))
exp = standard_experiment(DatasetPaths.in_directory(str(out / "corpus")),
                          seed=5, similarity_threshold=0.5)
tr_chem, tr_spec, tr_y = exp.rows_for_pairs(exp.split.train)
te_chem, te_spec, te_y = exp.rows_for_pairs(exp.split.test)
model = train_model(exp.store, exp.index, tr_chem, tr_spec, tr_y,
                    ScoreKind.CORRELATION,
                    TrainConfig(embedding_dim=32, hidden_sizes=(32,),
                                max_epochs=60, seed=5))
scores = model.predict_rows(te_chem, te_spec)

# 2. Ranking quality, independent of any threshold.
curve, auc = roc_auc(te_y, scores)
print(f"auc: {auc:.4f}  ({len(curve.thresholds)} grid points)")

# 3. Sweep the decision threshold from 0 to 1.  Recall is monotone
#    non-increasing in the threshold; precision generally rises.
rows = threshold_sweep(te_y, scores, step=0.05)
print(f"\n{'threshold':>9} {'precision':>10} {'recall':>7} {'f1':>7} "
      f"{'f2':>7}")
for row in rows[::4]:
    print(f"{row.threshold:>9.2f} {row.precision:>10.4f} "
          f"{row.recall:>7.4f} {row.f1:>7.4f} {row.f2:>7.4f}")

# 4. If missed toxicity is costlier than a false alarm, optimize F2
#    (recall-weighted) instead of F1 and read off the best threshold.
best = max(rows, key=lambda r: (r.f2, -r.threshold))
print(f"\nbest F2 operating point: threshold {best.threshold:.2f} "
      f"(f2={best.f2:.4f}, recall={best.recall:.4f})")

# 5. The same table as a CSV artifact, ready for plotting elsewhere.
out.mkdir(parents=True, exist_ok=True)
write_sweep_csv(str(out / "sweep.csv"), rows)
print(f"wrote {out / 'sweep.csv'}")
