"""
Training the classifier, with and without the graph
===================================================

The classifier is a small MLP over learned entity vectors.  Trained
alone it only sees (chemical, species, label) triples; trained jointly
with a knowledge-graph scoring objective, the shared entity vectors also
have to explain taxonomy, fingerprint similarity and curated links.
This script trains both variants on the same corpus and compares them.
"""

from pathlib import Path

from toxkg.classifier import TrainConfig, train_model
from toxkg.embeddings import ScoreKind
from toxkg.metrics import confusion, metrics, roc_auc
from toxkg.pipeline import DatasetPaths, standard_experiment
from toxkg.synth import SyntheticSpec, generate

out = Path(__file__).resolve().parent / "output" / "04"

# 1. Corpus and split.
generate(SyntheticSpec(seed=3), str(out / "corpus"))
exp = standard_experiment(DatasetPaths.in_directory(str(out / "corpus")),
                          seed=3, similarity_threshold=0.5)
tr_chem, tr_spec, tr_y = exp.rows_for_pairs(exp.split.train)
te_chem, te_spec, te_y = exp.rows_for_pairs(exp.split.test)

# 2. A deliberately small configuration so the demo stays quick; the
#    defaults are larger.
cfg = TrainConfig(embedding_dim=32, hidden_sizes=(32,), max_epochs=60,
                  seed=3)

# 3. Train one graph-free model and one per scoring rule.  Passing
#    kind=None disables the graph objective entirely.
contenders = [
    ("graph-free", None),
    ("translation", ScoreKind.TRANSLATION),
    ("bilinear", ScoreKind.BILINEAR),
    ("correlation", ScoreKind.CORRELATION),
]
print(f"{'model':>12} {'epochs':>7} {'auc':>7} {'recall':>7} "
      f"{'precision':>10}")
for name, kind in contenders:
    model = train_model(exp.store, exp.index, tr_chem, tr_spec, tr_y,
                        kind, cfg)
    scores = model.predict_rows(te_chem, te_spec)
    _, auc = roc_auc(te_y, scores)
    report = metrics(confusion(te_y, scores, 0.5))
    print(f"{name:>12} {len(model.log):>7} {auc:>7.4f} "
          f"{report.recall:>7.4f} {report.precision:>10.4f}")

print("\nThe joint objective regularizes the entity space: chemicals in "
      "one\nclass and species in one clade are pulled together, which "
      "typically\nbuys recall on synthetic block-structured corpora.")
