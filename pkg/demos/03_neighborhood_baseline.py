"""
The training-free neighborhood baseline
=======================================

Before any model is trained, a strong reference point: answer "does this
chemical affect this species?" by walking outward from the query through
the most similar chemicals (by fingerprint) and the most similar species
(by taxonomy path), predicting 1 as soon as a known positive is found.
A budget t_max bounds the walk; raising it trades precision for recall.
"""

from pathlib import Path

from toxkg.baseline import M1Config, predict_m1_batch
from toxkg.metrics import confusion, metrics
from toxkg.pipeline import DatasetPaths, standard_experiment
from toxkg.synth import SyntheticSpec, generate

out = Path(__file__).resolve().parent / "output" / "03"

# 1. A mid-sized synthetic corpus and the standard split: half the
#    records train, the other half is kept pair-disjoint for testing.
generate(SyntheticSpec(seed=11), str(out / "corpus"))
exp = standard_experiment(DatasetPaths.in_directory(str(out / "corpus")),
                          seed=11, similarity_threshold=0.5)
print("train pairs:", len(exp.split.train), " test pairs:",
      len(exp.split.test))

# 2. The baseline needs three aligned matrices: known positive effects,
#    chemical-chemical similarity and species-species similarity.
chem_pos, spec_pos, labels = exp.positions_for_pairs(exp.split.test)
queries = list(zip(chem_pos.tolist(), spec_pos.tolist()))

# 3. Sweep the walk budget.  Recall can only grow with the budget
#    because a larger budget visits a superset of the cells.
print(f"\n{'t_max':>6} {'accuracy':>9} {'precision':>10} {'recall':>7}")
for t_max in (1, 2, 5, 30):
    predictions = predict_m1_batch(exp.effect_matrix, exp.adjacency,
                                   exp.similarity, queries,
                                   M1Config(t_max=t_max))
    report = metrics(confusion(labels, predictions.astype(float), 0.5))
    print(f"{t_max:>6} {report.accuracy:>9.4f} {report.precision:>10.4f} "
          f"{report.recall:>7.4f}")

print("\nAt a generous budget the walk reaches every cell that shares a "
      "block\nwith the query, so on block-structured data its recall "
      "saturates while\nprecision pays the bill.")
