"""
The same pipeline from the command line
=======================================

Everything the library does is also reachable through the `toxkg`
console command: generate data, build the graph, train, evaluate,
predict for new pairs and sweep thresholds.  This script drives the CLI
in-process and echoes each invocation, so it doubles as a cheat sheet.
"""

from pathlib import Path

from toxkg.cli import main

out = Path(__file__).resolve().parent / "output" / "06"
out.mkdir(parents=True, exist_ok=True)
corpus = str(out / "corpus")
checkpoint = str(out / "model.bin")


def run(*argv: str) -> None:
    print(f"\n$ toxkg {' '.join(argv)}")
    code = main(list(argv))
    assert code == 0, f"exit code {code}"


# 1. Generate a corpus (smaller than the default, for speed).
run("synth", "--out-dir", corpus, "--seed", "1",
    "--n-chemical-classes", "4", "--chemicals-per-class", "6",
    "--n-species-clades", "4", "--species-per-clade", "6")

# 2. Inspect the graph that would be built from it.
run("build-kg", "--data-dir", corpus)

# 3. Train a jointly embedded classifier and keep the checkpoint.
#    Flags override config-file values, which override defaults.
run("train", "--model", "m2star-hole", "--data-dir", corpus,
    "--out", checkpoint, "--seed", "1",
    "--embedding-dim", "32", "--hidden-sizes", "32", "--max-epochs", "40")

# 4. Evaluate the baseline and the checkpoint on the same held-out side.
run("evaluate", "--model", "m1", "--data-dir", corpus, "--t-max", "30",
    "--seed", "1")
run("evaluate", "--checkpoint", checkpoint, "--data-dir", corpus)

# 5. Score new chemical-species pairs from a TSV request file.
pairs = out / "pairs.tsv"
pairs.write_text("chem000\tsp000\nchem000\tsp023\nchem013\tsp001\n")
run("predict", "--checkpoint", checkpoint, "--data-dir", corpus,
    "--pairs", str(pairs), "--out", str(out / "scores.csv"))
print((out / "scores.csv").read_text(), end="")

# 6. Sweep decision thresholds and report the best F2 operating point.
run("sweep", "--checkpoint", checkpoint, "--data-dir", corpus,
    "--step", "0.05", "--out", str(out / "sweep.csv"))
