"""Command-line front end.

Subcommands cover the full workflow: ``build-kg`` (graph assembly
summary), ``synth`` (benchmark corpus generation), ``train`` (fit a
classifier and write a checkpoint), ``evaluate`` (metrics report for a
checkpoint, a freshly trained model, an ensemble, a cross-validation, or
the training-free neighborhood baseline), ``predict`` (score a list of
pairs) and ``sweep`` (decision-threshold sweep CSV).

Exit codes are a stable contract: 0 on success, 2 for usage or input
errors, 3 for numerical failures such as a diverging loss.  All outputs
are deterministic functions of the inputs, configuration and seed, and
files are written atomically.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .baseline import M1Config, predict_m1_batch
from .classifier import (
    EffectModel,
    TrainingDivergence,
    ensemble_predict,
    load_model,
    save_model,
    train_ensemble,
    train_model,
)
from .config import ExperimentSettings, build_settings, parse_hidden_sizes, read_config
from .effects import cv_folds
from .embeddings import ScoreKind
from .graph import GraphStore, IngestError
from .io import atomic_write_text
from .metrics import confusion, metrics, roc_auc, threshold_sweep, write_sweep_csv
from .pipeline import (
    DatasetPaths,
    build_graph,
    experiment_for_split,
    labeled_with_sources,
    load_dataset,
    usable_records,
)
from .synth import SyntheticSpec, generate

MODEL_KINDS: dict[str, ScoreKind | None] = {
    "m2": None,
    "m2star-transe": ScoreKind.TRANSLATION,
    "m2star-distmult": ScoreKind.BILINEAR,
    "m2star-hole": ScoreKind.CORRELATION,
}
TRAINABLE_MODELS = tuple(MODEL_KINDS)
ALL_MODELS = ("m1",) + TRAINABLE_MODELS


def _model_name(kind: ScoreKind | None) -> str:
    for name, k in MODEL_KINDS.items():
        if k is kind:
            return name
    raise ValueError(f"no model name for kind {kind!r}")


# -- argument plumbing --------------------------------------------------------


def _add_dataset_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("dataset")
    group.add_argument("--data-dir", help="directory holding taxonomy.tsv, "
                       "fingerprints.tsv, effects.csv and optionally "
                       "triples.tsv / mappings.tsv")
    group.add_argument("--taxonomy", help="taxonomy TSV (child<TAB>parent)")
    group.add_argument("--fingerprints",
                       help="fingerprint TSV (compound<TAB>hex)")
    group.add_argument("--effects", help="effects CSV")
    group.add_argument("--triples", help="background triples TSV")
    group.add_argument("--mappings",
                       help="equivalence mappings TSV (id<TAB>id)")


def _dataset_paths(args: argparse.Namespace) -> DatasetPaths:
    if args.data_dir:
        base = DatasetPaths.in_directory(args.data_dir)
    else:
        if not (args.taxonomy and args.fingerprints and args.effects):
            raise ValueError(
                "provide --data-dir or all of --taxonomy, --fingerprints "
                "and --effects")
        base = DatasetPaths(taxonomy=args.taxonomy,
                            fingerprints=args.fingerprints,
                            effects=args.effects)
    return DatasetPaths(
        taxonomy=args.taxonomy or base.taxonomy,
        fingerprints=args.fingerprints or base.fingerprints,
        effects=args.effects or base.effects,
        triples=args.triples or base.triples,
        mappings=args.mappings or base.mappings,
    )


def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("configuration")
    group.add_argument("--config",
                       help="flat 'key = value' configuration file")
    group.add_argument("--seed", type=int)
    group.add_argument("--embedding-dim", type=int)
    group.add_argument("--hidden-sizes", type=parse_hidden_sizes,
                       help="comma-separated layer widths, e.g. 128,64")
    group.add_argument("--dropout-rate", type=float)
    group.add_argument("--learning-rate", type=float)
    group.add_argument("--batch-size", type=int)
    group.add_argument("--patience", type=int)
    group.add_argument("--min-delta", type=float)
    group.add_argument("--negative-ratio", type=int)
    group.add_argument("--loss-weight-kg", type=float)
    group.add_argument("--loss-weight-effect", type=float)
    group.add_argument("--similarity-threshold", type=float)
    group.add_argument("--max-epochs", type=int)
    group.add_argument("--threshold", type=float,
                       help="decision threshold for the metrics report")


def _settings(args: argparse.Namespace) -> ExperimentSettings:
    file_values = read_config(args.config) if getattr(args, "config",
                                                      None) else None
    override_keys = (
        "seed", "embedding_dim", "hidden_sizes", "dropout_rate",
        "learning_rate", "batch_size", "patience", "min_delta",
        "negative_ratio", "loss_weight_kg", "loss_weight_effect",
        "similarity_threshold", "max_epochs", "threshold", "t_max",
    )
    overrides = {
        key: getattr(args, key)
        for key in override_keys
        if getattr(args, key, None) is not None
    }
    return build_settings(file_values, overrides)


# -- reporting helpers --------------------------------------------------------


def _evaluate_scores(labels: np.ndarray, scores: np.ndarray,
                     settings: ExperimentSettings,
                     with_auc: bool) -> dict[str, float | None]:
    counts = confusion(labels, scores, settings.threshold)
    report = metrics(counts)
    f2 = metrics(counts, beta=2.0)
    auc = None
    if with_auc:
        _, auc = roc_auc(labels, scores, step=settings.roc_step)
    return {
        "accuracy": report.accuracy,
        "precision": report.precision,
        "recall": report.recall,
        "f1": report.f_beta,
        "f2": f2.f_beta,
        "auc": auc,
        "_degenerate": float(report.degenerate or f2.degenerate),
    }


_REPORT_METRICS = ("accuracy", "precision", "recall", "f1", "f2", "auc")


def _format_report(header_lines: list[str],
                   rows: list[dict[str, float | None]]) -> str:
    """Metrics table; several rows are summarized as mean ± deviation."""
    lines = list(header_lines)
    degenerate = any(row.get("_degenerate") for row in rows)
    for name in _REPORT_METRICS:
        values = [row[name] for row in rows]
        if any(v is None for v in values):
            lines.append(f"{name}: -")
        elif len(values) == 1:
            lines.append(f"{name}: {values[0]:.4f}")
        else:
            mean = float(np.mean(values))
            std = float(np.std(values))
            lines.append(f"{name}: {mean:.4f} ± {std:.4f}")
    if degenerate:
        lines.append("note: a ratio with an empty denominator was "
                     "reported as 0")
    return "\n".join(lines) + "\n"


def _emit_report(text: str, out_path: str | None) -> None:
    sys.stdout.write(text)
    if out_path:
        atomic_write_text(out_path, text)


def _write_training_log(path: str, model: EffectModel) -> None:
    lines = ["epoch,joint_loss,effect_loss,kg_loss"]
    for entry in model.log:
        lines.append(f"{entry.epoch},{entry.joint_loss:.6f},"
                     f"{entry.effect_loss:.6f},{entry.kg_loss:.6f}")
    atomic_write_text(path, "\n".join(lines) + "\n")


def write_triples_tsv(store: GraphStore, path: str) -> None:
    """Dump every stored triple; literal fields are double-quoted."""
    def render(eid: int) -> str:
        label = store.entity_label(eid)
        return f'"{label}"' if store.is_literal(eid) else label

    lines = [
        f"{render(t.subject)}\t{store.predicate_label(t.predicate)}"
        f"\t{render(t.object)}"
        for t in store
    ]
    atomic_write_text(path, "\n".join(lines) + ("\n" if lines else ""))


# -- commands -----------------------------------------------------------------


def cmd_build_kg(args: argparse.Namespace) -> int:
    settings = _settings(args)
    dataset = load_dataset(_dataset_paths(args))
    store = build_graph(dataset, dataset.records,
                        settings.train.similarity_threshold)
    print(f"entities: {store.entity_count}")
    print(f"triples: {len(store)}")
    print(f"predicates: {store.predicate_count}")
    for pid in range(store.predicate_count):
        count = store.predicate_counts.get(pid, 0)
        print(f"  {store.predicate_label(pid)}: {count}")
    if args.out:
        write_triples_tsv(store, args.out)
        print(f"wrote {args.out}")
    return 0


_SYNTH_FIELDS = (
    "n_chemical_classes", "chemicals_per_class", "n_species_clades",
    "species_per_clade", "fingerprint_width", "bit_flip_rate", "label_noise",
    "positive_rate", "toxicity_block_probability", "observation_rate",
    "rare_fraction", "rare_weight", "properties_per_class",
    "habitats_per_clade", "seed",
)


def cmd_synth(args: argparse.Namespace) -> int:
    overrides = {
        name: value for name in _SYNTH_FIELDS
        if (value := getattr(args, name)) is not None
    }
    spec = SyntheticSpec(**overrides)
    result = generate(spec, args.out_dir)
    print(f"chemicals: {result.n_chemicals}")
    print(f"species: {result.n_species}")
    print(f"records: {result.n_records}")
    print(f"toxic_blocks: {result.n_toxic_blocks}")
    print(f"positive_rate: {result.realized_positive_rate:.4f}")
    print(f"wrote {result.directory}")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    settings = _settings(args)
    cfg = settings.train
    kind = MODEL_KINDS[args.model]
    exp = _standard_experiment(args, settings)
    for warning in exp.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    chem_rows, spec_rows, labels = exp.rows_for_pairs(exp.split.train)
    model = train_model(exp.store, exp.index, chem_rows, spec_rows, labels,
                        kind, cfg)
    save_model(args.out, model)
    log_path = args.log or args.out + ".log.csv"
    _write_training_log(log_path, model)
    final = model.log[-1]
    print(f"model: {args.model}")
    print(f"epochs: {final.epoch}")
    print(f"joint_loss: {final.joint_loss:.6f}")
    print(f"wrote {args.out}")
    return 0


def _standard_experiment(args: argparse.Namespace,
                         settings: ExperimentSettings):
    from .pipeline import standard_experiment

    return standard_experiment(_dataset_paths(args), settings.train.seed,
                               settings.train.similarity_threshold)


def _evaluate_checkpoint(args: argparse.Namespace,
                         settings: ExperimentSettings) -> int:
    model = load_model(args.checkpoint)
    cfg = model.config
    exp_settings = ExperimentSettings(
        train=cfg,
        t_max=settings.t_max,
        threshold=settings.threshold,
        beta=settings.beta,
        sweep_step=settings.sweep_step,
        roc_step=settings.roc_step,
    )
    exp = _standard_experiment_for_cfg(args, cfg)
    chem_rows, spec_rows, labels = exp.rows_for_pairs(exp.split.test)
    scores = model.predict_rows(chem_rows, spec_rows)
    row = _evaluate_scores(labels, scores, exp_settings, with_auc=True)
    text = _format_report(
        [f"model: {_model_name(model.kind)}",
         f"train_pairs: {len(exp.split.train)}",
         f"test_pairs: {len(exp.split.test)}"],
        [row],
    )
    _emit_report(text, args.out)
    return 0


def _standard_experiment_for_cfg(args: argparse.Namespace, cfg):
    from .pipeline import standard_experiment

    return standard_experiment(_dataset_paths(args), cfg.seed,
                               cfg.similarity_threshold)


def _evaluate_m1(args: argparse.Namespace,
                 settings: ExperimentSettings) -> int:
    m1 = M1Config(t_max=settings.t_max)
    header = ["model: m1", f"t_max: {settings.t_max}"]
    if args.cv:
        dataset = load_dataset(_dataset_paths(args))
        records, _ = usable_records(dataset)
        pairs, sources = labeled_with_sources(records)
        rows = []
        for fold in cv_folds(pairs, args.cv, settings.train.seed):
            fold_exp = experiment_for_split(
                dataset, fold, sources, settings.train.similarity_threshold)
            c_pos, s_pos, labels = fold_exp.positions_for_pairs(fold.test)
            predicted = predict_m1_batch(
                fold_exp.effect_matrix, fold_exp.adjacency,
                fold_exp.similarity, list(zip(c_pos, s_pos)), m1)
            rows.append(_evaluate_scores(labels, predicted.astype(float),
                                         settings, with_auc=False))
        text = _format_report(header + [f"folds: {args.cv}"], rows)
    else:
        exp = _standard_experiment(args, settings)
        c_pos, s_pos, labels = exp.positions_for_pairs(exp.split.test)
        predicted = predict_m1_batch(exp.effect_matrix, exp.adjacency,
                                     exp.similarity,
                                     list(zip(c_pos, s_pos)), m1)
        row = _evaluate_scores(labels, predicted.astype(float), settings,
                               with_auc=False)
        text = _format_report(
            header + [f"train_pairs: {len(exp.split.train)}",
                      f"test_pairs: {len(exp.split.test)}"],
            [row],
        )
    _emit_report(text, args.out)
    return 0


def _evaluate_trainable(args: argparse.Namespace,
                        settings: ExperimentSettings) -> int:
    cfg = settings.train
    kind = MODEL_KINDS[args.model]
    header = [f"model: {args.model}"]

    if args.cv:
        dataset = load_dataset(_dataset_paths(args))
        records, _ = usable_records(dataset)
        pairs, sources = labeled_with_sources(records)
        rows = []
        for fold in cv_folds(pairs, args.cv, cfg.seed):
            fold_exp = experiment_for_split(dataset, fold, sources,
                                            cfg.similarity_threshold)
            tc, ts, ty = fold_exp.rows_for_pairs(fold.train)
            model = train_model(fold_exp.store, fold_exp.index, tc, ts, ty,
                                kind, cfg)
            vc, vs, vy = fold_exp.rows_for_pairs(fold.test)
            scores = model.predict_rows(vc, vs)
            rows.append(_evaluate_scores(vy, scores, settings, with_auc=True))
        text = _format_report(header + [f"folds: {args.cv}"], rows)
        _emit_report(text, args.out)
        return 0

    exp = _standard_experiment(args, settings)
    for warning in exp.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    tc, ts, ty = exp.rows_for_pairs(exp.split.train)
    vc, vs, vy = exp.rows_for_pairs(exp.split.test)
    if args.ensemble:
        models = train_ensemble(exp.store, exp.index, tc, ts, ty, kind, cfg,
                                members=args.ensemble)
        scores = ensemble_predict(models, vc, vs)
        header.append(f"members: {args.ensemble}")
    else:
        model = train_model(exp.store, exp.index, tc, ts, ty, kind, cfg)
        scores = model.predict_rows(vc, vs)
    header += [f"train_pairs: {len(exp.split.train)}",
               f"test_pairs: {len(exp.split.test)}"]
    row = _evaluate_scores(vy, scores, settings, with_auc=True)
    text = _format_report(header, [row])
    _emit_report(text, args.out)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    settings = _settings(args)
    if bool(args.checkpoint) == bool(args.model):
        raise ValueError("provide exactly one of --model and --checkpoint")
    if args.checkpoint and (args.ensemble or args.cv):
        raise ValueError(
            "--ensemble and --cv retrain and need --model, not --checkpoint")
    if args.ensemble and args.cv:
        raise ValueError("choose one of --ensemble and --cv")
    if args.checkpoint:
        return _evaluate_checkpoint(args, settings)
    if args.model == "m1":
        if args.ensemble:
            raise ValueError("the neighborhood baseline has no ensemble mode")
        return _evaluate_m1(args, settings)
    return _evaluate_trainable(args, settings)


def cmd_predict(args: argparse.Namespace) -> int:
    model = load_model(args.checkpoint)
    exp = _standard_experiment_for_cfg(args, model.config)

    requested: list[tuple[str, str]] = []
    with open(args.pairs, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise IngestError(
                    f"{args.pairs}:{lineno}: expected 2 tab-separated "
                    f"fields, got {len(fields)}")
            requested.append((fields[0].strip(), fields[1].strip()))

    rows: list[tuple[str, str, float]] = []
    skipped = 0
    chem_rows = []
    spec_rows = []
    kept: list[tuple[str, str]] = []
    for chemical, species in requested:
        try:
            c_row = exp.index.row_of(exp.store.entity_id(chemical))
            s_row = exp.index.row_of(exp.store.entity_id(species))
        except KeyError as exc:
            print(f"warning: {exc.args[0]}; pair skipped", file=sys.stderr)
            skipped += 1
            continue
        chem_rows.append(c_row)
        spec_rows.append(s_row)
        kept.append((chemical, species))
    if kept:
        scores = model.predict_rows(np.array(chem_rows), np.array(spec_rows))
        rows = [(c, s, float(score))
                for (c, s), score in zip(kept, scores)]
        rows.sort(key=lambda r: (-r[2], r[0], r[1]))

    lines = ["chemical_id,species_id,score"]
    lines += [f"{c},{s},{score:.6f}" for c, s, score in rows]
    atomic_write_text(args.out, "\n".join(lines) + "\n")
    if skipped:
        print(f"skipped {skipped} of {len(requested)} pairs",
              file=sys.stderr)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    model = load_model(args.checkpoint)
    exp = _standard_experiment_for_cfg(args, model.config)
    chem_rows, spec_rows, labels = exp.rows_for_pairs(exp.split.test)
    scores = model.predict_rows(chem_rows, spec_rows)
    rows = threshold_sweep(labels, scores, step=args.step)
    write_sweep_csv(args.out, rows)
    best = max(rows, key=lambda r: (r.f2, -r.threshold))
    print(f"best_f2_threshold: {best.threshold:.2f} (f2={best.f2:.4f})")
    print(f"wrote {args.out} ({len(rows)} rows)")
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toxkg",
        description="Knowledge-graph-backed chemical effect prediction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_kg = sub.add_parser("build-kg",
                          help="assemble the knowledge graph and print "
                               "summary counts")
    _add_dataset_arguments(p_kg)
    _add_config_arguments(p_kg)
    p_kg.add_argument("--out", help="optional path for a TSV dump of the "
                                    "assembled triples")
    p_kg.set_defaults(func=cmd_build_kg)

    p_synth = sub.add_parser("synth",
                             help="generate a synthetic benchmark corpus")
    p_synth.add_argument("--out-dir", required=True)
    p_synth.add_argument("--seed", type=int)
    p_synth.add_argument("--n-chemical-classes", type=int)
    p_synth.add_argument("--chemicals-per-class", type=int)
    p_synth.add_argument("--n-species-clades", type=int)
    p_synth.add_argument("--species-per-clade", type=int)
    p_synth.add_argument("--fingerprint-width", type=int)
    p_synth.add_argument("--bit-flip-rate", type=float)
    p_synth.add_argument("--label-noise", type=float)
    p_synth.add_argument("--positive-rate", type=float)
    p_synth.add_argument("--toxicity-block-probability", type=float)
    p_synth.add_argument("--observation-rate", type=float)
    p_synth.add_argument("--rare-fraction", type=float)
    p_synth.add_argument("--rare-weight", type=float)
    p_synth.add_argument("--properties-per-class", type=int)
    p_synth.add_argument("--habitats-per-clade", type=int)
    p_synth.set_defaults(func=cmd_synth)

    p_train = sub.add_parser("train", help="train a classifier checkpoint")
    p_train.add_argument("--model", required=True, choices=TRAINABLE_MODELS)
    _add_dataset_arguments(p_train)
    _add_config_arguments(p_train)
    p_train.add_argument("--out", required=True, help="checkpoint path")
    p_train.add_argument("--log", help="training log CSV path "
                                       "(default: <out>.log.csv)")
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("evaluate", help="metrics report for a model")
    p_eval.add_argument("--model", choices=ALL_MODELS)
    p_eval.add_argument("--checkpoint", help="evaluate a saved checkpoint")
    p_eval.add_argument("--t-max", type=int, dest="t_max",
                        help="neighborhood budget for the baseline")
    p_eval.add_argument("--ensemble", type=int,
                        help="train N members and score their average")
    p_eval.add_argument("--cv", type=int,
                        help="cross-validate with N folds (mean ± deviation)")
    _add_dataset_arguments(p_eval)
    _add_config_arguments(p_eval)
    p_eval.add_argument("--out", help="also write the report to this path")
    p_eval.set_defaults(func=cmd_evaluate)

    p_pred = sub.add_parser("predict",
                            help="score chemical/species pairs from a TSV")
    p_pred.add_argument("--checkpoint", required=True)
    p_pred.add_argument("--pairs", required=True,
                        help="TSV of chemical<TAB>species")
    p_pred.add_argument("--out", required=True, help="output CSV path")
    _add_dataset_arguments(p_pred)
    p_pred.set_defaults(func=cmd_predict)

    p_sweep = sub.add_parser("sweep",
                             help="decision-threshold sweep to CSV")
    p_sweep.add_argument("--checkpoint", required=True)
    p_sweep.add_argument("--step", type=float, default=0.01)
    p_sweep.add_argument("--out", required=True)
    _add_dataset_arguments(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TrainingDivergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (IngestError, FileNotFoundError, KeyError, ValueError) as exc:
        # KeyError's str() is the quoted key; its args carry the message.
        message = exc.args[0] if isinstance(exc, KeyError) else str(exc)
        print(f"error: {message}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
