"""Knowledge-graph-backed prediction of chemical effects on species.

The package builds a knowledge graph from tabular inputs (triples,
taxonomy, molecular fingerprints, effect experiments, and equivalence
mappings) and predicts binary chemical–species effects three ways: a
training-free nearest-neighbor search over similarity matrices, a
feed-forward classifier over trainable embeddings, and the same
classifier with embeddings co-trained against the graph through
translation, bilinear, or circular-correlation scoring.
"""

from ._matrix import LabeledMatrix
from .baseline import M1Config, predict_m1, predict_m1_batch
from .classifier import (
    EffectModel,
    MlpParams,
    TrainConfig,
    TrainingDivergence,
    TrainLogEntry,
    adagrad_step,
    draw_dropout_masks,
    ensemble_predict,
    init_mlp,
    joint_loss,
    load_model,
    log_loss,
    member_seeds,
    mlp_forward,
    resolve_embedding_dim,
    resolve_loss_weights,
    save_model,
    train_ensemble,
    train_model,
)
from .config import (
    ExperimentSettings,
    build_settings,
    parse_hidden_sizes,
    read_config,
)
from .effects import (
    EFFECTS_COLUMNS,
    NEGATIVE_CODES,
    POSITIVE_CODES,
    EffectRecord,
    LabeledPair,
    Split,
    build_effect_matrix,
    cv_folds,
    label_outcome,
    label_records,
    load_effects_csv,
    sample_negative_triples,
    split_effects,
)
from .embeddings import (
    EmbeddingIndex,
    EmbeddingTable,
    ScoreKind,
    circ_correlation,
    embed_lookup,
    init_embeddings,
    load_embeddings,
    save_embeddings,
    score,
    score_batch,
    score_gradients,
    sigmoid_kind,
)
from .fingerprints import (
    DEFAULT_WIDTH,
    SIMILARITY_PREDICATE,
    Fingerprint,
    FingerprintSet,
    SimilarityMatrix,
    emit_similarity_triples,
    fingerprint_from_hex,
    fingerprint_to_hex,
    jaccard,
    similarity_order,
)
from .graph import GraphStore, IngestError, Triple, triples_by_labels
from .metrics import (
    ConfusionCounts,
    MetricReport,
    RocCurve,
    SweepRow,
    confusion,
    metrics,
    pairwise_rank_auc,
    roc_auc,
    threshold_grid,
    threshold_sweep,
    write_sweep_csv,
)
from .pipeline import (
    Dataset,
    DatasetPaths,
    Experiment,
    build_experiment,
    build_graph,
    experiment_for_split,
    labeled_with_sources,
    load_dataset,
    load_mappings_tsv,
    standard_experiment,
    usable_records,
)
from .synth import SyntheticDataset, SyntheticSpec, generate
from .taxonomy import AdjacencyMatrix, Taxonomy

__version__ = "0.1.0"

__all__ = [
    "AdjacencyMatrix",
    "ConfusionCounts",
    "Dataset",
    "DatasetPaths",
    "DEFAULT_WIDTH",
    "EFFECTS_COLUMNS",
    "EffectModel",
    "EffectRecord",
    "EmbeddingIndex",
    "EmbeddingTable",
    "Experiment",
    "ExperimentSettings",
    "Fingerprint",
    "FingerprintSet",
    "GraphStore",
    "IngestError",
    "LabeledMatrix",
    "LabeledPair",
    "M1Config",
    "MetricReport",
    "MlpParams",
    "NEGATIVE_CODES",
    "POSITIVE_CODES",
    "RocCurve",
    "SIMILARITY_PREDICATE",
    "ScoreKind",
    "SimilarityMatrix",
    "Split",
    "SweepRow",
    "SyntheticDataset",
    "SyntheticSpec",
    "Taxonomy",
    "TrainConfig",
    "TrainLogEntry",
    "TrainingDivergence",
    "Triple",
    "adagrad_step",
    "build_effect_matrix",
    "build_experiment",
    "build_graph",
    "build_settings",
    "circ_correlation",
    "confusion",
    "cv_folds",
    "draw_dropout_masks",
    "embed_lookup",
    "emit_similarity_triples",
    "ensemble_predict",
    "experiment_for_split",
    "fingerprint_from_hex",
    "fingerprint_to_hex",
    "generate",
    "init_embeddings",
    "init_mlp",
    "jaccard",
    "joint_loss",
    "label_outcome",
    "label_records",
    "labeled_with_sources",
    "load_dataset",
    "load_effects_csv",
    "load_embeddings",
    "load_mappings_tsv",
    "load_model",
    "log_loss",
    "member_seeds",
    "metrics",
    "mlp_forward",
    "pairwise_rank_auc",
    "parse_hidden_sizes",
    "predict_m1",
    "predict_m1_batch",
    "read_config",
    "resolve_embedding_dim",
    "resolve_loss_weights",
    "roc_auc",
    "sample_negative_triples",
    "save_embeddings",
    "save_model",
    "score",
    "score_batch",
    "score_gradients",
    "sigmoid_kind",
    "similarity_order",
    "split_effects",
    "standard_experiment",
    "threshold_grid",
    "threshold_sweep",
    "train_ensemble",
    "train_model",
    "triples_by_labels",
    "usable_records",
    "write_sweep_csv",
]
