"""Feed-forward effect classifier with jointly trained embeddings.

The classifier reads the concatenated embedding vectors of a chemical
and a species through fully connected ReLU layers (inverted dropout
after each hidden layer) into a sigmoid output.  Training minimizes a
weighted sum of two clamped log losses per optimizer step:

* the effect loss on a minibatch of labeled (chemical, species) pairs;
* optionally a graph loss on a minibatch of knowledge-graph triples,
  true triples against freshly corrupted negatives, scored by one of the
  embedding score functions.

Both streams update a single Adagrad state covering the MLP parameters
and the embedding tables, so graph structure and effect labels shape the
same vectors.  When the graph stream is disabled the trainer degrades
exactly to a plain classifier over trainable input embeddings: the
random streams for initialization, shuffling and dropout are drawn
independently, so the effect-loss sequence is bit-identical whether the
graph stream is absent or merely empty.

All computation is float64 numpy; a training run is fully determined by
its configuration and seed.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field, replace

import numpy as np

from .effects import sample_negative_triples
from .embeddings import (
    CHECKPOINT_MAGIC,
    EmbeddingIndex,
    EmbeddingTable,
    ScoreKind,
    _embedding_bytes,
    _embeddings_from_bytes,
    init_embeddings,
    score_backward_batch,
    score_batch_cached,
    sigmoid_kind,
)
from .graph import GraphStore
from .io import atomic_write_bytes, atomic_write_text

PROBABILITY_CLAMP = 1e-7
ADAGRAD_EPS = 1e-8
MLP_MAGIC = b"MLP1"


class TrainingDivergence(RuntimeError):
    """Raised when the training loss stops being finite."""


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters for one training run.

    ``embedding_dim`` and ``loss_weight_kg`` default to None, meaning
    "resolve by score kind": the plain classifier needs only a small
    embedding space (16), while graph-trained variants cover far more
    entities and use 128; see :func:`resolve_embedding_dim` and
    :func:`resolve_loss_weights`.
    """

    embedding_dim: int | None = None
    hidden_sizes: tuple[int, ...] = (128, 64)
    dropout_rate: float = 0.2
    learning_rate: float = 0.1
    batch_size: int = 128
    patience: int = 5
    min_delta: float = 1e-4
    negative_ratio: int = 4
    loss_weight_kg: float | None = None
    loss_weight_effect: float = 1.0
    similarity_threshold: float = 0.5
    ensemble_size: int = 10
    max_epochs: int = 200
    seed: int = 0

    def __post_init__(self) -> None:
        if self.embedding_dim is not None and self.embedding_dim < 1:
            raise ValueError("embedding_dim must be >= 1")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must lie in [0, 1)")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if self.min_delta < 0:
            raise ValueError("min_delta must be >= 0")
        if self.negative_ratio < 1:
            raise ValueError("negative_ratio must be >= 1")
        if not 0.0 <= self.similarity_threshold <= 1.0:
            raise ValueError("similarity_threshold must lie in [0, 1]")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")


def resolve_embedding_dim(kind: ScoreKind | None, cfg: TrainConfig) -> int:
    """Embedding width: explicit config wins, else 16 for the plain
    classifier and 128 for graph-trained variants."""
    if cfg.embedding_dim is not None:
        return cfg.embedding_dim
    return 16 if kind is None else 128


def resolve_loss_weights(kind: ScoreKind | None,
                         cfg: TrainConfig) -> tuple[float, float]:
    """(graph weight, effect weight) with kind-specific defaults.

    The sigmoid-scored kinds default to half weight on the graph loss;
    the translation kind trains with equal weights.  An explicit
    ``loss_weight_kg`` always wins, and a disabled graph stream weighs 0.
    """
    if kind is None:
        return 0.0, cfg.loss_weight_effect
    if cfg.loss_weight_kg is not None:
        return cfg.loss_weight_kg, cfg.loss_weight_effect
    if sigmoid_kind(kind):
        return 0.5, cfg.loss_weight_effect
    return 1.0, cfg.loss_weight_effect


# -- losses -------------------------------------------------------------------


def log_loss(labels: np.ndarray, predictions: np.ndarray) -> float:
    """Mean binary cross-entropy with predictions clamped to
    [1e-7, 1 - 1e-7]."""
    y = np.asarray(labels, dtype=np.float64)
    p = np.asarray(predictions, dtype=np.float64)
    if y.shape != p.shape or y.ndim != 1:
        raise ValueError("labels and predictions must be 1-d and aligned")
    if y.size == 0:
        raise ValueError("log loss over an empty batch")
    p = np.clip(p, PROBABILITY_CLAMP, 1.0 - PROBABILITY_CLAMP)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def joint_loss(kg_loss: float, effect_loss: float, weight_kg: float,
               weight_effect: float) -> float:
    return weight_kg * kg_loss + weight_effect * effect_loss


def _logloss_grad_logit(predictions: np.ndarray,
                        labels: np.ndarray) -> np.ndarray:
    """d(mean clamped log loss)/d(logit) through a sigmoid output.

    Exactly (p - y)/n while the prediction is inside the clamp window;
    the clamped loss is flat outside it, so the gradient is 0 there.
    """
    inside = (predictions > PROBABILITY_CLAMP) & (
        predictions < 1.0 - PROBABILITY_CLAMP)
    return np.where(inside, predictions - labels, 0.0) / labels.size


def _logloss_grad_score(scores: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """d(mean clamped log loss)/d(score) for direct-score models."""
    clamped = np.clip(scores, PROBABILITY_CLAMP, 1.0 - PROBABILITY_CLAMP)
    inside = (scores > PROBABILITY_CLAMP) & (scores < 1.0 - PROBABILITY_CLAMP)
    grad = (clamped - labels) / (clamped * (1.0 - clamped))
    return np.where(inside, grad, 0.0) / labels.size


# -- multilayer perceptron ----------------------------------------------------


@dataclass
class MlpParams:
    """Hidden layer weights/biases plus the scalar sigmoid head."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]
    out_weight: np.ndarray
    out_bias: np.ndarray

    @property
    def hidden_sizes(self) -> tuple[int, ...]:
        return tuple(w.shape[1] for w in self.weights)

    @property
    def input_dim(self) -> int:
        if self.weights:
            return self.weights[0].shape[0]
        return self.out_weight.shape[0]

    def copy(self) -> "MlpParams":
        return MlpParams(
            [w.copy() for w in self.weights],
            [b.copy() for b in self.biases],
            self.out_weight.copy(),
            self.out_bias.copy(),
        )


def init_mlp(input_dim: int, hidden_sizes: tuple[int, ...],
             rng: np.random.Generator | int) -> MlpParams:
    """Uniform Glorot initialization; biases start at zero."""
    if input_dim < 1:
        raise ValueError("input_dim must be >= 1")
    if any(h < 1 for h in hidden_sizes):
        raise ValueError("hidden layer sizes must be >= 1")
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    weights = []
    biases = []
    fan_in = input_dim
    for width in hidden_sizes:
        limit = math.sqrt(6.0 / (fan_in + width))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, width)))
        biases.append(np.zeros(width))
        fan_in = width
    limit = math.sqrt(6.0 / (fan_in + 1))
    out_weight = rng.uniform(-limit, limit, size=fan_in)
    out_bias = np.zeros(1)
    return MlpParams(weights, biases, out_weight, out_bias)


def draw_dropout_masks(params: MlpParams, batch: int, rate: float,
                       rng: np.random.Generator) -> list[np.ndarray] | None:
    """Inverted-dropout masks (0 or 1/(1-rate) entries).

    The first mask covers the input layer — embedding coordinates are
    dropped too, which keeps the classifier from keying on any single
    coordinate of a particular entity — and the rest cover the hidden
    activations.
    """
    if rate == 0.0:
        return None
    keep = 1.0 - rate
    shapes = [params.input_dim] + [w.shape[1] for w in params.weights]
    return [
        (rng.random((batch, width)) >= rate) / keep
        for width in shapes
    ]


def mlp_forward(params: MlpParams, inputs: np.ndarray,
                dropout_masks: list[np.ndarray] | None = None) -> np.ndarray:
    """Batch forward pass; pass masks only during training."""
    out, _ = _mlp_forward_cached(params, inputs, dropout_masks)
    return out


def _mlp_forward_cached(params: MlpParams, inputs: np.ndarray,
                        dropout_masks: list[np.ndarray] | None
                        ) -> tuple[np.ndarray, dict]:
    x = np.asarray(inputs, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != params.input_dim:
        raise ValueError(
            f"expected inputs of shape (batch, {params.input_dim})")
    input_mask = dropout_masks[0] if dropout_masks is not None else None
    layers = []
    h = x if input_mask is None else x * input_mask
    for li, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = h @ w + b
        a = np.maximum(z, 0.0)
        mask = dropout_masks[li + 1] if dropout_masks is not None else None
        if mask is not None:
            a = a * mask
        layers.append((h, z, mask))
        h = a
    logits = h @ params.out_weight + params.out_bias[0]
    out = 1.0 / (1.0 + np.exp(-logits))
    cache = {"layers": layers, "last": h, "logits": logits, "out": out,
             "input_mask": input_mask}
    return out, cache


def _mlp_backward(params: MlpParams, cache: dict, d_logits: np.ndarray
                  ) -> tuple[dict[str, np.ndarray], np.ndarray]:
    """Gradients for all parameters plus the input, given dL/dlogits."""
    grads: dict[str, np.ndarray] = {}
    h = cache["last"]
    grads["out_w"] = h.T @ d_logits
    grads["out_b"] = np.array([d_logits.sum()])
    d_h = np.outer(d_logits, params.out_weight)
    for li in range(len(params.weights) - 1, -1, -1):
        inp, z, mask = cache["layers"][li]
        if mask is not None:
            d_h = d_h * mask
        d_z = d_h * (z > 0.0)
        grads[f"w{li}"] = inp.T @ d_z
        grads[f"b{li}"] = d_z.sum(axis=0)
        d_h = d_z @ params.weights[li].T
    input_mask = cache["input_mask"]
    if input_mask is not None:
        d_h = d_h * input_mask
    return grads, d_h


def _mlp_param_dict(params: MlpParams) -> dict[str, np.ndarray]:
    named: dict[str, np.ndarray] = {"out_w": params.out_weight,
                                    "out_b": params.out_bias}
    for li, (w, b) in enumerate(zip(params.weights, params.biases)):
        named[f"w{li}"] = w
        named[f"b{li}"] = b
    return named


# -- adagrad ------------------------------------------------------------------


def adagrad_step(state: dict[str, np.ndarray], params: dict[str, np.ndarray],
                 grads: dict[str, np.ndarray], learning_rate: float) -> None:
    """One update: accumulate squared gradients, scale steps elementwise.

    state[name] += grad**2;  param -= lr * grad / sqrt(state[name] + eps)

    Parameters and accumulators are modified in place; parameters never
    referenced by ``grads`` are untouched.
    """
    for name, grad in grads.items():
        param = params[name]
        acc = state.get(name)
        if acc is None:
            acc = np.zeros_like(param)
            state[name] = acc
        acc += grad * grad
        param -= learning_rate * grad / np.sqrt(acc + ADAGRAD_EPS)


def _adagrad_rows(acc: np.ndarray, param: np.ndarray, rows: np.ndarray,
                  grad_rows: np.ndarray, learning_rate: float) -> None:
    """Row-sparse variant of :func:`adagrad_step` for embedding tables.

    Identical to the dense update because untouched rows have zero
    gradient: their accumulator and value would not change.
    """
    acc[rows] += grad_rows * grad_rows
    param[rows] -= learning_rate * grad_rows / np.sqrt(acc[rows] + ADAGRAD_EPS)


# -- trained model ------------------------------------------------------------


@dataclass
class TrainLogEntry:
    epoch: int
    joint_loss: float
    effect_loss: float
    kg_loss: float


@dataclass
class EffectModel:
    """A trained classifier: embedding table, MLP head and provenance."""

    kind: ScoreKind | None
    table: EmbeddingTable
    mlp: MlpParams
    config: TrainConfig
    log: list[TrainLogEntry] = field(default_factory=list)

    def predict_rows(self, chem_rows: np.ndarray,
                     spec_rows: np.ndarray) -> np.ndarray:
        """Effect scores for aligned row-index vectors (no dropout)."""
        chem_rows = np.asarray(chem_rows, dtype=np.int64)
        spec_rows = np.asarray(spec_rows, dtype=np.int64)
        inputs = np.concatenate(
            [self.table.entities[chem_rows], self.table.entities[spec_rows]],
            axis=1,
        )
        return mlp_forward(self.mlp, inputs)


def ensemble_predict(models: list[EffectModel], chem_rows: np.ndarray,
                     spec_rows: np.ndarray) -> np.ndarray:
    """Mean of the member scores; requires at least one member."""
    if not models:
        raise ValueError("ensemble has no members")
    return np.mean(
        [m.predict_rows(chem_rows, spec_rows) for m in models], axis=0
    )


def member_seeds(base_seed: int, members: int) -> list[int]:
    """Distinct deterministic seeds for ensemble members."""
    return [
        int(np.random.SeedSequence([base_seed, 7919 + m]).generate_state(1)[0])
        for m in range(members)
    ]


# -- training -----------------------------------------------------------------


def _batch_count(n: int, batch: int) -> int:
    return max(1, -(-n // batch))


def train_model(store: GraphStore, index: EmbeddingIndex,
                chem_rows: np.ndarray, spec_rows: np.ndarray,
                labels: np.ndarray, kind: ScoreKind | None,
                cfg: TrainConfig) -> EffectModel:
    """Train one classifier, optionally with the joint graph objective.

    ``chem_rows``/``spec_rows``/``labels`` are aligned vectors of
    embedding rows and binary labels for the training pairs.  With
    ``kind`` set, every optimizer step interleaves one effect minibatch
    with one minibatch of graph triples (true triples plus freshly
    sampled corruptions, redrawn every epoch); the shorter stream cycles
    until the longer one is exhausted.  Training stops when the mean
    joint loss of an epoch has not improved by ``min_delta`` for
    ``patience`` consecutive epochs, or at ``max_epochs``.
    """
    chem_rows = np.asarray(chem_rows, dtype=np.int64)
    spec_rows = np.asarray(spec_rows, dtype=np.int64)
    labels = np.asarray(labels, dtype=np.float64)
    if not (chem_rows.shape == spec_rows.shape == labels.shape):
        raise ValueError("pair arrays must be aligned")
    n_pairs = chem_rows.size
    if n_pairs == 0:
        raise ValueError("no training pairs")

    seq = np.random.SeedSequence(cfg.seed)
    rng_init, rng_shuffle, rng_dropout, rng_negative = (
        np.random.default_rng(child) for child in seq.spawn(4)
    )

    k = resolve_embedding_dim(kind, cfg)
    table = init_embeddings(index.n_entity_rows, max(1, index.n_relation_rows),
                            k, rng_init)
    mlp = init_mlp(2 * k, cfg.hidden_sizes, rng_init)

    weight_kg, weight_effect = resolve_loss_weights(kind, cfg)

    kg_pos = store.embedding_triples() if kind is not None else []
    use_graph = kind is not None and len(kg_pos) > 0
    if use_graph:
        pos_s = np.array([index.row_of(t.subject) for t in kg_pos], dtype=np.int64)
        pos_p = np.array([t.predicate for t in kg_pos], dtype=np.int64)
        pos_o = np.array([index.row_of(t.object) for t in kg_pos], dtype=np.int64)

    mlp_params = _mlp_param_dict(mlp)
    mlp_state: dict[str, np.ndarray] = {}
    acc_entities = np.zeros_like(table.entities)
    acc_relations = np.zeros_like(table.relations)

    batch = cfg.batch_size
    n_eff_batches = _batch_count(n_pairs, batch)

    log: list[TrainLogEntry] = []
    best = math.inf
    stall = 0

    for epoch in range(1, cfg.max_epochs + 1):
        eff_order = rng_shuffle.permutation(n_pairs)
        if use_graph:
            negatives = sample_negative_triples(
                store, cfg.negative_ratio, rng_negative)
            neg_s = np.array([index.row_of(t.subject) for t in negatives],
                             dtype=np.int64)
            neg_p = np.array([t.predicate for t in negatives], dtype=np.int64)
            neg_o = np.array([index.row_of(t.object) for t in negatives],
                             dtype=np.int64)
            kg_s = np.concatenate([pos_s, neg_s])
            kg_p = np.concatenate([pos_p, neg_p])
            kg_o = np.concatenate([pos_o, neg_o])
            kg_y = np.concatenate(
                [np.ones(pos_s.size), np.zeros(neg_s.size)])
            kg_order = rng_shuffle.permutation(kg_y.size)
            n_kg_batches = _batch_count(kg_y.size, batch)
        else:
            n_kg_batches = 0

        # Interleave the two streams over one epoch: the longer stream
        # fires every step, the shorter one on evenly spaced steps, and
        # neither repeats a batch within an epoch.
        steps = max(n_eff_batches, n_kg_batches)
        eff_at = np.full(steps, -1, dtype=np.int64)
        eff_at[np.arange(n_eff_batches) * steps // n_eff_batches] = (
            np.arange(n_eff_batches))
        kg_at = np.full(steps, -1, dtype=np.int64)
        if n_kg_batches:
            kg_at[np.arange(n_kg_batches) * steps // n_kg_batches] = (
                np.arange(n_kg_batches))
        sum_eff = sum_kg = 0.0

        for step in range(steps):
            d_entities = np.zeros_like(table.entities)
            d_relations = None
            mlp_grads = None
            touched_parts = []
            eff_loss = kg_loss = 0.0

            eff_batch = eff_at[step]
            if eff_batch >= 0:
                lo = eff_batch * batch
                eff_idx = eff_order[lo:lo + batch]
                bc = chem_rows[eff_idx]
                bs = spec_rows[eff_idx]
                by = labels[eff_idx]

                inputs = np.concatenate(
                    [table.entities[bc], table.entities[bs]], axis=1)
                masks = draw_dropout_masks(mlp, inputs.shape[0],
                                           cfg.dropout_rate, rng_dropout)
                out, cache = _mlp_forward_cached(mlp, inputs, masks)
                eff_loss = log_loss(by, out)
                d_logits = _logloss_grad_logit(out, by) * weight_effect
                mlp_grads, d_inputs = _mlp_backward(mlp, cache, d_logits)
                np.add.at(d_entities, bc, d_inputs[:, :k])
                np.add.at(d_entities, bs, d_inputs[:, k:])
                touched_parts += [bc, bs]
                sum_eff += eff_loss

            kg_batch = kg_at[step] if use_graph else -1
            if kg_batch >= 0:
                glo = kg_batch * batch
                kg_idx = kg_order[glo:glo + batch]
                gs, gp, go = kg_s[kg_idx], kg_p[kg_idx], kg_o[kg_idx]
                gy = kg_y[kg_idx]
                scores, kcache = score_batch_cached(kind, table, gs, gp, go)
                kg_loss = log_loss(gy, scores)
                if sigmoid_kind(kind):
                    d_out = _logloss_grad_logit(scores, gy)
                else:
                    d_out = _logloss_grad_score(scores, gy)
                d_out = d_out * weight_kg
                dsub, dpred, dobj = score_backward_batch(kind, kcache, d_out)
                np.add.at(d_entities, gs, dsub)
                np.add.at(d_entities, go, dobj)
                d_relations = np.zeros_like(table.relations)
                np.add.at(d_relations, gp, dpred)
                touched_parts += [gs, go]
                sum_kg += kg_loss

            total = joint_loss(kg_loss, eff_loss, weight_kg, weight_effect)
            if not math.isfinite(total):
                raise TrainingDivergence(
                    f"non-finite training loss at epoch {epoch}")

            if mlp_grads is not None:
                adagrad_step(mlp_state, mlp_params, mlp_grads,
                             cfg.learning_rate)
            touched = np.unique(np.concatenate(touched_parts))
            _adagrad_rows(acc_entities, table.entities, touched,
                          d_entities[touched], cfg.learning_rate)
            if d_relations is not None:
                rel_touched = np.unique(gp)
                _adagrad_rows(acc_relations, table.relations, rel_touched,
                              d_relations[rel_touched], cfg.learning_rate)

        epoch_eff = sum_eff / n_eff_batches
        epoch_kg = sum_kg / n_kg_batches if n_kg_batches else 0.0
        epoch_joint = joint_loss(epoch_kg, epoch_eff,
                                 weight_kg, weight_effect)
        log.append(TrainLogEntry(
            epoch=epoch,
            joint_loss=epoch_joint,
            effect_loss=epoch_eff,
            kg_loss=epoch_kg,
        ))
        if not math.isfinite(epoch_joint):
            raise TrainingDivergence(
                f"non-finite training loss at epoch {epoch}")

        if epoch_joint < best - cfg.min_delta:
            best = epoch_joint
            stall = 0
        else:
            stall += 1
            if stall >= cfg.patience:
                break

    return EffectModel(kind=kind, table=table, mlp=mlp, config=cfg, log=log)


def train_ensemble(store: GraphStore, index: EmbeddingIndex,
                   chem_rows: np.ndarray, spec_rows: np.ndarray,
                   labels: np.ndarray, kind: ScoreKind | None,
                   cfg: TrainConfig,
                   members: int | None = None) -> list[EffectModel]:
    """Independently seeded models for score averaging.

    Members differ in initialization, shuffling, dropout and, most
    importantly, in the negative graph samples they see.
    """
    count = cfg.ensemble_size if members is None else members
    if count < 1:
        raise ValueError("ensemble needs at least one member")
    out = []
    for seed in member_seeds(cfg.seed, count):
        member_cfg = replace(cfg, seed=seed)
        out.append(train_model(store, index, chem_rows, spec_rows, labels,
                               kind, member_cfg))
    return out


# -- checkpoints --------------------------------------------------------------


def _mlp_bytes(params: MlpParams) -> bytes:
    chunks = [MLP_MAGIC, struct.pack("<Q", len(params.weights))]
    for w, b in zip(params.weights, params.biases):
        chunks.append(struct.pack("<QQ", w.shape[0], w.shape[1]))
        chunks.append(np.ascontiguousarray(w, dtype="<f8").tobytes())
        chunks.append(np.ascontiguousarray(b, dtype="<f8").tobytes())
    chunks.append(struct.pack("<Q", params.out_weight.shape[0]))
    chunks.append(np.ascontiguousarray(params.out_weight,
                                       dtype="<f8").tobytes())
    chunks.append(np.ascontiguousarray(params.out_bias,
                                       dtype="<f8").tobytes())
    return b"".join(chunks)


def _mlp_from_bytes(data: bytes, offset: int, origin: str
                    ) -> tuple[MlpParams, int]:
    if data[offset:offset + 4] != MLP_MAGIC:
        raise ValueError(f"{origin}: bad classifier magic")
    offset += 4
    (n_layers,) = struct.unpack_from("<Q", data, offset)
    offset += 8
    weights = []
    biases = []
    for _ in range(n_layers):
        rows, cols = struct.unpack_from("<QQ", data, offset)
        offset += 16
        w = np.frombuffer(data, dtype="<f8", count=rows * cols,
                          offset=offset).reshape(rows, cols).copy()
        offset += rows * cols * 8
        b = np.frombuffer(data, dtype="<f8", count=cols, offset=offset).copy()
        offset += cols * 8
        weights.append(w)
        biases.append(b)
    (out_dim,) = struct.unpack_from("<Q", data, offset)
    offset += 8
    out_w = np.frombuffer(data, dtype="<f8", count=out_dim,
                          offset=offset).copy()
    offset += out_dim * 8
    out_b = np.frombuffer(data, dtype="<f8", count=1, offset=offset).copy()
    offset += 8
    return MlpParams(weights, biases, out_w, out_b), offset


def _config_kv(model: EffectModel) -> dict[str, str]:
    cfg = model.config
    weight_kg, weight_effect = resolve_loss_weights(model.kind, cfg)
    return {
        "score_kind": model.kind.value if model.kind else "none",
        "embedding_dim": str(resolve_embedding_dim(model.kind, cfg)),
        "hidden_sizes": ",".join(str(h) for h in cfg.hidden_sizes),
        "dropout_rate": repr(cfg.dropout_rate),
        "learning_rate": repr(cfg.learning_rate),
        "batch_size": str(cfg.batch_size),
        "patience": str(cfg.patience),
        "min_delta": repr(cfg.min_delta),
        "negative_ratio": str(cfg.negative_ratio),
        "loss_weight_kg": repr(weight_kg),
        "loss_weight_effect": repr(weight_effect),
        "similarity_threshold": repr(cfg.similarity_threshold),
        "ensemble_size": str(cfg.ensemble_size),
        "max_epochs": str(cfg.max_epochs),
        "seed": str(cfg.seed),
    }


def save_model(path: str, model: EffectModel) -> None:
    """Binary checkpoint plus a ``<path>.cfg`` text sidecar."""
    atomic_write_bytes(path, _embedding_bytes(model.table)
                       + _mlp_bytes(model.mlp))
    lines = [f"{key} = {value}" for key, value in _config_kv(model).items()]
    atomic_write_text(path + ".cfg", "\n".join(lines) + "\n")


def load_model(path: str) -> EffectModel:
    """Rebuild a model from :func:`save_model` artifacts."""
    with open(path, "rb") as fh:
        data = fh.read()
    table, offset = _embeddings_from_bytes(data, 0, path)
    mlp, offset = _mlp_from_bytes(data, offset, path)
    if offset != len(data):
        raise ValueError(f"{path}: trailing bytes after classifier data")

    kv: dict[str, str] = {}
    with open(path + ".cfg", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            kv[key.strip()] = value.strip()
    kind = None
    if kv.get("score_kind", "none") != "none":
        kind = ScoreKind.parse(kv["score_kind"])
    hidden = tuple(
        int(h) for h in kv.get("hidden_sizes", "").split(",") if h.strip()
    )
    cfg = TrainConfig(
        embedding_dim=int(kv["embedding_dim"]),
        hidden_sizes=hidden,
        dropout_rate=float(kv["dropout_rate"]),
        learning_rate=float(kv["learning_rate"]),
        batch_size=int(kv["batch_size"]),
        patience=int(kv["patience"]),
        min_delta=float(kv["min_delta"]),
        negative_ratio=int(kv["negative_ratio"]),
        loss_weight_kg=float(kv["loss_weight_kg"]),
        loss_weight_effect=float(kv["loss_weight_effect"]),
        similarity_threshold=float(kv["similarity_threshold"]),
        ensemble_size=int(kv["ensemble_size"]),
        max_epochs=int(kv["max_epochs"]),
        seed=int(kv["seed"]),
    )
    return EffectModel(kind=kind, table=table, mlp=mlp, config=cfg)
