"""Losses, MLP forward/backward, Adagrad, training loop, checkpoints."""

import dataclasses
import math
import warnings

import numpy as np
import pytest

from helpers import central_diff, max_rel_err

from toxkg.classifier import (
    EffectModel,
    MlpParams,
    TrainConfig,
    TrainingDivergence,
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
from toxkg.classifier import _logloss_grad_logit, _mlp_backward, \
    _mlp_forward_cached
from toxkg.effects import sample_negative_triples
from toxkg.embeddings import (
    EmbeddingIndex,
    ScoreKind,
    init_embeddings,
    score_batch,
)
from toxkg.graph import GraphStore

LN2 = 0.6931471805599453
SIGMOID_1 = 0.7310585786300049


# -- losses ---------------------------------------------------------------------


def test_log_loss_pinned_values():
    assert log_loss(np.array([1.0]), np.array([0.5])) == pytest.approx(LN2)
    assert log_loss(np.array([0.0]), np.array([0.5])) == pytest.approx(LN2)
    assert log_loss(np.array([1.0, 0.0]), np.array([0.5, 0.5])) == (
        pytest.approx(LN2))
    assert log_loss(np.array([1.0]), np.array([1.0])) == pytest.approx(
        0.0, abs=1e-6)


def test_log_loss_clamps_extreme_predictions():
    worst = log_loss(np.array([1.0]), np.array([0.0]))
    assert worst == pytest.approx(-math.log(1e-7))
    assert math.isfinite(worst)


def test_log_loss_validation():
    with pytest.raises(ValueError):
        log_loss(np.array([]), np.array([]))
    with pytest.raises(ValueError):
        log_loss(np.array([1.0, 0.0]), np.array([0.5]))


def test_joint_loss_weighted_sum():
    assert joint_loss(0.5, 1.0, 2.0, 1.0) == pytest.approx(2.0)
    assert joint_loss(0.7, 0.3, 0.0, 1.0) == pytest.approx(0.3)


# -- configuration resolution ------------------------------------------------------


def test_resolve_embedding_dim():
    assert resolve_embedding_dim(None, TrainConfig()) == 16
    for kind in ScoreKind:
        assert resolve_embedding_dim(kind, TrainConfig()) == 128
    explicit = TrainConfig(embedding_dim=32)
    assert resolve_embedding_dim(None, explicit) == 32
    assert resolve_embedding_dim(ScoreKind.BILINEAR, explicit) == 32


def test_resolve_loss_weights():
    cfg = TrainConfig()
    assert resolve_loss_weights(None, cfg) == (0.0, 1.0)
    assert resolve_loss_weights(ScoreKind.BILINEAR, cfg) == (0.5, 1.0)
    assert resolve_loss_weights(ScoreKind.CORRELATION, cfg) == (0.5, 1.0)
    assert resolve_loss_weights(ScoreKind.TRANSLATION, cfg) == (1.0, 1.0)
    explicit = TrainConfig(loss_weight_kg=0.25, loss_weight_effect=2.0)
    assert resolve_loss_weights(ScoreKind.TRANSLATION, explicit) == (0.25, 2.0)
    # Disabling the graph stream zeroes its weight even when set explicitly.
    assert resolve_loss_weights(None, explicit) == (0.0, 2.0)


@pytest.mark.parametrize("field,value", [
    ("embedding_dim", 0),
    ("dropout_rate", 1.0),
    ("dropout_rate", -0.1),
    ("learning_rate", 0.0),
    ("batch_size", 0),
    ("patience", 0),
    ("min_delta", -1.0),
    ("negative_ratio", 0),
    ("similarity_threshold", 1.5),
    ("max_epochs", 0),
])
def test_train_config_validation(field, value):
    with pytest.raises(ValueError):
        TrainConfig(**{field: value})


# -- MLP ---------------------------------------------------------------------------


def test_init_mlp_shapes_bounds_and_zero_biases():
    params = init_mlp(8, (4, 3), rng=0)
    assert [w.shape for w in params.weights] == [(8, 4), (4, 3)]
    assert [b.shape for b in params.biases] == [(4,), (3,)]
    assert params.out_weight.shape == (3,)
    assert np.all(params.biases[0] == 0.0)
    assert np.all(params.biases[1] == 0.0)
    assert np.all(params.out_bias == 0.0)
    assert np.all(np.abs(params.weights[0]) <= math.sqrt(6.0 / (8 + 4)))
    assert np.all(np.abs(params.weights[1]) <= math.sqrt(6.0 / (4 + 3)))
    assert np.all(np.abs(params.out_weight) <= math.sqrt(6.0 / (3 + 1)))
    assert params.hidden_sizes == (4, 3)
    assert params.input_dim == 8

    again = init_mlp(8, (4, 3), rng=0)
    assert all(np.array_equal(a, b)
               for a, b in zip(params.weights, again.weights))
    with pytest.raises(ValueError):
        init_mlp(0, (4,), rng=0)
    with pytest.raises(ValueError):
        init_mlp(4, (0,), rng=0)


def test_mlp_forward_zero_weights_gives_half():
    params = init_mlp(6, (4,), rng=1)
    for w in params.weights:
        w[:] = 0.0
    params.out_weight[:] = 0.0
    out = mlp_forward(params, np.ones((5, 6)))
    assert np.allclose(out, 0.5)


def test_mlp_forward_without_hidden_layers_is_logistic_regression():
    params = MlpParams([], [], np.array([1.0, 0.0]), np.zeros(1))
    out = mlp_forward(params, np.array([[1.0, 5.0]]))
    assert out[0] == pytest.approx(SIGMOID_1)
    with pytest.raises(ValueError):
        mlp_forward(params, np.array([[1.0, 2.0, 3.0]]))


def test_dropout_masks_shape_and_values():
    params = init_mlp(6, (4, 3), rng=2)
    rng = np.random.default_rng(0)
    assert draw_dropout_masks(params, 10, 0.0, rng) is None
    masks = draw_dropout_masks(params, 10, 0.5, rng)
    assert [m.shape for m in masks] == [(10, 6), (10, 4), (10, 3)]
    for mask in masks:
        assert set(np.unique(mask)).issubset({0.0, 2.0})


def test_dropout_preserves_expected_logit():
    # A linear model makes the expectation exact: E[(x*mask) @ w] = x @ w.
    rng = np.random.default_rng(7)
    w = rng.normal(size=6)
    params = MlpParams([], [], w.copy(), np.array([0.3]))
    x = rng.uniform(0.5, 1.5, size=6)
    target = float(x @ w + 0.3)

    n = 10_000
    masks = draw_dropout_masks(params, n, 0.3, rng)
    probs = mlp_forward(params, np.tile(x, (n, 1)), masks)
    logits = np.log(probs / (1.0 - probs))
    assert logits.std() > 0.0  # dropout really perturbs single passes
    stderr = logits.std() / math.sqrt(n)
    assert abs(logits.mean() - target) < 3.0 * stderr


def test_mlp_gradients_match_finite_differences():
    rng = np.random.default_rng(12)
    params = init_mlp(6, (5, 4), rng)
    x = rng.normal(size=(3, 6))
    y = np.array([1.0, 0.0, 1.0])

    # Stay clear of ReLU kinks so the numeric derivative is trustworthy.
    _, cache = _mlp_forward_cached(params, x, None)
    assert min(np.abs(z).min() for _, z, _ in cache["layers"]) > 1e-3

    names = [f"w{i}" for i in range(2)] + [f"b{i}" for i in range(2)]
    names += ["out_w", "out_b"]

    def unpack(flat):
        p = params.copy()
        arrays = p.weights + p.biases + [p.out_weight, p.out_bias]
        pos = 0
        for arr in arrays:
            arr[...] = flat[pos:pos + arr.size].reshape(arr.shape)
            pos += arr.size
        return p

    def loss(flat):
        p = unpack(flat)
        return log_loss(y, mlp_forward(p, x))

    arrays = params.weights + params.biases + [params.out_weight,
                                               params.out_bias]
    flat = np.concatenate([a.ravel() for a in arrays])
    numeric = central_diff(loss, flat)

    out, cache = _mlp_forward_cached(params, x, None)
    grads, d_inputs = _mlp_backward(params, cache, _logloss_grad_logit(out, y))
    analytic = np.concatenate([
        grads["w0"].ravel(), grads["w1"].ravel(),
        grads["b0"].ravel(), grads["b1"].ravel(),
        grads["out_w"].ravel(), grads["out_b"].ravel(),
    ])
    assert max_rel_err(analytic, numeric) < 1e-4

    # The input gradient feeds the embedding updates; check it too.
    def loss_of_inputs(flat_x):
        return log_loss(y, mlp_forward(params, flat_x.reshape(3, 6)))

    numeric_x = central_diff(loss_of_inputs, x.ravel().copy())
    assert max_rel_err(d_inputs.ravel(), numeric_x) < 1e-4


# -- Adagrad ------------------------------------------------------------------------


def test_adagrad_pinned_two_steps():
    params = {"w": np.array([1.0])}
    state = {}
    adagrad_step(state, params, {"w": np.array([1.0])}, learning_rate=0.1)
    assert params["w"][0] == pytest.approx(0.9, abs=1e-8)
    adagrad_step(state, params, {"w": np.array([1.0])}, learning_rate=0.1)
    # Second identical gradient is damped by the accumulated square: 0.1/sqrt(2).
    assert params["w"][0] == pytest.approx(0.9 - 0.07071067811865475, abs=1e-8)


def test_adagrad_zero_gradient_and_untouched_params():
    params = {"w": np.array([1.0]), "v": np.array([2.0])}
    state = {}
    adagrad_step(state, params, {"w": np.array([0.0])}, learning_rate=0.1)
    assert params["w"][0] == 1.0
    assert params["v"][0] == 2.0


# -- training ------------------------------------------------------------------------


def _entity_only_setup(n_chem=6, n_spec=6, n_pairs=24, seed=0):
    """A store with interned entities and no triples, plus random pairs."""
    store = GraphStore()
    chems = [f"c{i}" for i in range(n_chem)]
    specs = [f"s{i}" for i in range(n_spec)]
    for label in chems + specs:
        store.intern(label)
    index = EmbeddingIndex(store)
    rng = np.random.default_rng(seed)
    chem_rows = rng.integers(n_chem, size=n_pairs)
    spec_rows = n_chem + rng.integers(n_spec, size=n_pairs)
    labels = rng.integers(2, size=n_pairs).astype(float)
    return store, index, chem_rows, spec_rows, labels


def _clustered_store(groups=3, size=8):
    """Entities linked densely within groups and never across them."""
    store = GraphStore()
    for g in range(groups):
        members = [f"g{g}_e{i}" for i in range(size)]
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                store.add_triple(a, "linksTo", b)
    return store


SMALL = TrainConfig(embedding_dim=8, hidden_sizes=(8,), batch_size=16,
                    max_epochs=12, patience=3, seed=5)


def test_plain_training_equals_graph_training_on_an_empty_graph():
    store, index, chem_rows, spec_rows, labels = _entity_only_setup()
    plain = train_model(store, index, chem_rows, spec_rows, labels,
                        None, SMALL)
    # With no triples the graph stream is empty, so a graph-aware run
    # must consume identical randomness and produce identical numbers.
    graphless = train_model(store, index, chem_rows, spec_rows, labels,
                            ScoreKind.TRANSLATION, SMALL)
    assert [e.effect_loss for e in plain.log] == (
        [e.effect_loss for e in graphless.log])
    assert np.array_equal(plain.table.entities, graphless.table.entities)
    assert all(np.array_equal(a, b) for a, b in
               zip(plain.mlp.weights, graphless.mlp.weights))
    probe_c = np.array([0, 1, 2])
    probe_s = np.array([6, 7, 8])
    assert np.array_equal(plain.predict_rows(probe_c, probe_s),
                          graphless.predict_rows(probe_c, probe_s))


def test_training_is_deterministic_and_seed_sensitive():
    store, index, chem_rows, spec_rows, labels = _entity_only_setup()
    run = [train_model(store, index, chem_rows, spec_rows, labels, None,
                       SMALL) for _ in range(2)]
    assert np.array_equal(run[0].table.entities, run[1].table.entities)
    assert all(np.array_equal(a, b)
               for a, b in zip(run[0].mlp.weights, run[1].mlp.weights))
    assert [e.joint_loss for e in run[0].log] == (
        [e.joint_loss for e in run[1].log])

    other = train_model(store, index, chem_rows, spec_rows, labels, None,
                        dataclasses.replace(SMALL, seed=6))
    assert not np.array_equal(run[0].table.entities, other.table.entities)


def test_training_reduces_effect_loss_and_stops_by_the_patience_rule():
    store, index, chem_rows, spec_rows, labels = _entity_only_setup(n_pairs=64)
    cfg = dataclasses.replace(SMALL, max_epochs=100, patience=4,
                              min_delta=1e-4)
    model = train_model(store, index, chem_rows, spec_rows, labels, None, cfg)
    losses = [e.joint_loss for e in model.log]
    assert losses[-1] < losses[0]
    assert [e.epoch for e in model.log] == list(range(1, len(losses) + 1))

    # Replay the early-stopping rule over the log: the run must stop at
    # exactly the first epoch where patience is exhausted.
    best = math.inf
    stall = 0
    stop_at = None
    for i, value in enumerate(losses):
        if value < best - cfg.min_delta:
            best, stall = value, 0
        else:
            stall += 1
            if stall >= cfg.patience:
                stop_at = i + 1
                break
    if len(losses) < cfg.max_epochs:
        assert stop_at == len(losses)
    else:
        assert stop_at is None or stop_at == cfg.max_epochs


@pytest.mark.parametrize("kind", list(ScoreKind))
def test_joint_training_separates_true_triples_from_corruptions(kind):
    store = _clustered_store()
    index = EmbeddingIndex(store)
    rng = np.random.default_rng(0)
    chem_rows = rng.integers(8, size=20)           # group 0 entities
    spec_rows = 8 + rng.integers(8, size=20)       # group 1 entities
    labels = rng.integers(2, size=20).astype(float)
    cfg = TrainConfig(embedding_dim=16, hidden_sizes=(8,), batch_size=64,
                      dropout_rate=0.0, max_epochs=60, patience=60, seed=1)
    model = train_model(store, index, chem_rows, spec_rows, labels, kind, cfg)

    triples = store.embedding_triples()
    s = np.array([index.row_of(t.subject) for t in triples])
    p = np.array([t.predicate for t in triples])
    o = np.array([index.row_of(t.object) for t in triples])
    true_scores = score_batch(kind, model.table, s, p, o)

    corrupted = sample_negative_triples(store, 2, np.random.default_rng(99))
    cs = np.array([index.row_of(t.subject) for t in corrupted])
    cp = np.array([t.predicate for t in corrupted])
    co = np.array([index.row_of(t.object) for t in corrupted])
    false_scores = score_batch(kind, model.table, cs, cp, co)

    assert true_scores.mean() > false_scores.mean() + 0.1


def test_training_raises_a_named_divergence_on_numeric_blowup():
    store, index, chem_rows, spec_rows, labels = _entity_only_setup()
    cfg = dataclasses.replace(SMALL, learning_rate=1e160)
    with np.errstate(all="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        with pytest.raises(TrainingDivergence, match=r"epoch \d+"):
            train_model(store, index, chem_rows, spec_rows, labels, None, cfg)


def test_training_input_validation():
    store, index, chem_rows, spec_rows, labels = _entity_only_setup()
    with pytest.raises(ValueError):
        train_model(store, index, chem_rows[:-1], spec_rows, labels, None,
                    SMALL)
    with pytest.raises(ValueError):
        train_model(store, index, chem_rows[:0], spec_rows[:0], labels[:0],
                    None, SMALL)


# -- ensembles ------------------------------------------------------------------------


def test_member_seeds_distinct_deterministic_prefix_stable():
    seeds = member_seeds(0, 5)
    assert len(set(seeds)) == 5
    assert seeds == member_seeds(0, 5)
    assert seeds[:2] == member_seeds(0, 2)
    assert member_seeds(1, 5) != seeds


def test_ensemble_predict_is_the_member_mean():
    store, index, chem_rows, spec_rows, labels = _entity_only_setup()
    cfg = dataclasses.replace(SMALL, max_epochs=4)
    models = train_ensemble(store, index, chem_rows, spec_rows, labels,
                            None, cfg, members=3)
    assert len(models) == 3
    probe_c, probe_s = np.array([0, 1]), np.array([6, 7])
    stack = np.stack([m.predict_rows(probe_c, probe_s) for m in models])
    assert np.allclose(ensemble_predict(models, probe_c, probe_s),
                       stack.mean(axis=0))
    # Members genuinely differ (different seeds).
    assert not np.allclose(stack[0], stack[1])
    single = ensemble_predict(models[:1], probe_c, probe_s)
    assert np.array_equal(single, models[0].predict_rows(probe_c, probe_s))
    with pytest.raises(ValueError):
        ensemble_predict([], probe_c, probe_s)
    with pytest.raises(ValueError):
        train_ensemble(store, index, chem_rows, spec_rows, labels, None,
                       cfg, members=0)


# -- checkpoints ------------------------------------------------------------------------


def _toy_model(kind=ScoreKind.BILINEAR):
    table = init_embeddings(5, 2, 8, rng=3)
    mlp = init_mlp(16, (4,), rng=4)
    cfg = TrainConfig(embedding_dim=8, hidden_sizes=(4,), seed=9)
    return EffectModel(kind=kind, table=table, mlp=mlp, config=cfg)


def test_model_checkpoint_round_trip(tmp_path):
    model = _toy_model()
    path = str(tmp_path / "model.bin")
    save_model(path, model)
    assert (tmp_path / "model.bin.cfg").exists()
    loaded = load_model(path)
    assert loaded.kind is ScoreKind.BILINEAR
    assert np.array_equal(loaded.table.entities, model.table.entities)
    assert np.array_equal(loaded.table.relations, model.table.relations)
    assert all(np.array_equal(a, b)
               for a, b in zip(loaded.mlp.weights, model.mlp.weights))
    assert np.array_equal(loaded.mlp.out_weight, model.mlp.out_weight)
    for field in ("hidden_sizes", "dropout_rate", "learning_rate",
                  "batch_size", "patience", "min_delta", "negative_ratio",
                  "similarity_threshold", "ensemble_size", "max_epochs",
                  "seed"):
        assert getattr(loaded.config, field) == getattr(model.config, field)
    assert loaded.config.embedding_dim == 8
    probe_c, probe_s = np.array([0, 1]), np.array([2, 3])
    assert np.array_equal(loaded.predict_rows(probe_c, probe_s),
                          model.predict_rows(probe_c, probe_s))


def test_model_checkpoint_of_plain_classifier_round_trips_none_kind(tmp_path):
    model = _toy_model(kind=None)
    path = str(tmp_path / "plain.bin")
    save_model(path, model)
    assert load_model(path).kind is None


def test_model_checkpoint_corruption_detected(tmp_path):
    model = _toy_model()
    path = str(tmp_path / "model.bin")
    save_model(path, model)
    data = (tmp_path / "model.bin").read_bytes()

    trailing = tmp_path / "trailing.bin"
    trailing.write_bytes(data + b"\x01")
    (tmp_path / "trailing.bin.cfg").write_text(
        (tmp_path / "model.bin.cfg").read_text())
    with pytest.raises(ValueError):
        load_model(str(trailing))

    missing_cfg = tmp_path / "nocfg.bin"
    missing_cfg.write_bytes(data)
    with pytest.raises(FileNotFoundError):
        load_model(str(missing_cfg))


def test_saved_checkpoints_are_byte_stable(tmp_path):
    model = _toy_model()
    first = str(tmp_path / "a.bin")
    second = str(tmp_path / "b.bin")
    save_model(first, model)
    save_model(second, model)
    assert (tmp_path / "a.bin").read_bytes() == (
        tmp_path / "b.bin").read_bytes()
    assert (tmp_path / "a.bin.cfg").read_text() == (
        tmp_path / "b.bin.cfg").read_text()
