"""Knowledge-graph embedding tables and triple score functions.

Three scoring families over k-dimensional float64 vectors, each mapping
a (subject, predicate, object) triple to a plausibility in [0, 1]:

* bilinear-diagonal: sigmoid(sum(e_s * e_p * e_o))
* correlation: sigmoid(<e_p, circ_correlation(e_s, e_o)>)
* translation: tanh(1 / ||e_s + e_p - e_o||_2), with a guard that maps a
  vanishing norm (< 1e-12) to score 1.0 and zero gradient.

Vectors are initialized uniformly in [-6/sqrt(k), 6/sqrt(k)].  The
circular correlation uses an FFT for k >= 16 and the direct O(k^2) sum
below that; the two paths agree to 1e-9.  Analytic gradients for every
score are exposed both per-triple and batched, and a compact binary
checkpoint format round-trips whole tables.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

import numpy as np

from .graph import GraphStore

ZERO_NORM_GUARD = 1e-12
FFT_MIN_DIM = 16
CHECKPOINT_MAGIC = b"KGE1"


class ScoreKind(enum.Enum):
    """Which scoring family interprets the embedding vectors."""

    TRANSLATION = "transe"
    BILINEAR = "distmult"
    CORRELATION = "hole"

    @classmethod
    def parse(cls, text: str) -> "ScoreKind":
        key = text.strip().lower()
        for kind in cls:
            if kind.value == key:
                return kind
        raise ValueError(f"unknown score kind {text!r}; "
                         f"choose from {[k.value for k in cls]}")


@dataclass
class EmbeddingTable:
    """Entity and relation vectors, rows aligned to some external index."""

    entities: np.ndarray
    relations: np.ndarray

    def __post_init__(self) -> None:
        self.entities = np.asarray(self.entities, dtype=np.float64)
        self.relations = np.asarray(self.relations, dtype=np.float64)
        if self.entities.ndim != 2 or self.relations.ndim != 2:
            raise ValueError("embedding tables must be 2-d arrays")
        if self.entities.shape[1] != self.relations.shape[1]:
            raise ValueError("entity and relation dimensions differ")

    @property
    def dim(self) -> int:
        return self.entities.shape[1]

    def copy(self) -> "EmbeddingTable":
        return EmbeddingTable(self.entities.copy(), self.relations.copy())


def init_embeddings(n_entities: int, n_relations: int, k: int,
                    rng: np.random.Generator | int) -> EmbeddingTable:
    """Fresh table with entries uniform in [-6/sqrt(k), 6/sqrt(k)]."""
    if k <= 0:
        raise ValueError(f"embedding dimension must be positive, got {k}")
    if n_entities <= 0 or n_relations <= 0:
        raise ValueError("entity and relation counts must be positive")
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    bound = 6.0 / np.sqrt(k)
    entities = rng.uniform(-bound, bound, size=(n_entities, k))
    relations = rng.uniform(-bound, bound, size=(n_relations, k))
    return EmbeddingTable(entities, relations)


def embed_lookup(table: EmbeddingTable, row: int) -> np.ndarray:
    """Copy of one entity vector (row of the entity table)."""
    if not 0 <= row < table.entities.shape[0]:
        raise IndexError(f"entity row {row} out of range")
    return table.entities[row].copy()


class EmbeddingIndex:
    """Maps graph entity/predicate ids to embedding rows.

    Literal entities receive no row (-1); predicates map one-to-one.
    """

    def __init__(self, store: GraphStore) -> None:
        self.entity_row = np.full(store.entity_count, -1, dtype=np.int64)
        ordered = store.entity_ids(include_literals=False)
        for row, eid in enumerate(ordered):
            self.entity_row[eid] = row
        self.n_entity_rows = len(ordered)
        self.n_relation_rows = store.predicate_count

    def row_of(self, eid: int) -> int:
        row = int(self.entity_row[eid])
        if row < 0:
            raise KeyError(f"entity id {eid} is a literal and has no row")
        return row


# -- circular correlation ----------------------------------------------------


def circ_correlation(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """c[k] = sum_i a[i] * b[(i + k) mod d], FFT-accelerated when d >= 16."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("inputs must be 1-d arrays of equal length")
    d = a.shape[0]
    if d >= FFT_MIN_DIM:
        return np.fft.ifft(np.conj(np.fft.fft(a)) * np.fft.fft(b)).real
    out = np.empty(d)
    for k in range(d):
        out[k] = float(np.dot(a, np.roll(b, -k)))
    return out


def _corr_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise circular correlation of two (B, d) matrices."""
    d = a.shape[1]
    if d >= FFT_MIN_DIM:
        return np.fft.ifft(np.conj(np.fft.fft(a, axis=1)) * np.fft.fft(b, axis=1),
                           axis=1).real
    return np.stack([circ_correlation(a[i], b[i]) for i in range(a.shape[0])])


def _conv_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise circular convolution: out[j] = sum_i a[i] * b[(j - i) mod d]."""
    d = a.shape[1]
    if d >= FFT_MIN_DIM:
        return np.fft.ifft(np.fft.fft(a, axis=1) * np.fft.fft(b, axis=1),
                           axis=1).real
    out = np.empty_like(a)
    for r in range(a.shape[0]):
        for j in range(d):
            out[r, j] = sum(a[r, i] * b[r, (j - i) % d] for i in range(d))
    return out


def _sigmoid(z: np.ndarray | float) -> np.ndarray | float:
    return 1.0 / (1.0 + np.exp(-z))


# -- batched scoring ---------------------------------------------------------


def score_batch(kind: ScoreKind, table: EmbeddingTable, s: np.ndarray,
                p: np.ndarray, o: np.ndarray) -> np.ndarray:
    """Scores for aligned index vectors of subjects/predicates/objects."""
    scores, _ = score_batch_cached(kind, table, s, p, o)
    return scores


def score_batch_cached(kind: ScoreKind, table: EmbeddingTable, s: np.ndarray,
                       p: np.ndarray, o: np.ndarray
                       ) -> tuple[np.ndarray, dict]:
    """Scores plus the intermediates needed for a backward pass."""
    es = table.entities[s]
    ep = table.relations[p]
    eo = table.entities[o]
    cache: dict = {"s": s, "p": p, "o": o, "es": es, "ep": ep, "eo": eo}
    if kind is ScoreKind.BILINEAR:
        z = np.einsum("bk,bk,bk->b", es, ep, eo)
        cache["z"] = z
        return _sigmoid(z), cache
    if kind is ScoreKind.CORRELATION:
        corr = _corr_rows(es, eo)
        z = np.einsum("bk,bk->b", ep, corr)
        cache["z"] = z
        cache["corr"] = corr
        return _sigmoid(z), cache
    if kind is ScoreKind.TRANSLATION:
        v = es + ep - eo
        norm = np.linalg.norm(v, axis=1)
        guarded = norm < ZERO_NORM_GUARD
        safe = np.where(guarded, 1.0, norm)
        scores = np.where(guarded, 1.0, np.tanh(1.0 / safe))
        cache["v"] = v
        cache["norm"] = safe
        cache["guarded"] = guarded
        cache["scores"] = scores
        return scores, cache
    raise ValueError(f"unhandled score kind: {kind}")


def score_backward_batch(kind: ScoreKind, cache: dict, d_out: np.ndarray
                         ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-example gradients w.r.t. the subject/predicate/object vectors.

    ``d_out`` is the loss derivative in each kind's natural output
    domain: the pre-sigmoid logit for the bilinear and correlation kinds
    (so callers can fold the sigmoid into the loss without saturation),
    and the score itself for the translation kind.
    """
    es, ep, eo = cache["es"], cache["ep"], cache["eo"]
    d = d_out[:, None]
    if kind is ScoreKind.BILINEAR:
        return d * ep * eo, d * es * eo, d * es * ep
    if kind is ScoreKind.CORRELATION:
        d_p = d * cache["corr"]
        d_s = d * _corr_rows(ep, eo)
        d_o = d * _conv_rows(es, ep)
        return d_s, d_p, d_o
    if kind is ScoreKind.TRANSLATION:
        scores = cache["scores"]
        norm = cache["norm"]
        coeff = -(1.0 - scores**2) / norm**3
        coeff = np.where(cache["guarded"], 0.0, coeff)
        d_v = d * coeff[:, None] * cache["v"]
        return d_v, d_v, -d_v
    raise ValueError(f"unhandled score kind: {kind}")


def sigmoid_kind(kind: ScoreKind) -> bool:
    """True when the kind's backward pass expects logit-domain derivatives."""
    return kind in (ScoreKind.BILINEAR, ScoreKind.CORRELATION)


# -- per-triple contract ----------------------------------------------------


def score(kind: ScoreKind, table: EmbeddingTable, s: int, p: int,
          o: int) -> float:
    """Score of a single triple; see the module docstring for formulas."""
    out = score_batch(kind, table, np.array([s]), np.array([p]), np.array([o]))
    return float(out[0])


def score_gradients(kind: ScoreKind, table: EmbeddingTable, s: int, p: int,
                    o: int) -> dict[str, np.ndarray]:
    """Gradients of the final score w.r.t. the three embedding vectors."""
    idx = (np.array([s]), np.array([p]), np.array([o]))
    scores, cache = score_batch_cached(kind, table, *idx)
    if sigmoid_kind(kind):
        d_out = scores * (1.0 - scores)  # d(sigmoid)/d(logit)
    else:
        d_out = np.ones_like(scores)
    d_s, d_p, d_o = score_backward_batch(kind, cache, d_out)
    return {"subject": d_s[0], "predicate": d_p[0], "object": d_o[0]}


# -- checkpoint io -----------------------------------------------------------


def save_embeddings(path: str, table: EmbeddingTable) -> None:
    """Write magic, sizes (u64 little-endian) and row-major float64 data."""
    with open(path, "wb") as fh:
        fh.write(_embedding_bytes(table))


def _embedding_bytes(table: EmbeddingTable) -> bytes:
    header = CHECKPOINT_MAGIC + struct.pack(
        "<QQQ", table.dim, table.entities.shape[0], table.relations.shape[0]
    )
    body = (
        np.ascontiguousarray(table.entities, dtype="<f8").tobytes()
        + np.ascontiguousarray(table.relations, dtype="<f8").tobytes()
    )
    return header + body


def load_embeddings(path: str) -> EmbeddingTable:
    with open(path, "rb") as fh:
        data = fh.read()
    table, offset = _embeddings_from_bytes(data, 0, path)
    if offset != len(data):
        raise ValueError(f"{path}: trailing bytes after embedding data")
    return table


def _embeddings_from_bytes(data: bytes, offset: int,
                           origin: str) -> tuple[EmbeddingTable, int]:
    magic = data[offset:offset + 4]
    if magic != CHECKPOINT_MAGIC:
        raise ValueError(f"{origin}: bad embedding magic {magic!r}")
    k, n_e, n_r = struct.unpack_from("<QQQ", data, offset + 4)
    offset += 4 + 24
    need = (n_e + n_r) * k * 8
    if len(data) - offset < need:
        raise ValueError(f"{origin}: truncated embedding data")
    entities = np.frombuffer(data, dtype="<f8", count=n_e * k,
                             offset=offset).reshape(n_e, k).copy()
    offset += n_e * k * 8
    relations = np.frombuffer(data, dtype="<f8", count=n_r * k,
                              offset=offset).reshape(n_r, k).copy()
    offset += n_r * k * 8
    return EmbeddingTable(entities, relations), offset
