"""Effect records: outcome labeling, train/test splitting, negatives.

Experimental outcomes are mapped to a binary target: lethal observations
(LCp / LDp for any p in [0, 100], and NR-LETH) count as 1, explicit
no-effect observations (NOEL, NR-ZERO) count as 0, and every other
recognizable endpoint code (BCF, NOEC, LOEL, ...) is excluded from
classification.  Records are split 50/50 at record level with a seeded
shuffle; (chemical, species) pairs that would appear on both sides are
dropped from the test side so no pair leaks across the split.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass

import numpy as np

from .graph import GraphStore, IngestError, Triple

EFFECTS_COLUMNS = (
    "test_id",
    "chemical_id",
    "species_id",
    "endpoint",
    "conc1_mean",
    "conc1_unit",
)

_LETHAL_RATIO = re.compile(r"^(?:LC|LD)([0-9]+(?:\.[0-9]+)?)$")
_CODE_SHAPE = re.compile(r"^[A-Z][A-Z0-9*/.+-]*$")

POSITIVE_CODES = frozenset({"NR-LETH"})
NEGATIVE_CODES = frozenset({"NOEL", "NR-ZERO"})


@dataclass(frozen=True)
class EffectRecord:
    """One experiment row: who was exposed to what, and the outcome code."""

    test_id: str
    chemical: str
    species: str
    outcome: str
    concentration: float | None = None
    unit: str = ""


@dataclass(frozen=True)
class LabeledPair:
    """A (chemical, species) pair with a binary effect label."""

    chemical: str
    species: str
    label: int


@dataclass
class Split:
    """Pair-disjoint train/test halves plus the record-level partition.

    ``train_indices``/``test_indices`` are positions into the record
    list the split was computed from, so callers can recover whatever
    richer objects those labeled records came from.
    """

    train: list[LabeledPair]
    test: list[LabeledPair]
    train_records: list[LabeledPair]
    test_records: list[LabeledPair]
    train_indices: list[int]
    test_indices: list[int]

    def train_fraction(self) -> float:
        total = len(self.train) + len(self.test)
        if total == 0:
            raise ValueError("split holds no pairs")
        return len(self.train) / total


def label_outcome(record: EffectRecord) -> int | None:
    """Binary label for a record, or None when its endpoint is excluded.

    Raises IngestError for outcome codes that cannot be interpreted at
    all (empty, malformed, or a lethal ratio outside [0, 100]).
    """
    code = record.outcome.strip().upper()
    context = f"(test {record.test_id}: {record.chemical} x {record.species})"
    if not code:
        raise IngestError(f"empty outcome code {context}")
    m = _LETHAL_RATIO.match(code)
    if m:
        ratio = float(m.group(1))
        if not 0.0 <= ratio <= 100.0:
            raise IngestError(
                f"lethal ratio {ratio} outside [0, 100] in {code!r} {context}"
            )
        return 1
    if code in POSITIVE_CODES:
        return 1
    if code in NEGATIVE_CODES:
        return 0
    if not _CODE_SHAPE.match(code):
        raise IngestError(f"unparseable outcome code {code!r} {context}")
    return None


def label_records(records: list[EffectRecord]) -> list[LabeledPair]:
    """Labeled pair per record, dropping excluded endpoints."""
    out = []
    for rec in records:
        label = label_outcome(rec)
        if label is not None:
            out.append(LabeledPair(rec.chemical, rec.species, label))
    return out


def load_effects_csv(path: str) -> list[EffectRecord]:
    """Read experiment rows from a CSV file with the standard header."""
    records: list[EffectRecord] = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = tuple(reader.fieldnames or ())
        missing = [c for c in EFFECTS_COLUMNS if c not in header]
        if missing:
            raise IngestError(f"{path}: missing columns {missing}")
        for lineno, row in enumerate(reader, start=2):
            chemical = (row["chemical_id"] or "").strip()
            species = (row["species_id"] or "").strip()
            outcome = (row["endpoint"] or "").strip()
            if not chemical or not species or not outcome:
                raise IngestError(
                    f"{path}:{lineno}: chemical_id, species_id and endpoint "
                    "must be nonempty"
                )
            conc_text = (row["conc1_mean"] or "").strip()
            try:
                conc: float | None = float(conc_text)
            except ValueError:
                conc = None  # carried but unused; NR and blanks are tolerated
            records.append(
                EffectRecord(
                    test_id=(row["test_id"] or "").strip(),
                    chemical=chemical,
                    species=species,
                    outcome=outcome,
                    concentration=conc,
                    unit=(row["conc1_unit"] or "").strip(),
                )
            )
    return records


def _collapse(records: list[LabeledPair]) -> list[LabeledPair]:
    """Majority vote per (chemical, species); ties resolve to 1."""
    votes: dict[tuple[str, str], list[int]] = {}
    for rec in records:
        votes.setdefault((rec.chemical, rec.species), []).append(rec.label)
    out = []
    for (chemical, species) in sorted(votes):
        labels = votes[(chemical, species)]
        positives = sum(labels)
        label = 1 if positives * 2 >= len(labels) else 0
        out.append(LabeledPair(chemical, species, label))
    return out


def split_effects(records: list[LabeledPair], seed: int) -> Split:
    """Shuffle records, split 50/50, and drop leaking pairs from test.

    The record-level split keeps the first half (rounding up) for
    training.  Any test record whose (chemical, species) pair also occurs
    in a training record is removed, then each side is collapsed to
    unique pairs by majority vote (ties -> 1).  With duplicated pairs the
    surviving test side is therefore smaller than the training side.
    """
    if not records:
        raise ValueError("no labeled records to split")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(records))
    cut = (len(records) + 1) // 2
    train_indices = [int(i) for i in order[:cut]]
    train_records = [records[i] for i in train_indices]
    train_pairs = {(r.chemical, r.species) for r in train_records}
    test_indices = [
        int(i) for i in order[cut:]
        if (records[i].chemical, records[i].species) not in train_pairs
    ]
    test_records = [records[i] for i in test_indices]
    return Split(
        train=_collapse(train_records),
        test=_collapse(test_records),
        train_records=train_records,
        test_records=test_records,
        train_indices=train_indices,
        test_indices=test_indices,
    )


def cv_folds(records: list[LabeledPair], k: int, seed: int) -> list[Split]:
    """k-fold record partition with pair-disjoint held-out folds.

    Mirrors ``split_effects``: records are shuffled once, dealt into k
    folds, and each held-out fold drops pairs that also occur in its
    training remainder before both sides are collapsed.  Each fold is
    returned as a full :class:`Split` whose training side is the
    remainder.
    """
    if k < 2:
        raise ValueError(f"need at least 2 folds, got {k}")
    if len(records) < k:
        raise ValueError(f"cannot cut {len(records)} records into {k} folds")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(records))
    folds: list[list[int]] = [[] for _ in range(k)]
    for pos, idx in enumerate(order):
        folds[pos % k].append(int(idx))
    out = []
    for f in range(k):
        rest_indices = [i for g, fold in enumerate(folds) if g != f
                        for i in fold]
        rest = [records[i] for i in rest_indices]
        rest_pairs = {(r.chemical, r.species) for r in rest}
        held_indices = [
            i for i in folds[f]
            if (records[i].chemical, records[i].species) not in rest_pairs
        ]
        held = [records[i] for i in held_indices]
        out.append(Split(
            train=_collapse(rest),
            test=_collapse(held),
            train_records=rest,
            test_records=held,
            train_indices=rest_indices,
            test_indices=held_indices,
        ))
    return out


def build_effect_matrix(train: list[LabeledPair], compounds: list[str],
                        species: list[str]) -> np.ndarray:
    """Binary matrix with a 1 wherever training holds a positive pair.

    Rows follow ``compounds``, columns follow ``species``; label-0 and
    unobserved pairs are both 0.  Training pairs whose chemical or
    species is missing from the index are rejected.
    """
    c_pos = {c: i for i, c in enumerate(compounds)}
    s_pos = {s: j for j, s in enumerate(species)}
    matrix = np.zeros((len(compounds), len(species)), dtype=np.int8)
    for pair in train:
        if pair.chemical not in c_pos:
            raise KeyError(f"chemical {pair.chemical!r} not in compound index")
        if pair.species not in s_pos:
            raise KeyError(f"species {pair.species!r} not in species index")
        if pair.label == 1:
            matrix[c_pos[pair.chemical], s_pos[pair.species]] = 1
    return matrix


def sample_negative_triples(store: GraphStore, ratio: int = 4,
                            seed: int = 0) -> list[Triple]:
    """Corrupt each literal-free triple ``ratio`` times for training.

    Both subject and object are redrawn uniformly from the store's
    non-literal entities while the predicate is kept, so the predicate
    histogram of the result is exactly ``ratio`` times the input
    histogram.  Corruptions that collide with a true triple are rejected
    and resampled; after 100 failed retries the entity pool is considered
    too small and sampling aborts.
    """
    if ratio < 1:
        raise ValueError(f"ratio must be >= 1, got {ratio}")
    positives = store.embedding_triples()
    if not positives:
        raise ValueError("store holds no literal-free triples to corrupt")
    pool = np.array(store.entity_ids(include_literals=False), dtype=np.int64)
    rng = np.random.default_rng(seed)
    negatives: list[Triple] = []
    for triple in positives:
        for _ in range(ratio):
            for _attempt in range(100):
                s = int(pool[rng.integers(len(pool))])
                o = int(pool[rng.integers(len(pool))])
                if not store.has_triple(s, triple.predicate, o):
                    negatives.append(Triple(s, triple.predicate, o))
                    break
            else:
                raise RuntimeError(
                    "negative sampling exhausted 100 retries; entity pool "
                    "too small relative to the stored triples"
                )
    return negatives
