"""End-to-end assembly: input files -> graph, matrices and splits.

This module owns the glue between the file-level loaders and the
models: it reads the five tabular inputs, drops effect records that
reference unknown entities, splits and collapses the labeled pairs,
builds the aligned effect/adjacency/similarity matrices for the
neighborhood baseline, and constructs the knowledge graph (background
triples, taxonomy, mappings, fingerprint-similarity edges, and reified
training records) that feeds the embedding loss.

Only training-side effect records are reified into the graph, so the
embedding stream never sees test labels.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from ._matrix import LabeledMatrix
from .effects import (
    EffectRecord,
    LabeledPair,
    Split,
    build_effect_matrix,
    label_outcome,
    load_effects_csv,
    split_effects,
)
from .embeddings import EmbeddingIndex
from .fingerprints import FingerprintSet, emit_similarity_triples
from .graph import GraphStore, IngestError
from .taxonomy import Taxonomy

AFFECTS_PREDICATE = "affects"
SPECIES_PREDICATE = "species"
ENDPOINT_PREDICATE = "endpoint"
SUBCLASS_PREDICATE = "subClassOf"
SAMEAS_PREDICATE = "sameAs"
EFFECT_NODE_PREFIX = "effect/"


@dataclass(frozen=True)
class DatasetPaths:
    """Locations of the five tabular inputs; two are optional."""

    taxonomy: str
    fingerprints: str
    effects: str
    triples: str | None = None
    mappings: str | None = None

    @staticmethod
    def in_directory(directory: str) -> "DatasetPaths":
        """Conventional filenames under one directory; the optional
        files are picked up only when present."""
        def optional(name: str) -> str | None:
            path = os.path.join(directory, name)
            return path if os.path.exists(path) else None

        return DatasetPaths(
            taxonomy=os.path.join(directory, "taxonomy.tsv"),
            fingerprints=os.path.join(directory, "fingerprints.tsv"),
            effects=os.path.join(directory, "effects.csv"),
            triples=optional("triples.tsv"),
            mappings=optional("mappings.tsv"),
        )


@dataclass
class Dataset:
    """Parsed input files, before any splitting or graph assembly."""

    taxonomy: Taxonomy
    fingerprints: FingerprintSet
    records: list[EffectRecord]
    # (subject, subject_is_literal, predicate, object, object_is_literal)
    base_triples: list[tuple[str, bool, str, str, bool]] = field(
        default_factory=list)
    mappings: list[tuple[str, str]] = field(default_factory=list)


def load_mappings_tsv(path: str) -> list[tuple[str, str]]:
    """Two tab-separated identifiers per line, meaning equivalence."""
    pairs: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise IngestError(
                    f"{path}:{lineno}: expected 2 tab-separated fields, "
                    f"got {len(fields)}")
            left, right = (f.strip() for f in fields)
            if not left or not right:
                raise IngestError(f"{path}:{lineno}: empty identifier")
            pairs.append((left, right))
    return pairs


def load_dataset(paths: DatasetPaths) -> Dataset:
    """Parse every input file into memory."""
    taxonomy = Taxonomy.from_tsv(paths.taxonomy)
    fingerprints = FingerprintSet.from_tsv(paths.fingerprints)
    records = load_effects_csv(paths.effects)

    base_triples: list[tuple[str, bool, str, str, bool]] = []
    if paths.triples is not None:
        scratch = GraphStore()
        scratch.ingest_triples_tsv(paths.triples)
        for triple in scratch:
            base_triples.append((
                scratch.entity_label(triple.subject),
                scratch.is_literal(triple.subject),
                scratch.predicate_label(triple.predicate),
                scratch.entity_label(triple.object),
                scratch.is_literal(triple.object),
            ))

    mappings = (load_mappings_tsv(paths.mappings)
                if paths.mappings is not None else [])
    return Dataset(taxonomy=taxonomy, fingerprints=fingerprints,
                   records=records, base_triples=base_triples,
                   mappings=mappings)


def usable_records(dataset: Dataset
                   ) -> tuple[list[EffectRecord], list[str]]:
    """Effect records whose chemical has a fingerprint and whose species
    is a taxonomy leaf; everything else is dropped with a warning."""
    known_chem = set(dataset.fingerprints.compounds)
    known_spec = set(dataset.taxonomy.leaves)
    kept: list[EffectRecord] = []
    missing_chem = 0
    missing_spec = 0
    for record in dataset.records:
        if record.chemical not in known_chem:
            missing_chem += 1
            continue
        if record.species not in known_spec:
            missing_spec += 1
            continue
        kept.append(record)
    warnings = []
    if missing_chem:
        warnings.append(
            f"dropped {missing_chem} record(s) with unknown chemicals")
    if missing_spec:
        warnings.append(
            f"dropped {missing_spec} record(s) with unknown species")
    return kept, warnings


def labeled_with_sources(records: list[EffectRecord]
                         ) -> tuple[list[LabeledPair], list[EffectRecord]]:
    """Labeled pairs plus, index-aligned, the records they came from.

    Records whose outcome code is recognized but excluded from the
    binary task are dropped from both lists."""
    pairs: list[LabeledPair] = []
    sources: list[EffectRecord] = []
    for record in records:
        label = label_outcome(record)
        if label is not None:
            pairs.append(LabeledPair(record.chemical, record.species, label))
            sources.append(record)
    return pairs, sources


def build_graph(dataset: Dataset, train_records: list[EffectRecord],
                similarity_threshold: float) -> GraphStore:
    """Assemble the knowledge graph for one experiment.

    Contents: background triples, taxonomy subsumption, equivalence
    mappings, fingerprint-similarity edges above the threshold, and the
    reified training records — per record r: (chemical, affects,
    effect/r), (effect/r, species, taxon) and (effect/r, endpoint,
    code)."""
    store = GraphStore()
    for subject, s_literal, predicate, obj, o_literal in dataset.base_triples:
        s = store.intern(subject, literal=s_literal)
        p = store.intern_predicate(predicate)
        o = store.intern(obj, literal=o_literal)
        store.add_triple_ids(s, p, o)
    for child, parent in dataset.taxonomy.subsumption_pairs():
        store.add_triple(child, SUBCLASS_PREDICATE, parent)
    for left, right in dataset.mappings:
        store.add_triple(left, SAMEAS_PREDICATE, right)
    emit_similarity_triples(store, dataset.fingerprints.similarity_matrix(),
                            similarity_threshold)
    for record in train_records:
        node = EFFECT_NODE_PREFIX + record.test_id
        store.add_triple(record.chemical, AFFECTS_PREDICATE, node)
        store.add_triple(node, SPECIES_PREDICATE, record.species)
        store.add_triple(node, ENDPOINT_PREDICATE, record.outcome)
    return store


@dataclass
class Experiment:
    """Aligned views of one train/test split for every model family."""

    dataset: Dataset
    split: Split
    compounds: list[str]
    species: list[str]
    effect_matrix: np.ndarray
    adjacency: LabeledMatrix
    similarity: LabeledMatrix
    store: GraphStore
    index: EmbeddingIndex
    warnings: list[str] = field(default_factory=list)

    def rows_for_pairs(self, pairs: list[LabeledPair]
                       ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Embedding rows and labels aligned with ``pairs``."""
        chem_rows = np.array(
            [self.index.row_of(self.store.entity_id(p.chemical))
             for p in pairs], dtype=np.int64)
        spec_rows = np.array(
            [self.index.row_of(self.store.entity_id(p.species))
             for p in pairs], dtype=np.int64)
        labels = np.array([p.label for p in pairs], dtype=np.float64)
        return chem_rows, spec_rows, labels

    def positions_for_pairs(self, pairs: list[LabeledPair]
                            ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Matrix positions (compound, species) and labels for ``pairs``."""
        chem_pos = np.array(
            [self.similarity.position(p.chemical) for p in pairs],
            dtype=np.int64)
        spec_pos = np.array(
            [self.adjacency.position(p.species) for p in pairs],
            dtype=np.int64)
        labels = np.array([p.label for p in pairs], dtype=np.int64)
        return chem_pos, spec_pos, labels


def build_experiment(dataset: Dataset, split: Split,
                     train_sources: list[EffectRecord],
                     similarity_threshold: float,
                     warnings: list[str] | None = None) -> Experiment:
    """Derive every model-facing view from a dataset and a split.

    ``train_sources`` are the effect records behind the split's training
    side; only they are reified into the graph."""
    compounds = list(dataset.fingerprints.compounds)
    species = list(dataset.taxonomy.leaves)
    effect = build_effect_matrix(split.train, compounds, species)
    adjacency = dataset.taxonomy.adjacency_matrix()
    similarity = dataset.fingerprints.similarity_matrix()
    store = build_graph(dataset, train_sources, similarity_threshold)
    index = EmbeddingIndex(store)
    return Experiment(
        dataset=dataset,
        split=split,
        compounds=compounds,
        species=species,
        effect_matrix=effect,
        adjacency=adjacency,
        similarity=similarity,
        store=store,
        index=index,
        warnings=list(warnings or []),
    )


def experiment_for_split(dataset: Dataset, split: Split,
                         sources: list[EffectRecord],
                         similarity_threshold: float,
                         warnings: list[str] | None = None) -> Experiment:
    """Assemble an experiment given the split over ``sources``."""
    train_sources = [sources[i] for i in split.train_indices]
    return build_experiment(dataset, split, train_sources,
                            similarity_threshold, warnings)


def standard_experiment(paths: DatasetPaths, seed: int,
                        similarity_threshold: float) -> Experiment:
    """Load, clean, split and assemble in one call."""
    dataset = load_dataset(paths)
    records, warnings = usable_records(dataset)
    pairs, sources = labeled_with_sources(records)
    split = split_effects(pairs, seed)
    return experiment_for_split(dataset, split, sources,
                                similarity_threshold, warnings)
