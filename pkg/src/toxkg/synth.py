"""Synthetic ecotoxicology corpus generator.

Produces the five input files the pipeline consumes — ``triples.tsv``,
``taxonomy.tsv``, ``fingerprints.tsv``, ``effects.csv`` and
``mappings.tsv`` — for a small benchmark world with planted, recoverable
structure:

* chemicals fall into classes, species into clades;
* toxicity is a block property: an exact-count subset of
  (class, clade) blocks is toxic, every other block is inert;
* observed outcomes flip the latent block label with a configured
  noise probability and are reported through a mix of realistic
  endpoint codes (lethal ratios, no-effect codes);
* fingerprints are class patterns with per-chemical bit flips, so
  structural similarity correlates with class membership;
* a configurable slice of chemicals and species is "rare": their cells
  are undersampled in the effect table, leaving the knowledge graph as
  the main evidence about them.

Everything is drawn from one seeded generator, so a given specification
always produces byte-identical files.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .io import atomic_write_text

_POSITIVE_ENDPOINTS = ("LC50", "LD50", "NR-LETH")
_POSITIVE_WEIGHTS = (0.5, 0.25, 0.25)
_NEGATIVE_ENDPOINTS = ("NOEL", "NR-ZERO")
_NEGATIVE_WEIGHTS = (0.6, 0.4)

CLASS_PREDICATE = "memberOfClass"


@dataclass(frozen=True)
class SyntheticSpec:
    """Knobs for the generated world; defaults give a desk-scale corpus."""

    n_chemical_classes: int = 4
    chemicals_per_class: int = 13
    n_species_clades: int = 4
    species_per_clade: int = 13
    fingerprint_width: int = 128
    bit_flip_rate: float = 0.08
    label_noise: float = 0.1
    positive_rate: float = 0.41
    toxicity_block_probability: float | None = None
    observation_rate: float = 0.65
    rare_fraction: float = 0.2
    rare_weight: float = 0.25
    properties_per_class: int = 6
    habitats_per_clade: int = 6
    seed: int = 0

    def __post_init__(self) -> None:
        if min(self.n_chemical_classes, self.chemicals_per_class,
               self.n_species_clades, self.species_per_clade) < 1:
            raise ValueError("entity group counts must be >= 1")
        if self.fingerprint_width < 4 or self.fingerprint_width % 4:
            raise ValueError("fingerprint_width must be a positive "
                             "multiple of 4")
        if not 0.0 <= self.bit_flip_rate < 0.5:
            raise ValueError("bit_flip_rate must lie in [0, 0.5)")
        if not 0.0 <= self.label_noise < 0.5:
            raise ValueError("label_noise must lie in [0, 0.5)")
        if not 0.0 < self.positive_rate < 1.0:
            raise ValueError("positive_rate must lie in (0, 1)")
        if self.toxicity_block_probability is not None and not (
                0.0 < self.toxicity_block_probability < 1.0):
            raise ValueError("toxicity_block_probability must lie in (0, 1)")
        if not 0.0 < self.observation_rate <= 1.0:
            raise ValueError("observation_rate must lie in (0, 1]")
        if not 0.0 <= self.rare_fraction < 1.0:
            raise ValueError("rare_fraction must lie in [0, 1)")
        if not 0.0 < self.rare_weight <= 1.0:
            raise ValueError("rare_weight must lie in (0, 1]")
        if self.properties_per_class < 0:
            raise ValueError("properties_per_class must be >= 0")
        if self.habitats_per_clade < 0:
            raise ValueError("habitats_per_clade must be >= 0")

    @property
    def n_chemicals(self) -> int:
        return self.n_chemical_classes * self.chemicals_per_class

    @property
    def n_species(self) -> int:
        return self.n_species_clades * self.species_per_clade

    def block_probability(self) -> float:
        """Fraction of toxic blocks, derived from the target positive
        rate when not pinned explicitly.

        With noise q, a toxic-block fraction p yields an expected
        observed positive rate p(1-q) + (1-p)q; solving for p gives
        (rate - q) / (1 - 2q).
        """
        if self.toxicity_block_probability is not None:
            return self.toxicity_block_probability
        p = (self.positive_rate - self.label_noise) / (
            1.0 - 2.0 * self.label_noise)
        if not 0.0 < p < 1.0:
            raise ValueError(
                "positive_rate is unreachable at this label_noise")
        return p


@dataclass(frozen=True)
class SyntheticDataset:
    """What :func:`generate` wrote, plus realized summary statistics."""

    directory: str
    n_chemicals: int
    n_species: int
    n_records: int
    n_toxic_blocks: int
    realized_positive_rate: float

    @property
    def paths(self) -> dict[str, str]:
        return {
            name: os.path.join(self.directory, filename)
            for name, filename in (
                ("triples", "triples.tsv"),
                ("taxonomy", "taxonomy.tsv"),
                ("fingerprints", "fingerprints.tsv"),
                ("effects", "effects.csv"),
                ("mappings", "mappings.tsv"),
            )
        }


def _chemical_name(index: int) -> str:
    return f"chem{index:03d}"


def _species_name(index: int) -> str:
    return f"sp{index:03d}"


def _hex_of_bits(bits: np.ndarray) -> str:
    value = 0
    for position in np.flatnonzero(bits):
        value |= 1 << int(position)
    return format(value, f"0{bits.size // 4}x")


def generate(spec: SyntheticSpec, out_dir: str) -> SyntheticDataset:
    """Write the five input files under ``out_dir`` and summarize them.

    Raises ValueError when the requested rates are unreachable (no valid
    toxic-block count, or the realized positive rate drifting more than
    five points from the target).
    """
    rng = np.random.default_rng(spec.seed)
    os.makedirs(out_dir, exist_ok=True)

    n_chem = spec.n_chemicals
    n_spec = spec.n_species

    # Toxic blocks: exact count, uniformly placed.
    n_blocks = spec.n_chemical_classes * spec.n_species_clades
    p_block = spec.block_probability()
    n_toxic = int(round(n_blocks * p_block))
    if not 0 < n_toxic < n_blocks:
        raise ValueError("toxic block count must leave both toxic and "
                         "inert blocks; adjust the rates")
    block_toxic = np.zeros(n_blocks, dtype=bool)
    block_toxic[rng.permutation(n_blocks)[:n_toxic]] = True
    block_toxic = block_toxic.reshape(spec.n_chemical_classes, spec.n_species_clades)

    # Rare entities: the tail of each group is undersampled.
    rare_chem = np.zeros(n_chem, dtype=bool)
    rare_spec = np.zeros(n_spec, dtype=bool)
    n_rare_chem = int(round(spec.chemicals_per_class * spec.rare_fraction))
    n_rare_spec = int(round(spec.species_per_clade * spec.rare_fraction))
    for group in range(spec.n_chemical_classes):
        base = group * spec.chemicals_per_class
        if n_rare_chem:
            rare_chem[base + spec.chemicals_per_class - n_rare_chem:
                      base + spec.chemicals_per_class] = True
    for group in range(spec.n_species_clades):
        base = group * spec.species_per_clade
        if n_rare_spec:
            rare_spec[base + spec.species_per_clade - n_rare_spec:
                      base + spec.species_per_clade] = True

    # Observed cells: exact count, weighted away from rare entities.
    chem_weight = np.where(rare_chem, spec.rare_weight, 1.0)
    spec_weight = np.where(rare_spec, spec.rare_weight, 1.0)
    cell_weight = np.outer(chem_weight, spec_weight).ravel()
    cell_weight /= cell_weight.sum()
    n_cells = n_chem * n_spec
    n_obs = int(round(n_cells * spec.observation_rate))
    if n_obs < 1:
        raise ValueError("observation_rate selects no cells")
    chosen = rng.choice(n_cells, size=n_obs, replace=False, p=cell_weight)
    chosen.sort()
    obs_chem = chosen // n_spec
    obs_spec = chosen % n_spec

    # Observed outcome: latent block label with symmetric noise.
    latent = block_toxic[obs_chem // spec.chemicals_per_class,
                         obs_spec // spec.species_per_clade]
    flips = rng.random(n_obs) < spec.label_noise
    observed = latent ^ flips
    realized = float(observed.mean())
    if abs(realized - spec.positive_rate) > 0.05:
        raise ValueError(
            f"realized positive rate {realized:.3f} is more than 0.05 from "
            f"the target {spec.positive_rate:.3f}; adjust the specification")

    # Effect records with varied endpoint codes.
    effect_rows = []
    for i in range(n_obs):
        if observed[i]:
            endpoint = rng.choice(_POSITIVE_ENDPOINTS, p=_POSITIVE_WEIGHTS)
            if endpoint in ("LC50", "LD50"):
                conc = f"{rng.uniform(0.5, 50.0):.3f}"
                unit = "mg/L"
            else:
                conc = ""
                unit = ""
        else:
            endpoint = rng.choice(_NEGATIVE_ENDPOINTS, p=_NEGATIVE_WEIGHTS)
            if endpoint == "NOEL":
                conc = f"{rng.uniform(10.0, 500.0):.3f}"
                unit = "mg/L"
            else:
                conc = ""
                unit = ""
        effect_rows.append((
            f"t{i:04d}",
            _chemical_name(int(obs_chem[i])),
            _species_name(int(obs_spec[i])),
            str(endpoint),
            conc,
            unit,
        ))

    # Fingerprints: class pattern with per-chemical bit flips.
    width = spec.fingerprint_width
    class_patterns = rng.random((spec.n_chemical_classes, width)) < 0.5
    fingerprint_lines = []
    for c in range(n_chem):
        pattern = class_patterns[c // spec.chemicals_per_class]
        flips_c = rng.random(width) < spec.bit_flip_rate
        bits = pattern ^ flips_c
        fingerprint_lines.append(f"{_chemical_name(c)}\t{_hex_of_bits(bits)}")

    # Species taxonomy: root -> clade -> species.
    taxonomy_lines = []
    for clade in range(spec.n_species_clades):
        taxonomy_lines.append(f"clade{clade}\troot")
    for s in range(n_spec):
        taxonomy_lines.append(
            f"{_species_name(s)}\tclade{s // spec.species_per_clade}")

    # Background triples: chemical class membership, plus optional
    # class-correlated annotation triples (shared property nodes, the way
    # curated chemistry resources attach several classifications to each
    # compound).
    triple_lines = [
        f"{_chemical_name(c)}\t{CLASS_PREDICATE}\t"
        f"class{c // spec.chemicals_per_class}"
        for c in range(n_chem)
    ]
    for c in range(n_chem):
        group = c // spec.chemicals_per_class
        triple_lines.extend(
            f"{_chemical_name(c)}\thasProperty\tprop{group}_{i}"
            for i in range(spec.properties_per_class))
    # Clade-correlated species traits (shared habitat nodes), mirroring
    # the trait annotations ecological databases attach to taxa.
    for s in range(n_spec):
        clade = s // spec.species_per_clade
        triple_lines.extend(
            f"{_species_name(s)}\tinHabitat\thabitat{clade}_{i}"
            for i in range(spec.habitats_per_clade))

    # External-vocabulary mappings for every chemical.
    mapping_lines = [
        f"{_chemical_name(c)}\text:chem{c:03d}" for c in range(n_chem)
    ]

    paths = SyntheticDataset(
        directory=out_dir,
        n_chemicals=n_chem,
        n_species=n_spec,
        n_records=n_obs,
        n_toxic_blocks=n_toxic,
        realized_positive_rate=realized,
    ).paths

    atomic_write_text(paths["triples"], "\n".join(triple_lines) + "\n")
    atomic_write_text(paths["taxonomy"], "\n".join(taxonomy_lines) + "\n")
    atomic_write_text(paths["fingerprints"],
                      "\n".join(fingerprint_lines) + "\n")
    atomic_write_text(paths["mappings"], "\n".join(mapping_lines) + "\n")

    effect_text_rows = ["test_id,chemical_id,species_id,endpoint,"
                        "conc1_mean,conc1_unit"]
    for row in effect_rows:
        effect_text_rows.append(",".join(row))
    atomic_write_text(paths["effects"], "\n".join(effect_text_rows) + "\n")

    return SyntheticDataset(
        directory=out_dir,
        n_chemicals=n_chem,
        n_species=n_spec,
        n_records=n_obs,
        n_toxic_blocks=n_toxic,
        realized_positive_rate=realized,
    )
