"""Shared fixtures: tiny handcrafted corpora the whole suite reuses."""

from __future__ import annotations

import os

import pytest

TAXONOMY_TSV = """\
cladeA\troot
cladeB\troot
sp0\tcladeA
sp1\tcladeA
sp2\tcladeB
sp3\tcladeB
"""

# Width 8 (two hex digits). Jaccard pairs: (c0,c1)=7/8, (c0,c2)=(c0,c3)=1/2,
# (c1,c2)=3/8, (c1,c3)=4/7, (c2,c3)=0.
FINGERPRINTS_TSV = """\
c0\tff
c1\tfe
c2\t0f
c3\tf0
"""

EFFECTS_CSV = """\
test_id,chemical_id,species_id,endpoint,conc1_mean,conc1_unit
t01,c0,sp0,LC50,1.2,mg/L
t02,c0,sp0,NOEL,10.0,mg/L
t03,c1,sp1,LD50,3.3,mg/L
t04,c2,sp2,NOEL,5.0,mg/L
t05,c3,sp3,NR-LETH,,
t06,c0,sp2,NR-ZERO,,
t07,c1,sp0,LC100,9.9,mg/L
t08,c2,sp1,BCF,2.0,L/kg
t09,cX,sp0,LC50,1.0,mg/L
t10,c0,spX,LC50,1.0,mg/L
t11,c3,sp2,NOEL,4.0,mg/L
t12,c1,sp1,LC50,2.0,mg/L
"""

TRIPLES_TSV = """\
c0\tmemberOfClass\tclassA
c1\tmemberOfClass\tclassA
c2\tmemberOfClass\tclassB
c3\tmemberOfClass\tclassB
c0\thasNote\t"a literal note"
"""

MAPPINGS_TSV = """\
c0\text:c0
c1\text:c1
"""


def write_corpus(directory, *, taxonomy=TAXONOMY_TSV,
                 fingerprints=FINGERPRINTS_TSV, effects=EFFECTS_CSV,
                 triples=TRIPLES_TSV, mappings=MAPPINGS_TSV) -> str:
    """Write a corpus into ``directory``; pass None to omit a file."""
    os.makedirs(directory, exist_ok=True)
    parts = {
        "taxonomy.tsv": taxonomy,
        "fingerprints.tsv": fingerprints,
        "effects.csv": effects,
        "triples.tsv": triples,
        "mappings.tsv": mappings,
    }
    for name, text in parts.items():
        if text is not None:
            with open(os.path.join(directory, name), "w",
                      encoding="utf-8") as fh:
                fh.write(text)
    return str(directory)


@pytest.fixture()
def tiny_corpus(tmp_path):
    """Directory with the small handcrafted five-file corpus."""
    return write_corpus(tmp_path / "corpus")


@pytest.fixture()
def minimal_corpus(tmp_path):
    """Smallest viable corpus: 2 species, 2 chemicals, 1 effect record."""
    return write_corpus(
        tmp_path / "minimal",
        taxonomy="spA\troot\nspB\troot\n",
        fingerprints="cA\tff\ncB\t0f\n",
        effects=(
            "test_id,chemical_id,species_id,endpoint,conc1_mean,conc1_unit\n"
            "t1,cA,spA,LC50,1.0,mg/L\n"
        ),
        triples=None,
        mappings=None,
    )


@pytest.fixture()
def tiny_experiment(tiny_corpus):
    """Fully assembled experiment over the tiny corpus (seed 0)."""
    from toxkg.pipeline import DatasetPaths, standard_experiment

    return standard_experiment(
        DatasetPaths.in_directory(tiny_corpus), seed=0,
        similarity_threshold=0.5)
