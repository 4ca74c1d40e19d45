"""Binary chemical fingerprints and Jaccard similarity.

Fingerprints are fixed-width bit sets read from TSV as hexadecimal
strings (width/4 hex digits per compound).  Similarity between two
compounds is the Jaccard index of their bit sets; a pair of empty
fingerprints scores 0.  Pairs above a strict threshold can be emitted as
``sameAsChemical`` triples for graph construction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._matrix import LabeledMatrix
from .graph import GraphStore, IngestError

SIMILARITY_PREDICATE = "sameAsChemical"
DEFAULT_WIDTH = 128


class SimilarityMatrix(LabeledMatrix):
    """Pairwise Jaccard similarity over a fingerprint collection."""


@dataclass(frozen=True)
class Fingerprint:
    """A compound id plus its bit vector (0/1 uint8 array)."""

    compound: str
    bits: np.ndarray

    def popcount(self) -> int:
        return int(self.bits.sum())


def fingerprint_from_hex(compound: str, hex_text: str, width: int) -> Fingerprint:
    """Decode a hex string into a ``width``-bit fingerprint.

    Bit k of the integer value (least significant bit = bit 0) becomes
    position k of the vector, so the textual encoding is lossless for any
    consistent producer.
    """
    text = hex_text.strip().lower()
    if width % 4 != 0 or width <= 0:
        raise ValueError(f"width must be a positive multiple of 4, got {width}")
    if len(text) != width // 4:
        raise IngestError(
            f"fingerprint for {compound!r} has {len(text)} hex digits, "
            f"expected {width // 4}"
        )
    try:
        value = int(text, 16)
    except ValueError:
        raise IngestError(f"fingerprint for {compound!r} is not hexadecimal") from None
    bits = np.zeros(width, dtype=np.uint8)
    for k in range(width):
        bits[k] = (value >> k) & 1
    return Fingerprint(compound, bits)


def fingerprint_to_hex(fp: Fingerprint) -> str:
    value = 0
    for k in np.flatnonzero(fp.bits):
        value |= 1 << int(k)
    return format(value, f"0{len(fp.bits) // 4}x")


def jaccard(a: Fingerprint, b: Fingerprint) -> float:
    """|intersection| / |union| of two bit sets; 0 when both are empty."""
    if len(a.bits) != len(b.bits):
        raise ValueError(
            f"fingerprint widths differ: {len(a.bits)} vs {len(b.bits)}"
        )
    inter = int(np.bitwise_and(a.bits, b.bits).sum())
    union = int(np.bitwise_or(a.bits, b.bits).sum())
    if union == 0:
        return 0.0
    return inter / union


class FingerprintSet:
    """All fingerprints of one collection, sharing a common width."""

    def __init__(self, fingerprints: list[Fingerprint]) -> None:
        if not fingerprints:
            raise IngestError("fingerprint collection is empty")
        widths = {len(fp.bits) for fp in fingerprints}
        if len(widths) != 1:
            raise IngestError(f"mixed fingerprint widths: {sorted(widths)}")
        self.width = widths.pop()
        by_compound: dict[str, Fingerprint] = {}
        for fp in fingerprints:
            if fp.compound in by_compound:
                raise IngestError(f"duplicate fingerprint for {fp.compound!r}")
            by_compound[fp.compound] = fp
        self.compounds: list[str] = sorted(by_compound)
        self._by_compound = by_compound

    def __len__(self) -> int:
        return len(self.compounds)

    def get(self, compound: str) -> Fingerprint:
        try:
            return self._by_compound[compound]
        except KeyError:
            raise KeyError(f"unknown compound: {compound!r}") from None

    def __contains__(self, compound: str) -> bool:
        return compound in self._by_compound

    @classmethod
    def from_tsv(cls, path: str, width: int | None = None) -> "FingerprintSet":
        """Read ``compound<TAB>hex`` lines; width defaults to the first row."""
        rows: list[tuple[str, str]] = []
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n").rstrip("\r")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 2:
                    raise IngestError(
                        f"{path}:{lineno}: expected 2 tab-separated fields, "
                        f"got {len(fields)}"
                    )
                rows.append((fields[0].strip(), fields[1]))
        if not rows:
            raise IngestError(f"{path}: no fingerprints found")
        if width is None:
            width = 4 * len(rows[0][1].strip())
        fingerprints = [
            fingerprint_from_hex(compound, hex_text, width)
            for compound, hex_text in rows
        ]
        return cls(fingerprints)

    def similarity_matrix(self) -> SimilarityMatrix:
        """Jaccard similarity for every compound pair, sorted by label."""
        bits = np.stack(
            [self._by_compound[c].bits for c in self.compounds]
        ).astype(np.float64)
        inter = bits @ bits.T
        pop = bits.sum(axis=1)
        union = pop[:, None] + pop[None, :] - inter
        with np.errstate(invalid="ignore", divide="ignore"):
            values = np.where(union > 0, inter / np.maximum(union, 1e-300), 0.0)
        return SimilarityMatrix(self.compounds, values)


def emit_similarity_triples(store: GraphStore, matrix: SimilarityMatrix,
                            threshold: float) -> int:
    """Add one ``sameAsChemical`` triple per unordered pair above threshold.

    The comparison is strict (similarity must exceed the threshold) and
    each qualifying pair is written once, lower index as subject.
    Returns the number of triples added.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must lie in [0, 1], got {threshold}")
    n = len(matrix.index)
    added = 0
    before = len(store)
    for i in range(n):
        for j in range(i + 1, n):
            if matrix.values[i, j] > threshold:
                store.add_triple(
                    matrix.index[i], SIMILARITY_PREDICATE, matrix.index[j]
                )
    added = len(store) - before
    return added


def similarity_order(matrix: SimilarityMatrix) -> list[int]:
    """Compound indexes sorted by nearest-neighbor similarity, descending.

    Each compound is ranked by its similarity to its most similar other
    compound, so walking the returned order visits compounds whose best
    match deteriorates monotonically.  Ties keep the lower original index
    first.
    """
    n = len(matrix.index)
    if n < 2:
        return list(range(n))
    values = matrix.values.copy()
    np.fill_diagonal(values, -np.inf)
    best = values.max(axis=1)
    return sorted(range(n), key=lambda i: (-best[i], i))
