"""In-memory triple store with dense integer interning.

Entities and predicates are interned separately into contiguous integer
ids.  Triples are kept in insertion order with set semantics: adding the
same (subject, predicate, object) twice stores it once.  Object values
written as double-quoted strings in TSV input are interned as ordinary
entities carrying a literal flag, so downstream consumers (e.g. embedding
training) can exclude them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class IngestError(ValueError):
    """Raised when an input file or label violates the expected format."""


@dataclass(frozen=True)
class Triple:
    """One (subject, predicate, object) statement, as interned ids."""

    subject: int
    predicate: int
    object: int


class GraphStore:
    """Ordered, duplicate-free collection of triples over interned ids."""

    def __init__(self) -> None:
        self._entity_ids: dict[str, int] = {}
        self._entity_labels: list[str] = []
        self._literal_flags: list[bool] = []
        self._predicate_ids: dict[str, int] = {}
        self._predicate_labels: list[str] = []
        self.predicate_counts: dict[int, int] = {}
        self.triples: list[Triple] = []
        self._triple_set: set[tuple[int, int, int]] = set()

    # -- interning ---------------------------------------------------------

    def intern(self, label: str, *, literal: bool = False) -> int:
        """Return the id for ``label``, assigning the next free id if new.

        A label that is empty after stripping surrounding whitespace is
        rejected.  Re-interning an existing label returns the original id;
        the literal flag is sticky once set.
        """
        key = label.strip()
        if not key:
            raise IngestError("entity label is empty")
        eid = self._entity_ids.get(key)
        if eid is None:
            eid = len(self._entity_labels)
            self._entity_ids[key] = eid
            self._entity_labels.append(key)
            self._literal_flags.append(literal)
        elif literal:
            self._literal_flags[eid] = True
        return eid

    def intern_predicate(self, label: str) -> int:
        key = label.strip()
        if not key:
            raise IngestError("predicate label is empty")
        pid = self._predicate_ids.get(key)
        if pid is None:
            pid = len(self._predicate_labels)
            self._predicate_ids[key] = pid
            self._predicate_labels.append(key)
        return pid

    # -- lookups -----------------------------------------------------------

    @property
    def entity_count(self) -> int:
        return len(self._entity_labels)

    @property
    def predicate_count(self) -> int:
        return len(self._predicate_labels)

    def entity_id(self, label: str) -> int:
        try:
            return self._entity_ids[label.strip()]
        except KeyError:
            raise KeyError(f"unknown entity: {label!r}") from None

    def entity_label(self, eid: int) -> str:
        return self._entity_labels[eid]

    def predicate_id(self, label: str) -> int:
        try:
            return self._predicate_ids[label.strip()]
        except KeyError:
            raise KeyError(f"unknown predicate: {label!r}") from None

    def predicate_label(self, pid: int) -> str:
        return self._predicate_labels[pid]

    def has_entity(self, label: str) -> bool:
        return label.strip() in self._entity_ids

    def is_literal(self, eid: int) -> bool:
        return self._literal_flags[eid]

    def entity_ids(self, *, include_literals: bool = True) -> list[int]:
        """All entity ids in interning order, optionally skipping literals."""
        if include_literals:
            return list(range(len(self._entity_labels)))
        return [e for e, lit in enumerate(self._literal_flags) if not lit]

    # -- triples -----------------------------------------------------------

    def add_triple(self, subject: str, predicate: str, obj: str,
                   *, object_literal: bool = False) -> Triple:
        """Intern all three labels and store the triple once."""
        s = self.intern(subject)
        p = self.intern_predicate(predicate)
        o = self.intern(obj, literal=object_literal)
        return self.add_triple_ids(s, p, o)

    def add_triple_ids(self, s: int, p: int, o: int) -> Triple:
        triple = Triple(s, p, o)
        key = (s, p, o)
        if key not in self._triple_set:
            self._triple_set.add(key)
            self.triples.append(triple)
            self.predicate_counts[p] = self.predicate_counts.get(p, 0) + 1
        return triple

    def has_triple(self, s: int, p: int, o: int) -> bool:
        return (s, p, o) in self._triple_set

    def __len__(self) -> int:
        return len(self.triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self.triples)

    def embedding_triples(self) -> list[Triple]:
        """Triples with no literal endpoint, in insertion order."""
        lit = self._literal_flags
        return [t for t in self.triples if not (lit[t.subject] or lit[t.object])]

    def predicate_distribution(self) -> dict[int, float]:
        """Relative frequency of each predicate among stored triples."""
        total = len(self.triples)
        if total == 0:
            raise ValueError("store holds no triples")
        return {p: c / total for p, c in self.predicate_counts.items()}

    # -- ingestion ---------------------------------------------------------

    def ingest_triples_tsv(self, path: str) -> int:
        """Load triples from a UTF-8 TSV file of three tab-separated fields.

        Lines that are empty or start with ``#`` are skipped.  A field
        wrapped in double quotes is stored as a literal entity (quotes
        stripped).  Returns the number of triples that were new.
        """
        added = 0
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.rstrip("\n").rstrip("\r")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                fields = line.split("\t")
                if len(fields) != 3:
                    raise IngestError(
                        f"{path}:{lineno}: expected 3 tab-separated fields, "
                        f"got {len(fields)}"
                    )
                try:
                    s_label, s_lit = _unquote(fields[0])
                    p_label, _ = _unquote(fields[1])
                    o_label, o_lit = _unquote(fields[2])
                    s = self.intern(s_label, literal=s_lit)
                    p = self.intern_predicate(p_label)
                    o = self.intern(o_label, literal=o_lit)
                except IngestError as exc:
                    raise IngestError(f"{path}:{lineno}: {exc}") from None
                before = len(self.triples)
                self.add_triple_ids(s, p, o)
                added += len(self.triples) - before
        return added


def _unquote(field: str) -> tuple[str, bool]:
    """Strip one layer of double quotes, reporting whether it was quoted."""
    text = field.strip()
    if len(text) >= 2 and text.startswith('"') and text.endswith('"'):
        return text[1:-1], True
    return text, False


def triples_by_labels(store: GraphStore,
                      triples: Iterable[Triple]) -> list[tuple[str, str, str]]:
    """Render interned triples back to their labels (mainly for reports)."""
    return [
        (
            store.entity_label(t.subject),
            store.predicate_label(t.predicate),
            store.entity_label(t.object),
        )
        for t in triples
    ]
