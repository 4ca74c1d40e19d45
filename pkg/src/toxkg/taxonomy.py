"""Species taxonomy and path-based taxon similarity.

A taxonomy is a rooted tree of string-labeled nodes given as child ->
parent pairs.  Similarity between two nodes counts the overlap of their
root paths:

    sim(i, j) = 1 / (|P(i)| + |P(j)| - 2 * |P(i) & P(j)| + 1)

where P(x) is the set of nodes on the path from x up to the root,
including both x and the root.  Identical nodes score 1; the score decays
toward 0 as the paths diverge, and is always positive because every pair
shares at least the root.
"""

from __future__ import annotations

import numpy as np

from ._matrix import LabeledMatrix
from .graph import IngestError


class AdjacencyMatrix(LabeledMatrix):
    """Pairwise taxon similarity over the taxonomy's leaf nodes."""


class Taxonomy:
    """Rooted tree with parent links, built from child -> parent pairs."""

    def __init__(self, pairs: list[tuple[str, str]]) -> None:
        if not pairs:
            raise IngestError("taxonomy has no edges")
        self.parent: dict[str, str] = {}
        nodes: dict[str, None] = {}  # insertion-ordered set
        for child, parent in pairs:
            child = child.strip()
            parent = parent.strip()
            if not child or not parent:
                raise IngestError("taxonomy node label is empty")
            if child in self.parent and self.parent[child] != parent:
                raise IngestError(f"node {child!r} has two parents")
            self.parent[child] = parent
            nodes.setdefault(child)
            nodes.setdefault(parent)
        self.nodes: list[str] = list(nodes)
        roots = [n for n in self.nodes if n not in self.parent]
        if len(roots) != 1:
            raise IngestError(
                f"expected exactly one root, found {len(roots)}: {roots[:5]}"
            )
        self.root: str = roots[0]
        self._depth_check()
        parented = set(self.parent.values())
        self.leaves: list[str] = sorted(n for n in self.nodes if n not in parented)

    def _depth_check(self) -> None:
        # Guards against parent cycles; every node must reach the root.
        for node in self.nodes:
            seen = {node}
            cur = node
            while cur != self.root:
                cur = self.parent[cur]
                if cur in seen:
                    raise IngestError(f"taxonomy contains a cycle through {cur!r}")
                seen.add(cur)

    @classmethod
    def from_tsv(cls, path: str) -> "Taxonomy":
        """Read child -> parent pairs from a two-column TSV file."""
        pairs: list[tuple[str, str]] = []
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
                pairs.append((fields[0], fields[1]))
        if not pairs:
            raise IngestError(f"{path}: no taxonomy edges found")
        try:
            return cls(pairs)
        except IngestError as exc:
            raise IngestError(f"{path}: {exc}") from None

    def path_to_root(self, node: str) -> list[str]:
        """Nodes from ``node`` up to the root, endpoints included."""
        if node not in set(self.nodes):
            raise KeyError(f"unknown taxon: {node!r}")
        path = [node]
        while path[-1] != self.root:
            path.append(self.parent[path[-1]])
        return path

    def taxon_similarity(self, a: str, b: str) -> float:
        pa = self.path_to_root(a)
        pb = self.path_to_root(b)
        shared = len(set(pa) & set(pb))
        return 1.0 / (len(pa) + len(pb) - 2 * shared + 1)

    def adjacency_matrix(self) -> AdjacencyMatrix:
        """Leaf-by-leaf similarity matrix, leaves in sorted label order.

        Computed via ancestor bitmaps: the path-overlap count of two
        leaves is the dot product of their ancestor indicator vectors.
        """
        leaves = self.leaves
        node_pos = {n: i for i, n in enumerate(self.nodes)}
        masks = np.zeros((len(leaves), len(self.nodes)), dtype=np.float64)
        depths = np.zeros(len(leaves), dtype=np.float64)
        for li, leaf in enumerate(leaves):
            path = self.path_to_root(leaf)
            depths[li] = len(path)
            for n in path:
                masks[li, node_pos[n]] = 1.0
        shared = masks @ masks.T
        values = 1.0 / (depths[:, None] + depths[None, :] - 2.0 * shared + 1.0)
        return AdjacencyMatrix(leaves, values)

    def subsumption_pairs(self) -> list[tuple[str, str]]:
        """(child, parent) pairs in file order, for graph construction."""
        return list(self.parent.items())
