"""Immutable simple undirected graphs with dense integer node ids.

The graph is the shared substrate of the whole package: generators build
graphs, the opinion dynamics iterates over their adjacency, and the split
analysis removes edges and inspects components.  A :class:`Graph` is frozen
after construction so it can be shared freely across parallel workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import IO, Iterable

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph


class EdgeListParseError(ValueError):
    """Malformed edge-list input; carries the 1-based line number."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on nodes ``0 .. node_count-1``.

    ``edges`` is an ``(m, 2)`` int64 array with each row ``(i, j)``, ``i < j``,
    sorted lexicographically: this canonical order doubles as the stable edge
    key used by per-edge difference tables.  ``block_labels`` optionally tags
    each node with a group id (set by the partition generators).

    Instances are immutable; the constructor rejects self-loops, parallel
    edges, and out-of-range endpoints.  Use :func:`from_pairs` to build a
    graph from raw, possibly dirty pair data.
    """

    node_count: int
    edges: np.ndarray
    block_labels: np.ndarray | None = None
    source_ids: tuple | None = None  # dense id -> label in the ingested file
    dropped: int = 0  # self-loops / duplicates discarded on ingest

    def __post_init__(self):
        if self.node_count < 0:
            raise ValueError("node_count must be non-negative")
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size:
            if e.min() < 0 or e.max() >= self.node_count:
                raise ValueError("edge endpoint out of range")
            if (e[:, 0] >= e[:, 1]).any():
                raise ValueError("edges must satisfy i < j (no self-loops)")
            order = np.lexsort((e[:, 1], e[:, 0]))
            e = e[order]
            if len(e) > 1 and (np.diff(e, axis=0) == 0).all(axis=1).any():
                raise ValueError("parallel edge in canonical edge array")
        e.flags.writeable = False
        object.__setattr__(self, "edges", e)
        if self.block_labels is not None:
            b = np.asarray(self.block_labels, dtype=np.int64)
            if b.shape != (self.node_count,):
                raise ValueError("block_labels length must equal node_count")
            b.flags.writeable = False
            object.__setattr__(self, "block_labels", b)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        """Symmetric 0/1 adjacency matrix (CSR, int64)."""
        m = len(self.edges)
        rows = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        cols = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        data = np.ones(2 * m, dtype=np.int64)
        a = sparse.csr_matrix(
            (data, (rows, cols)), shape=(self.node_count, self.node_count)
        )
        a.sort_indices()
        return a

    @cached_property
    def degrees(self) -> np.ndarray:
        d = np.zeros(self.node_count, dtype=np.int64)
        if len(self.edges):
            np.add.at(d, self.edges[:, 0], 1)
            np.add.at(d, self.edges[:, 1], 1)
        d.flags.writeable = False
        return d

    def neighbors(self, i: int) -> np.ndarray:
        a = self.adjacency
        return a.indices[a.indptr[i] : a.indptr[i + 1]]

    @cached_property
    def _edge_set(self) -> frozenset:
        return frozenset(map(tuple, self.edges.tolist()))

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return False
        key = (i, j) if i < j else (j, i)
        return key in self._edge_set


def from_pairs(
    node_count: int,
    pairs: Iterable | np.ndarray,
    block_labels=None,
    source_ids=None,
) -> Graph:
    """Build a :class:`Graph` from raw node pairs.

    Self-loops are dropped and duplicate pairs (in either orientation)
    collapsed; the number of discarded entries is recorded on the result's
    ``dropped`` field.
    """
    p = np.asarray(list(pairs) if not isinstance(pairs, np.ndarray) else pairs)
    p = p.reshape(-1, 2).astype(np.int64)
    total = len(p)
    p = p[p[:, 0] != p[:, 1]]
    lo = np.minimum(p[:, 0], p[:, 1])
    hi = np.maximum(p[:, 0], p[:, 1])
    uniq = np.unique(np.stack([lo, hi], axis=1), axis=0) if len(p) else p
    return Graph(
        node_count=node_count,
        edges=uniq,
        block_labels=block_labels,
        source_ids=source_ids,
        dropped=total - len(uniq),
    )


def load_edge_list(stream: IO[str] | str) -> Graph:
    """Parse whitespace-separated integer pairs, one edge per line.

    Lines starting with ``#`` are comments; blank lines are ignored.  Ids
    that already form a dense 0-based range are kept verbatim (this makes
    serialize-then-reload an exact identity on the edge set); anything else
    is remapped to dense 0-based ids in first-appearance order.  The dense-id
    to original-label mapping is kept on ``source_ids``.  Self-loops and
    duplicate edges are dropped; their count is recorded and reported as a
    warning.

    Raises :class:`EdgeListParseError` on a malformed line and on empty
    input (a file with no edges).
    """
    if isinstance(stream, str):
        lines = stream.splitlines()
    else:
        lines = stream.read().splitlines()
    id_of: dict[int, int] = {}
    raw_pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text or text.startswith("#"):
            continue
        tokens = text.split()
        if len(tokens) != 2:
            raise EdgeListParseError(
                f"expected two integers, got {len(tokens)} tokens", lineno
            )
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListParseError(f"non-integer token in {tokens!r}", lineno)
        if u < 0 or v < 0:
            raise EdgeListParseError("negative node id", lineno)
        for lab in (u, v):
            if lab not in id_of:
                id_of[lab] = len(id_of)
        raw_pairs.append((u, v))
    if not raw_pairs:
        raise EdgeListParseError("empty edge list")
    if set(id_of) == set(range(len(id_of))):
        pairs = raw_pairs
        source_ids = tuple(range(len(id_of)))
    else:
        pairs = [(id_of[u], id_of[v]) for u, v in raw_pairs]
        source_ids = tuple(id_of.keys())
    g = from_pairs(len(id_of), pairs, source_ids=source_ids)
    if g.dropped:
        import warnings

        warnings.warn(
            f"edge list: dropped {g.dropped} duplicate/self-loop entries",
            stacklevel=2,
        )
    return g


def write_edge_list(g: Graph, stream: IO[str]):
    """Serialize as one ``i j`` line per edge (dense ids, canonical order)."""
    for i, j in g.edges.tolist():
        stream.write(f"{i} {j}\n")


def connected_components(g: Graph) -> list[np.ndarray]:
    """Partition of node ids into connected components.

    Components are ordered by their smallest member; each is a sorted array.
    Isolated nodes form singleton components.
    """
    if g.node_count == 0:
        return []
    n_comp, labels = csgraph.connected_components(g.adjacency, directed=False)
    comps = [np.flatnonzero(labels == c) for c in range(n_comp)]
    comps.sort(key=lambda c: int(c[0]))
    return comps


def remove_edges(g: Graph, victims: Iterable[tuple[int, int]]) -> Graph:
    """New graph with ``victims`` removed; node count and labels unchanged.

    Raises ``ValueError`` if a victim edge is not present in the graph.
    """
    doomed = set()
    for u, v in victims:
        key = (int(u), int(v)) if u < v else (int(v), int(u))
        if key not in g._edge_set:
            raise ValueError(f"edge {key} not in graph")
        doomed.add(key)
    keep = np.array(
        [tuple(e) not in doomed for e in g.edges.tolist()], dtype=bool
    )
    return Graph(
        node_count=g.node_count,
        edges=g.edges[keep],
        block_labels=g.block_labels,
        source_ids=g.source_ids,
    )
