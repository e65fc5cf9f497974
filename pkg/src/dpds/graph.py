"""Graph representation, edge-list ingestion, density, and peeling state.

Node ids are dense 0..n-1 internally.  Ingested files with sparse ids are
remapped and the original labels retained for reporting.
"""

from __future__ import annotations

import logging
import re
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .rng import RngStream

log = logging.getLogger(__name__)

_HEADER_RE = re.compile(r"#\s*nodes\s+(\d+)\s+edges\s+(\d+)\s*$")


class NodeSet:
    """Immutable set of node ids that iterates in ascending order."""

    __slots__ = ("_ids", "_members")

    def __init__(self, ids: Iterable[int] = ()):
        self._ids = tuple(sorted({int(v) for v in ids}))
        self._members = frozenset(self._ids)

    @property
    def ids(self) -> tuple:
        return self._ids

    def __contains__(self, v) -> bool:
        return v in self._members

    def __iter__(self) -> Iterator[int]:
        return iter(self._ids)

    def __len__(self) -> int:
        return len(self._ids)

    def __eq__(self, other) -> bool:
        if isinstance(other, NodeSet):
            return self._ids == other._ids
        if isinstance(other, (set, frozenset)):
            return self._members == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._ids)

    def __repr__(self) -> str:
        return f"NodeSet({list(self._ids)!r})"


class Graph:
    """Undirected simple graph on vertices 0..n-1.

    Args:
        n: vertex count.
        edges: iterable of (u, v) pairs; duplicates collapse, orientation is
            ignored.  Self-loops are rejected here (parsing drops them before
            construction).
        original_ids: optional per-node labels from before id remapping.
    """

    __slots__ = ("n", "m", "edges", "original_ids", "_adj", "_deg")

    def __init__(self, n: int, edges: Iterable = (), original_ids=None):
        if n < 0:
            raise ValueError(f"n must be >= 0, got {n}")
        canon = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop ({u}, {v}) not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) outside 0..{n - 1}")
            canon.add((u, v) if u < v else (v, u))
        self.n = int(n)
        self.edges = frozenset(canon)
        self.m = len(canon)
        if original_ids is not None:
            original_ids = tuple(original_ids)
            if len(original_ids) != n:
                raise ValueError("original_ids length must equal n")
        self.original_ids = original_ids
        buckets = [[] for _ in range(n)]
        for u, v in canon:
            buckets[u].append(v)
            buckets[v].append(u)
        self._adj = [np.array(sorted(b), dtype=np.int64) for b in buckets]
        self._deg = np.array([len(b) for b in buckets], dtype=np.int64)

    def neighbors(self, v: int) -> np.ndarray:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return int(self._deg[v])

    def degrees(self) -> np.ndarray:
        return self._deg.copy()

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edges

    def edge_count_within(self, nodes) -> int:
        """Number of edges with both endpoints in ``nodes``."""
        ids = np.fromiter((int(v) for v in nodes), dtype=np.int64)
        if ids.size == 0:
            return 0
        mask = np.zeros(self.n, dtype=bool)
        mask[ids] = True
        total = 0
        for v in ids:
            nbrs = self._adj[v]
            if nbrs.size:
                total += int(mask[nbrs].sum())
        return total // 2

    def subgraph_density(self, nodes) -> float:
        size = len(nodes) if hasattr(nodes, "__len__") else None
        if size is None:
            nodes = list(nodes)
            size = len(nodes)
        if size == 0:
            return 0.0
        return self.edge_count_within(nodes) / size

    def full_set(self) -> NodeSet:
        return NodeSet(range(self.n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


class PeelState:
    """Live induced-subgraph view supporting O(deg) node removal.

    Tracks the current node set, each member's degree inside the set, and
    the induced edge count, so density queries are O(1) during peeling.
    """

    __slots__ = ("graph", "_alive", "_deg", "_size", "_edge_count")

    def __init__(self, graph: Graph, nodes: Optional[Iterable[int]] = None):
        self.graph = graph
        if nodes is None:
            self._alive = np.ones(graph.n, dtype=bool)
            self._deg = graph.degrees()
            self._size = graph.n
            self._edge_count = graph.m
        else:
            alive = np.zeros(graph.n, dtype=bool)
            for v in nodes:
                alive[v] = True
            self._alive = alive
            deg = np.zeros(graph.n, dtype=np.int64)
            for v in np.flatnonzero(alive):
                nbrs = graph.neighbors(int(v))
                deg[v] = int(alive[nbrs].sum()) if nbrs.size else 0
            self._deg = deg
            self._size = int(alive.sum())
            self._edge_count = int(deg.sum()) // 2

    @property
    def size(self) -> int:
        return self._size

    @property
    def edge_count(self) -> int:
        return self._edge_count

    def __contains__(self, v) -> bool:
        return bool(self._alive[v])

    def degree(self, v: int) -> int:
        if not self._alive[v]:
            raise ValueError(f"node {v} not in current set")
        return int(self._deg[v])

    def alive_ids(self) -> np.ndarray:
        return np.flatnonzero(self._alive)

    def alive_degrees(self) -> np.ndarray:
        """Degrees aligned with alive_ids()."""
        return self._deg[self._alive]

    def density(self) -> float:
        if self._size == 0:
            return 0.0
        return self._edge_count / self._size

    def remove_node(self, v: int) -> None:
        v = int(v)
        if not (0 <= v < self.graph.n) or not self._alive[v]:
            raise ValueError(f"node {v} not in current set")
        self._alive[v] = False
        self._size -= 1
        self._edge_count -= int(self._deg[v])
        nbrs = self.graph.neighbors(v)
        if nbrs.size:
            live = nbrs[self._alive[nbrs]]
            self._deg[live] -= 1
        self._deg[v] = 0

    def to_nodeset(self) -> NodeSet:
        return NodeSet(int(v) for v in self.alive_ids())


def density(target, graph: Optional[Graph] = None) -> float:
    """Density |E[S]| / |S| of a node set; 0 for the empty set.

    Accepts a PeelState, a Graph (whole-graph density), or a node collection
    paired with its graph.
    """
    if isinstance(target, PeelState):
        return target.density()
    if isinstance(target, Graph):
        return target.m / target.n if target.n else 0.0
    if graph is None:
        raise TypeError("a Graph is required to score a bare node set")
    return graph.subgraph_density(target)


def parse_edge_list(text, n_override: Optional[int] = None) -> Graph:
    """Build a Graph from whitespace-separated edge-list text.

    Lines starting with '#' are comments; a comment of the form
    ``# nodes N edges M`` fixes the node count (so isolated nodes survive a
    round trip).  Duplicate edges and self-loops are dropped.  When ids are
    not already dense 0..max, they are remapped in sorted order and the
    original labels kept on the result.

    Args:
        text: str, or an iterable of lines (e.g. an open file).
        n_override: explicit node count; wins over any header line.

    Raises:
        ValueError: on a malformed line (reported with its line number) or
            an id outside an explicit node count.
    """
    if isinstance(text, str):
        lines = text.splitlines()
    else:
        lines = text
    header_n = None
    raw_edges = []
    self_loops = 0
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if header_n is None:
                match = _HEADER_RE.match(stripped)
                if match:
                    header_n = int(match.group(1))
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ValueError(
                f"line {lineno}: expected two integers, got {stripped!r}"
            )
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValueError(
                f"line {lineno}: expected two integers, got {stripped!r}"
            ) from None
        if u < 0 or v < 0:
            raise ValueError(f"line {lineno}: negative node id in {stripped!r}")
        if u == v:
            self_loops += 1
            continue
        raw_edges.append((u, v) if u < v else (v, u))

    dedup = set(raw_edges)
    duplicates = len(raw_edges) - len(dedup)
    if self_loops or duplicates:
        log.debug(
            "parse dropped %d self-loop(s) and %d duplicate edge(s)",
            self_loops,
            duplicates,
        )

    n_fixed = n_override if n_override is not None else header_n
    ids = sorted({u for e in dedup for u in e})
    if n_fixed is not None:
        if ids and ids[-1] >= n_fixed:
            raise ValueError(
                f"node id {ids[-1]} outside declared node count {n_fixed}"
            )
        return Graph(n_fixed, dedup)
    if not ids:
        return Graph(0, ())
    if ids[-1] == len(ids) - 1:
        # Already dense 0..max.
        return Graph(ids[-1] + 1, dedup)
    remap = {orig: new for new, orig in enumerate(ids)}
    remapped = {(remap[u], remap[v]) for u, v in dedup}
    return Graph(len(ids), remapped, original_ids=ids)


def serialize_edge_list(graph: Graph) -> str:
    """Canonical writer: header line, then ``u v`` with u < v, ascending."""
    out = [f"# nodes {graph.n} edges {graph.m}"]
    out.extend(f"{u} {v}" for u, v in sorted(graph.edges))
    out.append("")
    return "\n".join(out)


def _er_edges(n: int, p: float, gen: np.random.Generator):
    edges = []
    for u in range(n - 1):
        draws = gen.random(n - u - 1)
        hits = np.flatnonzero(draws < p)
        edges.extend((u, int(u + 1 + w)) for w in hits)
    return edges


def generate_er(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p), deterministic for a fixed seed."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    gen = RngStream(seed).substream("generate-er", n, float(p)).generator()
    return Graph(n, _er_edges(n, p, gen))


def generate_planted(n: int, k: int, p: float, seed: int) -> Graph:
    """G(n, p) with a clique forced on nodes 0..k-1."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if not 0 <= k <= n:
        raise ValueError(f"k must be in [0, n], got k={k}, n={n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p}")
    gen = (
        RngStream(seed)
        .substream("generate-planted", n, k, float(p))
        .generator()
    )
    edges = set(_er_edges(n, p, gen))
    for u in range(k):
        for v in range(u + 1, k):
            edges.add((u, v))
    return Graph(n, edges)
