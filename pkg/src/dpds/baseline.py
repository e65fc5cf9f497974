"""Non-private densest-subgraph routines.

``charikar_peel`` is the classic greedy: repeatedly delete a minimum-degree
node and keep the densest prefix, a 1/2-approximation.  It is both the
utility baseline the private algorithms are scored against and the scale
test for the peeling machinery.  ``brute_force_densest`` is the exact oracle
for tiny graphs.
"""

from __future__ import annotations

import heapq
from typing import Tuple

from .graph import Graph, NodeSet, PeelState
from .results import PeelRemoval, PeelTrace

_BRUTE_FORCE_MAX_N = 24


def charikar_peel(graph: Graph) -> Tuple[NodeSet, float, PeelTrace]:
    """Greedy min-degree peeling; returns the densest prefix set.

    Ties on degree go to the smallest node id; ties on density go to the
    earliest (largest) prefix.  Runs in O((n + m) log n).
    """
    n = graph.n
    if n == 0:
        return NodeSet(), 0.0, PeelTrace((), 0)
    state = PeelState(graph)
    heap = [(graph.degree(v), v) for v in range(n)]
    heapq.heapify(heap)
    removals = []
    removed_order = []
    best_index = 0
    best_density = state.density()
    for t in range(n):
        while True:
            deg, v = heapq.heappop(heap)
            if v in state and state.degree(v) == deg:
                break
        removals.append(PeelRemoval(v, state.size, state.density()))
        nbrs = graph.neighbors(v)
        state.remove_node(v)
        removed_order.append(v)
        for u in nbrs:
            u = int(u)
            if u in state:
                heapq.heappush(heap, (state.degree(u), u))
        if t + 1 < n:
            d = state.density()
            if d > best_density:
                best_density = d
                best_index = t + 1
    trace = PeelTrace(tuple(removals), best_index)
    kept = set(range(n)) - set(removed_order[:best_index])
    return NodeSet(kept), best_density, trace


def brute_force_densest(graph: Graph) -> Tuple[NodeSet, float]:
    """Exact densest subgraph by subset enumeration.

    Ties go to the smaller set, then lexicographically smaller sorted id
    tuple.  Comparisons are exact (integer cross-multiplication), so float
    rounding cannot flip a tie.

    Raises:
        ValueError: if graph.n exceeds the enumeration guard (24).
    """
    n = graph.n
    if n > _BRUTE_FORCE_MAX_N:
        raise ValueError(f"n={n} exceeds enumeration bound {_BRUTE_FORCE_MAX_N}")
    if n == 0:
        return NodeSet(), 0.0
    adj_mask = [0] * n
    for u, v in graph.edges:
        adj_mask[u] |= 1 << v
        adj_mask[v] |= 1 << u
    size = 1 << n
    edge_counts = [0] * size
    best_mask, best_edges, best_size = 1, 0, 1
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        rest = mask ^ (1 << low)
        count = edge_counts[rest] + (adj_mask[low] & rest).bit_count()
        edge_counts[mask] = count
        msize = mask.bit_count()
        # count/msize > best_edges/best_size, exactly
        diff = count * best_size - best_edges * msize
        if diff > 0:
            best_mask, best_edges, best_size = mask, count, msize
        elif diff == 0:
            if msize < best_size:
                best_mask, best_edges, best_size = mask, count, msize
            elif msize == best_size and _mask_ids(mask) < _mask_ids(best_mask):
                best_mask, best_edges = mask, count
    ids = _mask_ids(best_mask)
    return NodeSet(ids), best_edges / best_size


def _mask_ids(mask: int) -> tuple:
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)
