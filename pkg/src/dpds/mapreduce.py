"""Simulated map-reduce execution of the phase-based algorithm.

The engine is a deterministic in-process stand-in for a map-reduce runtime:
reducers see their group's values sorted, groups are processed in key order,
and every subphase's output is canonically sorted, so shuffling the input
record order can never change a result.

The job expresses one phase as three reduce subphases and one map:

  reduce 1   rebuilds each node's neighbor list from last phase's records
             and drops nodes marked by a self-edge;
  reduce 2   assembles the surviving nodes into the candidate set;
  reduce 3   sums degrees, giving the induced edge count;
  (driver)   turns the edge count into the noisy density and time budget;
  map        samples each node's removal clock against the budget, emitting
             either a self-edge (removed) or its incident edges plus a
             presence marker (kept).

Presence markers are what keep isolated nodes alive between phases; every
record is re-emitted each phase, so phases are stateless.  All randomness
uses the same (phase, node)-keyed substreams as the in-process algorithm,
making the two implementations bit-equivalent.
"""

from __future__ import annotations

import time
from typing import Callable, Iterable, List, Optional, Tuple

from .graph import Graph, NodeSet
from .phases import (
    CLOCK_LABEL,
    NOISE_LABEL,
    PhaseConstants,
    clock_rings,
    log_budget,
    noisy_density,
    removal_log_p,
    select_candidate,
    small_set,
)
from .results import DPResult, PhaseRecord, PrivacyParams
from .rng import RngStream

KEY_SET = -1
KEY_DENSITY = -2
PRESENT = -1

Record = Tuple[int, object]
TraceHook = Callable[[int, str, List[Record]], None]


def _record_key(record: Record):
    key, value = record
    if isinstance(value, tuple):
        return (key, 1, value)
    return (key, 0, (value,))


def mr_map(records: Iterable[Record], mapper) -> List[Record]:
    """Apply ``mapper(record) -> records`` to each record; canonical order."""
    out: List[Record] = []
    for record in records:
        out.extend(mapper(record))
    out.sort(key=_record_key)
    return out


def mr_reduce_by_key(records: Iterable[Record], reducer) -> List[Record]:
    """Group by key, feed ``reducer(key, sorted_values)``; canonical order."""
    groups = {}
    for key, value in records:
        groups.setdefault(key, []).append(value)
    out: List[Record] = []
    for key in sorted(groups):
        out.extend(reducer(key, sorted(groups[key])))
    out.sort(key=_record_key)
    return out


def _reduce_rebuild(key: int, values: list) -> List[Record]:
    # A self-edge in the group means the node was sampled out last phase.
    if key in values:
        return []
    neighbors = tuple(v for v in values if v >= 0)
    return [
        (key, neighbors),
        (KEY_SET, key),
        (KEY_DENSITY, len(neighbors)),
    ]


def _reduce_assemble(key: int, values: list) -> List[Record]:
    if key == KEY_SET:
        return [(KEY_SET, tuple(values))]
    return [(key, v) for v in values]


def _reduce_sum_degrees(key: int, values: list) -> List[Record]:
    if key == KEY_DENSITY:
        return [(KEY_DENSITY, sum(values))]
    return [(key, v) for v in values]


def _initial_records(graph: Graph) -> List[Record]:
    records: List[Record] = [(u, PRESENT) for u in range(graph.n)]
    for u, v in graph.edges:
        records.append((u, v))
        records.append((v, u))
    records.sort(key=_record_key)
    return records


def run_mr_dense(
    graph: Graph,
    params: PrivacyParams,
    rng: RngStream,
    constants: Optional[PhaseConstants] = None,
    trace_hook: Optional[TraceHook] = None,
) -> DPResult:
    """Run the phase-based mechanism through the map-reduce pipeline.

    With the same (graph, params, rng seed), the result is identical to the
    in-process phase algorithm's: same candidate sets, same phase records,
    same selection.

    Args:
        trace_hook: optional callable (phase, subphase_name, records)
            invoked after every subphase, for debugging dumps.
    """
    start = time.perf_counter()
    n = graph.n
    if n == 0:
        return DPResult(
            selected=NodeSet(),
            density=0.0,
            trace_len=0,
            iterations=0,
            seed=rng.token(),
            elapsed=time.perf_counter() - start,
        )
    consts = constants if constants is not None else PhaseConstants.from_params(params)
    stream = _initial_records(graph)
    candidates: List[NodeSet] = []
    densities: List[float] = []
    records: List[PhaseRecord] = []
    phases = 0
    while True:
        stage1 = mr_reduce_by_key(stream, _reduce_rebuild)
        stage2 = mr_reduce_by_key(stage1, _reduce_assemble)
        stage3 = mr_reduce_by_key(stage2, _reduce_sum_degrees)
        if trace_hook is not None:
            trace_hook(phases, "reduce-rebuild", stage1)
            trace_hook(phases, "reduce-assemble", stage2)
            trace_hook(phases, "reduce-sum-degrees", stage3)
        members: tuple = ()
        degree_sum = 0
        adjacency: List[Record] = []
        for key, value in stage3:
            if key == KEY_SET:
                members = value
            elif key == KEY_DENSITY:
                degree_sum = value
            else:
                adjacency.append((key, value))
        size = len(members)
        rho = (degree_sum // 2) / size if size else 0.0
        candidates.append(NodeSet(members))
        densities.append(rho)
        if size == 0:
            break
        if small_set(size, n):
            records.append(PhaseRecord(phases, size, rho, None, None, size))
            phases += 1
            candidates.append(NodeSet())
            densities.append(0.0)
            break
        rho_hat = noisy_density(
            rho, size, n, params.epsilon, rng.substream(NOISE_LABEL, phases)
        )
        budget = log_budget(rho_hat, consts, n)
        phase_index = phases

        def sample_node(record: Record) -> List[Record]:
            u, neighbors = record
            degree = len(neighbors)
            removed = clock_rings(
                degree, consts, budget, rng.substream(CLOCK_LABEL, phase_index, u)
            )
            if removed:
                return [(u, u)]
            return [(u, PRESENT)] + [(v, u) for v in neighbors]

        stream = mr_map(adjacency, sample_node)
        if trace_hook is not None:
            trace_hook(phases, "map-sample", stream)
        removed_count = sum(1 for key, value in stream if key == value)
        records.append(
            PhaseRecord(phases, size, rho, rho_hat, budget, removed_count)
        )
        phases += 1
    selected, sel_density, pool_size = select_candidate(
        candidates, densities, params.epsilon, rng
    )
    return DPResult(
        selected=selected,
        density=sel_density,
        trace_len=pool_size,
        iterations=phases,
        phases=phases,
        seed=rng.token(),
        elapsed=time.perf_counter() - start,
        candidates=tuple(candidates),
        records=tuple(records),
    )
