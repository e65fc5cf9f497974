"""Empirical edge-privacy audit.

Runs a mechanism many times on a tiny graph G and on a neighbor G' (one
edge toggled), estimates the probability of every output set, and checks
the privacy inequality Pr[M(G)=S] <= e^eps * Pr[M(G')=S] + delta in both
directions with a 3-sigma binomial allowance.  This is a necessary-condition
smoke test with statistical power, not a proof: a sound mechanism must pass,
and a miscalibrated one (see :func:`broken_constants`) must fail.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from typing import Callable, Optional, Tuple

import numpy as np

from .graph import Graph
from .mapreduce import run_mr_dense
from .par import DEFAULT_MAX_ITERS, ParConstants, run_par
from .phases import PhaseConstants, run_phase
from .results import DPResult, PrivacyParams
from .rng import RngStream
from .seq import SeqConstants, run_seq

MAX_AUDIT_NODES = 5
MIN_AUDIT_SAMPLES = 10**5

ALGORITHMS = ("seq", "par", "phase", "mr")

Runner = Callable[[Graph, PrivacyParams, RngStream], DPResult]


def mechanism_runner(
    algorithm: str,
    constants=None,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> Runner:
    """A picklable (graph, params, rng) -> DPResult callable."""
    if algorithm == "seq":
        return partial(run_seq, constants=constants)
    if algorithm == "par":
        return partial(run_par, max_iters=max_iters, constants=constants)
    if algorithm == "phase":
        return partial(run_phase, constants=constants)
    if algorithm == "mr":
        return partial(run_mr_dense, constants=constants)
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def broken_constants(algorithm: str, params: PrivacyParams, factor: float = 10.0):
    """Derived constants with the removal coefficient scaled by ``factor``.

    A factor well above 1 makes removals too deterministic for the claimed
    budget; the audit must catch the resulting violation.
    """
    if algorithm == "seq":
        return SeqConstants(SeqConstants.from_params(params).eps_prime * factor)
    if algorithm == "par":
        return ParConstants.from_eps_prime(
            ParConstants.from_params(params).eps_prime * factor
        )
    if algorithm in ("phase", "mr"):
        return PhaseConstants.from_eps_prime(
            PhaseConstants.from_params(params).eps_prime * factor
        )
    raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")


def toggle_edge(graph: Graph, edge: Tuple[int, int]) -> Graph:
    """The neighboring graph: ``edge`` removed if present, added if not."""
    u, v = int(edge[0]), int(edge[1])
    if u == v or not (0 <= u < graph.n and 0 <= v < graph.n):
        raise ValueError(f"edge {edge} invalid for a graph on {graph.n} nodes")
    key = (u, v) if u < v else (v, u)
    if key in graph.edges:
        return Graph(graph.n, graph.edges - {key})
    return Graph(graph.n, set(graph.edges) | {key})


def _count_outcomes(
    run: Runner,
    graph: Graph,
    params: PrivacyParams,
    stream: RngStream,
    start: int,
    stop: int,
) -> np.ndarray:
    counts = np.zeros(1 << graph.n, dtype=np.int64)
    for i in range(start, stop):
        result = run(graph, params, stream.substream(i))
        mask = 0
        for v in result.selected:
            mask |= 1 << v
        counts[mask] += 1
    return counts


def _collect(
    run: Runner,
    graph: Graph,
    params: PrivacyParams,
    stream: RngStream,
    samples: int,
    jobs: int,
) -> np.ndarray:
    if jobs <= 1:
        return _count_outcomes(run, graph, params, stream, 0, samples)
    bounds = np.linspace(0, samples, jobs + 1, dtype=int)
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = pool.map(
            _count_outcomes,
            [run] * jobs,
            [graph] * jobs,
            [params] * jobs,
            [stream] * jobs,
            bounds[:-1],
            bounds[1:],
        )
        return sum(parts)


def _mask_ids(mask: int, n: int) -> list:
    return [v for v in range(n) if mask & (1 << v)]


def audit_privacy(
    run: Runner,
    graph: Graph,
    edge: Tuple[int, int],
    params: PrivacyParams,
    samples: int,
    rng: RngStream,
    jobs: int = 1,
) -> dict:
    """Estimate privacy-inequality margins over all output sets.

    For each of the 2^n possible outputs S and both directions between the
    graph pair, the adjusted margin is

        p̂_1(S) - e^eps * p̂_2(S) - delta - 3*sqrt(Var̂)

    where Var̂ combines both binomial variances.  A sound (eps, delta)
    mechanism keeps every adjusted margin at or below 0 up to the 3-sigma
    allowance.

    Args:
        run: mechanism under audit.
        graph: base graph, at most 5 nodes (the full output space is
            enumerated).
        edge: the edge toggled to form the neighboring graph.
        params: budget the mechanism claims.
        samples: runs per graph, at least 1e5.
        rng: stream; trial i uses substream ("audit", side, i).
        jobs: worker processes for the Monte Carlo loop.

    Returns:
        JSON-ready report with per-event rows, the summary
        ``max_adjusted_margin``, and ``pass``.
    """
    if graph.n > MAX_AUDIT_NODES:
        raise ValueError(
            f"graph has {graph.n} nodes; audit enumerates outputs only up to "
            f"{MAX_AUDIT_NODES}"
        )
    if samples < MIN_AUDIT_SAMPLES:
        raise ValueError(f"samples must be >= {MIN_AUDIT_SAMPLES}, got {samples}")
    start = time.perf_counter()
    neighbor = toggle_edge(graph, edge)
    counts_base = _collect(
        run, graph, params, rng.substream("audit", "base"), samples, jobs
    )
    counts_nbr = _collect(
        run, neighbor, params, rng.substream("audit", "neighbor"), samples, jobs
    )
    p_base = counts_base / samples
    p_nbr = counts_nbr / samples
    e_eps = math.exp(params.epsilon)
    events = []
    max_adjusted = -math.inf
    for mask in range(1 << graph.n):
        row = {"set": _mask_ids(mask, graph.n)}
        for tag, p1, p2 in (
            ("forward", p_base[mask], p_nbr[mask]),
            ("reverse", p_nbr[mask], p_base[mask]),
        ):
            margin = float(p1 - e_eps * p2 - params.delta)
            var = float(p1 * (1 - p1) + e_eps**2 * p2 * (1 - p2)) / samples
            adjusted = margin - 3.0 * math.sqrt(var)
            row[f"p1_{tag}"] = float(p1)
            row[f"p2_{tag}"] = float(p2)
            row[f"margin_{tag}"] = margin
            row[f"adjusted_margin_{tag}"] = adjusted
            max_adjusted = max(max_adjusted, adjusted)
        events.append(row)
    return {
        "epsilon": params.epsilon,
        "delta": params.delta,
        "samples": samples,
        "nodes": graph.n,
        "edge": [int(edge[0]), int(edge[1])],
        "edge_present_in_base": bool(
            ((min(edge), max(edge))) in graph.edges
        ),
        "events": events,
        "max_adjusted_margin": max_adjusted,
        "pass": max_adjusted <= 0.0,
        "elapsed_seconds": time.perf_counter() - start,
    }
