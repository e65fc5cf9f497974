"""Parallel private peeling.

Every iteration, each surviving node is removed independently with
probability exp(-eps_prime * (degree + c)), degrees frozen at the start of
the iteration.  All per-node draws use substreams keyed by (iteration, node),
so the outcome does not depend on any processing order.  The number of
iterations is data-dependent and can in principle blow up, hence the
mandatory cap and the ``truncated`` flag.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

from .graph import Graph, NodeSet, PeelState
from .mechanisms import exp_select
from .results import DPResult, PrivacyParams
from .rng import RngStream

ITER_LABEL = "par-iter"
SELECT_LABEL = "par-select"

DEFAULT_MAX_ITERS = 10**6


@dataclass(frozen=True)
class ParConstants:
    """Removal coefficient and degree offset for the parallel algorithm."""

    eps_prime: float
    c: float

    @classmethod
    def from_params(cls, params: PrivacyParams) -> "ParConstants":
        eps_prime = (
            (1.0 - 1.0 / math.e)
            / (8.0 * math.log(math.e / params.delta))
            * params.epsilon
        )
        return cls(eps_prime, 1.0 / eps_prime + 1.0)

    @classmethod
    def from_eps_prime(cls, eps_prime: float) -> "ParConstants":
        return cls(eps_prime, 1.0 / eps_prime + 1.0)


def run_par(
    graph: Graph,
    params: PrivacyParams,
    rng: RngStream,
    max_iters: int = DEFAULT_MAX_ITERS,
    constants: Optional[ParConstants] = None,
) -> DPResult:
    """Run the parallel mechanism once.

    Candidate sets are the distinct members of S_0 ⊇ S_1 ⊇ ... (the empty
    terminal set included); the final softmax over their densities uses
    coefficient eps/2.

    Args:
        max_iters: safety cap; if the set is still non-empty after this many
            iterations the result is returned over the candidates seen so
            far and flagged ``truncated`` (such a run is not the intended
            mechanism and carries no privacy guarantee).
        constants: override for the derived constants (used by the privacy
            audit's deliberately broken variant).

    Returns:
        DPResult; ``iterations`` counts executed rounds.
    """
    if max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {max_iters}")
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
    consts = constants if constants is not None else ParConstants.from_params(params)
    state = PeelState(graph)
    candidates = [state.to_nodeset()]
    cand_densities = [state.density()]
    iterations = 0
    truncated = False
    while state.size > 0:
        if iterations >= max_iters:
            truncated = True
            break
        iter_stream = rng.substream(ITER_LABEL, iterations)
        ids = state.alive_ids()
        degs = state.alive_degrees()
        # Decisions against start-of-iteration degrees only.
        removed = [
            int(v)
            for v, d in zip(ids, degs)
            if iter_stream.substream(int(v)).uniform()
            < math.exp(-consts.eps_prime * (float(d) + consts.c))
        ]
        for v in removed:
            state.remove_node(v)
        iterations += 1
        if state.size < len(candidates[-1]):
            candidates.append(state.to_nodeset())
            cand_densities.append(state.density())
    best = exp_select(
        cand_densities, params.epsilon / 2.0, rng.substream(SELECT_LABEL)
    )
    return DPResult(
        selected=candidates[best],
        density=cand_densities[best],
        trace_len=len(candidates),
        iterations=iterations,
        truncated=truncated,
        seed=rng.token(),
        elapsed=time.perf_counter() - start,
        candidates=tuple(candidates),
    )
