"""Sequential private peeling.

Each step removes one node drawn with probability proportional to
exp(-eps_prime * degree): low-degree nodes go first in expectation, like the
greedy baseline, but the randomization bounds how much any single edge can
shift the removal order's distribution.  A final softmax selection over all
n prefix sets picks the output.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

from .graph import Graph, NodeSet, PeelState
from .mechanisms import exp_select
from .results import DPResult, PeelRemoval, PeelTrace, PrivacyParams
from .rng import RngStream

STEP_LABEL = "seq-step"
SELECT_LABEL = "seq-select"


@dataclass(frozen=True)
class SeqConstants:
    """Removal coefficient for the sequential algorithm."""

    eps_prime: float

    @classmethod
    def from_params(cls, params: PrivacyParams) -> "SeqConstants":
        return cls(params.epsilon / (4.0 * math.log(math.e / params.delta)))


def run_seq(
    graph: Graph,
    params: PrivacyParams,
    rng: RngStream,
    constants: Optional[SeqConstants] = None,
    keep_trace: bool = False,
) -> DPResult:
    """Run the sequential mechanism once.

    Args:
        graph: input graph.
        params: privacy budget; the derived removal coefficient is
            eps / (4 ln(e/delta)) and the final selection uses eps/2.
        rng: stream driving the run; a fixed stream gives a bit-identical
            result.
        constants: override for the derived coefficient (used by the
            privacy audit's deliberately broken variant).
        keep_trace: attach the full removal trace to the result.

    Returns:
        DPResult with exactly n removal iterations and n candidate sets.
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
    consts = constants if constants is not None else SeqConstants.from_params(params)
    state = PeelState(graph)
    densities = []
    removal_order = []
    removals = [] if keep_trace else None
    for t in range(n):
        densities.append(state.density())
        ids = state.alive_ids()
        degs = state.alive_degrees()
        pick = exp_select(-degs, consts.eps_prime, rng.substream(STEP_LABEL, t))
        victim = int(ids[pick])
        if removals is not None:
            removals.append(PeelRemoval(victim, state.size, state.density()))
        state.remove_node(victim)
        removal_order.append(victim)
    best = exp_select(densities, params.epsilon / 2.0, rng.substream(SELECT_LABEL))
    selected = NodeSet(removal_order[best:])
    return DPResult(
        selected=selected,
        density=densities[best],
        trace_len=n,
        iterations=n,
        seed=rng.token(),
        elapsed=time.perf_counter() - start,
        peel=PeelTrace(tuple(removals), best) if removals is not None else None,
    )
