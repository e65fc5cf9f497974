"""Phase-based private peeling.

Work proceeds in phases.  A phase freezes the current degrees, publishes a
noisy density estimate, turns it into a time budget, and removes every node
whose geometric "removal clock" rings within the budget.  High-degree nodes
have slow clocks, so each phase shaves off roughly the sparser half of the
set, giving O(log n) phases with high probability.  Once the set is down to
ln(n) nodes the remainder is dropped in one final step.

All noise and clock draws go through substreams keyed by phase (and node),
and the numeric helpers here are shared with the map-reduce port, which must
reproduce this algorithm draw for draw.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .graph import Graph, NodeSet, PeelState
from .mechanisms import Geometric, exp_select, laplace
from .results import DPResult, PhaseRecord, PrivacyParams
from .rng import RngStream

NOISE_LABEL = "phase-noise"
CLOCK_LABEL = "phase-clock"
SELECT_LABEL = "phase-select"


@dataclass(frozen=True)
class PhaseConstants:
    """Clock coefficient and degree offset for the phase-based algorithm."""

    eps_prime: float
    c: float

    @classmethod
    def from_params(cls, params: PrivacyParams) -> "PhaseConstants":
        eps_prime = (
            (1.0 - 1.0 / math.e)
            / (24.0 * math.log(4.0 / params.delta))
            * params.epsilon
        )
        return cls(eps_prime, 1.0 / eps_prime + 1.0)

    @classmethod
    def from_eps_prime(cls, eps_prime: float) -> "PhaseConstants":
        return cls(eps_prime, 1.0 / eps_prime + 1.0)


def small_set(size: int, n: int) -> bool:
    """Whether the remainder is small enough to drop in one final step.

    Natural log of the ORIGINAL node count; n=1 must short-circuit
    immediately (ln 1 = 0 would otherwise degenerate the noise scale).
    """
    return n == 1 or size <= math.log(n)


def removal_log_p(degree: int, consts: PhaseConstants) -> float:
    """ln of the per-trial removal probability for a node of this degree."""
    return -consts.eps_prime * (float(degree) + consts.c)


def noisy_density(
    rho: float, size: int, n: int, epsilon: float, rng: RngStream
) -> float:
    """Upward-biased density estimate; consumes one Laplace draw."""
    log_n = math.log(n)
    return rho + (16.0 / epsilon) * log_n + laplace(4.0 * log_n / (size * epsilon), rng)


def log_budget(rho_hat: float, consts: PhaseConstants, n: int) -> float:
    """ln of the phase's cut-off time 4*ln(n)*exp(eps_prime*(4*rho_hat + c))."""
    return consts.eps_prime * (4.0 * rho_hat + consts.c) + math.log(4.0 * math.log(n))


def clock_rings(
    degree: int, consts: PhaseConstants, budget: float, clock_rng: RngStream
) -> bool:
    """Whether this node's geometric clock rings within the phase budget.

    Compared in log space: the clock value can exceed float range when the
    removal probability is tiny.
    """
    draw = Geometric.from_log_p(removal_log_p(degree, consts), clock_rng)
    return draw.log_value() <= budget


def select_candidate(
    candidates: List[NodeSet],
    densities: List[float],
    epsilon: float,
    rng: RngStream,
) -> Tuple[NodeSet, float, int]:
    """Final softmax over the distinct non-empty candidates.

    Nested candidates are deduplicated by size, first occurrence kept; the
    empty terminal set never competes.
    """
    pool = []
    pool_densities = []
    seen_sizes = set()
    for cand, rho in zip(candidates, densities):
        if len(cand) == 0 or len(cand) in seen_sizes:
            continue
        seen_sizes.add(len(cand))
        pool.append(cand)
        pool_densities.append(rho)
    best = exp_select(pool_densities, epsilon / 2.0, rng.substream(SELECT_LABEL))
    return pool[best], pool_densities[best], len(pool)


def run_phase(
    graph: Graph,
    params: PrivacyParams,
    rng: RngStream,
    constants: Optional[PhaseConstants] = None,
) -> DPResult:
    """Run the phase-based mechanism once.

    Args:
        constants: override for the derived constants (used by the privacy
            audit's deliberately broken variant).

    Returns:
        DPResult with per-phase records; ``phases`` counts executed phases
        (the final small-set step included).
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
    state = PeelState(graph)
    candidates = [state.to_nodeset()]
    densities = [state.density()]
    records = []
    phases = 0
    while state.size > 0:
        size = state.size
        rho = state.density()
        if small_set(size, n):
            records.append(PhaseRecord(phases, size, rho, None, None, size))
            phases += 1
            candidates.append(NodeSet())
            densities.append(0.0)
            break
        ids = state.alive_ids()
        degs = state.alive_degrees()
        rho_hat = noisy_density(
            rho, size, n, params.epsilon, rng.substream(NOISE_LABEL, phases)
        )
        budget = log_budget(rho_hat, consts, n)
        removed = [
            int(v)
            for v, d in zip(ids, degs)
            if clock_rings(
                int(d), consts, budget, rng.substream(CLOCK_LABEL, phases, int(v))
            )
        ]
        for v in removed:
            state.remove_node(v)
        records.append(PhaseRecord(phases, size, rho, rho_hat, budget, len(removed)))
        phases += 1
        candidates.append(state.to_nodeset())
        densities.append(state.density())
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
