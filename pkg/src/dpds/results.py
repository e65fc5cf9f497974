"""Shared parameter and result types for the private algorithms."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple

from .graph import NodeSet


@dataclass(frozen=True)
class PrivacyParams:
    """An (epsilon, delta) privacy budget."""

    epsilon: float
    delta: float

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")
        if not (math.isfinite(self.epsilon) and math.isfinite(self.delta)):
            raise ValueError("epsilon and delta must be finite")


@dataclass(frozen=True)
class PeelRemoval:
    """One step of a peeling sequence, logged before the removal happens."""

    node: int
    size_before: int
    density_before: float


@dataclass(frozen=True)
class PeelTrace:
    """Removal order of a full peel plus the index of the densest prefix.

    ``removals[t]`` describes the set after t removals; ``best_index`` is the
    t maximizing that density (ties toward the earliest, largest set).
    """

    removals: Tuple[PeelRemoval, ...]
    best_index: int


@dataclass(frozen=True)
class PhaseRecord:
    """Diagnostics for one phase of the phase-based algorithm.

    ``noisy_density`` and ``log_budget`` are None for the final small-set
    phase, which removes everything without sampling.
    """

    index: int
    size: int
    density: float
    noisy_density: Optional[float]
    log_budget: Optional[float]
    removed: int


@dataclass(frozen=True)
class DPResult:
    """Output of one private run.

    Fields:
        selected: chosen node set.
        density: its density, recomputed from the input graph.
        trace_len: number of candidate sets offered to the final selection.
        iterations: removal rounds executed (n for the sequential
            algorithm, loop iterations for the parallel one, phase count for
            the phase-based ones).
        phases: phase count (0 for non-phase algorithms).
        truncated: True when an iteration cap cut the run short; such a run
            no longer carries the intended privacy guarantee.
        seed: token of the RNG stream that drove the run.
        elapsed: wall seconds (excluded from equality).
        candidates: candidate sets in production order, when cheap to keep.
        records: per-phase diagnostics, for the phase-based algorithms.
        peel: full removal trace, when the caller asked for one.
    """

    selected: NodeSet
    density: float
    trace_len: int
    iterations: int
    phases: int = 0
    truncated: bool = False
    seed: int = 0
    elapsed: float = field(default=0.0, compare=False)
    candidates: Optional[Tuple[NodeSet, ...]] = None
    records: Optional[Tuple[PhaseRecord, ...]] = None
    peel: Optional[PeelTrace] = None
