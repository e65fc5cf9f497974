"""Differentially private densest-subgraph detection.

Edge-privacy model: neighboring graphs differ in one edge, the vertex set is
public.  The package provides the non-private greedy baseline, three private
peeling mechanisms (sequential, parallel, phase-based), a simulated
map-reduce execution of the phase-based one, utility metrics, an empirical
privacy auditor, and a CSV experiment harness.
"""

from .audit import audit_privacy, broken_constants, mechanism_runner, toggle_edge
from .baseline import brute_force_densest, charikar_peel
from .graph import (
    Graph,
    NodeSet,
    PeelState,
    density,
    generate_er,
    generate_planted,
    parse_edge_list,
    serialize_edge_list,
)
from .mapreduce import mr_map, mr_reduce_by_key, run_mr_dense
from .mechanisms import Geometric, exp_select, geometric, laplace
from .metrics import jaccard, recall, relative_density
from .par import ParConstants, run_par
from .phases import PhaseConstants, run_phase
from .results import DPResult, PeelTrace, PhaseRecord, PrivacyParams
from .rng import RngStream
from .seq import SeqConstants, run_seq

__all__ = [
    "DPResult",
    "Geometric",
    "Graph",
    "NodeSet",
    "ParConstants",
    "PeelState",
    "PeelTrace",
    "PhaseConstants",
    "PhaseRecord",
    "PrivacyParams",
    "RngStream",
    "SeqConstants",
    "audit_privacy",
    "broken_constants",
    "brute_force_densest",
    "charikar_peel",
    "density",
    "exp_select",
    "generate_er",
    "generate_planted",
    "geometric",
    "jaccard",
    "laplace",
    "mechanism_runner",
    "mr_map",
    "mr_reduce_by_key",
    "parse_edge_list",
    "recall",
    "relative_density",
    "run_mr_dense",
    "run_par",
    "run_phase",
    "run_seq",
    "serialize_edge_list",
    "toggle_edge",
]

__version__ = "0.1.0"
