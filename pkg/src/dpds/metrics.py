"""Utility metrics comparing a private output against the baseline set."""

from __future__ import annotations

from .graph import Graph


def relative_density(private_set, baseline_set, graph: Graph) -> float:
    """Density ratio rho(private) / rho(baseline).

    Raises:
        ValueError: if the baseline set has density 0 (ratio undefined).
    """
    base = graph.subgraph_density(baseline_set)
    if base == 0.0:
        raise ValueError("baseline density is 0; relative density undefined")
    return graph.subgraph_density(private_set) / base


def jaccard(a, b) -> float:
    """|a n b| / |a u b|; two empty sets count as identical (1.0)."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 1.0
    return len(sa & sb) / len(union)


def recall(a, b) -> float:
    """Fraction of b recovered by a.

    Raises:
        ValueError: if b is empty.
    """
    sa, sb = set(a), set(b)
    if not sb:
        raise ValueError("recall undefined for an empty reference set")
    return len(sa & sb) / len(sb)
