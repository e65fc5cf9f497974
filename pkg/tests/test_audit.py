import json
import math
import pickle

import pytest

from dpds.audit import (
    audit_privacy,
    broken_constants,
    mechanism_runner,
    toggle_edge,
)
from dpds.graph import Graph
from dpds.par import ParConstants
from dpds.phases import PhaseConstants
from dpds.results import PrivacyParams
from dpds.rng import RngStream
from dpds.seq import SeqConstants, run_seq


# ------------------------------------------------------------------ helpers


def test_toggle_removes_present_edge(triangle):
    nbr = toggle_edge(triangle, (1, 2))
    assert nbr.edges == {(0, 1), (0, 2)}
    assert nbr.n == 3


def test_toggle_adds_absent_edge(path4):
    nbr = toggle_edge(path4, (3, 0))
    assert (0, 3) in nbr.edges
    assert len(nbr.edges) == len(path4.edges) + 1


def test_toggle_rejects_bad_edges(triangle):
    with pytest.raises(ValueError):
        toggle_edge(triangle, (1, 1))
    with pytest.raises(ValueError):
        toggle_edge(triangle, (0, 3))


def test_runner_matches_direct_call(triangle, params):
    runner = mechanism_runner("seq")
    assert runner(triangle, params, RngStream(5)) == run_seq(
        triangle, params, RngStream(5)
    )


def test_runner_is_picklable():
    for algo in ("seq", "par", "phase", "mr"):
        blob = pickle.dumps(mechanism_runner(algo))
        assert pickle.loads(blob) is not None
    with pytest.raises(ValueError, match="unknown algorithm"):
        mechanism_runner("greedy")


def test_broken_constants_scale_the_removal_coefficient():
    params = PrivacyParams(1.0, 0.05)
    honest_seq = SeqConstants.from_params(params)
    assert broken_constants("seq", params).eps_prime == pytest.approx(
        10 * honest_seq.eps_prime
    )
    honest_par = ParConstants.from_params(params)
    bad_par = broken_constants("par", params)
    assert bad_par.eps_prime == pytest.approx(10 * honest_par.eps_prime)
    assert bad_par.c == pytest.approx(1 / bad_par.eps_prime + 1)  # recomputed
    honest_phase = PhaseConstants.from_params(params)
    for algo in ("phase", "mr"):
        bad = broken_constants(algo, params)
        assert bad.eps_prime == pytest.approx(10 * honest_phase.eps_prime)
        assert bad.c == pytest.approx(1 / bad.eps_prime + 1)
    with pytest.raises(ValueError, match="unknown algorithm"):
        broken_constants("greedy", params)


# ------------------------------------------------------------ input checks


def test_rejects_graphs_with_too_many_nodes(params):
    with pytest.raises(ValueError, match="5"):
        audit_privacy(
            mechanism_runner("seq"), Graph(6), (0, 1), params, 10**5, RngStream(0)
        )


def test_rejects_too_few_samples(params):
    with pytest.raises(ValueError, match="samples"):
        audit_privacy(
            mechanism_runner("seq"), Graph(2), (0, 1), params, 99_999, RngStream(0)
        )


# ---------------------------------------------------------------- behavior


def single_edge_report(epsilon, delta, seed=11):
    return audit_privacy(
        mechanism_runner("seq"),
        Graph(2, [(0, 1)]),
        (0, 1),
        PrivacyParams(epsilon, delta),
        10**5,
        RngStream(seed),
    )


def test_report_shape_and_serializability():
    report = single_edge_report(50.0, 0.9)
    assert report["nodes"] == 2
    assert report["edge"] == [0, 1]
    assert report["edge_present_in_base"] is True
    assert report["samples"] == 10**5
    assert len(report["events"]) == 4
    row_keys = {
        "set",
        "p1_forward",
        "p2_forward",
        "margin_forward",
        "adjusted_margin_forward",
        "p1_reverse",
        "p2_reverse",
        "margin_reverse",
        "adjusted_margin_reverse",
    }
    assert all(row_keys <= set(row) for row in report["events"])
    margins = [
        row[f"adjusted_margin_{tag}"]
        for row in report["events"]
        for tag in ("forward", "reverse")
    ]
    assert report["max_adjusted_margin"] == max(margins)
    json.dumps(report)  # must be JSON-ready as written


def test_generous_budget_passes():
    # with e^eps astronomically large and delta 0.9 no margin can clear 0
    report = single_edge_report(50.0, 0.9)
    assert report["pass"] is True
    assert report["max_adjusted_margin"] <= 0.0


def test_honest_tight_budget_passes():
    report = single_edge_report(1.0, 0.05)
    assert report["pass"] is True
    # margins should clear zero with real room, not by luck
    assert report["max_adjusted_margin"] < -0.01


def test_same_stream_gives_identical_report():
    a = single_edge_report(1.0, 0.05, seed=4)
    b = single_edge_report(1.0, 0.05, seed=4)
    a.pop("elapsed_seconds")
    b.pop("elapsed_seconds")
    assert a == b


# ------------------------------------------------- exact-law cross-check


def exact_seq_distribution(graph, params):
    """Closed-form output law of the sequential mechanism, by enumeration.

    Sums over all removal orders: each step removes v from the alive set
    with probability proportional to exp(-eps' * degree), then the final
    softmax over the n suffix sets uses coefficient eps/2.
    """
    eps_prime = params.epsilon / (4.0 * math.log(math.e / params.delta))
    out = {mask: 0.0 for mask in range(1 << graph.n)}

    def degree(alive, v):
        return sum(
            1 for u in alive if u != v and (min(u, v), max(u, v)) in graph.edges
        )

    def dens(nodes):
        if not nodes:
            return 0.0
        inside = sum(1 for u, v in graph.edges if u in nodes and v in nodes)
        return inside / len(nodes)

    def mask_of(nodes):
        m = 0
        for v in nodes:
            m |= 1 << v
        return m

    def recurse(alive, prob, cands):
        if not alive:
            weights = [math.exp(params.epsilon * dens(c) / 2.0) for c in cands]
            total = sum(weights)
            for cand, w in zip(cands, weights):
                out[mask_of(cand)] += prob * w / total
            return
        ws = {v: math.exp(-eps_prime * degree(alive, v)) for v in sorted(alive)}
        total = sum(ws.values())
        for v, w in ws.items():
            nxt = alive - {v}
            recurse(nxt, prob * w / total, cands + [nxt] if nxt else cands)

    full = frozenset(range(graph.n))
    recurse(full, 1.0, [full])
    return out


def test_audit_counts_match_exact_law(triangle):
    params = PrivacyParams(2.0, 0.1)
    samples = 10**5
    report = audit_privacy(
        mechanism_runner("seq"), triangle, (1, 2), params, samples, RngStream(2024)
    )
    exact_base = exact_seq_distribution(triangle, params)
    exact_nbr = exact_seq_distribution(toggle_edge(triangle, (1, 2)), params)
    assert sum(exact_base.values()) == pytest.approx(1.0)
    for mask, row in enumerate(report["events"]):
        for p_hat, truth in (
            (row["p1_forward"], exact_base[mask]),
            (row["p2_forward"], exact_nbr[mask]),
        ):
            sigma = math.sqrt(truth * (1.0 - truth) / samples)
            assert abs(p_hat - truth) <= max(4.0 * sigma, 2e-4), (mask, p_hat, truth)
