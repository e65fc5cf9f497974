import pytest
from hypothesis import given, settings, strategies as st

from dpds.baseline import brute_force_densest, charikar_peel
from dpds.graph import Graph, NodeSet, density, generate_er


def k_clique(k, extra_n=0, extra_edges=()):
    n = k + extra_n
    edges = [(i, j) for i in range(k) for j in range(i + 1, k)]
    edges.extend(extra_edges)
    return Graph(n, edges)


def test_charikar_finds_clique_next_to_noise():
    g = k_clique(5, extra_n=2, extra_edges=[(5, 6)])
    selected, rho, trace = charikar_peel(g)
    assert selected == set(range(5))
    assert rho == 2.0
    assert len(trace.removals) == 7


def test_charikar_star_keeps_everything(star4):
    selected, rho, _ = charikar_peel(star4)
    assert selected == {0, 1, 2, 3}
    assert rho == 0.75


def test_charikar_empty_graph():
    selected, rho, trace = charikar_peel(Graph(0))
    assert len(selected) == 0
    assert rho == 0.0
    assert trace.removals == ()


def test_charikar_min_degree_ties_take_smallest_id():
    path3 = Graph(3, [(0, 1), (1, 2)])
    _, _, trace = charikar_peel(path3)
    # endpoints 0 and 2 tie at degree 1
    assert trace.removals[0].node == 0


def test_charikar_density_ties_take_earliest_prefix():
    g = Graph(2)  # edgeless: every prefix has density 0
    selected, rho, trace = charikar_peel(g)
    assert selected == {0, 1}
    assert rho == 0.0
    assert trace.best_index == 0


def test_charikar_is_deterministic():
    g = generate_er(60, 0.15, 7)
    assert charikar_peel(g) == charikar_peel(g)


def test_charikar_trace_invariants():
    g = generate_er(25, 0.3, 11)
    selected, rho, trace = charikar_peel(g)
    sizes = [r.size_before for r in trace.removals]
    assert sizes == list(range(g.n, 0, -1))
    assert rho == density(selected, g)
    best = trace.removals[trace.best_index]
    assert best.density_before == rho


def test_brute_force_triangle(triangle):
    selected, rho = brute_force_densest(triangle)
    assert selected == {0, 1, 2}
    assert rho == 1.0


def test_brute_force_k4_minus_edge_prefers_full_set(k4_minus_edge):
    # triangle gives 1.0 but all four nodes give 5/4
    selected, rho = brute_force_densest(k4_minus_edge)
    assert selected == {0, 1, 2, 3}
    assert rho == 1.25


def test_brute_force_single_node():
    selected, rho = brute_force_densest(Graph(1))
    assert selected == {0}
    assert rho == 0.0


def test_brute_force_tie_smaller_size_then_lex():
    assert brute_force_densest(Graph(3))[0] == {0}
    two_edges = Graph(4, [(0, 1), (2, 3)])
    assert brute_force_densest(two_edges)[0] == {0, 1}


def test_brute_force_size_guard():
    with pytest.raises(ValueError):
        brute_force_densest(Graph(25))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=9), st.data())
def test_peel_is_half_approximation(n, data):
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = data.draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    g = Graph(n, edges)
    _, rho_peel, _ = charikar_peel(g)
    _, rho_opt = brute_force_densest(g)
    assert rho_peel >= 0.5 * rho_opt


def test_returned_density_recomputes():
    for seed in range(10):
        g = generate_er(14, 0.35, seed)
        selected, rho, _ = charikar_peel(g)
        assert rho == density(selected, g)
        bsel, brho = brute_force_densest(g)
        assert brho == density(bsel, g)
