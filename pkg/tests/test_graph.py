import math
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from percmono.errors import BudgetExceeded, InvalidParameter
from percmono.exact import two_terminal_poly
from percmono.graph import (MIDDLE, PEAK, PLAIN, Graph, glue, l1_ball_size, make_box,
                            make_hexagonal_patch, make_theta, make_tree_glued,
                            make_triangular_patch, non_glued, norm_of, tree_glued_copies)

DATA = Path(__file__).parent / "data"


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(g.vertices)
    G.add_edges_from(g.edges)
    return G


def test_theta_4_is_the_graph_P():
    g = make_theta(4)
    assert g.n_vertices == 5
    expected = {(0, 1), (1, 4), (3, 4), (0, 3), (0, 2), (2, 4)}
    assert set(g.edges) == expected
    assert g.roles == {0: PEAK, 4: PEAK, 1: MIDDLE, 2: MIDDLE, 3: MIDDLE}
    assert g.origin == 0


def test_theta_counts():
    g = make_theta(3)
    assert (g.n_vertices, g.n_edges) == (4, 4)
    g = make_theta(10)
    assert (g.n_vertices, g.n_edges) == (11, 18)
    assert norm_of(g, 10) == 2 and norm_of(g, 1) == 1


def test_theta_rejects_small_n():
    with pytest.raises(InvalidParameter):
        make_theta(2)


def test_graph_validation():
    with pytest.raises(InvalidParameter):
        Graph((0, 1), ((0, 0),))
    with pytest.raises(InvalidParameter):
        Graph((0, 1), ((0, 1), (1, 0)))
    with pytest.raises(InvalidParameter):
        Graph((0, 1), ((0, 2),))
    with pytest.raises(InvalidParameter):
        Graph((0, 1), ((0, 1),), origin=5)


def test_glue_counts_and_cut_vertex():
    a, b = make_theta(4), make_theta(4)
    g = glue(a, 4, b, 2)
    assert (g.n_vertices, g.n_edges) == (9, 12)
    z = 4
    G = to_nx(g)
    G.remove_node(z)
    parts = sorted(len(c) for c in nx.connected_components(G))
    assert parts == [4, 4]
    assert g.roles[z] == PLAIN


def test_glue_keeps_single_copy_polynomial():
    p4 = make_theta(4)
    g = glue(p4, 4, make_theta(4), 2)
    assert two_terminal_poly(g, 0, 4) == two_terminal_poly(p4, 0, 4)
    assert two_terminal_poly(g, 0, 1) == two_terminal_poly(p4, 0, 1)


def test_glue_rejects_missing_vertex():
    with pytest.raises(InvalidParameter):
        glue(make_theta(4), 9, make_theta(4), 0)
    with pytest.raises(InvalidParameter):
        glue(make_theta(4), 0, make_theta(4), 9)


@pytest.mark.parametrize("n,k,expected", [(4, 1, 20), (4, 0, 5), (5, 2, 150), (4, 2, 80)])
def test_tree_glued_non_glued_count(n, k, expected):
    g = make_tree_glued(n, k)
    assert len(non_glued(g)) == expected == (n + 1) * n**k
    assert g.is_connected()


def test_tree_glued_base_case_is_theta():
    assert make_tree_glued(4, 0) == make_theta(4)


def test_tree_glued_equals_repeated_glue():
    g = make_theta(4)
    for w in range(5):
        anchor = 1 if make_theta(4).roles[w] == PEAK else 0
        g = glue(g, w, make_theta(4), anchor)
    assert set(g.edges) == set(make_tree_glued(4, 1).edges)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_glued_vertex_degree(n):
    g = make_tree_glued(n, 2)
    glued = [v for v, r in g.roles.items() if r == PLAIN]
    assert glued
    assert all(g.degree(v) == (n - 1) + 2 for v in glued)


def test_tree_glued_copies_are_thetas():
    g = make_tree_glued(4, 1)
    for ids in tree_glued_copies(4, 1):
        for i in (1, 2, 3):
            assert g.has_edge(ids[0], ids[i]) and g.has_edge(ids[i], ids[4])


def test_tree_glued_budget():
    with pytest.raises(BudgetExceeded):
        make_tree_glued(6, 8, budget=10_000)


def test_box_small_cases():
    g = make_box(2, 1)
    assert (g.n_vertices, g.n_edges) == (5, 4)
    g = make_box(2, 1, remove_origin_edge=True)
    assert (g.n_vertices, g.n_edges) == (5, 3)
    assert not g.has_edge(g.origin, g.vertex("e"))
    g = make_box(3, 1)
    assert (g.n_vertices, g.n_edges) == (7, 6)


@pytest.mark.parametrize("d,r", [(1, 3), (2, 3), (2, 6), (3, 2), (4, 2)])
def test_box_size_formula(d, r):
    g = make_box(d, r)
    assert g.n_vertices == l1_ball_size(d, r)
    assert all(sum(map(abs, c)) <= r for c in g.coords)


def test_box_norm_is_l1():
    g = make_box(2, 3)
    assert norm_of(g, g.id_of((1, 2))) == 3
    assert norm_of(g, g.origin) == 0
    dist = g.distances()
    assert all(dist[i] == sum(map(abs, c)) for i, c in enumerate(g.coords))


def test_box_budget():
    with pytest.raises(BudgetExceeded):
        make_box(3, 50, budget=1000)


def test_edges_oriented_lexicographically():
    for g in (make_box(3, 2), make_triangular_patch(3), make_hexagonal_patch(4)):
        assert all(g.coords[u] < g.coords[v] for u, v in g.edges)


def test_box_edge_keys_are_geometric():
    small, big = make_box(2, 3), make_box(2, 5)
    keys_small = {(small.coords[u], small.coords[v]): k
                  for (u, v), k in zip(small.edges, small.edge_keys)}
    keys_big = {(big.coords[u], big.coords[v]): k for (u, v), k in zip(big.edges, big.edge_keys)}
    assert all(keys_big[e] == k for e, k in keys_small.items())
    assert len(set(big.edge_keys)) == big.n_edges


def test_triangular_patch():
    g = make_triangular_patch(1)
    assert (g.n_vertices, g.n_edges) == (7, 12)
    assert g.degree(g.origin) == 6
    o, e, z = g.origin, g.vertex("e"), g.vertex("z")
    assert g.has_edge(o, e) and g.has_edge(e, z) and g.has_edge(o, z)
    g = make_triangular_patch(4)
    interior = [i for i, (q, s) in enumerate(g.coords) if max(abs(q), abs(s), abs(q + s)) < 4]
    assert all(g.degree(v) == 6 for v in interior)


def test_hexagonal_patch():
    g = make_hexagonal_patch(1)
    assert g.degree(g.origin) == 3
    assert g.has_edge(g.origin, g.vertex("e"))
    g = make_hexagonal_patch(6)
    dist = g.distances()
    assert max(dist) == 6
    assert all(g.degree(v) == 3 for v in g.vertices if dist[v] < 6)
    # hexagonal lattice is bipartite
    assert nx.is_bipartite(to_nx(g))


@pytest.mark.parametrize("make", [lambda: make_theta(7), lambda: make_tree_glued(4, 2),
                                  lambda: make_box(3, 3), lambda: make_triangular_patch(3),
                                  lambda: make_hexagonal_patch(5)])
def test_norm_matches_networkx(make):
    g = make()
    lengths = nx.single_source_shortest_path_length(to_nx(g), g.origin)
    assert all(norm_of(g, v) == lengths[v] for v in g.vertices)
    assert g.is_connected()


def test_norm_of_unreachable_is_inf():
    g = Graph((0, 1, 2), ((0, 1),))
    assert norm_of(g, 2) == math.inf
    with pytest.raises(InvalidParameter):
        norm_of(g, 7)


def test_golden_graph_files():
    assert Graph.from_text((DATA / "theta4.graph").read_text()) == make_theta(4)
    assert Graph.from_text((DATA / "glued_4_1.graph").read_text()) == make_tree_glued(4, 1)
    assert (DATA / "theta4.graph").read_text() == make_theta(4).to_text()


def test_from_text_rejects_garbage():
    with pytest.raises(InvalidParameter):
        Graph.from_text("v 2\no 0\nx 1 2\n")
    with pytest.raises(InvalidParameter):
        Graph.from_text("e 0 1\n")


@st.composite
def graphs(draw):
    n = draw(st.integers(1, 8))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    roles = draw(st.dictionaries(st.integers(0, n - 1), st.sampled_from([PEAK, MIDDLE, PLAIN])))
    labels = draw(st.dictionaries(st.sampled_from(["e", "z", "x"]), st.integers(0, n - 1)))
    return Graph(tuple(range(n)), tuple(edges), draw(st.integers(0, n - 1)), roles, labels)


@given(graphs())
@settings(max_examples=100)
def test_text_round_trip(g):
    assert Graph.from_text(g.to_text()) == g


def test_box_golden_file_keeps_labels():
    g = Graph.from_text((DATA / "box_2_2_cut.graph").read_text())
    assert g == make_box(2, 2, remove_origin_edge=True)
    assert g.vertex("e") == 10 and g.origin == 6
