import pytest
from hypothesis import given, strategies as st

from univgraph.graphs import Graph, crossing_edges


def test_basic():
    g = Graph(range(4), [(0, 1), (1, 2)])
    assert len(g) == 4
    assert g.edges() == [(0, 1), (1, 2)]
    assert g.edge_count() == 2
    assert g.has_edge(1, 0) and not g.has_edge(0, 2)
    assert g.components() == [[0, 1, 2], [3]]
    assert g.is_forest()


def test_self_loop_rejected():
    with pytest.raises(ValueError, match="self-loop"):
        Graph([1], [(1, 1)])


def test_cycle_is_not_forest():
    assert not Graph(range(3), [(0, 1), (1, 2), (2, 0)]).is_forest()


def test_induced_and_components_within():
    g = Graph(range(5), [(0, 1), (1, 2), (2, 3), (3, 4)])
    h = g.induced([0, 1, 3, 4])
    assert h.edges() == [(0, 1), (3, 4)]
    assert g.components(within=[0, 1, 3, 4]) == [[0, 1], [3, 4]]


def test_crossing_edges():
    g = Graph(range(4), [(0, 1), (1, 2), (2, 3)])
    assert crossing_edges(g, [[0, 1], [2, 3]]) == [(1, 2)]
    assert crossing_edges(g, [[0], [2]]) == []


@given(st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=30))
def test_components_partition(pairs):
    g = Graph(range(12), [(u, v) for u, v in pairs if u != v])
    comps = g.components()
    assert sorted(v for c in comps for v in c) == list(range(12))
    assert not crossing_edges(g, comps)
