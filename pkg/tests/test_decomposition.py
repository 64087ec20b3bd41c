import pytest
from hypothesis import given, settings, strategies as st

import oracles
from univgraph.decomposition import (
    DecompositionError,
    TreeDecomposition,
    forest_decomposition,
    natural_path_decomposition,
    normalize,
    validate,
)
from univgraph.graphs import Graph
from univgraph.harness import random_forest
from univgraph.treewidth import generate_partial_ktree


def path(n):
    return Graph(range(n), [(i, i + 1) for i in range(n - 1)])


def check_normal(g, td, w):
    assert oracles.decomposition_ok(g.vertices, g.edges(), td.bags, td.tree_edges)
    assert all(len(b) == w + 1 for b in td.bags.values())
    assert all(len(td.bags[x] & td.bags[y]) == w for x, y in td.tree_edges)


def test_path_already_normal():
    td = natural_path_decomposition(4)
    assert td.is_normal(1)
    assert normalize(path(4), td, 1) is td


def test_small_bag_is_padded():
    g = path(4)
    td = TreeDecomposition({0: {0, 1}, 1: {1}, 2: {1, 2}, 3: {2, 3}}, [(0, 1), (1, 2), (2, 3)])
    validate(g, td)
    check_normal(g, normalize(g, td, 1), 1)


def test_duplicate_bags_contracted():
    g = path(3)
    td = TreeDecomposition({0: {0, 1}, 1: {0, 1}, 2: {1, 2}}, [(0, 1), (1, 2)])
    out = normalize(g, td, 1)
    check_normal(g, out, 1)
    assert len(out.bags) == 2


def test_padding_to_larger_width():
    g = path(5)
    out = normalize(g, natural_path_decomposition(5), 3)
    check_normal(g, out, 3)


@pytest.mark.parametrize(
    "bags,edges,msg",
    [
        ({0: {0, 1}}, [], "vertex coverage"),
        ({0: {0, 1}, 1: {2}}, [(0, 1)], "edge coverage"),
        ({0: {0, 1}, 1: {1, 2}, 2: {0, 2}}, [(0, 1), (1, 2)], "connectivity"),
        ({0: {0, 1}, 1: {1, 2}}, [], "edge count"),
        ({0: {0, 1}, 1: {1, 2}}, [(0, 7)], "unknown bag"),
        ({0: {0, 1}, 1: {1, 2, 9}}, [(0, 1)], "not a graph vertex"),
    ],
)
def test_validate_names_axiom(bags, edges, msg):
    g = Graph(range(3), [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(DecompositionError, match=msg):
        validate(g, TreeDecomposition(bags, edges))


def test_normalize_rejects_width_and_size():
    with pytest.raises(DecompositionError, match="width"):
        normalize(path(3), TreeDecomposition({0: {0, 1, 2}}), 1)
    with pytest.raises(DecompositionError, match="fewer than"):
        normalize(path(2), natural_path_decomposition(2), 3)


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 4), st.integers(0, 40), st.integers(0, 10**6), st.floats(0, 1))
def test_normalize_random_partial_ktrees(w, extra, seed, keep):
    n = w + 1 + extra
    g, td = generate_partial_ktree(n, w, seed, keep)
    assert oracles.decomposition_ok(g.vertices, g.edges(), td.bags, td.tree_edges)
    check_normal(g, normalize(g, td, w), w)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 40), st.integers(0, 10**6))
def test_forest_decomposition(n, seed):
    import random

    g = random_forest(n, random.Random(seed), 4)
    td = forest_decomposition(g)
    assert td.width <= 1
    assert oracles.decomposition_ok(g.vertices, g.edges(), td.bags, td.tree_edges)
    check_normal(g, normalize(g, td, 1), 1)


def test_restrict_keeps_validity():
    g, td = generate_partial_ktree(20, 2, seed=3)
    keep = [v for v in g.vertices if v % 3]
    sub = td.restrict(keep)
    validate(g.induced(keep), sub)
