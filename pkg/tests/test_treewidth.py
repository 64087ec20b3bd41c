import math
import random
import warnings

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from univgraph.construction import admissible, build_universal
from univgraph.decomposition import DecompositionError, TreeDecomposition, forest_decomposition, normalize
from univgraph.embedding import EmbeddingError, validate_embedding
from univgraph.graphs import Graph
from univgraph.harness import random_forest, spider
from univgraph.treewidth import (
    blowup_bound,
    build_universal_tw,
    count_edges_tw,
    embed_graph_full_tw,
    embed_graph_tw,
    generate_partial_ktree,
    lower_bound_edges,
    quotient_adjacency,
    tw_bounds,
)

# frozen from oracles.blown_edges over oracles.universal_edges
TW_EDGES = {(24, 1): 220, (36, 2): 504, (60, 3): 1290, (10, 1): 45, (50, 4): 1075}


def blown_oracle(n, w):
    q = w + 1
    ns = -(-n // q)
    full = oracles.blown_edges(ns, oracles.universal_edges(ns, 3), q)
    cut = ns * q - n
    return {(a - cut, b - cut) for a, b in full if a > cut}


def edge_set(host):
    return {(host.local_id(a), host.local_id(b)) for a, b in host.edges()}


@pytest.mark.parametrize("n,w", sorted(TW_EDGES))
def test_counts_frozen(n, w):
    assert count_edges_tw(n, w) == TW_EDGES[(n, w)]


@pytest.mark.parametrize("w", [1, 2, 3])
@pytest.mark.parametrize("k", [5, 13])
def test_small_figure_sizes_match_blowup(w, k):
    host = build_universal_tw(k * (w + 1), w)
    assert host.n == k * (w + 1)
    assert edge_set(host) == blown_oracle(k * (w + 1), w)


@pytest.mark.parametrize("n,w", [(7, 1), (23, 2), (41, 3), (30, 4)])
def test_partial_cliques_match_blowup(n, w):
    assert edge_set(build_universal_tw(n, w)) == blown_oracle(n, w)


def test_single_clique():
    for w in range(1, 6):
        assert count_edges_tw(w + 1, w) == math.comb(w + 1, 2)


def test_quotient_contains_base():
    n, w = 26, 1
    host = build_universal_tw(n, w)
    base = build_universal(13, 3)
    want = {(base.local_id(a), base.local_id(b)) for a, b in base.edges()}
    shift = host.start // host.q
    got = {(a - shift, b - shift) for a, b in quotient_adjacency(host)}
    assert want <= got


def test_treewidth_one_host_differs_from_tree_host():
    assert count_edges_tw(14, 1) != build_universal(14, 3).count_edges()


@pytest.mark.parametrize("w", [1, 2, 3, 4])
def test_accounting(w):
    for n in range(1, 200):
        assert count_edges_tw(n, w) <= blowup_bound(n, w)
        if n % (w + 1) == 0:
            assert count_edges_tw(n, w) == blowup_bound(n, w)


def test_lower_bound_examples():
    assert lower_bound_edges(10, 1) == 12
    for w in range(1, 6):
        assert lower_bound_edges(2 * w + 1, w) == w
    with pytest.warns(UserWarning):
        assert lower_bound_edges(4, 2) == 0


def test_lower_bound_growth():
    w = 2
    ratios = [lower_bound_edges(n, w) / (n * w * math.log(n / w)) for n in (100, 1000, 10000)]
    assert min(ratios) > 0.5


def test_tw_bounds_row():
    row = tw_bounds(60, 3)
    assert row.edges == 1290
    assert row.lower == lower_bound_edges(60, 3)
    assert row.accounting == blowup_bound(60, 3)


@pytest.mark.parametrize("w", [1, 2, 3])
def test_generator_ktree_edge_count(w):
    for seed in range(20):
        n = w + 1 + seed
        g, td = generate_partial_ktree(n, w, seed)
        assert g.edge_count() == w * n - w * (w + 1) // 2
        assert td.width == w


def test_generator_empty():
    g, td = generate_partial_ktree(12, 1, seed=4, keep_prob=0.0)
    assert g.edge_count() == 0 and g.is_forest()


def test_generator_validity_many_seeds():
    for seed in range(1000):
        w = 1 + seed % 3
        g, td = generate_partial_ktree(w + 1 + seed % 17, w, seed, keep_prob=(seed % 5) / 4)
        assert oracles.decomposition_ok(g.vertices, g.edges(), td.bags, td.tree_edges)


def test_generator_arguments():
    with pytest.raises(ValueError):
        generate_partial_ktree(2, 3)
    with pytest.raises(ValueError):
        generate_partial_ktree(5, 1, keep_prob=1.5)


def test_single_edge():
    g = Graph([0, 1], [(0, 1)])
    host = build_universal_tw(6, 1)
    emb = embed_graph_tw(host, g, forest_decomposition(g), 1)
    assert validate_embedding(host, g, emb)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(0, 40), st.integers(0, 40), st.integers(0, 10**6))
def test_embed_random_partial_ktrees(w, size_extra, gap, seed):
    q = w + 1
    g, td = generate_partial_ktree(q + size_extra, w, seed, 0.8)
    host = build_universal_tw(len(g) + q + gap, w)
    emb = embed_graph_tw(host, g, td, w)
    assert validate_embedding(host, g, emb)


@pytest.mark.parametrize("w", [1, 2, 3])
def test_embed_boundary_size(w):
    for seed in range(10):
        g, td = generate_partial_ktree(20 + seed, w, seed, 0.9)
        host = build_universal_tw(len(g) + w + 1, w)
        assert validate_embedding(host, g, embed_graph_tw(host, g, td, w))


def test_embed_size_violation():
    g, td = generate_partial_ktree(10, 1, 0)
    with pytest.raises(EmbeddingError):
        embed_graph_tw(build_universal_tw(11, 1), g, td, 1)


def test_embed_width_violation():
    g, td = generate_partial_ktree(10, 2, 0)
    with pytest.raises(DecompositionError):
        embed_graph_full_tw(build_universal_tw(10, 1), g, td, 1)


def test_full_clique():
    for w in range(1, 5):
        g = Graph(range(w + 1), [(a, b) for a in range(w + 1) for b in range(a + 1, w + 1)])
        td = TreeDecomposition({0: set(range(w + 1))})
        host = build_universal_tw(w + 1, w)
        assert validate_embedding(host, g, embed_graph_full_tw(host, g, td, w), full=True)


@pytest.mark.parametrize("w", [1, 2, 3])
def test_full_random_ktrees(w):
    for seed in range(25):
        n = random.Random(seed).randint(w + 1, 60)
        g, td = generate_partial_ktree(n, w, seed)
        host = build_universal_tw(n, w)
        emb = embed_graph_full_tw(host, g, normalize(g, td, w) if n > w else td, w)
        assert validate_embedding(host, g, emb, full=True)


def test_full_w1_trees():
    for seed in range(30):
        rng = random.Random(seed)
        n = rng.randint(2, 60)
        t = random_forest(n, rng, 1)
        host = build_universal_tw(n, 1)
        emb = embed_graph_full_tw(host, t, forest_decomposition(t), 1)
        assert validate_embedding(host, t, emb, full=True)


@pytest.mark.parametrize("mode,ok", [("blowup", True), ("half", True), ("literal", False)])
def test_type3_fixture_modes(mode, ok):
    g = spider([22, 21, 21, 21, 21])
    host = admissible(109, 4, 3, q=2, t3_mode=mode)
    td = forest_decomposition(g)
    if ok:
        assert validate_embedding(host, g, embed_graph_tw(host, g, td, 1))
    else:
        with pytest.raises(EmbeddingError, match="type-3 block unavailable"):
            embed_graph_tw(host, g, td, 1)


def test_lower_bound_below_edges():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for w in (1, 2, 3):
            for n in range(2 * w + 1, 120):
                assert lower_bound_edges(n, w) < count_edges_tw(n, w)
