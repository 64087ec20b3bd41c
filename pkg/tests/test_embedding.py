import itertools
import random

import pytest

import oracles
from univgraph.addressing import ROOT, eat_index, parse
from univgraph.construction import admissible, build_universal
from univgraph.embedding import (
    EmbeddingError,
    embed_forest,
    embed_tree_full,
    sibling_block,
    strip_prefix,
    type3_block,
    validate_embedding,
    view_of,
)
from univgraph.graphs import Graph
from univgraph.harness import enumerate_free_trees, random_forest, spider, tree_graph, verify_admissible_residual


def path(n):
    return Graph(range(n), [(i, i + 1) for i in range(n - 1)])


def star(k):
    return Graph(range(k + 1), [(0, i) for i in range(1, k + 1)])


def partitions(n, top=None):
    top = n if top is None else top
    if n == 0:
        yield []
        return
    for k in range(min(n, top), 0, -1):
        for rest in partitions(n - k, k):
            yield [k] + rest


def all_forests(n):
    """Every unlabelled forest on n vertices, once per multiset of trees."""
    trees = {k: list(enumerate_free_trees(k)) for k in range(1, n + 1)}
    for parts in partitions(n):
        groups = [(k, len(list(g))) for k, g in itertools.groupby(parts)]
        choices = [itertools.combinations_with_replacement(range(len(trees[k])), c) for k, c in groups]
        for pick in itertools.product(*choices):
            edges, base = [], 0
            for (k, _), idxs in zip(groups, pick):
                for i in idxs:
                    parent = trees[k][i]
                    edges += [(base + j, base + p) for j, p in enumerate(parent) if p >= 0]
                    base += k
            yield Graph(range(n), edges)


def independent_check(n, d, forest, mapping, full=False):
    # adjacency from the rule oracle, positions renumbered 1..n
    host = build_universal(n, d)
    edges = oracles.universal_edges(n, d)
    local = {g: host.local_id(p) for g, p in mapping.items()}
    assert len(set(local.values())) == len(local)
    assert sorted(local.values()) == list(range(1, (n if full else len(forest)) + 1))
    for u, v in forest.edges():
        assert tuple(sorted((local[u], local[v]))) in edges


def test_forest_count_sanity():
    # n <= 4 by hand: {K1}, {K2, 2K1}, {P3, K2+K1, 3K1}, {P4, K13, P3+K1, 2K2, K2+2K1, 4K1}
    assert [sum(1 for _ in all_forests(n)) for n in range(1, 5)] == [1, 2, 3, 6]


def test_empty_forest():
    host = build_universal(5, 3)
    emb = embed_forest(host, Graph())
    assert emb.mapping == {}
    assert validate_embedding(host, Graph(), emb)


def test_path13_into_u14():
    host = build_universal(14, 3)
    g = path(13)
    emb = embed_forest(host, g)
    assert validate_embedding(host, g, emb)
    assert sorted(host.local_id(p) for p in emb.mapping.values()) == list(range(1, 14))
    independent_check(14, 3, g, emb.mapping)


def test_guest_too_large():
    with pytest.raises(EmbeddingError, match="guest too large"):
        embed_forest(build_universal(5, 3), path(5))


@pytest.mark.parametrize("d", [3, 2])
def test_all_small_forests_into_u10(d):
    host = build_universal(10, d)
    count = 0
    for n in range(1, 10):
        for f in all_forests(n):
            emb = embed_forest(host, f)
            rep = validate_embedding(host, f, emb)
            assert rep, rep.message
            count += 1
    assert count == sum(sum(1 for _ in all_forests(n)) for n in range(1, 10))


def test_strip_prefix_examples():
    view = view_of(build_universal(40, 3))
    assert strip_prefix(view, 0) == view
    v14 = strip_prefix(view, 26)
    assert v14.size == 14
    assert v14.host_positions() == list(build_universal(14, 3).positions())
    last = strip_prefix(view, 39)
    assert last.size == 1 and last.host_positions() == [40]
    with pytest.raises(ValueError):
        strip_prefix(view, 40)


def test_sibling_block_single_child():
    host = build_universal(40, 3)
    view = view_of(host)
    blk = sibling_block(view, ROOT, 0, s3=0)
    # root plus the subtree of 3
    assert sorted(blk.host_positions()) == list(range(1, 14)) + [40]


def test_sibling_block_two_children():
    host = build_universal(40, 3)
    view = strip_prefix(view_of(host), 14)
    # the first free vertex lies under 2, so the block holds 2 and 1
    blk = sibling_block(view, ROOT, 0, s3=1)
    want = list(range(15, 41))
    assert sorted(blk.host_positions()) == want


def test_type3_block_within_cover():
    host = admissible(17, 3, 3)  # first vertex is position 24, inside the subtree of 21
    view = view_of(host)
    blk = type3_block(view, parse("2"), 0)
    root = blk.host_position(blk.total)
    assert root == eat_index(parse("1"), 3, 3)
    for p in blk.host_positions()[:-1]:
        assert host.adjacent(root, p)


def test_type3_block_cap_exceeded():
    view = view_of(admissible(18, 3, 3))  # starts at 23: leftover 3 > cover 2
    with pytest.raises(EmbeddingError, match="type-3 block unavailable"):
        type3_block(view, parse("2"), 0)


def test_type3_block_needs_single_child():
    view = view_of(admissible(20, 3, 3))
    with pytest.raises(EmbeddingError, match="more than one child"):
        type3_block(view, parse("2"), 0)


def test_type3_spiders():
    from univgraph.harness import two_separator_instances

    certified = 0
    for host, f in two_separator_instances():
        emb = embed_forest(host, f)
        assert validate_embedding(host, f, emb)
        certified += emb.branches["type-3 block"]
    assert certified >= 9


def test_full_star_centre_at_root():
    for n in range(2, 14):
        host = build_universal(n, 3)
        g = star(n - 1)
        emb = embed_tree_full(host, g, at_root=0)
        assert emb.mapping[0] == host.root()
        assert validate_embedding(host, g, emb, full=True)


@pytest.mark.parametrize("d", [2, 3])
def test_full_paths(d):
    for n in range(1, 13):
        host = build_universal(n, d)
        emb = embed_tree_full(host, path(n))
        assert validate_embedding(host, path(n), emb, full=True)
        independent_check(n, d, path(n), emb.mapping, full=True)


def test_full_single_vertex():
    host = build_universal(1, 3)
    emb = embed_tree_full(host, Graph([7]))
    assert emb.mapping == {7: 1}


def test_full_size_mismatch():
    with pytest.raises(EmbeddingError):
        embed_tree_full(build_universal(6, 3), path(5))


def test_full_every_root_choice():
    for n in range(1, 9):
        host = build_universal(n, 3)
        for parent in enumerate_free_trees(n):
            t = tree_graph(parent)
            for v in t.vertices:
                emb = embed_tree_full(host, t, at_root=v)
                assert validate_embedding(host, t, emb, full=True)
                independent_check(n, 3, t, emb.mapping, full=True)


def test_validation_reports():
    host = build_universal(14, 3)
    g = path(13)
    good = embed_forest(host, g).mapping
    assert validate_embedding(host, g, good).message == "ok"
    bad = dict(good)
    bad[1] = bad[0]
    assert "not injective" in validate_embedding(host, g, bad).message
    cut = host.without_edges([(good[5], good[6])])
    assert "edge (5, 6)" in validate_embedding(cut, g, good).message
    assert "prefix" in validate_embedding(host, g, good, full=True).message


def test_deterministic():
    rng = random.Random(5)
    host = build_universal(121, 3)
    f = random_forest(100, rng, 4)
    assert embed_forest(host, f).mapping == embed_forest(host, f).mapping


def test_residual_is_admissible():
    rep = verify_admissible_residual(150, seed=11)
    assert rep.passed, rep.failures[:3]


def test_spider_boundary_sizes():
    for h in (3, 4):
        total = admissible(1, h, 3).total
        for size in (total - 1, total):
            host = admissible(size, h, 3)
            f = spider([(size - 2) // 3] * 3)
            if len(f) < host.n:
                assert validate_embedding(host, f, embed_forest(host, f))
