"""Acceptance suite.  Each test checks one criterion at its stated tolerance
and records a PASS/FAIL line shown in the terminal summary."""

import functools
import math
import time

from univgraph.addressing import vertex_count
from univgraph.construction import build_universal, edge_attribution, universal_edge_counts
from univgraph.embedding import EmbeddingError, embed_tree_full, validate_embedding
from univgraph.harness import (
    DEFAULT_SEED,
    brute_universality_check,
    enumerate_free_trees,
    find_tree_embedding,
    fit_residual_constant,
    prufer_free_tree_count,
    residual_maxima,
    tree_graph,
    verify,
    verify_admissible_residual,
    verify_mutation,
    verify_separators,
    verify_tw,
)
from univgraph.treewidth import blowup_bound, count_edges_tw, lower_bound_edges


@functools.lru_cache(maxsize=None)
def _enumerator_mismatches():
    return tuple(n for n in range(1, 12) if sum(1 for _ in enumerate_free_trees(n)) != prufer_free_tree_count(n))


def _tree_suite(d, criterion, k):
    t0 = time.perf_counter()
    mismatched = list(_enumerator_mismatches())
    rep = verify(11, d)
    secs = time.perf_counter() - t0
    ok = rep.passed and not mismatched
    detail = f"{rep.tried} trees into U(n,{d}), n<=11, {len(rep.failures)} failures"
    detail += f", enumerator vs Prufer mismatches at n={mismatched or 'none'}, {secs:.1f}s"
    assert criterion(k, ok, detail), rep.summary()


def test_criterion_1_ternary_trees(criterion):
    _tree_suite(3, criterion, 1)


def test_criterion_2_binary_trees(criterion):
    _tree_suite(2, criterion, 2)


def test_criterion_3_brute_force_agreement(criterion):
    disagree, checked = [], 0
    for d in (3, 2):
        for n in range(1, 8):
            host = build_universal(n, d)
            adj = {p: set(host.neighbors(p)) for p in host.positions()}
            for parent in enumerate_free_trees(n):
                checked += 1
                brute = find_tree_embedding(adj, parent) is not None
                t = tree_graph(parent)
                try:
                    algo = bool(validate_embedding(host, t, embed_tree_full(host, t), full=True))
                except EmbeddingError:
                    algo = False
                if not (brute and algo):
                    disagree.append((d, n, parent, brute, algo))
            assert brute_universality_check(host, n).passed
    detail = f"{checked} (d, n, tree) cases, n<=7, {len(disagree)} without a brute-force and algorithmic embedding"
    assert criterion(3, not disagree, detail), disagree[:5]


def test_criterion_4_admissible_residual(criterion):
    rep = verify_admissible_residual(1000, DEFAULT_SEED, max_size=121)
    ok = rep.passed and rep.tried >= 1000
    assert criterion(4, ok, f"{rep.tried} instances |A|<=121, {len(rep.failures)} violations"), rep.summary()


def test_criterion_5_separators(criterion):
    t0 = time.perf_counter()
    runs = [
        ("bounded", (0, 1, 2, 3)),
        ("three-way", (0, 1, 2, 3)),
        ("one-separator", (0,)),
        ("two-separators", (0,)),
        ("one-separator", (1, 2, 3)),
        ("two-separators", (1, 2, 3)),
    ]
    reps = [verify_separators(10_000, DEFAULT_SEED, [proc], widths) for proc, widths in runs]
    secs = time.perf_counter() - t0
    bad = sum(len(p.failures) for r in reps for p in r.parts)
    tried = [r.tried for r in reps]
    ok = bad == 0 and min(tried) >= 10_000 and secs < 60
    detail = f"{len(runs)} procedures x {min(tried)} instances, {bad} violations, {secs:.1f}s (limit 60s)"
    assert criterion(5, ok, detail), "\n".join(r.summary() for r in reps)


def test_criterion_6_edge_counts(criterion):
    att_bad = []
    for h in range(5):
        a = edge_attribution(h, 3)
        if not (a.budget_sum == a.raw == a.distinct + a.self_pairs + a.repeats
                and a.distinct == build_universal(vertex_count(h, 3), 3).count_edges()):
            att_bad.append(h)
    top = 3280
    counts = universal_edge_counts(top, 3)
    c = fit_residual_constant(7)
    lead = 19 / (6 * math.log(3))
    over = [n for n in range(2, top + 1) if counts[n] / (n * math.log(n)) > lead + c / math.log(n)]
    m = residual_maxima(7)
    incs = [m[h] - m[h - 1] for h in range(4, 8)]
    converging = all(x > 0 for x in incs) and all(b < a for a, b in zip(incs, incs[1:]))
    ok = not att_bad and not over and converging
    detail = (f"attribution mismatches at h={att_bad or 'none'}, C={c:.4f}, "
              f"{len(over)} of {top - 1} sizes above the bound, residual maxima converging={converging}")
    assert criterion(6, ok, detail), (att_bad, over[:5], incs)


def test_criterion_7_treewidth_embedding(criterion):
    t0 = time.perf_counter()
    reps = [verify_tw(range(w + 1, 61), w, 200, DEFAULT_SEED + w) for w in (1, 2, 3)]
    secs = time.perf_counter() - t0
    fails = sum(len(r.failures) for r in reps)
    ok = fails == 0 and all(r.tried == 200 for r in reps) and secs < 60
    detail = f"w in {{1,2,3}} x 200 partial k-trees n<=60, {fails} failures, {secs:.1f}s (limit 60s)"
    assert criterion(7, ok, detail), "\n".join(r.summary() for r in reps)


def test_criterion_8_blowup_accounting(criterion):
    over, not_below, excluded, checked = [], [], 0, 0
    for w in range(1, 5):
        for n in range(1, 501):
            e = count_edges_tw(n, w)
            checked += 1
            if e > blowup_bound(n, w):
                over.append((n, w))
            if n < 2 * w + 1:
                excluded += 1
            elif not lower_bound_edges(n, w) < e:
                not_below.append((n, w))
    ok = not over and not not_below
    detail = (f"{checked} (n, w) pairs, {len(over)} above the accounting bound, "
              f"{len(not_below)} with lower >= edges, {excluded} pairs with n < 2w+1 excluded from the lower-bound check")
    assert criterion(8, ok, detail), (over[:5], not_below[:5])


def test_criterion_9_mutation_sensitivity(criterion):
    rep = verify_mutation((5, 6, 7))
    detail = f"{rep.tried} root-edge deletions for n in {{5,6,7}}, {len(rep.failures)} undetected"
    assert criterion(9, rep.passed and rep.tried > 0, detail), rep.summary()
