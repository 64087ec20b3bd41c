"""Separator procedures for forests and for graphs of bounded treewidth.

Everything reduces to one routine on a tree: pick a vertex ``s`` and a union
``F3`` of components of ``T - s`` whose size is as large as possible inside
``[m, M]``.  Forests are first joined into a tree by virtual edges; graphs
with a normal tree decomposition run the same routine on the decomposition
tree, where a component ``C`` of ``T - z`` stands for ``|C|`` graph vertices.

The two corollary procedures are written once over a *splitter* (anything
with ``graph``, ``w`` and ``three_way(subset, m, M)``), so the forest and
treewidth variants share their case analysis.  Tree variants use ``w = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable

from .decomposition import TreeDecomposition, normalize
from .graphs import Graph, crossing_edges


class SeparatorError(ValueError):
    pass


@dataclass(frozen=True)
class DeltaContext:
    N: int
    X: int

    def __post_init__(self):
        if not 0 < self.X <= self.N:
            raise SeparatorError(f"need 0 < X <= N, got N={self.N}, X={self.X}")


def delta(size: int, ctx: DeltaContext) -> int:
    """Vertices still missing before the next level-2 block boundary."""
    if size < ctx.X:
        return ctx.X - size
    return ctx.N - (size - ctx.X) % ctx.N


@dataclass(frozen=True)
class ThreeSplit:
    s: Hashable
    F1: frozenset
    F2: frozenset
    F3: frozenset

    @property
    def parts(self) -> tuple[frozenset, ...]:
        return self.F1, self.F2, self.F3


@dataclass(frozen=True)
class TwoSeparatorSplit:
    s1: Hashable
    s2: Hashable
    F1: frozenset
    F2: frozenset
    F3: frozenset
    F4: frozenset
    F5: frozenset
    F6: frozenset

    @property
    def parts(self) -> tuple[frozenset, ...]:
        return self.F1, self.F2, self.F3, self.F4, self.F5, self.F6

    @property
    def F_bar(self) -> frozenset:
        return self.F3 | self.F5 | self.F6 | {self.s2}


@dataclass(frozen=True)
class TwSplit:
    S: tuple
    G1: frozenset
    G2: frozenset
    G3: frozenset

    @property
    def parts(self) -> tuple[frozenset, ...]:
        return self.G1, self.G2, self.G3


@dataclass(frozen=True)
class TwTwoSeparatorSplit:
    S1: tuple
    S2: tuple
    G1: frozenset
    G2: frozenset
    G3: frozenset
    G4: frozenset
    G5: frozenset
    G6: frozenset

    @property
    def parts(self) -> tuple[frozenset, ...]:
        return self.G1, self.G2, self.G3, self.G4, self.G5, self.G6

    @property
    def G_bar(self) -> frozenset:
        return self.G3 | self.G5 | self.G6 | frozenset(self.S2)


# --- tree core ---------------------------------------------------------------


def _join_forest(g: Graph, keep: Iterable) -> dict:
    """Adjacency of the forest induced on ``keep`` plus virtual chain edges."""
    sub = g.induced(keep)
    adj = {v: set(ns) for v, ns in sub.adj.items()}
    reps = [comp[0] for comp in sub.components()]
    for a, b in zip(reps, reps[1:]):
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _rooted(adj: dict) -> tuple[list, dict, dict]:
    root = min(adj)
    order = [root]
    parent = {root: None}
    for u in order:
        for v in sorted(adj[u]):
            if v not in parent:
                parent[v] = u
                order.append(v)
    if len(order) != len(adj):
        raise SeparatorError("virtual tree is not connected")
    size = {v: 1 for v in order}
    for v in reversed(order[1:]):
        size[parent[v]] += size[v]
    return order, parent, size


def _branches(adj: dict, s) -> list[list]:
    """Components of ``T - s``, each sorted, ordered by smallest vertex."""
    out = []
    for start in sorted(adj[s]):
        comp, stack, seen = [start], [start], {s, start}
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    comp.append(v)
                    stack.append(v)
        out.append(sorted(comp))
    out.sort(key=lambda c: c[0])
    return out


def _subset_sum(sizes: list[int], lo: int, hi: int) -> tuple[int, list[int]] | None:
    """Largest reachable sum in ``[lo, hi]`` and the indices achieving it."""
    layers = [1]
    for k in sizes:
        layers.append(layers[-1] | (layers[-1] << k))
    reach = layers[-1] & ((1 << (hi + 1)) - 1)
    reach >>= lo
    if not reach:
        return None
    best = lo + reach.bit_length() - 1
    picked = []
    rest = best
    for i in range(len(sizes) - 1, -1, -1):
        if not (layers[i] >> rest) & 1:
            picked.append(i)
            rest -= sizes[i]
    assert rest == 0
    return best, sorted(picked)


def tree_split_three(adj: dict, m: int, M: int) -> tuple:
    """``(s, F1, F2, F3)`` on a tree given by adjacency sets.

    ``|F3|`` is the global maximum over every vertex and every union of
    components of ``T - s`` inside ``[m, M]``; ties go to the smallest vertex.
    """
    n = len(adj)
    if m < 0 or 2 * m > M:
        raise SeparatorError(f"need 0 <= m and 2m <= M, got m={m}, M={M}")
    if n < M + 1:
        raise SeparatorError(f"tree too small: {n} < M+1={M + 1}")
    order, parent, size = _rooted(adj)
    best = None
    for s in sorted(adj):
        sizes = [size[c] for c in adj[s] if parent.get(c) == s]
        if parent[s] is not None:
            sizes.append(n - size[s])
        hit = _subset_sum(sizes, m, M)
        if hit and (best is None or hit[0] > best[0]):
            best = (hit[0], s)
            if hit[0] == M:
                break
    if best is None:
        raise SeparatorError("no admissible separator (unreachable for valid input)")
    target, s = best
    comps = _branches(adj, s)
    hit = _subset_sum([len(c) for c in comps], target, target)
    assert hit is not None
    chosen = set(hit[1])
    F3 = frozenset(v for i in chosen for v in comps[i])
    rest = [c for i, c in enumerate(comps) if i not in chosen]
    if target == M:
        F1 = frozenset(v for c in rest for v in c)
        return s, F1, frozenset(), F3
    if len(rest) < 2:
        raise AssertionError("maximal F3 below M left a single remaining tree")
    small = min(rest, key=lambda c: (len(c), c[0]))
    F2 = frozenset(small)
    F1 = frozenset(v for c in rest if c is not small for v in c)
    return s, F1, F2, F3


def tree_split_bounded(adj: dict, t: int) -> tuple:
    """``(s, F')`` with ``F'`` a union of components of ``T - s`` and ``t <= |F'| <= 2t``."""
    if len(adj) < t + 1:
        raise SeparatorError("forest too small")
    order, parent, size = _rooted(adj)
    kids = {v: [] for v in order}
    for v in order[1:]:
        kids[parent[v]].append(v)
    s = min(v for v in order if size[v] >= t + 1 and all(size[c] <= t for c in kids[v]))
    picked: list = []
    total = 0
    for c in sorted(kids[s]):
        if total >= t:
            break
        picked.append(c)
        total += size[c]
    part = set()
    for c in picked:
        stack = [c]
        while stack:
            u = stack.pop()
            part.add(u)
            stack.extend(kids[u])
    return s, frozenset(part)


# --- splitters ---------------------------------------------------------------


class ForestSplitter:
    """Lemma-2 provider for a forest; separators are single vertices."""

    w = 0

    def __init__(self, forest: Graph):
        if not forest.is_forest():
            raise SeparatorError("graph is not a forest")
        self.graph = forest

    def three_way(self, subset: frozenset, m: int, M: int):
        s, f1, f2, f3 = tree_split_three(_join_forest(self.graph, subset), m, M)
        return (s,), f1, f2, f3

    def split_bounded(self, subset: frozenset, t: int):
        return tree_split_bounded(_join_forest(self.graph, subset), t)


class TwSplitter:
    """Lemma-2 provider for a graph with a width-``w`` tree decomposition.

    Each call restricts the decomposition to the requested vertices and puts
    it in normal form; separators are whole bags.
    """

    def __init__(self, graph: Graph, td: TreeDecomposition, w: int):
        self.graph = graph
        self.td = td
        self.w = w

    def normal_for(self, subset: frozenset) -> TreeDecomposition:
        sub = self.graph.induced(subset)
        return normalize(sub, self.td.restrict(subset), self.w)

    @staticmethod
    def _lift(td: TreeDecomposition, z, nodes: Iterable) -> frozenset:
        out = set()
        for x in nodes:
            out |= td.bags[x]
        return frozenset(out - td.bags[z])

    def three_way(self, subset: frozenset, m: int, M: int):
        td = self.normal_for(subset)
        adj = {x: set(ns) for x, ns in td.tree_adj().items()}
        z, t1, t2, t3 = tree_split_three(adj, m, M)
        parts = [self._lift(td, z, t) for t in (t1, t2, t3)]
        assert [len(p) for p in parts] == [len(t1), len(t2), len(t3)]
        return (tuple(sorted(td.bags[z])),) + tuple(parts)

    def split_bounded(self, subset: frozenset, t: int):
        td = self.normal_for(subset)
        adj = {x: set(ns) for x, ns in td.tree_adj().items()}
        z, nodes = tree_split_bounded(adj, t)
        return z, self._lift(td, z, nodes), td


# --- generic corollaries -----------------------------------------------------


def _check_parts(sp, whole: frozenset, seps: Iterable, parts: Iterable[frozenset]) -> None:
    parts = list(parts)
    seen: set = set()
    for blob in [frozenset(seps)] + parts:
        if seen & blob:
            raise AssertionError("parts overlap")
        seen |= blob
    if seen != whole:
        raise AssertionError("parts do not cover the input")
    bad = crossing_edges(sp.graph.induced(whole), [p for p in parts if p])
    if bad:
        raise AssertionError(f"edge {bad[0]} joins two parts")


def three_way(sp, part: frozenset, m: int, M: int):
    """``(S, G1, G2, G3)`` with ``m <= |G3| <= M``, ``|G1| <= |G|-w-1-M``, ``|G2| <= |G1|``."""
    w = sp.w
    if m < 0 or 2 * m > M:
        raise SeparatorError(f"need 0 <= m and 2m <= M, got m={m}, M={M}")
    if len(part) < M + w + 1:
        raise SeparatorError(f"input too small: {len(part)} < M+w+1={M + w + 1}")
    S, g1, g2, g3 = sp.three_way(frozenset(part), m, M)
    assert len(S) == w + 1
    assert m <= len(g3) <= M, (m, len(g3), M)
    assert len(g1) <= len(part) - w - 1 - M
    assert len(g2) <= len(g1)
    assert len(g3) == M or g2, "maximal G3 below M must leave two pieces"
    _check_parts(sp, frozenset(part), S, (g1, g2, g3))
    return S, g1, g2, g3


def one_separator(sp, part: frozenset, ctx: DeltaContext):
    """``(S, [G1, G2, G3])`` for ``2N+X+w+2 <= |G| <= 5N+X+2w+2``."""
    N, X, w = ctx.N, ctx.X, sp.w
    n = len(part)
    if N < w + 1:
        raise SeparatorError(f"need N >= w+1, got N={N}, w={w}")
    if not 2 * N + X + w + 2 <= n <= 5 * N + X + 2 * w + 2:
        raise SeparatorError(f"size {n} outside [{2 * N + X + w + 2}, {5 * N + X + 2 * w + 2}]")
    m = max(0, n - w - 1 - 4 * N - X)
    M = n - w - 1 - 2 * N - X
    S, g1, g2, g3 = three_way(sp, part, m, M)
    parts = [g1, g2, g3]
    check_one_separator(parts, ctx, w)
    return S, parts


def check_one_separator(parts, ctx: DeltaContext, w: int) -> None:
    g1, g2, g3 = (len(p) for p in parts)
    N, X = ctx.N, ctx.X
    assert g1 <= 2 * N + X, "G1 too large"
    assert g2 <= 2 * N + delta(g1, ctx), "G2 too large"
    assert g3 <= 2 * N + delta(g1 + g2, ctx) + w + 1, "G3 too large"
    assert g1 + g2 >= 2 * N + X, "G1 and G2 do not fill the first three blocks"


def two_separators(sp, part: frozenset, ctx: DeltaContext):
    """``(S1, S2, [G1..G6])`` for ``5N+X+2w+3 <= |G| <= 8N+X+3w+3``."""
    N, X, w = ctx.N, ctx.X, sp.w
    n = len(part)
    if N < w + 1:
        raise SeparatorError(f"need N >= w+1, got N={N}, w={w}")
    if not 5 * N + X + 2 * w + 3 <= n <= 8 * N + X + 3 * w + 3:
        raise SeparatorError(f"size {n} outside [{5 * N + X + 2 * w + 3}, {8 * N + X + 3 * w + 3}]")
    m1 = n - (5 * N + X + 2 * w + 2)
    M1 = n - (2 * N + X + w + 1)
    S1, g1, g2p, g3p = three_way(sp, part, m1, M1)
    d1 = delta(len(g1), ctx)
    empty = frozenset()

    if len(g1) + len(g2p) <= 4 * N + X:
        g2, g4, bar = g2p, empty, g3p
        d2 = delta(len(g1) + len(g2), ctx)
        if len(bar) <= 2 * N + d2 + w + 1:
            S2 = tuple(sorted(bar)[: w + 1])
            g3, g5, g6 = bar - frozenset(S2), empty, empty
        else:
            S2, (g3, g5, g6) = one_separator(sp, bar, DeltaContext(N, d2))
    else:
        g2 = empty
        bar = g2p | g3p
        if len(g1) == 2 * N + X:
            g4 = empty
            S2, (g3, g5, g6) = one_separator(sp, bar, DeltaContext(N, N))
        elif len(bar) < 5 * N + d1 + w + 2:
            # the one-separator overflow on its last part needs |bar| >= 5N+d1+w+2
            g4 = empty
            S2, (g3, g5, g6) = one_separator(sp, bar, DeltaContext(N, d1))
        else:
            g4, bar = g2p, g3p
            d14 = delta(len(g1) + len(g4), ctx)
            S2, g6, g5, g3 = three_way(sp, bar, d1, d14)

    parts = [g1, g2, g3, g4, g5, g6]
    _check_parts(sp, frozenset(part), tuple(S1), (g1, g2, g4, bar))
    _check_parts(sp, bar, tuple(S2), (g3, g5, g6))
    check_two_separators(parts, ctx, w, n)
    return S1, S2, parts


def extra_allowance(n: int, ctx: DeltaContext, w: int) -> int:
    """Slack allowed on the last part at the very top of the two-separator range."""
    c = n - (8 * ctx.N + ctx.X + 2 * w + 2)
    return c if 1 <= c <= w + 1 else 0


def check_two_separators(parts, ctx: DeltaContext, w: int, n: int) -> None:
    sizes = [len(p) for p in parts]
    N, X = ctx.N, ctx.X
    assert sizes[0] <= 2 * N + X, "G1 too large"
    # |G1| + |G2| >= 3N/2 + X, kept in integers
    assert 2 * (sizes[0] + sizes[1]) >= 3 * N + 2 * X, "G1 and G2 too small"
    for i in range(1, 6):
        slack = extra_allowance(n, ctx, w) if i == 5 else 0
        assert sizes[i] <= 2 * N + delta(sum(sizes[:i]), ctx) + slack, f"G{i + 1} too large"


# --- public API --------------------------------------------------------------


def _forest_splitter(F: Graph) -> ForestSplitter:
    return ForestSplitter(F)


def split_bounded(F: Graph, t: int) -> tuple:
    """Vertex ``s`` and a union ``F'`` of components of ``F - s`` with ``t <= |F'| <= 2t``."""
    if t < 0:
        raise SeparatorError("t must be non-negative")
    if len(F) <= t:
        raise SeparatorError("forest too small")
    return _forest_splitter(F).split_bounded(frozenset(F), t)


def split_three(F: Graph, m: int, M: int) -> ThreeSplit:
    S, f1, f2, f3 = three_way(_forest_splitter(F), frozenset(F), m, M)
    return ThreeSplit(S[0], f1, f2, f3)


def split_one_sep(F: Graph, ctx: DeltaContext) -> ThreeSplit:
    S, (f1, f2, f3) = one_separator(_forest_splitter(F), frozenset(F), ctx)
    return ThreeSplit(S[0], f1, f2, f3)


def split_two_sep(F: Graph, ctx: DeltaContext) -> TwoSeparatorSplit:
    S1, S2, parts = two_separators(_forest_splitter(F), frozenset(F), ctx)
    return TwoSeparatorSplit(S1[0], S2[0], *parts)


def split_bounded_tw(G: Graph, td: TreeDecomposition, t: int, w: int | None = None) -> tuple:
    """``(z, part, normal_td)``: bag ``z`` of ``normal_td`` and ``t <= |part| <= 2t``."""
    w = td.width if w is None else w
    if len(G) < t + w + 1:
        raise SeparatorError(f"graph too small: {len(G)} < t+w+1={t + w + 1}")
    return TwSplitter(G, td, w).split_bounded(frozenset(G), t)


def split_three_tw(G: Graph, td: TreeDecomposition, m: int, M: int, w: int) -> TwSplit:
    S, g1, g2, g3 = three_way(TwSplitter(G, td, w), frozenset(G), m, M)
    return TwSplit(S, g1, g2, g3)


def split_one_sep_tw(G: Graph, td: TreeDecomposition, ctx: DeltaContext, w: int) -> TwSplit:
    S, (g1, g2, g3) = one_separator(TwSplitter(G, td, w), frozenset(G), ctx)
    return TwSplit(S, g1, g2, g3)


def split_two_sep_tw(G: Graph, td: TreeDecomposition, ctx: DeltaContext, w: int) -> TwTwoSeparatorSplit:
    S1, S2, parts = two_separators(TwSplitter(G, td, w), frozenset(G), ctx)
    return TwTwoSeparatorSplit(S1, S2, *parts)


__all__ = [
    "DeltaContext", "ForestSplitter", "SeparatorError", "ThreeSplit", "TwSplit",
    "TwSplitter", "TwTwoSeparatorSplit", "TwoSeparatorSplit", "delta", "three_way",
    "one_separator", "split_bounded", "split_bounded_tw", "split_one_sep",
    "split_one_sep_tw", "split_three", "split_three_tw", "split_two_sep",
    "split_two_sep_tw", "tree_split_bounded", "tree_split_three", "two_separators",
]
