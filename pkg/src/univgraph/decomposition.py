"""Tree decompositions: validation, restriction and normal form.

A decomposition is normal for width ``w`` when every bag holds exactly
``w + 1`` vertices and adjacent bags share exactly ``w`` of them.  In that
form each non-root bag introduces one new vertex, which is what lets the
separator code count graph vertices by counting decomposition nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable

from .graphs import Graph


class DecompositionError(ValueError):
    """A tree decomposition violates one of its axioms."""


@dataclass
class TreeDecomposition:
    bags: dict[int, frozenset]
    tree_edges: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self.bags = {k: frozenset(b) for k, b in self.bags.items()}
        self.tree_edges = [tuple(e) for e in self.tree_edges]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def tree_adj(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {x: [] for x in self.bags}
        for x, y in self.tree_edges:
            adj[x].append(y)
            adj[y].append(x)
        for ns in adj.values():
            ns.sort()
        return adj

    def restrict(self, keep: Iterable[Hashable]) -> "TreeDecomposition":
        """Decomposition of the induced subgraph on ``keep`` (bags may become empty)."""
        keep = frozenset(keep)
        return TreeDecomposition({x: b & keep for x, b in self.bags.items()}, list(self.tree_edges))

    def is_normal(self, w: int) -> bool:
        if any(len(b) != w + 1 for b in self.bags.values()):
            return False
        return all(len(self.bags[x] & self.bags[y]) == w for x, y in self.tree_edges)


def validate(g: Graph, td: TreeDecomposition) -> None:
    """Raise :class:`DecompositionError` naming the first violated axiom."""
    nodes = list(td.bags)
    if not nodes:
        if len(g):
            raise DecompositionError("vertex coverage: no bags for a non-empty graph")
        return
    for x, y in td.tree_edges:
        if x not in td.bags or y not in td.bags:
            raise DecompositionError(f"tree edge ({x}, {y}) names an unknown bag")
    if len(td.tree_edges) != len(nodes) - 1:
        raise DecompositionError("decomposition tree: edge count is not #bags - 1")
    adj = td.tree_adj()
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != len(nodes):
        raise DecompositionError("decomposition tree: not connected")

    holders: dict = {}
    for x, bag in td.bags.items():
        for v in bag:
            if v not in g:
                raise DecompositionError(f"bag {x} contains {v!r}, which is not a graph vertex")
            holders.setdefault(v, set()).add(x)
    for v in g:
        if v not in holders:
            raise DecompositionError(f"vertex coverage: {v!r} is in no bag")
    for u, v in g.edges():
        if not holders[u] & holders[v]:
            raise DecompositionError(f"edge coverage: edge ({u!r}, {v!r}) is in no bag")
    for v, xs in holders.items():
        start = min(xs)
        reach = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in xs and y not in reach:
                    reach.add(y)
                    stack.append(y)
        if reach != xs:
            raise DecompositionError(f"connectivity: bags holding {v!r} are not a subtree")


def normalize(g: Graph, td: TreeDecomposition, w: int) -> TreeDecomposition:
    """Normal decomposition of ``g`` with bags of size ``w + 1``.

    Steps: pad every bag to ``w + 1`` (top-down from a largest bag, taking
    vertices from the parent), contract adjacent equal bags, then subdivide
    each tree edge whose bags share fewer than ``w`` vertices by a path of
    one-vertex swaps.
    """
    validate(g, td)
    if td.width > w:
        raise DecompositionError(f"width {td.width} exceeds {w}")
    if len(g) < w + 1:
        raise DecompositionError(f"graph has {len(g)} vertices, fewer than w+1={w + 1}")
    if td.is_normal(w):
        return td

    bags = {x: set(b) for x, b in td.bags.items()}
    adj = td.tree_adj()
    root = min(bags, key=lambda x: (-len(bags[x]), x))

    # Fill the root from vertices it lacks; adding a vertex to every bag keeps
    # the subtree property trivially.
    pool = [v for v in g.vertices if v not in bags[root]]
    while len(bags[root]) < w + 1:
        u = pool.pop(0)
        for b in bags.values():
            b.add(u)

    order = [root]
    parent = {root: None}
    for x in order:
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                order.append(y)
    for x in order[1:]:
        p = bags[parent[x]]
        extra = sorted(p - bags[x])
        while len(bags[x]) < w + 1:
            bags[x].add(extra.pop(0))

    # Contract equal neighbours (union-find onto the parent).
    rep = {x: x for x in order}

    def find(x):
        while rep[x] != x:
            rep[x] = rep[rep[x]]
            x = rep[x]
        return x

    for x in order[1:]:
        if bags[x] == bags[parent[x]]:
            rep[x] = find(parent[x])
    kept = [x for x in order if find(x) == x]
    edges = []
    for x in order[1:]:
        a, b = find(x), find(parent[x])
        if a != b:
            edges.append((b, a))

    new_id = {x: i for i, x in enumerate(kept)}
    out_bags = {new_id[x]: frozenset(bags[x]) for x in kept}
    out_edges: list[tuple[int, int]] = []
    nxt = len(kept)
    for a, b in edges:
        left, right = bags[a], bags[b]
        prev = new_id[a]
        cur = set(left)
        drop = sorted(left - right)
        add = sorted(right - left)
        # |drop| == |add| because both bags have w+1 vertices
        for out_v, in_v in list(zip(drop, add))[:-1]:
            cur.discard(out_v)
            cur.add(in_v)
            out_bags[nxt] = frozenset(cur)
            out_edges.append((prev, nxt))
            prev = nxt
            nxt += 1
        out_edges.append((prev, new_id[b]))

    result = TreeDecomposition(out_bags, out_edges)
    validate(g, result)
    assert result.is_normal(w)
    return result


def natural_path_decomposition(n: int) -> TreeDecomposition:
    """Bags {i, i+1} for the path 0-1-...-(n-1)."""
    if n == 1:
        return TreeDecomposition({0: {0}})
    bags = {i: {i, i + 1} for i in range(n - 1)}
    return TreeDecomposition(bags, [(i, i + 1) for i in range(n - 2)])


def forest_decomposition(g: Graph) -> TreeDecomposition:
    """Width-1 decomposition of a forest: one bag per edge and per isolated vertex."""
    if not g.is_forest():
        raise ValueError("graph is not a forest")
    bags: dict[int, frozenset] = {}
    edges: list[tuple[int, int]] = []
    anchor: dict = {}
    for comp in g.components():
        root = comp[0]
        first = len(bags)
        bags[first] = frozenset({root})
        anchor[root] = first
        stack = [root]
        seen = {root}
        while stack:
            u = stack.pop()
            for v in sorted(g.neighbors(u)):
                if v not in seen:
                    seen.add(v)
                    k = len(bags)
                    bags[k] = frozenset({u, v})
                    edges.append((anchor[u], k))
                    anchor[v] = k
                    stack.append(v)
        if first:
            edges.append((0, first))
    return TreeDecomposition(bags, edges)
