"""Small undirected graph container shared by the separator and embedding code.

Vertices are hashable, orderable ids (usually ints).  Graphs are treated as
immutable once built; ``induced`` returns a fresh object.
"""

from __future__ import annotations

from typing import Hashable, Iterable, Iterator, Mapping


class Graph:
    __slots__ = ("adj",)

    def __init__(self, vertices: Iterable[Hashable] = (), edges: Iterable[tuple] = ()):
        adj: dict = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        self.adj = adj

    @classmethod
    def from_adjacency(cls, adj: Mapping) -> "Graph":
        g = cls()
        g.adj = {v: set(ns) for v, ns in adj.items()}
        return g

    def __len__(self) -> int:
        return len(self.adj)

    def __contains__(self, v) -> bool:
        return v in self.adj

    def __iter__(self) -> Iterator:
        return iter(self.adj)

    def __repr__(self) -> str:
        return f"Graph(n={len(self)}, m={self.edge_count()})"

    @property
    def vertices(self) -> list:
        return sorted(self.adj)

    def neighbors(self, v) -> set:
        return self.adj[v]

    def has_edge(self, u, v) -> bool:
        return v in self.adj.get(u, ())

    def edges(self) -> list[tuple]:
        out = []
        for u in sorted(self.adj):
            for v in sorted(self.adj[u]):
                if u < v:
                    out.append((u, v))
        return out

    def edge_count(self) -> int:
        return sum(len(ns) for ns in self.adj.values()) // 2

    def induced(self, keep: Iterable) -> "Graph":
        keep = set(keep)
        g = Graph()
        g.adj = {v: self.adj[v] & keep for v in keep}
        return g

    def components(self, within: Iterable | None = None) -> list[list]:
        """Connected components (each sorted), ordered by their smallest vertex."""
        pool = set(self.adj if within is None else within)
        out = []
        for start in sorted(pool):
            if start not in pool:
                continue
            pool.discard(start)
            comp, stack = [start], [start]
            while stack:
                u = stack.pop()
                for v in self.adj[u]:
                    if v in pool:
                        pool.discard(v)
                        comp.append(v)
                        stack.append(v)
            out.append(sorted(comp))
        return out

    def is_forest(self) -> bool:
        return self.edge_count() == len(self) - len(self.components())


def crossing_edges(g: Graph, parts: Iterable[Iterable]) -> list[tuple]:
    """Edges of ``g`` whose endpoints lie in two different ``parts``."""
    owner = {}
    for i, part in enumerate(parts):
        for v in part:
            owner[v] = i
    bad = []
    for u, v in g.edges():
        if u in owner and v in owner and owner[u] != owner[v]:
            bad.append((u, v))
    return bad
