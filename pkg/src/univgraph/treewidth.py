"""Universal graphs for bounded treewidth: the (w+1)-clique blow-up of
U(n*, 3), its edge accounting, the matching lower bound, and the embedding
of graphs given with a tree decomposition.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from itertools import combinations

from .addressing import vertex_count
from .construction import DEFAULT_T3_MODE, HostGraph, admissible, build_universal, height_for
from .decomposition import (
    DecompositionError,
    TreeDecomposition,
    normalize,
    validate,
)
from .embedding import (
    Embedding,
    EmbeddingError,
    run_embedding,
    view_of,
)
from .graphs import Graph
from .separators import TwSplitter

normalize_decomposition = normalize


def build_universal_tw(n: int, w: int, t3_mode: str = DEFAULT_T3_MODE) -> HostGraph:
    """The last ``n`` blown positions of T*_{h,3} with cliques of size ``w + 1``,
    where ``h`` is the height of U(ceil(n / (w+1)), 3)."""
    if n < 1 or w < 0:
        raise ValueError("need n >= 1 and w >= 0")
    q = w + 1
    n_star = -(-n // q)
    h = height_for(n_star, 3)
    return admissible(n, h, 3, q, t3_mode)


def count_edges_tw(n: int, w: int, t3_mode: str = DEFAULT_T3_MODE) -> int:
    return build_universal_tw(n, w, t3_mode).count_edges()


def blowup_bound(n: int, w: int) -> int:
    """Edges of U(n*, 3) counted ``(w+1)^2`` times plus one clique per base vertex."""
    q = w + 1
    n_star = -(-n // q)
    return q * q * build_universal(n_star, 3).count_edges() + math.comb(q, 2) * n_star


def leading_term_tw(n: int, w: int) -> float:
    """``19 / (6 ln 3) * (w+1) * n * ln(n/w)``."""
    return 19 / (6 * math.log(3)) * (w + 1) * n * math.log(n / max(w, 1))


def lower_bound_edges(n: int, w: int) -> int:
    """``sum_{j=1}^{floor(n/(2w+1))} w * (floor(n/j) - 2w)``."""
    top = n // (2 * w + 1)
    if top == 0:
        warnings.warn(f"n={n} < 2w+1={2 * w + 1}: empty sum", stacklevel=2)
        return 0
    return sum(w * (n // j - 2 * w) for j in range(1, top + 1))


def quotient_adjacency(host: HostGraph) -> set[tuple[int, int]]:
    """Base-vertex pairs joined by at least one edge after contracting every clique."""
    q = host.q
    pairs = set()
    for a, b in host.edges():
        x, y = (a - 1) // q + 1, (b - 1) // q + 1
        if x != y:
            pairs.add((min(x, y), max(x, y)))
    return pairs


# --- test instances ----------------------------------------------------------


def generate_partial_ktree(n: int, w: int, seed: int = 0, keep_prob: float = 1.0):
    """Random partial ``w``-tree on ``0..n-1`` with its natural decomposition.

    Starts from a ``w+1`` clique and repeatedly joins a new vertex to a random
    ``w``-subset of an existing bag.  Each edge is then kept with probability
    ``keep_prob``; the decomposition stays valid for any subgraph.
    """
    if n < w + 1:
        raise ValueError(f"need n >= w+1, got n={n}, w={w}")
    if not 0.0 <= keep_prob <= 1.0:
        raise ValueError("keep_prob must be in [0, 1]")
    rng = random.Random(seed)
    base = list(range(w + 1))
    bags = {0: frozenset(base)}
    tree_edges = []
    edges = set(combinations(base, 2))
    for v in range(w + 1, n):
        parent = rng.randrange(len(bags))
        members = sorted(bags[parent])
        members.pop(rng.randrange(len(members)))
        for u in members:
            edges.add((u, v))
        k = len(bags)
        bags[k] = frozenset(members + [v])
        tree_edges.append((parent, k))
    if keep_prob < 1.0:
        edges = {e for e in sorted(edges) if rng.random() < keep_prob}
    g = Graph(range(n), edges)
    return g, TreeDecomposition(bags, tree_edges)


# --- embedding ---------------------------------------------------------------


def embed_graph_tw(host: HostGraph, g: Graph, td: TreeDecomposition, w: int | None = None) -> Embedding:
    """Embed ``g`` (treewidth at most ``w`` as certified by ``td``) onto the
    first ``|g|`` vertices of the blown admissible ``host``."""
    w = host.q - 1 if w is None else w
    if host.q != w + 1:
        raise ValueError(f"host cliques have size {host.q}, expected w+1={w + 1}")
    if host.d != 3:
        raise ValueError("blown hosts are ternary")
    if len(g) > host.n - w - 1:
        raise EmbeddingError("size", f"{len(g)} vertices exceed |A|-w-1 = {host.n - w - 1}")
    if len(g) == 0:
        return Embedding(host, {})
    validate(g, td)
    if td.width > w:
        raise DecompositionError(f"decomposition width {td.width} exceeds {w}")
    mapping, branches = run_embedding(view_of(host), g, TwSplitter(g, td, w))
    return Embedding(host, mapping, branches)


def embed_graph_full_tw(host: HostGraph, g: Graph, td: TreeDecomposition, w: int | None = None) -> Embedding:
    """Bijective embedding: the ``w+1`` smallest vertices go to the root clique,
    the rest onto the prefix."""
    w = host.q - 1 if w is None else w
    if len(g) != host.n:
        raise EmbeddingError("size", f"graph has {len(g)} vertices, host has {host.n}")
    validate(g, td)
    if td.width > w:
        raise DecompositionError(f"decomposition width {td.width} exceeds {w}")
    order = g.vertices
    k = min(w + 1, len(order))
    S, rest = order[:k], order[k:]
    sub = g.induced(rest)
    emb = embed_graph_tw(host, sub, td.restrict(rest), w) if rest else Embedding(host, {})
    for i, v in enumerate(S):
        emb.mapping[v] = host.total - k + 1 + i
    emb.branches["full:root clique"] += 1
    return emb


@dataclass(frozen=True)
class TwBoundsRow:
    n: int
    w: int
    lower: int
    edges: int
    accounting: int

    @property
    def ratio(self) -> float:
        return self.edges / leading_term_tw(self.n, self.w) if self.n > self.w else float("nan")


def tw_bounds(n: int, w: int, t3_mode: str = DEFAULT_T3_MODE) -> TwBoundsRow:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lower = lower_bound_edges(n, w)
    return TwBoundsRow(n, w, lower, count_edges_tw(n, w, t3_mode), blowup_bound(n, w))


__all__ = [
    "TwBoundsRow", "blowup_bound", "build_universal_tw", "count_edges_tw",
    "embed_graph_full_tw", "embed_graph_tw", "generate_partial_ktree",
    "leading_term_tw", "lower_bound_edges", "normalize_decomposition",
    "quotient_adjacency", "tw_bounds", "vertex_count",
]
