"""The host graphs T*_{h,d}, the universal graphs U(n,d) and their edge counts.

Vertices are identified with their 1-based eating position.  Adjacency is held
as one Python int per vertex (bit ``p`` set means adjacent to position ``p``),
so eating-order prefixes and suffixes are plain masks.

The same machinery covers the clique blow-up used for bounded treewidth: with
clique size ``q > 1`` every base vertex becomes ``q`` consecutive positions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterator

from .addressing import (
    Address,
    ROOT,
    eat_at,
    eat_index,
    render,
    shift,
    subtree_span,
    vertex_count,
)

# Materialize adjacency rows only up to this many vertices.
EAGER_LIMIT = 30_000

T3_MODES = ("blowup", "half", "literal")
DEFAULT_T3_MODE = "blowup"


def height_for(n: int, d: int) -> int:
    """Smallest ``h`` with ``n <= |T*_{h,d}|``."""
    if n < 1:
        raise ValueError("n must be positive")
    h = 0
    while vertex_count(h, d) < n:
        h += 1
    return h


def per_vertex_edge_budget(level: int, h: int, d: int) -> int:
    delta3 = 1 if d == 3 else 0
    return (
        d * vertex_count(h - level, d)
        - 1
        + delta3 * (vertex_count(h - level - 1, 3) // 2)
    )


# ---------------------------------------------------------------------------
# edge rules
# ---------------------------------------------------------------------------


def rule_intervals(v: Address, h: int, d: int) -> list[tuple[str, int, int]]:
    """Eating-position intervals generated by ``v`` under the three edge rules.

    Intervals may overlap each other or contain ``v`` itself (root level,
    wrap-around at level 1); callers dedupe.
    """
    out = []
    lo, hi = subtree_span(v, d, h)
    if lo < hi:
        out.append(("T1", lo, hi - 1))
    for i in range(1, d):
        lo, hi = subtree_span(shift(v, -i, d), d, h)
        out.append(("T2", lo, hi))
    if d == 3 and len(v) < h:
        lo, hi = type3_span(v, h)
        if lo <= hi:
            out.append(("T3", lo, hi))
    return out


def type3_span(v: Address, h: int) -> tuple[int, int]:
    """Positions of the eaten-last half of ``{z} u D_z``, z the smallest child of v+1."""
    z = shift(v, 1, 3) + (1,)
    lo, hi = subtree_span(z, 3, h)
    k = (hi - lo + 1) // 2
    return hi - k + 1, hi


def type3_targets(v: Address, h: int) -> set[Address]:
    if len(v) >= h:
        return set()
    lo, hi = type3_span(v, h)
    return {eat_at(p, 3, h) for p in range(lo, hi + 1)}


def generates(u: Address, v: Address, h: int, d: int) -> bool:
    """Rule evaluator: does ``u`` add the edge ``uv`` by T1, T2 or T3?"""
    if u == v:
        return False
    if len(v) > len(u) and v[: len(u)] == u:
        return True
    for i in range(1, d):
        x = shift(u, -i, d)
        if v[: len(x)] == x:
            return True
    if d == 3 and len(u) < h:
        z = shift(u, 1, 3) + (1,)
        if v[: len(z)] == z:
            lo, hi = type3_span(u, h)
            return lo <= eat_index(v, 3, h) <= hi
    return False


def rule_adjacent(u: Address, v: Address, h: int, d: int) -> bool:
    return generates(u, v, h, d) or generates(v, u, h, d)


# ---------------------------------------------------------------------------
# bitset rows
# ---------------------------------------------------------------------------


def _mask(lo: int, hi: int) -> int:
    if lo > hi:
        return 0
    return ((1 << (hi - lo + 1)) - 1) << lo


def _t3_block_mask(blo: int, bhi: int, q: int, mode: str) -> int:
    """Type-3 targets inside the blown block ``blo..bhi`` of ``z`` (z's clique last)."""
    size = bhi - blo + 1
    if q == 1 or mode == "blowup":
        k = size // q // 2 * q
        return _mask(bhi - k + 1, bhi)
    if mode == "half":
        return _mask(bhi - size // 2 + 1, bhi)
    # literal: C_(z,w+1) leaves out (z, w+1), the first-eaten slot of z's clique
    skip = bhi - q + 1
    k = (size - 1) // 2
    if k < q:
        return _mask(bhi - k + 1, bhi)
    return _mask(bhi - k, bhi) & ~(1 << skip)


def type3_cover(n_base: int, q: int, mode: str) -> int:
    """Length of the eaten-last suffix of a blown block of ``n_base`` cliques
    that is entirely joined to the type-3 source."""
    bhi = n_base * q
    m = _t3_block_mask(1, bhi, q, mode)
    k = 0
    while k < bhi and m >> (bhi - k) & 1:
        k += 1
    return k


def _blown_t3_mask(v: Address, h: int, q: int, mode: str) -> int:
    z = shift(v, 1, 3) + (1,)
    lo, hi = subtree_span(z, 3, h)
    return _t3_block_mask((lo - 1) * q + 1, hi * q, q, mode)


@lru_cache(maxsize=32)
def tstar_rows(h: int, d: int, q: int = 1, t3_mode: str = DEFAULT_T3_MODE) -> tuple[int, ...]:
    """Symmetric adjacency rows of T*_{h,d} blown up by cliques of size ``q``.

    Index ``p`` (1-based blown eating position) holds the neighbour mask;
    index 0 is unused.
    """
    if t3_mode not in T3_MODES:
        raise ValueError(f"unknown T3 mode {t3_mode!r}")
    total = vertex_count(h, d) * q
    if total > EAGER_LIMIT:
        raise MemoryError(f"{total} vertices exceeds the eager limit {EAGER_LIMIT}")
    rows = [0] * (total + 1)
    for p in range(1, vertex_count(h, d) + 1):
        v = eat_at(p, d, h)
        gen = 0
        for rule, lo, hi in rule_intervals(v, h, d):
            if rule == "T3":
                continue
            gen |= _mask((lo - 1) * q + 1, hi * q)
        if d == 3 and len(v) < h:
            gen |= _blown_t3_mask(v, h, q, t3_mode)
        clique = _mask((p - 1) * q + 1, p * q)
        for b in range((p - 1) * q + 1, p * q + 1):
            rows[b] |= (gen | clique) & ~(1 << b)
    # symmetric closure
    for b in range(1, total + 1):
        m = rows[b] >> (b + 1)
        base = b + 1
        bit = 1 << b
        while m:
            low = m & -m
            rows[base + low.bit_length() - 1] |= bit
            m ^= low
    for b in range(1, total + 1):
        m = rows[b] & ((1 << b) - 1)
        bit = 1 << b
        while m:
            low = m & -m
            rows[low.bit_length() - 1] |= bit
            m ^= low
    return tuple(rows)


@lru_cache(maxsize=64)
def _pruned_rows(h: int, d: int, q: int, t3_mode: str, removed: frozenset) -> tuple[int, ...]:
    rows = list(tstar_rows(h, d, q, t3_mode))
    for a, b in removed:
        rows[a] &= ~(1 << b)
        rows[b] &= ~(1 << a)
    return tuple(rows)


def suffix_edge_counts(h: int, d: int, q: int = 1, t3_mode: str = DEFAULT_T3_MODE) -> list[int]:
    """``out[k]`` = number of edges among the last ``k`` vertices, k = 0..total."""
    rows = tstar_rows(h, d, q, t3_mode)
    total = len(rows) - 1
    out = [0] * (total + 1)
    acc = 0
    for k in range(1, total + 1):
        p = total - k + 1
        acc += (rows[p] >> (p + 1)).bit_count()
        out[k] = acc
    return out


# ---------------------------------------------------------------------------
# host graphs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class HostGraph:
    """Induced subgraph of the (blown-up) T*_{h,d} on an eating-order suffix.

    ``start`` is the first blown position kept; vertex ids in files are
    ``position - start + 1``.
    """

    h: int
    d: int
    start: int = 1
    q: int = 1
    t3_mode: str = DEFAULT_T3_MODE
    removed: frozenset = frozenset()  # deleted edges as position pairs, for mutation tests

    @property
    def total(self) -> int:
        return vertex_count(self.h, self.d) * self.q

    @property
    def n(self) -> int:
        return self.total - self.start + 1

    @property
    def eager(self) -> bool:
        return self.total <= EAGER_LIMIT

    def positions(self) -> range:
        return range(self.start, self.total + 1)

    def _rows(self) -> tuple[int, ...]:
        if self.removed:
            return _pruned_rows(self.h, self.d, self.q, self.t3_mode, self.removed)
        return tstar_rows(self.h, self.d, self.q, self.t3_mode)

    def without_edges(self, edges) -> "HostGraph":
        """Same host with the given position pairs deleted."""
        extra = frozenset((min(a, b), max(a, b)) for a, b in edges)
        return replace(self, removed=self.removed | extra)

    def row(self, p: int) -> int:
        """Neighbour mask of position ``p`` restricted to the vertex set."""
        return self._rows()[p] >> self.start << self.start

    def adjacent(self, a: int, b: int) -> bool:
        if not (self.start <= a <= self.total and self.start <= b <= self.total):
            return False
        if self.eager:
            return bool(self._rows()[a] >> b & 1)
        if (min(a, b), max(a, b)) in self.removed:
            return False
        if self.q != 1:
            raise MemoryError("on-demand adjacency is only available for q = 1")
        return rule_adjacent(eat_at(a, self.d, self.h), eat_at(b, self.d, self.h), self.h, self.d)

    def neighbors(self, p: int) -> list[int]:
        m = self.row(p)
        out = []
        while m:
            low = m & -m
            out.append(low.bit_length() - 1)
            m ^= low
        return out

    def edges(self) -> Iterator[tuple[int, int]]:
        rows = self._rows()
        for p in self.positions():
            m = rows[p] >> (p + 1)
            while m:
                low = m & -m
                yield p, p + low.bit_length()
                m ^= low

    def count_edges(self) -> int:
        rows = self._rows()
        return sum((rows[p] >> (p + 1)).bit_count() for p in self.positions())

    def address(self, p: int):
        """Base address (q = 1) or ``(address, slot)`` of a blown position."""
        base = (p - 1) // self.q + 1
        v = eat_at(base, self.d, self.h)
        if self.q == 1:
            return v
        j = p - (base - 1) * self.q
        return v, self.q - j + 1

    def position(self, vertex) -> int:
        if self.q == 1:
            return eat_index(vertex, self.d, self.h)
        v, slot = vertex
        return (eat_index(v, self.d, self.h) - 1) * self.q + (self.q - slot + 1)

    def label(self, p: int) -> str:
        a = self.address(p)
        if self.q == 1:
            return render(a)
        return f"{render(a[0])}/{a[1]}"

    def local_id(self, p: int) -> int:
        return p - self.start + 1

    def root(self) -> int:
        return self.total


def count_edges_exact(g: HostGraph) -> int:
    return g.count_edges()


def build_tstar(h: int, d: int) -> HostGraph:
    if h < 0 or d < 2:
        raise ValueError("need h >= 0 and d >= 2")
    return HostGraph(h, d)


def build_universal(n: int, d: int) -> HostGraph:
    h = height_for(n, d)
    return HostGraph(h, d, vertex_count(h, d) - n + 1)


def admissible(size: int, h: int, d: int, q: int = 1, t3_mode: str = DEFAULT_T3_MODE) -> HostGraph:
    """The last ``size`` vertices of the (blown) T*_{h,d}."""
    total = vertex_count(h, d) * q
    if not 1 <= size <= total:
        raise ValueError(f"size {size} out of range 1..{total}")
    return HostGraph(h, d, total - size + 1, q, t3_mode)


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------


def decompose_n(n: int, d: int) -> tuple[int, list[tuple[int, int]], int]:
    """Return ``(h, [(level, alpha_level), ...], l_star)`` with
    ``n = 1 + sum(alpha * |T*_{h-level}| + 1)``.

    The first vertex of U(n,d) has no descendants in U; its digit at each
    level counts the full sibling subtrees eaten after it.
    """
    h = height_for(n, d)
    first = eat_at(vertex_count(h, d) - n + 1, d, h)
    coeffs = [(level, digit - 1) for level, digit in enumerate(first, start=1)]
    return h, coeffs, len(first)


def recompose_n(h: int, coeffs: list[tuple[int, int]], d: int) -> int:
    return 1 + sum(alpha * vertex_count(h - level, d) + 1 for level, alpha in coeffs)


@dataclass
class Attribution:
    h: int
    d: int
    budget_sum: int      # sum over levels of e_{h,d}(l) * d^l
    raw: int             # generated (vertex, target) pairs, with multiplicity
    self_pairs: int      # generated pairs whose target is the generator itself
    repeats: int         # extra generations of an already generated edge
    distinct: int        # distinct edges
    deep_repeats: int    # repeated edges with a generator at level >= 2

    @property
    def correction(self) -> int:
        return self.budget_sum - self.distinct


def edge_attribution(h: int, d: int) -> Attribution:
    """Attribute every generated edge to its rule and generating endpoint."""
    budget = sum(per_vertex_edge_budget(l, h, d) * d ** l for l in range(h + 1))
    raw = self_pairs = 0
    seen: dict[tuple[int, int], list[int]] = {}
    for p in range(1, vertex_count(h, d) + 1):
        v = eat_at(p, d, h)
        for _rule, lo, hi in rule_intervals(v, h, d):
            raw += hi - lo + 1
            for t in range(lo, hi + 1):
                if t == p:
                    self_pairs += 1
                    continue
                key = (p, t) if p < t else (t, p)
                seen.setdefault(key, []).append(len(v))
    repeats = sum(len(g) - 1 for g in seen.values())
    deep = sum(len(g) - 1 for g in seen.values() if len(g) > 1 and max(g) >= 2)
    return Attribution(h, d, budget, raw, self_pairs, repeats, len(seen), deep)


def leading_coefficient(d: int) -> float:
    return 19 / (6 * math.log(3)) if d == 3 else d / math.log(d)


@dataclass
class EdgeCountReport:
    n: int
    d: int
    exact_edges: int

    @property
    def bound(self) -> float:
        return leading_coefficient(self.d) * self.n * math.log(self.n) if self.n > 1 else 0.0

    @property
    def residual(self) -> float:
        return self.exact_edges - self.bound

    @property
    def ratio(self) -> float:
        return self.exact_edges / (self.n * math.log(self.n)) if self.n > 1 else 0.0


def universal_edge_counts(n_max: int, d: int) -> list[int]:
    """``out[n]`` = edges of U(n,d) for n = 0..n_max (minimal height per n)."""
    out = [0] * (n_max + 1)
    h = 0
    while vertex_count(h - 1, d) < n_max:
        counts = suffix_edge_counts(h, d)
        for n in range(vertex_count(h - 1, d) + 1, min(vertex_count(h, d), n_max) + 1):
            out[n] = counts[n]
        h += 1
    return out


def edge_report(n: int, d: int) -> EdgeCountReport:
    return EdgeCountReport(n, d, build_universal(n, d).count_edges())


__all__ = [
    "HostGraph",
    "ROOT",
    "admissible",
    "build_tstar",
    "build_universal",
    "count_edges_exact",
    "decompose_n",
    "edge_attribution",
    "height_for",
    "per_vertex_edge_budget",
    "rule_adjacent",
    "type3_targets",
    "universal_edge_counts",
    "vertex_count",
]
