"""Recursive embedding of forests (and bounded-treewidth graphs) onto
eating-order prefixes of admissible graphs.

An :class:`AdmissibleView` is an abstract suffix of a (possibly blown-up)
T*_{h,d} together with a :class:`Frame` telling where its root and top-level
children sit in the real host.  The blocks used by the recursion (a root
``r`` with a run of consecutive subtrees ``b, b-1, b-2``) are again such
suffixes, so the recursion only ever talks to views.  Within a view no shift
wraps around its level, which is why cyclic edges of the abstract tree are
never needed.

Clique size ``q`` is 1 for trees and ``w + 1`` for treewidth ``w``; the
bookkeeping is identical, with separators of size ``q`` sent to root cliques.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable

from .addressing import (
    Address,
    ROOT,
    eat_at,
    eat_index,
    level_rank,
    shift,
    subtree_span,
    vertex_count,
)
from .construction import DEFAULT_T3_MODE, HostGraph, type3_cover
from .graphs import Graph
from .separators import (
    DeltaContext,
    ForestSplitter,
    SeparatorError,
    three_way,
    one_separator,
    two_separators,
)


class EmbeddingError(RuntimeError):
    """An internal postcondition failed; ``branch`` names the case of the recursion."""

    def __init__(self, branch: str, detail: str):
        super().__init__(f"[{branch}] {detail}")
        self.branch = branch
        self.detail = detail


@dataclass(frozen=True)
class Frame:
    """Host addresses of an abstract root and of its children ``1..d``."""

    root: Address
    kids: tuple

    def host(self, a: Address) -> Address:
        if not a:
            return self.root
        k = self.kids[a[0] - 1]
        if k is None:
            raise EmbeddingError("frame", f"abstract child {a[0]} is outside the block")
        return k + a[1:]


def identity_frame(d: int) -> Frame:
    return Frame(ROOT, tuple((j,) for j in range(1, d + 1)))


@dataclass(frozen=True)
class AdmissibleView:
    """Last ``total - start + 1`` blown positions of an abstract T*_{h,d}."""

    h: int
    d: int
    q: int
    start: int
    frame: Frame
    host_h: int
    t3_mode: str = DEFAULT_T3_MODE

    @property
    def total(self) -> int:
        return vertex_count(self.h, self.d) * self.q

    @property
    def size(self) -> int:
        return self.total - self.start + 1

    def address(self, p: int) -> tuple[Address, int]:
        """Abstract address of position ``p`` and its rank inside the clique (1 = eaten first)."""
        base = (p - 1) // self.q + 1
        return eat_at(base, self.d, self.h), p - (base - 1) * self.q

    def host_position(self, p: int) -> int:
        a, j = self.address(p)
        return (eat_index(self.frame.host(a), self.d, self.host_h) - 1) * self.q + j

    def clique_start(self, v: Address) -> int:
        return (eat_index(v, self.d, self.h) - 1) * self.q + 1

    def span(self, v: Address) -> tuple[int, int]:
        lo, hi = subtree_span(v, self.d, self.h)
        return (lo - 1) * self.q + 1, hi * self.q

    def strip_prefix(self, k: int) -> "AdmissibleView":
        if not 0 <= k < self.size:
            raise ValueError(f"cannot strip {k} of {self.size} vertices")
        return replace(self, start=self.start + k)

    def host_positions(self) -> list[int]:
        return [self.host_position(p) for p in range(self.start, self.total + 1)]


def view_of(host: HostGraph) -> AdmissibleView:
    return AdmissibleView(host.h, host.d, host.q, host.start, identity_frame(host.d), host.h, host.t3_mode)


def strip_prefix(view: AdmissibleView, k: int) -> AdmissibleView:
    return view.strip_prefix(k)


def subtree_view(view: AdmissibleView, r: Address, size: int) -> AdmissibleView:
    """The last ``size`` positions of the subtree of ``r``, as a view of height h - |r|."""
    d = view.d
    frame = Frame(view.frame.host(r), tuple(view.frame.host(r + (j,)) for j in range(1, d + 1)))
    h = view.h - len(r)
    return AdmissibleView(h, d, view.q, vertex_count(h, d) * view.q - size + 1, frame, view.host_h, view.t3_mode)


def sibling_block(view: AdmissibleView, r: Address, mass: int = 0, s3: int | None = None) -> AdmissibleView:
    """Root ``r`` with the subtrees of ``b, b-1, ..., b-s3``.

    ``b`` is the child of ``r`` holding the first unconsumed non-root position
    ``view.start + mass``.  The subtree of ``b`` is partial; the others are full.
    """
    d, q = view.d, view.q
    s3 = d - 1 if s3 is None else s3
    p0 = view.start + mass
    if p0 >= view.clique_start(r):
        raise EmbeddingError("sibling-block", f"root {r} has no unconsumed child")
    x, _ = view.address(p0)
    if len(x) <= len(r) or x[: len(r)] != r:
        raise EmbeddingError("sibling-block", f"first vertex {x} is not below {r}")
    b = x[: len(r) + 1]
    if level_rank(b, d) < s3:
        raise EmbeddingError("sibling-block", f"block under {r} would wrap around its level")
    kids = [None] * d
    for i in range(s3 + 1):
        kids[s3 - i] = view.frame.host(shift(b, -i, d))
    h = view.h - len(r)
    n_child = vertex_count(h - 1, d) * q
    size = view.span(b)[1] - p0 + 1 + s3 * n_child + q
    blk = AdmissibleView(h, d, q, vertex_count(h, d) * q - size + 1,
                         Frame(view.frame.host(r), tuple(kids)), view.host_h, view.t3_mode)
    if blk.host_position(blk.start) != view.host_position(p0):
        raise EmbeddingError("sibling-block", "block does not start at the first free vertex")
    return blk


def type3_block(view: AdmissibleView, r: Address, mass: int = 0) -> AdmissibleView:
    """Same vertices as :func:`sibling_block` once ``r`` has one child left,
    but rooted at ``r - 1``, whose edges into that child are type-3 edges.

    Raises when the type-3 edges of the host do not reach the whole leftover
    part of that child.
    """
    if view.d != 3:
        raise EmbeddingError("type-3", "type-3 blocks exist only for d = 3")
    blk = sibling_block(view, r, mass)
    p0 = view.start + mass
    b = r + (1,)
    lo, hi = view.span(b)
    if not lo <= p0 <= hi:
        raise EmbeddingError("type-3", f"{r} still has more than one child")
    cover = type3_cover((hi - lo + 1) // view.q, view.q, view.t3_mode)
    if hi - p0 + 1 > cover:
        raise EmbeddingError("type-3", f"type-3 block unavailable: leftover {hi - p0 + 1} exceeds coverage {cover}")
    return replace(blk, frame=replace(blk.frame, root=view.frame.host(shift(r, -1, 3))))


@dataclass
class Embedding:
    host: HostGraph
    mapping: dict
    branches: Counter = field(default_factory=Counter)

    def labels(self) -> dict:
        return {g: self.host.label(p) for g, p in self.mapping.items()}

    def __len__(self) -> int:
        return len(self.mapping)


class _Run:
    def __init__(self, splitter, d: int):
        self.sp = splitter
        self.d = d
        self.out: dict = {}
        self.branches: Counter = Counter()

    def put(self, view: AdmissibleView, p: int, g) -> None:
        self.out[g] = view.host_position(p)

    def put_many(self, view: AdmissibleView, first: int, guests: Iterable) -> None:
        for i, g in enumerate(guests):
            self.put(view, first + i, g)

    # -- recursion ---------------------------------------------------------

    def embed(self, view: AdmissibleView, part: frozenset) -> None:
        n = len(part)
        if n == 0:
            return
        q, d, h = view.q, view.d, view.h
        if n > view.size - q:
            raise EmbeddingError("size", f"{n} guest vertices do not fit a view of {view.size} (clique {q})")
        if h < 2:
            self.branches["complete"] += 1
            self.put_many(view, view.start, sorted(part))
            return
        x, _ = view.address(view.start)
        c = x[0]
        r = (c,)
        rstart = view.clique_start(r)
        a1 = rstart + q - view.start

        if c == 1:
            inner = a1 - q  # part of A' below its root clique; negative if that clique is partial
            if n <= inner:
                self.branches["a:recurse"] += 1
                self.embed(subtree_view(view, r, a1), part)
                return
            self.branches["a:root"] += 1
            order = sorted(part)
            k = n - max(inner, 0)
            if inner > 0:
                self.embed(subtree_view(view, r, a1), frozenset(order[k:]))
            self.put_many(view, max(rstart, view.start), order[:k])
            return

        if a1 <= q:
            self.branches["root-clique"] += 1
            order = sorted(part)
            k = min(a1, n)
            self.put_many(view, view.start, order[:k])
            if n > k:
                self.embed(view.strip_prefix(k), frozenset(order[k:]))
            return

        N = q * vertex_count(h - 2, d)
        X = view.span(x[:2])[1] - view.start + 1
        lead = rstart - view.start
        if n <= (d - 1) * N + X + q:
            self.branches["block"] += 1
            croot = min(max(n - lead, 0), q)
            order = sorted(part)
            blk = sibling_block(view, r)
            self.embed(blk, frozenset(order[croot:]))
            self.put_many(view, rstart, order[:croot])
            return

        if d == 2:
            self._binary_split(view, part, r, N, X)
        elif n <= 5 * N + X + 2 * q:
            self._one_separator(view, part, r, N, X)
        else:
            if c != 3:
                raise EmbeddingError("two-separators", f"shape with top digit {c} cannot hold {n} vertices")
            self._two_separators(view, part, r, N, X)

    def _fill(self, view, r, parts, idx, mass=0, certify=None):
        """Embed parts into blocks under ``r`` while ``r`` still has children."""
        rstart = view.clique_start(r)
        while idx < len(parts) and view.start + mass < rstart:
            if certify is not None and idx >= 2:
                certify(view, r, mass)
            blk = sibling_block(view, r, mass)
            if len(parts[idx]) > blk.size - view.q:
                raise EmbeddingError("block", f"part {idx + 1} of size {len(parts[idx])} exceeds block {blk.size}")
            self.embed(blk, parts[idx])
            mass += len(parts[idx])
            idx += 1
        return idx, mass

    def _seat(self, view, r, mass, S, branch) -> AdmissibleView:
        """Place separator ``S`` on the root clique of ``r`` and strip the eaten prefix."""
        rstart = view.clique_start(r)
        if view.start + mass < rstart:
            raise EmbeddingError(branch, f"{r} still has children when its separator is placed")
        if len(S) != view.q:
            raise EmbeddingError(branch, f"separator of size {len(S)} for clique {view.q}")
        self.put_many(view, rstart, S)
        used = mass + view.q
        if used >= view.size:
            raise EmbeddingError(branch, "separator placement consumed the whole view")
        return view.strip_prefix(used)

    def _one_separator(self, view, part, r, N, X):
        self.branches["one-separator"] += 1
        try:
            S, parts = one_separator(self.sp, part, DeltaContext(N, X))
        except (SeparatorError, AssertionError) as exc:
            raise EmbeddingError("one-separator", str(exc)) from exc
        idx, mass = self._fill(view, r, parts, 0)
        rest = self._seat(view, r, mass, S, "one-separator")
        self.embed(rest, frozenset().union(*parts[idx:]))

    def _binary_split(self, view, part, r, N, X):
        n = len(part)
        if n < 3 * N + X + 2:
            self.branches["binary-split"] += 1
            m, M = max(0, n - 2 * N - X - 1), n - N - X - 1
        elif n == 3 * N + X + 2:
            self.branches["binary-split-top"] += 1
            m, M = N, 2 * N + 1
        else:
            raise EmbeddingError("binary-split", f"{n} exceeds 3N+X+2 = {3 * N + X + 2}")
        try:
            S, f1, f2, f3 = three_way(self.sp, part, m, M)
        except (SeparatorError, AssertionError) as exc:
            raise EmbeddingError("binary-split", str(exc)) from exc
        if n == 3 * N + X + 2 and not len(f3) > m:
            raise EmbeddingError("binary-split-top", "maximal third part does not exceed m")
        parts = [f1, f2, f3]
        idx, mass = self._fill(view, r, parts, 0)
        rest = self._seat(view, r, mass, S, "binary-split")
        self.embed(rest, frozenset().union(*parts[idx:]))

    def _two_separators(self, view, part, r, N, X):
        self.branches["two-separators"] += 1
        try:
            S1, S2, parts = two_separators(self.sp, part, DeltaContext(N, X))
        except (SeparatorError, AssertionError) as exc:
            raise EmbeddingError("two-separators", str(exc)) from exc

        def certify(v, root, mass):
            self.branches["type-3 block"] += 1
            type3_block(v, root, mass)

        idx, mass = self._fill(view, r, parts, 0, certify=certify)
        view2 = self._seat(view, r, mass, S1, "two-separators/first")
        r2 = (r[0] - 1,)
        idx, mass = self._fill(view2, r2, parts, idx)
        view3 = self._seat(view2, r2, mass, S2, "two-separators/second")
        self.embed(view3, frozenset().union(*parts[idx:]))


def run_embedding(view: AdmissibleView, part: Iterable, splitter) -> tuple[dict, Counter]:
    """Embed ``part`` onto the first ``len(part)`` positions of ``view``."""
    run = _Run(splitter, view.d)
    run.embed(view, frozenset(part))
    return run.out, run.branches


def _check_arity(d: int, q: int) -> None:
    if d not in (2, 3):
        raise ValueError(f"embedding needs d in {{2, 3}}, got {d}")
    if q != 1 and d != 3:
        raise ValueError("blown-up hosts are only defined for d = 3")


def embed_forest(host: HostGraph, forest: Graph) -> Embedding:
    """Embed ``forest`` onto the first ``|forest|`` vertices of the admissible ``host``."""
    _check_arity(host.d, host.q)
    if host.q != 1:
        raise ValueError("use the treewidth embedding for blown-up hosts")
    if len(forest) >= host.n:
        raise EmbeddingError("size", "guest too large")
    mapping, branches = run_embedding(view_of(host), forest, ForestSplitter(forest))
    return Embedding(host, mapping, branches)


def _pick_removed(tree: Graph):
    leaves = [v for v in tree.vertices if len(tree.neighbors(v)) <= 1]
    return leaves[0] if leaves else tree.vertices[0]


def embed_tree_full(host: HostGraph, tree: Graph, at_root=None) -> Embedding:
    """Bijective embedding of an ``n``-vertex tree into an ``n``-vertex admissible host.

    ``at_root`` is the tree vertex placed at the host root; any vertex works,
    the default is the first leaf.
    """
    _check_arity(host.d, host.q)
    if len(tree) != host.n:
        raise EmbeddingError("size", f"tree has {len(tree)} vertices, host has {host.n}")
    if at_root is not None and at_root not in tree:
        raise EmbeddingError("size", f"{at_root!r} is not a tree vertex")
    v = _pick_removed(tree) if at_root is None else at_root
    rest = tree.induced(set(tree) - {v})
    emb = embed_forest(host, rest) if len(rest) else Embedding(host, {})
    emb.mapping[v] = host.root()
    emb.branches["full:root"] += 1
    return emb


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    message: str = "ok"

    def __bool__(self) -> bool:
        return self.ok


def validate_embedding(host: HostGraph, guest: Graph, emb, full: bool = False) -> ValidationReport:
    """Injectivity, adjacency preservation and the eating-order prefix property.

    ``emb`` is an :class:`Embedding` or a plain guest-to-position mapping.
    With ``full`` the image must be the whole host.
    """
    mapping = emb.mapping if isinstance(emb, Embedding) else emb
    for g in guest:
        if g not in mapping:
            return ValidationReport(False, f"vertex {g!r} is not mapped")
    seen: dict = {}
    for g, p in mapping.items():
        if g not in guest:
            return ValidationReport(False, f"mapped vertex {g!r} is not in the guest")
        if not host.start <= p <= host.total:
            return ValidationReport(False, f"vertex {g!r} mapped outside the host")
        if p in seen:
            return ValidationReport(False, f"not injective: {seen[p]!r} and {g!r} share {host.label(p)}")
        seen[p] = g
    for u, v in guest.edges():
        if not host.adjacent(mapping[u], mapping[v]):
            return ValidationReport(
                False, f"edge ({u!r}, {v!r}) maps to non-adjacent {host.label(mapping[u])}, {host.label(mapping[v])}"
            )
    want = host.n if full else len(guest)
    image = sorted(seen)
    if image != list(range(host.start, host.start + want)):
        return ValidationReport(False, "image is not the eating-order prefix")
    return ValidationReport(True)


__all__ = [
    "AdmissibleView", "Embedding", "EmbeddingError", "Frame", "ValidationReport",
    "embed_forest", "embed_tree_full", "identity_frame", "run_embedding",
    "sibling_block", "strip_prefix", "subtree_view", "type3_block",
    "validate_embedding", "view_of",
]
