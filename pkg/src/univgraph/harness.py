"""Verification harness: free-tree enumeration with an independent Prüfer
oracle, a backtracking universality checker, edge-count tables, mutation
helpers and the self-test suites.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .addressing import eat_at, shift, vertex_count
from .construction import (
    HostGraph,
    admissible,
    build_universal,
    height_for,
    leading_coefficient,
    universal_edge_counts,
)
from .embedding import EmbeddingError, embed_forest, embed_tree_full, validate_embedding
from .graphs import Graph
from .separators import (
    DeltaContext,
    ForestSplitter,
    SeparatorError,
    TwSplitter,
    three_way,
    one_separator,
    two_separators,
)
from .treewidth import (
    build_universal_tw,
    embed_graph_full_tw,
    generate_partial_ktree,
    lower_bound_edges,
)

SEED_ENV = "UNIVGRAPH_SEED"
DEFAULT_SEED = 20240917
MAX_ENUM_N = 16


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw else DEFAULT_SEED


# --- reports -----------------------------------------------------------------


@dataclass
class VerificationReport:
    name: str
    tried: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0
    parts: list["VerificationReport"] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and all(p.passed for p in self.parts)

    def __bool__(self) -> bool:
        return self.passed

    def fail(self, message: str) -> None:
        self.failures.append(message)

    def absorb(self, other: "VerificationReport") -> None:
        self.parts.append(other)
        self.tried += other.tried
        self.seconds += other.seconds

    def record(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "tried": self.tried,
            "failures": list(self.failures),
            "seconds": round(self.seconds, 3),
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{status} {self.name}: {self.tried} instances, {len(self.failures)} failures, {self.seconds:.2f}s"
        lines = [line] + [f"  {f}" for f in self.failures[:10]]
        if len(self.failures) > 10:
            lines.append(f"  ... {len(self.failures) - 10} more")
        for p in self.parts:
            lines.extend("  " + s for s in p.summary().splitlines())
        return "\n".join(lines)


class _Timer:
    def __init__(self, report: VerificationReport):
        self.report = report

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.seconds += time.perf_counter() - self.t0
        return False


# --- free trees --------------------------------------------------------------


def _level_sequences(n: int) -> Iterator[list[int]]:
    """Rooted trees on ``n`` vertices as canonical level sequences (root at level 0)."""
    levels = list(range(n))
    while True:
        yield list(levels)
        p = n - 1
        while p > 0 and levels[p] <= 1:
            p -= 1
        if p == 0:
            return
        q = p - 1
        while levels[q] != levels[p] - 1:
            q -= 1
        for i in range(p, n):
            levels[i] = levels[i - p + q]


def _parents_from_levels(levels: Sequence[int]) -> list[int]:
    parent = [-1] * len(levels)
    stack: list[int] = []
    for i, lv in enumerate(levels):
        del stack[lv:]
        if stack:
            parent[i] = stack[-1]
        stack.append(i)
    return parent


def _adjacency(parent: Sequence[int]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in parent]
    for v, p in enumerate(parent):
        if p >= 0:
            adj[v].append(p)
            adj[p].append(v)
    return adj


def _centroids(adj: list[list[int]]) -> list[int]:
    n = len(adj)
    order, parent = [0], [-1] * n
    for u in order:
        for v in adj[u]:
            if v != parent[u]:
                parent[v] = u
                order.append(v)
    size = [1] * n
    for u in reversed(order[1:]):
        size[parent[u]] += size[u]
    best, out = n, []
    for u in range(n):
        heaviest = n - size[u]
        for v in adj[u]:
            if v != parent[u]:
                heaviest = max(heaviest, size[v])
        if heaviest < best:
            best, out = heaviest, [u]
        elif heaviest == best:
            out.append(u)
    return out


def _rooted_code(adj: list[list[int]], root: int) -> str:
    """AHU parenthesis code of the tree rooted at ``root``."""
    order, parent = [root], {root: -1}
    for u in order:
        for v in adj[u]:
            if v != parent[u]:
                parent[v] = u
                order.append(v)
    code: dict[int, str] = {}
    for u in reversed(order):
        kids = sorted(code[v] for v in adj[u] if v != parent[u])
        code[u] = "(" + "".join(kids) + ")"
    return code[root]


def free_tree_code(adj: list[list[int]]) -> str:
    """Canonical code of a free tree: AHU code from its centroid (smaller of two)."""
    if not adj:
        return ""
    return min(_rooted_code(adj, c) for c in _centroids(adj))


def _parents_from_code(code: str) -> tuple[int, ...]:
    parent: list[int] = []
    stack: list[int] = []
    for ch in code:
        if ch == "(":
            parent.append(stack[-1] if stack else -1)
            stack.append(len(parent) - 1)
        else:
            stack.pop()
    return tuple(parent)


class TreeIterator:
    """Every free tree on ``n`` vertices once, as a canonical parent array
    (vertex 0 is the root, ``parent[0] == -1``, vertices in preorder)."""

    def __init__(self, n: int):
        if not 1 <= n <= MAX_ENUM_N:
            raise ValueError(f"free-tree enumeration supports 1 <= n <= {MAX_ENUM_N}, got {n}")
        self.n = n

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        seen: set[str] = set()
        for levels in _level_sequences(self.n):
            code = free_tree_code(_adjacency(_parents_from_levels(levels)))
            if code not in seen:
                seen.add(code)
                yield _parents_from_code(code)


def enumerate_free_trees(n: int) -> TreeIterator:
    return TreeIterator(n)


def tree_graph(parent: Sequence[int]) -> Graph:
    return Graph(range(len(parent)), [(v, p) for v, p in enumerate(parent) if p >= 0])


# --- Prüfer oracle -----------------------------------------------------------


def prufer_decode(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    """Edges of the labelled tree on ``0..n-1`` with Prüfer sequence ``seq``."""
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = degree.index(1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = (i for i in range(n) if degree[i] == 1)
    edges.append((u, v))
    return edges


def _multiset_permutations(counts: list[int]) -> Iterator[tuple[int, ...]]:
    total = sum(counts)
    out = [0] * total

    def rec(i):
        if i == total:
            yield tuple(out)
            return
        for label, c in enumerate(counts):
            if c:
                counts[label] -= 1
                out[i] = label
                yield from rec(i + 1)
                counts[label] += 1

    yield from rec(0)


def _partitions(total: int, parts: int, cap: int | None = None) -> Iterator[list[int]]:
    cap = total if cap is None else cap
    if total == 0:
        yield []
        return
    if parts == 0:
        return
    for first in range(min(total, cap), 0, -1):
        for rest in _partitions(total - first, parts - 1, first):
            yield [first] + rest


def prufer_sequences(n: int, reduced: bool = True) -> Iterator[tuple[int, ...]]:
    """Prüfer sequences for labelled trees on ``n`` vertices.

    With ``reduced`` only sequences whose label multiplicities are
    non-increasing in the label are produced.  Every tree has such a labelling
    (sort vertices by degree, largest first), so every isomorphism class is
    still reached.
    """
    if n <= 2:
        yield ()
        return
    if not reduced:
        yield from itertools.product(range(n), repeat=n - 2)
        return
    for lam in _partitions(n - 2, n):
        yield from _multiset_permutations(lam + [0] * (n - len(lam)))


def _centre_code(n: int, edges: list[tuple[int, int]]) -> str:
    """Isomorphism invariant computed without centroids: the smallest
    bracket code over the one or two centres, found by peeling
    leaves layer by layer."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    deg = [len(a) for a in adj]
    layer = [v for v in range(n) if deg[v] <= 1]
    left = n
    while left > 2:
        left -= len(layer)
        nxt = []
        for u in layer:
            for v in adj[u]:
                deg[v] -= 1
                if deg[v] == 1:
                    nxt.append(v)
        layer = nxt

    def code(root):
        order, par = [root], {root: -1}
        for u in order:
            for v in adj[u]:
                if v != par[u]:
                    par[v] = u
                    order.append(v)
        sub: dict[int, list[str]] = {u: [] for u in order}
        for u in reversed(order):
            c = "(" + "".join(sorted(sub[u])) + ")"
            if par[u] < 0:
                return c
            sub[par[u]].append(c)

    return min(code(r) for r in layer)


def prufer_free_tree_count(n: int, reduced: bool = True) -> int:
    """Number of isomorphism classes among the decoded Prüfer trees."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 1
    classes = set()
    for seq in prufer_sequences(n, reduced):
        classes.add(_centre_code(n, prufer_decode(seq, n)))
    return len(classes)


# --- brute-force universality ------------------------------------------------


def _host_adjacency(host) -> dict[int, set[int]]:
    if isinstance(host, Graph):
        return {v: set(host.neighbors(v)) for v in host}
    return {p: set(host.neighbors(p)) for p in host.positions()}


def find_tree_embedding(adj: dict, parent: Sequence[int]) -> dict | None:
    """Backtracking search for an injective adjacency-preserving map of the tree."""
    n = len(parent)
    tadj = _adjacency(parent)
    order, par = [0], [-1] * n
    for u in order:
        for v in tadj[u]:
            if v != par[u]:
                par[v] = u
                order.append(v)
    deg = [len(a) for a in tadj]
    img: dict[int, int] = {}
    used: set[int] = set()

    def rec(i: int) -> bool:
        if i == n:
            return True
        u = order[i]
        pool = adj if i == 0 else adj[img[par[u]]]
        for x in sorted(pool):
            if x in used or len(adj[x]) < deg[u]:
                continue
            img[u] = x
            used.add(x)
            if rec(i + 1):
                return True
            used.discard(x)
        img.pop(u, None)
        return False

    return dict(img) if rec(0) else None


def brute_universality_check(host, n: int | None = None) -> VerificationReport:
    """Does ``host`` contain every free tree on ``n`` vertices?  Independent of
    the embedding algorithm.  ``n`` defaults to the host size and is capped at 8."""
    adj = _host_adjacency(host)
    n = len(adj) if n is None else n
    report = VerificationReport(f"brute-universality n={n} host={len(adj)}")
    if n > 8:
        raise ValueError("brute-force universality is limited to n <= 8")
    with _Timer(report):
        if n > len(adj):
            report.fail(f"host has {len(adj)} vertices, fewer than {n}")
            return report
        for parent in enumerate_free_trees(n) if n >= 1 else []:
            report.tried += 1
            if find_tree_embedding(adj, parent) is None:
                report.fail(f"no embedding for tree parent={list(parent)}")
    return report


# --- mutation helpers --------------------------------------------------------


def root_incident_edges(host: HostGraph) -> list[tuple[int, int]]:
    r = host.root()
    return [(p, r) for p in host.neighbors(r)]


def _no_t3_edge(u, v, h: int, d: int) -> bool:
    def by(a, b):
        if len(b) > len(a) and b[: len(a)] == a:
            return True
        return any(b[: len(x)] == x for x in (shift(a, -i, d) for i in range(1, d)))

    return by(u, v) or by(v, u)


def type3_only_edges(host: HostGraph) -> list[tuple[int, int]]:
    """Host edges that exist only because of the type-3 rule (``q = 1`` hosts)."""
    if host.q != 1 or host.d != 3:
        raise ValueError("type-3 mutation is defined for unblown ternary hosts")
    out = []
    for a, b in host.edges():
        u, v = eat_at(a, 3, host.h), eat_at(b, 3, host.h)
        if not _no_t3_edge(u, v, host.h, 3):
            out.append((a, b))
    return out


# --- edge tables -------------------------------------------------------------


@dataclass(frozen=True)
class EdgeRow:
    n: int
    edges: int
    ratio: float
    lower: int | None
    w: int | None = None

    def record(self) -> dict:
        out = {"n": self.n, "edges": self.edges, "ratio": round(self.ratio, 6)}
        if self.w is not None:
            out["w"] = self.w
        if self.lower is not None:
            out["lower"] = self.lower
        return out


def edge_table(n_values: Iterable[int], d: int = 3, ws: Sequence[int] | None = None) -> list[EdgeRow]:
    """Tree mode (``ws`` is None): exact edges of U(n, d) and edges / (n ln n).
    Treewidth mode: edges of U(n, 3, w), edges / ((w+1) n ln(n/w)) and the lower bound."""
    rows = []
    for n in n_values:
        if ws is None:
            e = build_universal(n, d).count_edges()
            ratio = e / (n * math.log(n)) if n > 1 else float("nan")
            rows.append(EdgeRow(n, e, ratio, None))
            continue
        for w in ws:
            e = build_universal_tw(n, w).count_edges()
            denom = (w + 1) * n * math.log(n / w) if n > w else 0.0
            ratio = e / denom if denom > 0 else float("nan")
            lower = lower_bound_edges(n, w) if n >= 2 * w + 1 else 0
            rows.append(EdgeRow(n, e, ratio, lower, w))
    return rows


def tree_ratio_limit(d: int) -> float:
    """Limit of the ratio column: ``19/(6 ln 3)`` for d=3, ``d / ln d`` otherwise."""
    return 19 / (6 * math.log(3)) if d == 3 else leading_coefficient(d)


def residual_maxima(h_max: int, d: int = 3) -> list[float]:
    """``out[h]`` = max over sizes n of height h of (edges - c n ln n) / n,
    with ``c`` the leading coefficient (``nan`` below h = 1)."""
    counts = universal_edge_counts(vertex_count(h_max, d), d)
    lead = tree_ratio_limit(d)
    out = [float("nan")]
    for h in range(1, h_max + 1):
        lo = max(2, vertex_count(h - 1, d) + 1)
        out.append(max((counts[n] - lead * n * math.log(n)) / n for n in range(lo, vertex_count(h, d) + 1)))
    return out


def fit_residual_constant(h_fit: int, d: int = 3) -> float:
    """Constant ``C`` with edges <= c n ln n + C n, fitted on heights up to ``h_fit``.

    Past the first few heights the per-height maxima rise toward their
    supremum, so the fit is the larger of every observed maximum and the last
    one plus the geometric tail of the last two increments.
    """
    m = residual_maxima(h_fit, d)
    seen = max(m[1:])
    inc1, inc2 = m[-2] - m[-3], m[-1] - m[-2]
    if inc2 <= 0:
        return seen
    r = inc2 / inc1
    if not 0 < r < 1:
        raise ValueError(f"residual maxima are not converging (increments {inc1:.4f}, {inc2:.4f})")
    return max(seen, m[-1] + inc2 * r / (1 - r))


# --- suites ------------------------------------------------------------------


def _pmap(fn: Callable, items: list, threads: int) -> list:
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def _embed_checked(host: HostGraph, tree: Graph, at_root=None) -> str | None:
    try:
        rep = validate_embedding(host, tree, embed_tree_full(host, tree, at_root), full=True)
        return None if rep else rep.message
    except EmbeddingError as exc:
        return str(exc)


def _verify_one(args) -> list[str]:
    n, d, every_root = args
    host = build_universal(n, d)
    bad = []
    for i, parent in enumerate(enumerate_free_trees(n)):
        tree = tree_graph(parent)
        for v in (tree.vertices if every_root else [None]):
            msg = _embed_checked(host, tree, v)
            if msg:
                where = "" if v is None else f" root={v}"
                bad.append(f"n={n} tree#{i} parent={list(parent)}{where}: {msg}")
    return bad


def verify(n_max: int, d: int = 3, threads: int = 1, n_min: int = 1, every_root: bool = False) -> VerificationReport:
    """Embed every free tree on ``n`` vertices into U(n, d) for ``n_min <= n <= n_max``.

    With ``every_root`` each tree is embedded once per choice of the vertex
    sent to the host root.
    """
    if d not in (2, 3):
        raise ValueError("verification embeds into d = 2 or d = 3 hosts")
    name = f"trees-into-U(n,{d}) n<={n_max}" + (" every root" if every_root else "")
    report = VerificationReport(name)
    with _Timer(report):
        ns = list(range(n_min, n_max + 1))
        for n, bad in zip(ns, _pmap(_verify_one, [(n, d, every_root) for n in ns], threads)):
            report.tried += sum(n if every_root else 1 for _ in enumerate_free_trees(n))
            report.failures.extend(bad)
    return report


def _tw_one(args) -> str | None:
    n, w, seed, keep = args
    g, td = generate_partial_ktree(n, w, seed=seed, keep_prob=keep)
    host = build_universal_tw(n, w)
    try:
        emb = embed_graph_full_tw(host, g, td, w)
        rep = validate_embedding(host, g, emb, full=True)
        return None if rep else f"n={n} w={w} seed={seed} keep={keep}: {rep.message}"
    except EmbeddingError as exc:
        return f"n={n} w={w} seed={seed} keep={keep}: {exc}"


def verify_tw(
    n: int | Sequence[int], w: int, instances: int, seed: int | None = None, threads: int = 1
) -> VerificationReport:
    """Random partial ``w``-trees embedded bijectively into U(n, 3, w).

    An int ``n`` fixes the size; a sequence draws each instance's size from it.
    """
    seed = default_seed() if seed is None else seed
    rng = random.Random(seed)
    sizes = [n] if isinstance(n, int) else list(n)
    jobs = []
    for _ in range(instances):
        size = rng.choice(sizes)
        jobs.append((size, w, rng.randrange(2**31), rng.choice((1.0, 0.8, 0.5))))
    report = VerificationReport(f"partial-{w}-trees-into-U(n,3,{w}) seed={seed}")
    with _Timer(report):
        for res in _pmap(_tw_one, jobs, threads):
            report.tried += 1
            if res:
                report.fail(res)
    return report


def random_forest(n: int, rng: random.Random, max_components: int = 4) -> Graph:
    """Random labelled forest: a random tree (Prüfer) with a few edges dropped."""
    if n <= 1:
        return Graph(range(n))
    seq = [rng.randrange(n) for _ in range(n - 2)]
    edges = prufer_decode(seq, n)
    rng.shuffle(edges)
    drop = rng.randint(0, min(max_components - 1, len(edges)))
    return Graph(range(n), edges[drop:])


def verify_admissible_residual(instances: int, seed: int | None = None, max_size: int = 121) -> VerificationReport:
    """Random forests into random admissible hosts: the image must be the
    eating-order prefix and the rest must equal the admissible graph of the
    remaining size."""
    seed = default_seed() if seed is None else seed
    rng = random.Random(seed)
    report = VerificationReport(f"admissible-residual seed={seed}")
    with _Timer(report):
        for i in range(instances):
            d = rng.choice((2, 3))
            h = rng.randint(1, height_for(max_size, d))
            total = vertex_count(h, d)
            size = rng.randint(2, min(total, max_size))
            host = admissible(size, h, d)
            k = rng.randint(1, size - 1)
            forest = random_forest(k, rng)
            report.tried += 1
            tag = f"instance {i} seed={seed} d={d} h={h} |A|={size} |F|={k}"
            try:
                emb = embed_forest(host, forest)
            except EmbeddingError as exc:
                report.fail(f"{tag}: {exc}")
                continue
            rep = validate_embedding(host, forest, emb)
            if not rep:
                report.fail(f"{tag}: {rep.message}")
                continue
            rest = admissible(size - k, h, d)
            used = set(emb.mapping.values())
            left = [p for p in host.positions() if p not in used]
            if left != list(rest.positions()):
                report.fail(f"{tag}: residual vertex set differs")
                continue
            for p in left:
                if host.row(p) >> rest.start << rest.start != rest.row(p):
                    report.fail(f"{tag}: residual adjacency differs at {host.label(p)}")
                    break
    return report


def _random_tw_graph(n: int, w: int, rng: random.Random):
    if w == 0:
        forest = random_forest(n, rng, max_components=n)
        return forest, None
    g, td = generate_partial_ktree(n, w, seed=rng.randrange(2**31), keep_prob=rng.choice((1.0, 0.7, 0.4)))
    return g, td


def _splitter(g, td, w):
    return ForestSplitter(g) if td is None else TwSplitter(g, td, w)


def verify_separators(instances: int, seed: int | None = None, procedures: Sequence[str] | None = None,
                      widths: Sequence[int] = (0, 0, 1, 2, 3)) -> VerificationReport:
    """Randomized postcondition checks for the bounded split, the three-way
    split and both corollaries, for forests (w = 0) and partial k-trees.
    Sizes are drawn across each legal range, endpoints included.  Each
    instance draws its width from ``widths``."""
    seed = default_seed() if seed is None else seed
    procedures = list(procedures or ("bounded", "three-way", "one-separator", "two-separators"))
    report = VerificationReport(f"separators seed={seed}")
    with _Timer(report):
        for proc in procedures:
            tag = "" if tuple(widths) == (0, 0, 1, 2, 3) else f" w in {sorted(set(widths))}"
            sub = VerificationReport(f"separator {proc}{tag}")
            rng = random.Random(f"{seed}:{proc}")
            with _Timer(sub):
                for i in range(instances):
                    sub.tried += 1
                    msg = _separator_case(proc, rng, rng.choice(widths))
                    if msg:
                        sub.fail(f"{proc} instance {i} seed={seed}: {msg}")
            report.parts.append(sub)
            report.tried += sub.tried
    return report


def _pick(rng: random.Random, lo: int, hi: int) -> int:
    r = rng.random()
    if r < 0.15:
        return lo
    if r < 0.3:
        return hi
    return rng.randint(lo, hi)


def _slack(size: int, N: int, X: int) -> int:
    # written out again here so the checks do not reuse the library's delta
    if size < X:
        return X - size
    return N - (size - X) % N


def _partition_error(g: Graph, whole, seps, parts) -> str | None:
    """Separators plus parts must partition ``whole`` with no edge between parts."""
    seen: set = set()
    for blob in [set(seps), *map(set, parts)]:
        if seen & blob:
            return "pieces overlap"
        seen |= blob
    if seen != set(whole):
        return "pieces do not cover the input"
    owner = {v: i for i, p in enumerate(parts) for v in p}
    for u, v in g.edges():
        if u in owner and v in owner and owner[u] != owner[v]:
            return f"edge ({u}, {v}) joins two parts"
    return None


def _separator_case(proc: str, rng: random.Random, w: int) -> str | None:
    try:
        if proc == "bounded":
            n = rng.randint(w + 1, 40)
            g, td = _random_tw_graph(n, w, rng)
            t = _pick(rng, 0, n - w - 1)
            if td is None:
                s, part = ForestSplitter(g).split_bounded(frozenset(g), t)
                seps = {s}
            else:
                z, part, ntd = TwSplitter(g, td, w).split_bounded(frozenset(g), t)
                seps = set(ntd.bags[z])
            if not t <= len(part) <= 2 * t:
                return f"w={w} t={t}: |part|={len(part)} outside [t, 2t]"
            if len(seps) != w + 1:
                return f"w={w}: separator has {len(seps)} vertices"
            return _partition_error(g, g, seps, [part, set(g) - seps - set(part)])
        if proc == "three-way":
            n = rng.randint(w + 2, 50)
            g, td = _random_tw_graph(n, w, rng)
            M = _pick(rng, 0, n - w - 1)
            m = _pick(rng, 0, M // 2)
            S, f1, f2, f3 = three_way(_splitter(g, td, w), frozenset(g), m, M)
            if len(S) != w + 1:
                return f"w={w}: separator has {len(S)} vertices"
            if not m <= len(f3) <= M:
                return f"w={w} m={m} M={M}: |F3|={len(f3)}"
            if len(f1) > n - w - 1 - M:
                return f"w={w} M={M}: |F1|={len(f1)} > |F|-w-1-M"
            if len(f2) > len(f1):
                return f"w={w}: |F2|={len(f2)} > |F1|={len(f1)}"
            if len(f3) < M and not f2:
                return f"w={w}: |F3| < M but F2 is empty"
            return _partition_error(g, g, S, [f1, f2, f3])
        N = rng.randint(w + 1, 9)
        X = rng.randint(1, N)
        ctx = DeltaContext(N, X)
        if proc == "one-separator":
            n = _pick(rng, 2 * N + X + w + 2, 5 * N + X + 2 * w + 2)
            g, td = _random_tw_graph(n, w, rng)
            S, parts = one_separator(_splitter(g, td, w), frozenset(g), ctx)
            a, b, c = (len(p) for p in parts)
            if len(S) != w + 1:
                return f"w={w}: separator has {len(S)} vertices"
            if a > 2 * N + X or b > 2 * N + _slack(a, N, X) or c > 2 * N + _slack(a + b, N, X) + w + 1:
                return f"w={w} N={N} X={X}: sizes {a, b, c} exceed their bounds"
            if a + b < 2 * N + X:
                return f"w={w} N={N} X={X}: |G1|+|G2|={a + b} < 2N+X"
            return _partition_error(g, g, S, parts)
        if proc == "two-separators":
            n = _pick(rng, 5 * N + X + 2 * w + 3, 8 * N + X + 3 * w + 3)
            g, td = _random_tw_graph(n, w, rng)
            S1, S2, parts = two_separators(_splitter(g, td, w), frozenset(g), ctx)
            sizes = [len(p) for p in parts]
            c = n - (8 * N + X + 2 * w + 2)
            extra = c if 1 <= c <= w + 1 else 0
            if len(S1) != w + 1 or len(S2) != w + 1:
                return f"w={w}: separator sizes {len(S1)}, {len(S2)}"
            if sizes[0] > 2 * N + X:
                return f"w={w} N={N} X={X}: |G1|={sizes[0]}"
            if 2 * (sizes[0] + sizes[1]) < 3 * N + 2 * X:
                return f"w={w} N={N} X={X}: |G1|+|G2|={sizes[0] + sizes[1]} < 3N/2+X"
            for i in range(1, 6):
                bound = 2 * N + _slack(sum(sizes[:i]), N, X) + (extra if i == 5 else 0)
                if sizes[i] > bound:
                    return f"w={w} N={N} X={X} n={n}: |G{i + 1}|={sizes[i]} > {bound}"
            g1, g2, g3, g4, g5, g6 = parts
            bar = set(g3) | set(g5) | set(g6) | set(S2)
            return (_partition_error(g, g, S1, [g1, g2, g4, bar])
                    or _partition_error(g, bar, S2, [g3, g5, g6]))
        raise ValueError(f"unknown procedure {proc!r}")
    except (AssertionError, SeparatorError) as exc:
        return f"w={w}: {exc}"


def verify_mutation(ns: Sequence[int] = (5, 6, 7)) -> VerificationReport:
    """Deleting any single root-incident edge of U(n, 3) must break some suite.

    The report passes when every mutation is detected."""
    report = VerificationReport("mutation root-incident edges")
    with _Timer(report):
        for n in ns:
            host = build_universal(n, 3)
            for e in root_incident_edges(host):
                report.tried += 1
                mutated = host.without_edges([e])
                if brute_universality_check(mutated, n).passed and not _embedding_detects(mutated, n):
                    report.fail(f"n={n}: removing edge {host.label(e[0])}-{host.label(e[1])} went unnoticed")
    return report


def _embedding_detects(host: HostGraph, n: int) -> bool:
    for parent in enumerate_free_trees(n):
        tree = tree_graph(parent)
        if any(_embed_checked(host, tree, v) for v in tree.vertices):
            return True
    return False


def spider(legs: Sequence[int]) -> Graph:
    """Vertex 0 joined to paths of the given lengths."""
    edges, nxt = [], 1
    for length in legs:
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
    return Graph(range(nxt), edges)


# (h, |A|, spider legs) whose embedding certifies a type-3 block; the h = 4
# ones also use a type-3 edge.
TYPE3_SPIDERS = (
    (3, 39, (10, 10, 10)),
    (3, 40, (11, 11, 11)),
    (4, 40, (10, 10, 10)),
    (4, 41, (11, 11, 10)),
    (4, 41, (11, 11, 11)),
    (4, 42, (11, 11, 11)),
    (4, 55, (11, 11, 11)),
    (4, 68, (11, 11, 11)),
    (4, 111, (28, 28, 28)),
)


def two_separator_instances() -> list[tuple[HostGraph, Graph]]:
    """Spiders that drive the embedding through the two-separator step with a type-3 block."""
    return [(admissible(size, h, 3), spider(legs)) for h, size, legs in TYPE3_SPIDERS]


def verify_type3(host_filter: Callable[[HostGraph], HostGraph] | None = None) -> VerificationReport:
    """Embeds the type-3 spider instances; ``host_filter`` lets a mutation
    test strip edges from each host first.  Fails if no instance reaches a
    type-3 block, so the suite cannot pass vacuously."""
    report = VerificationReport("two-separator spiders")
    certified = 0
    with _Timer(report):
        for host, forest in two_separator_instances():
            if host_filter is not None:
                host = host_filter(host)
            report.tried += 1
            try:
                emb = embed_forest(host, forest)
            except EmbeddingError as exc:
                report.fail(f"|A|={host.n} |F|={len(forest)}: {exc}")
                continue
            certified += emb.branches["type-3 block"]
            rep = validate_embedding(host, forest, emb)
            if not rep:
                report.fail(f"|A|={host.n} |F|={len(forest)} branches={dict(emb.branches)}: {rep.message}")
        if not certified:
            report.fail("no instance reached a type-3 block")
    return report


def strip_type3(host: HostGraph) -> HostGraph:
    return host.without_edges(type3_only_edges(host))


def run_selftest(profile: str = "quick", seed: int | None = None, threads: int = 1,
                 mutate: str | None = None) -> VerificationReport:
    """``quick`` runs in seconds, ``full`` in minutes.

    ``mutate="t3"`` deletes the type-3 edges from the spider hosts so the
    two-separator suite must fail.
    """
    if profile not in ("quick", "full"):
        raise ValueError(f"unknown profile {profile!r}")
    if mutate not in (None, "t3"):
        raise ValueError(f"unknown mutation {mutate!r}")
    seed = default_seed() if seed is None else seed
    full = profile == "full"
    report = VerificationReport(f"selftest {profile} seed={seed}")

    enum = VerificationReport("free-tree enumeration vs Prüfer oracle")
    with _Timer(enum):
        for n in range(1, (9 if full else 7) + 1):
            enum.tried += 1
            mine = sum(1 for _ in enumerate_free_trees(n))
            theirs = prufer_free_tree_count(n)
            if mine != theirs:
                enum.fail(f"n={n}: enumerator {mine}, Prüfer oracle {theirs}")
    report.absorb(enum)

    n_max = 11 if full else 8
    report.absorb(verify(n_max, 3, threads))
    report.absorb(verify(n_max, 2, threads))
    for d in (3, 2):
        report.absorb(verify(9 if full else 7, d, threads, every_root=True))
    for d in (3, 2):
        for n in range(1, (7 if full else 6) + 1):
            report.absorb(brute_universality_check(build_universal(n, d), n))
    report.absorb(verify_admissible_residual(1000 if full else 100, seed))
    report.absorb(verify_separators(10_000 if full else 300, seed))
    for w in (1, 2, 3):
        report.absorb(verify_tw(range(w + 1, 61), w, 200 if full else 15, seed + w, threads))
    report.absorb(verify_mutation((5, 6, 7) if full else (5,)))
    report.absorb(verify_type3(strip_type3 if mutate == "t3" else None))
    return report


__all__ = [
    "DEFAULT_SEED", "EdgeRow", "SEED_ENV", "TYPE3_SPIDERS", "TreeIterator", "VerificationReport",
    "brute_universality_check", "default_seed", "edge_table", "enumerate_free_trees",
    "find_tree_embedding", "fit_residual_constant", "free_tree_code", "prufer_decode", "prufer_free_tree_count",
    "prufer_sequences", "random_forest", "residual_maxima", "root_incident_edges", "run_selftest", "spider",
    "strip_type3", "tree_graph", "tree_ratio_limit", "two_separator_instances",
    "type3_only_edges", "verify", "verify_admissible_residual", "verify_mutation",
    "verify_separators", "verify_tw", "verify_type3",
]
