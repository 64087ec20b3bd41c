"""Text formats: PACE ``.gr`` graphs, PACE ``.td`` tree decompositions and
embedding mapping files.  All vertex ids in files are 1-indexed.

Parsers raise :class:`FormatError` carrying the offending line number.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, TextIO

from .construction import HostGraph
from .decomposition import TreeDecomposition
from .graphs import Graph


class FormatError(ValueError):
    def __init__(self, line: int, message: str, source: str = "<input>"):
        super().__init__(f"{source}:{line}: {message}")
        self.line = line
        self.source = source


def _lines(text: str):
    for i, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if not s or s.startswith("c"):
            continue
        yield i, s.split()


def _ints(tokens, lineno, source):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(lineno, f"expected integers, got {' '.join(tokens)!r}", source) from None


# --- graphs ------------------------------------------------------------------


def format_gr(n: int, edges: Iterable[tuple[int, int]]) -> str:
    """``p tw n m`` followed by one sorted ``u v`` line per edge (``u < v``)."""
    es = sorted((min(u, v), max(u, v)) for u, v in edges)
    out = [f"p tw {n} {len(es)}"]
    out.extend(f"{u} {v}" for u, v in es)
    return "\n".join(out) + "\n"


def host_edges(host: HostGraph) -> list[tuple[int, int]]:
    """Host edges renumbered ``1..host.n`` by eating order."""
    return [(host.local_id(a), host.local_id(b)) for a, b in host.edges()]


def format_host(host: HostGraph) -> str:
    return format_gr(host.n, host_edges(host))


def parse_gr(text: str, source: str = "<input>") -> Graph:
    """Parse a ``.gr`` file.  Without a ``p`` line the input is read as a
    plain edge list and the vertex set is ``1..max id``."""
    n = m = None
    edges: list[tuple[int, int]] = []
    for lineno, tok in _lines(text):
        if tok[0] == "p":
            if n is not None:
                raise FormatError(lineno, "second header line", source)
            if edges:
                raise FormatError(lineno, "header after edge lines", source)
            if len(tok) != 4 or tok[1] != "tw":
                raise FormatError(lineno, "header must be 'p tw <n> <m>'", source)
            n, m = _ints(tok[2:], lineno, source)
            if n < 0 or m < 0:
                raise FormatError(lineno, "negative count in header", source)
            continue
        if len(tok) != 2:
            raise FormatError(lineno, f"edge line needs two vertices, got {len(tok)} fields", source)
        u, v = _ints(tok, lineno, source)
        if u < 1 or v < 1 or (n is not None and max(u, v) > n):
            raise FormatError(lineno, f"vertex out of range in edge {u} {v}", source)
        if u == v:
            raise FormatError(lineno, f"self-loop at {u}", source)
        edges.append((u, v))
    if n is None:
        n = max((max(e) for e in edges), default=0)
    elif m != len(edges):
        raise FormatError(0, f"header announces {m} edges, found {len(edges)}", source)
    return Graph(range(1, n + 1), edges)


def format_graph(g: Graph) -> str:
    """Serialize a graph whose vertices are ``1..n``."""
    if g.vertices != list(range(1, len(g) + 1)):
        raise ValueError("graph vertices must be 1..n")
    return format_gr(len(g), g.edges())


# --- tree decompositions -----------------------------------------------------


def parse_td(text: str, source: str = "<input>") -> TreeDecomposition:
    header = None
    bags: dict[int, frozenset] = {}
    edges: list[tuple[int, int]] = []
    for lineno, tok in _lines(text):
        if tok[0] == "s":
            if header is not None:
                raise FormatError(lineno, "second header line", source)
            if len(tok) != 5 or tok[1] != "td":
                raise FormatError(lineno, "header must be 's td <bags> <width+1> <n>'", source)
            header = _ints(tok[2:], lineno, source)
            continue
        if header is None:
            raise FormatError(lineno, "missing 's td' header", source)
        if tok[0] == "b":
            ids = _ints(tok[1:], lineno, source)
            if not ids:
                raise FormatError(lineno, "bag line without an id", source)
            x, members = ids[0], ids[1:]
            if not 1 <= x <= header[0]:
                raise FormatError(lineno, f"bag id {x} out of range", source)
            if x in bags:
                raise FormatError(lineno, f"bag {x} listed twice", source)
            if len(members) > header[1]:
                raise FormatError(lineno, f"bag {x} exceeds the announced size {header[1]}", source)
            if any(not 1 <= v <= header[2] for v in members):
                raise FormatError(lineno, f"bag {x} names a vertex outside 1..{header[2]}", source)
            bags[x] = frozenset(members)
            continue
        if len(tok) != 2:
            raise FormatError(lineno, "tree edge line needs two bag ids", source)
        x, y = _ints(tok, lineno, source)
        edges.append((x, y))
    if header is None:
        raise FormatError(0, "missing 's td' header", source)
    if len(bags) != header[0]:
        raise FormatError(0, f"header announces {header[0]} bags, found {len(bags)}", source)
    for x, y in edges:
        if x not in bags or y not in bags:
            raise FormatError(0, f"tree edge {x} {y} names an unknown bag", source)
    return TreeDecomposition(bags, edges)


def format_td(td: TreeDecomposition, n: int) -> str:
    """Bags are renumbered ``1..#bags`` in sorted id order."""
    ids = {x: i for i, x in enumerate(sorted(td.bags), 1)}
    width1 = max((len(b) for b in td.bags.values()), default=0)
    out = [f"s td {len(ids)} {width1} {n}"]
    for x, i in ids.items():
        out.append(" ".join(["b", str(i)] + [str(v) for v in sorted(td.bags[x])]))
    for x, y in td.tree_edges:
        out.append(f"{ids[x]} {ids[y]}")
    return "\n".join(out) + "\n"


# --- mappings ----------------------------------------------------------------


def format_mapping(host: HostGraph, mapping: dict, labels: str = "position") -> str:
    """One ``<guest-id> <host-vertex>`` line per guest vertex.

    ``labels="position"`` writes the 1-based eating-order id within the host,
    ``labels="address"`` the digit-string address (``addr/slot`` for blown hosts).
    """
    if labels not in ("position", "address"):
        raise ValueError(f"unknown label style {labels!r}")
    out = []
    for g in sorted(mapping):
        p = mapping[g]
        target = host.local_id(p) if labels == "position" else host.label(p)
        out.append(f"{g} {target}")
    return "\n".join(out) + ("\n" if out else "")


def parse_mapping(text: str, host: HostGraph, source: str = "<input>") -> dict[int, int]:
    """Read a position-labelled mapping back into host positions."""
    out: dict[int, int] = {}
    for lineno, tok in _lines(text):
        if len(tok) != 2:
            raise FormatError(lineno, "mapping line needs '<guest-id> <host-vertex>'", source)
        g, local = _ints(tok, lineno, source)
        if not 1 <= local <= host.n:
            raise FormatError(lineno, f"host vertex {local} outside 1..{host.n}", source)
        if g in out:
            raise FormatError(lineno, f"guest vertex {g} mapped twice", source)
        out[g] = host.start + local - 1
    return out


def read_text(path: str | Path) -> str:
    return Path(path).read_text()


def write_text(path: str | Path | TextIO, text: str) -> None:
    if hasattr(path, "write"):
        path.write(text)
    else:
        Path(path).write_text(text)


__all__ = [
    "FormatError", "format_gr", "format_graph", "format_host", "format_mapping",
    "format_td", "host_edges", "parse_gr", "parse_mapping", "parse_td",
    "read_text", "write_text",
]
