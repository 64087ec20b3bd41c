"""Command-line entry point.

Exit status: 0 on success, 1 when a verification or validation fails,
2 on usage errors (bad flags, unreadable or malformed input files).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .construction import build_universal
from .decomposition import DecompositionError
from .embedding import EmbeddingError, embed_forest, embed_tree_full, validate_embedding
from .io import FormatError, format_host, format_mapping, parse_gr, parse_td, write_text
from .separators import (
    DeltaContext,
    SeparatorError,
    TwSplitter,
    three_way,
    one_separator,
    split_one_sep,
    split_three,
    split_two_sep,
    two_separators,
)
from .treewidth import build_universal_tw, embed_graph_full_tw, embed_graph_tw, tw_bounds


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"cannot read {path}")
    return p.read_text()


def _check_out(path: str | None) -> None:
    if path and path != "-" and not Path(path).parent.resolve().is_dir():
        raise UsageError(f"output directory for {path} does not exist")


def _emit(path: str | None, text: str) -> None:
    if path and path != "-":
        write_text(path, text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list[int]:
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" in chunk:
            lo, hi = (int(x) for x in chunk.split(":"))
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(chunk))
    if not out:
        raise argparse.ArgumentTypeError("empty list")
    return out


def _host_spec(text: str) -> tuple[int, int]:
    try:
        n, d = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected <n>,<d>") from None
    return n, d


# --- subcommands -------------------------------------------------------------


def cmd_construct(args) -> int:
    _check_out(args.out)
    host = build_universal(args.n, args.d) if args.treewidth is None else build_universal_tw(args.n, args.treewidth)
    _emit(args.out, format_host(host))
    return 0


def cmd_embed(args) -> int:
    n, d = args.host
    _check_out(args.out)
    text = _read(args.tree)
    tree = parse_gr(text, args.tree)
    if d not in (2, 3):
        raise UsageError("embedding needs d in {2, 3}")
    host = build_universal(n, d)
    if not tree.is_forest():
        raise UsageError(f"{args.tree} is not a forest")
    if len(tree) == host.n:
        emb = embed_tree_full(host, tree)
        full = True
    else:
        emb = embed_forest(host, tree)
        full = False
    rep = validate_embedding(host, tree, emb, full=full)
    if not rep:
        print(f"embedding failed validation: {rep.message}", file=sys.stderr)
        return 1
    _emit(args.out, format_mapping(host, emb.mapping, args.labels))
    return 0


def cmd_tw_embed(args) -> int:
    _check_out(args.out)
    g = parse_gr(_read(args.graph), args.graph)
    td = parse_td(_read(args.td), args.td)
    host = build_universal_tw(args.n, args.w)
    if len(g) == host.n:
        emb, full = embed_graph_full_tw(host, g, td, args.w), True
    else:
        emb, full = embed_graph_tw(host, g, td, args.w), False
    rep = validate_embedding(host, g, emb, full=full)
    if not rep:
        print(f"embedding failed validation: {rep.message}", file=sys.stderr)
        return 1
    _emit(args.out, format_mapping(host, emb.mapping, args.labels))
    return 0


def cmd_split(args) -> int:
    g = parse_gr(_read(args.graph), args.graph)
    mode = args.mode
    if mode != "tw" and not g.is_forest():
        raise UsageError(f"{args.graph} is not a forest")
    out: dict = {"mode": mode}
    if mode == "forest3":
        if args.m is None or args.M is None:
            raise UsageError("forest3 needs --m and --M")
        sp = split_three(g, args.m, args.M)
        out.update(separator=[sp.s], parts=[sorted(p) for p in sp.parts])
    elif mode in ("forest-cor1", "forest-cor2"):
        if args.N is None or args.X is None:
            raise UsageError(f"{mode} needs --N and --X")
        ctx = DeltaContext(args.N, args.X)
        if mode == "forest-cor1":
            sp = split_one_sep(g, ctx)
            out.update(separator=[sp.s], parts=[sorted(p) for p in sp.parts])
        else:
            sp = split_two_sep(g, ctx)
            out.update(separators=[[sp.s1], [sp.s2]], parts=[sorted(p) for p in sp.parts])
    else:
        if args.td is None or args.w is None:
            raise UsageError("tw mode needs --td and --w")
        td = parse_td(_read(args.td), args.td)
        splitter = TwSplitter(g, td, args.w)
        whole = frozenset(g)
        if args.N is not None and args.X is not None:
            ctx = DeltaContext(args.N, args.X)
            n, w = len(g), args.w
            if n <= 5 * ctx.N + ctx.X + 2 * w + 2:
                S, parts = one_separator(splitter, whole, ctx)
                out.update(separator=sorted(S), parts=[sorted(p) for p in parts])
            else:
                S1, S2, parts = two_separators(splitter, whole, ctx)
                out.update(separators=[sorted(S1), sorted(S2)], parts=[sorted(p) for p in parts])
        elif args.m is not None and args.M is not None:
            S, *parts = three_way(splitter, whole, args.m, args.M)
            out.update(separator=sorted(S), parts=[sorted(p) for p in parts])
        else:
            raise UsageError("tw mode needs --m/--M or --N/--X")
    print(json.dumps(out))
    return 0


def _print_report(rep: harness.VerificationReport) -> int:
    print(rep.summary())
    print(json.dumps(rep.record()))
    for p in rep.parts:
        print(json.dumps(p.record()))
    return 0 if rep.passed else 1


def cmd_verify(args) -> int:
    rep = harness.verify(args.n_max, args.d, args.threads)
    return _print_report(rep)


def cmd_verify_tw(args) -> int:
    rep = harness.verify_tw(args.n, args.w, args.instances, args.seed, args.threads)
    return _print_report(rep)


def cmd_table(args) -> int:
    if args.mode == "tree":
        rows = harness.edge_table(args.n, args.d)
        limit = harness.tree_ratio_limit(args.d)
        print(f"# U(n,{args.d}): edges / (n ln n), limit {limit:.4f}")
        print(f"{'n':>8} {'edges':>10} {'ratio':>8}")
        for r in rows:
            print(f"{r.n:>8} {r.edges:>10} {r.ratio:>8.4f}")
    else:
        rows = harness.edge_table(args.n, ws=args.w)
        print("# U(n,3,w): edges / ((w+1) n ln(n/w)) and the lower bound")
        print(f"{'n':>8} {'w':>3} {'edges':>10} {'ratio':>8} {'lower':>10}")
        for r in rows:
            print(f"{r.n:>8} {r.w:>3} {r.edges:>10} {r.ratio:>8.4f} {r.lower:>10}")
    for r in rows:
        print(json.dumps(r.record()))
    return 0


def cmd_selftest(args) -> int:
    rep = harness.run_selftest(args.profile, args.seed, args.threads, args.mutate)
    return _print_report(rep)


def cmd_tw_bounds(args) -> int:
    row = tw_bounds(args.n, args.w)
    print(f"n={row.n} w={row.w} lower_bound_edges={row.lower} count_edges_tw={row.edges} accounting={row.accounting}")
    print(json.dumps({"n": row.n, "w": row.w, "lower": row.lower, "edges": row.edges, "accounting": row.accounting}))
    return 0


# --- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="univgraph", description="Sparse universal graphs for trees and bounded treewidth.")
    p.add_argument("--threads", type=int, default=1, help="worker processes for verification suites")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="write U(n,d) or U(n,3,w) as a .gr file")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--d", type=int, default=3)
    c.add_argument("--treewidth", type=int, help="blow up with cliques of size w+1 (forces d=3)")
    c.add_argument("--out", help="output file (default stdout)")
    c.set_defaults(func=cmd_construct)

    e = sub.add_parser("embed", help="embed a forest into U(n,d)")
    e.add_argument("--host", type=_host_spec, required=True, metavar="N,D")
    e.add_argument("--tree", required=True, help="guest forest (.gr or plain edge list)")
    e.add_argument("--out")
    e.add_argument("--labels", choices=("position", "address"), default="position")
    e.set_defaults(func=cmd_embed)

    t = sub.add_parser("tw-embed", help="embed a graph with a tree decomposition into U(n,3,w)")
    t.add_argument("--n", type=int, required=True)
    t.add_argument("--w", type=int, required=True)
    t.add_argument("--graph", required=True)
    t.add_argument("--td", required=True)
    t.add_argument("--out")
    t.add_argument("--labels", choices=("position", "address"), default="position")
    t.set_defaults(func=cmd_tw_embed)

    s = sub.add_parser("split", help="run a separator procedure and print the parts as JSON")
    s.add_argument("--mode", choices=("forest3", "forest-cor1", "forest-cor2", "tw"), required=True)
    s.add_argument("--graph", required=True)
    s.add_argument("--td")
    s.add_argument("--w", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--M", type=int)
    s.add_argument("--N", type=int)
    s.add_argument("--X", type=int)
    s.set_defaults(func=cmd_split)

    v = sub.add_parser("verify", help="embed every free tree on up to n-max vertices")
    v.add_argument("--n-max", type=int, required=True)
    v.add_argument("--d", type=int, default=3, choices=(2, 3))
    v.set_defaults(func=cmd_verify)

    vt = sub.add_parser("verify-tw", help="embed random partial w-trees into U(n,3,w)")
    vt.add_argument("--n", type=int, required=True)
    vt.add_argument("--w", type=int, required=True)
    vt.add_argument("--instances", type=int, default=100)
    vt.add_argument("--seed", type=int, default=None, help=f"default from ${harness.SEED_ENV} or {harness.DEFAULT_SEED}")
    vt.set_defaults(func=cmd_verify_tw)

    tb = sub.add_parser("table", help="edge-count table")
    tb.add_argument("--mode", choices=("tree", "tw"), default="tree")
    tb.add_argument("--n", type=_int_list, required=True, help="comma list, ranges as lo:hi")
    tb.add_argument("--d", type=int, default=3)
    tb.add_argument("--w", type=_int_list, default=[1])
    tb.set_defaults(func=cmd_table)

    st = sub.add_parser("selftest", help="run the verification suites")
    st.add_argument("--profile", choices=("quick", "full"), default="quick")
    st.add_argument("--seed", type=int, default=None)
    st.add_argument("--mutate", choices=("t3",), default=None, help="delete type-3 edges to check the suite notices")
    st.set_defaults(func=cmd_selftest)

    b = sub.add_parser("tw-bounds", help="lower bound next to the edge count of U(n,3,w)")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--w", type=int, required=True)
    b.set_defaults(func=cmd_tw_bounds)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        print("--threads must be at least 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EmbeddingError, DecompositionError, SeparatorError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
