"""Command-line front end.  Machine output goes to stdout, diagnostics to stderr."""

from __future__ import annotations

import argparse
import sys
from importlib.metadata import PackageNotFoundError, version

from .bisim import bisimilar, collapse
from .corpus import quadratic_family
from .readback import NotEagerScope, maxshare, readback
from .syntax import OpenTerm, ParseError, parse, pretty, term_size
from .termgraph import MalformedGraph, NotALambdaTermGraph, TermGraph, from_json, to_dot, to_json
from .translate import Semantics, graphsem
from .unfold import is_productive, unfold_truncated


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as handle:
        return handle.read()


def _graph_or_term(text: str) -> TermGraph:
    """Graph JSON is taken as is; anything else is parsed as a term and translated."""
    if text.lstrip().startswith("{"):
        return from_json(text)
    return graphsem(parse(text), Semantics.MAX)


def _render(g: TermGraph, fmt: str) -> str:
    return to_dot(g) if fmt == "dot" else to_json(g) + "\n"


def _cmd_parse(args) -> int:
    print(pretty(parse(_read(args.file))))
    return 0


def _cmd_unfold(args) -> int:
    print(unfold_truncated(parse(_read(args.file)), args.depth, args.strategy))
    return 0


def _cmd_productive(args) -> int:
    print("true" if is_productive(parse(_read(args.file))) else "false")
    return 0


def _cmd_translate(args) -> int:
    g = graphsem(parse(_read(args.file)), Semantics(args.semantics))
    sys.stdout.write(_render(g, args.format))
    return 0


def _cmd_collapse(args) -> int:
    g, _ = collapse(_graph_or_term(_read(args.file)))
    sys.stdout.write(_render(g, args.format))
    return 0


def _cmd_readback(args) -> int:
    print(pretty(readback(from_json(_read(args.file)))))
    return 0


def _cmd_maxshare(args) -> int:
    t = parse(_read(args.file))
    print(pretty(maxshare(t, unshare_dels=args.unshare_dels, no_var_sharing=args.no_var_sharing)))
    return 0


def _cmd_equiv(args) -> int:
    g1 = _graph_or_term(_read(args.file1))
    g2 = _graph_or_term(_read(args.file2))
    same = bisimilar(g1, g2)
    print("equivalent" if same else "not equivalent")
    return 0 if same else 1


def _cmd_stats(args) -> int:
    if args.family != "quadratic":
        raise UsageError(f"unknown family {args.family!r}")
    t = quadratic_family(args.n)
    print(f"n={args.n} term_size={term_size(t)} graph_size={len(graphsem(t))}")
    return 0


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lletrec", description="Unfolding semantics and maximal sharing for letrec terms.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        return p

    p = command("parse", _cmd_parse, "parse and pretty-print a term")
    p.add_argument("file", help='term file, "-" for stdin')

    p = command("unfold", _cmd_unfold, "print the truncated infinite unfolding")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--strategy", choices=("outermost", "innermost"), default="outermost")
    p.add_argument("file")

    p = command("productive", _cmd_productive, "decide whether the unfolding is free of black holes")
    p.add_argument("file")

    p = command("translate", _cmd_translate, "translate a term into a lambda-term-graph")
    p.add_argument("--semantics", choices=("max", "min"), default="max")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("file")

    p = command("collapse", _cmd_collapse, "bisimulation collapse of a graph (JSON) or of a term's translation")
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("file")

    p = command("readback", _cmd_readback, "read a term back from graph JSON")
    p.add_argument("file")

    p = command("maxshare", _cmd_maxshare, "maximally shared form of a term")
    p.add_argument("--unshare-dels", action="store_true", help="copy shared delimiter chains before readback")
    p.add_argument("--no-var-sharing", action="store_true", help="never bind a variable occurrence to a function")
    p.add_argument("file")

    p = command("equiv", _cmd_equiv, "exit 0 if both inputs have the same unfolding, 1 if not")
    p.add_argument("file1")
    p.add_argument("file2")

    p = command("stats", _cmd_stats, "term and graph sizes for a generated family")
    p.add_argument("--family", default="quadratic")
    p.add_argument("--n", type=int, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ParseError, OpenTerm, MalformedGraph, NotALambdaTermGraph, NotEagerScope, UsageError, OSError, ValueError) as exc:
        print(f"lletrec: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
