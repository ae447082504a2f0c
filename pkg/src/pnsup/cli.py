"""Command line front end: ``pnsup synth|verify|graph``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .classification import classify, format_classification
from .errors import LimitExceeded, NetSyntaxError, NoSupervisorExists
from .guards import format_guards, parse_guards
from .net import parse_net
from .overstate import DEFAULT_MAX_CLOSURE
from .reachability import DEFAULT_MAX_STATES, DEFAULT_MAX_TOKENS, build_graph, to_dot
from .synthesis import METHODS, format_trace, synthesize
from .verifier import format_report, verify

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_LIMIT = 3
EXIT_NO_SUPERVISOR = 4
EXIT_VERIFY = 5


def _positive(text):
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pnsup",
        description="Guard synthesis for forbidden-state avoidance on bounded Petri nets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def limits(p):
        p.add_argument("--max-states", type=_positive, default=DEFAULT_MAX_STATES)
        p.add_argument("--max-tokens", type=_positive, default=DEFAULT_MAX_TOKENS)

    p = sub.add_parser("synth", help="synthesize guards for the controllable transitions")
    p.add_argument("net", type=Path)
    p.add_argument("--method", choices=METHODS, default="best")
    p.add_argument("--out", type=Path, help="guard file (default: stdout)")
    p.add_argument("--trace", type=Path, help="write per-stage reduction sets here")
    p.add_argument("--exact-cover", action="store_true",
                   help="exhaustive minimum cover for charts up to 20 rows")
    p.add_argument("--max-closure", type=_positive, default=DEFAULT_MAX_CLOSURE)
    limits(p)

    p = sub.add_parser("verify", help="replay the closed loop under a guard file")
    p.add_argument("net", type=Path)
    p.add_argument("guards", type=Path)
    limits(p)

    p = sub.add_parser("graph", help="export the reachability graph as DOT")
    p.add_argument("net", type=Path)
    p.add_argument("--dot", type=Path, required=True)
    p.add_argument("--classify", action="store_true", help="highlight forbidden and border states")
    limits(p)
    return parser


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise NetSyntaxError(f"cannot read {path}: {exc.strerror}") from None


def _load(args):
    net, spec = parse_net(_read(args.net))
    graph = build_graph(net, args.max_states, args.max_tokens)
    return net, spec, graph


def cmd_synth(args) -> int:
    net, spec, graph = _load(args)
    cls = classify(net, graph, spec)
    controller = synthesize(net, graph, cls, args.method, args.exact_cover, args.max_closure)
    report = verify(net, graph, cls, controller.guards)
    text = format_guards(controller.guards, net)
    if args.out:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if args.trace:
        args.trace.write_text(format_trace(net, controller), encoding="utf-8")
    print(f"net {net.name}: {len(graph)} states", file=sys.stderr)
    sys.stderr.write(format_classification(graph, cls))
    for t, p in controller.provenance.items():
        if p.fallback:
            print(f"note: {net.transitions[t].name} uses an unsimplified guard", file=sys.stderr)
    sys.stderr.write(format_report(graph, report))
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_verify(args) -> int:
    net, spec, graph = _load(args)
    guards = parse_guards(_read(args.guards), net)
    cls = classify(net, graph, spec)
    report = verify(net, graph, cls, guards)
    sys.stdout.write(format_report(graph, report))
    return EXIT_OK if report.ok else EXIT_VERIFY


def cmd_graph(args) -> int:
    net, spec, graph = _load(args)
    cls = classify(net, graph, spec) if args.classify else None
    args.dot.write_text(to_dot(graph, cls), encoding="utf-8")
    print(f"wrote {len(graph)} states, {len(graph.edges)} edges to {args.dot}", file=sys.stderr)
    return EXIT_OK


COMMANDS = {"synth": cmd_synth, "verify": cmd_verify, "graph": cmd_graph}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except NetSyntaxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except LimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except NoSupervisorExists as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_SUPERVISOR


if __name__ == "__main__":
    sys.exit(main())
