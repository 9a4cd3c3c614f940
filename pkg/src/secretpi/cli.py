"""Command-line front end: ``secretpi <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import kernels
from .congruence import normalize, to_standard_form
from .encodings import (
    build_credit_card, build_dbus, build_example1, build_example2, dbus_leaked, encode_match,
    example2_context,
)
from .equivalence import Bisimilar, Bounds, Inconclusive, barbs, bisimilar, serialize_verdict, weak_barbs
from .lts import Mode, ModeMismatch, NameBudget, build_graph
from .parser import ParseError, parse, pretty
from .reduction import reach
from .syntax import free_names

EXIT_OK = 0
EXIT_NOT_BISIMILAR = 1
EXIT_INPUT = 2
EXIT_INCONCLUSIVE = 3


@dataclass
class RunConfig:
    mode: Mode = Mode.PLAIN
    max_states: int = 5000
    max_steps: int = 64
    repl_unfold: int = 2
    fresh_count: int = 1
    output_format: str = "text"

    @classmethod
    def from_args(cls, args):
        return cls(Mode(args.mode), args.max_states, args.max_steps, args.repl_unfold,
                   args.fresh, args.format)

    @property
    def bounds(self) -> Bounds:
        return Bounds(self.max_steps, self.max_states, self.repl_unfold, self.fresh_count)


class InputError(Exception):
    pass


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def read_process(path: str):
    try:
        if path == "-":
            data = sys.stdin.buffer.read()
        else:
            with open(path, "rb") as fh:
                data = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse(data)
    except ParseError as exc:
        raise InputError(f"{path}:{exc}") from None


def _emit(obj, fmt):
    if fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(obj, end="" if isinstance(obj, str) and obj.endswith("\n") else "\n")


# ---------------------------------------------------------------------------
# commands

def cmd_parse(args, cfg):
    p = read_process(args.file)
    if cfg.output_format == "json":
        sf = to_standard_form(p)
        _emit({"term": pretty(p), "normal": pretty(normalize(p)),
               "binders": [list(b) for b in sf.binders],
               "threads": [pretty(t) for t in sf.threads]}, "json")
    else:
        print(pretty(normalize(p) if args.normalize else p))
    return EXIT_OK


def cmd_reduce(args, cfg):
    p = read_process(args.file)
    res = reach(p, cfg.max_steps, cfg.max_states, cfg.repl_unfold)
    leaks = [dbus_leaked(s, args.leak_channel) for s in res.states] if args.scan_leak else None
    if cfg.output_format == "json":
        _emit({"states": [pretty(s) for s in res.states],
               "edges": [list(e) for e in res.edges],
               "leaks": [i for i, hit in enumerate(leaks or []) if hit],
               "boundhit": res.bound_hit}, "json")
        return EXIT_OK
    print(f"boundhit {int(res.bound_hit)}")
    if args.edges:
        for s, d in res.edges:
            print(f"step {s} {d}")
    for i, s in enumerate(res.states):
        mark = " LEAK" if leaks and leaks[i] else ""
        print(f"state {i}{mark} {pretty(s)}")
    return EXIT_OK


def cmd_lts(args, cfg):
    p = read_process(args.file)
    g = build_graph(p, cfg.mode, NameBudget(free_names(p), cfg.fresh_count), cfg.max_states)
    if cfg.output_format == "dot":
        _emit(g.to_dot(), "text")
    elif cfg.output_format == "json":
        _emit({"states": [pretty(s) for s in g.states],
               "edges": [[s, str(a), d] for s, a, d in g.edges],
               "boundhit": g.bound_hit}, "json")
    else:
        _emit(g.to_machine(), "text")
    return EXIT_OK


def cmd_barbs(args, cfg):
    p = read_process(args.file)
    if args.weak:
        found, hit = weak_barbs(p, cfg.bounds)
    else:
        found, hit = barbs(p), False
    names = sorted(str(b) for b in found)
    if cfg.output_format == "json":
        _emit({"barbs": names, "boundhit": hit}, "json")
    else:
        for n in names:
            print(f"barb {n}")
        if args.weak:
            print(f"boundhit {int(hit)}")
    return EXIT_OK


def cmd_bisim(args, cfg):
    p, q = read_process(args.left), read_process(args.right)
    v = bisimilar(p, q, cfg.mode, cfg.bounds)
    if cfg.output_format == "json":
        out = {"verdict": v.name}
        if isinstance(v, Bisimilar):
            out["pairs"] = sorted([list(x) for x in v.relation])
        elif isinstance(v, Inconclusive):
            out["reason"] = v.reason
        else:
            out["trace"] = [{"action": str(s.action), "side": s.side} for s in v.trace]
        _emit(out, "json")
    else:
        _emit(serialize_verdict(v), "text")
    if isinstance(v, Bisimilar):
        return EXIT_OK
    return EXIT_INCONCLUSIVE if isinstance(v, Inconclusive) else EXIT_NOT_BISIMILAR


def cmd_build(args, cfg):
    what = args.what
    if what == "match":
        term = encode_match(args.x, args.y, parse(args.then), parse(args.otherwise))
    elif what == "leak":
        term = build_example1(args.v)[1 if args.with_context else 0]
    elif what == "trusted":
        term = build_example2(args.n, set(args.accept), args.i)
        if args.with_context:
            term = example2_context(term)
    elif what == "dbus":
        term = build_dbus(args.patched)
    else:
        term = build_credit_card(not args.open)
    print(pretty(term))
    return EXIT_OK


def cmd_check(args, cfg):
    from .checks import CHECKS, run_checks

    only = args.only or None
    if only:
        unknown = [n for n in only if n not in CHECKS]
        if unknown:
            raise InputError(f"unknown check(s): {', '.join(unknown)}; "
                             f"known: {', '.join(CHECKS)}")
    results = run_checks(only)
    if args.json or cfg.output_format == "json":
        _emit({"kernels": kernels.BACKEND,
               "checks": [{"name": r.name, "passed": r.passed, "detail": r.detail,
                           "seconds": round(r.seconds, 3),
                           "facts": [{"fact": k, "holds": v} for k, v in r.facts]}
                          for r in results]}, "json")
    else:
        for r in results:
            print(r.line())
        print(f"{sum(r.passed for r in results)}/{len(results)} checks pass")
    return EXIT_OK if all(r.passed for r in results) else EXIT_NOT_BISIMILAR


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=[m.value for m in Mode], default="plain",
                        help="transition semantics (spied is required for spy terms)")
    common.add_argument("--max-states", type=_positive, default=5000)
    common.add_argument("--max-steps", type=_positive, default=64)
    common.add_argument("--repl-unfold", type=_positive, default=2,
                        help="replicated copies unfolded per reduction step")
    common.add_argument("--fresh", type=_positive, default=1,
                        help="fresh names tried as input objects")
    common.add_argument("--format", choices=["text", "dot", "json"], default="text")

    ap = argparse.ArgumentParser(prog="secretpi", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse and print a term")
    p.add_argument("file")
    p.add_argument("--normalize", action="store_true", help="print the standard form")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("reduce", parents=[common], help="list reachable states")
    p.add_argument("file")
    p.add_argument("--scan-leak", action="store_true",
                   help="mark states where a password is output on the leak channel")
    p.add_argument("--leak-channel", default="steal")
    p.add_argument("--edges", action="store_true", help="also list the reduction steps")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("lts", parents=[common], help="labelled transition graph")
    p.add_argument("file")
    p.set_defaults(func=cmd_lts)

    p = sub.add_parser("barbs", parents=[common], help="barbs of a term")
    p.add_argument("file")
    p.add_argument("--weak", action="store_true", help="barbs of every reachable state")
    p.set_defaults(func=cmd_barbs)

    p = sub.add_parser("bisim", parents=[common], help="bounded weak bisimilarity")
    p.add_argument("left")
    p.add_argument("right")
    p.set_defaults(func=cmd_bisim)

    p = sub.add_parser("build", parents=[common], help="print a ready-made process")
    bsub = p.add_subparsers(dest="what", required=True)
    b = bsub.add_parser("match", help="if x = y then P else Q")
    b.add_argument("x")
    b.add_argument("y")
    b.add_argument("then")
    b.add_argument("otherwise")
    b = bsub.add_parser("leak", help="an attacker under hide trying to leak a name")
    b.add_argument("v", nargs="?", default="v")
    b.add_argument("--with-context", action="store_true")
    b = bsub.add_parser("trusted", help="a trusted exchange among hidden names")
    b.add_argument("n", type=_positive)
    b.add_argument("i", type=_positive)
    b.add_argument("accept", nargs="*", help="accepted names among z1..zn")
    b.add_argument("--with-context", action="store_true")
    b = bsub.add_parser("dbus", help="two users sharing a bus")
    b.add_argument("--patched", action="store_true")
    b = bsub.add_parser("credit-card", help="card check with a matching test")
    b.add_argument("--open", action="store_true", help="leave the channel unrestricted")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("check", parents=[common], help="run the built-in property checks")
    p.add_argument("--only", nargs="+", metavar="NAME")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig.from_args(args)
    try:
        return args.func(args, cfg)
    except (InputError, ModeMismatch, ValueError) as exc:
        print(f"secretpi: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
