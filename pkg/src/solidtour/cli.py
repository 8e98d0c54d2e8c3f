"""Command-line front end."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .arborescence import camion_cycle, dfs_arborescence, is_normal, redei_path
from .core_digraph import (
    DigraphError,
    all_tournaments,
    brute_force_hamilton_cycle,
    brute_force_hamilton_path,
    is_strongly_connected,
    parse_digraph,
    strong_components,
)
from .endspace import detect_limit_edge, end_report, end_threads
from .hamilton_limit import (
    approximant_dot,
    approximant_json,
    hamilton_circle_approximants,
    hamilton_path_approximants,
    validate_circle_approximant,
    validate_path_approximant,
)
from .inverse_system import build_level, to_dot, validate_system
from .oracle import GENERATORS, BadSpec, TournamentOracle, load_spec, make_generator, validate_oracle

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit_error(kind: str, message: str, **extra) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message, **extra}, ensure_ascii=False) + "\n")


def _write(args, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2)


def _load_oracle(args) -> TournamentOracle:
    if args.spec and args.oracle and args.spec != args.oracle:
        raise UsageError("give the spec either positionally or with --oracle, not both")
    src = args.spec or args.oracle
    if not src:
        raise UsageError("missing generator spec (file or generator name)")
    if os.path.exists(src):
        with open(src, encoding="utf-8") as fh:
            try:
                spec = json.load(fh)
            except json.JSONDecodeError as exc:
                raise BadSpec(f"{src}: {exc}") from None
    elif src in GENERATORS:
        spec = {"generator": src, "params": {}}
    else:
        raise BadSpec(f"no such spec file or generator: {src}")
    if args.seed is not None and spec.get("generator") == "random_solid":
        spec = {**spec, "params": {**(spec.get("params") or {}), "seed": args.seed}}
    return make_generator(spec)


# ---------------------------------------------------------------- commands


def cmd_finite(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            t = parse_digraph(fh.read(), tournament=True)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    if args.task == "hampath":
        seq = redei_path(t, args.start)
        ok = t.is_hamilton_path(seq)
    else:
        seq = camion_cycle(t)
        ok = t.is_hamilton_cycle(seq)
    if args.format == "json":
        _write(args, _dump({"task": args.task, "sequence": seq, "valid": ok}))
    else:
        _write(args, " ".join(map(str, seq)))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    o = _load_oracle(args)
    report = validate_oracle(o, args.N, args.samples)
    _write(args, _dump({"generator": o.name, "depth": args.N, **report.as_dict()}))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_levels(args) -> int:
    o = _load_oracle(args)
    if args.dot or args.format == "dot":
        _write(args, "".join(to_dot(build_level(o, n)) for n in range(args.N + 1)))
        return EXIT_OK
    report = validate_system(o, args.N)
    levels = []
    for n in range(args.N + 1):
        q = build_level(o, n)
        levels.append({
            "n": n,
            "vertices": list(q.keys),
            "edges": [
                {"from": q.key(a), "to": q.key(b), "quotient": e[0] == "q"}
                for e in q.edges
                for a, b in [q.endpoints(e)]
            ],
        })
    _write(args, _dump({"levels": levels, "system": report.as_dict()}))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_ends(args) -> int:
    o = _load_oracle(args)
    _write(args, _dump(end_report(o, args.N)))
    return EXIT_OK


def cmd_limit_edges(args) -> int:
    o = _load_oracle(args)
    threads = end_threads(o, args.N)
    rows = []
    for t in threads:
        for u in threads:
            if t is not u:
                rows.append(detect_limit_edge(o, t, u, args.N).as_dict(o))
        for v in range(args.N):
            rows.append(detect_limit_edge(o, t, v, args.N).as_dict(o))
            rows.append(detect_limit_edge(o, v, t, args.N).as_dict(o))
    _write(args, _dump({"depth": args.N, "limit_edges": rows}))
    return EXIT_OK


def _approximant_out(args, o, p, failures) -> int:
    if args.format == "dot":
        _write(args, approximant_dot(o, p, p.levels[-1]))
    else:
        body = approximant_json(o, p)
        body["failures"] = failures
        _write(args, _dump(body))
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_hampath(args) -> int:
    o = _load_oracle(args)
    p = hamilton_path_approximants(o, args.N)
    failures = validate_path_approximant(o, p) + p.certificates["parameterization_failures"]
    if not p.certificates["order"]["ok"]:
        failures.append({"check": "order"})
    if not p.certificates.get("closed_form", {"ok": True})["ok"]:
        failures.append({"check": "closed_form"})
    return _approximant_out(args, o, p, failures)


def cmd_hamcircle(args) -> int:
    o = _load_oracle(args)
    c = hamilton_circle_approximants(o, args.N)
    return _approximant_out(args, o, c, validate_circle_approximant(o, c))


def cmd_suite(args) -> int:
    """Exhaustive finite checks plus the generator pipelines."""
    results = []

    def check(name, ok):
        results.append({"check": name, "ok": bool(ok)})

    for n in range(1, args.exhaustive_n + 1):
        path_ok = cyc_ok = normal_ok = True
        for t in all_tournaments(n):
            seq = redei_path(t)
            path_ok &= t.is_hamilton_path(seq)
            strong = is_strongly_connected(t)
            if n >= 3 and strong:
                cyc_ok &= t.is_hamilton_cycle(camion_cycle(t))
            elif n <= 10 and not strong:
                cyc_ok &= brute_force_hamilton_cycle(t) is None
            if n <= 5:
                for r in strong_components(t).classes[0]:
                    normal_ok &= is_normal(t, dfs_arborescence(t, r))
        check(f"redei n={n}", path_ok)
        check(f"camion n={n}", cyc_ok)
        if n <= 5:
            check(f"normal n={n}", normal_ok)
    depth = args.N
    for name in ("binary_tree", "three_ray", "ladder", "one_ended"):
        o = make_generator({"generator": name})
        check(f"oracle {name}", validate_oracle(o, depth).ok)
        check(f"system {name}", validate_system(o, depth).ok)
        p = hamilton_path_approximants(o, depth)
        check(f"hampath {name}", not validate_path_approximant(o, p) and p.certificates["order"]["ok"])
        if o.strongly_connected:
            c = hamilton_circle_approximants(o, depth)
            check(f"hamcircle {name}", not validate_circle_approximant(o, c))
    ok = all(r["ok"] for r in results)
    if args.format == "json":
        _write(args, _dump({"ok": ok, "results": results}))
    else:
        _write(args, "\n".join(f"{'PASS' if r['ok'] else 'FAIL'} {r['check']}" for r in results))
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------- parser


def _depth(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("depth must be at least 1")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-N", type=_depth, default=6, help="depth (default 6)")
    common.add_argument("--seed", type=int, default=None, help="seed for random_solid specs")
    common.add_argument("--format", choices=("json", "dot", "text"), default=None)
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    parser = _Parser(prog="solidtour", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("finite", parents=[common], help="Hamilton path or cycle of a finite tournament")
    p.add_argument("task", choices=("hampath", "hamcycle"))
    p.add_argument("file")
    p.add_argument("--start", type=int, default=None)
    p.set_defaults(func=cmd_finite)

    p = sub.add_parser("oracle", parents=[common], help="oracle checks")
    p.add_argument("action", choices=("validate",))
    p.add_argument("spec", nargs="?", help="generator spec JSON file or generator name")
    p.add_argument("--oracle", default=None, help="same as the positional spec")
    p.add_argument("--samples", type=int, default=64)
    p.set_defaults(func=cmd_oracle)

    for name, func, helptext in (
        ("levels", cmd_levels, "contraction minors and bonding checks"),
        ("ends", cmd_ends, "end threads, limit edges and end order"),
        ("limit-edges", cmd_limit_edges, "limit-edge matrix including vertices of X_N"),
        ("hampath", cmd_hampath, "Hamilton path approximants"),
        ("hamcircle", cmd_hamcircle, "Hamilton circle approximants"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("spec", nargs="?", help="generator spec JSON file or generator name")
        p.add_argument("--oracle", default=None, help="same as the positional spec")
        if name == "levels":
            p.add_argument("--dot", action="store_true")
        p.set_defaults(func=func)

    p = sub.add_parser("suite", parents=[common], help="run the built-in check suite")
    p.add_argument("--exhaustive-n", type=int, default=6)
    p.set_defaults(func=cmd_suite)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.format is None:
            args.format = "text" if args.command in ("finite", "suite") else "json"
        return args.func(args)
    except UsageError as exc:
        _emit_error("UsageError", str(exc))
        return EXIT_USAGE
    except BadSpec as exc:
        _emit_error("BadSpec", str(exc))
        return EXIT_USAGE
    except DigraphError as exc:
        # malformed finite input is a usage problem; anything else failed verification
        if type(exc).__name__ in ("DigraphError", "InvalidTournament"):
            _emit_error(type(exc).__name__, str(exc))
            return EXIT_USAGE
        _emit_error(type(exc).__name__, str(exc))
        return EXIT_FAIL
    except (RuntimeError, ValueError) as exc:
        _emit_error(type(exc).__name__, str(exc))
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
