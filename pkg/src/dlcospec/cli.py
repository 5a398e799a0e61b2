"""Command-line interface.

Exit codes: 0 success, 1 a verification failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext
from typing import Callable, Sequence

from . import constructions as C
from .census import (
    ENUMERATION_LIMIT,
    CensusError,
    IngestStats,
    enumerate_connected,
    ingest_corpus,
    preservation_report,
    run_census,
    save_classes,
)
from .checks import CHECK_ALIASES, CHECKS, check_coefficients, check_coefficients_graph6
from .graph import DisconnectedGraphError, Graph, Graph6Error, GraphError, encode_graph6, parse_edge_list, parse_graph6
from .invariants import compare_profiles, profile
from .isomorphism import are_isomorphic
from .spectra import EIGEN_TOL, GROUP_TOL, dl_char_poly, dl_spectrum

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# -- graph families ---------------------------------------------------------

def _int_set(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad integer list {text!r}") from exc


# name -> (required parameters, builder returning one or more graphs)
FAMILIES: dict[str, tuple[tuple[str, ...], Callable[..., list[Graph]]]] = {
    "complete": (("n",), lambda n: [Graph.complete(n)]),
    "path": (("n",), lambda n: [Graph.path(n)]),
    "cycle": (("n",), lambda n: [Graph.cycle(n)]),
    "circulant": (("n", "set"), lambda n, set: [C.circulant(n, _int_set(set))]),
    "consecutive-circulant": (("n", "r"), lambda n, r: [C.consecutive_circulant(n, r)]),
    "shrikhande": ((), lambda: [C.shrikhande()]),
    "hamming": (("d", "q"), lambda d, q: [C.hamming(d, q)]),
    "doob": (("m", "n"), lambda m, n: [C.doob(m, n)]),
    "triangular": (("m",), lambda m: [C.triangular(m)]),
    "paley": (("p",), lambda p: [C.paley(p)]),
    "hn": (("n",), lambda n: [C.transmission_regular_family(n)]),
    "bk": (("k",), lambda k: [C.bipartite_family_graph(k)]),
    "bk-pair": (("k",), lambda k: list(C.bipartite_family_pair(k))),
    "twin-host": ((), lambda: [C.co_transmission_example().host]),
    "twin-pair": ((), lambda: _twin_pair()),
}


def _twin_pair() -> list[Graph]:
    ts = C.co_transmission_example()
    pair = C.cousin_edge_pair(ts.host, C.CousinSet(ts.host, ts.pairs))
    assert pair is not None
    return list(pair)


def build_family(name: str, args: argparse.Namespace) -> tuple[list[Graph], dict]:
    if name not in FAMILIES:
        raise InputError(f"unknown family {name!r}; choose from {', '.join(sorted(FAMILIES))}")
    required, builder = FAMILIES[name]
    params = {}
    for p in required:
        value = getattr(args, p if p != "set" else "conn_set", None)
        if value is None:
            raise InputError(f"family {name} needs --{p}")
        params[p] = value
    try:
        graphs = builder(**params)
    except (ValueError, GraphError) as exc:
        raise InputError(str(exc)) from exc
    shown = {k: (_int_set(v) if k == "set" else v) for k, v in params.items()}
    return graphs, shown


def _add_family_params(p: argparse.ArgumentParser) -> None:
    for flag in ("n", "k", "m", "d", "q", "p", "r"):
        p.add_argument(f"--{flag}", type=int)
    p.add_argument("--set", dest="conn_set", help="comma-separated connection set")


# -- graph sources --------------------------------------------------------------

def _add_sources(p: argparse.ArgumentParser) -> None:
    p.add_argument("--g6", action="append", default=[], help="graph6 literal (repeatable)")
    p.add_argument("--edges", action="append", default=[], help='edge list "n; u v; u v; ..." (repeatable)')
    p.add_argument("--file", action="append", default=[], help="graph6 file, '-' for stdin (repeatable)")
    p.add_argument("--circ", action="append", default=[], metavar="N:S", help='circulant such as "16:1,2,8" (repeatable)')
    p.add_argument("--family", help="named family (see construct)")
    _add_family_params(p)


def read_sources(args: argparse.Namespace) -> list[Graph]:
    graphs: list[Graph] = []
    try:
        graphs += [parse_graph6(s) for s in args.g6]
        graphs += [parse_edge_list(s) for s in args.edges]
        for path in args.file:
            with nullcontext(sys.stdin) if path == "-" else open(path) as fh:
                graphs += [parse_graph6(line.strip()) for line in fh if line.strip()]
        for spec in args.circ:
            n, _, s = spec.partition(":")
            graphs.append(C.circulant(int(n), _int_set(s)))
    except (Graph6Error, GraphError, ValueError, OSError) as exc:
        raise InputError(str(exc)) from exc
    if args.family:
        graphs += build_family(args.family, args)[0]
    if not graphs:
        raise InputError("no input graphs (use --g6, --edges, --file, --circ or --family)")
    return graphs


# -- subcommands ---------------------------------------------------------------------

def cmd_spectrum(args: argparse.Namespace) -> int:
    records = []
    for g in read_sources(args):
        try:
            poly = dl_char_poly(g)
            spec = dl_spectrum(g)
        except DisconnectedGraphError as exc:
            raise InputError(str(exc)) from exc
        records.append(
            {
                "graph6": encode_graph6(g),
                "order": g.order,
                "poly": [str(c) for c in poly.coeffs],
                "poly_text": str(poly),
                "spectrum": [{"value": v, "multiplicity": m} for v, m in spec.groups(args.group_tol)],
            }
        )
    if args.json:
        _emit_json(records if len(records) > 1 else records[0])
    else:
        for r in records:
            print(f"graph6: {r['graph6']}")
            print(f"polynomial: {r['poly_text']}")
            print("spectrum: {" + ", ".join(_fmt_eig(s["value"], s["multiplicity"]) for s in r["spectrum"]) + "}")
    return EXIT_OK


def _fmt_eig(v: float, m: int) -> str:
    text = f"{v:.10g}"
    if abs(v - round(v)) < 1e-9:
        text = str(int(round(v)))
    return text if m == 1 else f"{text} (x{m})"


def cmd_construct(args: argparse.Namespace) -> int:
    graphs, params = build_family(args.name, args)
    lines = [encode_graph6(g) for g in graphs]
    provenance = {"family": args.name, "parameters": params}
    if args.json:
        _emit_json({**provenance, "order": graphs[0].order, "graphs": lines})
    else:
        for line in lines:
            print(line)
        print(json.dumps(provenance))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    graphs = read_sources(args)
    if len(graphs) != 2:
        raise InputError(f"verify needs exactly two graphs, got {len(graphs)}")
    g, h = graphs
    try:
        same_poly = g.order == h.order and dl_char_poly(g) == dl_char_poly(h)
    except DisconnectedGraphError as exc:
        raise InputError(str(exc)) from exc
    iso = are_isomorphic(g, h)
    if iso:
        verdict = "isomorphic"
    elif same_poly:
        verdict = "cospectral, non-isomorphic"
    else:
        verdict = "not cospectral"
    diff = []
    if not iso and g.order <= 64:
        pa, pb = profile(g), profile(h)
        diff = [{"field": f, "first": _plain(getattr(pa, f)), "second": _plain(getattr(pb, f))} for f in compare_profiles(pa, pb)]
    if args.json:
        _emit_json({"graphs": [encode_graph6(g), encode_graph6(h)], "verdict": verdict, "differences": diff})
    else:
        print(verdict)
        for d in diff:
            print(f"  {d['field']}: {d['first']} vs {d['second']}")
    return EXIT_OK if verdict == "cospectral, non-isomorphic" else EXIT_FAILED


def _plain(v):
    if isinstance(v, tuple):
        return [_plain(x) for x in v]
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return str(v)


def cmd_census(args: argparse.Namespace) -> int:
    stats = []
    if args.enumerate is not None:
        try:
            source = enumerate_connected(args.enumerate, limit=args.enumeration_limit)
            source = list(source)
        except (CensusError, ValueError) as exc:
            raise InputError(str(exc)) from exc
    elif args.corpus:
        def chained():
            for path in args.corpus:
                st = IngestStats()
                stats.append((path, st))
                yield from ingest_corpus(path, max_errors=args.max_errors, stats=st)
        source = chained()
    else:
        raise InputError("census needs --enumerate N or --corpus PATH")
    try:
        classes = run_census(source, shards=args.shards)
    except (CensusError, OSError) as exc:
        raise InputError(str(exc)) from exc
    if args.out:
        save_classes(classes, args.out)
    report = preservation_report(classes) if classes and (args.report or args.json) else None
    if args.report and report:
        with open(args.report, "w") as fh:
            fh.write(report.to_markdown())
    if args.json:
        _emit_json(
            {
                "classes": [json.loads(c.to_json()) for c in classes],
                "ingest": [
                    {"path": p, "graphs": s.graphs, "disconnected": s.disconnected, "errors": len(s.errors)}
                    for p, s in stats
                ],
                "report": report.to_dict() if report else None,
            }
        )
    else:
        for p, s in stats:
            print(f"{p}: {s.graphs} graphs, {s.disconnected} disconnected skipped, {len(s.errors)} malformed lines")
        print(f"{len(classes)} cospectral classes")
        for c in classes:
            print(f"order {c.order}: {c.poly}")
            for m in c.members:
                print(f"  {m}")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    name = CHECK_ALIASES.get(args.id, args.id)
    if name not in CHECKS:
        raise InputError(f"unknown check {args.id!r}; choose from {', '.join(sorted(CHECKS) + sorted(CHECK_ALIASES))}")
    if name == "coefficients":
        if args.corpus:
            def lines():
                for path in args.corpus:
                    for g in ingest_corpus(path, max_errors=args.max_errors):
                        yield encode_graph6(g)
            result = check_coefficients_graph6(lines(), tol=args.eigen_tol)
        else:
            n = args.enumerate if args.enumerate is not None else 7
            try:
                graphs = [g for m in range(1, n + 1) for g in enumerate_connected(m, limit=args.enumeration_limit)]
            except CensusError as exc:
                raise InputError(str(exc)) from exc
            result = check_coefficients(graphs, tol=args.eigen_tol)
    elif name in ("hn-transmission", "consecutive-circulant") and args.max_n is not None:
        result = CHECKS[name](max_n=args.max_n)
    else:
        result = CHECKS[name]()
    if args.json:
        _emit_json({"check": name, "ok": result.ok, "cases": result.checked, "details": result.details})
    else:
        print(result.summary())
    return EXIT_OK if result.ok else EXIT_FAILED


def _emit_json(obj) -> None:
    json.dump(obj, sys.stdout, indent=None)
    sys.stdout.write("\n")


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dlcospec", description="Distance Laplacian spectra and cospectral graphs.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--enumeration-limit", type=int, default=ENUMERATION_LIMIT + 1,
                        help="largest order for built-in enumeration (default: %(default)s)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="exact polynomial and numeric spectrum")
    _add_sources(p)
    p.add_argument("--group-tol", type=float, default=GROUP_TOL, help="eigenvalue grouping tolerance")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("construct", help="emit a named graph or pair as graph6")
    p.add_argument("name", help=", ".join(sorted(FAMILIES)))
    _add_family_params(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="decide cospectrality of two graphs and diff their parameters")
    _add_sources(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", help="find cospectral classes")
    p.add_argument("--enumerate", type=int, metavar="N", help="use every connected graph of order N")
    p.add_argument("--corpus", action="append", default=[], help="graph6 file, optionally gzipped (repeatable)")
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--out", help="JSONL file for the classes")
    p.add_argument("--report", help="markdown preservation report")
    p.add_argument("--max-errors", type=int, default=100)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("check", help="run a named verification")
    p.add_argument("id", help=", ".join(sorted(CHECKS) + sorted(CHECK_ALIASES)))
    p.add_argument("--max-n", type=int)
    p.add_argument("--enumerate", type=int, metavar="N", help="coefficients: all connected graphs up to order N")
    p.add_argument("--corpus", action="append", default=[])
    p.add_argument("--max-errors", type=int, default=100)
    p.add_argument("--eigen-tol", type=float, default=EIGEN_TOL)
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "shards", 1) < 1:
        parser.error("--shards must be at least 1")
    for name in ("group_tol", "eigen_tol"):
        if getattr(args, name, 1.0) <= 0:
            parser.error("tolerances must be positive")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
