"""Command-line interface: ``reidtree <subcommand> [flags]``.

JSON is the primary output; text output is rendered from the same document
as tab-delimited lines.  Exit status: 0 success, 2 a search found nothing
within its budget, 1 any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, certify, plotting, selfsim, tree, twisted, witness
from .errors import CapExceeded, CertificateError, ReidTreeError, SpecParseError
from .galois import solvable_transitive_analysis
from .permgrp import DEFAULT_CAP
from .quotients import is_level_transitive, level_quotient, wst_check

EXIT_OK, EXIT_ERROR, EXIT_NOT_FOUND = 0, 1, 2


def load_group(source: str) -> selfsim.WreathRecursion:
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise SpecParseError(f"group spec file {source} not found")
        return selfsim.load_spec(path)
    return selfsim.builtin(source)


def resolve_aut(spec: selfsim.WreathRecursion, source: str, depth: int) -> tree.Portrait:
    """identity | root-swap | odometer | word:<word> | portrait file (.json)."""
    t = spec.tree
    if source == "identity":
        return tree.identity_portrait(t, depth)
    if source in ("root-swap", "root-rotation"):
        return tree.root_rotation(t, depth)
    if source == "odometer":
        return tree.odometer(t, depth)
    if source.startswith("word:"):
        return selfsim.portrait_of_word(spec, selfsim.parse_word(source[5:]), depth)
    path = Path(source.removeprefix("portrait:"))
    if not path.exists():
        raise SpecParseError(f"automorphism {source!r}: not a known name, word: or file")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    p = tree.Portrait.from_json(data, t)
    if p.depth < depth:
        raise SpecParseError(f"portrait in {path} has depth {p.depth} < required {depth}")
    return p


# -- text rendering ------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, (list, tuple)) and any(isinstance(x, (list, tuple, dict)) for x in v):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, (list, tuple)):
        return ",".join(_cell(x) for x in v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else str(v)


def render_text(doc: dict) -> str:
    lines = []
    for key, value in doc.items():
        if key in certify.UNSEALED_KEYS:
            continue
        if isinstance(value, list) and value and all(isinstance(r, dict) for r in value):
            cols = list(value[0])
            lines.append(f"# {key}")
            lines.append("\t".join(cols))
            lines.extend("\t".join(_cell(r.get(c)) for c in cols) for r in value)
        elif isinstance(value, dict):
            for sub, v in value.items():
                lines.append(f"{key}.{sub}\t{_cell(v)}")
        else:
            lines.append(f"{key}\t{_cell(value)}")
    return "\n".join(lines)


def emit(args, body: dict) -> dict:
    doc = certify.seal(body)
    text = json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text if args.json else render_text(doc))
    return doc


# -- subcommands ---------------------------------------------------------

def cmd_info(args) -> int:
    spec = load_group(args.group)
    emit(args, {
        "command": "info",
        "group": selfsim.group_ref(spec),
        "alphabet": spec.alphabet,
        "generators": list(spec.all_generators),
        "states": {s: {"perm": list(st.perm), "sections": list(st.sections)}
                   for s, st in spec.states.items()},
        "level_transitive": [{"level": n, "transitive": is_level_transitive(spec, n)}
                             for n in range(1, args.depth + 1)],
    })
    return EXIT_OK


def cmd_orbits(args) -> int:
    spec = load_group(args.group)
    t = resolve_aut(spec, args.aut, args.depth)
    stats = [tree.orbit_stats(t, n) for n in range(1, args.depth + 1)]
    growth = tree.classify_orbit_growth(t, args.depth, args.window)
    levels = [{"level": s.level, "orbit_count": s.orbit_count, "order": tree.level_order(t, s.level),
               "lengths": list(s.lengths), "fixed": len(s.fixed_vertices)} for s in stats]
    emit(args, {"command": "orbits", "aut": args.aut, "levels": levels, "growth": growth.to_json()})
    if args.plot:
        plotting.plot_orbit_growth(growth.counts, args.plot, growth.verdict,
                                   [spec.tree.level_size(n) for n in range(1, args.depth + 1)])
    return EXIT_OK


def cmd_quotient(args) -> int:
    spec = load_group(args.group)
    rows = []
    truncated = None
    for n in range(1, args.depth + 1):
        try:
            Q = level_quotient(spec, n, args.cap)
        except CapExceeded as exc:
            truncated = {"level": n, "cap": args.cap, "partial": exc.partial}
            break
        rows.append({"level": n, "order": Q.order, "degree": Q.group.degree,
                     "level_transitive": is_level_transitive(spec, n)})
    emit(args, {"command": "quotient", "group": args.group, "levels": rows, "cap_exceeded": truncated})
    if args.plot and rows:
        plotting.plot_quotient_orders([r["level"] for r in rows], [r["order"] for r in rows],
                                      args.plot, args.group)
    return EXIT_OK


def cmd_reid(args) -> int:
    spec = load_group(args.group)
    n_max = args.max_n or args.depth
    t = resolve_aut(spec, args.aut, n_max)
    series = twisted.reid_series(spec, t, n_max, args.cap)
    body = {"command": "reid", "group": args.group, "aut": args.aut, **series.to_json()}
    emit(args, body)
    if args.plot and series.rows:
        plotting.plot_reid_series(body["rows"], args.plot)
    return EXIT_OK


def cmd_wst(args) -> int:
    spec = load_group(args.group)
    v = tree.path_from_str(args.vertex)
    res = wst_check(spec, v, args.depth, args.cap)
    emit(args, {
        "command": "wst", "group": args.group, "vertex": args.vertex, "status": res.status,
        "v0": None if res.v0 is None else tree.path_to_str(res.v0), "level": res.level,
        "orbit": [tree.path_to_str(u) for u in res.orbit], "searched_to": res.searched_to,
    })
    if res.status == "cap-exceeded":
        print(f"cap exceeded: level-{res.searched_to} quotient has more than {args.cap} elements",
              file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK if res.found else EXIT_NOT_FOUND


def cmd_witness(args) -> int:
    spec = load_group(args.group)
    t = resolve_aut(spec, args.aut, args.depth)
    if args.kind == "finite-order":
        cert = witness.finite_order_witness(spec, t, args.j, args.depth, args.cap)
    elif args.kind == "bounded-orbit":
        cert = witness.bounded_orbit_witness(spec, t, args.j, args.depth, args.cap)
    else:
        pw = witness.parity_witness(spec, args.j, args.depth, args.cap)
        cert = pw.certificate(t) if pw is not None else None
    if cert is None:
        print(f"not found: no {args.kind} witness for j={args.j} within depth {args.depth}")
        return EXIT_NOT_FOUND
    emit(args, cert.to_json())
    return EXIT_OK


def cmd_chain(args) -> int:
    spec = load_group(args.group)
    t = resolve_aut(spec, args.aut, args.depth)
    report = witness.chain_builder(spec, t, args.N, args.strategy, args.depth, args.cap)
    emit(args, report.to_json())
    if args.plot and report.deepest_level:
        series = twisted.reid_series(spec, t, report.deepest_level, args.cap)
        bounds = {c.i: k + 2 for k, c in enumerate(report.certificates)}
        plotting.plot_reid_series([r.to_json() for r in series.rows], args.plot, bounds)
    return EXIT_OK if report.complete else EXIT_NOT_FOUND


def cmd_prime(args) -> int:
    spec = load_group(args.group)
    t = resolve_aut(spec, args.aut, args.level)
    report = witness.prime_case_analysis(spec, t, args.level, args.cap)
    emit(args, {"command": "prime", "group": args.group, "aut": args.aut, **report.to_json()})
    return EXIT_OK


def cmd_galois(args) -> int:
    table = solvable_transitive_analysis(args.p, args.cap, args.allow_large)
    emit(args, {"command": "galois", **table.to_json()})
    return EXIT_OK


def cmd_certify(args) -> int:
    try:
        doc = json.loads(Path(args.file).read_text())
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{args.file}: line {exc.lineno}: {exc.msg}") from None
    passed = certify.verify_document(doc, args.cap)
    print("certificate OK: " + ", ".join(passed))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--group", default="grigorchuk",
                        help="builtin name or group spec JSON file (default: grigorchuk)")
    common.add_argument("--aut", default="identity",
                        help="identity | root-swap | odometer | word:<word> | portrait JSON file")
    common.add_argument("--depth", type=int, default=4, help="deepest level examined")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap")
    common.add_argument("--json", action="store_true", help="print JSON instead of text")
    common.add_argument("--out", help="also write the JSON document to this file")

    parser = argparse.ArgumentParser(prog="reidtree", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"reidtree {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", parents=[common], help="tree and generator summary")
    p.set_defaults(func=cmd_info)

    p = sub.add_parser("orbits", parents=[common], help="orbit statistics of t per level")
    p.add_argument("--window", type=int, default=3)
    p.add_argument("--plot", help="write an orbit-growth figure to this file")
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("quotient", parents=[common], help="level quotient orders")
    p.add_argument("--plot", help="write a quotient-order figure to this file")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("reid", parents=[common], help="Reidemeister series per level")
    p.add_argument("--max-n", type=int, help="last level (default: --depth)")
    p.add_argument("--plot", help="write a series figure to this file")
    p.set_defaults(func=cmd_reid)

    p = sub.add_parser("wst", parents=[common], help="search below a vertex for a transitive G_{v0}")
    p.add_argument("--vertex", default="", help="dot-separated path, empty for the root")
    p.set_defaults(func=cmd_wst)

    p = sub.add_parser("witness", parents=[common], help="one separation certificate")
    p.add_argument("--kind", choices=["finite-order", "bounded-orbit", "parity"], default="finite-order")
    p.add_argument("-j", type=int, default=1, help="stabilizer level of the witness")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("chain", parents=[common], help="chain of certificates and a lower bound")
    p.add_argument("-N", type=int, default=3, help="number of certificates")
    p.add_argument("--strategy", choices=witness.STRATEGIES, default="auto")
    p.add_argument("--plot", help="write the series with certified bounds to this file")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("prime", parents=[common], help="prime-branching analysis at one level")
    p.add_argument("--level", type=int, default=2)
    p.set_defaults(func=cmd_prime)

    p = sub.add_parser("galois", parents=[common], help="transitive subgroups of S_p")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--allow-large", action="store_true", help="permit p = 11")
    p.set_defaults(func=cmd_galois)

    p = sub.add_parser("certify", parents=[common], help="re-verify a certificate or chain file")
    p.add_argument("file")
    p.set_defaults(func=cmd_certify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.depth < 1 or args.cap < 1:
        parser.error("--depth and --cap must be >= 1")
    try:
        return args.func(args)
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
    except CertificateError as exc:
        print(f"certificate rejected: invariant '{exc.invariant}' failed"
              + (f": {exc.detail}" if exc.detail else ""), file=sys.stderr)
    except (ReidTreeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR
