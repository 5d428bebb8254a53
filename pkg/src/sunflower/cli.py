"""Command line interface: detect | bounds | reduce | search | conjecture | cnf.

Exit codes: 0 success, 1 domain errors (a sunflower found where freeness was
required, violated preconditions, oversize instances), 2 usage errors.  All
machine-readable output is JSON with sorted keys and no incidental noise:
identical arguments (seed and thread count included) print identical bytes.
Wall-clock timings never enter the JSON.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import bounds as bounds_mod
from . import conjectures as conj_mod
from . import reduce as reduce_mod
from . import search as search_mod
from .detect import (
    find_ap_triple,
    find_sunflower_sets,
    find_sunflower_sets_fast,
    find_sunflower_vectors,
    is_sunflower_vectors,
)
from .errors import InputHasSunflower, SunflowerError, UsageError
from .model import (
    as_modulus_vector,
    dump_json,
    parse_set_family,
    parse_vector_family,
)

_HELP_WIDTH = 96


def _formatter(prog: str) -> argparse.HelpFormatter:
    return argparse.HelpFormatter(prog, width=_HELP_WIDTH, max_help_position=28)


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--in", dest="infile", metavar="FILE", help="read the family from FILE")
    p.add_argument(
        "--inline",
        metavar="TEXT",
        help="family given inline; ';' separates lines",
    )


def _read_text(args) -> str:
    if args.inline is not None and args.infile is not None:
        raise UsageError("--in and --inline are mutually exclusive")
    if args.inline is not None:
        return args.inline.replace(";", "\n") + "\n"
    if args.infile is not None:
        try:
            return Path(args.infile).read_text(encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot read {args.infile}: {exc}") from exc
    raise UsageError("provide --in FILE or --inline TEXT")


def _parse_moduli(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad moduli list {text!r}") from exc


def _parse_range(text: str) -> list[int]:
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        try:
            lo, hi = int(lo_text), int(hi_text)
        except ValueError as exc:
            raise UsageError(f"bad range {text!r}") from exc
        if hi < lo:
            raise UsageError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    try:
        return [int(text)]
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}") from exc


def _thread_count(args) -> int:
    value = getattr(args, "threads", None)
    if value is None:
        env = os.environ.get("SUNFLOWER_THREADS")
        if env:
            try:
                value = int(env)
            except ValueError as exc:
                raise UsageError(f"bad SUNFLOWER_THREADS value {env!r}") from exc
    if value is None:
        return 1
    if value < 1:
        raise UsageError("thread count must be at least 1")
    return value


def _emit(payload: dict | list) -> None:
    sys.stdout.write(dump_json(payload))


# ---------------------------------------------------------------- detect


def _cmd_detect_sets(args) -> int:
    family = parse_set_family(_read_text(args), allow_empty=args.allow_empty)
    if args.naive or args.t != 3:
        witness = find_sunflower_sets(family, args.t)
        detector = "naive"
    else:
        witness = find_sunflower_sets_fast(family)
        detector = "fast"
    _emit(
        {
            "found": witness is not None,
            "t": args.t,
            "detector": detector,
            "witness": None if witness is None else witness.to_json_dict(family),
        }
    )
    return 0


def _cmd_detect_vectors(args) -> int:
    family = parse_vector_family(_read_text(args), _parse_moduli(args.moduli))
    witness = find_sunflower_vectors(family)
    _emit(
        {
            "found": witness is not None,
            "witness": None if witness is None else witness.to_json_dict(),
        }
    )
    return 0


def _cmd_detect_ap(args) -> int:
    family = parse_vector_family(_read_text(args), _parse_moduli(args.moduli))
    triple = find_ap_triple(family)
    payload: dict = {"found": triple is not None, "witness": None}
    if triple is not None:
        i, j, l = triple
        vecs = [family.members[i], family.members[j], family.members[l]]
        payload["witness"] = {
            "members": [i, j, l],
            "vectors": [list(v) for v in vecs],
            "is_sunflower": is_sunflower_vectors(*vecs),
        }
    _emit(payload)
    return 0


# ---------------------------------------------------------------- bounds


def _bounds_table(reports) -> str:
    headers = ("name", "value", "exactness", "radius", "flags")
    rows = []
    for r in reports:
        d = r.to_json_dict()
        value = d["value"]
        rows.append(
            (
                d["name"],
                value if isinstance(value, str) else repr(value),
                d["exactness"],
                repr(d["radius"]) if "radius" in d else "-",
                ",".join(d.get("flags", ())) or "-",
            )
        )
    widths = [
        max(len(headers[c]), max((len(row[c]) for row in rows), default=0))
        for c in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[c]) for c, h in enumerate(headers)).rstrip(),
        "  ".join("-" * widths[c] for c in range(len(headers))),
    ]
    for row in rows:
        lines.append("  ".join(row[c].ljust(widths[c]) for c in range(len(row))).rstrip())
    return "\n".join(lines) + "\n"


def _cmd_bounds(args) -> int:
    if getattr(args, "bounds_cmd", None) == "j":
        result = bounds_mod.j_constant(args.q, args.tol)
        _emit(result.to_json_dict())
        return 0
    moduli = _parse_moduli(args.moduli) if args.moduli else None
    reports = bounds_mod.compare_bounds(moduli=moduli, k=args.k, M=args.big_m)
    if args.format == "table":
        sys.stdout.write(_bounds_table(reports))
    else:
        _emit([r.to_json_dict() for r in reports])
    return 0


# ---------------------------------------------------------------- reduce


def _cmd_reduce_pipeline(args) -> int:
    family = parse_set_family(_read_text(args), allow_empty=args.allow_empty)
    if args.seed is not None:
        trace = reduce_mod.pipeline(
            family,
            mode="seeded",
            seed=args.seed,
            rounds=args.rounds,
            threads=_thread_count(args),
        )
    else:
        trace = reduce_mod.pipeline(family, mode="derandomized")
    text = dump_json(trace.to_json_dict())
    if args.json_out:
        Path(args.json_out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------- search


def _search_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget-nodes", type=int, default=search_mod.DEFAULT_NODE_BUDGET)
    p.add_argument("--time-limit", type=float, default=None, metavar="SECONDS")
    p.add_argument("--point-ceiling", type=int, default=search_mod.DEFAULT_POINT_CEILING)
    p.add_argument("--threads", type=int, default=None)


def _cmd_search_vectors(args) -> int:
    result = search_mod.max_sunflower_free_vectors(
        _parse_moduli(args.moduli),
        max_nodes=args.budget_nodes,
        time_limit=args.time_limit,
        anchor=not args.no_anchor,
        point_ceiling=args.point_ceiling,
        threads=_thread_count(args),
    )
    _emit(result.to_json_dict())
    return 0


def _cmd_search_uniform(args) -> int:
    result = search_mod.max_sunflower_free_uniform(
        args.k,
        args.m,
        max_nodes=args.budget_nodes,
        time_limit=args.time_limit,
        point_ceiling=args.point_ceiling,
        threads=_thread_count(args),
    )
    _emit(result.to_json_dict())
    return 0


def _cnf_instance(args) -> search_mod.Instance:
    has_moduli = args.moduli is not None
    has_uniform = args.k is not None or args.m is not None
    if has_moduli and has_uniform:
        raise UsageError("give either --moduli or --k/--m, not both")
    if has_moduli:
        return search_mod.VectorInstance(as_modulus_vector(_parse_moduli(args.moduli)))
    if args.k is None or args.m is None:
        raise UsageError("uniform instances need both --k and --m")
    return search_mod.UniformInstance(args.k, args.m)


def _cmd_cnf_export(args) -> int:
    cnf = search_mod.export_cnf(_cnf_instance(args), args.size)
    text = cnf.to_dimacs()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="")
        _emit(
            {
                "written": args.out,
                "num_vars": cnf.num_vars,
                "num_clauses": len(cnf.clauses),
                "size": args.size,
            }
        )
    else:
        sys.stdout.write(text)
    return 0


def _cmd_cnf_check(args) -> int:
    cnf = search_mod.export_cnf(_cnf_instance(args), args.size)
    _emit(
        {
            "satisfiable": search_mod.cnf_satisfiable(cnf),
            "num_vars": cnf.num_vars,
            "num_clauses": len(cnf.clauses),
            "size": args.size,
        }
    )
    return 0


# ---------------------------------------------------------------- conjecture


def _cmd_conjecture_scan(args) -> int:
    reports = conj_mod.conjecture_scan(
        _parse_range(args.k),
        _parse_range(args.m),
        max_nodes=args.budget_nodes,
        time_limit=args.time_limit,
        threads=_thread_count(args),
    )
    if args.csv:
        Path(args.csv).write_text(conj_mod.scan_to_csv(reports), encoding="utf-8", newline="")
    _emit([r.to_json_dict() for r in reports])
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    root = argparse.ArgumentParser(
        prog="sunflower",
        description="Sunflower-free set systems: detection, bounds, reductions, exact search.",
        formatter_class=_formatter,
    )
    subs = root.add_subparsers(dest="command", required=True, metavar="COMMAND")

    detect = subs.add_parser(
        "detect", help="find sunflowers and progression triples", formatter_class=_formatter
    )
    dsubs = detect.add_subparsers(dest="detect_cmd", required=True, metavar="WHAT")

    d_sets = dsubs.add_parser("sets", help="t-petal sunflowers in a set family",
                              formatter_class=_formatter)
    _add_input_flags(d_sets)
    d_sets.add_argument("--t", type=int, default=3, help="number of petals (default 3)")
    d_sets.add_argument("--naive", action="store_true", help="force the definitional scan")
    d_sets.add_argument("--allow-empty", action="store_true",
                        help="accept blank lines as empty members")
    d_sets.set_defaults(handler=_cmd_detect_sets)

    d_vec = dsubs.add_parser("vectors", help="3-sunflowers in a vector family",
                             formatter_class=_formatter)
    _add_input_flags(d_vec)
    d_vec.add_argument("--moduli", required=True, help="comma-separated moduli, e.g. 3,3")
    d_vec.set_defaults(handler=_cmd_detect_vectors)

    d_ap = dsubs.add_parser("ap", help="coordinatewise arithmetic-progression triples",
                            formatter_class=_formatter)
    _add_input_flags(d_ap)
    d_ap.add_argument("--moduli", required=True, help="comma-separated moduli")
    d_ap.set_defaults(handler=_cmd_detect_ap)

    bounds_p = subs.add_parser("bounds", help="evaluate and compare size bounds",
                               formatter_class=_formatter)
    bounds_p.add_argument("--moduli", help="vector-family context, e.g. 3,3,4")
    bounds_p.add_argument("--k", type=int, help="uniformity for the (k, M) context")
    bounds_p.add_argument("--M", dest="big_m", type=int, help="ground size for the (k, M) context")
    bounds_p.add_argument("--format", choices=("json", "table"), default="json")
    bounds_p.set_defaults(handler=_cmd_bounds)
    bsubs = bounds_p.add_subparsers(dest="bounds_cmd", metavar="[j]")
    b_j = bsubs.add_parser("j", help="minimize the J objective", formatter_class=_formatter)
    b_j.add_argument("--q", type=int, required=True)
    b_j.add_argument("--tol", type=float, default=1e-12)
    b_j.set_defaults(handler=_cmd_bounds)

    reduce_p = subs.add_parser("reduce", help="structural reductions",
                               formatter_class=_formatter)
    rsubs = reduce_p.add_subparsers(dest="reduce_cmd", required=True, metavar="WHAT")
    r_pipe = rsubs.add_parser("pipeline", help="partition, strip, group, and rank a family",
                              formatter_class=_formatter)
    _add_input_flags(r_pipe)
    r_pipe.add_argument("--allow-empty", action="store_true",
                        help="accept blank lines as empty members")
    mode = r_pipe.add_mutually_exclusive_group()
    mode.add_argument("--seed", type=int, default=None, help="seeded random partition")
    mode.add_argument("--derandomize", action="store_true",
                      help="conditional-expectation partition (default)")
    r_pipe.add_argument("--rounds", type=int, default=1, help="seeded rounds to try")
    r_pipe.add_argument("--threads", type=int, default=None)
    r_pipe.add_argument("--json", dest="json_out", metavar="FILE",
                        help="also write the trace to FILE")
    r_pipe.set_defaults(handler=_cmd_reduce_pipeline)

    search_p = subs.add_parser("search", help="exact maximum sunflower-free families",
                               formatter_class=_formatter)
    ssubs = search_p.add_subparsers(dest="search_cmd", required=True, metavar="WHAT")

    s_vec = ssubs.add_parser("vectors", help="maximum family over given moduli",
                             formatter_class=_formatter)
    s_vec.add_argument("--moduli", required=True)
    _search_common(s_vec)
    s_vec.add_argument("--no-anchor", action="store_true",
                       help="disable the translation symmetry anchor")
    s_vec.set_defaults(handler=_cmd_search_vectors)

    s_uni = ssubs.add_parser("uniform", help="maximum family of k-subsets of [m]",
                             formatter_class=_formatter)
    s_uni.add_argument("--k", type=int, required=True)
    s_uni.add_argument("--m", type=int, required=True)
    _search_common(s_uni)
    s_uni.set_defaults(handler=_cmd_search_uniform)

    s_cnf = ssubs.add_parser("cnf", help="export a DIMACS encoding",
                             formatter_class=_formatter)
    s_cnf.add_argument("--moduli")
    s_cnf.add_argument("--k", type=int)
    s_cnf.add_argument("--m", type=int)
    s_cnf.add_argument("--size", type=int, required=True, help="target family size")
    s_cnf.add_argument("--out", metavar="FILE", help="write DIMACS to FILE")
    s_cnf.set_defaults(handler=_cmd_cnf_export)

    cnf_p = subs.add_parser("cnf", help="CNF export and the naive checker",
                            formatter_class=_formatter)
    csubs = cnf_p.add_subparsers(dest="cnf_cmd", required=True, metavar="WHAT")
    c_exp = csubs.add_parser("export", help="export a DIMACS encoding",
                             formatter_class=_formatter)
    c_exp.add_argument("--moduli")
    c_exp.add_argument("--k", type=int)
    c_exp.add_argument("--m", type=int)
    c_exp.add_argument("--size", type=int, required=True)
    c_exp.add_argument("--out", metavar="FILE")
    c_exp.set_defaults(handler=_cmd_cnf_export)
    c_chk = csubs.add_parser("check", help="decide satisfiability with the naive checker",
                             formatter_class=_formatter)
    c_chk.add_argument("--moduli")
    c_chk.add_argument("--k", type=int)
    c_chk.add_argument("--m", type=int)
    c_chk.add_argument("--size", type=int, required=True)
    c_chk.set_defaults(handler=_cmd_cnf_check)

    conj_p = subs.add_parser("conjecture", help="probe the union-size and cover conjectures",
                             formatter_class=_formatter)
    cjsubs = conj_p.add_subparsers(dest="conjecture_cmd", required=True, metavar="WHAT")
    c_scan = cjsubs.add_parser("scan", help="tabulate extremal unions over a (k, m) grid",
                               formatter_class=_formatter)
    c_scan.add_argument("--k", required=True, help="k range, e.g. 1..3 or 2")
    c_scan.add_argument("--m", required=True, help="m range, e.g. 4..9")
    c_scan.add_argument("--csv", metavar="FILE", help="also write CSV to FILE")
    c_scan.add_argument("--budget-nodes", type=int, default=search_mod.DEFAULT_NODE_BUDGET)
    c_scan.add_argument("--time-limit", type=float, default=None)
    c_scan.add_argument("--threads", type=int, default=None)
    c_scan.set_defaults(handler=_cmd_conjecture_scan)

    return root


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code is not None else 0
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputHasSunflower as exc:
        _emit(
            {
                "error": "InputHasSunflower",
                "message": str(exc),
                "witness": exc.witness.to_json_dict(exc.family),
            }
        )
        return 1
    except SunflowerError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)})
        return 1


def entry() -> None:
    raise SystemExit(main())
