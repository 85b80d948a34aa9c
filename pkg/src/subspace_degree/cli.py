"""Command line front end.

Exit codes: 0 success, 2 invalid input, 3 rank profile not realizable,
4 term cap exceeded, 5 Monte Carlo validation outside the 4 sigma gate.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from itertools import combinations_with_replacement

from .cache import ENV_VAR, ResultCache, resolve_path
from .core import FormatProfile, RankNotRealizable
from .degree import DEFAULT_MAX_TERMS, METHODS, DegreeResult, degree_subspace, segre_degree
from .flattening import format_flattening, generic_flattening
from .montecarlo import DEFAULT_SAMPLES, estimate_f
from .polyring import ResourceExceeded

EXIT_OK, EXIT_INPUT, EXIT_REALIZABLE, EXIT_RESOURCE, EXIT_STAT = 0, 2, 3, 4, 5
GATE_SIGMAS = 4.0

PUBLISHED_TABLE = [
    ((1, 2, 2), (3, 3, 3), 108), ((1, 2, 2), (3, 3, 4), 330), ((1, 2, 2), (3, 4, 4), 1560),
    ((2, 2, 2), (3, 3, 3), 783), ((2, 2, 2), (3, 3, 4), 5175), ((2, 2, 2), (3, 4, 4), 44760),
    ((2, 2, 3), (3, 3, 3), 306), ((2, 2, 3), (3, 3, 4), 2952), ((2, 2, 3), (3, 4, 4), 19320),
    ((1, 1, 2, 2), (2, 2, 3, 3), 216), ((1, 1, 2, 2), (2, 3, 3, 3), 1080), ((1, 1, 2, 2), (3, 3, 3, 3), 5940),
    ((1, 2, 2, 2), (2, 2, 3, 3), 684), ((1, 2, 2, 2), (2, 3, 3, 3), 10962), ((1, 2, 2, 2), (3, 3, 3, 3), 82215),
    ((1, 2, 2, 3), (2, 2, 3, 3), 210), ((1, 2, 2, 3), (2, 3, 3, 3), 4896), ((1, 2, 2, 3), (3, 3, 3, 3), 41616),
]

CSV_FIELDS = ["k", "n", "N", "K", "D", "dimension", "grass_degrees", "f", "degree", "expected", "status"]


class InputError(ValueError):
    pass


def parse_csv_ints(text: str, name: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise InputError(f"{name} must be a comma separated list of integers, got {text!r}") from None
    if not vals:
        raise InputError(f"{name} is empty")
    return vals


def parse_profile(k: str, n: str) -> FormatProfile:
    try:
        return FormatProfile(parse_csv_ints(k, "k"), parse_csv_ints(n, "n"))
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from None


def parse_cell(text: str) -> FormatProfile:
    """Parse ``k=1,2,2;n=3,3,3``."""
    parts = dict(p.split("=", 1) for p in text.replace(" ", "").split(";") if "=" in p)
    if set(parts) != {"k", "n"}:
        raise InputError(f"cell must look like 'k=1,2,2;n=3,3,3', got {text!r}")
    return parse_profile(parts["k"], parts["n"])


# -- rendering ----------------------------------------------------------------

def _csv_row(rec: dict) -> dict:
    row = {key: rec.get(key, "") for key in CSV_FIELDS}
    for key in ("k", "n", "grass_degrees"):
        if isinstance(row[key], list):
            row[key] = " ".join(map(str, row[key]))
    return row


def render_degree(res: DegreeResult, fmt: str, timings: bool = False) -> str:
    rec = res.to_record()
    if not timings:
        rec.pop("elapsed")
    if fmt == "json":
        return json.dumps(rec, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        w.writerow(_csv_row(rec))
        return buf.getvalue()
    p = res.profile
    lines = [
        f"k = ({','.join(map(str, p.k))})   n = ({','.join(map(str, p.n))})",
        f"N = {p.N}   K = {p.K}   D = {p.D}   dimension = {res.dimension}",
        f"Grassmannian degrees = {', '.join(rec['grass_degrees'])}",
        f"g(k,n) = {res.g_value}",
        f"f(k,n) = {rec['f']}",
        f"degree = {rec['degree']}",
    ]
    if not res.realizable:
        lines.append("note: formal value only, rank profile is not realizable so no degree is claimed")
    if timings:
        terms = "n/a" if res.term_count_of_p is None else str(res.term_count_of_p)
        lines.append(f"terms of p = {terms}   method = {res.method}   elapsed = {res.elapsed:.3f}s")
    return "\n".join(lines) + "\n"


# -- commands -----------------------------------------------------------------

def compute(p: FormatProfile, args) -> DegreeResult:
    cache = None if args.no_cache else ResultCache(resolve_path(args.cache))
    if cache is not None:
        hit = cache.get(p)
        if hit is not None and (hit.realizable or args.force):
            return hit
    res = degree_subspace(p, force=args.force, method=args.method, max_terms=args.max_terms)
    if cache is not None:
        cache.put(res)
    return res


def cmd_degree(args) -> int:
    p = parse_profile(args.k, args.n)
    res = compute(p, args)
    sys.stdout.write(render_degree(res, args.format, args.timings))
    return EXIT_OK


def _segre_cells(max_dim: int) -> list[tuple[FormatProfile, int]]:
    cells = []
    for d in range(2, max_dim + 1):
        for parts in combinations_with_replacement(range(2, max_dim + 2), d):
            if sum(x - 1 for x in parts) <= max_dim:
                n = tuple(reversed(parts))
                cells.append((FormatProfile((1,) * d, n), segre_degree(n)))
    return cells


def table_cells(args) -> list[tuple[FormatProfile, int | None]]:
    cells: list[tuple[FormatProfile, int | None]] = []
    if args.preset == "paper-ex2":
        cells += [(FormatProfile(k, n), e) for k, n, e in PUBLISHED_TABLE]
    elif args.preset == "segre":
        cells += _segre_cells(args.max_dim)
    for c in args.cell or []:
        cells.append((parse_cell(c), None))
    if not cells:
        raise InputError("empty table: give --preset or at least one --cell")
    return cells


def cmd_table(args) -> int:
    cells = table_cells(args)
    records = []
    for p, expected in cells:
        try:
            res = compute(p, args)
            rec = res.to_record()
            rec.pop("elapsed")
            if expected is None:
                rec["status"] = "ok"
            else:
                rec["status"] = "match" if rec["degree"] == str(expected) else "MISMATCH"
        except (RankNotRealizable, ResourceExceeded, ArithmeticError) as exc:
            rec = {"k": list(p.k), "n": list(p.n), "N": p.N, "K": p.K, "D": p.D,
                   "status": f"ERROR: {type(exc).__name__}", "degree": ""}
        rec["expected"] = "" if expected is None else str(expected)
        records.append(rec)

    out = sys.stdout
    if args.format == "json":
        for rec in records:
            out.write(json.dumps(rec, sort_keys=True) + "\n")
    elif args.format == "csv":
        w = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for rec in records:
            w.writerow(_csv_row(rec))
    else:
        header = f"{'k':<14}{'n':<14}{'dim':>5}{'degree':>14}{'expected':>12}  status"
        out.write(header + "\n" + "-" * len(header) + "\n")
        for rec in records:
            k = "(" + ",".join(map(str, rec["k"])) + ")"
            n = "(" + ",".join(map(str, rec["n"])) + ")"
            dim = rec.get("dimension", "")
            out.write(f"{k:<14}{n:<14}{dim!s:>5}{rec['degree']:>14}{rec['expected']:>12}  {rec['status']}\n")
    return EXIT_OK


def cmd_validate(args) -> int:
    p = parse_profile(args.k, args.n)
    res = compute(p, args)
    if not isinstance(res.degree, int):
        raise InputError("validation needs an integral exact degree")
    est = estimate_f(p, samples=args.samples, seed=args.seed, lanes=args.threads,
                     exact_degree=res.degree)
    ok = est.passes(GATE_SIGMAS)
    if args.format == "json":
        rec = est.to_record()
        rec["pass"] = ok
        sys.stdout.write(json.dumps(rec, sort_keys=True) + "\n")
    else:
        sys.stdout.write(
            f"k = ({','.join(map(str, p.k))})   n = ({','.join(map(str, p.n))})\n"
            f"exact degree     = {res.degree}\n"
            f"f(k,n) exact     = {res.f_value.numerator}/{res.f_value.denominator}\n"
            f"MC samples, seed = {est.samples}, {est.seed}\n"
            f"MC f(k,n)        = {est.derived_f!r}\n"
            f"MC degree        = {est.derived_degree!r} +/- {est.degree_std_error!r}\n"
            f"z-score          = {est.z_score!r}\n"
            f"result           = {'PASS' if ok else 'FAIL'} (gate {GATE_SIGMAS:g} sigma)\n"
        )
    return EXIT_OK if ok else EXIT_STAT


def cmd_flatten(args) -> int:
    k = parse_csv_ints(args.k, "k")
    p = FormatProfile(k, k)
    for mode in range(1, p.d + 1):
        sys.stdout.write(f"mode {mode}:\n")
        sys.stdout.write(format_flattening(generic_flattening(args.block, p, mode), p, args.block) + "\n")
    return EXIT_OK


# -- wiring -------------------------------------------------------------------

def _common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--force", action="store_true",
                    help="evaluate the formula even if k is not realizable (formal value)")
    sp.add_argument("--method", choices=METHODS, default="expand",
                    help="expand p fully, or pair factors to visit only diagonal terms")
    sp.add_argument("--max-terms", type=int, default=DEFAULT_MAX_TERMS,
                    help="abort once a polynomial exceeds this many terms")
    sp.add_argument("--cache", default=None, help=f"cache file (overridden by ${ENV_VAR})")
    sp.add_argument("--no-cache", action="store_true")
    sp.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                    help="worker lanes for Monte Carlo sampling")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="subspace-degree",
                                 description="Degrees of subspace varieties of tensors")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("degree", help="degree of a single subspace variety")
    sp.add_argument("-k", required=True, help="rank bounds, e.g. 1,2,2")
    sp.add_argument("-n", required=True, help="dimensions, e.g. 3,3,3")
    sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sp.add_argument("--timings", action="store_true", help="also print term count and elapsed time")
    _common(sp)
    sp.set_defaults(func=cmd_degree)

    sp = sub.add_parser("table", help="table of degrees for several formats")
    sp.add_argument("--preset", choices=("paper-ex2", "segre"))
    sp.add_argument("--cell", action="append", help="extra cell 'k=1,2,2;n=3,3,3' (repeatable)")
    sp.add_argument("--max-dim", type=int, default=6, help="largest D for the segre preset")
    sp.add_argument("--format", choices=("text", "json", "csv"), default="text")
    _common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("validate", help="compare the exact degree with a Monte Carlo estimate")
    sp.add_argument("-k", required=True)
    sp.add_argument("-n", required=True)
    sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    _common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("flatten", help="print the flattenings of a generic tensor of shape k")
    sp.add_argument("-k", required=True)
    sp.add_argument("--block", choices=("a", "b"), default="a")
    sp.set_defaults(func=cmd_flatten)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RankNotRealizable as exc:
        print(f"error: {exc} (use --force for the formal value)", file=sys.stderr)
        return EXIT_REALIZABLE
    except ResourceExceeded as exc:
        print(f"error: {exc}; raise --max-terms or try --method paired", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
