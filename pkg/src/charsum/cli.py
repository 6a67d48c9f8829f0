"""``charsum`` command-line interface."""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .characters import build_group, enumerate_characters
from .config import FIELD_TYPES, ConfigError
from .report import Snapshot, compare, report_json, rows_csv
from .spectrum import spectrum_cesaro, spectrum_maximal, structure_check
from .sums import level_counts, max_rows, maximal_sums, sums_all_powers, sums_rows
from .suites import SUITES, make_config, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _character(args):
    G = build_group(args.modulus)
    if not 0 <= args.index < G.size:
        raise UsageError(f"index must lie in [0, {G.size - 1}] for q = {args.modulus}")
    return G.character(args.index)


# -- chars / sums / max / spectrum ----------------------------------------------

def cmd_chars(args) -> int:
    if args.action == "describe":
        if args.index is None:
            raise UsageError("describe needs --index")
        _emit(json.dumps(_character(args).descriptor()) + "\n", args.out)
        return EXIT_OK
    chars = enumerate_characters(args.modulus, order=args.order, primitive_only=args.primitive)
    rows = [
        {"q": c.modulus, "index": c.index, "order": c.order, "conductor": c.conductor,
         "primitive": c.is_primitive, "exponent_vector": " ".join(map(str, c.exponents))}
        for c in chars
    ]
    text = rows_csv(rows) if rows else "q,index,order,conductor,primitive,exponent_vector\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_sums(args) -> int:
    chi = _character(args)
    x = args.x if args.x else chi.modulus
    rows = sums_rows(chi, sums_all_powers(level_counts(chi, x)))
    if args.ell is not None:
        rows = [r for r in rows if r["ell"] == args.ell % chi.order]
    _emit(rows_csv(rows), args.out)
    return EXIT_OK


def cmd_max(args) -> int:
    chi = _character(args)
    rows = max_rows(chi, maximal_sums(chi))
    if args.ell is not None:
        rows = [r for r in rows if r["ell"] == args.ell % chi.order]
    _emit(rows_csv(rows), args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    chi = _character(args)
    x = args.x if args.x else chi.modulus
    if args.kind == "cesaro":
        spec = spectrum_cesaro(chi, x, args.epsilon)
    else:
        spec = spectrum_maximal(chi, args.epsilon)
    row = structure_check(chi, args.epsilon, args.kind, x=x, conductor_bound=args.conductor_bound).as_row()
    keep = ("q", "index", "kind", "epsilon", "members_count", "m", "g", "H_size", "bound_lhs", "bound_rhs", "ratio")
    out = {k: row[k] for k in keep}
    out["members"] = " ".join(map(str, spec.elements))
    _emit(rows_csv([out]), args.out)
    return EXIT_OK


# -- verify / snapshot ---------------------------------------------------------

def _overrides(args) -> dict:
    return {name: getattr(args, "cfg_" + name) for name in FIELD_TYPES if hasattr(args, "cfg_" + name)}


def _config(args):
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    return make_config(args.suite, args.config, **_overrides(args))


def list_suites() -> str:
    width = max(map(len, SUITES))
    lines = []
    for s in SUITES.values():
        kind = "hard" if s.hard else "report"
        lines.append(f"{s.name:<{width}}  [{kind:<6}]  {s.statement}")
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    if args.list_suites:
        sys.stdout.write(list_suites())
        return EXIT_OK
    if not args.suite:
        raise UsageError("verify needs a suite name (see --list-suites)")
    cfg = _config(args)
    report = run_suite(cfg)
    json_out = args.json or cfg.json_out or "-"
    _emit(report_json(report), json_out)
    if args.csv or cfg.csv_out:
        _emit(rows_csv(report["rows"]), args.csv or cfg.csv_out)
    s = report["summary"]
    print(f"{cfg.suite}: {s['n']} rows, {s['failures']} failures, max ratio {s['max_ratio']}", file=sys.stderr)
    return EXIT_FAIL if s["failures"] else EXIT_OK


def cmd_snapshot(args) -> int:
    cfg = _config(args)
    if args.action == "compare" and not os.path.exists(args.snapshot):
        print(f"snapshot not found: {args.snapshot}", file=sys.stderr)
        return EXIT_USAGE
    report = run_suite(cfg)
    current = Snapshot.from_report(report, cfg.hash())
    if args.action == "update":
        with open(args.snapshot, "w", encoding="utf-8") as fh:
            fh.write(current.to_json())
        print(f"wrote {args.snapshot} ({report['summary']['n']} rows)", file=sys.stderr)
        return EXIT_FAIL if report["summary"]["failures"] else EXIT_OK
    result = compare(Snapshot.load(args.snapshot), current, cfg.tolerance)
    print(str(result), file=sys.stderr)
    return EXIT_OK if result.ok else EXIT_FAIL


# -- parser ---------------------------------------------------------------------

def _add_config_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("experiment config (overrides --config)")
    for name, kind in FIELD_TYPES.items():
        if name == "suite":
            continue
        flag = "--" + name.replace("_", "-")
        dest = "cfg_" + name
        if kind == "bool":
            g.add_argument(flag, dest=dest, action=argparse.BooleanOptionalAction, default=None)
        elif kind == "list[int]":
            g.add_argument(flag, dest=dest, type=int, nargs="+", default=None, metavar="N")
        elif kind == "int":
            g.add_argument(flag, dest=dest, type=lambda v: int(float(v)), default=None, metavar="N")
        elif kind == "float":
            g.add_argument(flag, dest=dest, type=float, default=None, metavar="F")
        else:
            g.add_argument(flag, dest=dest, default=None)
    p.add_argument("--config", help="flat key = value config file")


def _add_char_flags(p: argparse.ArgumentParser, index_required: bool = True) -> None:
    p.add_argument("--modulus", "-q", type=int, required=True)
    p.add_argument("--index", "-i", type=int, required=index_required)
    p.add_argument("--out", "-o", help="output path (default stdout)")


def _modulus(v: str) -> int:
    q = int(v)
    if q < 3:
        raise argparse.ArgumentTypeError("modulus must be >= 3")
    return q


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charsum", description="Sums of high-order Dirichlet characters.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chars", help="list or describe characters mod q")
    p.add_argument("action", choices=["list", "describe"])
    p.add_argument("--modulus", "-q", type=_modulus, required=True)
    p.add_argument("--index", "-i", type=int)
    p.add_argument("--order", "-d", type=int)
    p.add_argument("--primitive", action="store_true")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_chars)

    p = sub.add_parser("sums", help="S_{chi^l}(x) for every power l")
    _add_char_flags(p)
    p.add_argument("--x", type=int, default=0, help="cutoff (default q)")
    p.add_argument("--ell", type=int)
    p.set_defaults(func=cmd_sums)

    p = sub.add_parser("max", help="maximal sums M(chi^l) and their maximizers")
    _add_char_flags(p)
    p.add_argument("--ell", type=int)
    p.set_defaults(func=cmd_max)

    p = sub.add_parser("spectrum", help="large-spectrum set and its stabilization")
    _add_char_flags(p)
    p.add_argument("--epsilon", type=float, default=0.5)
    p.add_argument("--kind", choices=["cesaro", "maximal"], default="cesaro")
    p.add_argument("--x", type=int, default=0, help="cutoff for the cesaro kind (default q)")
    p.add_argument("--conductor-bound", type=int, default=40)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run a verification suite and emit its report")
    p.add_argument("suite", nargs="?", choices=list(SUITES))
    p.add_argument("--list-suites", action="store_true")
    p.add_argument("--json", help="report JSON path (default stdout)")
    p.add_argument("--csv", help="row CSV path")
    _add_config_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("snapshot", help="record or check a regression snapshot")
    p.add_argument("action", choices=["compare", "update"])
    p.add_argument("suite", choices=list(SUITES))
    p.add_argument("--snapshot", required=True)
    _add_config_flags(p)
    p.set_defaults(func=cmd_snapshot)
    return ap


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ConfigError) as exc:
        parser.print_usage(sys.stderr)
        print(f"charsum: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AssertionError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"charsum: internal check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
