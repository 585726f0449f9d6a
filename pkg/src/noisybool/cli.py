"""``noisybool`` command-line interface.

Exit status: 0 success, 1 internal error, 2 invalid input, 3 a verification
found a violation (``scan``, ``sequence --check-bounds``, ``identities``).
Errors go to stderr as ``error:<code>:<message>``.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import boolfn, curve, explorer, identities, sequences, spectral
from .boolfn import BooleanFunction
from .errors import NoisyBoolError

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2, 3
DEFAULT_GRID = "0:0.01:1"
FIG1_GRID = "0:0.005:1"
FIG1_FUNCTIONS = {"f1": (0, 1, 2, 3), "f2": (0, 1, 2, 4)}
LIMIT = 64


class UsageError(NoisyBoolError):
    code = "usage"


class _IoFailure(NoisyBoolError):
    code = "io_failure"


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- helpers


def _function(args) -> BooleanFunction:
    given = [k for k in ("zeros", "mask", "lex", "dictator", "function") if getattr(args, k, None) is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --zeros, --mask, --lex, --dictator, --function")
    if args.function is not None:
        return boolfn.parse_function(args.function)
    if args.n is None:
        raise UsageError("--n is required with --zeros/--mask/--lex/--dictator")
    if args.zeros is not None:
        return BooleanFunction(args.n, boolfn.parse_int_list(args.zeros))
    if args.mask is not None:
        try:
            mask = int(args.mask, 0)
        except ValueError:
            raise UsageError(f"invalid mask {args.mask!r}") from None
        return BooleanFunction.from_mask(args.n, mask)
    if args.lex is not None:
        return boolfn.lex(args.n, args.lex)
    return boolfn.dictator(args.n, args.dictator)


def _has_function(args) -> bool:
    return any(getattr(args, k, None) is not None for k in ("zeros", "mask", "lex", "dictator", "function"))


def _emit(args, text: str) -> None:
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise _IoFailure(str(exc)) from exc


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _need_n(args) -> int:
    if args.n is None:
        raise UsageError("--n is required")
    return args.n


# ---------------------------------------------------------------- commands


def cmd_curve(args) -> int:
    f = _function(args)
    table = curve.sample_curve(f, curve.parse_grid(args.alpha_grid), args.unit, not args.no_baselines)
    if args.format == "json":
        _emit(args, _json({
            "function": boolfn.format_function(f),
            "n": f.n,
            "zero_set": list(f.zeros),
            "unit": table.unit.value,
            "T": table.T,
            "alpha": table.grid.tolist(),
            "F": table.F.tolist(),
            "erkip": None if table.erkip is None else table.erkip.tolist(),
            "osw": None if table.osw is None else [None if np.isnan(v) else v for v in table.osw],
        }))
    else:
        _emit(args, table.to_csv())
    return EXIT_OK


def cmd_spectrum(args) -> int:
    f = _function(args)
    _emit(args, _json({
        "n": f.n,
        "M": f.M,
        "zero_set": list(f.zeros),
        "column_one_counts": list(boolfn.column_one_counts(f)),
        "gammas": list(boolfn.gammas(f)),
        "ratio_spectrum": list(boolfn.ratio_spectrum(f).r),
        "weight_spectrum": list(boolfn.weight_spectrum(f).c),
    }))
    return EXIT_OK


def cmd_d2(args) -> int:
    f = _function(args)
    out = spectral.d2_at_half(f).to_dict()
    out["zero_set"] = list(f.zeros)
    if args.check_fd:
        out["finite_difference"] = curve.fd_derivative(f, 0.5, 2, args.h)
    _emit(args, _json(out))
    return EXIT_OK


def cmd_search(args) -> int:
    n = _need_n(args)
    sizes = [args.M] if args.M is not None else list(range(1, (1 << n)))
    reports = []
    for M in sizes:
        rep = explorer.max_d2(n, M, args.dedup, args.workers, args.list_limit).to_dict()
        if args.verify_lex:
            rep["lex_max_spectrum"] = explorer.verify_lex_max_spectrum(n, M, args.workers).to_dict()
        reports.append(rep)
    _emit(args, _json(reports[0] if args.M is not None else reports))
    return EXIT_OK


def cmd_scan(args) -> int:
    n = _need_n(args)
    grid = curve.parse_grid(args.alpha_grid)
    scan = explorer.conjecture_scan(n, args.M, grid, args.tolerance, args.unit, args.workers)
    _emit(args, _json(scan.to_dict()))
    return EXIT_OK if scan.passed else EXIT_VIOLATION


def cmd_shapes(args) -> int:
    grid = curve.parse_grid(args.alpha_grid)
    tol = args.tolerance if args.tolerance is not None else 1e-10
    if _has_function(args):
        f = _function(args)
        shape = explorer.classify_shape(curve.sample_curve(f, grid, include_baselines=False), tol)
        _emit(args, _json({"zero_set": list(f.zeros), "n": f.n, **shape.to_dict()}))
        return EXIT_OK
    census = explorer.shape_census(_need_n(args), args.M, grid, tol, args.dedup, args.workers)
    _emit(args, _json(census.to_dict()))
    return EXIT_OK


def cmd_sequence(args) -> int:
    if args.check_bounds:
        sweep = sequences.check_bounds_sweep(args.max_m)
        out = sweep.to_dict()
        if args.max_m <= 10**6:
            table = sequences.a_table(args.max_m)
            out["closed_form_mismatches"] = [m for m in range(args.max_m + 1) if sequences.a_closed(m + 1) != table[m]][:LIMIT]
        ok = sweep.passed and not out.get("closed_form_mismatches")
        _emit(args, _json(out))
        return EXIT_OK if ok else EXIT_VIOLATION
    if args.m is None:
        raise UsageError("give --m or --check-bounds")
    rep = sequences.check_bounds(args.m)
    _emit(args, _json({
        "m": rep.m,
        "a": rep.a,
        "a_closed": sequences.a_closed(rep.m + 1),
        "lower": rep.lower,
        "upper": rep.upper,
        "tight_upper": rep.tight_upper,
        "lower_equality": rep.lower_equality,
        "passed": rep.passed,
    }))
    return EXIT_OK


def cmd_identities(args) -> int:
    summary = {}
    failures = []
    for name, fn in (("lemma5", identities.lemma5_sweep), ("lemma6", identities.lemma6_sweep), ("lemma7", identities.lemma7_sweep)):
        checks = fn()
        bad = [c for c in checks if not c.passed]
        summary[name] = {"checks": len(checks), "failures": len(bad)}
        failures += bad
    rng = np.random.default_rng(args.seed)
    S = 1 << args.n
    l4 = []
    for _ in range(args.samples):
        f = BooleanFunction(args.n, np.flatnonzero(rng.integers(0, 2, size=S)))
        l4 += identities.lemma4_check(f, float(rng.uniform(0.01, 0.99)), 2)
    bad = [c for c in l4 if not c.passed]
    summary["lemma4"] = {
        "checks": len(l4),
        "failures": len(bad),
        "max_abs_error": {
            f"order{o}": max(abs(c.lhs - c.rhs) for c in l4 if c.lemma.endswith(str(o))) for o in range(3)
        },
    }
    failures += bad
    summary["failures"] = [c.to_dict() for c in failures[:LIMIT]]
    summary["passed"] = not failures
    _emit(args, _json(summary))
    return EXIT_OK if not failures else EXIT_VIOLATION


def emit_fig1(out) -> dict[str, curve.CurveTable]:
    """Write both example curves and the common ``T`` line as one CSV.

    ``out`` is a path or a text stream. Returns the two curve tables.
    """
    grid = curve.parse_grid(FIG1_GRID)
    tables = {k: curve.sample_curve(BooleanFunction(4, z), grid) for k, z in FIG1_FUNCTIONS.items()}
    buf = io.StringIO()
    first = True
    for name, table in tables.items():
        table.write_csv(buf, series=name, header=first)
        first = False
    t_line = curve.CurveTable(4, (), table.unit, grid, np.full(grid.size, tables["f1"].T), tables["f1"].T)
    t_line.write_csv(buf, series="T", header=False)
    text = buf.getvalue()
    if isinstance(out, (str, Path)):
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise _IoFailure(str(exc)) from exc
    else:
        out.write(text)
    return tables


def cmd_fig1(args) -> int:
    tables = emit_fig1(sys.stdout if args.out in (None, "-") else args.out)
    if args.out not in (None, "-"):
        shapes = {k: explorer.classify_shape(t).kind for k, t in tables.items()}
        print(_json({"out": args.out, "T": tables["f1"].T, "shapes": shapes}), end="", file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_function_flags(p) -> None:
    g = p.add_argument_group("function (exactly one)")
    g.add_argument("--zeros", help="comma-separated zero-set, e.g. 0,1,2,4")
    g.add_argument("--mask", help="zero-set bitmask, e.g. 0x0017")
    g.add_argument("--lex", type=int, metavar="M", help="lex function with M zeros")
    g.add_argument("--dictator", type=int, metavar="I", help="dictator on coordinate I (1 = MSB)")
    g.add_argument("--function", help="textual form 'n=4; zeros=0,1,2,4'")


def _common() -> argparse.ArgumentParser:
    # a fresh parent per subcommand: argparse shares parent actions, so
    # per-command set_defaults would otherwise leak into every command
    common = _Parser(add_help=False)
    common.add_argument("--n", type=int)
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--unit", choices=("bits", "nats"), default="bits")
    common.add_argument("--alpha-grid", default=DEFAULT_GRID, metavar="START:STEP:END")
    common.add_argument("--workers", type=int, default=explorer.default_workers())
    common.add_argument("--tolerance", type=float, default=None)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="noisybool", description="Boolean functions of a very noisy binary symmetric channel.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("curve", parents=[_common()], help="sample F_f(alpha) as CSV/JSON")
    _add_function_flags(p)
    p.add_argument("--no-baselines", action="store_true")
    p.set_defaults(run=cmd_curve)

    p = sub.add_parser("spectrum", parents=[_common()], help="column counts and spectra")
    _add_function_flags(p)
    p.set_defaults(run=cmd_spectrum)

    p = sub.add_parser("d2", parents=[_common()], help="closed-form F''(1/2) in nats")
    _add_function_flags(p)
    p.add_argument("--check-fd", action="store_true", help="also report the finite difference")
    p.add_argument("--h", type=float, default=1e-4)
    p.set_defaults(run=cmd_d2)

    p = sub.add_parser("search", parents=[_common()], help="exhaustive max of F''(1/2)")
    p.add_argument("--M", type=int)
    p.add_argument("--dedup", choices=explorer.DEDUP_MODES, default="none")
    p.add_argument("--verify-lex", action="store_true", help="also check lex has the largest spectrum")
    p.add_argument("--list-limit", type=int, default=explorer.LIST_LIMIT)
    p.set_defaults(run=cmd_search)

    p = sub.add_parser("scan", parents=[_common()], help="check F_f(alpha) <= T on a grid")
    p.add_argument("--M", type=int)
    p.set_defaults(run=cmd_scan, tolerance=1e-9)

    p = sub.add_parser("shapes", parents=[_common()], help="classify curve shapes")
    _add_function_flags(p)
    p.add_argument("--M", type=int)
    p.add_argument("--dedup", choices=explorer.DEDUP_MODES, default="none")
    p.set_defaults(run=cmd_shapes)

    p = sub.add_parser("sequence", parents=[_common()], help="the sequence a(m) and its bounds")
    p.add_argument("--m", type=int)
    p.add_argument("--check-bounds", action="store_true")
    p.add_argument("--max-m", type=int, default=10**6)
    p.set_defaults(run=cmd_sequence)

    p = sub.add_parser("identities", parents=[_common()], help="binomial and posterior-sum identities")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(run=cmd_identities, n=4)

    p = sub.add_parser("fig1", parents=[_common()], help="two example curves with n=4, M=4")
    p.set_defaults(run=cmd_fig1)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.run(args)
    except NoisyBoolError as exc:
        print(f"error:{exc.code}:{exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"error:internal:{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
