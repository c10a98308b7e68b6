"""Command-line interface: ``omgbh {classify,capacity,scan,map,verify}``.

Exit codes: 0 success, 1 verification failure, 2 complete-positivity
violation, 64 usage error, 74 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .blackhole import a_channel, a_params, c_params_from_a, in_black_hole_region, inverse_map
from .capacity import capacity_report, log_base
from .channel import (
    DEFAULT_TOL,
    capacity_region,
    classify,
    is_completely_positive,
    is_entanglement_breaking,
    point_channel,
)
from .errors import CompletePositivityError, NotInBlackHoleRegionError
from .symplectic import BlackHoleParams

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CP = 2
EXIT_USAGE = 64
EXIT_IO = 74

SCAN_FIELDS = ["tau", "y", "cp", "class", "eb", "region", "K", "coh_info_limit", "lower_bound"]
MAP_FIELDS = [
    "point", "tau_a", "y_a",
    "r_even", "s_even", "tau_c_even", "y_c_even", "class_c_even", "region_c_even",
    "r_odd", "s_odd", "tau_c_odd", "y_c_odd", "class_c_odd", "region_c_odd",
    "error",
]  # fmt: skip


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(value) -> str:
    """Shortest round-trip text for a field; infinities as ``inf``/``-inf``."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            raise ValueError("NaN is not a valid output value")
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    if hasattr(value, "value"):
        return str(value.value)
    return str(value)


def _json_value(value):
    if isinstance(value, float) and math.isinf(value):
        return fmt(value)
    if hasattr(value, "value"):
        return value.value
    return value


def emit(records, fields, fmt_name: str, out) -> None:
    if fmt_name == "json":
        rows = [{k: _json_value(r.get(k)) for k in fields if k in r} for r in records]
        json.dump(rows if len(rows) != 1 else rows[0], out, indent=2)
        out.write("\n")
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(fields)
    for r in records:
        writer.writerow([fmt(r.get(k)) for k in fields])


# ---------------------------------------------------------------- records


def point_record(tau: float, y: float, base=2, tol: float = DEFAULT_TOL) -> dict:
    """One scan/classify row for the phase-insensitive channel at ``(tau, y)``."""
    rec = {"tau": float(tau), "y": float(y), "cp": is_completely_positive(tau, y, tol)}
    if not rec["cp"]:
        return rec
    rep = capacity_report(tau, y, base, tol)
    rec.update(
        {
            "class": classify(point_channel(tau, y, tol), tol),
            "eb": is_entanglement_breaking(tau, y),
            "region": rep.status,
            "K": rep.K,
            "coh_info_limit": rep.coh_info_limit,
            "lower_bound": rep.lower_bound,
            "exact_value": rep.exact_value,
        }
    )
    return rec


def _scan_row(args):
    tau, ys, base, tol, only_strip = args
    rows = []
    for y in ys:
        if only_strip and not in_black_hole_region(tau, y):
            continue
        rows.append(point_record(float(tau), float(y), base, tol))
    return rows


def scan_records(window, grid: int, base=2, tol=DEFAULT_TOL, region_filter="all", jobs: int = 1) -> list:
    """Row-major (tau outer, y inner) records over a rectangular grid."""
    tmin, tmax, ymin, ymax = window
    if grid < 2:
        raise UsageError("grid must be at least 2")
    if not (tmax > tmin and ymax > ymin):
        raise UsageError("window needs max > min on both axes")
    taus = np.linspace(tmin, tmax, grid)
    ys = np.linspace(ymin, ymax, grid)
    tasks = [(float(t), ys, base, tol, region_filter == "black-hole-strip") for t in taus]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_scan_row, tasks, chunksize=max(1, grid // (4 * jobs))))
    else:
        chunks = [_scan_row(t) for t in tasks]
    return [r for chunk in chunks for r in chunk]


def _c_side(pt, parity, base, tol) -> dict:
    p = inverse_map(pt, parity)
    if p is None:
        return {}
    tau_c, y_c = c_params_from_a(pt, parity)
    rec = {"r": p.r, "s": p.s, "tau_c": tau_c, "y_c": y_c}
    try:
        rec["class_c"] = classify(point_channel(tau_c, y_c, 1e-9), 1e-9)
        rec["region_c"] = capacity_region(tau_c, y_c, 1e-9, base)
    except CompletePositivityError:
        rec["class_c"] = rec["region_c"] = None
    return rec


def map_record(tau_a: float, y_a: float, label=None, base=2, tol=DEFAULT_TOL) -> dict:
    rec = {"point": label, "tau_a": float(tau_a), "y_a": float(y_a)}
    try:
        sides = {par: _c_side((tau_a, y_a), par, base, tol) for par in ("even", "odd")}
    except (NotInBlackHoleRegionError, CompletePositivityError) as exc:
        rec["error"] = f"not-in-black-hole-region: {exc}"
        return rec
    for par, side in sides.items():
        for key, val in side.items():
            rec[f"{key}_{par}"] = val
    return rec


def preset_points(name: str) -> list:
    """Sample points of the strip near the origin.

    Both presets start with the five points of the line ``y = 1 - tau``
    between ``(0, 1)`` and ``(1, 0)``.  The rest sit strictly inside the strip
    at fractions of the interval ``|tau - 1| < y < tau + 1``: a 6x5 grid for
    fig5 (35 points), 5x4 for fig6 (25 points).
    """
    line = [(t, 1.0 - t) for t in (0.0, 0.25, 0.5, 0.75, 1.0)]
    if name == "fig5":
        taus, fracs = (0.2, 0.4, 0.6, 0.8, 1.2, 1.6), (0.1, 0.3, 0.5, 0.7, 0.9)
    elif name == "fig6":
        taus, fracs = (0.3, 0.6, 0.9, 1.25, 1.75), (0.125, 0.375, 0.625, 0.875)
    else:
        raise UsageError(f"unknown preset {name!r}")
    interior = []
    for t in taus:
        lo, hi = abs(t - 1.0), t + 1.0
        interior.extend((t, round(lo + f * (hi - lo), 12)) for f in fracs)
    return line + interior


# ---------------------------------------------------------------- commands


def _default_base() -> str:
    return os.environ.get("OMGBH_DEFAULT_BASE", "2")


def _base(args):
    b = args.base or _default_base()
    try:
        log_base(b)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return "e" if str(b).strip().lower() == "e" else float(b)


def _point_from_args(args, allow_rs=True):
    has_ty = args.tau is not None or args.y is not None
    has_rs = allow_rs and (getattr(args, "r", None) is not None or getattr(args, "s", None) is not None)
    if has_ty == has_rs:
        raise UsageError("give exactly one of (--tau, --y) or (--r, --s)")
    if has_ty:
        if args.tau is None or args.y is None:
            raise UsageError("--tau and --y go together")
        return args.tau, args.y, None
    if args.r is None or args.s is None:
        raise UsageError("--r and --s go together")
    p = BlackHoleParams(args.r, args.s)
    tau, y = a_params(p)
    return tau, y, p


def cmd_classify(args, out) -> int:
    tau, y, p = _point_from_args(args)
    base = _base(args)
    if p is not None:
        ch = a_channel(p)
        rec = point_record(tau, y, base, args.tol)
        rec["class"] = classify(ch, args.tol)
        rec.update({"r": p.r, "s": p.s})
    else:
        rec = point_record(tau, y, base, args.tol)
    if not rec["cp"]:
        raise CompletePositivityError(f"(tau, y)=({tau}, {y}) violates y >= |tau - 1|", tau, y)
    fields = (["r", "s"] if p is not None else []) + ["tau", "y", "class", "cp", "eb", "region", "K"]
    emit([rec], fields, args.format, out)
    return EXIT_OK


def cmd_capacity(args, out) -> int:
    tau, y, p = _point_from_args(args)
    rep = capacity_report(tau, y, _base(args), args.tol)
    d = rep.as_dict()
    if p is not None:
        d = {"r": p.r, "s": p.s, **d}
    if args.format == "json":
        json.dump({k: _json_value(v) for k, v in d.items()}, out, indent=2)
        out.write("\n")
    else:
        d["notes"] = "; ".join(d["notes"])
        emit([d], list(d), "csv", out)
    return EXIT_OK


def _parse_window(text: str):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad --window {text!r}") from exc
    if len(vals) != 4:
        raise UsageError("--window takes tau_min,tau_max,y_min,y_max")
    return vals


def _open_output(path, out):
    if path in (None, "-"):
        return out, False
    try:
        return open(path, "w", newline=""), True
    except OSError as exc:
        raise IOError(f"cannot write {path}: {exc}") from exc


def cmd_scan(args, out) -> int:
    records = scan_records(
        _parse_window(args.window), args.grid, _base(args), args.tol, args.region_filter, args.jobs
    )
    fields = SCAN_FIELDS + (["exact_value"] if args.format == "json" else [])
    if args.format == "json":
        buf = io.StringIO()
        json.dump([{k: _json_value(r.get(k)) for k in fields} for r in records], buf, indent=1)
        text = buf.getvalue() + "\n"
    else:
        buf = io.StringIO()
        emit(records, fields, "csv", buf)
        text = buf.getvalue()
    stream, close = _open_output(args.output, out)
    try:
        stream.write(text)
    except OSError as exc:
        raise IOError(str(exc)) from exc
    finally:
        if close:
            stream.close()
    return EXIT_OK


def cmd_map(args, out) -> int:
    base = _base(args)
    if args.preset:
        if args.tau is not None or args.y is not None:
            raise UsageError("--preset excludes --tau/--y")
        pts = [(i + 1, t, y) for i, (t, y) in enumerate(preset_points(args.preset))]
    else:
        tau, y, _ = _point_from_args(args, allow_rs=False)
        pts = [(1, tau, y)]
    records = [map_record(t, y, label, base, args.tol) for label, t, y in pts]
    emit(records, MAP_FIELDS, args.format, out)
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .fock import run_suite

    start = time.perf_counter()
    reports = run_suite(args.suite, args.cutoff, args.seed)
    for rep in reports:
        print(rep.line(), file=out)
    failed = [r for r in reports if not r.passed]
    worst = {}
    for r in reports:
        worst[r.name] = max(worst.get(r.name, 0.0), r.residual)
    summary = " ".join(f"max_{k}={v:.3e}" for k, v in worst.items())
    elapsed = time.perf_counter() - start
    print(f"summary suite={args.suite} cutoff={args.cutoff} seed={args.seed} checks={len(reports)} "
          f"failed={len(failed)} {summary} seconds={elapsed:.1f}", file=out)  # fmt: skip
    if failed:
        print("failing cases:", file=sys.stderr)
        for r in failed:
            print("  " + r.line(), file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="omgbh", description="Black hole Gaussian channel classification and capacities.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, point=True, rs=True, fmt_default="json"):
        if point:
            sp.add_argument("--tau", type=float)
            sp.add_argument("--y", type=float)
        if rs:
            sp.add_argument("--r", type=float)
            sp.add_argument("--s", type=float)
        sp.add_argument("--base", choices=["2", "e"], default=None, help="log base (default $OMGBH_DEFAULT_BASE or 2)")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--format", choices=["csv", "json"], default=fmt_default)

    common(sub.add_parser("classify", help="class, CP/EB flags and capacity region of one channel"))
    common(sub.add_parser("capacity", help="capacity report for one channel"))

    sp = sub.add_parser("scan", help="grid scan over (tau, y)")
    common(sp, point=False, rs=False, fmt_default="csv")
    sp.add_argument("--window", default="0,3,0,3", help="tau_min,tau_max,y_min,y_max")
    sp.add_argument("--grid", type=int, default=300, help="points per axis")
    sp.add_argument("--region-filter", choices=["all", "black-hole-strip"], default="all")
    sp.add_argument("--output", default=None)
    sp.add_argument("--jobs", type=int, default=1)

    sp = sub.add_parser("map", help="a-channel to c-channel table for both parities")
    common(sp, rs=False, fmt_default="csv")
    sp.add_argument("--preset", choices=["fig5", "fig6"])

    sp = sub.add_parser("verify", help="truncated Fock-space oracle checks")
    sp.add_argument("--suite", choices=["bogoliubov", "channel", "entropy", "all"], default="all")
    sp.add_argument("--cutoff", type=int, default=20)
    sp.add_argument("--seed", type=int, default=7)
    return parser


COMMANDS = {
    "classify": cmd_classify,
    "capacity": cmd_capacity,
    "scan": cmd_scan,
    "map": cmd_map,
    "verify": cmd_verify,
}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"omgbh: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CompletePositivityError as exc:
        print(f"omgbh: CP violation: {exc}", file=sys.stderr)
        return EXIT_CP
    except IOError as exc:
        print(f"omgbh: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
