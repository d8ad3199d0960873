"""Command-line front end: pattern classes, thresholds, PBER/BER curves, simulation.

Every command writes a table to stdout as CSV (default) or JSON. Output is a
pure function of the flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

from . import __version__
from .ber import ABD, BD, ber_labeling, pber
from .constellation import make_constellation, snr_from_db
from .exceptions import PamError
from .labelings import builtin_labeling, builtin_labelings, count_distinct_labelings, labeling_from_columns
from .patterns import as_pattern, enumerate_classes, pattern_from_index
from .simulation import SimConfig, run_ber_sim, run_pber_sim
from .thresholds import abd_thresholds, bd_thresholds, closed_form_available, track_bd_thresholds

SCHEMA_VERSION = "1"
CURVE_COLUMNS = ("subject", "demod", "snr_db", "value", "method")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Formatting


def format_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".12g")
    if v is None:
        return ""
    return str(v)


def _json_value(v):
    if isinstance(v, float) and math.isfinite(v):
        return float(format(v, ".12g"))
    if isinstance(v, float):
        return format_value(v)
    return v


def render(columns, rows, fmt: str, command: str) -> str:
    if fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "columns": list(columns),
            "rows": [{c: _json_value(r[c]) for c in columns} for r in rows],
        }
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([format_value(r[c]) for c in columns])
    return buf.getvalue()


def _join(values) -> str:
    return " ".join(str(v) for v in values)


# ---------------------------------------------------------------------------
# Argument helpers


def parse_snr_range(text: str) -> list[float]:
    """``start:step:stop`` (stop included within half a step) or a single dB value."""
    parts = text.split(":")
    try:
        nums = [float(s) for s in parts]
    except ValueError:
        raise UsageError(f"bad SNR range {text!r}") from None
    if len(nums) == 1:
        return nums
    if len(nums) != 3:
        raise UsageError(f"SNR range must be start:step:stop, got {text!r}")
    start, step, stop = nums
    if step <= 0 or stop < start:
        raise UsageError(f"SNR range needs step > 0 and stop >= start, got {text!r}")
    n = math.floor((stop - start) / step + 0.5)
    return [round(start + i * step, 10) for i in range(n + 1)]


def _columns(text: str) -> list[int]:
    try:
        return [int(s) for s in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad column list {text!r}") from None


def _pattern(args):
    if args.pattern is not None and args.class_id is not None:
        raise UsageError("give --pattern or --class, not both")
    if args.class_id is not None:
        classes = enumerate_classes(args.order)
        if not 1 <= args.class_id <= len(classes):
            raise UsageError(f"--class must be in 1..{len(classes)} for {args.order}-PAM")
        return classes[args.class_id - 1].representative
    if args.pattern is None:
        raise UsageError("one of --pattern or --class is required")
    text = args.pattern.strip()
    if len(text) == args.order and set(text) <= {"0", "1"}:
        return as_pattern(text)
    try:
        w = int(text)
    except ValueError:
        raise UsageError(f"--pattern must be an index or a {args.order}-bit string, got {text!r}") from None
    return pattern_from_index(w, args.order)


def _labeling(args):
    if args.labeling is not None and args.columns is not None:
        raise UsageError("give --labeling or --columns, not both")
    if args.columns is not None:
        return labeling_from_columns(_columns(args.columns), args.order)
    if args.labeling is None:
        raise UsageError("one of --labeling or --columns is required")
    return builtin_labeling(args.labeling, args.order)


def _subject_given(args) -> str:
    has_p = getattr(args, "pattern", None) is not None or getattr(args, "class_id", None) is not None
    has_l = getattr(args, "labeling", None) is not None or getattr(args, "columns", None) is not None
    if has_p == has_l:
        raise UsageError("give exactly one subject: --pattern/--class or --labeling/--columns")
    return "pattern" if has_p else "labeling"


def _bd_method(args, p) -> str:
    method = args.method or "auto"
    if method == "abd":
        raise UsageError("--method abd does not apply to the BD")
    if method == "auto":
        method = "closed" if closed_form_available(p) else "scan"
    return method


def _method_label(method: str) -> str:
    return {"closed": "closed-form", "scan": "scan", "abd": "abd-midpoint"}[method]


# ---------------------------------------------------------------------------
# Commands


def cmd_classes(args):
    cols = ("q", "representative", "index", "type", "members", "a")
    rows = [
        {
            "q": cls.class_id,
            "representative": "".join(map(str, cls.representative.bits)),
            "index": cls.representative.index,
            "type": cls.sym_type.value,
            "members": _join(cls.member_indices),
            "a": _join(cls.abd_weights),
        }
        for cls in enumerate_classes(args.order)
    ]
    return cols, rows


def cmd_thresholds(args):
    p = _pattern(args)
    c = make_constellation(p.order)
    snrs = parse_snr_range(args.snr_db)
    method = args.method or ("closed" if closed_form_available(p) else "scan")
    if method == "abd":
        sets = [abd_thresholds(p, c)] * len(snrs)
    elif method == "scan":
        sets = track_bd_thresholds(p, c, snrs)
    else:
        sets = [bd_thresholds(p, snr_from_db(db, c), c, method="closed") for db in snrs]
    cols = ("subject", "snr_db", "k", "value", "virtual", "partner", "method")
    rows = []
    for db, ts in zip(snrs, sets):
        for k in sorted(ts.entries):
            e = ts.entries[k]
            rows.append(
                {
                    "subject": f"p_{p.index}",
                    "snr_db": db,
                    "k": k,
                    "value": float(e.value),
                    "virtual": bool(e.virtual),
                    "partner": e.partner,
                    "method": _method_label(method),
                }
            )
    return cols, rows


def cmd_pber(args):
    p = _pattern(args)
    c = make_constellation(p.order)
    method = "abd" if args.demod == ABD else _bd_method(args, p)
    rows = []
    for db in parse_snr_range(args.snr_db):
        value = pber(p, args.demod, snr_from_db(db, c), c, method=method if method != "abd" else "auto")
        rows.append({"subject": f"p_{p.index}", "demod": args.demod, "snr_db": db, "value": value,
                     "method": _method_label(method)})
    return CURVE_COLUMNS, rows


def cmd_ber(args):
    L = _labeling(args)
    c = make_constellation(L.order)
    if args.demod == ABD:
        method = "abd"
    else:
        method = args.method or "auto"
        if method == "abd":
            raise UsageError("--method abd does not apply to the BD")
    label = {"abd": "abd-weights", "auto": "auto", "closed": "closed-form", "scan": "scan"}[method]
    rows = []
    for db in parse_snr_range(args.snr_db):
        value = ber_labeling(L, args.demod, snr_from_db(db, c), c, method="auto" if method == "abd" else method)
        rows.append({"subject": L.name, "demod": args.demod, "snr_db": db, "value": value, "method": label})
    return CURVE_COLUMNS, rows


def cmd_simulate(args):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    kind = _subject_given(args)
    c = make_constellation(args.order)
    if kind == "pattern":
        subj = _pattern(args)
        name = f"p_{subj.index}"
    else:
        subj = _labeling(args)
        name = subj.name
    cols = ("subject", "demod", "snr_db", "trials", "errors", "estimate", "ci95_halfwidth", "analytic", "z")
    rows = []
    for db in parse_snr_range(args.snr_db):
        snr = snr_from_db(db, c)
        cfg = SimConfig(trials=args.trials, snr=snr, demod=args.demod, seed=args.seed, shards=args.shards)
        if kind == "pattern":
            res = run_pber_sim(cfg, subj, c)
            analytic = pber(subj, args.demod, snr, c)
        else:
            res = run_ber_sim(cfg, subj, c)
            analytic = ber_labeling(subj, args.demod, snr, c)
        rows.append(
            {
                "subject": name,
                "demod": args.demod,
                "snr_db": db,
                "trials": res.trials,
                "errors": res.errors,
                "estimate": res.estimate,
                "ci95_halfwidth": res.ci95_halfwidth,
                "analytic": analytic,
                "z": res.z_score(analytic),
            }
        )
    return cols, rows


def cmd_labelings(args):
    if args.count_distinct:
        total, distinct = count_distinct_labelings(args.order)
        return ("order", "labelings", "distinct"), [{"order": args.order, "labelings": total, "distinct": distinct}]
    cols = ("name", "W", "q", "alpha")
    rows = [
        {"name": L.name, "W": _join(L.pattern_indices), "q": _join(L.class_vector), "alpha": _join(L.abd_weights)}
        for L in builtin_labelings(args.order)
    ]
    return cols, rows


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pamber", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--order", "-M", type=int, default=8, help="constellation size M (default 8)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    def pattern_opts(sp):
        sp.add_argument("--pattern", help="pattern index w or bit string")
        sp.add_argument("--class", dest="class_id", type=int, help="class number q (uses its representative)")

    def labeling_opts(sp):
        sp.add_argument("--labeling", help="builtin labeling: brgc, nbc, fbc, bsgc, agc")
        sp.add_argument("--columns", help="column pattern indices, e.g. 15,60,90")

    def demod_opt(sp):
        sp.add_argument("--demod", type=str.lower, choices=(BD, ABD), default=BD)

    sp = sub.add_parser("classes", help="pattern classes with types and ABD weights")
    common(sp)
    sp.set_defaults(func=cmd_classes)

    sp = sub.add_parser("thresholds", help="BD or ABD thresholds over an SNR range")
    common(sp)
    pattern_opts(sp)
    sp.add_argument("--snr-db", default="10", help="dB value or start:step:stop")
    sp.add_argument("--method", choices=("closed", "scan", "abd"))
    sp.set_defaults(func=cmd_thresholds)

    sp = sub.add_parser("pber", help="PBER curve of one pattern")
    common(sp)
    pattern_opts(sp)
    demod_opt(sp)
    sp.add_argument("--snr-db", default="0:1:15")
    sp.add_argument("--method", choices=("closed", "scan", "abd"))
    sp.set_defaults(func=cmd_pber)

    sp = sub.add_parser("ber", help="BER curve of a labeling")
    common(sp)
    labeling_opts(sp)
    demod_opt(sp)
    sp.add_argument("--snr-db", default="0:1:15")
    sp.add_argument("--method", choices=("closed", "scan", "abd"))
    sp.set_defaults(func=cmd_ber)

    sp = sub.add_parser("simulate", help="Monte-Carlo PBER/BER next to the analytic value")
    common(sp)
    pattern_opts(sp)
    labeling_opts(sp)
    demod_opt(sp)
    sp.add_argument("--snr-db", default="10")
    sp.add_argument("--trials", type=int, default=10**6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--shards", type=int, default=1)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("labelings", help="builtin labelings, or count distinct class vectors")
    common(sp)
    sp.add_argument("--count-distinct", action="store_true")
    sp.set_defaults(func=cmd_labelings)
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    # argparse would treat "-2:0.25:12" as an option.
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if a == "--snr-db" and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"--snr-db={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(argv))
    command = " ".join(["pamber", *argv])
    try:
        cols, rows = args.func(args)
    except UsageError as exc:
        parser.exit(2, f"pamber {args.command}: error: {exc}\n")
    except (PamError, ValueError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        parser.exit(1, f"pamber {args.command}: error: {type(exc).__name__}: {msg}\n")
    sys.stdout.write(render(cols, rows, args.format, command))
    return 0
