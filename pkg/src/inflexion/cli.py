"""Command-line front end: ``analyze``, ``simulate`` and ``reproduce``.

Exit codes: 0 when some method produced an estimate (or every reproduction
check passed), 1 for bad input, flags or I/O, 2 when no inflection could be
resolved (or a reproduction check failed).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import __version__
from .csvio import read_curve_csv, write_curve_csv
from .errors import InflexionError, OrientationUndeterminedError
from .harness import (
    ANALYSIS_SCHEMA,
    METHODS,
    TABLE_IDS,
    ExperimentConfig,
    analyze_curve,
    bundle_summary,
    make_curve,
    plot_series,
    reproduce_paper,
    run_experiment,
    write_bundle,
    write_plot_data,
)
from .model import FAMILIES, CurveSpec, NoiseSpec
from .refine import DEFAULT_TOL

SEED_ENV = "INFLEXION_SEED"

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_ESTIMATE = 2

_TRACE_COLS = ("k", "lo", "hi", "j_r", "j_l", "chi_r", "chi_l", "chi_S", "j_1", "j_2", "chi_F1", "chi_F2", "chi_D")


class UsageError(Exception):
    pass


def _num(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _methods(text):
    methods = tuple(m.strip() for m in text.split(",") if m.strip())
    bad = [m for m in methods if m not in METHODS]
    if bad or not methods:
        raise argparse.ArgumentTypeError(f"unknown method(s) {bad}; choose from {', '.join(METHODS)}")
    return methods


def estimate_of(result: dict):
    """Best available point estimate, preferring refined over single-pass results."""
    for key, get in (
        ("cubic-correction", lambda r: r),
        ("bede", lambda r: r["estimate"]),
        ("bese", lambda r: r["estimate"]),
        ("ede", lambda r: r["chi_D"]),
        ("ese", lambda r: r["chi_S"]),
    ):
        if key in result and get(result[key]) is not None:
            return get(result[key])
    return None


def render(result: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("method", *_TRACE_COLS, "estimate"))
        for m in ("ese", "ede"):
            if m in result:
                r = {"k": 0, "lo": 0, "hi": result.get("points", 0) - 1, **result[m]}
                w.writerow((m, *(_num(r.get(c)) for c in _TRACE_COLS),
                            _num(r.get("chi_S" if m == "ese" else "chi_D"))))
        for m in ("bese", "bede"):
            if m in result:
                for r in result[m]["rows"]:
                    w.writerow((m, *(_num(r.get(c)) for c in _TRACE_COLS), ""))
                w.writerow((m, *("" for _ in _TRACE_COLS), _num(result[m]["estimate"])))
        if "cubic-correction" in result:
            w.writerow(("cubic-correction", *("" for _ in _TRACE_COLS), _num(result["cubic-correction"])))
        return buf.getvalue()
    lines = []
    if result.get("flipped"):
        lines.append("orientation: concave-convex (ordinates negated for estimation)")
    if "ese" in result:
        r = result["ese"]
        lines.append(f"ESE  j_r={r['j_r']} j_l={r['j_l']} chi_r={_num(r['chi_r'])} "
                     f"chi_l={_num(r['chi_l'])} chi_S={_num(r['chi_S'])}")
    if "ede" in result:
        r = result["ede"]
        tail = f"chi_D={_num(r['chi_D'])}" if r["chi_D"] is not None else "chi_D=none (no inflection resolvable)"
        lines.append(f"EDE  j_1={r['j_1']} j_2={r['j_2']} chi_F1={_num(r['chi_F1'])} "
                     f"chi_F2={_num(r['chi_F2'])} {tail}")
    for m, key in (("bese", "chi_S"), ("bede", "chi_D")):
        if m in result:
            t = result[m]
            lines.append(f"{m.upper()} estimate={_num(t['estimate'])} stop={t['stop_reason']} "
                         f"iterations={len(t['rows'])}")
            for r in t["rows"]:
                lines.append(f"  k={r['k']} [{r['lo']},{r['hi']}] chi_r={_num(r['chi_r'])} "
                             f"chi_l={_num(r['chi_l'])} chi_S={_num(r['chi_S'])}"
                             + (f" chi_F1={_num(r['chi_F1'])} chi_F2={_num(r['chi_F2'])} "
                                f"chi_D={_num(r['chi_D'])}" if m == "bede" else ""))
    if "cubic-correction" in result:
        lines.append(f"CUBIC corrected p={_num(result['cubic-correction'])}")
    return "\n".join(lines) + "\n"


def _analysis(curve, args, source):
    try:
        result = analyze_curve(curve, args.method, args.tol, args.min_points, args.shape)
    except OrientationUndeterminedError as exc:
        return {"schema": ANALYSIS_SCHEMA, "source": source, "points": len(curve),
                "error": str(exc), "estimate": None}
    est = estimate_of(result)
    return {"schema": ANALYSIS_SCHEMA, "source": source, "points": len(curve), **result, "estimate": est}


def _finish(doc, args, out):
    if "error" in doc:
        print(f"no inflection resolvable: {doc['error']}", file=sys.stderr)
        out.write(json.dumps(doc, indent=2) + "\n" if args.format == "json" else "")
        return EXIT_NO_ESTIMATE
    out.write(render(doc, args.format))
    if doc["estimate"] is None:
        print("no inflection resolvable: EDE found no minimum-before-maximum pair", file=sys.stderr)
        return EXIT_NO_ESTIMATE
    return EXIT_OK


def cmd_analyze(args, out):
    curve = read_curve_csv(args.path)
    doc = _analysis(curve, args, str(args.path))
    if args.plot_dir and "error" not in doc:
        write_plot_data(plot_series(curve), args.plot_dir)
    return _finish(doc, args, out)


def _spec_from_args(args):
    if args.curve == "cubic":
        return CurveSpec.cubic(*args.coeffs) if args.coeffs else CurveSpec.cubic()
    spec = CurveSpec.named(args.curve)
    params = dict(spec.params)
    for key in ("L", "p", "k"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    return CurveSpec(args.curve, params)


def cmd_simulate(args, out):
    if args.coeffs and args.curve != "cubic":
        raise UsageError("--coeffs only applies to --curve cubic")
    if args.replicates > 1 and not args.noise:
        raise UsageError("--replicates > 1 requires --noise")
    noise = NoiseSpec.parse(args.noise, args.seed) if args.noise else None
    config = ExperimentConfig(_spec_from_args(args), args.a, args.b, args.n, noise, args.method,
                              args.replicates, args.tol, args.min_points, args.shape)
    curve = make_curve(config)
    if args.data_out:
        write_curve_csv(curve, args.data_out)
    if args.plot_dir:
        write_plot_data(plot_series(curve, config.curve), args.plot_dir)
    if args.replicates > 1:
        report = run_experiment(config)
        if args.format == "json":
            out.write(report.to_json() + "\n")
        elif args.format == "csv":
            out.write(report.replicate_csv())
        else:
            for name, s in report.summary.items():
                out.write(f"{name:8s} count={s['count']} mean={_num(s['mean'])} sd={_num(s['sd'])} "
                          f"bias={_num(s['bias'])}\n")
        return EXIT_OK if any(s["count"] for s in report.summary.values()) else EXIT_NO_ESTIMATE
    doc = _analysis(curve, args, args.data_out or "simulated")
    doc["config"] = config.to_dict()
    return _finish(doc, args, out)


def cmd_reproduce(args, out):
    bundle = reproduce_paper(args.only or None, args.replicates, args.seed)
    if args.out:
        write_bundle(bundle, args.out)
    out.write(bundle_summary(bundle) + "\n")
    return EXIT_OK if bundle["passed"] else EXIT_NO_ESTIMATE


def _default_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="inflexion", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def estimation_flags(p, default_method="ese,ede"):
        p.add_argument("--method", type=_methods, default=_methods(default_method),
                       help=f"comma-separated subset of {','.join(METHODS)} (default {default_method})")
        p.add_argument("--format", choices=("plain", "json", "csv"), default="plain")
        p.add_argument("--shape", choices=("auto", "convex-concave", "concave-convex"), default="auto")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="refinement stopping tolerance e")
        p.add_argument("--min-points", type=int, default=4)
        p.add_argument("--plot-dir", help="write two-column plot-data CSVs here")

    p = sub.add_parser("analyze", help="estimate the inflection point of x,y CSV data")
    p.add_argument("path")
    estimation_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="sample a catalog curve, optionally add noise, and analyze it")
    p.add_argument("--curve", choices=FAMILIES, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--noise", help="DIST:SCALE, e.g. uniform:0.05 or normal:0.1")
    p.add_argument("--seed", type=int, default=_default_seed(), help=f"noise seed (default ${SEED_ENV} or 0)")
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--L", type=float, help="sigmoid capacity")
    p.add_argument("--p", type=float, help="sigmoid inflection abscissa")
    p.add_argument("--k", type=float, help="sigmoid rate")
    p.add_argument("--coeffs", type=float, nargs=4, metavar=("ALPHA", "BETA", "GAMMA", "DELTA"))
    p.add_argument("--data-out", help="write the sampled dataset as x,y CSV")
    estimation_flags(p)
    p.set_defaults(func=cmd_simulate, shape="convex-concave")

    p = sub.add_parser("reproduce", help="recompute the published tables and grade them")
    p.add_argument("--only", nargs="+", choices=TABLE_IDS, metavar="TABLE_ID")
    p.add_argument("--replicates", type=int, default=200)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", help="bundle directory (one JSON per table, bundle.json, summary.txt)")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args, out)
    except (InflexionError, UsageError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
