"""Command-line interface.

Subcommands: ``estimate``, ``spectrum``, ``hill``, ``simulate``,
``coverage``, ``select-study`` and ``sigma1``. Exit status is 0 on success,
2 on usage errors, 3 on ingestion errors, 4 on configuration errors, 5 on a
degenerate estimate and 6 on numerical errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._backend import BACKEND
from .autoselect import AutoSelectConfig, select_j1
from .covariance import default_sigma1, sigma1_matrix, write_table
from .errors import ConfigError, MaxTailError
from .estimator import METHODS, ScaleRange, asymptotic_ci, estimate, montecarlo_ci
from .experiments import load_coverage_spec, run_coverage, run_selection_study
from .generators import VARIANTS, ModelConfig, gen_series
from .hill import hill_plot
from .ingest import SIMULATE_TAG, IngestSpec, read_column, stream_column
from .rng import fresh_seed
from .spectrum import compute_spectrum_batch, finalize

REPORT_SCHEMA = "maxtail.estimate/1"


def _float(x):
    """JSON-safe float: infinities become strings."""
    if x is None:
        return None
    x = float(x)
    if math.isfinite(x):
        return x
    return "inf" if x > 0 else "-inf"


def _ingest_spec(args) -> IngestSpec:
    header = {"auto": None, "yes": True, "no": False}[args.header]
    return IngestSpec(args.input, args.column, args.delimiter, args.skip_rows, header, args.positivity)


def _load_spectrum(args):
    spec = _ingest_spec(args)
    if getattr(args, "stream", False):
        state, col = stream_column(spec)
        return finalize(state), col
    col = read_column(spec)
    return compute_spectrum_batch(col.values), col


def _seed(args):
    if args.seed is not None:
        return args.seed
    seed = fresh_seed()
    print(f"seed: {seed}", file=sys.stderr)
    return seed


def _write(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


# -- estimate -----------------------------------------------------------------

def build_report(args) -> dict:
    spectrum, col = _load_spectrum(args)
    j2 = spectrum.scale_count if args.j2 is None else args.j2
    cov = default_sigma1(max(j2, 2))
    selection = None
    if args.j1 is None:
        cfg = AutoSelectConfig.for_data(p=args.p, b=args.b, j2=j2, method=args.method)
        sel = select_j1(spectrum, cfg, cov)
        est = sel.estimate
        selection = {
            "p": cfg.p,
            "b": cfg.b,
            "alternative_j1": sel.alternative_j1,
            "trace": [s.as_dict() for s in sel.trace],
        }
    else:
        est = estimate(spectrum, ScaleRange(args.j1, j2), args.method, cov)
    seed = None
    if args.ci == "asymptotic":
        ci = asymptotic_ci(est, args.level)
    else:
        seed = _seed(args)
        ci = montecarlo_ci(est, reps=args.reps, level=args.level, seed=seed)
    return {
        "schema": REPORT_SCHEMA,
        "input": {
            "path": args.input,
            "column": col.name if col.name is not None else args.column,
            "rows_read": col.rows_read,
            "dropped_nonpositive": col.dropped,
        },
        "n": spectrum.total_count,
        "spectrum": [{"j": j, "n_j": nj, "y": y} for j, nj, y in spectrum.rows()],
        "range": {"j1": est.range.j1, "j2": est.range.j2, "auto": selection is not None},
        "selection": selection,
        "method": est.method,
        "h": est.h,
        "alpha": est.alpha,
        "c_w": est.c_w,
        "n_eff": est.n_eff,
        "weights": est.weights.weights.tolist(),
        "ci": {k: _float(v) if k in ("lower", "upper") else v for k, v in ci.as_dict().items()},
        "seed": seed,
        "source_config": col.source_config,
    }


def render_text(report: dict) -> str:
    r = report
    lines = [
        f"input        {r['input']['path']} (column {r['input']['column']}, {r['n']} values, "
        f"{r['input']['dropped_nonpositive']} dropped)",
        f"range        j1={r['range']['j1']} j2={r['range']['j2']}" + (" (auto)" if r["range"]["auto"] else ""),
        f"method       {r['method']}",
        f"H            {r['h']:.6f}",
        f"alpha        {r['alpha']:.6f}",
        f"c_w          {r['c_w']:.6f}   n_eff {r['n_eff']}",
        f"{r['ci']['kind']} {r['ci']['level']:g} CI   ({r['ci']['lower']:.6f}, {_fmt(r['ci']['upper'])})",
    ]
    if r["seed"] is not None:
        lines.append(f"seed         {r['seed']}")
    lines.append("")
    lines.append(f"{'j':>3} {'n_j':>10} {'Y_j':>12}")
    for row in r["spectrum"]:
        lines.append(f"{row['j']:>3} {row['n_j']:>10} {row['y']:>12.6f}")
    if r["selection"]:
        lines.append("")
        lines.append(f"selection (p={r['selection']['p']:g}, b={r['selection']['b']})")
        lines.append(f"{'j1':>3} {'H_new':>10} {'H_old':>10} {'stat':>10} {'thresh':>10} decision")
        for s in r["selection"]["trace"]:
            lines.append(
                f"{s['j1']:>3} {s['h_new']:>10.5f} {s['h_old']:>10.5f} {s['statistic']:>10.5f} "
                f"{s['threshold']:>10.5f} {s['decision']}"
            )
    return "\n".join(lines) + "\n"


def _fmt(v):
    return v if isinstance(v, str) else f"{v:.6f}"


def cmd_estimate(args):
    report = build_report(args)
    if args.format == "json":
        _write(json.dumps(report, indent=2) + "\n", args.output)
    else:
        _write(render_text(report), args.output)
    return 0


# -- tables -------------------------------------------------------------------

def cmd_spectrum(args):
    spectrum, _ = _load_spectrum(args)
    rows = [(j, nj, repr(y)) for j, nj, y in spectrum.rows()]
    _write(_csv(rows, ["j", "n_j", "Y_j"]), args.output)
    return 0


def cmd_hill(args):
    col = read_column(_ingest_spec(args))
    plot = hill_plot(col.values, args.k_max)
    rows = [(k, repr(a) if math.isfinite(a) else "inf") for k, a in plot.rows()]
    _write(_csv(rows, ["k", "alpha_hat"]), args.output)
    return 0


def cmd_simulate(args):
    if args.config:
        try:
            d = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read model config: {exc}") from None
        cfg = ModelConfig.from_dict(d)
        if args.seed is not None:
            cfg = cfg.with_seed(args.seed)
    else:
        if args.variant is None or args.alpha is None or args.n is None:
            raise ConfigError("simulate needs --config or --variant, --alpha and --n")
        cfg = ModelConfig(args.variant, args.alpha, args.n, args.phi, tuple(args.coefficients), args.innovations, args.seed)
    if cfg.seed is None:
        cfg = cfg.with_seed(_seed(argparse.Namespace(seed=None)))
    x = gen_series(cfg)
    buf = io.StringIO()
    buf.write(f"# {SIMULATE_TAG} {json.dumps(cfg.as_dict(), sort_keys=True)}\n")
    buf.write("value\n")
    for v in x.tolist():
        buf.write(repr(v) + "\n")
    _write(buf.getvalue(), args.output)
    return 0


# -- experiments --------------------------------------------------------------

def _coverage_dict(args) -> dict:
    if args.config:
        try:
            d = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read coverage config: {exc}") from None
    else:
        d = {
            "model": {"variant": args.variant, "alpha": args.alpha, "n": args.n},
            "ci": args.ci,
            "method": args.method,
        }
        for key, val in (("phis", args.phis), ("j1", args.j1), ("levels", args.levels), ("reps", args.reps),
                         ("inner_reps", args.inner_reps), ("j2", args.j2)):
            if val is not None:
                d[key] = val
    if args.seed is not None:
        d["seed"] = args.seed
    if "seed" not in d:
        d["seed"] = _seed(argparse.Namespace(seed=None))
    return d


def cmd_coverage(args):
    spec = load_coverage_spec(_coverage_dict(args))
    result = run_coverage(spec, workers=args.workers)
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "coverage.csv").write_text(result.coverage_csv())
        (out / "coverage_se.csv").write_text(result.se_csv())
        (out / "coverage_long.csv").write_text(result.long_csv())
        (out / "config.json").write_text(json.dumps(spec.as_dict(), indent=2) + "\n")
    else:
        sys.stdout.write("# coverage\n" + result.coverage_csv() + "# standard errors\n" + result.se_csv())
    return 0


def cmd_select_study(args):
    model = ModelConfig(args.variant, args.alpha, args.n, args.phi, tuple(args.coefficients), args.innovations)
    cfg = AutoSelectConfig(p=args.p, b=args.b, method=args.method)
    seed = _seed(args)
    study = run_selection_study(model, cfg, reps=args.reps, seed=seed)
    tables = {
        "selected_j1.csv": study.j1_histogram_csv(),
        "alpha_hat.csv": study.alpha_histogram_csv(),
        "rmse.csv": study.rmse_csv(),
    }
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in tables.items():
            (out / name).write_text(text)
    else:
        for name, text in tables.items():
            sys.stdout.write(f"# {name}\n{text}")
    print(
        f"modal j1 {study.modal_j1} ({study.modal_share:.0%}), RMSE argmin j1 {study.rmse_argmin}, "
        f"mean alpha_hat {np.mean(study.alpha_hats):.4f}",
        file=sys.stderr,
    )
    return 0


def cmd_sigma1(args):
    seed = None
    if args.mode == "montecarlo":
        seed = _seed(args)
    model = sigma1_matrix(args.ell, args.mode, args.samples, seed)
    write_table(model, args.output)
    return 0


# -- parser -------------------------------------------------------------------

def _add_ingest(p, stream=True):
    p.add_argument("input", help="CSV file, or - for standard input")
    p.add_argument("-c", "--column", default="0", help="column index (0-based) or header name")
    p.add_argument("-d", "--delimiter", default=",")
    p.add_argument("--skip-rows", type=int, default=0, help="records to skip before the header/data")
    p.add_argument("--header", choices=("auto", "yes", "no"), default="auto")
    p.add_argument("--positivity", choices=("error", "drop"), default="error",
                   help="reject non-positive values, or drop and count them")
    if stream:
        p.add_argument("--stream", action="store_true", help="constant-memory streaming ingestion")
    p.add_argument("-o", "--output", default="-")


def _add_model(p, required=True):
    p.add_argument("--variant", choices=VARIANTS, required=required)
    p.add_argument("--alpha", type=float, required=required)
    p.add_argument("--n", type=int, required=required)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--coefficients", type=float, nargs="+", default=[1.0])
    p.add_argument("--innovations", choices=("frechet", "pareto"), default="frechet")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxtail", description="Tail-exponent estimation from block maxima.")
    parser.add_argument("--version", action="version", version=f"maxtail {__version__} ({BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate alpha with a confidence interval")
    _add_ingest(p)
    p.add_argument("--j1", type=int, help="lower scale; omit for automatic selection")
    p.add_argument("--j2", type=int, help="upper scale (default: largest)")
    p.add_argument("--method", choices=METHODS, default="wls")
    p.add_argument("--ci", choices=("asymptotic", "montecarlo"), default="asymptotic")
    p.add_argument("--level", type=float, default=0.95)
    p.add_argument("--reps", type=int, default=1000, help="Monte-Carlo paths for --ci montecarlo")
    p.add_argument("--p", type=float, default=0.1, help="significance level for automatic j1")
    p.add_argument("--b", type=int, default=3, help="back-start for automatic j1")
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("spectrum", help="max-spectrum table (j, n_j, Y_j)")
    _add_ingest(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("hill", help="Hill plot table (k, alpha_hat)")
    _add_ingest(p, stream=False)
    p.add_argument("--k-max", type=int, help="default: min(n - 1, n / 10)")
    p.set_defaults(func=cmd_hill)

    p = sub.add_parser("simulate", help="write a synthetic series")
    p.add_argument("--config", help="JSON model config")
    _add_model(p, required=False)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("coverage", help="coverage table of confidence intervals")
    p.add_argument("--config", help="JSON coverage config")
    p.add_argument("--variant", choices=VARIANTS, default="max_ar1_frechet")
    p.add_argument("--alpha", type=float, default=1.5)
    p.add_argument("--n", type=int, default=2 ** 15)
    p.add_argument("--phis", type=float, nargs="+")
    p.add_argument("--j1", type=int, nargs="+")
    p.add_argument("--j2", type=int)
    p.add_argument("--levels", type=float, nargs="+")
    p.add_argument("--ci", choices=("asymptotic", "montecarlo"), default="asymptotic")
    p.add_argument("--method", choices=METHODS, default="gls")
    p.add_argument("--reps", type=int)
    p.add_argument("--inner-reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("select-study", help="j1 selection histogram and RMSE curve")
    _add_model(p, required=False)
    p.set_defaults(variant="max_ar1_frechet", alpha=1.5, n=2 ** 15, phi=0.9)
    p.add_argument("--p", type=float, default=0.01)
    p.add_argument("--b", type=int, default=4)
    p.add_argument("--method", choices=METHODS, default="gls")
    p.add_argument("--reps", type=int, default=500)
    p.add_argument("--seed", type=int)
    p.add_argument("--out-dir")
    p.set_defaults(func=cmd_select_study)

    p = sub.add_parser("sigma1", help="regenerate the Sigma1 covariance table")
    p.add_argument("--ell", type=int, default=15)
    p.add_argument("--mode", choices=("quadrature", "montecarlo"), default="quadrature")
    p.add_argument("--samples", type=int, default=10_000_000)
    p.add_argument("--seed", type=int)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_sigma1)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MaxTailError as exc:
        print(f"maxtail: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stderr.close()
        return 0


if __name__ == "__main__":
    sys.exit(main())
