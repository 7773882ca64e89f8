"""Command line entry point: ``spectral-gmm {bound,simulate,sweep,eig}``."""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import linalg
from .bounds import Constants, bound_report
from .errors import SpectralGMMError
from .experiment import CSV_COLUMNS, ExperimentConfig, format_value, run_experiment
from .scenarios import SCENARIOS, model_from_spec
from .sweep import load_grid, run_sweep


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _dump(obj, stream):
    json.dump(_jsonable(obj), stream, indent=2, sort_keys=False)
    stream.write("\n")


def _read_json(path):
    with open(path) as fh:
        return json.load(fh)


def _parse_param(text):
    key, sep, raw = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _model_spec(args, fallback=None):
    if args.model and args.scenario:
        raise SpectralGMMError("use either --model or --scenario")
    if args.model:
        return _read_json(args.model)
    if args.scenario:
        return {"scenario": args.scenario, "params": dict(args.param or [])}
    if fallback is not None:
        return fallback
    raise SpectralGMMError("a model is required: --model FILE or --scenario NAME")


def _constants(path):
    if path is None:
        return None
    d = _read_json(path)
    if set(d) == {"constants"}:
        d = d["constants"]
    return Constants.from_dict(d)


def _add_model_args(p):
    p.add_argument("--model", help="model JSON file (inline matrices or scenario preset)")
    p.add_argument("--scenario", choices=sorted(SCENARIOS), help="build the model from a preset")
    p.add_argument("--param", action="append", type=_parse_param, metavar="KEY=VALUE",
                   help="preset parameter, value parsed as JSON (repeatable)")
    p.add_argument("--constants", help='JSON file {"constants": {"c":..,"C":..,"K":..,"K_g":..}}')


def cmd_bound(args, out):
    model, scenario = model_from_spec(_model_spec(args))
    constants = _constants(args.constants) or Constants()
    alpha = "min" if args.alpha is None else args.alpha
    report = bound_report(model, args.m, constants, alpha)
    _dump({"scenario": scenario, "n": model.n, "m": args.m, **report.to_dict()}, out)


def cmd_simulate(args, out):
    base = _read_json(args.config) if args.config else {}
    for key in ("out", "format"):
        base.pop(key, None)
    base["model"] = _model_spec(args, base.get("model"))
    for key in ("m", "reps", "seed", "align"):
        value = getattr(args, key)
        if value is not None:
            base[key] = value
    constants = _constants(args.constants)
    if constants is not None:
        base["constants"] = constants.to_dict()
    config = ExperimentConfig.from_dict(base)
    result = run_experiment(config, workers=args.workers)
    if args.format == "json":
        _dump(result.to_json(args.wall_time), out)
    else:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        row = result.row(args.wall_time)
        writer.writerow([format_value(row[c]) for c in CSV_COLUMNS])


def cmd_sweep(args, out):
    rows = run_sweep(load_grid(args.grid), out, workers=args.workers, wall_time=args.wall_time)
    failed = sum(1 for r in rows if r["error"])
    if failed:
        print(f"{failed} of {len(rows)} cells failed", file=sys.stderr)


def _load_matrix(path):
    path = Path(path)
    if path.suffix == ".npy":
        return np.load(path)
    text = path.read_text()
    try:
        return np.array(json.loads(text), dtype=float)
    except json.JSONDecodeError:
        return np.loadtxt(path, ndmin=2)


def cmd_eig(args, out):
    a = linalg.sym_matrix(_load_matrix(args.matrix))
    pair = linalg.leading_eigenpair(a, tol=args.tol, max_iter=args.max_iter, seed=args.seed,
                                    check_gap=not args.no_gap_check)
    resid = float(np.linalg.norm(a @ pair.vector - pair.value * pair.vector))
    _dump({"value": pair.value, "vector": pair.vector, "residual": resid}, out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectral-gmm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="print the closed-form bound report for a model")
    _add_model_args(p)
    p.add_argument("--m", type=int, required=True, help="sample size")
    p.add_argument("--alpha", type=float, help="evaluate brackets at this alpha instead of the minimal one")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("simulate", help="Monte Carlo experiment for one model")
    p.add_argument("--config", help="experiment JSON; command line flags override its values")
    _add_model_args(p)
    p.add_argument("--m", type=int)
    p.add_argument("--reps", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--align", choices=["oracle", "mean", "label-free"])
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--workers", type=int, default=1, help="threads over replications")
    p.add_argument("--wall-time", action="store_true",
                   help="fill wall_ms (makes output run-dependent)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a grid of experiments to CSV")
    p.add_argument("--grid", required=True)
    p.add_argument("--out", help="output CSV (default stdout)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--wall-time", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("eig", help="leading eigenpair of a symmetric matrix file (JSON, .npy or text)")
    p.add_argument("matrix")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-gap-check", action="store_true")
    p.set_defaults(func=cmd_eig)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out_path = getattr(args, "out", None)
    try:
        if out_path:
            with open(out_path, "w", newline="") as fh:
                args.func(args, fh)
        else:
            args.func(args, sys.stdout)
    except (SpectralGMMError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
