"""Grid sweeps: one experiment per cell, one CSV row per cell in grid order.

Grid file::

    {
      "base": {"model": {"scenario": "isotropic", "params": {"n": 20}}, "m": 100, "reps": 50, "seed": 7},
      "axes": {"n": [20, 40], "m": [100, 400]}
    }

Axis names that are experiment keys (``m``, ``reps``, ``seed``) set the
config; anything else sets a scenario parameter. The first axis varies slowest.
"""
from __future__ import annotations

import copy
import csv
import io
import itertools
import json
from typing import Iterator, TextIO

from .errors import ConfigError
from .experiment import CSV_COLUMNS, ExperimentConfig, format_value, run_experiment

GRID_KEYS = {"base", "axes"}
CONFIG_AXES = {"m", "reps", "seed"}


def expand_grid(grid: dict) -> list[dict]:
    """Cell config dicts in row-major order over ``axes``."""
    unknown = set(grid) - GRID_KEYS
    if unknown:
        raise ConfigError(f"unknown grid keys: {sorted(unknown)}")
    base = grid.get("base")
    axes = grid.get("axes", {})
    if not isinstance(base, dict) or not isinstance(axes, dict):
        raise ConfigError("grid needs a 'base' config object and an 'axes' object")
    names = list(axes)
    for name in names:
        if not isinstance(axes[name], list) or not axes[name]:
            raise ConfigError(f"axis {name!r} must be a non-empty list")
        if name not in CONFIG_AXES and "scenario" not in base.get("model", {}):
            raise ConfigError(f"axis {name!r} is a scenario parameter but the base model is inline")
    cells = []
    for values in itertools.product(*(axes[k] for k in names)):
        cell = copy.deepcopy(base)
        for name, value in zip(names, values):
            if name in CONFIG_AXES:
                cell[name] = value
            else:
                cell["model"].setdefault("params", {})[name] = value
        cells.append(cell)
    return cells


def _error_row(cell: dict, exc: Exception) -> dict:
    row = dict.fromkeys(CSV_COLUMNS)
    model = cell.get("model", {}) if isinstance(cell.get("model"), dict) else {}
    row["scenario"] = model.get("scenario", "custom")
    row["n"] = model.get("params", {}).get("n") if "scenario" in model else len(model.get("mu", []))
    row["m"] = cell.get("m")
    row["reps"] = cell.get("reps", 1)
    row["master_seed"] = cell.get("seed", 0)
    row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def iter_rows(grid: dict, workers: int = 1, wall_time: bool = False) -> Iterator[dict]:
    """Run each cell in turn; a failing cell yields a row with only ``error`` set."""
    for cell in expand_grid(grid):
        try:
            result = run_experiment(ExperimentConfig.from_dict(cell), workers=workers)
        except Exception as exc:  # recorded per cell; the sweep continues
            yield _error_row(cell, exc)
            continue
        yield result.row(wall_time)


def write_rows(rows, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in CSV_COLUMNS])
        stream.flush()


def run_sweep(grid: dict, out: TextIO | None = None, workers: int = 1, wall_time: bool = False) -> list[dict]:
    rows = []

    def tee():
        for row in iter_rows(grid, workers, wall_time):
            rows.append(row)
            yield row

    write_rows(tee(), out if out is not None else io.StringIO())
    return rows


def load_grid(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
