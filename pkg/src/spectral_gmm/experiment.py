"""Monte Carlo replications of the clustering pipeline against the theoretical bracket.

Replication ``r`` draws its data from
``default_rng(mix64(master_seed ^ (r * GOLDEN) mod 2**64))`` so any single
replication can be reproduced from the config alone, and results do not
depend on how replications are scheduled across threads.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import bounds, cluster, linalg
from .bounds import BoundReport, Constants
from .cluster import AlignmentMode
from .errors import AlignmentUndefined, AllReplicationsDegenerate, ConfigError, NoConvergence
from .model import sample_arrays
from .scenarios import model_from_spec

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

CSV_COLUMNS = (
    "scenario", "n", "m", "reps", "master_seed", "eta", "center_A", "delta", "alpha_min",
    "feasible", "theorem_lower", "theorem_upper", "lemma_lower", "lemma_upper",
    "corollary_ratio", "large_mn_ratio", "cz18_ratio", "logm_over_n", "emp_miss_rate",
    "emp_miss_se", "emp_allcorrect", "emp_misc1x_mean", "degenerate_reps", "wall_ms", "error",
)


def mix64(z: int) -> int:
    """splitmix64 finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def replication_seed(master_seed: int, rep_index: int) -> int:
    return mix64((master_seed & MASK64) ^ ((rep_index * GOLDEN) & MASK64))


CONFIG_KEYS = {"model", "m", "reps", "seed", "align", "constants", "eig_tol", "eig_max_iter",
               "out", "format"}


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    model: dict
    m: int
    reps: int = 1
    seed: int = 0
    align: AlignmentMode = AlignmentMode.ORACLE_SIGMA
    constants: Constants = field(default_factory=Constants)
    eig_tol: float = 1e-12
    # near the detection threshold the spectral gap of S_m can need >10^4 sweeps
    eig_max_iter: int = 100_000

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise ConfigError(f"m must be an integer >= 2, got {self.m!r}")
        if not isinstance(self.reps, int) or self.reps < 1:
            raise ConfigError(f"reps must be an integer >= 1, got {self.reps!r}")
        if not isinstance(self.align, AlignmentMode):
            object.__setattr__(self, "align", AlignmentMode(self.align))
        # expand presets now so a bad model fails before any replication runs
        _ = self.prepared

    @cached_property
    def prepared(self):
        model, scenario = model_from_spec(self.model)
        ref, used = cluster.reference_direction(model, self.align)
        return model, scenario, ref, used

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        unknown = set(d) - CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "model" not in d or "m" not in d:
            raise ConfigError("config needs at least 'model' and 'm'")
        kwargs = {k: d[k] for k in ("model", "m", "reps", "seed", "eig_tol", "eig_max_iter") if k in d}
        if "align" in d:
            kwargs["align"] = AlignmentMode(d["align"])
        if "constants" in d:
            kwargs["constants"] = Constants.from_dict(d["constants"])
        return cls(**kwargs)

    def to_dict(self) -> dict:
        return {
            "model": self.model, "m": self.m, "reps": self.reps, "seed": self.seed,
            "align": self.align.value, "constants": self.constants.to_dict(),
            "eig_tol": self.eig_tol, "eig_max_iter": self.eig_max_iter,
        }


@dataclass(frozen=True)
class ReplicationRecord:
    rep_index: int
    seed: int
    degenerate: bool
    reason: str = ""
    misclustered: int = 0
    miss_pos: int = 0
    miss_neg: int = 0
    n_pos: int = 0
    n_neg: int = 0

    @property
    def misses(self) -> int:
        return self.miss_pos + self.miss_neg

    @property
    def all_correct(self) -> bool:
        return not self.degenerate and self.misses == 0


def run_replication(config: ExperimentConfig, rep_index: int) -> ReplicationRecord:
    """One draw of ``m`` points, clustered and scored against the true labels.

    Conditional miss counts use the configured sign alignment; under
    label-free alignment they use whichever global sign disagrees less, so
    they add up to the min-of-two-sums count.
    """
    model, _, ref, _ = config.prepared
    seed = replication_seed(config.seed, rep_index)
    x, theta = sample_arrays(model, config.m, seed)
    try:
        pair = linalg.leading_eigenpair(cluster.second_moment(x), tol=config.eig_tol,
                                        max_iter=config.eig_max_iter, seed=seed)
        gamma = cluster.align_to(pair.vector, ref)
    except (NoConvergence, AlignmentUndefined) as exc:
        return ReplicationRecord(rep_index, seed, True, reason=f"{type(exc).__name__}: {exc}")
    predictions, _ = cluster.classify_all(gamma, x)
    misclustered = cluster.misclustered_count(predictions, theta)
    if ref is None and np.count_nonzero(predictions != theta) > misclustered:
        predictions = -predictions
    wrong = predictions != theta
    pos = theta == 1
    return ReplicationRecord(
        rep_index, seed, False,
        misclustered=misclustered,
        miss_pos=int(np.count_nonzero(wrong & pos)),
        miss_neg=int(np.count_nonzero(wrong & ~pos)),
        n_pos=int(np.count_nonzero(pos)),
        n_neg=int(np.count_nonzero(~pos)),
    )


def _rate(k, total):
    return k / total if total else math.nan


def _se(p, total):
    return math.sqrt(p * (1.0 - p) / total) if total else math.nan


@dataclass(frozen=True)
class ExperimentResult:
    config: ExperimentConfig
    scenario: str
    n: int
    alignment_used: AlignmentMode
    records: tuple
    report: BoundReport
    wall_ms: float

    @cached_property
    def good(self) -> tuple:
        return tuple(r for r in self.records if not r.degenerate)

    @property
    def degenerate_reps(self) -> int:
        return len(self.records) - len(self.good)

    @property
    def miss_pos(self) -> int:
        return sum(r.miss_pos for r in self.good)

    @property
    def miss_neg(self) -> int:
        return sum(r.miss_neg for r in self.good)

    @property
    def n_pos(self) -> int:
        return sum(r.n_pos for r in self.good)

    @property
    def n_neg(self) -> int:
        return sum(r.n_neg for r in self.good)

    @property
    def events(self) -> int:
        return self.n_pos + self.n_neg

    @property
    def miss_rate(self) -> float:
        return _rate(self.miss_pos + self.miss_neg, self.events)

    @property
    def miss_se(self) -> float:
        return _se(self.miss_rate, self.events)

    @property
    def miss_rate_pos(self) -> float:
        return _rate(self.miss_pos, self.n_pos)

    @property
    def miss_rate_neg(self) -> float:
        return _rate(self.miss_neg, self.n_neg)

    @property
    def allcorrect(self) -> float:
        return _rate(sum(r.all_correct for r in self.good), len(self.good))

    @property
    def misc1x_mean(self) -> float:
        return _rate(sum(r.misclustered for r in self.good), len(self.good))

    def row(self, wall_time: bool = False) -> dict:
        rep = self.report
        return {
            "scenario": self.scenario, "n": self.n, "m": self.config.m, "reps": self.config.reps,
            "master_seed": self.config.seed, "eta": rep.eta, "center_A": rep.center_A,
            "delta": rep.delta, "alpha_min": rep.alpha_min, "feasible": rep.feasible,
            "theorem_lower": rep.theorem_lower, "theorem_upper": rep.theorem_upper,
            "lemma_lower": rep.lemma_lower, "lemma_upper": rep.lemma_upper,
            "corollary_ratio": rep.corollary_ratio, "large_mn_ratio": rep.large_mn_ratio,
            "cz18_ratio": rep.cz18_ratio, "logm_over_n": rep.logm_over_n,
            "emp_miss_rate": self.miss_rate, "emp_miss_se": self.miss_se,
            "emp_allcorrect": self.allcorrect, "emp_misc1x_mean": self.misc1x_mean,
            "degenerate_reps": self.degenerate_reps,
            "wall_ms": self.wall_ms if wall_time else None, "error": None,
        }

    def to_json(self, wall_time: bool = False) -> dict:
        return {
            "config": self.config.to_dict(),
            "scenario": self.scenario,
            "n": self.n,
            "alignment_used": self.alignment_used.value,
            "summary": self.row(wall_time),
            "conditional": {
                "miss_pos": self.miss_pos, "n_pos": self.n_pos, "rate_pos": self.miss_rate_pos,
                "miss_neg": self.miss_neg, "n_neg": self.n_neg, "rate_neg": self.miss_rate_neg,
            },
            "bound_report": self.report.to_dict(),
            "replications": [
                {"rep_index": r.rep_index, "seed": r.seed, "degenerate": r.degenerate,
                 "reason": r.reason, "misclustered": r.misclustered, "miss_pos": r.miss_pos,
                 "miss_neg": r.miss_neg, "n_pos": r.n_pos, "n_neg": r.n_neg,
                 "all_correct": r.all_correct}
                for r in self.records
            ],
        }


def run_experiment(config: ExperimentConfig, workers: int = 1) -> ExperimentResult:
    start = time.perf_counter()
    model, scenario, _, used = config.prepared
    report = bounds.bound_report(model, config.m, config.constants)
    if workers <= 1:
        records = [run_replication(config, r) for r in range(config.reps)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(lambda r: run_replication(config, r), range(config.reps)))
    if all(r.degenerate for r in records):
        raise AllReplicationsDegenerate(f"all {config.reps} replications were degenerate: {records[0].reason}")
    wall_ms = (time.perf_counter() - start) * 1000.0
    return ExperimentResult(config, scenario, model.n, used, tuple(records), report, wall_ms)


def format_value(v) -> str:
    """CSV cell text: shortest round-trip floats, lowercase booleans, blanks for None."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)
