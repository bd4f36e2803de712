"""Seeded Monte Carlo experiments, log-log exponent fits and flat-file reports.

Each (n, m, trial) cell draws its own stream ``Seed(seed).split(n, m, trial)``.
Results therefore do not depend on grid order, worker count or scheduling.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .analysis import borgwardt_bound, facet_constant
from .errors import (
    ExperimentAbortedError,
    InsufficientGridError,
    RandpolyError,
    ThresholdUnattainableError,
    ValidationError,
)
from .geometry import solve_delta
from .hull import beneath_beyond, hausdorff_to_sphere
from .sampler import Seed, sample_polytope, sample_sphere_points
from .shadow import LPInstance, section_edge_count, solve_shadow_vertex

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentRecord",
    "ExponentFit",
    "trial_seed",
    "measure_trial",
    "reference_value",
    "run_experiment",
    "fit_exponent",
    "format_report",
    "emit_report",
    "parse_report_csv",
    "worker_count",
]

log = logging.getLogger(__name__)

EXPERIMENTS = ("facets", "shadow-pivots", "beneath-beyond-cost", "hausdorff", "section-edges")
CSV_COLUMNS = ("experiment", "n", "m", "trials", "mean", "std", "min", "max", "reference", "seconds")
MAX_FAILURE_RATE = 0.01


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n: int
    m_grid: tuple
    trials: int
    seed: int = 0
    output_path: str | None = None
    timing: bool = False
    workers: int | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValidationError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if int(self.n) != self.n or self.n < 2:
            raise ValidationError(f"n must be an integer >= 2, got {self.n!r}")
        grid = tuple(int(m) for m in self.m_grid)
        if not grid:
            raise ValidationError("m-grid must not be empty")
        if len(set(grid)) != len(grid):
            raise ValidationError(f"m-grid has duplicates: {grid}")
        if min(grid) < self.n + 1:
            raise ValidationError(f"m-grid entries must be >= n+1 = {self.n + 1}")
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValidationError(f"trials must be >= 1, got {self.trials!r}")
        object.__setattr__(self, "m_grid", grid)
        Seed(self.seed)


@dataclass(frozen=True)
class ExperimentRecord:
    experiment: str
    n: int
    m: int
    trials: int
    mean: float
    std: float
    min: float
    max: float
    reference: float
    seconds: float = 0.0
    failures: int = 0
    errors: tuple = field(default=(), compare=False)


@dataclass(frozen=True)
class ExponentFit:
    exponent: float
    intercept: float
    r_squared: float


def trial_seed(seed, n, m, trial):
    return Seed(int(seed)).split(n, m, trial)


def measure_trial(experiment, n, m, seed):
    """The statistic for one random instance; ``seed`` is the trial's stream."""
    cloud = sample_polytope(n, m, seed)
    aux = seed.split(1).generator()
    if experiment == "shadow-pivots":
        v = sample_sphere_points(n, 1, aux)[0]
        return float(solve_shadow_vertex(LPInstance(cloud, v)).total_pivots)
    P, stats = beneath_beyond(cloud)
    if experiment == "facets":
        return float(len(P))
    if experiment == "beneath-beyond-cost":
        return float(stats.sidedness_tests)
    if experiment == "hausdorff":
        return hausdorff_to_sphere(P)
    if experiment == "section-edges":
        u, v = sample_sphere_points(n, 2, aux)
        return float(section_edge_count(P, u, v).edge_count)
    raise ValidationError(f"unknown experiment {experiment!r}")


def reference_value(experiment, n, m):
    """What each statistic is compared against in reports.

    facets: F_n m; shadow-pivots: Borgwardt's bound; beneath-beyond-cost:
    F_n m (m - 1) / 2, the test count if every intermediate hull had its
    limiting facet count; hausdorff: the cap height with fraction
    2 (n+1) log m / m (NaN if unattainable); section-edges: m^(1/(n-1)).
    """
    if experiment == "facets":
        return facet_constant(n).value * m
    if experiment == "shadow-pivots":
        return borgwardt_bound(n, m).value
    if experiment == "beneath-beyond-cost":
        return facet_constant(n).value * m * (m - 1) / 2.0
    if experiment == "hausdorff":
        try:
            return solve_delta(n, m, 2 * (n + 1))
        except ThresholdUnattainableError:
            return math.nan
    if experiment == "section-edges":
        return m ** (1.0 / (n - 1))
    raise ValidationError(f"unknown experiment {experiment!r}")


def _run_one(args):
    experiment, n, m, seed_value, trial = args
    try:
        return measure_trial(experiment, n, m, trial_seed(seed_value, n, m, trial)), None
    except RandpolyError as exc:
        return None, f"trial {trial}: {type(exc).__name__}: {exc}"


def worker_count(requested=None):
    if requested is not None:
        return max(1, int(requested))
    cap = os.environ.get("RANDPOLY_THREADS")
    avail = os.cpu_count() or 1
    if cap:
        try:
            return max(1, min(avail, int(cap)))
        except ValueError:
            raise ValidationError(f"RANDPOLY_THREADS must be an integer, got {cap!r}") from None
    return avail


def run_experiment(cfg):
    """Run every (m, trial) cell of ``cfg`` and aggregate one record per m.

    Trial failures from degenerate geometry are logged and counted; a cell
    with more than 1% failed trials aborts the run.  Writes a report to
    ``cfg.output_path`` when one is set (JSON if it ends in ``.json``).
    """
    workers = worker_count(cfg.workers)
    records = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for m in cfg.m_grid:
            jobs = [(cfg.experiment, cfg.n, m, cfg.seed, t) for t in range(cfg.trials)]
            start = time.perf_counter()
            if pool is None:
                results = [_run_one(j) for j in jobs]
            else:
                results = list(pool.map(_run_one, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
            elapsed = time.perf_counter() - start
            values = np.array([r for r, _ in results if r is not None])
            errors = tuple(e for _, e in results if e is not None)
            for e in errors:
                log.warning("%s n=%d m=%d %s", cfg.experiment, cfg.n, m, e)
            if len(errors) > MAX_FAILURE_RATE * cfg.trials:
                raise ExperimentAbortedError(
                    f"{len(errors)} of {cfg.trials} trials failed at n={cfg.n}, m={m}: {errors[0]}"
                )
            records.append(
                ExperimentRecord(
                    experiment=cfg.experiment,
                    n=cfg.n,
                    m=m,
                    trials=cfg.trials,
                    mean=float(np.mean(values)),
                    std=float(np.std(values, ddof=1)) if len(values) > 1 else 0.0,
                    min=float(values.min()),
                    max=float(values.max()),
                    reference=float(reference_value(cfg.experiment, cfg.n, m)),
                    seconds=elapsed if cfg.timing else 0.0,
                    failures=len(errors),
                    errors=errors,
                )
            )
    finally:
        if pool is not None:
            pool.shutdown()
    if cfg.output_path:
        fmt = "json" if str(cfg.output_path).endswith(".json") else "csv"
        fit = None
        if len({r.m for r in records}) >= 3:
            fit = fit_exponent(records)
        emit_report(records, fit, fmt, cfg.output_path)
    return records


def fit_exponent(records):
    """Least-squares slope of log(mean) against log(m)."""
    ms = np.array([r.m for r in records], dtype=float)
    means = np.array([r.mean for r in records], dtype=float)
    if len(set(ms.tolist())) < 3:
        raise InsufficientGridError("insufficient-grid: need at least 3 distinct m values")
    if not np.all(means > 0):
        raise InsufficientGridError("insufficient-grid: all means must be positive")
    x, y = np.log(ms), np.log(means)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return ExponentFit(float(slope), float(intercept), min(1.0, max(0.0, r2)))


def _num(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.12g}"


def _round12(x):
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return float(f"{x:.12g}") if math.isfinite(x) else None


def format_report(records, fit=None, fmt="csv"):
    if not records:
        raise ValidationError("nonempty-required: no records to report")
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(CSV_COLUMNS) + "\n")
        for r in records:
            buf.write(",".join([r.experiment] + [_num(getattr(r, c)) for c in CSV_COLUMNS[1:]]) + "\n")
        return buf.getvalue()
    if fmt == "json":
        rows = []
        for r in records:
            row = {c: (r.experiment if c == "experiment" else _round12(getattr(r, c))) for c in CSV_COLUMNS}
            row["failures"] = r.failures
            rows.append(row)
        payload = {"records": rows, "fit": None}
        if fit is not None:
            payload["fit"] = {k: _round12(v) for k, v in asdict(fit).items()}
        return json.dumps(payload, indent=2) + "\n"
    raise ValidationError(f"unknown report format {fmt!r}")


def emit_report(records, fit, fmt, path):
    """Write a CSV or JSON report to ``path``."""
    text = format_report(records, fit, fmt)
    try:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write report to {path}: {exc.strerror}") from exc
    return path


def parse_report_csv(text):
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for row in reader:
        out.append(
            ExperimentRecord(
                experiment=row["experiment"],
                n=int(row["n"]),
                m=int(row["m"]),
                trials=int(row["trials"]),
                **{c: float(row[c]) for c in ("mean", "std", "min", "max", "reference", "seconds")},
            )
        )
    return out
