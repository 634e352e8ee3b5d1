"""Batch experiment driver: configuration, per-run stream fan-out, reports.

Every run ``i`` of a batch uses ``RngStream(seed, stream_id=i)``, so the
outputs depend only on (config, seed) and not on how runs are scheduled
across workers.  Sample files are CSV with fixed columns; reports are
versioned JSON and regenerate byte-identically for a fixed config.
"""

import csv
import dataclasses
import json
import logging
import math
import time as _time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .baselines import euler_bessel_curved, euler_bm_exit
from .boundaries import BesselParams, DecreasingCurve
from .cir import CirParams, cir_boundary, euler_cir, time_change_eta
from .engine import run_a1, run_a2, run_a2_batch, run_a3, run_a4
from .samplers import RngStream

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "RunReport",
    "run_experiment",
    "write_samples_csv",
    "read_samples_csv",
    "TABLE_EPS_GRID",
    "TABLE_NU_GRID",
    "table_versus_eps",
    "table_versus_dimension",
]

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CSV_COLUMNS = ("sample_index", "time", "radial_position", "steps")

ALGORITHMS = ("a1", "a2", "a3", "a4", "cir", "euler-bm", "euler-cir", "euler-bessel-curve")

# Paper-scale reproduction grids for the two step-count tables.
TABLE_EPS_GRID = tuple(10.0 ** -k for k in range(1, 8))
TABLE_NU_GRID = tuple(0.5 * k for k in range(0, 9))


class ConfigError(ValueError):
    """Invalid experiment configuration; message names the offending field."""


@dataclass(frozen=True)
class ExperimentConfig:
    algorithm: str
    n: int
    seed: int
    dim: int = 2
    level: float = 1.0
    x0: float = 0.0
    slope: float = 0.0
    beta0: float = 1.0
    beta1: float = 0.5
    eps: float = 1e-3
    gamma: float = 0.9
    kappa: float = 0.9
    dt: float = 1e-4
    horizon: Optional[float] = None
    cir_a: float = 2.0
    cir_b: float = 0.5
    cir_c: float = 2.0
    workers: int = 1
    out_csv: Optional[str] = None
    out_json: Optional[str] = None

    def validate(self):
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm: unknown value {self.algorithm!r}")
        if self.n < 1:
            raise ConfigError(f"n: must be >= 1, got {self.n}")
        if self.workers < 1:
            raise ConfigError(f"workers: must be >= 1, got {self.workers}")
        if self.dim < 1:
            raise ConfigError(f"dim: must be >= 1, got {self.dim}")
        if self.algorithm in ("a1", "a2", "a3", "a4", "cir") and not (
            0.0 < self.eps < 1e12
        ):
            raise ConfigError(f"eps: must be positive, got {self.eps}")
        if self.algorithm in ("a1", "a2") and not 0.0 < self.gamma < 1.0:
            raise ConfigError(f"gamma: must be in (0,1), got {self.gamma}")
        if self.algorithm in ("a4", "cir") and not 0.0 < self.kappa < 1.0:
            raise ConfigError(f"kappa: must be in (0,1), got {self.kappa}")
        if self.algorithm == "a1" and self.dim != 2:
            raise ConfigError("dim: the planar walk is defined for dim=2 only")
        if self.algorithm in ("a1", "a2", "a3", "euler-bm") and self.level <= 0.0:
            raise ConfigError(f"level: must be positive, got {self.level}")
        if self.algorithm == "a3" and self.slope <= 0.0:
            raise ConfigError(f"slope: must be positive for a3, got {self.slope}")
        if self.algorithm == "a4" and (self.beta0 <= 0.0 or self.beta1 <= 0.0):
            raise ConfigError(
                f"beta0/beta1: must be positive, got ({self.beta0}, {self.beta1})"
            )
        if self.algorithm in ("euler-bm", "euler-cir", "euler-bessel-curve") and (
            self.dt <= 0.0
        ):
            raise ConfigError(f"dt: must be positive, got {self.dt}")
        if self.algorithm in ("cir", "euler-cir"):
            try:
                params = self._cir_params()
            except ValueError as exc:
                raise ConfigError(f"cir parameters: {exc}") from None
            if self.algorithm == "cir":
                try:
                    params.require_walk_route()
                except ValueError as exc:
                    raise ConfigError(f"cir parameters: {exc}") from None
        return self

    def _cir_params(self):
        return CirParams(self.cir_a, self.cir_b, self.cir_c, self.x0, self.level)

    def _horizon(self):
        if self.horizon is not None:
            return self.horizon
        if self.algorithm == "euler-cir":
            # rough mean-hitting-time estimate from the drift ODE, times 20
            p = self._cir_params()
            rate = p.a + p.b * p.l if p.a + p.b * p.l > 0 else p.a
            est = (p.l - p.x0) / max(rate, 1e-6)
            return 20.0 * est
        return 20.0 * self.level ** 2 / self.dim


def _curve(config):
    lvl, slope = config.level, config.slope
    return DecreasingCurve(lambda t: lvl - slope * t, delta_min=slope)


def _curve_array(config):
    if config.algorithm == "euler-bessel-curve":
        if config.slope > 0.0:
            lvl, slope = config.level, config.slope
            return lambda t: np.maximum(lvl - slope * t, 0.0)
        b0, b1 = config.beta0, config.beta1
        return lambda t: np.sqrt(np.maximum(b0 - b1 * t, 0.0))
    raise ConfigError("no curve defined for this algorithm")


def _simulate_one(config, run_index):
    """One run with its own stream; returns (time, radial_position, steps)
    with time = nan for censored Euler runs."""
    rng = RngStream(config.seed, run_index)
    alg = config.algorithm
    if alg == "a1":
        s = run_a1(config.level, config.eps, config.gamma, rng)
        return s.time, s.radial_position, s.steps
    if alg == "a2":
        s = run_a2(BesselParams(config.dim), config.level, config.x0,
                   config.eps, config.gamma, rng)
        return s.time, s.radial_position, s.steps
    if alg == "a3":
        s = run_a3(BesselParams(config.dim), _curve(config), config.eps, rng,
                   x0=config.x0)
        return s.time, s.radial_position, s.steps
    if alg == "a4":
        s = run_a4(BesselParams(config.dim), config.beta0, config.beta1,
                   config.eps, config.kappa, rng, x0=config.x0)
        return s.time, s.radial_position, s.steps
    if alg == "cir":
        params = config._cir_params()
        bessel = params.require_walk_route()
        boundary = cir_boundary(params)
        s = run_a4(bessel, boundary.beta0, boundary.beta1, config.eps,
                   config.kappa, rng, x0=math.sqrt(params.x0))
        return time_change_eta(params, s.time), s.radial_position, s.steps
    if alg == "euler-bm":
        t, pos = euler_bm_exit(config.dim, config.level, config.dt, rng)
        return t, float(np.linalg.norm(pos)), int(round(t / config.dt))
    if alg == "euler-cir":
        t, x = euler_cir(config._cir_params(), config.dt, config._horizon(), rng)
        if t is None:
            return math.nan, x, int(round(config._horizon() / config.dt))
        return t, x, int(round(t / config.dt))
    if alg == "euler-bessel-curve":
        t = euler_bessel_curved(config.dim, _curve_array(config), config.dt,
                                config._horizon(), rng)
        if t is None:
            return math.nan, 0.0, int(round(config._horizon() / config.dt))
        return t, 0.0, int(round(t / config.dt))
    raise ConfigError(f"algorithm: unknown value {alg!r}")


def _run_range(config, start, stop):
    return [_simulate_one(config, i) for i in range(start, stop)]


@dataclass(frozen=True)
class RunReport:
    schema_version: int
    config: dict
    n: int
    n_censored: int
    mean_time: float
    stderr_time: float
    mean_steps: float
    stderr_steps: float
    histogram_edges: list
    histogram_counts: list
    tests: dict = field(default_factory=dict)

    def to_json(self):
        return json.dumps(dataclasses.asdict(self), sort_keys=True, indent=2) + "\n"


def _mean_stderr(values):
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return math.nan, math.nan
    mean = float(v.mean())
    if v.size < 2:
        return mean, math.nan
    return mean, float(v.std(ddof=1) / math.sqrt(v.size))


def _build_report(config, rows):
    times = np.array([r[0] for r in rows])
    steps = np.array([r[2] for r in rows], dtype=float)
    finite = times[np.isfinite(times)]
    n_censored = int(times.size - finite.size)
    mean_t, se_t = _mean_stderr(finite)
    mean_s, se_s = _mean_stderr(steps)
    hi = float(finite.max()) if finite.size else 1.0
    counts, edges = np.histogram(finite, bins=50, range=(0.0, hi if hi > 0 else 1.0))
    return RunReport(
        schema_version=SCHEMA_VERSION,
        config=dataclasses.asdict(config),
        n=config.n,
        n_censored=n_censored,
        mean_time=mean_t,
        stderr_time=se_t,
        mean_steps=mean_s,
        stderr_steps=se_s,
        histogram_edges=[float(e) for e in edges],
        histogram_counts=[int(c) for c in counts],
    )


def write_samples_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for i, (t, pos, steps) in enumerate(rows):
            writer.writerow([i, repr(float(t)), repr(float(pos)), int(steps)])


def read_samples_csv(path):
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header}")
        for rec in reader:
            rows.append((float(rec[1]), float(rec[2]), int(rec[3])))
    return rows


def run_experiment(config):
    """Run a configured batch and return (RunReport, samples).

    Writes CSV samples and the JSON report when output paths are set.
    Samples are ordered by run index regardless of worker count.
    """
    config.validate()
    t0 = _time.perf_counter()
    if config.workers == 1:
        rows = _run_range(config, 0, config.n)
    else:
        n_chunks = min(config.workers * 4, config.n)
        bounds = np.linspace(0, config.n, n_chunks + 1).astype(int)
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            parts = pool.map(
                _run_range,
                [config] * n_chunks,
                bounds[:-1].tolist(),
                bounds[1:].tolist(),
            )
            rows = [row for part in parts for row in part]
    elapsed = _time.perf_counter() - t0
    log.info("experiment %s: n=%d in %.2fs", config.algorithm, config.n, elapsed)
    report = _build_report(config, rows)
    if config.out_csv:
        write_samples_csv(config.out_csv, rows)
    if config.out_json:
        with open(config.out_json, "w") as fh:
            fh.write(report.to_json())
    return report, rows


def table_versus_eps(level=2.0, dim=6, gamma=0.9, n=100_000, seed=20240801,
                     eps_grid=TABLE_EPS_GRID, workers=1):
    """Mean step count of the level walk for each precision on the grid.

    Uses the lockstep batch runner; ``workers`` is accepted for interface
    symmetry but the batch path is single-process.
    """
    means = []
    for k, eps in enumerate(eps_grid):
        rng = RngStream(seed + k, 0)
        _, _, steps = run_a2_batch(BesselParams(dim), level, eps, gamma, rng, n)
        means.append(float(steps.mean()))
    return list(eps_grid), means


def table_versus_dimension(level=2.0, eps=1e-3, gamma=0.9, n=50_000,
                           seed=20240802, nu_grid=TABLE_NU_GRID, workers=1):
    """Mean step count of the level walk for each index on the grid."""
    means = []
    for k, nu in enumerate(nu_grid):
        dim = int(round(2.0 * nu + 2.0))
        rng = RngStream(seed + k, 0)
        _, _, steps = run_a2_batch(BesselParams(dim), level, eps, gamma, rng, n)
        means.append(float(steps.mean()))
    return list(nu_grid), means
