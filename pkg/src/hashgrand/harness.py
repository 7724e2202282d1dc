"""Monte-Carlo block error rate sweeps.

Every trial draws its own generator from ``SeedSequence([seed, point, trial])``,
so a sweep's counts depend only on its configuration, never on how trials
are spread over worker processes.
"""
import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .bits import BitVector
from .channel import ChannelParams, transmit
from .codes import FAMILIES, SystematicCode
from .grand import GrandConfig, grand_decode

CSV_HEADER = ("family", "k", "n", "ebn0_db", "trials", "block_errors",
              "abandonments", "bler", "avg_queries", "seed")
# trials per work unit; also the granularity of early stopping
BATCH_SIZE = 250
WILSON_Z95 = 1.959963984540054


class SweepConfigError(ValueError):
    pass


class HarnessIOError(OSError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    family: str
    k: int
    n: int
    ebn0_grid: tuple
    trials_per_point: int
    max_weight: int = 6
    seed: int = 0
    workers: int = 1
    noiseless_digest: bool = False
    max_queries: int | None = None
    early_stop_errors: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "ebn0_grid", tuple(float(x) for x in self.ebn0_grid))
        if self.family not in FAMILIES:
            raise SweepConfigError(f"unknown family {self.family!r}")
        if not 0 < self.k < self.n:
            raise SweepConfigError(f"need 0 < k < n, got k={self.k}, n={self.n}")
        if self.trials_per_point < 1:
            raise SweepConfigError("trials_per_point must be at least 1")
        if any(b <= a for a, b in zip(self.ebn0_grid, self.ebn0_grid[1:])):
            raise SweepConfigError("ebn0_grid must be strictly increasing")
        if any(not math.isfinite(x) for x in self.ebn0_grid):
            raise SweepConfigError("ebn0_grid values must be finite")
        if self.max_weight < 0:
            raise SweepConfigError("max_weight must be non-negative")
        if not 0 <= self.seed < 2 ** 64:
            raise SweepConfigError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise SweepConfigError("workers must be at least 1")
        if self.early_stop_errors is not None and self.early_stop_errors < 1:
            raise SweepConfigError("early_stop_errors must be at least 1")

    @property
    def rate(self):
        return self.k / self.n

    def grand_config(self):
        return GrandConfig(self.max_weight, self.max_queries)


@dataclass
class BlerPoint:
    family: str
    k: int
    n: int
    ebn0_db: float
    sigma: float
    seed: int
    trials: int = 0
    block_errors: int = 0
    abandonments: int = 0
    undetected_errors: int = 0
    total_queries: int = 0
    wallclock_seconds: float = field(default=0.0, compare=False)

    @property
    def bler(self):
        return self.block_errors / self.trials if self.trials else 0.0

    @property
    def avg_queries(self):
        return self.total_queries / self.trials if self.trials else 0.0

    def wilson_interval(self, z=WILSON_Z95):
        return wilson_interval(self.block_errors, self.trials, z)


@dataclass(frozen=True)
class TrialOutcome:
    status: str  # "success", "error" (verified on a wrong message) or "abandoned"
    queries: int
    flips: int


def wilson_interval(errors, trials, z=WILSON_Z95):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = errors / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if errors == 0 else max(0.0, centre - half)
    hi = 1.0 if errors == trials else min(1.0, centre + half)
    return lo, hi


def intervals_overlap(a, b):
    return a[0] <= b[1] and b[0] <= a[1]


def trial_rng(seed, point_index, trial_index):
    return np.random.default_rng(np.random.SeedSequence([seed, point_index, trial_index]))


def run_trial(code, params, cfg, rng, noiseless_digest=False):
    """Send one uniformly random message and decode it."""
    m = BitVector.random(code.k, rng)
    obs = transmit(code.encode(m), params, rng, k=code.k, noiseless_digest=noiseless_digest)
    result = grand_decode(obs.y, obs.z, code, cfg)
    if result.abandoned:
        status = "abandoned"
    elif result.message == m:
        status = "success"
    else:
        status = "error"
    return TrialOutcome(status, result.queries, obs.flips)


@lru_cache(maxsize=8)
def _cached_code(family, k, n, seed):
    return SystematicCode(family, k, n, seed)


def _run_batch(config, params, point_index, start, stop):
    code = _cached_code(config.family, config.k, config.n, config.seed)
    cfg = config.grand_config()
    errors = abandoned = undetected = queries = 0
    for trial_index in range(start, stop):
        out = run_trial(code, params, cfg, trial_rng(config.seed, point_index, trial_index),
                        config.noiseless_digest)
        queries += out.queries
        if out.status != "success":
            errors += 1
            abandoned += out.status == "abandoned"
            undetected += out.status == "error"
    return stop - start, errors, abandoned, undetected, queries


def run_point(config, params, point_index=0, executor=None):
    """Run ``config.trials_per_point`` trials at one channel setting."""
    point = BlerPoint(config.family, config.k, config.n, params.ebn0_db, params.sigma, config.seed)
    bounds = [(s, min(s + BATCH_SIZE, config.trials_per_point))
              for s in range(0, config.trials_per_point, BATCH_SIZE)]
    tic = time.perf_counter()
    if executor is None:
        results = (_run_batch(config, params, point_index, s, e) for s, e in bounds)
    else:
        results = executor.map(_run_batch, *zip(*[(config, params, point_index, s, e) for s, e in bounds]))
    for trials, errors, abandoned, undetected, queries in results:
        point.trials += trials
        point.block_errors += errors
        point.abandonments += abandoned
        point.undetected_errors += undetected
        point.total_queries += queries
        if config.early_stop_errors is not None and point.block_errors >= config.early_stop_errors:
            break
    point.wallclock_seconds = time.perf_counter() - tic
    return point


def run_sweep(config, progress=None):
    """One :class:`BlerPoint` per Eb/N0 value of the grid."""
    points = []
    executor = ProcessPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        for index, ebn0 in enumerate(config.ebn0_grid):
            point = run_point(config, ChannelParams.from_ebn0(ebn0, config.rate), index, executor)
            points.append(point)
            if progress is not None:
                progress(point)
    finally:
        if executor is not None:
            executor.shutdown(cancel_futures=True)
    return points


def _fmt(x):
    return format(x, ".6g")


def csv_text(points):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for p in points:
        writer.writerow([p.family, p.k, p.n, _fmt(p.ebn0_db), p.trials, p.block_errors,
                         p.abandonments, _fmt(p.bler), _fmt(p.avg_queries), p.seed])
    return buf.getvalue()


def write_csv(points, path):
    try:
        with open(path, "w", newline="") as fh:
            fh.write(csv_text(points))
    except OSError as exc:
        raise HarnessIOError(f"cannot write {path}: {exc.strerror or exc}") from exc


def read_csv(path):
    try:
        with open(path, newline="") as fh:
            return list(csv.DictReader(fh))
    except OSError as exc:
        raise HarnessIOError(f"cannot read {path}: {exc.strerror or exc}") from exc


def emit_summary(points):
    lines = [f"{'family':>7} {'k':>4} {'n':>4} {'Eb/N0':>6} {'trials':>7} {'errors':>6} "
             f"{'aband':>6} {'undet':>5} {'BLER':>10} {'95% Wilson':>23} {'avg q':>10} {'sec':>7}"]
    for p in points:
        lo, hi = p.wilson_interval() if p.trials else (0.0, 1.0)
        lines.append(
            f"{p.family:>7} {p.k:>4} {p.n:>4} {p.ebn0_db:>6.2f} {p.trials:>7} {p.block_errors:>6} "
            f"{p.abandonments:>6} {p.undetected_errors:>5} {p.bler:>10.3e} "
            f"[{lo:.3e}, {hi:.3e}] {p.avg_queries:>10.4g} {p.wallclock_seconds:>7.1f}")
    return "\n".join(lines)
