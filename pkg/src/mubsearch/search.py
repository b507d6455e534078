"""Multi-start search: many seeded LM runs of the non-unbiasedness objective."""
from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .haar import GENERATOR_ID, Rng, haar_unitary, trial_seed
from .linalg import MatrixError, NumericalError
from .lm import LmOptions, Termination, lm_minimize
from .objective import MubResiduals
from .unitary import hermitian_to_params, log_unitary

__all__ = [
    "SearchConfig",
    "TrialResult",
    "SearchReport",
    "HistogramBin",
    "SCHEMA_VERSION",
    "TRIAL_FIELDS",
    "starting_point",
    "run_trial",
    "run_search",
    "histogram",
    "write_trials_csv",
    "read_trials_csv",
]

SCHEMA_VERSION = 1
TRIAL_FIELDS = ("trial_id", "seed", "d", "n_bases", "objective_final",
                "iterations", "termination", "success", "wall_time_ms")
SEED_RULE = "seed_i = base_seed XOR (0x9E3779B97F4A7C15 * i mod 2**64)"


@dataclass(frozen=True)
class SearchConfig:
    d: int
    n_bases: int
    trials: int
    base_seed: int = 0
    success_threshold: float = 1e-6
    lm_options: LmOptions = field(default_factory=LmOptions)
    parallelism: int = 1
    bin_width: float = 0.005

    def __post_init__(self):
        if self.d < 2:
            raise ValueError("d must be at least 2")
        if self.n_bases < 1:
            raise ValueError("n_bases must be at least 1")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")
        if not self.success_threshold > 0 or not self.bin_width > 0:
            raise ValueError("success_threshold and bin_width must be positive")


@dataclass(frozen=True)
class TrialResult:
    trial_id: int
    seed: int
    objective_final: float
    iterations: int
    termination: str
    success: bool
    wall_time_ms: int = field(default=0, compare=False)


class HistogramBin(NamedTuple):
    """Count of values in the half-open interval ``[lower, upper)``."""

    lower: float
    upper: float
    count: int

    @property
    def center(self) -> float:
        return 0.5 * (self.lower + self.upper)


def histogram(minima, bin_width: float = 0.005, origin: float = 0.0) -> list[HistogramBin]:
    """Count values in bins ``[origin + i w, origin + (i + 1) w)``.

    Bins run contiguously from the one holding the smallest value to the one
    holding the largest, empty bins included.
    """
    if not bin_width > 0:
        raise ValueError("bin_width must be positive")
    values = np.asarray(minima, dtype=np.float64).ravel()
    if values.size == 0:
        return []
    if not np.all(np.isfinite(values)):
        raise ValueError("cannot bin non-finite values")
    idx = np.floor((values - origin) / bin_width).astype(np.int64)
    # repair floor() on values sitting just across an edge
    idx -= values < origin + idx * bin_width
    idx += values >= origin + (idx + 1) * bin_width
    lo, hi = int(idx.min()), int(idx.max())
    counts = np.bincount(idx - lo, minlength=hi - lo + 1)
    return [HistogramBin(origin + i * bin_width, origin + (i + 1) * bin_width, int(c))
            for i, c in zip(range(lo, hi + 1), counts)]


def starting_point(d: int, n_bases: int, rng: Rng) -> np.ndarray:
    """Packed generators of ``n_bases`` Haar-random unitaries."""
    gens = [hermitian_to_params(log_unitary(haar_unitary(d, rng)))
            for _ in range(n_bases)]
    return np.concatenate(gens)


def run_trial(config: SearchConfig, trial_id: int) -> TrialResult:
    seed = trial_seed(config.base_seed, trial_id)
    fun = MubResiduals(config.d, config.n_bases)
    tick = time.perf_counter()
    x0 = starting_point(config.d, config.n_bases, Rng(seed))
    try:
        res = lm_minimize(fun, x0, config.lm_options, vectorized=True)
        value, iterations, term = res.objective_final, res.iterations, res.termination
    except (NumericalError, MatrixError):
        r0 = fun(x0)
        value, iterations, term = float(r0 @ r0), 0, Termination.NUMERICAL_ERROR
    wall = int(round(1000 * (time.perf_counter() - tick)))
    return TrialResult(trial_id, seed, value, iterations, str(term),
                       bool(value <= config.success_threshold), wall)


@dataclass
class SearchReport:
    config: SearchConfig
    trials: list[TrialResult]
    success_count: int
    success_rate: float
    min_objective: float
    histogram: list[HistogramBin]
    modal_bin: tuple[float, float] | None
    modal_fraction: float
    generator_id: str = GENERATOR_ID

    @classmethod
    def from_trials(cls, config: SearchConfig, trials) -> "SearchReport":
        trials = sorted(trials, key=lambda t: t.trial_id)
        minima = [t.objective_final for t in trials]
        success = sum(t.success for t in trials)
        bins = histogram(minima, config.bin_width)
        modal = max(bins, key=lambda b: b.count) if bins else None
        return cls(
            config=config,
            trials=trials,
            success_count=success,
            success_rate=success / len(trials) if trials else 0.0,
            min_objective=min(minima) if minima else math.nan,
            histogram=bins,
            modal_bin=(modal.lower, modal.upper) if modal else None,
            modal_fraction=modal.count / len(trials) if modal else 0.0,
        )

    def summary(self) -> dict:
        """The JSON summary record."""
        cfg = asdict(self.config)
        return {
            "schema_version": SCHEMA_VERSION,
            "config": cfg,
            "generator_id": self.generator_id,
            "seed_rule": SEED_RULE,
            "success_count": self.success_count,
            "success_rate": self.success_rate,
            "min_objective": self.min_objective,
            "modal_bin": list(self.modal_bin) if self.modal_bin else None,
            "modal_fraction": self.modal_fraction,
            "histogram": [list(b) for b in self.histogram],
        }


def _trial_worker(args):
    config, trial_id = args
    return run_trial(config, trial_id)


def run_search(config: SearchConfig) -> SearchReport:
    """Run every trial of ``config`` and aggregate.

    With ``parallelism > 1`` trials go to a process pool; the report does not
    depend on the worker count because each trial owns its seeded stream.
    """
    ids = range(config.trials)
    if config.parallelism == 1:
        results = [run_trial(config, i) for i in ids]
    else:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            results = list(pool.map(_trial_worker, [(config, i) for i in ids]))
    return SearchReport.from_trials(config, results)


def write_trials_csv(path, report: SearchReport) -> None:
    cfg = report.config
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRIAL_FIELDS)
        for t in report.trials:
            writer.writerow([t.trial_id, f"0x{t.seed:016x}", cfg.d, cfg.n_bases,
                             f"{t.objective_final:.17g}", t.iterations,
                             t.termination, int(t.success), t.wall_time_ms])


def read_trials_csv(path) -> list[dict]:
    """Parse a trials CSV; raises ``ValueError`` on a bad header or row."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != TRIAL_FIELDS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames!r}")
        rows = []
        for row in reader:
            try:
                rows.append({
                    "trial_id": int(row["trial_id"]),
                    "seed": int(row["seed"], 16),
                    "d": int(row["d"]),
                    "n_bases": int(row["n_bases"]),
                    "objective_final": float(row["objective_final"]),
                    "iterations": int(row["iterations"]),
                    "termination": row["termination"],
                    "success": bool(int(row["success"])),
                    "wall_time_ms": int(row["wall_time_ms"]),
                })
            except (TypeError, ValueError) as exc:
                raise ValueError(f"bad CSV row {reader.line_num}: {exc}") from exc
    return rows
