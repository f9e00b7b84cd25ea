"""Multi-trial experiment runner and aggregation.

Trials are seeded by deriving per-trial streams from (base_seed, trial
index) through the splittable RNG, never by sequential reseeding, so the
same spec yields the same per-trial records whether trials run inline or
in a worker pool.  Iteration statistics follow the usual reporting
convention for success-rate tables: they are computed over converged
trials only (sample standard deviation, 0 for a single success, absent
when nothing converged), while fitness statistics cover all trials.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import multiprocessing
import numpy as np

from .benchmarks import BenchmarkEntry, make_problem
from .core import ConfigurationError, ContractViolationError, RngStream, RunAbortedError, TrialResult
from .sais import SaisConfig, run_sais
from .sos import SosConfig, run_sos

__all__ = [
    "CostReport",
    "ExperimentSpec",
    "SummaryStats",
    "TrialResult",
    "average_curve",
    "compare_cost",
    "run_experiment",
    "summarize",
    "sweep",
]

ALGORITHMS = ("sais", "sos")


@dataclass
class SummaryStats:
    """Aggregate of one experiment's trials.

    `iteration_mean`/`iteration_std` are None when no trial converged
    (rendered as "n/a" in tables).
    """

    trials: int
    success_rate: float
    iteration_mean: Optional[float]
    iteration_std: Optional[float]
    fitness_mean: float
    fitness_std: float
    mean_evaluations: float


@dataclass
class ExperimentSpec:
    """One experiment: problem, algorithm, config, and trial plan.

    When `budget` is set, population_size * max_iterations must equal it
    exactly (the fixed-cost comparison discipline for parameter sweeps).
    """

    problem: Union[int, str]
    algorithm: str
    config: Union[SaisConfig, SosConfig]
    trials: int = 30
    base_seed: int = 0
    budget: Optional[int] = None

    def validate(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigurationError(
                f"unknown algorithm {self.algorithm!r}; valid: {list(ALGORITHMS)}"
            )
        if self.trials < 1:
            raise ConfigurationError(f"trials must be >= 1, got {self.trials}")
        self.config.validate()
        if self.budget is not None:
            actual = self.config.population_size * self.config.max_iterations
            if actual != self.budget:
                raise ConfigurationError(
                    f"budget violation: population_size * max_iterations = "
                    f"{self.config.population_size} * {self.config.max_iterations} "
                    f"= {actual} != budget {self.budget}"
                )


def _run_one(algorithm: str, entry: BenchmarkEntry, config, rng: RngStream) -> TrialResult:
    if algorithm == "sais":
        return run_sais(entry.problem, config, rng)
    return run_sos(entry.problem, config, rng)


def _trial_task(args) -> TrialResult:
    selector, algorithm, config, base_seed, k = args
    entry = make_problem(selector)
    rng = RngStream(base_seed).child("trial", k)
    try:
        return _run_one(algorithm, entry, config, rng)
    except Exception as exc:
        raise RunAbortedError(f"trial {k} on {entry.name} failed: {exc}") from exc


def summarize(results: Sequence[TrialResult]) -> SummaryStats:
    """Fold per-trial records into a summary row."""
    if not results:
        raise ContractViolationError("cannot summarize an empty result list")
    trials = len(results)
    iters = [r.iterations_used for r in results if r.converged]
    fits = np.array([r.best_fitness for r in results])
    evals = np.array([r.evaluations for r in results], dtype=np.float64)
    if iters:
        it = np.array(iters, dtype=np.float64)
        iteration_mean = float(it.mean())
        iteration_std = float(it.std(ddof=1)) if len(iters) > 1 else 0.0
    else:
        iteration_mean = None
        iteration_std = None
    fitness_std = float(fits.std(ddof=1)) if trials > 1 else 0.0
    return SummaryStats(
        trials=trials,
        success_rate=100.0 * len(iters) / trials,
        iteration_mean=iteration_mean,
        iteration_std=iteration_std,
        fitness_mean=float(fits.mean()),
        fitness_std=fitness_std,
        mean_evaluations=float(evals.mean()),
    )


def run_experiment(spec: ExperimentSpec, *, workers: int = 1
                   ) -> tuple[SummaryStats, list[TrialResult]]:
    """Run `spec.trials` independent trials and aggregate them.

    `workers` > 1 fans trials out over a process pool; results are
    identical to a serial run because trial seeds depend only on
    (base_seed, trial index) and aggregation folds in index order.
    """
    spec.validate()
    entry = make_problem(spec.problem)  # fail fast on bad selectors
    tasks = [(spec.problem, spec.algorithm, spec.config, spec.base_seed, k)
             for k in range(spec.trials)]
    if workers <= 1 or spec.trials == 1:
        results = [_trial_task(t) for t in tasks]
    else:
        # Warm up numba compilation in the parent so forked workers inherit it.
        warm_cfg = _one_iteration_config(spec.config)
        _run_one(spec.algorithm, entry, warm_cfg, RngStream(spec.base_seed).child("warmup"))
        ctx = multiprocessing.get_context("fork" if "fork" in multiprocessing.get_all_start_methods() else None)
        with ProcessPoolExecutor(max_workers=min(workers, spec.trials), mp_context=ctx) as pool:
            results = list(pool.map(_trial_task, tasks))
    return summarize(results), results


def _one_iteration_config(config):
    if isinstance(config, SaisConfig):
        from dataclasses import replace

        n = max(len(config.operator_mask) * 2, 3)
        return replace(config, population_size=n, max_iterations=1)
    return SosConfig(population_size=4, max_iterations=1,
                     tolerance=config.tolerance, seed=config.seed)


def sweep(problem: Union[int, str], algorithm: str, pairs: Sequence[tuple[int, int]],
          trials: int = 30, base_seed: int = 0, *, budget: Optional[int] = None,
          tolerance: Optional[float] = None, workers: int = 1,
          ) -> list[tuple[tuple[int, int], SummaryStats]]:
    """One summary row per (population, iterations) pair, in input order."""
    rows = []
    for p, i in pairs:
        if budget is not None and p * i != budget:
            raise ConfigurationError(
                f"budget violation: pair {p}:{i} gives {p * i}, expected {budget}"
            )
        if algorithm == "sais":
            config = SaisConfig(population_size=p, max_iterations=i, tolerance=tolerance)
        elif algorithm == "sos":
            config = SosConfig(population_size=p, max_iterations=i, tolerance=tolerance)
        else:
            raise ConfigurationError(
                f"unknown algorithm {algorithm!r}; valid: {list(ALGORITHMS)}"
            )
        spec = ExperimentSpec(problem=problem, algorithm=algorithm, config=config,
                              trials=trials, base_seed=base_seed, budget=budget)
        stats, _ = run_experiment(spec, workers=workers)
        rows.append(((p, i), stats))
    return rows


def average_curve(results: Sequence[TrialResult], horizon: int,
                  mode: str = "hold_last") -> np.ndarray:
    """Per-iteration mean best fitness over trials, padded to `horizon`.

    "hold_last" keeps a finished trial contributing its final value, which
    keeps the average monotone; "active_only" averages only trials still
    running at each iteration (falling back to final values once every
    trial has finished).
    """
    if not results:
        raise ContractViolationError("average_curve needs at least one trial result")
    if horizon < 1:
        raise ContractViolationError(f"horizon must be >= 1, got {horizon}")
    if mode not in ("hold_last", "active_only"):
        raise ContractViolationError(f"unknown averaging mode {mode!r}")
    out = np.empty(horizon)
    curves = [np.asarray(r.curve, dtype=np.float64) for r in results]
    if any(c.shape[0] == 0 for c in curves):
        raise ContractViolationError("every trial must have a non-empty curve")
    for t in range(horizon):
        if mode == "hold_last":
            vals = [c[min(t, c.shape[0] - 1)] for c in curves]
        else:
            vals = [c[t] for c in curves if t < c.shape[0]]
            if not vals:
                vals = [c[-1] for c in curves]
        out[t] = float(np.mean(vals))
    return out


@dataclass
class CostReport:
    """Per-iteration evaluation cost of SOS relative to SAIS."""

    population_size: int
    sais_evals_per_iteration: float
    sos_evals_per_iteration: float
    ratio: float


def compare_cost(problem: Union[int, str], sais_config: SaisConfig,
                 sos_config: SosConfig, trials: int = 3, *,
                 base_seed: int = 0, workers: int = 1) -> CostReport:
    """Measure mean evaluations per iteration for both engines.

    Initialization evaluations are excluded so the figure reflects the
    steady per-iteration cost (~4N/3 for SAIS vs ~4N for SOS).
    """
    if sais_config.population_size != sos_config.population_size:
        raise ContractViolationError(
            "compare_cost requires equal population sizes, got "
            f"{sais_config.population_size} vs {sos_config.population_size}"
        )

    def per_iter(results):
        vals = [(r.evaluations - cfg.population_size) / r.curve.shape[0]
                for r, cfg in results]
        return float(np.mean(vals))

    _, sais_results = run_experiment(
        ExperimentSpec(problem=problem, algorithm="sais", config=sais_config,
                       trials=trials, base_seed=base_seed), workers=workers)
    _, sos_results = run_experiment(
        ExperimentSpec(problem=problem, algorithm="sos", config=sos_config,
                       trials=trials, base_seed=base_seed), workers=workers)
    sais_cost = per_iter([(r, sais_config) for r in sais_results])
    sos_cost = per_iter([(r, sos_config) for r in sos_results])
    return CostReport(
        population_size=sais_config.population_size,
        sais_evals_per_iteration=sais_cost,
        sos_evals_per_iteration=sos_cost,
        ratio=sos_cost / sais_cost,
    )
