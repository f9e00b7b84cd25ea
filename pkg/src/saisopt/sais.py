"""Symbiotic artificial immune system (SAIS) engine.

Lifecycle per iteration: clone the population into a memory population,
randomly partition into three equal groups plus remainder, run the
mutualism / commensalism / parasitism updates on their own groups, leave
the remainder untouched, then merge the updated population with the memory
clone and keep the best half.  The run stops as soon as the best fitness
is within tolerance of the problem's known minimum.

Single-operator masks (used by ablation studies) skip the partition and
apply the one enabled operator to the whole population; a two-operator
mask splits the population in half the same way the full mask splits it
in thirds.

Randomness is drawn from per-(trial, iteration, phase) sub-streams, in a
fixed documented order per phase (see the _draw_* helpers), so phases are
schedule-independent and runs are reproducible bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .core import (
    Antibody,
    ConfigurationError,
    ContractViolationError,
    Problem,
    RngStream,
    RunAbortedError,
    TrialResult,
)

__all__ = [
    "OPERATORS",
    "PhasePartition",
    "SaisConfig",
    "commensalism_phase",
    "elitist_merge",
    "mutualism_phase",
    "parasitism_phase",
    "partition",
    "run_sais",
]

OPERATORS = ("mutualism", "commensalism", "parasitism")


@dataclass(frozen=True)
class SaisConfig:
    """Engine parameters for one SAIS run.

    `tolerance` of None defers to the problem's own tolerance.  The
    operator mask selects which symbiotic updates run; the full mask
    partitions the population, a single-operator mask processes the whole
    population.

    Two dynamics knobs are kept switchable for sensitivity checks because
    the published method leaves them open.  `per_coordinate_rand` draws the
    uniform factors of the mutualism/commensalism updates once per
    coordinate (default) instead of one shared scalar per step;
    `greedy_mutualism` makes a mutualism candidate replace its incumbent
    only when strictly fitter, instead of the default unconditional write
    whose selection pressure comes solely from the memory merge.  The
    defaults reproduce the reference convergence behavior (in particular
    the single-operator ablation outcomes) far better than the
    alternatives.
    """

    population_size: int
    max_iterations: int
    tolerance: Optional[float] = None
    operator_mask: tuple[str, ...] = OPERATORS
    seed: int = 0
    per_coordinate_rand: bool = True
    greedy_mutualism: bool = False

    def canonical_mask(self) -> tuple[str, ...]:
        mask = set(self.operator_mask)
        unknown = mask.difference(OPERATORS)
        if unknown:
            raise ConfigurationError(
                f"unknown operators in mask: {sorted(unknown)}; valid: {list(OPERATORS)}"
            )
        if not mask:
            raise ConfigurationError("operator mask must not be empty")
        return tuple(op for op in OPERATORS if op in mask)

    def validate(self) -> None:
        mask = self.canonical_mask()
        if self.population_size < 1:
            raise ConfigurationError(f"population_size must be >= 1, got {self.population_size}")
        if len(mask) == len(OPERATORS) and self.population_size < 3:
            raise ConfigurationError(
                "population_size must be >= 3 with the full operator mask"
            )
        if self.max_iterations < 1:
            raise ConfigurationError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ConfigurationError(f"tolerance must be > 0, got {self.tolerance}")


@dataclass
class PhasePartition:
    """Random split of a population into the three phase groups + remainder."""

    mutualism: list[Antibody]
    commensalism: list[Antibody]
    parasitism: list[Antibody]
    remainder: list[Antibody]


# ---------------------------------------------------------------------------
# Draw helpers: the per-phase RNG transcript, in documented order.
# ---------------------------------------------------------------------------

def _draw_mutualism(gen, n, d, per_coord):
    """Order: partner offsets, benefit factors, row factors, partner factors."""
    J = gen.integers(0, n - 1, size=n)
    BF = gen.integers(1, 3, size=n)
    w = d if per_coord else 1
    R1 = gen.random((n, w))
    R2 = gen.random((n, w))
    return J, BF, R1, R2


def _draw_commensalism(gen, n, d, per_coord):
    """Order: partner offsets, then raw uniforms mapped onto (-1, 1)."""
    J = gen.integers(0, n - 1, size=n)
    w = d if per_coord else 1
    R = gen.random((n, w))
    return J, R


def _draw_parasitism(gen, n, d):
    """Order: one (n, d) block of raw uniforms for the fresh antibodies."""
    return gen.random((n, d))


def _draw_noise(problem, gen, count):
    """Pre-drawn additive fitness noise; zeros (no draws) when deterministic."""
    if problem.noise is None:
        return np.zeros(count)
    noise = np.asarray(problem.noise(gen, count), dtype=np.float64).ravel()
    if noise.shape != (count,):
        raise ContractViolationError(
            f"noise hook returned shape {noise.shape}, expected ({count},)"
        )
    return noise


def _select_kernels(problem, backend):
    if backend == "auto":
        backend = "numba" if _kernels.is_compiled_objective(problem.objective) else "python"
    if backend not in _kernels.KERNELS:
        raise ConfigurationError(f"unknown backend {backend!r}; valid: python, numba, auto")
    if backend == "numba" and not _kernels.NUMBA_AVAILABLE:
        raise ConfigurationError("numba backend requested but numba is not installed")
    return _kernels.KERNELS[backend]


def _apply_phase(op, pos, fit, problem, rng, kernels, per_coord, greedy_mut) -> int:
    """Run one phase in place on a group; returns the evaluation count.

    Groups too small to interact (fewer than two antibodies for mutualism
    and commensalism, none for parasitism) are left unchanged and consume
    no draws.
    """
    n, d = pos.shape
    gen = rng.generator
    if op == "mutualism":
        if n < 2:
            return 0
        J, BF, R1, R2 = _draw_mutualism(gen, n, d, per_coord)
        noise = _draw_noise(problem, gen, 2 * n)
        return kernels["sais_mutualism"](pos, fit, problem.lower, problem.upper,
                                         J, BF, R1, R2, noise, greedy_mut,
                                         problem.objective)
    if op == "commensalism":
        if n < 2:
            return 0
        J, R = _draw_commensalism(gen, n, d, per_coord)
        noise = _draw_noise(problem, gen, n)
        return kernels["sais_commensalism"](pos, fit, problem.lower, problem.upper,
                                            J, R, noise, problem.objective)
    if op == "parasitism":
        if n < 1:
            return 0
        U = _draw_parasitism(gen, n, d)
        noise = _draw_noise(problem, gen, n)
        return kernels["sais_parasitism"](pos, fit, problem.lower, problem.upper,
                                          U, noise, problem.objective)
    raise ConfigurationError(f"unknown operator {op!r}")


# ---------------------------------------------------------------------------
# Antibody-list operations (the engine uses the same kernels on raw arrays).
# ---------------------------------------------------------------------------

def _to_arrays(group: Sequence[Antibody], problem: Problem):
    pos = np.array([a.position for a in group], dtype=np.float64).reshape(len(group), problem.dimension)
    fit = np.array([a.fitness for a in group], dtype=np.float64)
    return pos, fit


def _to_antibodies(pos, fit) -> list[Antibody]:
    return [Antibody(pos[i], fit[i]) for i in range(pos.shape[0])]


def partition(population: Sequence[Antibody], rng: RngStream) -> PhasePartition:
    """Uniformly shuffle the population into three equal groups + remainder."""
    n = len(population)
    if n < 3:
        raise ConfigurationError(f"partition needs at least 3 antibodies, got {n}")
    perm = rng.generator.permutation(n)
    g = n // 3
    pop = list(population)
    return PhasePartition(
        mutualism=[pop[i] for i in perm[:g]],
        commensalism=[pop[i] for i in perm[g:2 * g]],
        parasitism=[pop[i] for i in perm[2 * g:3 * g]],
        remainder=[pop[i] for i in perm[3 * g:]],
    )


def mutualism_phase(group: Sequence[Antibody], rng: RngStream, problem: Problem, *,
                    per_coordinate_rand: bool = True, greedy: bool = True,
                    backend: str = "auto") -> list[Antibody]:
    """Mutualism update over a group; groups of size < 2 pass through."""
    if len(group) < 2:
        return list(group)
    pos, fit = _to_arrays(group, problem)
    _apply_phase("mutualism", pos, fit, problem, rng,
                 _select_kernels(problem, backend), per_coordinate_rand, greedy)
    return _to_antibodies(pos, fit)


def commensalism_phase(group: Sequence[Antibody], rng: RngStream, problem: Problem, *,
                       per_coordinate_rand: bool = True, backend: str = "auto") -> list[Antibody]:
    """Commensalism update over a group; groups of size < 2 pass through."""
    if len(group) < 2:
        return list(group)
    pos, fit = _to_arrays(group, problem)
    _apply_phase("commensalism", pos, fit, problem, rng,
                 _select_kernels(problem, backend), per_coordinate_rand, True)
    return _to_antibodies(pos, fit)


def parasitism_phase(group: Sequence[Antibody], rng: RngStream, problem: Problem, *,
                     backend: str = "auto") -> list[Antibody]:
    """Parasitism update over a group; an empty group passes through."""
    if not group:
        return []
    pos, fit = _to_arrays(group, problem)
    _apply_phase("parasitism", pos, fit, problem, rng,
                 _select_kernels(problem, backend), False, True)
    return _to_antibodies(pos, fit)


def elitist_merge(updated: Sequence[Antibody], memory: Sequence[Antibody]) -> list[Antibody]:
    """Best half of updated + memory, ties favoring updated then lower index."""
    if len(updated) != len(memory):
        raise ContractViolationError(
            f"population sizes differ: {len(updated)} updated vs {len(memory)} memory"
        )
    n = len(updated)
    pool = list(updated) + list(memory)
    fits = np.array([a.fitness for a in pool])
    order = np.argsort(fits, kind="stable")[:n]
    return [pool[i] for i in order]


# ---------------------------------------------------------------------------
# Full run
# ---------------------------------------------------------------------------

def run_sais(problem: Problem, config: SaisConfig, rng: Optional[RngStream] = None, *,
             backend: str = "auto") -> TrialResult:
    """One SAIS run; `rng` defaults to a fresh stream from `config.seed`."""
    config.validate()
    mask = config.canonical_mask()
    tol = problem.tolerance if config.tolerance is None else config.tolerance
    if rng is None:
        rng = RngStream(config.seed)
    kernels = _select_kernels(problem, backend)
    n = config.population_size
    d = problem.dimension
    lower, upper = problem.lower, problem.upper

    init_gen = rng.child("init").generator
    u = init_gen.random((n, d))
    pos = lower + u * (upper - lower)
    fit = np.empty(n)
    noise = _draw_noise(problem, init_gen, n)
    kernels["evaluate_rows"](pos, noise, fit, problem.objective)
    evaluations = n
    if not np.isfinite(fit).all():
        raise RunAbortedError(
            f"non-finite fitness in the initial population on {problem.name}"
        )

    curve = np.empty(config.max_iterations)
    converged = False
    iterations_used = None
    executed = 0
    n_ops = len(mask)

    for t in range(1, config.max_iterations + 1):
        it_rng = rng.child("iter", t)
        mem_pos = pos.copy()
        mem_fit = fit.copy()

        if n_ops == 1:
            groups = [np.arange(n)]
        else:
            perm = it_rng.child("partition").generator.permutation(n)
            g = n // n_ops
            groups = [perm[a * g:(a + 1) * g] for a in range(n_ops)]

        for op, idx in zip(mask, groups):
            if idx.shape[0] == 0:
                continue
            sub_pos = np.ascontiguousarray(pos[idx])
            sub_fit = fit[idx]
            evaluations += _apply_phase(op, sub_pos, sub_fit, problem,
                                        it_rng.child(op), kernels,
                                        config.per_coordinate_rand,
                                        config.greedy_mutualism)
            pos[idx] = sub_pos
            fit[idx] = sub_fit

        if not np.isfinite(fit).all():
            raise RunAbortedError(
                f"non-finite fitness at iteration {t} on {problem.name}"
            )

        all_pos = np.vstack((pos, mem_pos))
        all_fit = np.concatenate((fit, mem_fit))
        order = np.argsort(all_fit, kind="stable")[:n]
        pos = np.ascontiguousarray(all_pos[order])
        fit = all_fit[order]

        best = fit[0]
        curve[t - 1] = best
        executed = t
        if abs(best - problem.known_min) <= tol:
            converged = True
            iterations_used = t
            break

    return TrialResult(
        converged=converged,
        iterations_used=iterations_used,
        best_fitness=float(fit[0]),
        best_position=pos[0].copy(),
        evaluations=evaluations,
        curve=curve[:executed].copy(),
    )
