"""Shared primitives: antibodies, problems, bounded sampling, splittable RNG.

Everything here is deliberately small and immutable-after-construction so
that populations can be sliced, copied and merged without aliasing bugs, and
so that runs are reproducible bit-for-bit from a seed regardless of how
trials or phases are scheduled.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

__all__ = [
    "Antibody",
    "ConfigurationError",
    "ContractViolationError",
    "EvalCounter",
    "Problem",
    "RngStream",
    "RunAbortedError",
    "TrialResult",
    "clamp_to_bounds",
    "evaluate",
    "random_antibody",
]


class ContractViolationError(ValueError):
    """An operation was called with arguments that violate its contract."""


class ConfigurationError(ValueError):
    """An algorithm config or experiment spec is internally inconsistent."""


class RunAbortedError(RuntimeError):
    """An optimizer run hit a non-recoverable state (e.g. non-finite fitness)."""


# A noise hook draws `size` additive fitness-noise samples from a generator.
NoiseHook = Callable[[np.random.Generator, int], np.ndarray]

PathElement = Union[int, str]

_U64 = 0xFFFFFFFFFFFFFFFF


def _encode_tag(tag: PathElement) -> int:
    if isinstance(tag, (int, np.integer)):
        return int(tag) & _U64
    if isinstance(tag, str):
        digest = hashlib.sha256(tag.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "little")
    raise TypeError(f"stream path elements must be int or str, got {type(tag).__name__}")


class RngStream:
    """Deterministic random stream addressed by (base_seed, derivation path).

    Two streams built from the same seed and path replay identical values;
    streams with distinct paths are statistically independent.  Engines key
    sub-streams by (trial, iteration, phase) so that phases can in principle
    run concurrently and still reproduce the sequential results exactly.
    """

    __slots__ = ("base_seed", "path", "generator")

    def __init__(self, base_seed: int, path: tuple[PathElement, ...] = ()):
        self.base_seed = int(base_seed)
        self.path = tuple(path)
        entropy = [_encode_tag(self.base_seed)] + [_encode_tag(t) for t in self.path]
        self.generator = np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))

    def child(self, *tags: PathElement) -> "RngStream":
        """Derive the sub-stream addressed by appending `tags` to this path."""
        return RngStream(self.base_seed, self.path + tags)

    def __repr__(self) -> str:
        return f"RngStream(base_seed={self.base_seed}, path={self.path!r})"


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.generator
    if isinstance(rng, np.random.Generator):
        return rng
    raise TypeError(f"expected RngStream or numpy Generator, got {type(rng).__name__}")


class EvalCounter:
    """Exact, thread-safe count of objective evaluations."""

    __slots__ = ("_lock", "_count")

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._count = 0

    @property
    def count(self) -> int:
        return self._count

    def add(self, n: int = 1) -> None:
        with self._lock:
            self._count += int(n)


@dataclass(frozen=True, eq=False)
class Problem:
    """Descriptor of a box-bounded continuous minimization problem.

    `known_min` is the target objective value used by the convergence test
    |best - known_min| <= tolerance.  A stochastic problem carries a `noise`
    hook that draws additive fitness noise; the pure `objective` stays
    deterministic so tests can suppress the noise.
    """

    name: str
    dimension: int
    lower: np.ndarray
    upper: np.ndarray
    known_min: float
    objective: Callable[[np.ndarray], float]
    tolerance: float = 1e-12
    stochastic: bool = False
    noise: Optional[NoiseHook] = None

    def __post_init__(self):
        lower = np.array(self.lower, dtype=np.float64, copy=True)
        upper = np.array(self.upper, dtype=np.float64, copy=True)
        if self.dimension < 1:
            raise ContractViolationError(f"dimension must be positive, got {self.dimension}")
        if lower.shape != (self.dimension,) or upper.shape != (self.dimension,):
            raise ContractViolationError(
                f"bounds must have shape ({self.dimension},), got {lower.shape} and {upper.shape}"
            )
        if not np.all(lower < upper):
            raise ContractViolationError("every lower bound must be strictly below its upper bound")
        if not self.tolerance > 0:
            raise ContractViolationError(f"tolerance must be > 0, got {self.tolerance}")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "known_min", float(self.known_min))


@dataclass(frozen=True, eq=False)
class Antibody:
    """A candidate solution: position vector plus its cached objective value."""

    position: np.ndarray
    fitness: float

    def __post_init__(self):
        pos = np.array(self.position, dtype=np.float64, copy=True)
        pos.setflags(write=False)
        object.__setattr__(self, "position", pos)
        object.__setattr__(self, "fitness", float(self.fitness))


@dataclass
class TrialResult:
    """Outcome of one optimizer run.

    `iterations_used` is the 1-based iteration at which the tolerance was
    first met and is only meaningful when `converged` is true.  `curve`
    holds the best fitness after each completed iteration.
    """

    converged: bool
    iterations_used: Optional[int]
    best_fitness: float
    best_position: np.ndarray
    evaluations: int
    curve: np.ndarray


_FALLBACK_NOISE_RNG = np.random.default_rng()


def evaluate(problem: Problem, position, *, counter: Optional[EvalCounter] = None,
             noise_rng=None) -> float:
    """Objective value at `position`, plus noise for stochastic problems.

    Pass `noise_rng` (an RngStream or numpy Generator) to make stochastic
    evaluations reproducible; without it noise comes from a process-global
    generator.
    """
    pos = np.ascontiguousarray(position, dtype=np.float64)
    if pos.shape != (problem.dimension,):
        raise ContractViolationError(
            f"position has shape {pos.shape}, expected ({problem.dimension},)"
        )
    if not np.all(np.isfinite(pos)):
        raise ContractViolationError("position contains non-finite coordinates")
    value = float(problem.objective(pos))
    if problem.noise is not None:
        gen = _FALLBACK_NOISE_RNG if noise_rng is None else _as_generator(noise_rng)
        value += float(np.asarray(problem.noise(gen, 1)).ravel()[0])
    if counter is not None:
        counter.add(1)
    return value


def random_antibody(problem: Problem, rng, *, counter: Optional[EvalCounter] = None) -> Antibody:
    """Antibody drawn coordinate-wise uniformly from the problem box.

    Consumes `dimension` doubles from the stream for the position, then (for
    stochastic problems) whatever the noise hook draws.
    """
    gen = _as_generator(rng)
    u = gen.random(problem.dimension)
    pos = problem.lower + u * (problem.upper - problem.lower)
    fitness = evaluate(problem, pos, counter=counter, noise_rng=gen)
    return Antibody(pos, fitness)


def clamp_to_bounds(position, problem: Problem) -> np.ndarray:
    """Project `position` onto the problem box, coordinate by coordinate."""
    pos = np.ascontiguousarray(position, dtype=np.float64)
    if pos.shape != (problem.dimension,):
        raise ContractViolationError(
            f"position has shape {pos.shape}, expected ({problem.dimension},)"
        )
    return np.minimum(problem.upper, np.maximum(problem.lower, pos))
