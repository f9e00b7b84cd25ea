"""Registry of the 26 classical benchmark minimization problems.

Objectives are written with explicit loops so numba can compile them; the
same compiled function is used by the fast engine kernels and by ordinary
Python callers, which keeps results bit-identical across both paths.  For
problems whose optimum value is irrational (Michalewicz, six-hump camel
back, Shubert) the catalog stores the minimum evaluated in float64 at a
machine-precision minimizer rather than the coarsely rounded value usually
quoted in print, so that the convergence test |best - min| <= tolerance is
actually attainable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .core import ContractViolationError, Problem, NoiseHook

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
    def njit(*args, **kwargs):
        def wrap(func):
            return func
        return wrap

__all__ = ["BenchmarkEntry", "catalog_records", "list_problems", "make_problem", "with_noise_hook"]


# ---------------------------------------------------------------------------
# Objective functions
# ---------------------------------------------------------------------------

@njit(cache=True)
def beale(x):
    """2-D Beale function, minimum 0 at (3, 0.5)."""
    a = 1.5 - x[0] + x[0] * x[1]
    b = 2.25 - x[0] + x[0] * x[1] * x[1]
    c = 2.625 - x[0] + x[0] * x[1] * x[1] * x[1]
    return a * a + b * b + c * c


@njit(cache=True)
def easom(x):
    """2-D Easom function, minimum -1 at (pi, pi)."""
    dx = x[0] - math.pi
    dy = x[1] - math.pi
    return -math.cos(x[0]) * math.cos(x[1]) * math.exp(-(dx * dx + dy * dy))


@njit(cache=True)
def matyas(x):
    """2-D Matyas function, minimum 0 at the origin."""
    return 0.26 * (x[0] * x[0] + x[1] * x[1]) - 0.48 * x[0] * x[1]


@njit(cache=True)
def bohachevsky1(x):
    return (x[0] * x[0] + 2.0 * x[1] * x[1]
            - 0.3 * math.cos(3.0 * math.pi * x[0])
            - 0.4 * math.cos(4.0 * math.pi * x[1]) + 0.7)


@njit(cache=True)
def bohachevsky2(x):
    return (x[0] * x[0] + 2.0 * x[1] * x[1]
            - 0.3 * math.cos(3.0 * math.pi * x[0]) * math.cos(4.0 * math.pi * x[1]) + 0.3)


@njit(cache=True)
def bohachevsky3(x):
    return (x[0] * x[0] + 2.0 * x[1] * x[1]
            - 0.3 * math.cos(3.0 * math.pi * x[0] + 4.0 * math.pi * x[1]) + 0.3)


@njit(cache=True)
def booth(x):
    """2-D Booth function, minimum 0 at (1, 3)."""
    a = x[0] + 2.0 * x[1] - 7.0
    b = 2.0 * x[0] + x[1] - 5.0
    return a * a + b * b


@njit(cache=True)
def michalewicz(x):
    """Michalewicz function with steepness m = 10 (sum over dimensions)."""
    s = 0.0
    for i in range(x.shape[0]):
        si = math.sin((i + 1) * x[i] * x[i] / math.pi)
        s += math.sin(x[i]) * si ** 20
    return -s


@njit(cache=True)
def schaffer(x):
    """2-D Schaffer F6 function, minimum 0 at the origin."""
    ss = x[0] * x[0] + x[1] * x[1]
    num = math.sin(math.sqrt(ss)) ** 2 - 0.5
    den = (1.0 + 0.001 * ss) ** 2
    return 0.5 + num / den


@njit(cache=True)
def six_hump_camel_back(x):
    a, b = x[0], x[1]
    return (4.0 * a * a - 2.1 * a ** 4 + a ** 6 / 3.0
            + a * b - 4.0 * b * b + 4.0 * b ** 4)


@njit(cache=True)
def shubert(x):
    """2-D Shubert function: product of two five-term cosine sums."""
    s1 = 0.0
    s2 = 0.0
    for i in range(1, 6):
        s1 += i * math.cos((i + 1) * x[0] + i)
        s2 += i * math.cos((i + 1) * x[1] + i)
    return s1 * s2


@njit(cache=True)
def colville(x):
    a, b, c, d = x[0], x[1], x[2], x[3]
    return (100.0 * (b - a * a) ** 2 + (1.0 - a) ** 2
            + 90.0 * (d - c * c) ** 2 + (1.0 - c) ** 2
            + 10.1 * ((b - 1.0) ** 2 + (d - 1.0) ** 2)
            + 19.8 * (b - 1.0) * (d - 1.0))


@njit(cache=True)
def zakharov(x):
    s1 = 0.0
    s2 = 0.0
    for i in range(x.shape[0]):
        s1 += x[i] * x[i]
        s2 += 0.5 * (i + 1) * x[i]
    return s1 + s2 * s2 + s2 ** 4


@njit(cache=True)
def step(x):
    s = 0.0
    for i in range(x.shape[0]):
        v = math.floor(x[i] + 0.5)
        s += v * v
    return s


@njit(cache=True)
def sphere(x):
    s = 0.0
    for i in range(x.shape[0]):
        s += x[i] * x[i]
    return s


@njit(cache=True)
def sum_squares(x):
    s = 0.0
    for i in range(x.shape[0]):
        s += (i + 1) * x[i] * x[i]
    return s


@njit(cache=True)
def quartic(x):
    """Weighted quartic polynomial; the catalog adds uniform noise on top."""
    s = 0.0
    for i in range(x.shape[0]):
        s += (i + 1) * x[i] ** 4
    return s


@njit(cache=True)
def schwefel_2_22(x):
    s = 0.0
    p = 1.0
    for i in range(x.shape[0]):
        a = abs(x[i])
        s += a
        p *= a
    return s + p


@njit(cache=True)
def schwefel_1_2(x):
    s = 0.0
    partial = 0.0
    for i in range(x.shape[0]):
        partial += x[i]
        s += partial * partial
    return s


@njit(cache=True)
def rosenbrock(x):
    s = 0.0
    for i in range(x.shape[0] - 1):
        a = x[i + 1] - x[i] * x[i]
        b = x[i] - 1.0
        s += 100.0 * a * a + b * b
    return s


@njit(cache=True)
def dixon_price(x):
    s = (x[0] - 1.0) ** 2
    for i in range(1, x.shape[0]):
        a = 2.0 * x[i] * x[i] - x[i - 1]
        s += (i + 1) * a * a
    return s


@njit(cache=True)
def rastrigin(x):
    s = 0.0
    for i in range(x.shape[0]):
        s += x[i] * x[i] - 10.0 * math.cos(2.0 * math.pi * x[i]) + 10.0
    return s


@njit(cache=True)
def griewank(x):
    s = 0.0
    p = 1.0
    for i in range(x.shape[0]):
        s += x[i] * x[i]
        p *= math.cos(x[i] / math.sqrt(i + 1.0))
    return s / 4000.0 - p + 1.0


@njit(cache=True)
def ackley(x):
    n = x.shape[0]
    s1 = 0.0
    s2 = 0.0
    for i in range(n):
        s1 += x[i] * x[i]
        s2 += math.cos(2.0 * math.pi * x[i])
    return (-20.0 * math.exp(-0.2 * math.sqrt(s1 / n))
            - math.exp(s2 / n) + 20.0 + math.e)


def uniform_noise(gen: np.random.Generator, size: int) -> np.ndarray:
    """Default additive noise for the quartic problem: uniform [0, 1)."""
    return gen.random(size)


def zero_noise(gen: np.random.Generator, size: int) -> np.ndarray:
    """Noise hook that suppresses stochasticity (used by tests)."""
    return np.zeros(size)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BenchmarkEntry:
    """One catalog row: problem descriptor plus a known global minimizer."""

    index: int
    problem: Problem
    minimizer_hint: Optional[np.ndarray] = None

    @property
    def objective(self) -> Callable[[np.ndarray], float]:
        return self.problem.objective

    @property
    def name(self) -> str:
        return self.problem.name


# Minima for irrational-optimum entries, evaluated in float64 at the
# machine-precision minimizers below (derived independently; see tests).
_MICH2_MIN = -1.8013034100985532
_MICH5_MIN = -4.687658179088148
_MICH10_MIN = -9.660151715641343
_SIXHUMP_MIN = -1.0316284534898776
_SHUBERT_MIN = -186.73090883102378

_MICH_ARGMIN = (
    2.2029055201726093, 1.5707963267948966, 1.2849915705529245,
    1.9230584698663629, 1.7204697725658413, 1.5707963267948966,
    1.454413971362379, 1.7560865209450263, 1.6557174168210291,
    1.5707963267948966,
)
_SIXHUMP_ARGMIN = (0.08984201310031806, -0.7126564030207396)
_SHUBERT_ARGMIN = (-7.708313735499347, -7.0835064076515595)

_DIXON_PRICE_ARGMIN = tuple(
    2.0 ** (-(2.0 ** k - 2.0) / 2.0 ** k) for k in range(1, 31)
)

# (index, name, objective, dimension, lower, upper, known_min, tolerance,
#  stochastic, minimizer hint)
_CATALOG_SPEC = (
    (1, "Beale", beale, 2, -4.5, 4.5, 0.0, 1e-12, False, (3.0, 0.5)),
    (2, "Easom", easom, 2, -100.0, 100.0, -1.0, 1e-12, False, (math.pi, math.pi)),
    (3, "Matyas", matyas, 2, -10.0, 10.0, 0.0, 1e-12, False, (0.0, 0.0)),
    (4, "Bohachevsky1", bohachevsky1, 2, -100.0, 100.0, 0.0, 1e-12, False, (0.0, 0.0)),
    (5, "Booth", booth, 2, -10.0, 10.0, 0.0, 1e-12, False, (1.0, 3.0)),
    (6, "Michalewicz2", michalewicz, 2, 0.0, math.pi, _MICH2_MIN, 1e-12, False, _MICH_ARGMIN[:2]),
    (7, "Schaffer", schaffer, 2, -100.0, 100.0, 0.0, 1e-12, False, (0.0, 0.0)),
    (8, "SixHumpCamelBack", six_hump_camel_back, 2, -5.0, 5.0, _SIXHUMP_MIN, 1e-12, False, _SIXHUMP_ARGMIN),
    (9, "Bohachevsky2", bohachevsky2, 2, -100.0, 100.0, 0.0, 1e-12, False, (0.0, 0.0)),
    (10, "Bohachevsky3", bohachevsky3, 2, -100.0, 100.0, 0.0, 1e-12, False, (0.0, 0.0)),
    # |known_min| ~ 187 leaves only ~30 ulp of headroom at 1e-12, so Shubert
    # uses 1e-9; the nearest non-global local optimum is ~63 away.
    (11, "Shubert", shubert, 2, -10.0, 10.0, _SHUBERT_MIN, 1e-9, False, _SHUBERT_ARGMIN),
    (12, "Colville", colville, 4, -10.0, 10.0, 0.0, 1e-12, False, (1.0, 1.0, 1.0, 1.0)),
    (13, "Michalewicz5", michalewicz, 5, 0.0, math.pi, _MICH5_MIN, 1e-12, False, _MICH_ARGMIN[:5]),
    (14, "Zakharov", zakharov, 10, -5.0, 10.0, 0.0, 1e-12, False, (0.0,) * 10),
    (15, "Michalewicz10", michalewicz, 10, 0.0, math.pi, _MICH10_MIN, 1e-12, False, _MICH_ARGMIN),
    (16, "Step", step, 30, -100.0, 100.0, 0.0, 1e-12, False, (0.0,) * 30),
    (17, "Sphere", sphere, 30, -100.0, 100.0, 0.0, 1e-12, False, (0.0,) * 30),
    (18, "SumSquares", sum_squares, 30, -10.0, 10.0, 0.0, 1e-12, False, (0.0,) * 30),
    (19, "Quartic", quartic, 30, -1.28, 1.28, 0.0, 1e-12, True, (0.0,) * 30),
    (20, "Schwefel2.22", schwefel_2_22, 30, -10.0, 10.0, 0.0, 1e-12, False, (0.0,) * 30),
    (21, "Schwefel1.2", schwefel_1_2, 30, -100.0, 100.0, 0.0, 1e-12, False, (0.0,) * 30),
    (22, "Rosenbrock", rosenbrock, 30, -30.0, 30.0, 0.0, 1e-12, False, (1.0,) * 30),
    (23, "DixonPrice", dixon_price, 30, -10.0, 10.0, 0.0, 1e-12, False, _DIXON_PRICE_ARGMIN),
    (24, "Rastrigin", rastrigin, 30, -5.12, 5.12, 0.0, 1e-12, False, (0.0,) * 30),
    (25, "Griewank", griewank, 30, -600.0, 600.0, 0.0, 1e-12, False, (0.0,) * 30),
    (26, "Ackley", ackley, 30, -32.0, 32.0, 0.0, 1e-12, False, (0.0,) * 30),
)


def _build_entry(spec) -> BenchmarkEntry:
    index, name, objective, dim, lo, hi, known_min, tol, stochastic, hint = spec
    problem = Problem(
        name=name,
        dimension=dim,
        lower=np.full(dim, lo),
        upper=np.full(dim, hi),
        known_min=known_min,
        objective=objective,
        tolerance=tol,
        stochastic=stochastic,
        noise=uniform_noise if stochastic else None,
    )
    hint_arr = np.array(hint, dtype=np.float64)
    hint_arr.setflags(write=False)
    return BenchmarkEntry(index=index, problem=problem, minimizer_hint=hint_arr)


_ENTRIES: tuple[BenchmarkEntry, ...] = tuple(_build_entry(s) for s in _CATALOG_SPEC)


def _normalize(name: str) -> str:
    return "".join(ch for ch in name.lower() if ch.isalnum())


_BY_NAME = {_normalize(e.name): e for e in _ENTRIES}


def list_problems() -> tuple[BenchmarkEntry, ...]:
    """All 26 catalog entries in index order."""
    return _ENTRIES


def make_problem(selector) -> BenchmarkEntry:
    """Look up a catalog entry by index (1..26) or case-insensitive name."""
    if isinstance(selector, str):
        s = selector.strip()
        if s.lstrip("+-").isdigit():
            selector = int(s)
        else:
            entry = _BY_NAME.get(_normalize(s))
            if entry is None:
                names = ", ".join(e.name for e in _ENTRIES)
                raise ContractViolationError(
                    f"unknown problem name {selector!r}; valid names: {names}"
                )
            return entry
    if isinstance(selector, (int, np.integer)):
        if 1 <= selector <= len(_ENTRIES):
            return _ENTRIES[selector - 1]
        raise ContractViolationError(
            f"problem index {selector} out of range; valid indices: 1..{len(_ENTRIES)}"
        )
    raise ContractViolationError(
        f"problem selector must be an int or str, got {type(selector).__name__}"
    )


def with_noise_hook(entry: BenchmarkEntry, hook: Optional[NoiseHook]) -> BenchmarkEntry:
    """Copy of `entry` with the noise hook replaced (e.g. `zero_noise`)."""
    problem = replace(entry.problem, noise=hook)
    return BenchmarkEntry(index=entry.index, problem=problem,
                          minimizer_hint=entry.minimizer_hint)


def catalog_records() -> list[dict]:
    """Machine-readable catalog dump (for the CLI's JSON listing)."""
    records = []
    for e in _ENTRIES:
        records.append({
            "index": e.index,
            "name": e.name,
            "dimension": e.problem.dimension,
            "lower": float(e.problem.lower[0]),
            "upper": float(e.problem.upper[0]),
            "known_min": e.problem.known_min,
            "tolerance": e.problem.tolerance,
            "stochastic": e.problem.stochastic,
        })
    return records
