"""Inner-loop phase kernels shared by the SAIS and SOS engines.

Each kernel exists twice: the plain-Python function (readable reference,
used for small populations and as the fallback when an objective is not
numba-compiled) and its numba-compiled twin.  Both are the *same* function
object run through different compilers, so results are bit-identical; the
test suite asserts this.

All randomness is pre-drawn by the caller into arrays (every draw in a
phase is data-independent), so the kernels are pure array programs.  The
`noise` array carries pre-drawn additive fitness noise, one slot per
objective evaluation, and is all zeros for deterministic problems.

Group-best bookkeeping: `best_atb` must equal the first minimum of the
current (partially updated) fitness array before every step.  Kernels keep
a running (index, value) pair and fold written rows in with a (value,
index) lexicographic minimum; this reproduces a full first-minimum rescan
exactly and only rescans when the tracked best row itself was overwritten.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit
    from numba.core.dispatcher import Dispatcher

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False

    class Dispatcher:  # placeholder so isinstance checks stay valid
        pass

    def njit(*args, **kwargs):
        def wrap(func):
            return func
        return wrap


@njit(cache=True)
def _argmin_scan(fit):
    """First index attaining the minimum, and that minimum."""
    b = 0
    fb = fit[0]
    for i in range(1, fit.shape[0]):
        if fit[i] < fb:
            b = i
            fb = fit[i]
    return b, fb


# ---------------------------------------------------------------------------
# SAIS phases: unconditional writes, elitism comes from the memory merge.
# ---------------------------------------------------------------------------

def _sais_mutualism(pos, fit, lower, upper, J, BF, R1, R2, noise, greedy, objective):
    """Pairwise mutual update of every row, in row order.

    Row i interacts with partner jj = J[i] mapped over {0..n-1} minus i.
    Both rows move by their own uniform(0,1) factor along the shared vector
    (best - mean(i, jj) * benefit) and are clamped and evaluated.  With
    `greedy` a candidate is written back only when strictly fitter than the
    incumbent; otherwise both candidates are written unconditionally.
    R1/R2 have one column for a shared scalar factor or d columns for
    per-coordinate factors.
    """
    n, d = pos.shape
    rw = R1.shape[1]
    cand_i = np.empty(d)
    cand_j = np.empty(d)
    b, fb = _argmin_scan(fit)
    for i in range(n):
        jj = J[i]
        if jj >= i:
            jj += 1
        bf = float(BF[i])
        for k in range(d):
            mv = (pos[i, k] + pos[jj, k]) * 0.5
            stepk = pos[b, k] - mv * bf
            r1 = R1[i, k] if rw == d else R1[i, 0]
            r2 = R2[i, k] if rw == d else R2[i, 0]
            vi = pos[i, k] + r1 * stepk
            vj = pos[jj, k] + r2 * stepk
            if vi < lower[k]:
                vi = lower[k]
            elif vi > upper[k]:
                vi = upper[k]
            if vj < lower[k]:
                vj = lower[k]
            elif vj > upper[k]:
                vj = upper[k]
            cand_i[k] = vi
            cand_j[k] = vj
        fi = objective(cand_i) + noise[2 * i]
        fj = objective(cand_j) + noise[2 * i + 1]
        if greedy:
            # only improvements land, so the tracked best stays valid
            if fi < fit[i]:
                for k in range(d):
                    pos[i, k] = cand_i[k]
                fit[i] = fi
                if fi < fb or (fi == fb and i < b):
                    b, fb = i, fi
            if fj < fit[jj]:
                for k in range(d):
                    pos[jj, k] = cand_j[k]
                fit[jj] = fj
                if fj < fb or (fj == fb and jj < b):
                    b, fb = jj, fj
        else:
            for k in range(d):
                pos[i, k] = cand_i[k]
                pos[jj, k] = cand_j[k]
            fit[i] = fi
            fit[jj] = fj
            if b == i or b == jj:
                b, fb = _argmin_scan(fit)
            else:
                if fi < fb or (fi == fb and i < b):
                    b, fb = i, fi
                if fj < fb or (fj == fb and jj < b):
                    b, fb = jj, fj
    return 2 * n


def _sais_commensalism(pos, fit, lower, upper, J, R, noise, objective):
    """Move each row along (best - partner); the partner is left untouched."""
    n, d = pos.shape
    rw = R.shape[1]
    cand = np.empty(d)
    b, fb = _argmin_scan(fit)
    for i in range(n):
        jj = J[i]
        if jj >= i:
            jj += 1
        for k in range(d):
            u = R[i, k] if rw == d else R[i, 0]
            r = 2.0 * u - 1.0
            v = pos[i, k] + r * (pos[b, k] - pos[jj, k])
            if v < lower[k]:
                v = lower[k]
            elif v > upper[k]:
                v = upper[k]
            cand[k] = v
        fi = objective(cand) + noise[i]
        for k in range(d):
            pos[i, k] = cand[k]
        fit[i] = fi
        if b == i:
            b, fb = _argmin_scan(fit)
        elif fi < fb or (fi == fb and i < b):
            b, fb = i, fi
    return n


def _sais_parasitism(pos, fit, lower, upper, U, noise, objective):
    """Challenge each row with a fresh uniform antibody; keep the fitter one."""
    n, d = pos.shape
    cand = np.empty(d)
    for i in range(n):
        for k in range(d):
            cand[k] = lower[k] + U[i, k] * (upper[k] - lower[k])
        fi = objective(cand) + noise[i]
        if fi < fit[i]:
            for k in range(d):
                pos[i, k] = cand[k]
            fit[i] = fi
    return n


# ---------------------------------------------------------------------------
# SOS phases: greedy acceptance, whole population, sequential.
# ---------------------------------------------------------------------------

def _sos_mutualism(pos, fit, lower, upper, J, BF1, BF2, R1, R2, noise, objective):
    """Classic mutualism: two benefit factors, candidates accepted greedily."""
    n, d = pos.shape
    cand_i = np.empty(d)
    cand_j = np.empty(d)
    b, fb = _argmin_scan(fit)
    for i in range(n):
        jj = J[i]
        if jj >= i:
            jj += 1
        b1 = float(BF1[i])
        b2 = float(BF2[i])
        for k in range(d):
            mv = (pos[i, k] + pos[jj, k]) * 0.5
            vi = pos[i, k] + R1[i, k] * (pos[b, k] - mv * b1)
            vj = pos[jj, k] + R2[i, k] * (pos[b, k] - mv * b2)
            if vi < lower[k]:
                vi = lower[k]
            elif vi > upper[k]:
                vi = upper[k]
            if vj < lower[k]:
                vj = lower[k]
            elif vj > upper[k]:
                vj = upper[k]
            cand_i[k] = vi
            cand_j[k] = vj
        fi = objective(cand_i) + noise[2 * i]
        fj = objective(cand_j) + noise[2 * i + 1]
        if fi < fit[i]:
            for k in range(d):
                pos[i, k] = cand_i[k]
            fit[i] = fi
            if fi < fb or (fi == fb and i < b):
                b, fb = i, fi
        if fj < fit[jj]:
            for k in range(d):
                pos[jj, k] = cand_j[k]
            fit[jj] = fj
            if fj < fb or (fj == fb and jj < b):
                b, fb = jj, fj
    return 2 * n


def _sos_commensalism(pos, fit, lower, upper, J, R, noise, objective):
    """Commensal move toward the best, accepted only when strictly better."""
    n, d = pos.shape
    cand = np.empty(d)
    b, fb = _argmin_scan(fit)
    for i in range(n):
        jj = J[i]
        if jj >= i:
            jj += 1
        for k in range(d):
            r = 2.0 * R[i, k] - 1.0
            v = pos[i, k] + r * (pos[b, k] - pos[jj, k])
            if v < lower[k]:
                v = lower[k]
            elif v > upper[k]:
                v = upper[k]
            cand[k] = v
        fi = objective(cand) + noise[i]
        if fi < fit[i]:
            for k in range(d):
                pos[i, k] = cand[k]
            fit[i] = fi
            if fi < fb or (fi == fb and i < b):
                b, fb = i, fi
    return n


def _sos_parasitism(pos, fit, lower, upper, J, M, F, U, noise, objective):
    """Parasite vector from host i challenges a random victim jj.

    The parasite copies the host and re-randomizes each dimension
    independently with probability 1/2 (mask M < 0.5); if no dimension was
    selected, dimension F[i] is forced.
    """
    n, d = pos.shape
    cand = np.empty(d)
    for i in range(n):
        jj = J[i]
        if jj >= i:
            jj += 1
        mutated = False
        for k in range(d):
            if M[i, k] < 0.5:
                cand[k] = lower[k] + U[i, k] * (upper[k] - lower[k])
                mutated = True
            else:
                cand[k] = pos[i, k]
        if not mutated:
            k = F[i]
            cand[k] = lower[k] + U[i, k] * (upper[k] - lower[k])
        fi = objective(cand) + noise[i]
        if fi < fit[jj]:
            for k in range(d):
                pos[jj, k] = cand[k]
            fit[jj] = fi
    return n


def _evaluate_rows(pos, noise, fit, objective):
    """Evaluate every row of `pos` into `fit`, adding pre-drawn noise."""
    n = pos.shape[0]
    for i in range(n):
        fit[i] = objective(pos[i]) + noise[i]
    return n


_IMPLS = {
    "sais_mutualism": _sais_mutualism,
    "sais_commensalism": _sais_commensalism,
    "sais_parasitism": _sais_parasitism,
    "sos_mutualism": _sos_mutualism,
    "sos_commensalism": _sos_commensalism,
    "sos_parasitism": _sos_parasitism,
    "evaluate_rows": _evaluate_rows,
}

KERNELS = {
    "python": _IMPLS,
    "numba": {name: njit(cache=True)(fn) for name, fn in _IMPLS.items()} if NUMBA_AVAILABLE else _IMPLS,
}


def is_compiled_objective(objective) -> bool:
    """True when `objective` can be called from inside numba kernels."""
    return NUMBA_AVAILABLE and isinstance(objective, Dispatcher)
