"""Derivative-free maximization of ratio objectives, q-grid scans, and the
alpha bisection feeding the equivalence probes.

The simplex search tolerates Monte Carlo noise in the objectives; restarts
from three box corners and the center mitigate local maxima.  Degenerate
parameter points return a -inf sentinel and are excluded from the argmax.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidArgument, RangeError


@dataclass
class OptimizationTask:
    objective: Callable[[np.ndarray], float]
    box: Sequence  # ((lo, hi), ...) per coordinate
    budget: int = 200
    seed: int = 0

    def __post_init__(self):
        self.box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        for lo, hi in self.box:
            if not lo < hi:
                raise InvalidArgument("empty box")
        if self.budget < len(self.box) + 1:
            raise InvalidArgument("budget must cover at least one simplex")


@dataclass
class MaximizeResult:
    theta: np.ndarray
    value: float
    trace: list = field(repr=False, default_factory=list)
    evaluations: int = 0
    truncated: bool = False


def _clip(x, box):
    return np.array([min(max(v, lo), hi) for v, (lo, hi) in zip(x, box)])


def _nelder_mead_max(fn, x0, box, budget, trace, diam_tol=1e-4):
    """Compact Nelder-Mead on -fn with box clipping; returns evals used."""
    d = len(x0)
    scale = np.array([hi - lo for lo, hi in box])
    simplex = [np.array(x0, dtype=float)]
    for i in range(d):
        v = np.array(x0, dtype=float)
        v[i] = min(v[i] + 0.15 * scale[i], box[i][1])
        if v[i] == x0[i]:
            v[i] = max(x0[i] - 0.15 * scale[i], box[i][0])
        simplex.append(v)
    evals = 0

    def f(x):
        nonlocal evals
        evals += 1
        val = fn(_clip(x, box))
        trace.append((tuple(_clip(x, box)), val))
        return val

    vals = [f(v) for v in simplex]
    while evals < budget:
        order = np.argsort(vals)[::-1]  # descending: best first
        simplex = [simplex[i] for i in order]
        vals = [vals[i] for i in order]
        best, worst = vals[0], vals[-1]
        rel_diam = max(
            float(np.max(np.abs(simplex[i] - simplex[0]) / scale)) for i in range(1, d + 1)
        )
        if rel_diam < diam_tol:
            break
        centroid = np.mean(simplex[:-1], axis=0)
        xr = centroid + (centroid - simplex[-1])
        fr = f(xr)
        if fr > best:
            xe = centroid + 2.0 * (centroid - simplex[-1])
            fe = f(xe) if evals < budget else -math.inf
            if fe > fr:
                simplex[-1], vals[-1] = xe, fe
            else:
                simplex[-1], vals[-1] = xr, fr
        elif fr > vals[-2]:
            simplex[-1], vals[-1] = xr, fr
        else:
            xc = centroid + 0.5 * (simplex[-1] - centroid)
            fc = f(xc) if evals < budget else -math.inf
            if fc > worst:
                simplex[-1], vals[-1] = xc, fc
            else:
                for i in range(1, d + 1):
                    if evals >= budget:
                        break
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    vals[i] = f(simplex[i])
    return evals


def maximize(task: OptimizationTask) -> MaximizeResult:
    """Simplex maximization with restarts from 3 corners + center.

    value >= objective at every trace point; deterministic given the seed;
    a budget too small to finish flags ``truncated`` and returns the best
    initial-simplex point seen.
    """
    box = task.box
    d = len(box)
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    center = 0.5 * (lo + hi)
    rng = np.random.default_rng(task.seed)
    corners = [lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo)]
    mixed = lo + (hi - lo) * (np.arange(d) % 2)
    corners.append(_clip(mixed * 0.9 + center * 0.1, box))
    starts = [center] + corners
    trace: list = []

    def fn(x):
        try:
            v = float(task.objective(np.asarray(x, dtype=float)))
        except (ArithmeticError, RangeError):
            return -math.inf
        if math.isnan(v):
            return -math.inf
        return v

    used = 0
    truncated = False
    per_restart = max(task.budget // len(starts), d + 1)
    for s in starts:
        if used >= task.budget:
            truncated = True
            break
        jitter = 0.01 * (hi - lo) * rng.standard_normal(d) if used > 0 else 0.0
        budget_here = min(per_restart, task.budget - used)
        if budget_here < d + 2:
            # no room for a full simplex pass: just evaluate the start
            fn_val = fn(_clip(s + jitter, box))
            trace.append((tuple(_clip(s + jitter, box)), fn_val))
            used += 1
            truncated = True
            continue
        used += _nelder_mead_max(fn, _clip(s + jitter, box), box, budget_here, trace)
    finite = [(th, v) for th, v in trace if math.isfinite(v)]
    if not finite:
        raise InvalidArgument("no feasible point: every evaluation was degenerate")
    best = max(finite, key=lambda tv: tv[1])
    return MaximizeResult(np.array(best[0]), best[1], trace, used, truncated)


# ---------------------------------------------------------------------------
# q-grid scans


@dataclass
class QScanResult:
    q_grid: np.ndarray
    sups: np.ndarray
    argmax_thetas: list
    tail_statistic: float
    divergence_flag: bool


def q_scan(
    ratio_closure: Callable[[float, np.ndarray], float],
    q_grid: Sequence[float],
    box: Sequence,
    budget_per_q: int = 60,
    seed: int = 0,
) -> QScanResult:
    """Family sup of ratio_closure(q, theta) per q on an ascending grid.

    tail statistic = max of the last two sups; the scan is flagged
    non-bounded when the last sup exceeds twice the median.
    """
    q_grid = np.asarray(sorted(q_grid), dtype=float)
    if len(q_grid) < 4:
        raise InvalidArgument("q grid needs at least 4 points")
    sups = []
    thetas = []
    for i, q in enumerate(q_grid):
        task = OptimizationTask(
            objective=lambda th, q=q: ratio_closure(q, th),
            box=box,
            budget=budget_per_q,
            seed=seed + i,
        )
        res = maximize(task)
        sups.append(res.value)
        thetas.append(res.theta)
    sups = np.array(sups)
    tail = float(np.max(sups[-2:]))
    median = float(np.median(sups))
    return QScanResult(q_grid, sups, thetas, tail, bool(sups[-1] > 2.0 * median))


def alpha_bisect(
    cap_closure: Callable[[float], bool],
    bracket,
    rel_tol: float = 1e-3,
    max_iter: int = 20,
) -> float:
    """Largest alpha in the bracket for which cap_closure stays True.

    cap_closure must be monotone (True below the threshold).  Endpoints not
    straddling the transition raise RangeError.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not 0 < lo < hi:
        raise InvalidArgument("need 0 < lo < hi")
    if not cap_closure(lo):
        raise RangeError(f"cap already exceeded at the lower bracket alpha={lo:g}")
    if cap_closure(hi):
        raise RangeError(f"cap never reached up to alpha={hi:g}; enlarge the bracket")
    for _ in range(max_iter):
        mid = math.sqrt(lo * hi)
        if cap_closure(mid):
            lo = mid
        else:
            hi = mid
        if (hi - lo) <= rel_tol * lo:
            break
    return lo
