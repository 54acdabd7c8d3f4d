import math

import numpy as np
import pytest

from hypoineq.errors import InvalidArgument, RangeError
from hypoineq.estimation import (
    OptimizationTask,
    alpha_bisect,
    maximize,
    q_scan,
)


def test_maximize_quadratic():
    task = OptimizationTask(lambda th: -(th[0] - 0.3) ** 2, ((0.0, 1.0),), budget=300,
                            seed=0)
    res = maximize(task)
    assert res.theta[0] == pytest.approx(0.3, abs=1e-4)
    assert res.value == pytest.approx(0.0, abs=1e-8)
    # value dominates every trace point
    assert all(res.value >= v for _, v in res.trace if math.isfinite(v))


def test_maximize_deterministic():
    task = OptimizationTask(lambda th: math.sin(3 * th[0]) + th[1], ((0.0, 2.0), (0.0, 1.0)),
                            budget=240, seed=7)
    r1 = maximize(task)
    r2 = maximize(OptimizationTask(task.objective, task.box, 240, 7))
    assert np.array_equal(r1.theta, r2.theta) and r1.value == r2.value


def test_maximize_budget_monotone():
    obj = lambda th: -(th[0] - 0.61) ** 2 - (th[1] + 0.2) ** 2
    box = ((0.0, 1.0), (-1.0, 1.0))
    v1 = maximize(OptimizationTask(obj, box, budget=60, seed=3)).value
    v2 = maximize(OptimizationTask(obj, box, budget=120, seed=3)).value
    assert v2 >= v1


def test_maximize_scale_invariant_flat():
    # scale-invariant objectives give a flat trace: constant closure
    task = OptimizationTask(lambda th: 1.234, ((0.1, 10.0),), budget=60, seed=1)
    res = maximize(task)
    vals = [v for _, v in res.trace]
    assert max(vals) - min(vals) == 0.0
    assert res.value == 1.234


def test_maximize_tiny_budget_truncates():
    task = OptimizationTask(lambda th: -th[0] ** 2, ((0.0, 1.0),), budget=2, seed=0)
    res = maximize(task)
    assert res.truncated
    assert math.isfinite(res.value)


def test_maximize_degenerate_everywhere():
    task = OptimizationTask(lambda th: float("nan"), ((0.0, 1.0),), budget=40, seed=0)
    with pytest.raises(InvalidArgument):
        maximize(task)


def test_task_validation():
    with pytest.raises(InvalidArgument):
        OptimizationTask(lambda th: 0.0, ((1.0, 1.0),), budget=10)
    with pytest.raises(InvalidArgument):
        OptimizationTask(lambda th: 0.0, ((0.0, 1.0),), budget=1)


# q scans ---------------------------------------------------------------------


def test_q_scan_flat():
    res = q_scan(lambda q, th: 2.5, [2, 4, 8, 16], box=((0.0, 1.0),), budget_per_q=15,
                 seed=0)
    assert not res.divergence_flag
    assert res.tail_statistic == pytest.approx(2.5)
    assert np.allclose(res.sups, 2.5)


def test_q_scan_divergent_flagged():
    res = q_scan(lambda q, th: q**2, [2, 4, 8, 16, 32], box=((0.0, 1.0),),
                 budget_per_q=15, seed=0)
    assert res.divergence_flag
    with pytest.raises(InvalidArgument):
        q_scan(lambda q, th: 1.0, [2, 4], box=((0.0, 1.0),))


def test_q_scan_optimizes_theta():
    # sup over theta of -(theta - q/40)^2 + 1 is 1, attained at theta = q/40
    res = q_scan(lambda q, th: 1.0 - (th[0] - q / 40.0) ** 2, [2, 4, 8, 16],
                 box=((0.0, 1.0),), budget_per_q=60, seed=2)
    assert np.allclose(res.sups, 1.0, atol=1e-6)
    for q, theta in zip(res.q_grid, res.argmax_thetas):
        assert theta[0] == pytest.approx(q / 40.0, abs=1e-2)


# alpha bisection ----------------------------------------------------------------


def test_alpha_bisect_step():
    got = alpha_bisect(lambda a: a < 0.5, (0.01, 1.0))
    assert got == pytest.approx(0.5, rel=2e-3)


def test_alpha_bisect_monotone_reparam_invariant():
    # bisection uses the indicator only: same threshold under reparametrization
    g1 = alpha_bisect(lambda a: a < 0.2, (0.01, 1.0), rel_tol=1e-4)
    g2 = alpha_bisect(lambda a: math.exp(a) < math.exp(0.2), (0.01, 1.0), rel_tol=1e-4)
    assert g1 == pytest.approx(g2, rel=1e-6)


def test_alpha_bisect_bracket_errors():
    with pytest.raises(RangeError):
        alpha_bisect(lambda a: False, (0.01, 1.0))
    with pytest.raises(RangeError):
        alpha_bisect(lambda a: True, (0.01, 1.0))
    with pytest.raises(InvalidArgument):
        alpha_bisect(lambda a: a < 0.5, (1.0, 0.5))
