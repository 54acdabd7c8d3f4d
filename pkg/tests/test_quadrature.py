import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypoineq import quadrature as qd
from hypoineq.errors import AccuracyError, EvaluationError, InvalidArgument
from hypoineq.trials import make_family


def test_gaussian_integral(en2):
    g = make_family("gaussian", en2.group, en2).member(2.0**-0.5)  # exp(-|x|^2)
    est = qd.integrate(g, qd.whole_group(en2), tolerance=1e-8)
    assert est.value == pytest.approx(math.pi, abs=1e-6)
    assert est.abs_error <= 1e-8


def test_disk_area(en2):
    one = lambda x: np.ones(np.asarray(x).shape[0])
    est = qd.integrate(one, qd.ball(en2, 1.0), tolerance=2e-3, budget=10_000_000)
    assert est.value == pytest.approx(math.pi, abs=5e-3)
    est_mc = qd.integrate(one, qd.ball(en2, 1.0), tolerance=5e-3, method="mc",
                          budget=4_000_000, seed=1)
    assert est_mc.value == pytest.approx(math.pi, abs=3 * est_mc.abs_error)
    # indicator norm: || chi_B ||_1 = pi via the radial path
    est_r = qd.radial_integral(lambda r: 1.0, 0.0, 1.0, en2)
    assert est_r.value == pytest.approx(math.pi, rel=1e-10)


def test_zero_function(en2):
    zero = lambda x: np.zeros(np.asarray(x).shape[0])
    est = qd.integrate(zero, qd.ball(en2, 1.0), tolerance=1e-9)
    assert est.value == 0.0
    n = qd.lp_norm(zero, 2.0, qd.ball(en2, 1.0))
    assert n.value == 0.0


def test_lp_norm_gaussian(en2):
    g = make_family("gaussian", en2.group, en2).member(1.0)  # exp(-|x|^2/2)
    est = qd.lp_norm(g, 2.0, qd.whole_group(en2), tolerance=1e-8)
    assert est.value == pytest.approx(math.sqrt(math.pi), abs=1e-6)
    with pytest.raises(InvalidArgument):
        qd.lp_norm(g, 0.5, qd.whole_group(en2))


def test_lp_norm_sup(en2):
    g = make_family("gaussian", en2.group, en2).member(1.0)
    est = qd.lp_norm(g, math.inf, qd.ball(en2, 3.0), budget=100_000, seed=2)
    assert 0.9 <= est.value <= 1.0


def test_integrate_errors(en2):
    g = make_family("gaussian", en2.group, en2).member(1.0)
    with pytest.raises(InvalidArgument):
        qd.integrate(g, qd.whole_group(en2), tolerance=-1.0)
    with pytest.raises(AccuracyError) as exc:
        qd.integrate(g, qd.whole_group(en2), tolerance=1e-14, budget=5000)
    assert exc.value.partial is not None
    bad = lambda x: np.full(np.asarray(x).shape[0], np.nan)
    with pytest.raises(EvaluationError):
        qd.integrate(bad, qd.ball(en2, 1.0), tolerance=1e-3)
    # whole-group integral without support metadata
    with pytest.raises(InvalidArgument):
        qd.integrate(lambda x: np.ones(np.asarray(x).shape[0]), qd.whole_group(en2))


def test_radial_integral_log_and_divergence(en2):
    # the reversed-HLS building block: |x|^-2 over the annulus 1 <= |x| <= R
    est = qd.radial_integral(lambda r: r**-2.0, 1.0, 100.0, en2)
    assert est.value == pytest.approx(2 * math.pi * math.log(100.0), rel=1e-10)
    # ball volume: g = 1 on (0,1), Q=2, gives |wp|/2 = pi
    est = qd.radial_integral(lambda r: 1.0, 0.0, 1.0, en2)
    assert est.value == pytest.approx(math.pi, rel=1e-10)
    # non-integrable singularity flagged divergent
    div = qd.radial_integral(lambda r: r**-2.0, 0.0, 1.0, en2)
    assert div.divergent
    # divergent tail
    div2 = qd.radial_integral(lambda r: 1.0 / (1.0 + r), 0.0, math.inf, en2)
    assert div2.divergent
    # integrable singularity needs the hint
    with pytest.raises(AccuracyError):
        qd.radial_integral(lambda r: r**-1.5, 0.0, 1.0, en2)
    est = qd.radial_integral(lambda r: r**-1.5, 0.0, 1.0, en2, singular_hint=True)
    assert est.value == pytest.approx(2 * math.pi * 2.0, rel=1e-8)  # int r^-0.5 = 2
    with pytest.raises(InvalidArgument):
        qd.radial_integral(lambda r: 1.0, 2.0, 1.0, en2)


def test_radial_agrees_with_full_integration(en2):
    g = make_family("gaussian", en2.group, en2).member(1.0)
    full = qd.integrate(g, qd.whole_group(en2), tolerance=1e-8)
    rad = qd.radial_integral(lambda r: math.exp(-(r**2) / 2.0), 0.0, math.inf, en2)
    assert abs(full.value - rad.value) <= full.abs_error + rad.abs_error + 1e-9


def test_dilation_change_of_variables(en2):
    from hypoineq.groups import dilate

    g = make_family("gaussian", en2.group, en2).member(1.0)
    base = qd.integrate(g, qd.whole_group(en2), tolerance=1e-8).value
    for lam in (0.5, 2.0):
        shifted = make_family("gaussian", en2.group, en2).member(1.0 / lam)
        # f(dilate(lam, x)) = gaussian of width s/lam
        est = qd.integrate(shifted, qd.whole_group(en2), tolerance=1e-8).value
        assert est == pytest.approx(lam**-2.0 * base, rel=1e-4)


def test_refinement_cauchy(en2):
    g = make_family("gaussian", en2.group, en2).member(1.0)
    e1 = qd.integrate(g, qd.whole_group(en2), tolerance=1e-4)
    e2 = qd.integrate(g, qd.whole_group(en2), tolerance=1e-8)
    assert abs(e1.value - e2.value) <= e1.abs_error + e2.abs_error
    m1 = qd.integrate(g, qd.whole_group(en2), tolerance=6e-2, method="mc",
                      budget=1_000_000, seed=3)
    m2 = qd.integrate(g, qd.whole_group(en2), tolerance=6e-2, method="mc",
                      budget=4_000_000, seed=4)
    assert abs(m1.value - m2.value) <= m1.abs_error + m2.abs_error


# continuous Minkowski inequality ------------------------------------------


def test_minkowski_closed_form():
    # f1 = f2 = chi_(0,1), theta = 2: LHS = 1/3, RHS = (2/3)^2 = 4/9
    edges = np.array([0.0, 1.0, 2.0])
    f1 = np.array([1.0, 0.0])
    f2 = np.array([1.0, 0.0])
    rep = qd.minkowski_check(f1, f2, 2.0, edges)
    assert rep.lhs == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert rep.rhs == pytest.approx(4.0 / 9.0, rel=1e-12)
    assert rep.holds


def test_minkowski_theta_one_fubini():
    rng = np.random.default_rng(5)
    edges = np.sort(np.concatenate([[0.0], rng.uniform(0.1, 4.0, 6)]))
    f1 = rng.uniform(0.0, 3.0, 6)
    f2 = rng.uniform(0.0, 3.0, 6)
    rep = qd.minkowski_check(f1, f2, 1.0, edges)
    assert rep.lhs == pytest.approx(rep.rhs, rel=1e-8)


def test_minkowski_callable_inputs():
    edges = np.array([0.0, 1.0, 2.0])
    rep = qd.minkowski_check(lambda x: 1.0 if x < 1 else 0.0,
                             lambda x: 1.0 if x < 1 else 0.0, 2.0, edges)
    assert rep.lhs == pytest.approx(1.0 / 3.0, rel=1e-12)
    assert rep.rhs == pytest.approx(4.0 / 9.0, rel=1e-12)


def test_minkowski_zero_and_errors():
    edges = np.array([0.0, 1.0, 2.0])
    rep = qd.minkowski_check(np.array([1.0, 1.0]), np.zeros(2), 2.0, edges)
    assert rep.lhs == 0.0 and rep.rhs == 0.0 and rep.holds
    with pytest.raises(InvalidArgument):
        qd.minkowski_check(np.array([1.0, 1.0]), np.array([1.0, -1.0]), 2.0, edges)
    with pytest.raises(InvalidArgument):
        qd.minkowski_check(np.array([1.0, 1.0]), np.array([1.0, 1.0]), 0.5, edges)


@settings(max_examples=60, deadline=None)
@given(
    vals=st.lists(st.floats(0.0, 5.0), min_size=8, max_size=8),
    theta=st.floats(1.0, 4.0),
)
def test_minkowski_property(vals, theta):
    edges = np.linspace(0.0, 3.0, 5)
    f1 = np.array(vals[:4])
    f2 = np.array(vals[4:])
    rep = qd.minkowski_check(f1, f2, theta, edges)
    assert rep.holds
