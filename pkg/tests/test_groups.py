import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hypoineq import groups
from hypoineq.errors import InvalidArgument, UnsupportedOperation


def test_dilate_heisenberg(kaplan):
    g = kaplan.group
    assert np.allclose(groups.dilate(g, 2.0, np.array([1.0, 1.0, 1.0])), [2.0, 2.0, 4.0])


def test_dilate_identity_and_abelian(en2):
    x = np.array([0.3, -0.7])
    assert np.allclose(groups.dilate(en2.group, 1.0, x), x)
    assert np.allclose(groups.dilate(en2.group, 3.0, np.array([1.0, 0.0])), [3.0, 0.0])
    with pytest.raises(InvalidArgument):
        groups.dilate(en2.group, -1.0, x)


def test_group_axioms_sampled(kaplan):
    g = kaplan.group
    rng = np.random.default_rng(0)
    xs = rng.standard_normal((200, 3))
    ys = rng.standard_normal((200, 3))
    ident = np.zeros(3)
    assert np.max(np.abs(g.law(xs, ident) - xs)) < 1e-12
    assert np.max(np.abs(g.law(xs, g.inv(xs)))) < 1e-12
    # dilation is an automorphism
    for r in (0.5, 2.0):
        lhs = g.law(groups.dilate(g, r, xs), groups.dilate(g, r, ys))
        rhs = groups.dilate(g, r, g.law(xs, ys))
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_quasi_norm_axioms_kaplan(kaplan):
    rng = np.random.default_rng(1)
    xs = rng.standard_normal((10_000, 3)) * np.array([2.0, 2.0, 5.0])
    # inverse symmetry, exact
    assert np.max(np.abs(kaplan.eval(kaplan.group.inv(xs)) - kaplan.eval(xs))) < 1e-12
    # degree-1 homogeneity
    for lam in (0.25, 3.0):
        scaled = groups.dilate(kaplan.group, lam, xs)
        assert np.max(np.abs(kaplan.eval(scaled) - lam * kaplan.eval(xs))) < 1e-11
    assert kaplan.eval(np.zeros(3)) == 0.0


@settings(max_examples=200, deadline=None)
@given(
    x=st.tuples(*[st.floats(-5, 5) for _ in range(3)]),
    lam=st.floats(0.01, 100.0),
)
def test_kaplan_homogeneity_property(x, lam):
    kap = groups.from_id("H:1:kaplan")
    x = np.array(x)
    scaled = groups.dilate(kap.group, lam, x)
    assert kap.eval(scaled) == pytest.approx(lam * kap.eval(x), rel=1e-12, abs=1e-12)


def test_polar_coordinates(en2, kaplan):
    r, y = groups.polar_coordinates(en2, np.array([3.0, 4.0]))
    assert r == pytest.approx(5.0)
    assert np.allclose(y, [0.6, 0.8])
    # Kaplan norm acts as its own oracle: rho((0,0,4)) = 16^(1/4) = 2
    r, y = groups.polar_coordinates(kaplan, np.array([0.0, 0.0, 4.0]))
    assert r == pytest.approx(2.0, abs=1e-12)
    assert np.allclose(y, [0.0, 0.0, 1.0], atol=1e-12)
    # round trip
    x = np.array([0.3, -1.2, 0.7])
    r, y = groups.polar_coordinates(kaplan, x)
    assert abs(kaplan.eval(y) - 1.0) < 1e-12
    assert np.max(np.abs(groups.dilate(kaplan.group, r, y) - x)) < 1e-12
    with pytest.raises(InvalidArgument):
        groups.polar_coordinates(kaplan, np.zeros(3))


def test_polar_angular_part_dilation_invariant(kaplan):
    x = np.array([0.4, -0.2, 1.7])
    s, y = groups.polar_coordinates(kaplan, x)
    s2, y2 = groups.polar_coordinates(kaplan, groups.dilate(kaplan.group, 3.0, x))
    assert s2 == pytest.approx(3.0 * s, rel=1e-12)
    assert np.allclose(y, y2, atol=1e-12)


def test_sphere_measure_euclidean(en1, en2, en3):
    # closed-form oracles: |wp| = Q |B(0,1)|
    assert en2.sphere_measure().value == pytest.approx(2 * math.pi, abs=1e-9)
    assert en1.sphere_measure().value == pytest.approx(2.0, abs=1e-9)
    assert en3.sphere_measure().value == pytest.approx(4 * math.pi, rel=1e-7)


def test_sphere_measure_kaplan_against_mc_oracle(kaplan):
    # closed form |B| = pi^2/2 on H^1 (derived by slicing the quartic ball)
    exact = 4.0 * math.pi**2 / 2.0
    smooth = kaplan.sphere_measure().value
    assert smooth == pytest.approx(exact, rel=2e-4)
    mc = groups.sphere_measure(kaplan.group, kaplan, method="mc", seed=7)
    assert mc.value == pytest.approx(exact, rel=5e-3)
    assert mc.abs_error > 0


def test_ball_volume_homogeneity(kaplan):
    base = groups.ball_volume_quadrature(kaplan, 1.0, budget=400_000, seed=3)
    Q = kaplan.group.Q
    for r in (0.5, 1.0, 2.0, 4.0):
        est = groups.ball_volume_quadrature(kaplan, r, budget=400_000, seed=3)
        expected = base.value * r**Q
        tol = (est.abs_error + base.abs_error * r**Q) * 2 + 1e-12
        assert abs(est.value - expected) <= tol


def test_max_norm_ball_volume(en2):
    g = groups.abelian_group(2, [1.0, 2.0])
    norm = groups.weighted_max_norm(g)
    assert groups.unit_ball_volume_exact(norm) == pytest.approx(4.0)
    est = groups.ball_volume_quadrature(norm, 1.0, budget=200_000, seed=5)
    assert est.value == pytest.approx(4.0, rel=5e-3)
    # homogeneity of the weighted max gauge
    rng = np.random.default_rng(2)
    xs = rng.standard_normal((1000, 2))
    assert np.allclose(norm.eval(groups.dilate(g, 2.0, xs)), 2.0 * norm.eval(xs))


def test_triangle_constant_euclidean(en2):
    est = en2.triangle_constant(n_samples=50_000, seed=11)
    assert est.value <= 1.0 + 1e-12  # true norm
    assert est.value == pytest.approx(1.0, abs=1e-9)  # duplicate-pair probes attain 1


def test_triangle_constant_kaplan(kaplan):
    est = groups.triangle_constant(kaplan, n_samples=50_000, seed=11)
    assert 1.0 <= est.value <= 2.0
    x, y = est.pair
    denom = kaplan.eval(x) + kaplan.eval(y)
    assert kaplan.eval(kaplan.group.law(x, y)) / denom == pytest.approx(est.value, rel=1e-12)
    with pytest.raises(InvalidArgument):
        groups.triangle_constant(kaplan, n_samples=0)


def test_triangle_constant_monotone_in_samples(kaplan):
    vals = [groups.triangle_constant(kaplan, n, seed=13).value for n in (1000, 4000, 16000)]
    assert vals[0] <= vals[1] + 1e-15
    assert vals[1] <= vals[2] + 1e-15


def test_triangle_sampled_max_is_valid_bound(kaplan):
    # all sampled ratios (not only the max) satisfy |xy| <= C0(|x|+|y|)
    est = groups.triangle_constant(kaplan, 20_000, seed=17)
    xs, ys = groups.sample_pairs(kaplan.group, 20_000, 17)
    nxy = kaplan.eval(kaplan.group.law(xs, ys))
    bound = est.value * (kaplan.eval(xs) + kaplan.eval(ys))
    assert np.all(nxy <= bound * (1 + 1e-12) + 1e-300)


def test_from_id_errors():
    with pytest.raises(InvalidArgument):
        groups.from_id("X:2:1,1")
    with pytest.raises(InvalidArgument):
        groups.from_id("R:2:1,1:banana")
    with pytest.raises(UnsupportedOperation):
        groups.kaplan_norm(groups.abelian_group(2))
    with pytest.raises(UnsupportedOperation):
        groups.euclidean_norm(groups.abelian_group(2, [1.0, 2.0]))
