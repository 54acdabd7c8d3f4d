import math

import numpy as np
import pytest

from hypoineq import quadrature as qd
from hypoineq.errors import InvalidArgument, UnsupportedOperation
from hypoineq.trials import (
    euclidean_gradient,
    horizontal_gradient,
    horizontal_gradient_batch,
    make_family,
    normalize,
)


def test_family_registry(en2):
    for name in ("gaussian", "bump", "moser-spike", "rev-hls", "power-cutoff", "ring"):
        fam = make_family(name, en2.group, en2)
        assert fam.name == name
    with pytest.raises(InvalidArgument):
        make_family("fourier-bubble", en2.group, en2)


def test_rev_hls_member(en2):
    # f_R(x) = |x|^-(Q+lambda) on 1 <= |x| <= R, Q = 2, lambda = 1, R = 100
    f = make_family("rev-hls", en2.group, en2).member(1.0, 100.0)
    assert f(np.array([[2.0, 0.0]]))[0] == pytest.approx(2.0**-3)
    assert f(np.array([[0.5, 0.0]]))[0] == 0.0
    assert f(np.array([[200.0, 0.0]]))[0] == 0.0
    assert f.support_radius == 100.0


def test_moser_spike_plateau(en2):
    m = make_family("moser-spike", en2.group, en2).member(0.1)
    # plateau value 1 inside |x| <= delta
    assert m(np.array([[0.05, 0.0]]))[0] == pytest.approx(1.0)
    assert m(np.array([[0.0, 0.0]]))[0] == pytest.approx(1.0)
    # log decay between delta and 1, zero outside
    assert m(np.array([[math.sqrt(0.1), 0.0]]))[0] == pytest.approx(0.5, rel=1e-12)
    assert m(np.array([[1.5, 0.0]]))[0] == 0.0
    assert m.smoothness == "piecewise"


def test_gaussian_member_and_dilation_coherence(en2):
    fam = make_family("gaussian", en2.group, en2)
    g = fam.member(1.0)
    assert g(np.zeros((1, 2)))[0] == pytest.approx(1.0)
    # Gaussian(s) o dilate(lam) = Gaussian(s/lam) in the abelian case
    lam = 2.0
    g_dil = lambda x: g.fn(lam * np.asarray(x))
    g_half = fam.member(1.0 / lam)
    xs = np.random.default_rng(0).standard_normal((50, 2))
    assert np.allclose(g_dil(xs), g_half(xs), rtol=1e-13)


def test_bump_support(en2):
    b = make_family("bump", en2.group, en2).member(2.0)
    assert b(np.array([[1.99, 0.0]]))[0] > 0.0
    assert b(np.array([[2.01, 0.0]]))[0] == 0.0
    assert b.support_radius == 2.0


def test_param_box_enforced(en2):
    fam = make_family("moser-spike", en2.group, en2)
    with pytest.raises(InvalidArgument):
        fam.member(1.5)
    with pytest.raises(InvalidArgument):
        fam.member(0.1, 0.2)


# horizontal gradient -------------------------------------------------------


def test_horizontal_gradient_oracle(kaplan):
    g = kaplan.group
    # analytic oracle from the group law: X = d/dx - (y/2) d/dt, Y = d/dy + (x/2) d/dt
    f = lambda p: np.asarray(p)[..., 2]  # f(x,y,t) = t
    grad = horizontal_gradient(f, g, np.array([1.0, 0.0, 0.0]))
    assert grad == pytest.approx([0.0, 0.5], abs=1e-10)
    grad2 = horizontal_gradient(f, g, np.array([0.3, -0.7, 2.0]))
    assert grad2 == pytest.approx([0.7 / 2.0, 0.3 / 2.0], abs=1e-9)


def test_horizontal_gradient_planar_and_const(kaplan):
    g = kaplan.group
    # f radial in |z| only: the t-twist cancels, grad_H = planar gradient
    f = lambda p: np.asarray(p)[..., 0] ** 2 + np.asarray(p)[..., 1] ** 2
    grad = horizontal_gradient(f, g, np.array([0.5, -1.0, 3.0]))
    assert grad == pytest.approx([1.0, -2.0], abs=1e-9)
    const = lambda p: np.full(np.asarray(p).shape[:-1], 4.2)
    assert horizontal_gradient(const, g, np.array([1.0, 2.0, 3.0])) == pytest.approx(
        [0.0, 0.0], abs=1e-12
    )


def test_horizontal_gradient_second_order(kaplan):
    g = kaplan.group
    # cubic test function: FD error drops ~4x when h halves
    f = lambda p: np.asarray(p)[..., 0] ** 3 + np.asarray(p)[..., 2] ** 2
    x = np.array([0.7, 0.4, 0.9])
    exact_x = 3 * 0.7**2 + 2 * 0.9 * (-0.4 / 2.0)
    errs = []
    for h in (1e-2, 5e-3):
        grad = horizontal_gradient(f, g, x, h=h)
        errs.append(abs(grad[0] - exact_x))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=0.15)


def test_horizontal_gradient_errors(en2, kaplan):
    with pytest.raises(UnsupportedOperation):
        horizontal_gradient(lambda p: p[..., 0], en2.group, np.zeros(2))
    with pytest.raises(InvalidArgument):
        horizontal_gradient(lambda p: p[..., 0], kaplan.group, np.zeros(3), h=-1.0)


def test_gradient_batch_matches_single(kaplan):
    g = kaplan.group
    f = lambda p: np.sin(np.asarray(p)[..., 0]) * np.asarray(p)[..., 2]
    pts = np.random.default_rng(1).standard_normal((20, 3))
    batch = horizontal_gradient_batch(f, g, pts, h=1e-5)
    for i in (0, 7, 19):
        single = horizontal_gradient(f, g, pts[i], h=1e-5)
        assert np.allclose(batch[i], single, atol=1e-9)


def test_euclidean_gradient():
    f = lambda p: np.asarray(p)[..., 0] ** 2 - 3 * np.asarray(p)[..., 1]
    grad = euclidean_gradient(f, np.array([2.0, 5.0]))
    assert grad == pytest.approx([4.0, -3.0], abs=1e-8)


# normalization --------------------------------------------------------------


def test_normalize_l2_gaussian(en2):
    fam = make_family("gaussian", en2.group, en2)
    g = fam.member(2.0**-0.5)  # exp(-|x|^2), ||.||_2 = sqrt(pi/2)
    nf = normalize(g, ("lp", 2.0, qd.whole_group(en2)))
    est = qd.lp_norm(nf, 2.0, qd.whole_group(en2), tolerance=1e-8)
    assert est.value == pytest.approx(1.0, abs=1e-6)
    # oracle scale: 1 / sqrt(pi/2)
    assert nf(np.zeros((1, 2)))[0] == pytest.approx((math.pi / 2.0) ** -0.5, rel=1e-6)


def test_normalize_already_normalized(en2):
    fam = make_family("gaussian", en2.group, en2)
    g = fam.member(2.0**-0.5).scaled((math.pi / 2.0) ** -0.5)
    nf = normalize(g, ("lp", 2.0, qd.whole_group(en2)))
    assert nf(np.zeros((1, 2)))[0] == pytest.approx(g(np.zeros((1, 2)))[0], rel=1e-5)


def test_normalize_zero_function(en2):
    fam = make_family("gaussian", en2.group, en2)
    z = fam.member(1.0).scaled(0.0)
    with pytest.raises(InvalidArgument):
        normalize(z, ("lp", 2.0, qd.whole_group(en2)))


def test_normalize_sobolev_and_gradient_paths(en2, kaplan):
    from hypoineq.kernels import box_for, sobolev_norm

    g = make_family("gaussian", en2.group, en2).member(1.0)
    pbox = box_for(g.effective_radius(1e-10), 128, 2)
    nf = normalize(g, ("sobolev", 1.0, 2.0, pbox))
    assert sobolev_norm(nf, 1.0, 2.0, pbox) == pytest.approx(1.0, abs=1e-8)

    bK = make_family("bump", kaplan.group, kaplan).member(1.0)
    nfK = normalize(bK, ("grad_q", qd.ball(kaplan, 1.5)))
    assert nfK.label.startswith("bump")
