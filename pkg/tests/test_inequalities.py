import math
import warnings

import numpy as np
import pytest
from scipy import integrate as sp_integrate
from scipy import special

from hypoineq import inequalities as iq
from hypoineq.errors import DegenerateInput, InvalidArgument
from hypoineq.trials import make_family


# admissibility ----------------------------------------------------------------


def test_int_hardy_balance(en2):
    spec = iq.InequalitySpec("int-hardy", en2, {"p": 2, "q": 2, "a": 0.5, "b": 1.0})
    assert iq.admissible(spec).ok
    bad = iq.InequalitySpec("int-hardy", en2, {"p": 2, "q": 2, "a": 0.6, "b": 1.0})
    verdict = iq.admissible(bad)
    assert not verdict.ok and any("a/Q" in v for v in verdict.violations)


def test_hls_balance(en2):
    spec = iq.InequalitySpec("hls", en2, {"p": 4 / 3, "q": 4 / 3, "lambda": 1.0, "alpha": 0.0})
    assert iq.admissible(spec).ok
    bad = iq.InequalitySpec("hls", en2, {"p": 2, "q": 2, "lambda": 1.0, "alpha": 0.0})
    assert not iq.admissible(bad).ok


def test_ckn_gamma_window(en3):
    # delta = 1 forces gamma <= beta(1-delta) = 0
    bad = iq.InequalitySpec("ckn", en3, {"p": 2, "q": 2, "r": 2, "delta": 1.0, "a": 1.0,
                                         "beta": 0.0, "gamma": 0.5})
    verdict = iq.admissible(bad)
    assert not verdict.ok
    assert any("gamma" in v for v in verdict.violations)


def test_ckn_classical_extension_flag(en3):
    delta = 0.5
    beta, a = -2.0, 1.0
    gamma = beta * (1 - delta) - delta * a
    spec = iq.InequalitySpec("ckn", en3, {"p": 2, "q": 2, "r": 2, "delta": delta,
                                          "a": a, "beta": beta, "gamma": gamma})
    verdict = iq.admissible(spec)
    assert verdict.ok
    assert verdict.flags["classical_extension"]  # beta <= -n/p breaks positivity
    mild = iq.InequalitySpec("ckn", en3, {"p": 2, "q": 2, "r": 2, "delta": 1.0,
                                          "a": 1.0, "beta": 0.0, "gamma": -1.0})
    assert not iq.admissible(mild).flags["classical_extension"]


def test_missing_parameter_and_unknown_theorem(en2):
    spec = iq.InequalitySpec("hls", en2, {"p": 2})
    with pytest.raises(InvalidArgument):
        iq.admissible(spec)
    with pytest.raises(InvalidArgument):
        iq.admissible(iq.InequalitySpec("sobolev-trace", en2, {}))


# hardy-sobolev family -----------------------------------------------------------


def test_hardy_sobolev_gaussian_oracle(en3):
    # closed-form oracle: ||f/|x|||_2^2 = 2 pi^(3/2), ||grad f||_2^2 = (3/2) pi^(3/2)
    spec = iq.InequalitySpec("hardy-sobolev", en3, {"p": 2, "q": 2, "a": 1, "b": 2})
    f = make_family("gaussian", en3.group, en3).member(1.0)
    rep = iq.hardy_sobolev_ratio(spec, f, M=96)
    assert rep.lhs == pytest.approx(math.sqrt(2.0 * math.pi**1.5), rel=1e-6)
    assert rep.rhs == pytest.approx(math.sqrt(1.5 * math.pi**1.5), rel=1e-4)
    assert rep.ratio == pytest.approx(math.sqrt(4.0 / 3.0), abs=1e-3)


def test_scalar_invariance_exact(en3):
    spec = iq.InequalitySpec("hardy-sobolev", en3, {"p": 2, "q": 2, "a": 1, "b": 2})
    f = make_family("gaussian", en3.group, en3).member(1.0)
    base = iq.hardy_sobolev_ratio(spec, f, M=64).ratio
    scaled = iq.hardy_sobolev_ratio(spec, f.scaled(-17.3), M=64).ratio
    assert scaled == pytest.approx(base, abs=1e-12)


def test_ratio_cauchy_under_refinement(en3):
    spec = iq.InequalitySpec("hardy-sobolev", en3, {"p": 2, "q": 2, "a": 1, "b": 2})
    f = make_family("gaussian", en3.group, en3).member(1.0)
    r64 = iq.hardy_sobolev_ratio(spec, f, M=64).ratio
    r128 = iq.hardy_sobolev_ratio(spec, f, M=128).ratio
    assert abs(r64 - r128) <= 1e-3 * r128


def test_dilation_invariance(en3):
    spec = iq.InequalitySpec("hardy-sobolev", en3, {"p": 2, "q": 2, "a": 1, "b": 2})
    f = make_family("gaussian", en3.group, en3).member(1.0)
    base = iq.hardy_sobolev_ratio(spec, f, M=96).ratio
    for lam in (0.5, 2.0):
        val = iq.hardy_sobolev_ratio(spec, iq.dilated(f, en3.group, lam), M=96).ratio
        assert val == pytest.approx(base, rel=1e-2)


def test_sobolev_specialization_b0(en2):
    # b = 0 reproduces the Sobolev ratio through the same evaluator
    spec = iq.InequalitySpec("hardy-sobolev", en2, {"p": 2, "q": 4, "a": 0.5, "b": 0})
    f = make_family("gaussian", en2.group, en2).member(1.0)
    rep = iq.hardy_sobolev_ratio(spec, f, M=128)
    # here the LHS is the plain L^4 norm: (pi/2)^(1/4) for exp(-|x|^2/2)
    assert rep.lhs == pytest.approx((math.pi / 2.0) ** 0.25, rel=1e-6)
    ckn_spec = iq.InequalitySpec("ckn", en2, {"p": 2, "q": 4, "r": 4, "delta": 1.0,
                                              "a": 0.5, "beta": 0.0, "gamma": 0.0})
    rep2 = iq.ckn_ratio(ckn_spec, f, M=128)
    assert rep2.ratio == pytest.approx(rep.ratio, abs=1e-10)


def test_ckn_delta1_equals_hardy_sobolev(en3):
    f = make_family("gaussian", en3.group, en3).member(1.0)
    spec_ckn = iq.InequalitySpec("ckn", en3, {"p": 2, "q": 2, "r": 2, "delta": 1.0,
                                              "a": 1.0, "beta": 0.0, "gamma": -1.0})
    spec_hs = iq.InequalitySpec("hardy-sobolev", en3, {"p": 2, "q": 2, "a": 1, "b": 2})
    assert iq.ckn_ratio(spec_ckn, f, M=96).ratio == pytest.approx(
        iq.hardy_sobolev_ratio(spec_hs, f, M=96).ratio, abs=1e-10
    )


def test_uncertainty_chain_gaussian(en3):
    # the Gaussian saturates the n/2 uncertainty bound on R^3
    spec = iq.InequalitySpec("uncertainty", en3, {"p": 2, "q": 2, "a": 1, "b": 2})
    f = make_family("gaussian", en3.group, en3).member(1.0)
    rep = iq.uncertainty_chain(spec, f, M=96)
    assert rep.ratio == pytest.approx(1.5, abs=2e-3)
    assert rep.detail["hoelder_defect"] >= -1e-10
    # Hoelder step is an equality for b/q-weight pairing of the same Gaussian
    # only when the two factors align; defect must vanish for |x|f vs f/|x|
    zero = f.scaled(0.0)
    with pytest.raises(DegenerateInput):
        iq.uncertainty_chain(spec, zero, M=64)


def test_degenerate_input(en3):
    spec = iq.InequalitySpec("hardy-sobolev", en3, {"p": 2, "q": 2, "a": 1, "b": 2})
    zero = make_family("gaussian", en3.group, en3).member(1.0).scaled(0.0)
    with pytest.raises(DegenerateInput):
        iq.hardy_sobolev_ratio(spec, zero, M=64)


# convolution inequalities -------------------------------------------------------


def test_int_hardy_bounded_family(en2):
    spec = iq.InequalitySpec("int-hardy", en2, {"p": 2, "q": 2, "a": 0.5, "b": 1.0})
    fam = make_family("gaussian", en2.group, en2)
    ratios = [iq.int_hardy_ratio(spec, fam.member(s)).ratio for s in (0.5, 1.0, 2.0)]
    assert all(math.isfinite(r) for r in ratios)
    # balance makes the ratio dilation invariant
    assert max(ratios) / min(ratios) < 1.2


def test_int_hardy_riesz_consistent_with_power(en2):
    spec_p = iq.InequalitySpec("int-hardy", en2, {"p": 2, "q": 2, "a": 0.5, "b": 1.0})
    spec_r = iq.InequalitySpec("int-hardy", en2, {"p": 2, "q": 2, "a": 0.5, "b": 1.0},
                               kernel="riesz")
    f = make_family("gaussian", en2.group, en2).member(1.0)
    from hypoineq.kernels import riesz_kernel

    coeff = float(riesz_kernel(0.5, 1.0, 2.0))
    r_pow = iq.int_hardy_ratio(spec_p, f).ratio
    r_rz = iq.int_hardy_ratio(spec_r, f).ratio
    assert r_rz == pytest.approx(coeff * r_pow, rel=1e-9)


def test_log_hardy_ratio_finite(en2):
    spec = iq.InequalitySpec("log-hardy", en2, {"p": 2, "r": 3, "q": 3})
    f = make_family("gaussian", en2.group, en2).member(1.0)
    rep = iq.log_hardy_ratio(spec, f)
    assert math.isfinite(rep.ratio) and rep.ratio > 0


# bilinear HLS ------------------------------------------------------------------


def disk_energy_oracle():
    """int_B int_B |x - y|^-1 over unit disks via elliptic integrals; equals 16 pi/3."""

    def V(rho):
        def f(s):
            m = min(4 * rho * s / (rho + s) ** 2, 1.0 - 1e-14) if rho + s > 0 else 0.0
            return 4 * s / (rho + s) * special.ellipk(m)

        v1 = sp_integrate.quad(f, 0, rho, limit=300)[0] if rho > 0 else 0.0
        return v1 + sp_integrate.quad(f, rho, 1, limit=300)[0]

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return sp_integrate.quad(lambda rho: 2 * math.pi * rho * V(rho), 0, 1, limit=300)[0]


def test_hls_disk_oracle(en2):
    oracle = disk_energy_oracle()
    assert oracle == pytest.approx(16.0 * math.pi / 3.0, rel=1e-9)
    chi = make_family("power-cutoff", en2.group, en2).member(0.0, 1.0)
    spec = iq.InequalitySpec("hls", en2, {"p": 4 / 3, "q": 4 / 3, "lambda": 1.0, "alpha": 0.0})
    rep = iq.hls_bilinear(spec, chi, chi, budget=2_000_000, seed=9)
    assert rep.lhs == pytest.approx(oracle, abs=4 * rep.detail["mc_ci"])
    assert rep.rhs == pytest.approx(math.pi**1.5, rel=1e-9)  # ||chi||_{4/3}^2


def test_hls_scalar_invariance(en2):
    chi = make_family("power-cutoff", en2.group, en2).member(0.0, 1.0)
    spec = iq.InequalitySpec("hls", en2, {"p": 4 / 3, "q": 4 / 3, "lambda": 1.0, "alpha": 0.0})
    r1 = iq.hls_bilinear(spec, chi, chi, budget=200_000, seed=4).ratio
    r2 = iq.hls_bilinear(spec, chi.scaled(3.0), chi.scaled(0.5), budget=200_000, seed=4).ratio
    assert r2 == pytest.approx(r1, rel=1e-12)


def test_hls_heisenberg_finite(kaplan):
    bump = make_family("bump", kaplan.group, kaplan).member(1.0)
    spec = iq.InequalitySpec("hls", kaplan, {"p": 8 / 7, "q": 8 / 7, "lambda": 1.0,
                                             "alpha": 0.0})
    rep = iq.hls_bilinear(spec, bump, bump, budget=400_000, seed=5)
    assert math.isfinite(rep.ratio) and rep.ratio > 0


def test_hls_graded_instance(en2):
    spec = iq.InequalitySpec(
        "hls-graded", en2,
        {"p": 4 / 3, "q": 4 / 3, "a": 0.5, "b": 0.5, "lambda": 1.0, "alpha": 0.5,
         "beta": 0.5},
    )
    f = make_family("gaussian", en2.group, en2).member(1.0)
    rep = iq.hls_bilinear(spec, f, f, budget=400_000, seed=6, M=128)
    assert math.isfinite(rep.ratio) and rep.ratio > 0


# reversed HLS -------------------------------------------------------------------


def test_reversed_hls_closed_form(en2):
    rows = iq.reversed_hls_demo(en2, 1.0, [math.e, 100.0, 10_000.0])
    expected = [
        2.0 * (2 * math.pi) ** -0.5,
        2.0 * (2 * math.pi * math.log(100.0)) ** -0.5,
        2.0 * (2 * math.pi * math.log(10_000.0)) ** -0.5,
    ]
    for row, exp in zip(rows, expected):
        assert row.closed_form == pytest.approx(exp, rel=1e-12)
        assert row.rel_err <= 0.05
    assert rows[0].numeric > rows[1].numeric > rows[2].numeric
    with pytest.raises(InvalidArgument):
        iq.reversed_hls_demo(en2, 1.0, [0.5])
