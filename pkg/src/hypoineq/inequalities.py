"""Admissibility predicates and LHS/RHS/ratio evaluators for the
non-exponential inequalities: integral Hardy (convolution form), critical
log-Hardy, HLS (plus the reversed-HLS failure demo), Hardy-Sobolev /
Rellich / Sobolev, CKN, uncertainty, and the weighted graded HLS.

No attempt is made to certify the existence constants; the evaluators
report per-family ratios so uniform boundedness and the structural
invariances (scaling, dilation) can be asserted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import integrate as sp_integrate

from ._quadutil import quad_chunked
from .errors import DegenerateInput, InvalidArgument, UnsupportedOperation
from .groups import QuasiNorm, dilate
from .kernels import (
    PeriodicBox,
    bessel_log_table,
    box_for,
    convolve_radial_2d,
    grid_lp,
    homogeneous_sobolev_norm,
    riesz_kernel,
)
from .quadrature import radial_integral
from .trials import TrialFunction

_BAL_TOL = 1e-12

THEOREM_IDS = (
    "int-hardy",
    "log-hardy",
    "hls",
    "hls-graded",
    "hardy-sobolev",
    "ckn",
    "uncertainty",
)


@dataclass(frozen=True)
class InequalitySpec:
    theorem_id: str
    norm: QuasiNorm
    params: dict
    kernel: str = "power"  # for int-hardy / log-hardy: power | riesz | bessel

    def p(self, name, default=None):
        if name in self.params:
            return float(self.params[name])
        if default is None:
            raise InvalidArgument(f"{self.theorem_id}: missing parameter {name!r}")
        return float(default)


@dataclass(frozen=True)
class AdmissibilityVerdict:
    ok: bool
    violations: tuple
    flags: dict = field(default_factory=dict)


def _conj(p):
    return p / (p - 1.0)


def admissible(spec: InequalitySpec) -> AdmissibilityVerdict:
    """Pure-arithmetic admissibility check; returns named violations.

    For 'ckn' the verdict also flags whether the classical Euclidean
    positivity conditions hold (instances violating them are extensions not
    covered by the classical statement)."""
    Q = spec.norm.group.Q
    t = spec.theorem_id
    v = []
    flags = {}
    if t in ("int-hardy", "hardy-sobolev", "uncertainty"):
        p, q, a, b = spec.p("p"), spec.p("q"), spec.p("a"), spec.p("b")
        if not 1 < p < math.inf:
            v.append("p in (1, inf)")
        if not p <= q < math.inf:
            v.append("p <= q < inf")
        if not 0 < a < Q / p:
            v.append("0 < a < Q/p")
        if not 0 <= b < Q:
            v.append("0 <= b < Q")
        if abs(a / Q - (1.0 / p - 1.0 / q + b / (q * Q))) > _BAL_TOL:
            v.append("a/Q = 1/p - 1/q + b/(qQ)")
    elif t == "log-hardy":
        p, r, q = spec.p("p"), spec.p("r"), spec.p("q")
        if not 1 < p < r < math.inf:
            v.append("1 < p < r < inf")
        if not (p < q < (r - 1.0) * _conj(p)):
            v.append("p < q < (r-1)p'")
    elif t == "hls":
        p, q, lam, alpha = spec.p("p"), spec.p("q"), spec.p("lambda"), spec.p("alpha", 0.0)
        if not 0 < lam < Q:
            v.append("0 < lambda < Q")
        if not (1 < p < math.inf and 1 < q < math.inf):
            v.append("p, q in (1, inf)")
        if abs(1.0 / p + 1.0 / q + (alpha + lam) / Q - 2.0) > _BAL_TOL:
            v.append("1/p + 1/q + (alpha+lambda)/Q = 2")
        if not 0 <= alpha < Q / _conj(p):
            v.append("0 <= alpha < Q/p'")
        if alpha + lam > Q:
            v.append("alpha + lambda <= Q")
    elif t == "hls-graded":
        p, q = spec.p("p"), spec.p("q")
        a, b = spec.p("a"), spec.p("b")
        lam = spec.p("lambda")
        alpha, beta = spec.p("alpha", 0.0), spec.p("beta", 0.0)
        if not (1 < p < math.inf and 1 < q < math.inf):
            v.append("p, q in (1, inf)")
        if not 0 <= a < Q / p:
            v.append("0 <= a < Q/p")
        if not 0 <= b < Q / q:
            v.append("0 <= b < Q/q")
        if not 0 < lam < Q:
            v.append("0 < lambda < Q")
        if not 0 <= alpha < a + Q / _conj(p):
            v.append("0 <= alpha < a + Q/p'")
        if not 0 <= beta <= b:
            v.append("0 <= beta <= b")
        bal = (Q - a * p) / (p * Q) + (Q - q * (b - beta)) / (q * Q) + (alpha + lam) / Q
        if abs(bal - 2.0) > _BAL_TOL:
            v.append("(Q-ap)/(pQ) + (Q-q(b-beta))/(qQ) + (alpha+lambda)/Q = 2")
        if alpha + lam > Q:
            v.append("alpha + lambda <= Q")
    elif t == "ckn":
        p, q, r = spec.p("p"), spec.p("q"), spec.p("r")
        delta = spec.p("delta")
        a = spec.p("a")
        beta, gamma = spec.p("beta"), spec.p("gamma")
        if not (1 < p < math.inf and 1 < q < math.inf):
            v.append("p, q in (1, inf)")
        if not 0 < delta <= 1:
            v.append("delta in (0, 1]")
        if not 0 < r < math.inf:
            v.append("0 < r < inf")
        if delta != 1.0 and r > q / (1.0 - delta) + _BAL_TOL:
            v.append("r <= q/(1-delta) for delta != 1")
        if not 0 < a < Q / p:
            v.append("0 < a < Q/p")
        if delta * r * (Q - a * p - beta * p) > p * (Q + r * gamma - r * beta) + _BAL_TOL:
            v.append("delta r (Q - ap - beta p) <= p (Q + r gamma - r beta)")
        if not (
            beta * (1 - delta) - delta * a - _BAL_TOL
            <= gamma
            <= beta * (1 - delta) + _BAL_TOL
        ):
            v.append("beta(1-delta) - delta a <= gamma <= beta(1-delta)")
        bal = r * (delta * Q + p * (beta * (1 - delta) - gamma - a * delta)) / (p * Q) + (
            1 - delta
        ) * r / q
        if abs(bal - 1.0) > _BAL_TOL:
            v.append("balance r(deltaQ + p(beta(1-delta) - gamma - a delta))/(pQ) + (1-delta)r/q = 1")
        n = Q  # Euclidean comparison uses topological dimension = Q here
        flags["classical_positivity"] = bool(
            (1.0 / q + beta / n > 0) and (1.0 / r + gamma / n > 0)
        )
        flags["classical_extension"] = not flags["classical_positivity"]
    else:
        raise InvalidArgument(f"unknown theorem id {t!r}; known: {THEOREM_IDS}")
    return AdmissibilityVerdict(not v, tuple(v), flags)


# ---------------------------------------------------------------------------
# ratio reports


@dataclass
class RatioReport:
    theorem_id: str
    lhs: float
    rhs: float
    ratio: float
    f_label: str
    detail: dict = field(default_factory=dict)


def _require_admissible(spec):
    verdict = admissible(spec)
    if not verdict.ok:
        raise InvalidArgument(f"{spec.theorem_id}: inadmissible: {verdict.violations}")
    return verdict


def _radial_weighted_lp(f: TrialFunction, q: float, weight_exp: float, norm: QuasiNorm,
                        r_hi: Optional[float] = None, log_pow: float = 0.0) -> float:
    """(int |f|^q |x|^(weight_exp) log(e+1/|x|)^(log_pow) dx)^(1/q), radial path."""
    prof = f.radial_profile
    if prof is None:
        raise UnsupportedOperation("radial fast path needs a radial trial function")
    hi = r_hi
    if hi is None:
        hi = f.support_radius if math.isfinite(f.support_radius) else f.effective_radius(1e-13)
    Q = norm.group.Q
    wp = norm.sphere_measure().value

    def h(r):
        w = r**weight_exp
        if log_pow != 0.0:
            w *= math.log(math.e + 1.0 / r) ** log_pow
        return abs(float(prof(np.array([r]))[0])) ** q * w * r ** (Q - 1.0)

    total = quad_chunked(h, 0.0, hi)
    return (wp * total) ** (1.0 / q)


def _grid_norms(f, pbox: PeriodicBox, orders_p):
    vals = pbox.sample(f)
    out = []
    for a, p in orders_p:
        if a == 0:
            out.append(grid_lp(vals, p, pbox))
        else:
            out.append(homogeneous_sobolev_norm(vals, a, p, pbox))
    return out


def _default_box(f: TrialFunction, n: int, M: Optional[int]) -> PeriodicBox:
    M = M or (128 if n <= 2 else 96)
    return box_for(f.effective_radius(1e-12) if not math.isfinite(f.support_radius)
                   else f.support_radius, M, n)


def hardy_sobolev_ratio(spec: InequalitySpec, f: TrialFunction, M: Optional[int] = None) -> RatioReport:
    """|| f / |x|^(b/q) ||_q over ||(-Delta)^(a/2) f||_p (spectral denominator)."""
    _require_admissible(spec)
    norm = spec.norm
    if not norm.group.is_abelian:
        raise UnsupportedOperation("operator powers are spectral: abelian groups only")
    p, q, a, b = spec.p("p"), spec.p("q"), spec.p("a"), spec.p("b")
    lhs = _radial_weighted_lp(f, q, -b, norm)
    pbox = _default_box(f, norm.group.n, M)
    (rhs,) = _grid_norms(f, pbox, [(a, p)])
    if rhs < 1e-14:
        raise DegenerateInput("denominator below 1e-14")
    return RatioReport(spec.theorem_id, lhs, rhs, lhs / rhs, f.label,
                       {"a": a, "b": b, "p": p, "q": q, "M": pbox.M})


def ckn_ratio(spec: InequalitySpec, f: TrialFunction, M: Optional[int] = None) -> RatioReport:
    """|| |x|^gamma f ||_r over ||R^(a/nu) f||_p^delta * || |x|^beta f ||_q^(1-delta)."""
    _require_admissible(spec)
    norm = spec.norm
    if not norm.group.is_abelian:
        raise UnsupportedOperation("operator powers are spectral: abelian groups only")
    p, q, r = spec.p("p"), spec.p("q"), spec.p("r")
    delta, a = spec.p("delta"), spec.p("a")
    beta, gamma = spec.p("beta"), spec.p("gamma")
    lhs = _radial_weighted_lp(f, r, gamma * r, norm)
    pbox = _default_box(f, norm.group.n, M)
    (op_norm,) = _grid_norms(f, pbox, [(a, p)])
    rhs = op_norm**delta
    if delta != 1.0:
        rhs *= _radial_weighted_lp(f, q, beta * q, norm) ** (1.0 - delta)
    if rhs < 1e-14:
        raise DegenerateInput("denominator below 1e-14")
    return RatioReport(spec.theorem_id, lhs, rhs, lhs / rhs, f.label,
                       {"delta": delta, "M": pbox.M})


def uncertainty_chain(spec: InequalitySpec, f: TrialFunction, M: Optional[int] = None) -> RatioReport:
    """||R^(a/nu) f||_p * || |x|^(b/q) f ||_q' >= || f/|x|^(b/q) ||_q * same >= int |f|^2.

    The second step is plain Hoelder with conjugate exponents; its defect is
    reported and must be nonnegative up to 1e-10."""
    _require_admissible(spec)
    norm = spec.norm
    p, q, a, b = spec.p("p"), spec.p("q"), spec.p("a"), spec.p("b")
    qc = _conj(q)
    weighted = _radial_weighted_lp(f, qc, b * qc / q, norm)
    hardy_lhs = _radial_weighted_lp(f, q, -b, norm)
    l2sq = _radial_weighted_lp(f, 2.0, 0.0, norm) ** 2
    pbox = _default_box(f, norm.group.n, M)
    (op_norm,) = _grid_norms(f, pbox, [(a, p)])
    lhs = op_norm * weighted
    hoelder = hardy_lhs * weighted
    if l2sq < 1e-14:
        raise DegenerateInput("||f||_2^2 below 1e-14")
    return RatioReport(
        spec.theorem_id, lhs, l2sq, lhs / l2sq, f.label,
        {"hoelder_product": hoelder, "hoelder_defect": hoelder - l2sq, "M": pbox.M},
    )


# ---------------------------------------------------------------------------
# convolution-kernel inequalities (R^2 radial path)


def _conv_lhs_radial(conv_vals, rgrid, q, weight_exp, norm, tail_exponent,
                     log_pow: float = 0.0) -> float:
    """|| conv / weight ||_q with a power-law tail beyond the last grid node."""
    Q = norm.group.Q
    wp = norm.sphere_measure().value
    interp = lambda r: np.interp(r, rgrid, conv_vals)

    def h(r):
        w = r ** (weight_exp)
        if log_pow != 0.0:
            w *= math.log(math.e + 1.0 / r) ** log_pow
        return abs(float(interp(r))) ** q * w * r ** (Q - 1.0)

    total = quad_chunked(h, 0.0, rgrid[-1], n_chunks=20, epsrel=1e-8,
                         first=rgrid[1] if rgrid[0] == 0 else rgrid[0])
    # extrapolate conv ~ C r^tail_exponent beyond the grid
    Rout = rgrid[-1]
    Cext = abs(conv_vals[-1]) / Rout**tail_exponent
    s = tail_exponent * q + weight_exp + Q - 1.0
    if s + 1.0 < 0:
        total += Cext**q * Rout ** (s + 1.0) / (-(s + 1.0))
    return (wp * total) ** (1.0 / q)


def int_hardy_ratio(spec: InequalitySpec, f: TrialFunction, n_out: int = 48) -> RatioReport:
    """Thm-style convolution Hardy: || (f * T_a) / |x|^(b/q) ||_q / ||f||_p.

    T_a is the pure power |x|^(a-Q) or the Riesz kernel; evaluated on the
    radial fast path (R^2, radial f)."""
    _require_admissible(spec)
    norm = spec.norm
    if norm.group.n != 2 or not norm.group.is_abelian:
        raise UnsupportedOperation("convolution ratio implemented on R^2")
    p, q, a, b = spec.p("p"), spec.p("q"), spec.p("a"), spec.p("b")
    Q = norm.group.Q
    support = f.support_radius if math.isfinite(f.support_radius) else f.effective_radius(1e-10)
    rgrid = np.geomspace(1e-3 * support, 4.0 * support, n_out)
    if spec.kernel == "power":
        conv = convolve_radial_2d(f.radial_profile, rgrid, support, kernel_power=a - Q)
    elif spec.kernel == "riesz":
        coef = float(riesz_kernel(a, 1.0, Q))
        conv = coef * convolve_radial_2d(f.radial_profile, rgrid, support, kernel_power=a - Q)
    else:
        raise InvalidArgument("int-hardy kernel must be 'power' or 'riesz'")
    lhs = _conv_lhs_radial(conv, rgrid, q, -b, norm, a - Q)
    rhs = _radial_weighted_lp(f, p, 0.0, norm)
    if rhs < 1e-14:
        raise DegenerateInput("||f||_p below 1e-14")
    return RatioReport(spec.theorem_id, lhs, rhs, lhs / rhs, f.label,
                       {"kernel": spec.kernel})


def log_hardy_ratio(spec: InequalitySpec, f: TrialFunction, n_out: int = 48) -> RatioReport:
    """Critical case: || (f * B_(Q/p)) / (log(e+1/|x|)^(r/q) |x|^(Q/q)) ||_q / ||f||_p."""
    _require_admissible(spec)
    norm = spec.norm
    if norm.group.n != 2 or not norm.group.is_abelian:
        raise UnsupportedOperation("convolution ratio implemented on R^2")
    p, r, q = spec.p("p"), spec.p("r"), spec.p("q")
    Q = norm.group.Q
    a = Q / p
    support = f.support_radius if math.isfinite(f.support_radius) else f.effective_radius(1e-10)
    rgrid = np.geomspace(1e-3 * support, 4.0 * support, n_out)
    table = bessel_log_table(a, Q)
    conv = convolve_radial_2d(f.radial_profile, rgrid, support, kernel_table=table)
    lhs = _conv_lhs_radial(conv, rgrid, q, -Q, norm, -Q - 1.0, log_pow=-r)
    rhs = _radial_weighted_lp(f, p, 0.0, norm)
    if rhs < 1e-14:
        raise DegenerateInput("||f||_p below 1e-14")
    return RatioReport(spec.theorem_id, lhs, rhs, lhs / rhs, f.label, {"kernel": "bessel"})


# ---------------------------------------------------------------------------
# bilinear HLS


def _euclid_sphere_area(n):
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def hls_bilinear(
    spec: InequalitySpec,
    f: TrialFunction,
    g: TrialFunction,
    budget: int = 1_000_000,
    seed: int = 0,
    M: Optional[int] = None,
) -> RatioReport:
    """|int int f(x) g(y) / (|x|^alpha |y^-1 x|^lambda |y|^beta)| vs the norms.

    Monte Carlo with importance sampling concentrated at the |y^-1 x|
    singularity (power-law radial proposal on the increment w = y^-1 x).
    'hls' divides by ||f||_p ||g||_q; 'hls-graded' by the homogeneous
    Sobolev norms of orders a and b."""
    _require_admissible(spec)
    norm = spec.norm
    group = norm.group
    n = group.n
    lam = spec.p("lambda")
    alpha = spec.p("alpha", 0.0)
    beta = spec.p("beta", 0.0) if spec.theorem_id == "hls-graded" else 0.0
    p, q = spec.p("p"), spec.p("q")
    rng = np.random.default_rng(seed)

    rf = f.support_radius if math.isfinite(f.support_radius) else f.effective_radius(1e-9)
    rg = g.support_radius if math.isfinite(g.support_radius) else g.effective_radius(1e-9)

    halfx = rf ** group.nu
    volx = float(np.prod(2.0 * halfx))

    if group.is_abelian and norm.name == "euclidean":
        # proposal on w: radius ~ r^(n-lambda-1) on (0, W), uniform direction
        W = rf + rg
        nsamp = int(budget)
        xs = rng.uniform(-1.0, 1.0, size=(nsamp, n)) * halfx
        u = rng.random(nsamp)
        rad = W * u ** (1.0 / (n - lam))
        dirs = rng.standard_normal((nsamp, n))
        dirs /= np.maximum(np.linalg.norm(dirs, axis=1, keepdims=True), 1e-300)
        ws = rad[:, None] * dirs
        ys = group.law(xs, group.inv(ws))  # y = x w^{-1}, so w = y^{-1} x
        dens_w = (n - lam) * rad ** (-lam) / (W ** (n - lam) * _euclid_sphere_area(n))
        vals = np.asarray(f(xs), float) * np.asarray(g(ys), float)
        vals *= rad ** (-lam)
        if alpha != 0.0:
            vals *= np.maximum(norm.eval(xs), 1e-300) ** (-alpha)
        if beta != 0.0:
            vals *= np.maximum(norm.eval(ys), 1e-300) ** (-beta)
        weights = vals / dens_w * volx
    else:
        # uniform proposal on w inside its reachable box (variance finite for
        # 2 lambda < Q); used for quasi-norm groups
        c0 = 1.0 if norm.is_norm else 2.0
        W = c0 * (rf + rg)
        halfw = W ** group.nu
        volw = float(np.prod(2.0 * halfw))
        nsamp = int(budget)
        xs = rng.uniform(-1.0, 1.0, size=(nsamp, n)) * halfx
        ws = rng.uniform(-1.0, 1.0, size=(nsamp, n)) * halfw
        ys = group.law(xs, group.inv(ws))
        rho_w = np.maximum(norm.eval(ws), 1e-300)
        vals = np.asarray(f(xs), float) * np.asarray(g(ys), float) * rho_w ** (-lam)
        if alpha != 0.0:
            vals *= np.maximum(norm.eval(xs), 1e-300) ** (-alpha)
        if beta != 0.0:
            vals *= np.maximum(norm.eval(ys), 1e-300) ** (-beta)
        weights = vals * volx * volw

    mean = float(weights.mean())
    ci = 2.58 * float(weights.std()) / math.sqrt(len(weights))
    lhs = abs(mean)

    if spec.theorem_id == "hls":
        fn = _radial_weighted_lp(f, p, 0.0, norm) if f.radial_profile is not None else None
        gn = _radial_weighted_lp(g, q, 0.0, norm) if g.radial_profile is not None else None
        if fn is None or gn is None:
            from .quadrature import lp_norm, whole_group

            fn = fn or lp_norm(f, p, whole_group(norm)).value
            gn = gn or lp_norm(g, q, whole_group(norm)).value
        rhs = fn * gn
    else:
        a, b = spec.p("a"), spec.p("b")
        pboxf = _default_box(f, n, M)
        pboxg = _default_box(g, n, M)
        rhs = homogeneous_sobolev_norm(pboxf.sample(f), a, p, pboxf) * homogeneous_sobolev_norm(
            pboxg.sample(g), b, q, pboxg
        )
    if rhs < 1e-14:
        raise DegenerateInput("norm product below 1e-14")
    return RatioReport(
        spec.theorem_id, lhs, rhs, lhs / rhs, f"{f.label} x {g.label}",
        {"mc_ci": ci, "budget": budget, "seed": seed},
    )


# ---------------------------------------------------------------------------
# reversed HLS failure


@dataclass
class ReversedHlsRow:
    R: float
    numeric: float
    closed_form: float
    rel_err: float


def reversed_hls_demo(norm: QuasiNorm, lam: float, R_list: Sequence[float]) -> list:
    """The quotient 2 int |x|^lambda f_R / (int f_R^p)^(1/p) for the scaled
    power family f_R = |x|^-(Q+lambda) on 1 <= |x| <= R, against the closed
    form 2 (|wp| log R)^(-lambda/Q); decreasing in R (so no reversed-HLS
    constant can exist at p = Q/(Q+lambda))."""
    Q = norm.group.Q
    p = Q / (Q + lam)
    rows = []
    for R in R_list:
        if R <= 1.0:
            raise InvalidArgument("reversed-HLS scan needs R > 1")
        num = 2.0 * radial_integral(
            lambda r: r**lam * (r ** (-(Q + lam)) if 1.0 <= r <= R else 0.0),
            1.0,
            R,
            norm,
        ).value
        den = radial_integral(
            lambda r: (r ** (-(Q + lam))) ** p if 1.0 <= r <= R else 0.0, 1.0, R, norm
        ).value ** (1.0 / p)
        closed = 2.0 * (norm.sphere_measure().value * math.log(R)) ** (-lam / Q)
        numeric = num / den
        rows.append(ReversedHlsRow(R, numeric, closed, abs(numeric - closed) / closed))
    return rows


# ---------------------------------------------------------------------------
# helpers for invariance tests


def dilated(f: TrialFunction, group, lam: float) -> TrialFunction:
    """Member composed with the dilation: x -> f(lam x)."""
    prof = f.radial_profile
    return TrialFunction(
        fn=lambda x: f.fn(dilate(group, lam, x)),
        support_radius=(f.support_radius / lam if math.isfinite(f.support_radius) else math.inf),
        smoothness=f.smoothness,
        label=f"{f.label}@dil({lam:g})",
        params=dict(f.params, dilation=lam),
        decay_scale=None if f.decay_scale is None else f.decay_scale / lam,
        radial_profile=None if prof is None else (lambda r, P=prof: P(lam * np.asarray(r, float))),
        norm=f.norm,
    )
