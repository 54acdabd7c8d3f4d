"""Integration on the group: tensor grids, polar reduction, Monte Carlo.

All routines return :class:`IntegralEstimate` carrying a value, an absolute
error bound (deterministic for grids on smooth integrands, a 99% confidence
interval for Monte Carlo) and the method used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate as sp_integrate

from .errors import AccuracyError, EvaluationError, InvalidArgument
from .estimates import IntegralEstimate, divergent_estimate
from .groups import QuasiNorm, _probe_box


@dataclass(frozen=True)
class Domain:
    """Integration domain tied to a group/norm pair.

    kind: 'whole-group' | 'ball' | 'annulus' | 'box'
    """

    kind: str
    norm: QuasiNorm
    radius: float = 0.0
    r_in: float = 0.0
    r_out: float = 0.0
    half_widths: Optional[np.ndarray] = None
    center: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind == "ball" and self.radius <= 0:
            raise InvalidArgument("ball radius must be positive")
        if self.kind == "annulus" and not (0 <= self.r_in < self.r_out):
            raise InvalidArgument("annulus needs 0 <= r_in < r_out")


def whole_group(norm: QuasiNorm) -> Domain:
    return Domain("whole-group", norm)


def ball(norm: QuasiNorm, radius: float, center=None) -> Domain:
    return Domain("ball", norm, radius=radius, center=center)


def annulus(norm: QuasiNorm, r_in: float, r_out: float) -> Domain:
    return Domain("annulus", norm, r_in=r_in, r_out=r_out)


def box(norm: QuasiNorm, half_widths) -> Domain:
    return Domain("box", norm, half_widths=np.asarray(half_widths, dtype=float))


def carry_support(wrapper, f):
    """Copy support/decay metadata onto a wrapping callable."""
    r = getattr(f, "support_radius", None)
    if r is not None:
        wrapper.support_radius = r
    eff = getattr(f, "effective_radius", None)
    if eff is not None:
        wrapper.effective_radius = eff
    return wrapper


def _support_radius(f, domain: Domain, tol: float) -> float:
    """Truncation radius for whole-group integrals.

    Compact trial functions declare ``support_radius``; unbounded ones must
    provide ``effective_radius(tol)`` from their decay descriptor.
    """
    r = getattr(f, "support_radius", None)
    if r is not None and math.isfinite(r):
        return float(r)
    eff = getattr(f, "effective_radius", None)
    if eff is not None:
        return float(eff(tol))
    raise InvalidArgument(
        "whole-group integral needs a declared support or decay radius on the integrand"
    )


def _bounding(domain: Domain, f, tol: float):
    """Returns (half-widths, domain spec, truncation error allowance)."""
    norm = domain.norm
    if domain.kind == "box":
        return domain.half_widths, None, 0.0
    if domain.kind == "ball":
        return _probe_box(norm, domain.radius), ("ball", domain.radius), 0.0
    if domain.kind == "annulus":
        return _probe_box(norm, domain.r_out), ("annulus", domain.r_in, domain.r_out), 0.0
    radius = _support_radius(f, domain, tol)
    declared = getattr(f, "support_radius", math.inf)
    trunc = 0.0 if (declared is not None and math.isfinite(declared)) else tol / 10.0
    return _probe_box(norm, radius), ("ball", radius), trunc


def _mask(domain_spec, norm, pts):
    if domain_spec is None:
        return None
    if domain_spec[0] == "ball":
        return norm.eval(pts) <= domain_spec[1]
    rho = norm.eval(pts)
    return (rho >= domain_spec[1]) & (rho <= domain_spec[2])


def _check_finite(vals, pts):
    bad = ~np.isfinite(vals)
    if bad.any():
        i = int(np.argmax(bad))
        raise EvaluationError(
            f"integrand returned {vals[i]!r}", point=np.asarray(pts)[i].copy()
        )


def _grid_pass(f, norm, half, spec, nodes_per_axis):
    n = norm.group.n
    axes = [np.linspace(-h, h, nodes_per_axis) for h in half]
    steps = [ax[1] - ax[0] for ax in axes]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([mm.ravel() for mm in mesh], axis=-1)
    vals = np.asarray(f(pts), dtype=float).ravel()
    _check_finite(vals, pts)
    mask = _mask(spec, norm, pts)
    if mask is not None:
        vals = np.where(mask, vals, 0.0)
    # trapezoid weights: 1/2 on each boundary face
    w = np.ones(nodes_per_axis)
    w[0] = w[-1] = 0.5
    weight = w
    for _ in range(n - 1):
        weight = np.multiply.outer(weight, w)
    total = float((vals.reshape([nodes_per_axis] * n) * weight).sum())
    return total * float(np.prod(steps)), pts.shape[0]


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    domain: Domain,
    tolerance: float = 1e-6,
    budget: int = 4_000_000,
    method: str = "auto",
    seed: int = 0,
) -> IntegralEstimate:
    """Integrate ``f`` over ``domain``.

    Grid path: tensor trapezoid with Richardson refinement until the
    two-level difference is below ``tolerance`` or the node budget runs out
    (AccuracyError carrying the partial estimate).  MC path: uniform samples
    over the bounding box, 99% confidence interval as ``abs_error``.
    """
    if tolerance <= 0:
        raise InvalidArgument("tolerance must be positive")
    if budget < 1:
        raise InvalidArgument("budget must be at least 1")
    norm = domain.norm
    half, spec, trunc = _bounding(domain, f, tolerance)
    n = norm.group.n
    if method == "auto":
        method = "grid" if n <= 3 else "mc"

    if method == "grid":
        nodes = 33 if n >= 3 else 129
        prev, _ = _grid_pass(f, norm, half, spec, nodes)
        used = nodes**n
        while True:
            nodes = 2 * nodes - 1
            if used + nodes**n > budget:
                raise AccuracyError(
                    f"grid budget {budget} exhausted at error {abs(prev):g}",
                    partial=IntegralEstimate(prev, math.inf, "grid", used),
                )
            cur, cnt = _grid_pass(f, norm, half, spec, nodes)
            used += cnt
            err = abs(cur - prev) + trunc
            if err <= tolerance + trunc:
                return IntegralEstimate(cur, max(err, 5e-16 * abs(cur)), "grid", used)
            prev = cur

    if method == "mc":
        rng = np.random.default_rng(seed)
        box_vol = float(np.prod(2.0 * half))
        total = 0.0
        total2 = 0.0
        count = 0
        batch = 500_000
        while count < budget:
            k = min(batch, budget - count)
            pts = rng.uniform(-1.0, 1.0, size=(k, n)) * half
            vals = np.asarray(f(pts), dtype=float).ravel()
            _check_finite(vals, pts)
            mask = _mask(spec, norm, pts)
            if mask is not None:
                vals = np.where(mask, vals, 0.0)
            total += float(vals.sum())
            total2 += float((vals**2).sum())
            count += k
            mean = total / count
            var = max(total2 / count - mean**2, 0.0)
            ci = 2.58 * math.sqrt(var / count) * box_vol + trunc
            if count >= 10_000 and ci <= tolerance + trunc:
                return IntegralEstimate(mean * box_vol, ci, "mc", count)
        mean = total / count
        var = max(total2 / count - mean**2, 0.0)
        ci = 2.58 * math.sqrt(var / count) * box_vol + trunc
        if ci > tolerance + trunc:
            raise AccuracyError(
                f"mc budget {budget} exhausted at 99% CI {ci:g} > tol {tolerance:g}",
                partial=IntegralEstimate(mean * box_vol, ci, "mc", count),
            )
        return IntegralEstimate(mean * box_vol, ci, "mc", count)

    raise InvalidArgument(f"unknown method {method!r}")


def lp_norm(
    f,
    p: float,
    domain: Domain,
    tolerance: float = 1e-6,
    budget: int = 4_000_000,
    method: str = "auto",
    seed: int = 0,
) -> IntegralEstimate:
    """(integral |f|^p)^(1/p); p = inf gives the sampled sup."""
    if p != math.inf and p < 1:
        raise InvalidArgument(f"need p >= 1 or inf, got {p}")
    if p == math.inf:
        half, spec, _trunc = _bounding(domain, f, tolerance)
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-1.0, 1.0, size=(min(budget, 200_000), domain.norm.group.n)) * half
        vals = np.abs(np.asarray(f(pts), dtype=float).ravel())
        mask = _mask(spec, domain.norm, pts)
        if mask is not None:
            vals = np.where(mask, vals, 0.0)
        return IntegralEstimate(float(vals.max()), 0.0, "mc", pts.shape[0])
    integrand = carry_support(lambda x: np.abs(np.asarray(f(x), dtype=float)) ** p, f)
    est = integrate(
        integrand,
        domain,
        tolerance=tolerance,
        budget=budget,
        method=method,
        seed=seed,
    )
    if est.value <= 0:
        return IntegralEstimate(0.0, est.abs_error ** (1.0 / p), est.method, est.samples_or_nodes)
    return est.powered(1.0 / p)


# ---------------------------------------------------------------------------
# polar / radial path


def _local_exponent(h, b=None):
    """Estimated power-law exponent of h near 0 (default) or at the far tail."""
    r1 = 1e-7 if b is None else b
    r2 = 2 * r1
    h1, h2 = abs(h(r1)), abs(h(r2))
    if h1 <= 0 or h2 <= 0:
        return 0.0
    return math.log(h2 / h1) / math.log(2.0)


def radial_integral(
    g: Callable[[float], float],
    r_in: float,
    r_out: float,
    norm: QuasiNorm,
    tolerance: float = 1e-9,
    singular_hint: bool = False,
    sphere_tol: float = 1e-6,
) -> IntegralEstimate:
    """Integral over the group of a radial function: |wp| * int g(r) r^(Q-1) dr.

    Divergent endpoint behaviour (exponent <= -1) is flagged on the returned
    estimate.  Integrable endpoint singularities require ``singular_hint``.
    """
    if not (0 <= r_in < r_out):
        raise InvalidArgument("need 0 <= r_in < r_out")
    Q = norm.group.Q
    h = lambda r: g(r) * r ** (Q - 1.0)
    # endpoint diagnostics
    if r_in == 0.0:
        s0 = _local_exponent(h)
        if s0 <= -1.0 + 1e-12:
            return divergent_estimate("polar")
        if s0 < -1e-9 and not singular_hint:
            raise AccuracyError(
                f"singular left endpoint (exponent {s0:.3g}) without integrable-singularity hint"
            )
    if math.isinf(r_out):
        stail = _local_exponent(h, b=1e6)
        if stail >= -1.0 - 1e-12 and abs(h(1e6)) > 1e-300:
            return divergent_estimate("polar")
    sphere = norm.sphere_measure(tol=sphere_tol)
    lo = max(r_in, 0.0)
    pts = None
    if r_in == 0.0 and not math.isinf(r_out):
        pts = [min(r_out / 2, 1.0)]
    val, err = sp_integrate.quad(
        h, lo, r_out, limit=400, epsabs=1e-13, epsrel=tolerance, points=pts
    )
    total = sphere.value * val
    total_err = abs(val) * sphere.abs_error + sphere.value * err
    return IntegralEstimate(total, total_err, "polar", 400)


# ---------------------------------------------------------------------------
# continuous Minkowski inequality


@dataclass(frozen=True)
class MinkowskiReport:
    lhs: float
    rhs: float
    theta: float
    holds: bool


def _int_powered_linear(c0, slope, width, theta):
    """int_0^w (c0 + slope*u)^theta du, exact for the piecewise-linear inner
    integral of a step function (c0, c0+slope*width >= 0)."""
    if width <= 0:
        return 0.0
    if abs(slope) < 1e-300:
        return c0**theta * width
    if c0 == 0.0:
        # avoid the underflow in (slope*width)^(theta+1)/slope
        return slope**theta * width ** (theta + 1.0) / (theta + 1.0)
    sw = slope * width
    if sw < 1e-6 * c0:
        # tiny relative increment: integral = c0^theta * w * g(x) with the
        # correction g = expm1((t+1)log1p(x)) / ((t+1)x) in [1, 1+x]; this
        # grouping avoids both the cancellation and intermediate underflow
        x = sw / c0
        lx = (theta + 1.0) * math.log1p(x)
        if lx < 1e-300:
            return c0**theta * width
        return c0**theta * width * (math.expm1(lx) / ((theta + 1.0) * x))
    # factored form: hi^(t+1) may underflow even when the quotient is normal
    hi = c0 + slope * width
    ratio = c0 / hi
    return hi**theta * (hi / slope) * (1.0 - ratio ** (theta + 1.0)) / (theta + 1.0)


def minkowski_check(
    f1_cells, f2_cells, theta: float, edges: np.ndarray
) -> MinkowskiReport:
    """Check int f1 (int_0^x f2)^theta dx <= (int f2 (int_z^inf f1)^(1/theta) dz)^theta
    for nonnegative step functions given by cell values on ``edges``
    (callables are sampled at cell midpoints).

    Both sides are evaluated in closed form per cell, so the comparison is
    exact up to roundoff.
    """
    if theta < 1:
        raise InvalidArgument("theta must be >= 1")
    edges = np.asarray(edges, dtype=float)
    mids = 0.5 * (edges[:-1] + edges[1:])
    if callable(f1_cells):
        f1_cells = np.asarray([float(f1_cells(m)) for m in mids])
    if callable(f2_cells):
        f2_cells = np.asarray([float(f2_cells(m)) for m in mids])
    f1 = np.asarray(f1_cells, dtype=float)
    f2 = np.asarray(f2_cells, dtype=float)
    if np.any(f1 < 0) or np.any(f2 < 0):
        raise InvalidArgument("minkowski check needs nonnegative inputs")
    widths = np.diff(edges)
    if f1.shape != widths.shape or f2.shape != widths.shape:
        raise InvalidArgument("cell values must match the number of grid cells")

    F2_left = np.concatenate([[0.0], np.cumsum(f2 * widths)])[:-1]
    lhs = sum(
        f1[i] * _int_powered_linear(F2_left[i], f2[i], widths[i], theta)
        for i in range(len(widths))
    )

    G1_right = np.concatenate([np.cumsum((f1 * widths)[::-1])[::-1], [0.0]])[1:]
    inner = sum(
        f2[i]
        * _int_powered_linear(G1_right[i], f1[i], widths[i], 1.0 / theta)
        for i in range(len(widths))
    )
    rhs = inner**theta
    # rounding envelope: cumulative sums absorb cells ~1e16 below the largest,
    # so the comparison is only meaningful above this eps-scale floor
    mass1 = float((f1 * widths).sum())
    mass2 = float((f2 * widths).sum())
    round_env = 1e-12 * (mass1 * max(mass2, 1.0) ** theta + abs(lhs) + abs(rhs))
    holds = bool(lhs <= rhs * (1 + 1e-8) + round_env + 1e-300)
    return MinkowskiReport(float(lhs), float(rhs), theta, holds)
