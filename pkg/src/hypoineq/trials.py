"""Parametric trial-function families used as inequality inputs.

Members are plain callables on coordinate batches with support / decay
metadata so quadrature can truncate whole-group integrals safely.  Radial
members also carry a 1-D profile to enable the fast polar path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import InvalidArgument, UnsupportedOperation
from .groups import HomogeneousGroup, QuasiNorm


@dataclass
class TrialFunction:
    """An evaluable function on the group with support metadata."""

    fn: Callable[[np.ndarray], np.ndarray]
    support_radius: float  # inf for decaying families
    smoothness: str  # 'bump' | 'lipschitz' | 'piecewise'
    label: str
    params: dict = field(default_factory=dict)
    decay_scale: Optional[float] = None  # exp(-(r/scale)^2) tail bound if unbounded
    radial_profile: Optional[Callable[[np.ndarray], np.ndarray]] = None
    norm: Optional[QuasiNorm] = None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.fn(np.asarray(x, dtype=float))

    def effective_radius(self, tol: float = 1e-12) -> float:
        if math.isfinite(self.support_radius):
            return self.support_radius
        if self.decay_scale is None:
            raise InvalidArgument(f"{self.label}: unbounded support without decay descriptor")
        # margin covers the polynomial volume factor in the tail integral
        return self.decay_scale * math.sqrt(max(math.log(1e4 / tol), 1.0))

    def scaled(self, c: float, label_suffix: str = "") -> "TrialFunction":
        prof = self.radial_profile
        return TrialFunction(
            fn=lambda x, f=self.fn: c * f(x),
            support_radius=self.support_radius,
            smoothness=self.smoothness,
            label=self.label + (label_suffix or f"*{c:.6g}"),
            params=dict(self.params),
            decay_scale=self.decay_scale,
            radial_profile=None if prof is None else (lambda r, p=prof: c * p(r)),
            norm=self.norm,
        )


@dataclass(frozen=True)
class Family:
    """Named generator theta -> TrialFunction with a parameter box."""

    name: str
    generator: Callable[[Sequence[float]], TrialFunction]
    param_box: tuple  # ((lo, hi), ...) per parameter
    group: HomogeneousGroup
    norm: QuasiNorm

    def member(self, *theta) -> TrialFunction:
        if len(theta) != len(self.param_box):
            raise InvalidArgument(
                f"{self.name}: expected {len(self.param_box)} parameters, got {len(theta)}"
            )
        for v, (lo, hi) in zip(theta, self.param_box):
            if not (lo <= v <= hi):
                raise InvalidArgument(f"{self.name}: parameter {v} outside [{lo}, {hi}]")
        return self.generator(theta)


def _euclid_r2(x):
    return np.sum(np.asarray(x, dtype=float) ** 2, axis=-1)


def _gaussian(norm, theta):
    (s,) = theta
    return TrialFunction(
        fn=lambda x: np.exp(-_euclid_r2(x) / (2.0 * s * s)),
        support_radius=math.inf,
        smoothness="bump",
        label=f"gaussian(s={s:g})",
        params={"s": s},
        decay_scale=s * math.sqrt(2.0) * 1.06,
        radial_profile=(
            (lambda r, s=s: np.exp(-np.asarray(r, float) ** 2 / (2 * s * s)))
            if norm.name == "euclidean"
            else None
        ),
        norm=norm,
    )


def _bump(norm, theta):
    (R,) = theta

    def fn(x):
        u = _euclid_r2(x) / (R * R)
        out = np.zeros_like(u)
        inside = u < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - u[inside]))
        return out

    prof = None
    if norm.name == "euclidean":

        def prof(r, R=R):
            u = np.asarray(r, float) ** 2 / (R * R)
            out = np.zeros_like(u)
            inside = u < 1.0
            out[inside] = np.exp(-1.0 / (1.0 - u[inside]))
            return out

    return TrialFunction(fn, R, "bump", f"bump(R={R:g})", {"R": R},
                         radial_profile=prof, norm=norm)


def _moser_spike(norm, theta):
    (delta,) = theta
    L = math.log(1.0 / delta)

    def prof(r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            v = np.where(r > 0, np.log(1.0 / np.maximum(r, 1e-300)) / L, 1.0)
        return np.clip(np.where(r <= 1.0, v, 0.0), 0.0, 1.0)

    return TrialFunction(
        fn=lambda x: prof(norm.eval(x)),
        support_radius=1.0,
        smoothness="piecewise",
        label=f"moser-spike(delta={delta:g})",
        params={"delta": delta},
        radial_profile=prof,
        norm=norm,
    )


def _rev_hls(norm, Q, theta):
    lam, R = theta

    def prof(r):
        r = np.asarray(r, dtype=float)
        return np.where((r >= 1.0) & (r <= R), np.maximum(r, 1e-300) ** (-(Q + lam)), 0.0)

    return TrialFunction(
        fn=lambda x: prof(norm.eval(x)),
        support_radius=R,
        smoothness="piecewise",
        label=f"rev-hls(lambda={lam:g},R={R:g})",
        params={"lambda": lam, "R": R},
        radial_profile=prof,
        norm=norm,
    )


def _ring(norm, theta):
    c, w = theta
    if c - w <= 0:
        raise InvalidArgument("ring must stay away from the identity (center > width)")

    def prof(r):
        u = (np.asarray(r, dtype=float) - c) / w
        out = np.zeros_like(u)
        inside = np.abs(u) < 1.0
        out[inside] = np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return out

    return TrialFunction(
        fn=lambda x: prof(norm.eval(x)),
        support_radius=c + w,
        smoothness="bump",
        label=f"ring(c={c:g},w={w:g})",
        params={"c": c, "w": w},
        radial_profile=prof,
        norm=norm,
    )


def _power_cutoff(norm, theta):
    e, R = theta

    def prof(r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= R, np.maximum(r, 1e-300) ** e, 0.0)

    return TrialFunction(
        fn=lambda x: prof(norm.eval(x)),
        support_radius=R,
        smoothness="piecewise",
        label=f"power-cutoff(e={e:g},R={R:g})",
        params={"e": e, "R": R},
        radial_profile=prof,
        norm=norm,
    )


_REGISTRY = ("gaussian", "bump", "moser-spike", "rev-hls", "power-cutoff", "ring")


def make_family(name: str, group: HomogeneousGroup, norm: QuasiNorm) -> Family:
    """Build a registered family on (group, norm).

    gaussian(s); bump(R); moser-spike(delta) on the unit quasi-ball;
    rev-hls(lambda, R) = |x|^-(Q+lambda) on 1 <= |x| <= R;
    power-cutoff(e, R) = |x|^e on |x| <= R.
    """
    Q = group.Q
    if name == "gaussian":
        return Family(name, lambda th: _gaussian(norm, th), ((1e-3, 1e3),), group, norm)
    if name == "bump":
        return Family(name, lambda th: _bump(norm, th), ((1e-3, 1e3),), group, norm)
    if name == "moser-spike":
        return Family(name, lambda th: _moser_spike(norm, th), ((1e-9, 0.999),), group, norm)
    if name == "rev-hls":
        return Family(
            name, lambda th: _rev_hls(norm, Q, th), ((1e-6, Q * 4), (1.0 + 1e-9, 1e9)), group, norm
        )
    if name == "power-cutoff":
        return Family(
            name, lambda th: _power_cutoff(norm, th), ((-Q + 1e-9, 64.0), (1e-6, 1e9)), group, norm
        )
    if name == "ring":
        return Family(name, lambda th: _ring(norm, th), ((1e-3, 1e3), (1e-4, 1e3)), group, norm)
    raise InvalidArgument(f"unknown family {name!r}; registered: {_REGISTRY}")


# ---------------------------------------------------------------------------
# derivatives


def default_step(x: np.ndarray) -> float:
    return 1e-4 * (1.0 + float(np.sqrt(_euclid_r2(x))))


def horizontal_gradient(
    f: Callable[[np.ndarray], np.ndarray],
    group: HomogeneousGroup,
    x: np.ndarray,
    h: Optional[float] = None,
) -> np.ndarray:
    """First-layer gradient on H^n by central differences along the
    left-invariant flows: components X_j f, Y_j f; second order in h."""
    if not group.is_heisenberg:
        raise UnsupportedOperation("horizontal gradient implemented for Heisenberg groups")
    x = np.asarray(x, dtype=float)
    if h is None:
        h = default_step(x)
    if h <= 0:
        raise InvalidArgument("step must be positive")
    m = (group.n - 1) // 2
    steps = np.zeros((2 * m, group.n))
    for j in range(2 * m):
        steps[j, j] = h
    plus = group.law(x[None, :], steps)
    minus = group.law(x[None, :], -steps)
    return (np.asarray(f(plus), float) - np.asarray(f(minus), float)) / (2.0 * h)


def euclidean_gradient(f, x: np.ndarray, h: Optional[float] = None) -> np.ndarray:
    """Plain central-difference gradient (abelian first layer)."""
    x = np.asarray(x, dtype=float)
    if h is None:
        h = default_step(x)
    n = x.shape[-1]
    eye = np.eye(n) * h
    return (np.asarray(f(x[None, :] + eye), float) - np.asarray(f(x[None, :] - eye), float)) / (
        2.0 * h
    )


def horizontal_gradient_batch(f, group, pts: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Vectorized first-layer gradient at many points; fixed step."""
    pts = np.asarray(pts, dtype=float)
    if group.is_heisenberg:
        m = (group.n - 1) // 2
        dirs = np.eye(group.n)[: 2 * m] * h
        cols = [
            (np.asarray(f(group.law(pts, d[None, :])), float)
             - np.asarray(f(group.law(pts, -d[None, :])), float)) / (2 * h)
            for d in dirs
        ]
    else:
        dirs = np.eye(group.n) * h
        cols = [
            (np.asarray(f(pts + d[None, :]), float) - np.asarray(f(pts - d[None, :]), float))
            / (2 * h)
            for d in dirs
        ]
    return np.stack(cols, axis=-1)


# ---------------------------------------------------------------------------
# normalization


def normalize(
    f: TrialFunction,
    norm_kind,
    target: float = 1.0,
    tolerance: float = 1e-10,
) -> TrialFunction:
    """Rescale f so the requested norm equals ``target``.

    norm_kind: ("lp", p, domain) | ("sobolev", a, p, box) | ("grad_q", domain).
    The sobolev path needs an abelian group (spectral operator powers).
    """
    kind = norm_kind[0]
    if kind == "lp":
        _, p, domain = norm_kind
        from .quadrature import lp_norm

        current = lp_norm(f, p, domain, tolerance=max(tolerance, 1e-10)).value
    elif kind == "sobolev":
        _, a, p, pbox = norm_kind
        from .kernels import sobolev_norm

        current = sobolev_norm(f, a, p, pbox)
    elif kind == "grad_q":
        # MC for the full-dimensional gradient integral; CI-level accuracy
        _, domain = norm_kind
        from .quadrature import integrate

        Q = domain.norm.group.Q
        grp = domain.norm.group

        def gq(pts):
            g = horizontal_gradient_batch(f, grp, pts)
            return np.sum(g * g, axis=-1) ** (Q / 2.0)

        current = integrate(gq, domain, tolerance=0.05, method="mc",
                            budget=2_000_000).value ** (1.0 / Q)
    else:
        raise InvalidArgument(f"unknown norm kind {norm_kind!r}")
    if current < 1e-14:
        raise InvalidArgument("cannot normalize the zero function")
    return f.scaled(target / current, label_suffix=f"|{kind}->{target:g}")
