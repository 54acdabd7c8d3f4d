"""Hot numeric kernels with two interchangeable backends.

Every kernel here exists twice: a loop formulation compiled with numba's
``@njit`` and a vectorized pure-numpy twin.  The active backend is chosen
once at import time from the environment variable ``HYPOINEQ_BACKEND``:

    HYPOINEQ_BACKEND=numba   force the jitted kernels (error if numba missing)
    HYPOINEQ_BACKEND=numpy   force the pure-numpy fallbacks
    unset / auto             numba when importable, numpy otherwise

Both backends consume identical pre-generated sample arrays, so results
differ only in floating-point summation order (last-bit effects).  Within a
fixed backend all kernels are deterministic.

``benchmarks/bench_backends.py`` times the two implementations side by side.
"""

from __future__ import annotations

import math
import os

import numpy as np

_MODE = os.environ.get("HYPOINEQ_BACKEND", "auto").lower()

NUMBA_AVAILABLE = False
if _MODE in ("auto", "numba"):
    try:
        from numba import njit

        NUMBA_AVAILABLE = True
    except ImportError:
        if _MODE == "numba":
            raise
if _MODE == "numpy":
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and _MODE in ("auto", "numba")
BACKEND = "numba" if USE_NUMBA else "numpy"

_SERIES_MAX_TERMS = 400


# ---------------------------------------------------------------------------
# loop bodies (numba-compatible)


def _phi_series_loop(u, kmin):
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        ui = u[i]
        if ui <= 0.0:
            out[i] = 0.0
            continue
        # first retained term u^kmin / kmin!
        term = 1.0
        for k in range(1, kmin + 1):
            term *= ui / k
        acc = term
        k = kmin
        while k < kmin + _SERIES_MAX_TERMS:
            k += 1
            term *= ui / k
            acc += term
            if term < 1e-17 * acc:
                break
        out[i] = acc
    return out


def _phi_expdiff_loop(u, kmin):
    out = np.empty_like(u)
    for i in range(u.shape[0]):
        ui = u[i]
        if ui <= 0.0:
            out[i] = 0.0
            continue
        if kmin == 1:
            out[i] = math.expm1(ui)
            continue
        partial = 0.0
        term = 1.0
        for k in range(kmin):
            partial += term
            term *= ui / (k + 1)
        out[i] = math.exp(ui) - partial
    return out


def _heis_triangle_loop(zx, tx, zy, ty):
    n = zx.shape[0]
    m = zx.shape[1] // 2
    best = -1.0
    best_i = -1
    for i in range(n):
        t = tx[i] + ty[i]
        s4x = 0.0
        s4y = 0.0
        s4p = 0.0
        for j in range(m):
            a1 = zx[i, j]
            a2 = zx[i, m + j]
            b1 = zy[i, j]
            b2 = zy[i, m + j]
            t += 0.5 * (a1 * b2 - a2 * b1)
            s4x += a1 * a1 + a2 * a2
            s4y += b1 * b1 + b2 * b2
            c1 = a1 + b1
            c2 = a2 + b2
            s4p += c1 * c1 + c2 * c2
        nx = (s4x * s4x + tx[i] * tx[i]) ** 0.25
        ny = (s4y * s4y + ty[i] * ty[i]) ** 0.25
        denom = nx + ny
        if denom < 1e-300:
            continue
        ratio = (s4p * s4p + t * t) ** 0.25 / denom
        if ratio > best:
            best = ratio
            best_i = i
    return best, best_i


def _kaplan_ball_count_loop(pts):
    n = pts.shape[0]
    m = (pts.shape[1] - 1) // 2
    hits = 0
    for i in range(n):
        s = 0.0
        for j in range(2 * m):
            s += pts[i, j] * pts[i, j]
        t = pts[i, 2 * m]
        if s * s + t * t <= 1.0:
            hits += 1
    return hits


def _conv2_radial_power_loop(rout, s, ws, fvals, cos_t, wt, kappa, eps):
    out = np.zeros(rout.shape[0])
    for i in range(rout.shape[0]):
        r = rout[i]
        acc = 0.0
        for j in range(s.shape[0]):
            sj = s[j]
            fw = fvals[j] * sj * ws[j]
            if fw == 0.0:
                continue
            inner = 0.0
            for k in range(cos_t.shape[0]):
                d2 = r * r + sj * sj - 2.0 * r * sj * cos_t[k]
                if d2 < eps * eps:
                    d2 = eps * eps
                inner += wt[k] * d2 ** (0.5 * kappa)
            acc += fw * inner
        out[i] = acc
    return out


def _conv2_radial_tab_loop(rout, s, ws, fvals, cos_t, wt, logr, logk, eps):
    out = np.zeros(rout.shape[0])
    nt = logr.shape[0]
    lo = logr[0]
    hi = logr[nt - 1]
    step = (hi - lo) / (nt - 1)
    for i in range(rout.shape[0]):
        r = rout[i]
        acc = 0.0
        for j in range(s.shape[0]):
            sj = s[j]
            fw = fvals[j] * sj * ws[j]
            if fw == 0.0:
                continue
            inner = 0.0
            for k in range(cos_t.shape[0]):
                d2 = r * r + sj * sj - 2.0 * r * sj * cos_t[k]
                if d2 < eps * eps:
                    d2 = eps * eps
                x = 0.5 * math.log(d2)
                if x <= lo:
                    x = lo
                elif x >= hi:
                    x = hi
                pos = (x - lo) / step
                idx = int(pos)
                if idx >= nt - 1:
                    idx = nt - 2
                frac = pos - idx
                inner += wt[k] * math.exp(
                    logk[idx] * (1.0 - frac) + logk[idx + 1] * frac
                )
            acc += fw * inner
        out[i] = acc
    return out


# ---------------------------------------------------------------------------
# pure-numpy twins


def _phi_series_numpy(u, kmin):
    u = np.asarray(u, dtype=float)
    term = np.ones_like(u)
    for k in range(1, kmin + 1):
        term = term * u / k
    acc = term.copy()
    active = u > 0
    k = kmin
    while active.any() and k < kmin + _SERIES_MAX_TERMS:
        k += 1
        term = term * u / k
        acc = np.where(active, acc + term, acc)
        active = active & (term >= 1e-17 * acc)
    return np.where(u > 0, acc, 0.0)


def _phi_expdiff_numpy(u, kmin):
    u = np.asarray(u, dtype=float)
    if kmin == 1:
        return np.where(u > 0, np.expm1(u), 0.0)
    partial = np.zeros_like(u)
    term = np.ones_like(u)
    for k in range(kmin):
        partial = partial + term
        term = term * u / (k + 1)
    return np.where(u > 0, np.exp(u) - partial, 0.0)


def _heis_triangle_numpy(zx, tx, zy, ty):
    m = zx.shape[1] // 2
    ax, ay = zx[:, :m], zx[:, m:]
    bx, by = zy[:, :m], zy[:, m:]
    twist = 0.5 * np.sum(ax * by - ay * bx, axis=1)
    s4x = np.sum(zx * zx, axis=1)
    s4y = np.sum(zy * zy, axis=1)
    zc = zx + zy
    s4p = np.sum(zc * zc, axis=1)
    nx = (s4x**2 + tx**2) ** 0.25
    ny = (s4y**2 + ty**2) ** 0.25
    tp = tx + ty + twist
    denom = nx + ny
    ratio = np.where(
        denom > 1e-300, (s4p**2 + tp**2) ** 0.25 / np.maximum(denom, 1e-300), -1.0
    )
    i = int(np.argmax(ratio))
    return float(ratio[i]), i


def _kaplan_ball_count_numpy(pts):
    m = (pts.shape[1] - 1) // 2
    s = np.sum(pts[:, : 2 * m] ** 2, axis=1)
    t = pts[:, 2 * m]
    return int(np.count_nonzero(s * s + t * t <= 1.0))


def _conv2_radial_power_numpy(rout, s, ws, fvals, cos_t, wt, kappa, eps):
    fw = fvals * s * ws
    out = np.zeros(rout.shape[0])
    for i, r in enumerate(rout):
        d2 = np.maximum(
            r * r + s[:, None] ** 2 - 2.0 * r * s[:, None] * cos_t[None, :],
            eps * eps,
        )
        out[i] = fw @ (d2 ** (0.5 * kappa) @ wt)
    return out


def _conv2_radial_tab_numpy(rout, s, ws, fvals, cos_t, wt, logr, logk, eps):
    fw = fvals * s * ws
    out = np.zeros(rout.shape[0])
    for i, r in enumerate(rout):
        d2 = np.maximum(
            r * r + s[:, None] ** 2 - 2.0 * r * s[:, None] * cos_t[None, :],
            eps * eps,
        )
        x = np.clip(0.5 * np.log(d2), logr[0], logr[-1])
        kv = np.exp(np.interp(x, logr, logk))
        out[i] = fw @ (kv @ wt)
    return out


# ---------------------------------------------------------------------------
# dispatch

if USE_NUMBA:
    phi_series = njit(cache=True)(_phi_series_loop)
    phi_expdiff = njit(cache=True)(_phi_expdiff_loop)
    heis_triangle_max = njit(cache=True)(_heis_triangle_loop)
    kaplan_ball_count = njit(cache=True)(_kaplan_ball_count_loop)
    if _MODE == "numba":
        conv2_radial_power = njit(cache=True)(_conv2_radial_power_loop)
        conv2_radial_tab = njit(cache=True)(_conv2_radial_tab_loop)
    else:
        # auto mode: the broadcast+matvec twins measure ~2x faster than the
        # jitted triple loops for these two (see benchmarks/bench_backends.py)
        conv2_radial_power = _conv2_radial_power_numpy
        conv2_radial_tab = _conv2_radial_tab_numpy
else:
    phi_series = _phi_series_numpy
    phi_expdiff = _phi_expdiff_numpy
    heis_triangle_max = _heis_triangle_numpy
    kaplan_ball_count = _kaplan_ball_count_numpy
    conv2_radial_power = _conv2_radial_power_numpy
    conv2_radial_tab = _conv2_radial_tab_numpy

IMPLEMENTATIONS = {
    "phi_series": (_phi_series_loop, _phi_series_numpy),
    "phi_expdiff": (_phi_expdiff_loop, _phi_expdiff_numpy),
    "heis_triangle_max": (_heis_triangle_loop, _heis_triangle_numpy),
    "kaplan_ball_count": (_kaplan_ball_count_loop, _kaplan_ball_count_numpy),
    "conv2_radial_power": (_conv2_radial_power_loop, _conv2_radial_power_numpy),
    "conv2_radial_tab": (_conv2_radial_tab_loop, _conv2_radial_tab_numpy),
}
