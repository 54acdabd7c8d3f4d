"""Shared 1-D quadrature helpers: chunked adaptive quad over geometric
subdivisions with integration warnings silenced (tiny near-zero chunks
trigger spurious round-off reports)."""

from __future__ import annotations

import warnings

import numpy as np
from scipy import integrate as sp_integrate
from scipy.integrate import IntegrationWarning


def quad_chunked(h, lo: float, hi: float, n_chunks: int = 24, epsrel: float = 1e-10,
                 first: float = None) -> float:
    """Integral of h over (lo, hi) split on a geometric grid anchored at hi.

    ``first`` overrides the smallest positive edge (defaults to hi * 1e-8).
    """
    if hi <= lo:
        return 0.0
    start = max(lo, 0.0)
    anchor = first if first is not None else hi * 1e-8
    anchor = max(anchor, start + hi * 1e-16)
    edges = np.geomspace(anchor, hi, n_chunks)
    total = 0.0
    prev = start
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        for edge in edges:
            if edge <= prev:
                continue
            total += sp_integrate.quad(h, prev, edge, limit=150, epsrel=epsrel,
                                       epsabs=1e-14)[0]
            prev = edge
    return total


def quad_silent(h, lo, hi, **kw) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        return sp_integrate.quad(h, lo, hi, **kw)[0]
