"""Value-with-error containers shared by all numeric routines."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class IntegralEstimate:
    """A numeric value with an absolute error bound and provenance.

    ``method`` is one of ``grid`` (deterministic bound for smooth
    integrands), ``polar`` (1-D adaptive quadrature after polar reduction),
    ``mc`` (99% confidence interval, mean +/- 2.58 sigma / sqrt(N)) or
    ``exact`` (closed form).
    """

    value: float
    abs_error: float
    method: str
    samples_or_nodes: int = 0
    divergent: bool = False

    def __post_init__(self):
        if not self.divergent and not math.isfinite(self.value):
            raise ValueError(f"non-finite estimate {self.value!r} not flagged divergent")

    def __float__(self):
        return self.value

    def scaled(self, c: float) -> "IntegralEstimate":
        return IntegralEstimate(
            self.value * c,
            abs(c) * self.abs_error,
            self.method,
            self.samples_or_nodes,
            self.divergent,
        )

    def powered(self, exponent: float) -> "IntegralEstimate":
        """Propagate the error bound through value**exponent (first order)."""
        v = self.value**exponent
        if self.value > 0:
            err = abs(exponent) * v / self.value * self.abs_error
        else:
            err = self.abs_error**exponent if exponent < 1 else self.abs_error
        return IntegralEstimate(v, err, self.method, self.samples_or_nodes, self.divergent)

    def plus(self, other: "IntegralEstimate") -> "IntegralEstimate":
        return IntegralEstimate(
            self.value + other.value,
            self.abs_error + other.abs_error,
            self.method if self.method == other.method else "grid",
            self.samples_or_nodes + other.samples_or_nodes,
            self.divergent or other.divergent,
        )


def divergent_estimate(method: str) -> IntegralEstimate:
    return IntegralEstimate(math.inf, math.inf, method, 0, divergent=True)
