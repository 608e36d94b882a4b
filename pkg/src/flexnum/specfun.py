"""Special functions for the composite-fading SNR distribution.

Everything here works in log space. The ccdf terms multiply quantities such
as exp(alpha*beta) and exp(-B*sqrt(C + D*y)) that overflow or underflow on
their own while their product stays finite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

MAX_HALF_ORDER = 64


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


@dataclass(frozen=True)
class LogValue:
    """A non-negative quantity stored as its natural logarithm.

    ``log_magnitude == -inf`` encodes zero.
    """

    log_magnitude: float

    @classmethod
    def of(cls, x: float) -> "LogValue":
        if x < 0 or math.isnan(x):
            raise DomainError(f"LogValue needs a non-negative value, got {x!r}")
        return cls(math.log(x) if x > 0 else -math.inf)

    def __mul__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.log_magnitude + other.log_magnitude)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.log_magnitude == -math.inf:
            raise ZeroDivisionError("division by a zero LogValue")
        return LogValue(self.log_magnitude - other.log_magnitude)

    def __pow__(self, exponent: float) -> "LogValue":
        if self.log_magnitude == -math.inf:
            return LogValue(-math.inf if exponent > 0 else 0.0)
        return LogValue(self.log_magnitude * exponent)

    @property
    def value(self) -> float:
        return math.exp(self.log_magnitude)


def log_sum_exp(logs: Iterable[float]) -> float:
    """log(sum(exp(x))) without overflow; empty or all -inf gives -inf."""
    logs = list(logs)
    if not logs:
        return -math.inf
    top = max(logs)
    if top == -math.inf:
        return -math.inf
    return top + math.log(math.fsum(math.exp(x - top) for x in logs))


def ln_gamma(x: float) -> float:
    """Natural log of the Gamma function for positive real ``x``."""
    if not isinstance(x, (int, float)) or not math.isfinite(x) or x <= 0:
        raise DomainError(f"ln_gamma requires a finite positive argument, got {x!r}")
    return math.lgamma(x)


def ln_factorial(n: int) -> float:
    if n < 0:
        raise DomainError(f"factorial of negative integer {n}")
    return math.lgamma(n + 1)


def bessel_k_half(n: int, z: float) -> LogValue:
    """Modified Bessel function of the second kind, order ``n + 1/2``.

    Uses the terminating series

        K_{n+1/2}(z) = sqrt(pi/(2z)) e^{-z} sum_{k=0}^{n} (n+k)! / (k! (n-k)! (2z)^k)

    with every term accumulated in log space.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0 or n > MAX_HALF_ORDER:
        raise DomainError(f"order index must be an integer in [0, {MAX_HALF_ORDER}], got {n!r}")
    if not math.isfinite(z) or z <= 0:
        raise DomainError(f"bessel_k_half requires z > 0, got {z!r}")
    log2z = math.log(2.0 * z)
    terms = (
        ln_factorial(n + k) - ln_factorial(k) - ln_factorial(n - k) - k * log2z
        for k in range(n + 1)
    )
    return LogValue(0.5 * math.log(math.pi / (2.0 * z)) - z + log_sum_exp(terms))
