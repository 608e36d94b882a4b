"""Independent reference evaluations used by the validation suite.

These deliberately avoid the log-space paths in :mod:`flexnum.specfun` and
:mod:`flexnum.channel`: Bessel values come from ``mpmath.besselk`` and the
sums are carried out in multiprecision arithmetic.
"""

from __future__ import annotations

import mpmath

from .channel import CcdfSpec


def reference_bessel_k(order: float, z: float, dps: int = 40) -> float:
    with mpmath.workdps(dps):
        return float(mpmath.besselk(mpmath.mpf(order), mpmath.mpf(z)))


def _raw_ccdf_mp(y, spec: CcdfSpec):
    m = spec.m_int
    a, b, ybar = mpmath.mpf(spec.alpha), mpmath.mpf(spec.beta), mpmath.mpf(spec.mean_snr)
    B = b * mpmath.sqrt(a / ybar)
    C = a * ybar
    D = 2 * m / b
    z = B * mpmath.sqrt(C + D * y)
    if spec.form == "rescaled":
        A = (
            (a * ybar) ** (mpmath.mpf(1 + 2 * m) / 4)
            / mpmath.gamma(m)
            * mpmath.sqrt(2 * a * b / mpmath.pi)
            * mpmath.exp(a * b)
            * (m / ybar) ** m
        )
        total = mpmath.mpf(0)
        for i in range(m + 1):
            o = m - i
            total += (
                2**i * y**o / ((B * D) ** i * mpmath.factorial(o))
                * mpmath.besselk(o + mpmath.mpf(1) / 2, z) / z ** (o + mpmath.mpf(1) / 2)
            )
        return A * mpmath.gamma(m) * total
    theta = a * b
    total = mpmath.mpf(0)
    for j in range(m):
        total += (
            (m * y / ybar) ** j / mpmath.factorial(j)
            * (theta / z) ** (j + mpmath.mpf(1) / 2)
            * mpmath.besselk(j + mpmath.mpf(1) / 2, z)
        )
    return mpmath.sqrt(2 * theta / mpmath.pi) * mpmath.exp(theta) * total


def reference_ccdf(y: float, spec: CcdfSpec, dps: int = 50) -> float:
    """Normalized ccdf (before clamping) evaluated in multiprecision."""
    with mpmath.workdps(dps):
        yy = mpmath.mpf(y)
        return float(_raw_ccdf_mp(yy, spec) / _raw_ccdf_mp(mpmath.mpf(0), spec))


def reference_raw_at_zero(spec: CcdfSpec, dps: int = 50) -> float:
    with mpmath.workdps(dps):
        return float(_raw_ccdf_mp(mpmath.mpf(0), spec))
