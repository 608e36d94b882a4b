"""NR numerology table and frame-efficiency models.

Durations are kept as exact ``Fraction`` milliseconds so that checks such as
"tau is a whole number of slots" never suffer from binary rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

Duration = Union[Fraction, int, float, str]

SUPPORTED_MU = (0, 1, 2, 3, 4)
MMWAVE_MU = (2, 3, 4)
# Rel-15 restricts mmWave bands to mu > 2; mu = 2 is still evaluated at mmWave.
REL15_MMWAVE_MU = (3, 4)

CP_MU0_US = Fraction("4.69")
RB_SUBCARRIERS = 12
SCS_MU0_KHZ = 15

DEFAULT_ETA = {2: 1.00, 3: 0.95, 4: 0.90}


class PreconditionError(ValueError):
    """An input combination violates an exactness precondition."""


def as_fraction(x: Duration) -> Fraction:
    """Exact decimal reading of a duration (``0.3`` becomes ``3/10``)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("boolean is not a duration")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class Numerology:
    mu: int
    tti_ms: Fraction
    cp_us: Fraction
    rb_bandwidth_khz: int

    @property
    def mmwave_eligible(self) -> bool:
        return self.mu in MMWAVE_MU

    @property
    def rel15_mmwave(self) -> bool:
        return self.mu in REL15_MMWAVE_MU

    @property
    def subcarrier_spacing_khz(self) -> int:
        return SCS_MU0_KHZ * 2**self.mu


def numerology_lookup(mu: int) -> Numerology:
    if isinstance(mu, bool) or not isinstance(mu, int) or mu not in SUPPORTED_MU:
        raise ValueError(f"numerology mu must be one of {SUPPORTED_MU}, got {mu!r}")
    scale = 2**mu
    return Numerology(
        mu=mu,
        tti_ms=Fraction(1, scale),
        cp_us=CP_MU0_US / scale,
        rb_bandwidth_khz=scale * SCS_MU0_KHZ * RB_SUBCARRIERS,
    )


@dataclass(frozen=True)
class EfficiencyModel:
    """Per-numerology transmission efficiency plus slot overhead layout."""

    eta_by_mu: Mapping[int, float] = field(default_factory=lambda: dict(DEFAULT_ETA))
    overhead_symbols: int = 3
    symbols_per_slot: int = 14

    def __hash__(self) -> int:
        return hash((tuple(sorted(self.eta_by_mu.items())), self.overhead_symbols, self.symbols_per_slot))

    def violations(self) -> list[str]:
        """Invariant violations, empty when the model is consistent."""
        out = []
        for mu, eta in sorted(self.eta_by_mu.items()):
            if not 0.0 < eta:
                out.append(f"eta{mu}={eta} violates eta > 0")
            if eta > 1.0:
                out.append(f"eta{mu}={eta} violates eta <= 1")
        mus = sorted(self.eta_by_mu)
        for lo, hi in zip(mus, mus[1:]):
            if self.eta_by_mu[hi] > self.eta_by_mu[lo]:
                out.append(f"eta{hi}={self.eta_by_mu[hi]} > eta{lo}={self.eta_by_mu[lo]} violates eta non-increasing in mu")
        if not 0 <= self.overhead_symbols < self.symbols_per_slot:
            out.append("overhead_symbols must lie in [0, symbols_per_slot)")
        return out


def slots_per_interval(mu: int, tau_ms: Duration) -> int:
    """Number of slots ``tau / t_mu`` aggregated in one scheduling interval."""
    tti = numerology_lookup(mu).tti_ms
    tau = as_fraction(tau_ms)
    if tau <= 0:
        raise PreconditionError(f"scheduling interval must be positive, got {tau} ms")
    xi, residue = divmod(tau, tti)
    if residue:
        raise PreconditionError(
            f"xi-integrality violated: tau={float(tau)} ms is not a multiple of "
            f"t_mu={float(tti)} ms for mu={mu} (residue {float(residue)} ms)"
        )
    return int(xi)


def slot_aggregation_efficiency(mu: int, tau_ms: Duration, model: EfficiencyModel | None = None) -> float:
    model = model or EfficiencyModel()
    slots_per_interval(mu, tau_ms)
    tti = numerology_lookup(mu).tti_ms
    tau = as_fraction(tau_ms)
    return float(1 - Fraction(model.overhead_symbols) * tti / (model.symbols_per_slot * tau))


def transmission_efficiency(mu: int, model: EfficiencyModel | None = None) -> float:
    model = model or EfficiencyModel()
    try:
        return float(model.eta_by_mu[mu])
    except KeyError:
        raise ValueError(f"no transmission efficiency configured for mu={mu}") from None
