"""Self-body blockage: free zone, per-interval blockage probability, LOS survival."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .radio_params import Duration, PreconditionError, as_fraction

DEFAULT_DELTA_T_MS = Fraction(1, 16)


@dataclass(frozen=True)
class BodyGeometry:
    body_width_m: float = 0.40
    body_distance_m: float = 0.30
    body_height_m: float = 0.40

    def __post_init__(self):
        if not self.body_width_m > 0:
            raise ValueError(f"body width must be positive, got {self.body_width_m}")
        if not self.body_distance_m >= 0:
            raise ValueError(f"body distance must be non-negative, got {self.body_distance_m}")


@dataclass(frozen=True)
class Deployment:
    ap_distance_m: float
    ap_height_m: float = 5.0

    def __post_init__(self):
        if not self.ap_height_m > 0:
            raise ValueError(f"AP height must be positive, got {self.ap_height_m}")
        if not self.ap_distance_m >= 0:
            raise ValueError(f"AP distance must be non-negative, got {self.ap_distance_m}")

    @property
    def distance_3d_m(self) -> float:
        return math.hypot(self.ap_distance_m, self.ap_height_m)


@dataclass(frozen=True)
class BlockageProcess:
    """Independent blockage per coherence interval; ``k`` intervals per slot."""

    p: float
    tti_ms: Fraction
    slots: int = 1
    delta_t_ms: Fraction = DEFAULT_DELTA_T_MS

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"blockage probability must lie in [0, 1], got {self.p}")

    @property
    def k(self) -> int:
        return intervals_per_slot(self.tti_ms, self.delta_t_ms)


def intervals_per_slot(tti_ms: Duration, delta_t_ms: Duration) -> int:
    tti, dt = as_fraction(tti_ms), as_fraction(delta_t_ms)
    if dt <= 0:
        raise PreconditionError(f"coherence interval must be positive, got {dt} ms")
    k, residue = divmod(tti, dt)
    if residue or k < 1:
        raise PreconditionError(
            f"TTI {float(tti)} ms is not a positive multiple of the coherence interval {float(dt)} ms"
        )
    return int(k)


def blockage_free_radius(body: BodyGeometry, dep: Deployment) -> float:
    if not body.body_height_m > 0:
        raise ValueError(f"body height must be positive, got {body.body_height_m}")
    return body.body_distance_m * dep.ap_height_m / body.body_height_m


def shadow_cone_width(body: BodyGeometry) -> float:
    """Angular width of AP orientations shadowed by the body (rad)."""
    if body.body_distance_m == 0:
        raise ValueError("shadow cone is degenerate for a body at zero distance; use p = 1/2")
    return 2.0 * math.atan(body.body_width_m / (2.0 * body.body_distance_m))


def blockage_probability(body: BodyGeometry, dep: Deployment) -> float:
    if body.body_distance_m == 0:
        return 0.5
    if dep.ap_distance_m < blockage_free_radius(body, dep):
        return 0.0
    return math.atan(body.body_width_m / (2.0 * body.body_distance_m)) / math.pi


def los_slot_probability(i: int, proc: BlockageProcess) -> float:
    """Probability that slot ``i`` (1-based) is still in LOS."""
    if i < 1:
        raise ValueError(f"slot index is 1-based, got {i}")
    k = proc.k
    if proc.p == 0.0:
        return 1.0
    if proc.p == 1.0:
        return 0.0
    return (1.0 - proc.p) ** (i * k)
