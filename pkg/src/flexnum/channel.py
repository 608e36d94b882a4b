"""Path loss, mean SNR and the composite-fading SNR distribution.

The SNR ccdf is a finite sum of half-integer-order Bessel terms. Two forms
are available:

``"rescaled"``
    The classical sum with constants A, B, C, D, over i = 0..m, divided
    by its own value at y = 0. Its terms carry an extra factor B^-(j+1/2)
    relative to the exact form, so the normalized sum exceeds 1 over a wide
    range of y and is only a ccdf after clamping.
``"exact"``
    The ccdf of Nakagami-m fading under unit-mean inverse-Gaussian shadowing
    with shape ``alpha*beta``, integrated in closed form (sum over
    j = 0..m-1). It is normalized analytically and its mean equals the mean
    SNR.

Both share the Bessel argument ``B*sqrt(C + D*y)``. ``"exact"`` is the default.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Callable

from .blockage import Deployment
from .quadrature import QuadSettings, QuadratureError, adaptive_gauss_kronrod, romberg
from .specfun import DomainError, bessel_k_half, ln_factorial, ln_gamma, log_sum_exp

log = logging.getLogger(__name__)

CCDF_FORMS = ("rescaled", "exact")
M_ROUNDING = ("half_away", "floor", "ceil")

TRUNCATION_LEVEL = 1e-10
MAX_TRUNCATION_BITS = 1024.0


class BlockageState(str, enum.Enum):
    LOS = "LOS"
    NLOS = "NLOS"


@dataclass(frozen=True)
class PathLossParams:
    nu: float
    ell_db: float

    def __post_init__(self):
        if not (self.nu > 0 and self.ell_db > 0):
            raise ValueError(f"path loss needs nu > 0 and ell_db > 0, got {self}")


@dataclass(frozen=True)
class FadingParams:
    m_raw: float
    alpha: float
    beta: float

    def __post_init__(self):
        if not self.m_raw >= 0.5:
            raise ValueError(f"Nakagami m must be >= 0.5, got {self.m_raw}")
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(f"shadowing parameters must be positive, got alpha={self.alpha}, beta={self.beta}")

    def m_int(self, rounding: str = "half_away") -> int:
        if rounding == "half_away":
            m = math.floor(self.m_raw + 0.5)
        elif rounding == "floor":
            m = math.floor(self.m_raw)
        elif rounding == "ceil":
            m = math.ceil(self.m_raw)
        else:
            raise ValueError(f"unknown m rounding {rounding!r}; expected one of {M_ROUNDING}")
        return max(1, int(m))


@dataclass(frozen=True)
class StateParams:
    path_loss: PathLossParams
    fading: FadingParams


@dataclass(frozen=True)
class EnvironmentParams:
    name: str
    los: StateParams
    nlos: StateParams

    def __getitem__(self, state: BlockageState) -> StateParams:
        return self.los if BlockageState(state) is BlockageState.LOS else self.nlos


DEFAULT_ENVIRONMENTS = {
    "office": EnvironmentParams(
        "office",
        los=StateParams(PathLossParams(1.18, 45.1), FadingParams(2.64, 7.01, 0.15)),
        nlos=StateParams(PathLossParams(1.07, 57.4), FadingParams(2.35, 5.77, 0.20)),
    ),
    "car_park": EnvironmentParams(
        "car_park",
        los=StateParams(PathLossParams(1.53, 48.7), FadingParams(8.50, 10.30, 0.11)),
        nlos=StateParams(PathLossParams(1.98, 88.8), FadingParams(2.74, 5.11, 0.23)),
    ),
}


@dataclass(frozen=True)
class LinkBudget:
    tx_power_dbm: float = 20.0
    noise_density_dbm_hz: float = -174.0
    bandwidth_hz: float = 100e6

    def __post_init__(self):
        if not self.bandwidth_hz > 0:
            raise ValueError(f"bandwidth must be positive, got {self.bandwidth_hz}")

    @property
    def noise_power_dbm(self) -> float:
        return self.noise_density_dbm_hz + 10.0 * math.log10(self.bandwidth_hz)

    @property
    def snr_budget_db(self) -> float:
        return self.tx_power_dbm - self.noise_power_dbm


def path_loss_db(state: BlockageState, env: EnvironmentParams, dep: Deployment) -> float:
    pl = env[state].path_loss
    return pl.ell_db + 10.0 * pl.nu * math.log10(dep.distance_3d_m)


def path_gain(state: BlockageState, env: EnvironmentParams, dep: Deployment) -> float:
    pl = env[state].path_loss
    return 10.0 ** (-pl.ell_db / 10.0) * dep.distance_3d_m ** (-pl.nu)


def mean_snr(state: BlockageState, env: EnvironmentParams, dep: Deployment, budget: LinkBudget = LinkBudget()) -> float:
    return 10.0 ** (budget.snr_budget_db / 10.0) * path_gain(state, env, dep)


@dataclass(frozen=True)
class CcdfSpec:
    m_int: int
    m_raw: float
    alpha: float
    beta: float
    mean_snr: float
    log_A: float
    B: float
    C: float
    D: float
    form: str
    log_normalization: float

    @property
    def A(self) -> float:
        return math.exp(self.log_A)

    @property
    def normalization(self) -> float:
        """Raw (un-normalized) ccdf value at y = 0."""
        return math.exp(self.log_normalization)


def build_ccdf(fading: FadingParams, mean_snr: float, *, m_rounding: str = "half_away", form: str = "exact") -> CcdfSpec:
    if not mean_snr > 0 or not math.isfinite(mean_snr):
        raise DomainError(f"mean SNR must be finite and positive, got {mean_snr!r}")
    if form not in CCDF_FORMS:
        raise ValueError(f"unknown ccdf form {form!r}; expected one of {CCDF_FORMS}")
    m = fading.m_int(m_rounding)
    a, b = fading.alpha, fading.beta
    log_A = (
        (1 + 2 * m) / 4 * math.log(a * mean_snr)
        - ln_gamma(m)
        + 0.5 * math.log(2 * a * b / math.pi)
        + a * b
        + m * math.log(m / mean_snr)
    )
    B = b * math.sqrt(a / mean_snr)
    C = a * mean_snr
    D = 2 * m / b
    spec = CcdfSpec(m, fading.m_raw, a, b, mean_snr, log_A, B, C, D, form, 0.0)
    if not math.isclose(B * math.sqrt(C), a * b, rel_tol=1e-12):
        raise ArithmeticError(f"ccdf constants inconsistent: B*sqrt(C)={B * math.sqrt(C)} != alpha*beta={a * b}")
    log_norm = log_raw_ccdf(0.0, spec)
    if abs(math.expm1(log_norm)) > 1e-6:
        log.debug("raw ccdf at y=0 is %.6g (form=%s, m=%d, ybar=%.4g)", math.exp(log_norm), form, m, mean_snr)
    return CcdfSpec(m, fading.m_raw, a, b, mean_snr, log_A, B, C, D, form, log_norm)


def log_raw_ccdf(y: float, spec: CcdfSpec) -> float:
    """Natural log of the un-normalized ccdf sum at threshold ``y``."""
    if y < 0 or math.isnan(y):
        raise DomainError(f"SNR threshold must be non-negative, got {y!r}")
    m = spec.m_int
    z = spec.B * math.sqrt(spec.C + spec.D * y)
    log_z = math.log(z)
    log_y = math.log(y) if y > 0 else -math.inf
    terms = []
    if spec.form == "rescaled":
        log_bd = math.log(spec.B * spec.D)
        for i in range(m + 1):
            o = m - i
            if o and y == 0:
                continue
            terms.append(
                i * math.log(2.0)
                + (o * log_y if o else 0.0)
                - i * log_bd
                - ln_factorial(o)
                + bessel_k_half(o, z).log_magnitude
                - (o + 0.5) * log_z
            )
        return spec.log_A + ln_gamma(m) + log_sum_exp(terms)
    theta = spec.alpha * spec.beta
    log_ratio = math.log(theta) - log_z
    log_scaled_y = math.log(m / spec.mean_snr) + log_y
    for j in range(m):
        if j and y == 0:
            continue
        terms.append(
            (j * log_scaled_y if j else 0.0)
            - ln_factorial(j)
            + (j + 0.5) * log_ratio
            + bessel_k_half(j, z).log_magnitude
        )
    return 0.5 * math.log(2 * theta / math.pi) + theta + log_sum_exp(terms)


def snr_ccdf_unclamped(y: float, spec: CcdfSpec) -> float:
    if y == 0:
        return 1.0
    return math.exp(log_raw_ccdf(y, spec) - spec.log_normalization)


def snr_ccdf(y: float, spec: CcdfSpec) -> float:
    """P(Y > y) for the composite-fading SNR."""
    return min(1.0, max(0.0, snr_ccdf_unclamped(y, spec)))


def _se_integrand(spec: CcdfSpec) -> Callable[[float], float]:
    ln2 = math.log(2.0)
    return lambda s: snr_ccdf(math.expm1(s * ln2), spec)


def truncation_point(g: Callable[[float], float], level: float = TRUNCATION_LEVEL) -> float:
    """Smallest power-of-two ``s`` with ``g(s) < level``."""
    s = 1.0
    while g(s) >= level:
        s *= 2.0
        if s > MAX_TRUNCATION_BITS:
            raise QuadratureError("integrand does not decay below the truncation level", math.nan, g(s / 2))
    return s


def clamp_breakpoint(spec: CcdfSpec, s_max: float, tol: float = 1e-12) -> float:
    """Last ``s`` in ``[0, s_max]`` where the normalized sum at ``2^s - 1`` is
    still >= 1, or 0 if it never exceeds 1 there.

    Integrating on both sides of this point keeps the clamp kink on an
    interval boundary.
    """
    ln2 = math.log(2.0)

    def over(s: float) -> bool:
        return snr_ccdf_unclamped(math.expm1(s * ln2), spec) >= 1.0

    step = s_max / 512
    hi = s_max
    while hi > 0 and not over(hi - step):
        hi -= step
    if hi <= 0:
        return 0.0
    lo = hi - step
    while hi - lo > tol * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if over(mid):
            lo = mid
        else:
            hi = mid
    return lo


def expected_spectral_efficiency(spec: CcdfSpec, quad: QuadSettings = QuadSettings(), method: str = "adaptive") -> float:
    """E[log2(1 + Y)] in bit/s/Hz as the integral of P(Y > 2^s - 1) over s."""
    g = _se_integrand(spec)
    s_max = truncation_point(g)
    if method == "adaptive":
        integrate = adaptive_gauss_kronrod
    elif method == "romberg":
        integrate = romberg
    else:
        raise ValueError(f"unknown quadrature method {method!r}")
    s_clamp = clamp_breakpoint(spec, s_max)
    return integrate(g, 0.0, s_clamp, quad) + integrate(g, s_clamp, s_max, quad)


def mean_snr_from_ccdf(spec: CcdfSpec, quad: QuadSettings = QuadSettings()) -> float:
    """E[Y] as the integral of the ccdf, taken over s with y = 2^s - 1."""
    ln2 = math.log(2.0)

    def h(s: float) -> float:
        return snr_ccdf(math.expm1(s * ln2), spec) * ln2 * 2.0**s

    s_max = truncation_point(lambda s: h(s) / max(spec.mean_snr, 1.0), 1e-14)
    s_clamp = clamp_breakpoint(spec, s_max)
    rel = QuadSettings(abs_tol=1e-12 * max(spec.mean_snr, 1.0), rel_tol=1e-10, max_intervals=quad.max_intervals)
    return adaptive_gauss_kronrod(h, 0.0, s_clamp, rel) + adaptive_gauss_kronrod(h, s_clamp, s_max, rel)
