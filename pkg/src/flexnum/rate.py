"""Expected data rate per (numerology, scheduling interval) and the recommender.

Blockage is absorbing inside a scheduling interval: after the first blocked
coherence interval every remaining slot is NLOS. Slot ``i`` is therefore LOS
with probability ``q**i`` where ``q = (1 - p)**k`` and ``k`` is the number of
coherence intervals per slot, and the expected number of LOS slots is the
geometric sum ``G = q (q**xi - 1) / (q - 1)``.
"""

from __future__ import annotations

import functools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .blockage import (
    DEFAULT_DELTA_T_MS,
    BlockageProcess,
    BodyGeometry,
    Deployment,
    blockage_probability,
    intervals_per_slot,
    los_slot_probability,
)
from .channel import (
    BlockageState,
    EnvironmentParams,
    LinkBudget,
    build_ccdf,
    expected_spectral_efficiency,
    mean_snr,
)
from .quadrature import QuadSettings
from .radio_params import (
    EfficiencyModel,
    as_fraction,
    numerology_lookup,
    slot_aggregation_efficiency,
    slots_per_interval,
    transmission_efficiency,
)

RATE_MODES = ("time_avg", "aggregate")
MC_PARTITION = 10_000


@dataclass(frozen=True)
class ChannelOptions:
    m_rounding: str = "half_away"
    ccdf_form: str = "exact"
    quad: QuadSettings = QuadSettings()


@dataclass(frozen=True)
class ScenarioCase:
    environment: EnvironmentParams
    body: BodyGeometry
    deployment: Deployment
    scenario: str = ""
    budget: LinkBudget = LinkBudget()
    delta_t_ms: Fraction = DEFAULT_DELTA_T_MS
    mus: tuple[int, ...] = (2, 3, 4)
    taus_ms: tuple[Fraction, ...] = (Fraction(1, 4), Fraction(5))
    efficiency: EfficiencyModel = field(default_factory=EfficiencyModel)
    channel: ChannelOptions = ChannelOptions()

    def __post_init__(self):
        object.__setattr__(self, "delta_t_ms", as_fraction(self.delta_t_ms))
        object.__setattr__(self, "taus_ms", tuple(as_fraction(t) for t in self.taus_ms))
        object.__setattr__(self, "mus", tuple(self.mus))
        for mu in self.mus:
            intervals_per_slot(numerology_lookup(mu).tti_ms, self.delta_t_ms)
            for tau in self.taus_ms:
                slots_per_interval(mu, tau)

    @property
    def blockage_p(self) -> float:
        return blockage_probability(self.body, self.deployment)


@dataclass(frozen=True)
class RateReport:
    mu: int
    tau_ms: Fraction
    xi: int
    k: int
    zeta: float
    eta: float
    p: float
    q: float
    E_S_los: float
    E_S_nlos: float
    per_slot_los_prob: tuple[float, ...]
    rate_aggregate_bps: float
    rate_time_avg_bps: float

    def rate(self, mode: str = "time_avg") -> float:
        if mode == "time_avg":
            return self.rate_time_avg_bps
        if mode == "aggregate":
            return self.rate_aggregate_bps
        raise ValueError(f"unknown rate mode {mode!r}; expected one of {RATE_MODES}")


@dataclass(frozen=True)
class Recommendation:
    mu: int
    tau_ms: Fraction
    rate_bps: float
    rate_mode: str
    ranked: tuple[RateReport, ...]

    @property
    def best(self) -> RateReport:
        return self.ranked[0]


@functools.lru_cache(maxsize=None)
def conditional_spectral_efficiency(
    state: BlockageState,
    env: EnvironmentParams,
    dep: Deployment,
    budget: LinkBudget,
    channel: ChannelOptions = ChannelOptions(),
) -> float:
    """E[S | X = state] in bit/s/Hz."""
    spec = build_ccdf(
        env[state].fading,
        mean_snr(state, env, dep, budget),
        m_rounding=channel.m_rounding,
        form=channel.ccdf_form,
    )
    return expected_spectral_efficiency(spec, channel.quad)


def per_slot_expected_se(i: int, p: float, k: int, E_S_los: float, E_S_nlos: float) -> float:
    if i < 1:
        raise ValueError(f"slot index is 1-based, got {i}")
    survive = 1.0 if p == 0 else 0.0 if p == 1 else (1.0 - p) ** (i * k)
    return survive * E_S_los + (1.0 - survive) * E_S_nlos


def geometric_factor(p: float, k: int, xi: int) -> float:
    """Expected number of LOS slots, sum of q**i for i = 1..xi."""
    if p == 0:
        return float(xi)
    if p == 1:
        return 0.0
    log_q = k * math.log1p(-p)
    if log_q == 0.0:
        return float(xi)
    # rounding can push the ratio a few ulp past xi when q is within ulps of 1
    return min(float(xi), math.exp(log_q) * math.expm1(xi * log_q) / math.expm1(log_q))


def aggregate_rate(bandwidth_hz: float, zeta: float, eta: float, xi: int, expected_los_slots: float,
                   E_S_los: float, E_S_nlos: float) -> float:
    return bandwidth_hz * zeta * eta * (xi * E_S_nlos + expected_los_slots * (E_S_los - E_S_nlos))


def expected_rate(case: ScenarioCase, mu: int, tau_ms) -> RateReport:
    tau = as_fraction(tau_ms)
    num = numerology_lookup(mu)
    xi = slots_per_interval(mu, tau)
    k = intervals_per_slot(num.tti_ms, case.delta_t_ms)
    zeta = slot_aggregation_efficiency(mu, tau, case.efficiency)
    eta = transmission_efficiency(mu, case.efficiency)
    p = case.blockage_p
    env, dep, budget = case.environment, case.deployment, case.budget
    e_los = conditional_spectral_efficiency(BlockageState.LOS, env, dep, budget, case.channel)
    e_nlos = conditional_spectral_efficiency(BlockageState.NLOS, env, dep, budget, case.channel)
    proc = BlockageProcess(p, num.tti_ms, xi, case.delta_t_ms)
    g = geometric_factor(p, k, xi)
    agg = aggregate_rate(budget.bandwidth_hz, zeta, eta, xi, g, e_los, e_nlos)
    return RateReport(
        mu=mu,
        tau_ms=tau,
        xi=xi,
        k=k,
        zeta=zeta,
        eta=eta,
        p=p,
        q=1.0 if p == 0 else (1.0 - p) ** k,
        E_S_los=e_los,
        E_S_nlos=e_nlos,
        per_slot_los_prob=tuple(los_slot_probability(i, proc) for i in range(1, xi + 1)),
        rate_aggregate_bps=agg,
        rate_time_avg_bps=agg / xi,
    )


def _rank_key(report: RateReport, mode: str):
    # higher rate first, then lower mu, then longer tau
    return (-report.rate(mode), report.mu, -report.tau_ms)


def recommend(case: ScenarioCase, rate_mode: str = "time_avg") -> Recommendation:
    if rate_mode not in RATE_MODES:
        raise ValueError(f"unknown rate mode {rate_mode!r}; expected one of {RATE_MODES}")
    if not case.mus or not case.taus_ms:
        raise ValueError("recommend needs at least one numerology and one scheduling interval")
    reports = [expected_rate(case, mu, tau) for mu in case.mus for tau in case.taus_ms]
    ranked = tuple(sorted(reports, key=lambda r: _rank_key(r, rate_mode)))
    best = ranked[0]
    return Recommendation(best.mu, best.tau_ms, best.rate(rate_mode), rate_mode, ranked)


@dataclass(frozen=True)
class BlockageSimResult:
    trials: int
    xi: int
    k: int
    p: float
    los_frequency: np.ndarray
    mean_los_slots: float
    los_slots_std: float
    mean_rate_time_avg_bps: float
    rate_time_avg_stderr_bps: float

    @property
    def los_slots_stderr(self) -> float:
        return self.los_slots_std / math.sqrt(self.trials)


def _simulate_partition(seed: int, index: int, n: int, p: float, k: int, xi: int) -> np.ndarray:
    """Histogram of the number of LOS slots (0..xi) over ``n`` trials."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, index]))
    blocked = rng.random((n, xi * k)) < p
    first = np.where(blocked.any(axis=1), blocked.argmax(axis=1), xi * k)
    return np.bincount(first // k, minlength=xi + 1)


def simulate_blockage(case: ScenarioCase, mu: int, tau_ms, trials: int, seed: int = 42,
                      workers: int = 1) -> BlockageSimResult:
    """Monte-Carlo replay of the absorbing blockage process.

    Trials are split into fixed-size partitions seeded by ``(seed, index)``,
    so the result does not depend on ``workers``.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    report = expected_rate(case, mu, tau_ms)
    xi, k, p = report.xi, report.k, report.p
    sizes = [MC_PARTITION] * (trials // MC_PARTITION)
    if trials % MC_PARTITION:
        sizes.append(trials % MC_PARTITION)
    jobs = [(seed, i, n, p, k, xi) for i, n in enumerate(sizes)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            hists = list(pool.map(lambda a: _simulate_partition(*a), jobs))
    else:
        hists = [_simulate_partition(*a) for a in jobs]
    hist = np.sum(hists, axis=0)
    n_los = np.arange(xi + 1)
    # slot i is LOS in every trial with at least i LOS slots
    los_frequency = hist[::-1].cumsum()[::-1][1:] / trials
    total = int(hist @ n_los)
    mean_los = total / trials
    var = float(hist @ (n_los - mean_los) ** 2) / max(trials - 1, 1)
    b = case.budget.bandwidth_hz
    rate = aggregate_rate(b, report.zeta, report.eta, xi, mean_los, report.E_S_los, report.E_S_nlos) / xi
    scale = b * report.zeta * report.eta * abs(report.E_S_los - report.E_S_nlos) / xi
    return BlockageSimResult(
        trials=trials,
        xi=xi,
        k=k,
        p=p,
        los_frequency=los_frequency,
        mean_los_slots=mean_los,
        los_slots_std=math.sqrt(var),
        mean_rate_time_avg_bps=rate,
        rate_time_avg_stderr_bps=scale * math.sqrt(var / trials),
    )

