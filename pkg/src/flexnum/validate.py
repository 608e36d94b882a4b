"""Self-checks run by ``flexnum validate``.

Each check compares a production code path with an independent oracle and
records the measured discrepancy next to its tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .blockage import Deployment
from .channel import (
    BlockageState,
    build_ccdf,
    expected_spectral_efficiency,
    mean_snr,
    mean_snr_from_ccdf,
    snr_ccdf,
    snr_ccdf_unclamped,
)
from .config import RunConfig
from .oracles import reference_bessel_k, reference_ccdf
from .rate import (
    aggregate_rate,
    expected_rate,
    geometric_factor,
    per_slot_expected_se,
    simulate_blockage,
)
from .specfun import bessel_k_half

MIN_MC_TRIALS = 1000

PASS, FAIL, SKIP, INFO = "PASS", "FAIL", "SKIPPED", "INFO"


@dataclass(frozen=True)
class CheckResult:
    name: str
    status: str
    detail: str

    def line(self) -> str:
        return f"[{self.status}] {self.name}: {self.detail}"


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def check_efficiency(cfg: RunConfig) -> list[CheckResult]:
    bad = cfg.efficiency.violations()
    if bad:
        return [CheckResult("efficiency model invariants", FAIL, "; ".join(bad))]
    return [CheckResult("efficiency model invariants", PASS, "0 < eta <= 1, eta non-increasing in mu")]


def check_bessel() -> list[CheckResult]:
    worst = 0.0
    for n in range(11):
        for z in (0.1, 0.5, 1.0, 3.0, 10.0, 100.0):
            ref = reference_bessel_k(n + 0.5, z)
            worst = max(worst, abs(bessel_k_half(n, z).value / ref - 1.0))
    rec = 0.0
    for n in range(1, 11):
        nu = n + 0.5
        for z in (0.1, 1.0, 10.0, 100.0):
            lo, mid, hi = (bessel_k_half(n - 1, z).value, bessel_k_half(n, z).value,
                           bessel_k_half(n + 1, z).value)
            rec = max(rec, abs(hi - lo - 2 * nu / z * mid) / hi)
    return [
        CheckResult("bessel K_{n+1/2} vs mpmath", _status(worst <= 1e-10), f"max rel err {worst:.2e} (tol 1e-10)"),
        CheckResult("bessel recurrence", _status(rec <= 1e-9), f"max residual {rec:.2e} (tol 1e-9)"),
    ]


def _specs(cfg: RunConfig):
    for env_name, env in sorted(cfg.environments.items()):
        for d in cfg.distances_m:
            dep = Deployment(d, cfg.ap_height_m)
            for state in BlockageState:
                ybar = mean_snr(state, env, dep, cfg.budget)
                spec = build_ccdf(env[state].fading, ybar, m_rounding=cfg.channel.m_rounding,
                                  form=cfg.channel.ccdf_form)
                yield f"{env_name}/{state.value}/d={d:g}", spec


def check_ccdf(cfg: RunConfig) -> list[CheckResult]:
    out = []
    for label, spec in _specs(cfg):
        ybar = spec.mean_snr
        grid = np.concatenate([[0.0], np.geomspace(1e-6 * ybar, 1e3 * ybar, 999)])
        values = np.array([snr_ccdf(y, spec) for y in grid])
        raw = np.array([snr_ccdf_unclamped(y, spec) for y in grid])
        rise = float(np.max(np.diff(values), initial=0.0))
        over = float(max(raw.max() - 1.0, -raw.min(), 0.0))
        out.append(CheckResult(f"ccdf {label} normalization", INFO if spec.form == "rescaled" else
                               _status(abs(spec.normalization - 1.0) <= 1e-6),
                               f"raw value at y=0 is {spec.normalization:.9g}; F(0)={snr_ccdf(0.0, spec)}"))
        out.append(CheckResult(f"ccdf {label} monotone", _status(values[0] == 1.0 and rise <= 1e-9),
                               f"max increase {rise:.2e} over 1000 points (tol 1e-9)"))
        out.append(CheckResult(f"ccdf {label} range before clamp",
                               INFO if spec.form == "rescaled" else _status(over <= 1e-9),
                               f"max excursion outside [0,1] {over:.3g}"))
        probes = np.geomspace(1e-3 * ybar, 30 * ybar, 20)
        err = max(abs(snr_ccdf_unclamped(y, spec) / reference_ccdf(y, spec) - 1.0) for y in probes)
        out.append(CheckResult(f"ccdf {label} vs multiprecision", _status(err <= 1e-8),
                               f"max rel err {err:.2e} at 20 probes (tol 1e-8)"))
    return out


def check_quadrature(cfg: RunConfig) -> list[CheckResult]:
    out = []
    for label, spec in _specs(cfg):
        a = expected_spectral_efficiency(spec, cfg.channel.quad, "adaptive")
        r = expected_spectral_efficiency(spec, cfg.channel.quad, "romberg")
        rel = abs(a - r) / abs(r)
        bound = math.log2(1.0 + mean_snr_from_ccdf(spec, cfg.channel.quad))
        out.append(CheckResult(f"E[S] {label} dual quadrature", _status(rel <= 1e-5),
                               f"adaptive {a:.9g} vs romberg {r:.9g}, rel {rel:.2e} (tol 1e-5)"))
        out.append(CheckResult(f"E[S] {label} Jensen bound", _status(a <= bound),
                               f"E[S]={a:.6g} <= log2(1+E[Y])={bound:.6g}"))
    return out


def closed_form_worst_error(n: int = 1000, seed: int = 7) -> float:
    """Max relative gap between the geometric closed form and the slot sum."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        p = float(rng.uniform(0.0, 1.0))
        xi = int(rng.integers(1, 81))
        k = int(rng.integers(1, 17))
        e_nlos = float(rng.uniform(0.0, 20.0))
        e_los = e_nlos + float(rng.uniform(0.0, 20.0))
        closed = aggregate_rate(1.0, 1.0, 1.0, xi, geometric_factor(p, k, xi), e_los, e_nlos)
        brute = math.fsum(per_slot_expected_se(i, p, k, e_los, e_nlos) for i in range(1, xi + 1))
        worst = max(worst, abs(closed - brute) / abs(brute))
    return worst


def q_limit_gap(xi: int = 16, k: int = 1) -> float:
    p = 1e-9
    near = aggregate_rate(1.0, 1.0, 1.0, xi, geometric_factor(p, k, xi), 5.0, 2.0)
    at = aggregate_rate(1.0, 1.0, 1.0, xi, geometric_factor(0.0, k, xi), 5.0, 2.0)
    return abs(near - at) / at


def check_closed_form() -> list[CheckResult]:
    worst = closed_form_worst_error()
    gap = q_limit_gap()
    return [
        CheckResult("closed form vs slot sum", _status(worst <= 1e-12), f"max rel err {worst:.2e} over 1000 tuples (tol 1e-12)"),
        CheckResult("q -> 1 continuity", _status(gap < 1e-6), f"rel gap {gap:.2e} (tol 1e-6)"),
    ]


def mc_cells(cfg: RunConfig):
    env = "car_park" if "car_park" in cfg.environments else sorted(cfg.environments)[0]
    for scen in sorted(cfg.scenarios):
        for d in cfg.distances_m:
            yield env, scen, d


def check_monte_carlo(cfg: RunConfig, trials: int, seed: int) -> list[CheckResult]:
    if trials < MIN_MC_TRIALS:
        return [CheckResult("blockage Monte Carlo", SKIP, f"{trials} trials < {MIN_MC_TRIALS}, insufficient power")]
    out = []
    for env, scen, d in mc_cells(cfg):
        case = cfg.case(env, scen, d)
        for mu in case.mus:
            for tau in case.taus_ms:
                sim = simulate_blockage(case, mu, tau, trials, seed)
                rep = expected_rate(case, mu, tau)
                P = np.array(rep.per_slot_los_prob)
                se = np.sqrt(P * (1 - P) / trials)
                freq_ok = bool(np.all(np.abs(sim.los_frequency - P) <= 3 * se))
                z = np.max(np.abs(sim.los_frequency - P) / np.where(se > 0, se, np.inf))
                rate_gap = abs(sim.mean_rate_time_avg_bps - rep.rate_time_avg_bps)
                rate_ok = rate_gap <= 3 * sim.rate_time_avg_stderr_bps
                label = f"MC {env}/{scen}/d={d:g} mu={mu} tau={float(tau):g}"
                out.append(CheckResult(label, _status(freq_ok and rate_ok),
                                       f"max per-slot |z| {z:.2f} (tol 3); rate gap {rate_gap / 1e6:.4f} Mbps "
                                       f"vs 3se {3 * sim.rate_time_avg_stderr_bps / 1e6:.4f} Mbps"))
    return out


def run_validation(cfg: RunConfig, trials: int | None = None, seed: int | None = None) -> list[CheckResult]:
    trials = cfg.trials if trials is None else trials
    seed = cfg.seed if seed is None else seed
    results = check_efficiency(cfg)
    results += check_bessel()
    results += check_ccdf(cfg)
    results += check_quadrature(cfg)
    results += check_closed_form()
    results += check_monte_carlo(cfg, trials, seed)
    return results

