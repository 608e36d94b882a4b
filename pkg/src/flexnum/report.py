"""CSV rows, figure sweeps and the recommendation table."""

from __future__ import annotations

import dataclasses
import io
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .channel import CCDF_FORMS, M_ROUNDING
from .config import RunConfig
from .rate import RATE_MODES, ChannelOptions, RateReport, expected_rate, recommend

CSV_COLUMNS = (
    "environment",
    "scenario",
    "d_A_m",
    "mu",
    "tau_ms",
    "p",
    "zeta",
    "eta",
    "xi",
    "E_S_los",
    "E_S_nlos",
    "rate_aggregate_mbps",
    "rate_time_avg_mbps",
    "recommended_flag",
)

# reference best (mu, tau in ms) per (environment, scenario, d_A)
REFERENCE_RECOMMENDATIONS = {
    ("office", "hand", 1.0): (2, Fraction(5)),
    ("office", "hand", 10.0): (2, Fraction(5)),
    ("office", "pocket", 1.0): (2, Fraction(5)),
    ("office", "pocket", 10.0): (2, Fraction(5)),
    ("car_park", "hand", 1.0): (2, Fraction(5)),
    ("car_park", "hand", 10.0): (4, Fraction(1, 4)),
    ("car_park", "pocket", 1.0): (4, Fraction(1, 4)),
    ("car_park", "pocket", 10.0): (4, Fraction(1, 4)),
}


def fmt(x: float) -> str:
    return format(float(x), ".9g")


@dataclass(frozen=True)
class CsvRow:
    environment: str
    scenario: str
    d_A_m: float
    report: RateReport
    recommended_flag: bool = False

    def fields(self) -> list[str]:
        r = self.report
        return [
            self.environment,
            self.scenario,
            fmt(self.d_A_m),
            str(r.mu),
            fmt(r.tau_ms),
            fmt(r.p),
            fmt(r.zeta),
            fmt(r.eta),
            str(r.xi),
            fmt(r.E_S_los),
            fmt(r.E_S_nlos),
            fmt(r.rate_aggregate_bps / 1e6),
            fmt(r.rate_time_avg_bps / 1e6),
            "1" if self.recommended_flag else "0",
        ]

    @property
    def sort_key(self):
        return (self.environment, self.scenario, self.d_A_m, self.report.tau_ms, self.report.mu)


def render_csv(rows: Iterable[CsvRow]) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for row in rows:
        buf.write(",".join(row.fields()) + "\n")
    return buf.getvalue()


def _rank(report: RateReport, mode: str):
    return (-report.rate(mode), report.mu, -report.tau_ms)


def flag_recommended(rows: Sequence[CsvRow], rate_mode: str) -> list[CsvRow]:
    """Mark the best row of every (environment, scenario, d_A) group."""
    out = sorted(rows, key=lambda r: r.sort_key)
    best = {}
    for row in out:
        key = (row.environment, row.scenario, row.d_A_m)
        if key not in best or _rank(row.report, rate_mode) < _rank(best[key].report, rate_mode):
            best[key] = row
    winners = {id(r) for r in best.values()}
    return [dataclasses.replace(r, recommended_flag=id(r) in winners) for r in out]


def grid_rows(cfg: RunConfig, environments: Sequence[str], taus_ms: Sequence[Fraction],
              workers: int = 1) -> list[CsvRow]:
    points = list(itertools.product(environments, sorted(cfg.scenarios), cfg.distances_m, taus_ms, cfg.mus))

    def one(point):
        env, scen, d, tau, mu = point
        case = cfg.case(env, scen, d, mus=(mu,), taus_ms=(tau,))
        return CsvRow(env, scen, d, expected_rate(case, mu, tau))

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            rows = list(pool.map(one, points))
    else:
        rows = [one(p) for p in points]
    return flag_recommended(rows, cfg.rate_mode)


def fig4_rows(cfg: RunConfig, workers: int = 1) -> list[CsvRow]:
    return grid_rows(cfg, sorted(cfg.environments), (cfg.fig4_tau_ms,), workers)


def fig5_rows(cfg: RunConfig, workers: int = 1) -> list[CsvRow]:
    envs = ["car_park"] if "car_park" in cfg.environments else sorted(cfg.environments)
    return grid_rows(cfg, envs, cfg.taus_ms, workers)


@dataclass(frozen=True)
class RecommendationCell:
    environment: str
    scenario: str
    d_A_m: float
    mu: int
    tau_ms: Fraction
    rate_mbps: float
    expected: tuple[int, Fraction] | None
    expected_rate_mbps: float | None

    @property
    def match(self) -> bool | None:
        if self.expected is None:
            return None
        return (self.mu, self.tau_ms) == self.expected

    @property
    def gap_mbps(self) -> float | None:
        if self.expected_rate_mbps is None:
            return None
        return self.rate_mbps - self.expected_rate_mbps


def recommendation_table(cfg: RunConfig) -> list[RecommendationCell]:
    cells = []
    for env in sorted(cfg.environments):
        for d in cfg.distances_m:
            for scen in sorted(cfg.scenarios):
                rec = recommend(cfg.case(env, scen, d), cfg.rate_mode)
                expected = REFERENCE_RECOMMENDATIONS.get((env, scen, float(d)))
                exp_rate = None
                if expected is not None:
                    for r in rec.ranked:
                        if (r.mu, r.tau_ms) == expected:
                            exp_rate = r.rate(cfg.rate_mode) / 1e6
                cells.append(RecommendationCell(env, scen, float(d), rec.mu, rec.tau_ms, rec.rate_bps / 1e6,
                                                expected, exp_rate))
    return cells


RECOMMEND_COLUMNS = ("environment", "scenario", "d_A_m", "mu", "tau_ms", "rate_mbps",
                     "expected_mu", "expected_tau_ms", "match", "gap_mbps")


def render_recommend_csv(cells: Sequence[RecommendationCell]) -> str:
    lines = [",".join(RECOMMEND_COLUMNS)]
    for c in cells:
        exp_mu, exp_tau = c.expected if c.expected else ("", "")
        lines.append(",".join([
            c.environment, c.scenario, fmt(c.d_A_m), str(c.mu), fmt(c.tau_ms), fmt(c.rate_mbps),
            str(exp_mu), fmt(exp_tau) if exp_tau != "" else "",
            "" if c.match is None else ("MATCH" if c.match else "MISMATCH"),
            "" if c.gap_mbps is None else fmt(c.gap_mbps),
        ]))
    return "\n".join(lines) + "\n"


def render_recommend_text(cells: Sequence[RecommendationCell]) -> str:
    header = f"{'environment':<10} {'scenario':<8} {'d_A':>5} {'mu':>3} {'tau':>6} {'rate[Mbps]':>11}  reference"
    lines = [header, "-" * len(header)]
    for c in cells:
        if c.match is None:
            verdict = "n/a"
        elif c.match:
            verdict = "MATCH"
        else:
            verdict = (f"MISMATCH (expected mu={c.expected[0]}, tau={float(c.expected[1]):g}; "
                       f"gap {c.gap_mbps:.3f} Mbps)")
        lines.append(f"{c.environment:<10} {c.scenario:<8} {c.d_A_m:>5g} {c.mu:>3} {float(c.tau_ms):>6g} "
                     f"{c.rate_mbps:>11.3f}  {verdict}")
    compared = [c for c in cells if c.match is not None]
    lines.append(f"{sum(bool(c.match) for c in compared)}/{len(compared)} cells match the reference recommendations")
    return "\n".join(lines) + "\n"


def toggle_search(cfg: RunConfig) -> dict[tuple[str, str, str], int]:
    """Reference-table matches for every (rate mode, m rounding, ccdf form) toggle."""
    out = {}
    for mode, rounding, form in itertools.product(RATE_MODES, M_ROUNDING, CCDF_FORMS):
        variant = dataclasses.replace(cfg, rate_mode=mode,
                                      channel=ChannelOptions(rounding, form, cfg.channel.quad))
        cells = recommendation_table(variant)
        out[(mode, rounding, form)] = sum(bool(c.match) for c in cells if c.match is not None)
    return out
