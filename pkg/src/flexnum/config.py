"""Run configuration: JSON schema, defaults and conversion to model objects.

With no config file the defaults reproduce the reference office/car-park
setup: hand and pocket scenarios at 1 m and 10 m, mu in {2, 3, 4}, tau in
{0.25, 5} ms, and 1 ms for the TTI comparison sweep.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema

from .blockage import BodyGeometry, Deployment, intervals_per_slot
from .channel import (
    CCDF_FORMS,
    M_ROUNDING,
    DEFAULT_ENVIRONMENTS,
    EnvironmentParams,
    FadingParams,
    LinkBudget,
    PathLossParams,
    StateParams,
)
from .radio_params import (
    DEFAULT_ETA,
    EfficiencyModel,
    PreconditionError,
    as_fraction,
    numerology_lookup,
    slots_per_interval,
)
from .rate import RATE_MODES, ChannelOptions, ScenarioCase

SCHEMA_VERSION = 1

DEFAULT_SCENARIOS = {
    "hand": BodyGeometry(body_width_m=0.40, body_distance_m=0.30, body_height_m=0.40),
    "pocket": BodyGeometry(body_width_m=0.40, body_distance_m=0.0, body_height_m=0.40),
}

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_state = {
    "type": "object",
    "additionalProperties": False,
    "properties": {"nu": _pos, "ell_db": _pos, "alpha": _pos, "beta": _pos, "m": {"type": "number", "minimum": 0.5}},
}

CONFIG_SCHEMA: dict[str, Any] = {
    "type": "object",
    "additionalProperties": False,
    "required": ["schema_version"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "environments": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": False,
                "properties": {"LOS": _state, "NLOS": _state},
            },
        },
        "scenarios": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "additionalProperties": False,
                "required": ["body_distance_m"],
                "properties": {
                    "body_width_m": _pos,
                    "body_distance_m": {"type": "number", "minimum": 0},
                    "body_height_m": _pos,
                },
            },
        },
        "distances_m": {"type": "array", "minItems": 1, "items": {"type": "number", "minimum": 0}},
        "ap_height_m": _pos,
        "link_budget": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"tx_power_dbm": _num, "noise_density_dbm_hz": _num, "bandwidth_hz": _pos},
        },
        "delta_t_ms": _pos,
        "mus": {"type": "array", "minItems": 1, "uniqueItems": True, "items": {"enum": [0, 1, 2, 3, 4]}},
        "taus_ms": {"type": "array", "minItems": 1, "uniqueItems": True, "items": _pos},
        "fig4_tau_ms": _pos,
        "efficiency": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "eta": {"type": "object", "propertyNames": {"pattern": "^[0-4]$"}, "additionalProperties": _num},
                "overhead_symbols": {"type": "integer", "minimum": 0},
                "symbols_per_slot": {"type": "integer", "minimum": 1},
            },
        },
        "channel": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"m_rounding": {"enum": list(M_ROUNDING)}, "ccdf_form": {"enum": list(CCDF_FORMS)}},
        },
        "rate_mode": {"enum": list(RATE_MODES)},
        "monte_carlo": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "trials": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
            },
        },
        "output": {"type": "object", "additionalProperties": False, "properties": {"dir": {"type": "string"}}},
    },
}


class ConfigError(ValueError):
    """Configuration rejected; ``path`` locates the offending entry."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class RunConfig:
    environments: dict[str, EnvironmentParams] = field(default_factory=lambda: dict(DEFAULT_ENVIRONMENTS))
    scenarios: dict[str, BodyGeometry] = field(default_factory=lambda: dict(DEFAULT_SCENARIOS))
    distances_m: tuple[float, ...] = (1.0, 10.0)
    ap_height_m: float = 5.0
    budget: LinkBudget = LinkBudget()
    delta_t_ms: Fraction = Fraction(1, 16)
    mus: tuple[int, ...] = (2, 3, 4)
    taus_ms: tuple[Fraction, ...] = (Fraction(1, 4), Fraction(5))
    fig4_tau_ms: Fraction = Fraction(1)
    efficiency: EfficiencyModel = field(default_factory=EfficiencyModel)
    channel: ChannelOptions = ChannelOptions()
    rate_mode: str = "time_avg"
    trials: int = 100_000
    seed: int = 42
    out_dir: str = "out"

    def case(self, environment: str, scenario: str, distance_m: float,
             mus=None, taus_ms=None) -> ScenarioCase:
        try:
            env = self.environments[environment]
        except KeyError:
            raise ConfigError("$.environments", f"unknown environment {environment!r}") from None
        try:
            body = self.scenarios[scenario]
        except KeyError:
            raise ConfigError("$.scenarios", f"unknown scenario {scenario!r}") from None
        return ScenarioCase(
            environment=env,
            body=body,
            deployment=Deployment(ap_distance_m=float(distance_m), ap_height_m=self.ap_height_m),
            scenario=scenario,
            budget=self.budget,
            delta_t_ms=self.delta_t_ms,
            mus=tuple(self.mus if mus is None else mus),
            taus_ms=tuple(self.taus_ms if taus_ms is None else taus_ms),
            efficiency=self.efficiency,
            channel=self.channel,
        )


def _json_path(error: jsonschema.ValidationError) -> str:
    path = "$"
    for part in error.absolute_path:
        path += f"[{part}]" if isinstance(part, int) else f".{part}"
    return path


def _environment(name: str, raw: dict, path: str) -> EnvironmentParams:
    base = DEFAULT_ENVIRONMENTS.get(name)
    states = {}
    for key, attr in (("LOS", "los"), ("NLOS", "nlos")):
        over = raw.get(key, {})
        if base is None and set(over) != {"nu", "ell_db", "alpha", "beta", "m"}:
            raise ConfigError(f"{path}.{key}", f"new environment {name!r} needs nu, ell_db, alpha, beta and m")
        if base is not None:
            cur = getattr(base, attr)
            over = {
                "nu": cur.path_loss.nu,
                "ell_db": cur.path_loss.ell_db,
                "alpha": cur.fading.alpha,
                "beta": cur.fading.beta,
                "m": cur.fading.m_raw,
                **over,
            }
        states[attr] = StateParams(
            PathLossParams(float(over["nu"]), float(over["ell_db"])),
            FadingParams(float(over["m"]), float(over["alpha"]), float(over["beta"])),
        )
    return EnvironmentParams(name, **states)


def config_from_dict(raw: dict) -> RunConfig:
    """Validate a parsed JSON document and build a :class:`RunConfig`."""
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: [str(p) for p in e.absolute_path])
    if errors:
        first = errors[0]
        raise ConfigError(_json_path(first), first.message)

    defaults = RunConfig()
    envs = dict(defaults.environments)
    for name, body in raw.get("environments", {}).items():
        envs[name] = _environment(name, body, f"$.environments.{name}")

    scenarios = dict(defaults.scenarios)
    for name, geo in raw.get("scenarios", {}).items():
        base = DEFAULT_SCENARIOS.get(name, DEFAULT_SCENARIOS["hand"])
        scenarios[name] = BodyGeometry(
            body_width_m=geo.get("body_width_m", base.body_width_m),
            body_distance_m=geo["body_distance_m"],
            body_height_m=geo.get("body_height_m", base.body_height_m),
        )

    eff_raw = raw.get("efficiency", {})
    eta = dict(DEFAULT_ETA)
    eta.update({int(k): float(v) for k, v in eff_raw.get("eta", {}).items()})
    efficiency = EfficiencyModel(
        eta_by_mu=eta,
        overhead_symbols=eff_raw.get("overhead_symbols", 3),
        symbols_per_slot=eff_raw.get("symbols_per_slot", 14),
    )
    chan = raw.get("channel", {})
    mc = raw.get("monte_carlo", {})

    cfg = RunConfig(
        environments=envs,
        scenarios=scenarios,
        distances_m=tuple(float(d) for d in raw.get("distances_m", defaults.distances_m)),
        ap_height_m=float(raw.get("ap_height_m", defaults.ap_height_m)),
        budget=LinkBudget(**raw.get("link_budget", {})),
        delta_t_ms=as_fraction(raw.get("delta_t_ms", defaults.delta_t_ms)),
        mus=tuple(raw.get("mus", defaults.mus)),
        taus_ms=tuple(as_fraction(t) for t in raw.get("taus_ms", defaults.taus_ms)),
        fig4_tau_ms=as_fraction(raw.get("fig4_tau_ms", defaults.fig4_tau_ms)),
        efficiency=efficiency,
        channel=ChannelOptions(
            m_rounding=chan.get("m_rounding", "half_away"),
            ccdf_form=chan.get("ccdf_form", "exact"),
        ),
        rate_mode=raw.get("rate_mode", defaults.rate_mode),
        trials=mc.get("trials", defaults.trials),
        seed=mc.get("seed", defaults.seed),
        out_dir=raw.get("output", {}).get("dir", defaults.out_dir),
    )
    check_grid(cfg)
    return cfg


def check_grid(cfg: RunConfig) -> None:
    """Every configured (mu, tau) pair must aggregate a whole number of slots."""
    for i, mu in enumerate(cfg.mus):
        if mu not in cfg.efficiency.eta_by_mu:
            raise ConfigError(f"$.mus[{i}]", f"no transmission efficiency configured for mu={mu}")
        try:
            intervals_per_slot(numerology_lookup(mu).tti_ms, cfg.delta_t_ms)
        except PreconditionError as exc:
            raise ConfigError("$.delta_t_ms", str(exc)) from None
        taus = [(f"$.taus_ms[{j}]", t) for j, t in enumerate(cfg.taus_ms)]
        taus.append(("$.fig4_tau_ms", cfg.fig4_tau_ms))
        for path, tau in taus:
            try:
                slots_per_interval(mu, tau)
            except PreconditionError as exc:
                raise ConfigError(path, str(exc)) from None


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError("$", f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("$", "top level must be a JSON object")
    return config_from_dict(raw)
