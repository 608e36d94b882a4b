"""Expected-rate analysis of NR numerology choice under mmWave self-body blockage."""

from .blockage import (
    BlockageProcess,
    BodyGeometry,
    Deployment,
    blockage_free_radius,
    blockage_probability,
    los_slot_probability,
    shadow_cone_width,
)
from .channel import (
    DEFAULT_ENVIRONMENTS,
    BlockageState,
    EnvironmentParams,
    FadingParams,
    LinkBudget,
    PathLossParams,
    build_ccdf,
    expected_spectral_efficiency,
    mean_snr,
    path_gain,
    snr_ccdf,
)
from .config import RunConfig, load_config
from .radio_params import (
    EfficiencyModel,
    Numerology,
    numerology_lookup,
    slot_aggregation_efficiency,
    slots_per_interval,
    transmission_efficiency,
)
from .rate import (
    RateReport,
    Recommendation,
    ScenarioCase,
    expected_rate,
    per_slot_expected_se,
    recommend,
    simulate_blockage,
)
from .specfun import LogValue, bessel_k_half, ln_gamma

__version__ = "0.1.0"

__all__ = [
    "BlockageProcess",
    "BlockageState",
    "BodyGeometry",
    "DEFAULT_ENVIRONMENTS",
    "Deployment",
    "EfficiencyModel",
    "EnvironmentParams",
    "FadingParams",
    "LinkBudget",
    "LogValue",
    "Numerology",
    "PathLossParams",
    "RateReport",
    "Recommendation",
    "RunConfig",
    "ScenarioCase",
    "bessel_k_half",
    "blockage_free_radius",
    "blockage_probability",
    "build_ccdf",
    "expected_rate",
    "expected_spectral_efficiency",
    "ln_gamma",
    "load_config",
    "los_slot_probability",
    "mean_snr",
    "numerology_lookup",
    "path_gain",
    "per_slot_expected_se",
    "recommend",
    "shadow_cone_width",
    "simulate_blockage",
    "slot_aggregation_efficiency",
    "slots_per_interval",
    "snr_ccdf",
    "transmission_efficiency",
]
