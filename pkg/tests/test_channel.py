import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flexnum.blockage import Deployment
from flexnum.channel import (
    DEFAULT_ENVIRONMENTS,
    BlockageState,
    FadingParams,
    LinkBudget,
    build_ccdf,
    expected_spectral_efficiency,
    mean_snr,
    mean_snr_from_ccdf,
    path_gain,
    path_loss_db,
    snr_ccdf,
)
from flexnum.oracles import reference_ccdf
from flexnum.specfun import DomainError

LOS, NLOS = BlockageState.LOS, BlockageState.NLOS
OFFICE, CAR = DEFAULT_ENVIRONMENTS["office"], DEFAULT_ENVIRONMENTS["car_park"]
PAIRS = [(env, st_) for env in (OFFICE, CAR) for st_ in (LOS, NLOS)]


def sample_snr(fading: FadingParams, ybar: float, n: int, seed: int) -> np.ndarray:
    """Nakagami power (gamma, shape m, mean 1) times unit-mean inverse-Gaussian
    shadowing with shape alpha*beta."""
    rng = np.random.default_rng(seed)
    m = fading.m_int()
    g = rng.gamma(m, 1.0 / m, n)
    w = rng.wald(1.0, fading.alpha * fading.beta, n)
    return ybar * g * w


def test_path_gain_office_los_at_one_metre():
    dep = Deployment(1.0, 5.0)
    loss = path_loss_db(LOS, OFFICE, dep)
    assert loss == pytest.approx(45.1 + 11.8 * math.log10(math.sqrt(26.0)), abs=1e-12)
    assert loss == pytest.approx(53.448, abs=1e-3)
    assert path_gain(LOS, OFFICE, dep) == pytest.approx(4.52e-6, rel=1e-3)
    assert path_gain(LOS, OFFICE, dep) == pytest.approx(10 ** (-loss / 10), rel=1e-12)


@given(d=st.floats(0.0, 500.0), h=st.floats(0.5, 30.0))
def test_path_gain_dual_domain(d, h):
    dep = Deployment(d, h)
    for env, state in PAIRS:
        assert path_gain(state, env, dep) == pytest.approx(10 ** (-path_loss_db(state, env, dep) / 10), rel=1e-12)


def test_car_park_nlos_attenuates_more_than_los():
    dep = Deployment(10.0)
    assert path_gain(NLOS, CAR, dep) < path_gain(LOS, CAR, dep)


def test_link_budget_and_mean_snr():
    budget = LinkBudget()
    assert budget.noise_power_dbm == pytest.approx(-94.0, abs=1e-12)
    assert budget.snr_budget_db == pytest.approx(114.0, abs=1e-12)
    ybar = mean_snr(LOS, OFFICE, Deployment(1.0))
    assert 10 * math.log10(ybar) == pytest.approx(114.0 - path_loss_db(LOS, OFFICE, Deployment(1.0)), abs=1e-9)
    assert ybar == pytest.approx(1.135e6, rel=2e-3)
    with pytest.raises(ValueError):
        LinkBudget(bandwidth_hz=0)


@pytest.mark.parametrize("m_raw, expected", [(2.64, 3), (2.35, 2), (8.5, 9), (2.74, 3)])
def test_m_rounding_half_away(m_raw, expected):
    assert FadingParams(m_raw, 1.0, 1.0).m_int() == expected


def test_m_rounding_variants():
    f = FadingParams(2.35, 1.0, 1.0)
    assert (f.m_int("floor"), f.m_int("ceil")) == (2, 3)
    assert FadingParams(2.5, 1.0, 1.0).m_int() == 3


def test_ccdf_constants():
    f = OFFICE.los.fading
    spec = build_ccdf(f, 1.135e6)
    assert spec.B * math.sqrt(spec.C) == pytest.approx(7.01 * 0.15, rel=1e-12)
    assert spec.B * math.sqrt(spec.C) == pytest.approx(1.0515, rel=1e-12)
    assert spec.C == pytest.approx(7.01 * 1.135e6, rel=1e-12)
    assert spec.D == pytest.approx(2 * 3 / 0.15, rel=1e-12)


@pytest.mark.parametrize("form", ["exact", "rescaled"])
@pytest.mark.parametrize("ybar", [1.0, 1e3, 1e6])
def test_normalization_is_positive_and_ccdf_starts_at_one(form, ybar):
    for env, state in PAIRS:
        spec = build_ccdf(env[state].fading, ybar, form=form)
        assert spec.normalization > 0
        assert snr_ccdf(0.0, spec) == 1.0
        if form == "exact":
            assert spec.normalization == pytest.approx(1.0, abs=1e-12)


def test_ccdf_tail_vanishes():
    for env, state in PAIRS:
        spec = build_ccdf(env[state].fading, 1e3)
        assert snr_ccdf(1e3 * 1e4, spec) < 1e-8


def test_ccdf_office_nlos_matches_multiprecision_reference():
    spec = build_ccdf(OFFICE.nlos.fading, 1e3)
    assert spec.m_int == 2
    v = snr_ccdf(1e3, spec)
    assert 0 < v < 1
    assert v == pytest.approx(reference_ccdf(1e3, spec), rel=1e-8)
    assert v == pytest.approx(0.30565, abs=5e-5)


@pytest.mark.parametrize("env, state", PAIRS)
def test_ccdf_matches_sampled_snr(env, state):
    ybar = 1e3
    spec = build_ccdf(env[state].fading, ybar)
    y = sample_snr(env[state].fading, ybar, 400_000, seed=11)
    for frac in (0.05, 0.3, 1.0, 3.0):
        emp = float(np.mean(y > frac * ybar))
        se = math.sqrt(max(emp * (1 - emp), 1e-6) / y.size)
        assert abs(snr_ccdf(frac * ybar, spec) - emp) < 5 * se


@pytest.mark.parametrize("env, state", PAIRS)
def test_expected_se_matches_sampled_snr(env, state):
    ybar = mean_snr(state, env, Deployment(10.0))
    spec = build_ccdf(env[state].fading, ybar)
    s = np.log2(1 + sample_snr(env[state].fading, ybar, 400_000, seed=5))
    assert abs(expected_spectral_efficiency(spec) - s.mean()) < 5 * s.std() / math.sqrt(s.size)


@pytest.mark.parametrize("env, state", PAIRS)
def test_ccdf_monotone_on_grid(env, state):
    spec = build_ccdf(env[state].fading, 1e4)
    ys = np.concatenate([[0.0], np.logspace(-2, 8, 999)])
    vals = [snr_ccdf(float(y), spec) for y in ys]
    assert max(b - a for a, b in zip(vals, vals[1:])) <= 1e-9
    assert all(0 <= v <= 1 for v in vals)


def test_expected_se_vanishes_at_tiny_snr():
    for env, state in PAIRS:
        assert expected_spectral_efficiency(build_ccdf(env[state].fading, 1e-12)) < 1e-6


@pytest.mark.parametrize("d", [1.0, 10.0])
@pytest.mark.parametrize("form", ["exact", "rescaled"])
def test_quadrature_schemes_agree_and_jensen(d, form):
    for env, state in PAIRS:
        spec = build_ccdf(env[state].fading, mean_snr(state, env, Deployment(d)), form=form)
        a = expected_spectral_efficiency(spec, method="adaptive")
        b = expected_spectral_efficiency(spec, method="romberg")
        assert abs(a - b) <= 1e-5 * abs(b)
        assert a <= math.log2(1 + mean_snr_from_ccdf(spec))


def test_exact_form_mean_equals_mean_snr():
    for env, state in PAIRS:
        for ybar in (1.0, 1e3, 1e6):
            spec = build_ccdf(env[state].fading, ybar)
            assert mean_snr_from_ccdf(spec) == pytest.approx(ybar, rel=1e-6)


@settings(max_examples=25, deadline=None)
@given(log_ybar=st.floats(-2.0, 7.0), ratio=st.floats(1.05, 10.0))
def test_expected_se_increasing_in_mean_snr(log_ybar, ratio):
    f = CAR.nlos.fading
    lo = expected_spectral_efficiency(build_ccdf(f, 10**log_ybar))
    hi = expected_spectral_efficiency(build_ccdf(f, ratio * 10**log_ybar))
    assert hi > lo


@pytest.mark.parametrize("d", [1.0, 10.0])
def test_los_beats_nlos(d):
    dep = Deployment(d)
    for env in (OFFICE, CAR):
        e = [expected_spectral_efficiency(build_ccdf(env[s].fading, mean_snr(s, env, dep))) for s in (LOS, NLOS)]
        assert e[0] >= e[1]


def test_frozen_expected_se_values():
    # frozen from the two-scheme agreement at default settings
    frozen = {
        ("office", LOS, 1.0): 19.3597, ("office", NLOS, 1.0): 15.4310,
        ("car_park", LOS, 1.0): 17.5415, ("car_park", NLOS, 1.0): 3.2529,
        ("office", LOS, 10.0): 18.0231, ("office", NLOS, 10.0): 14.2191,
        ("car_park", LOS, 10.0): 15.8086, ("car_park", NLOS, 10.0): 1.5885,
    }
    for (name, state, d), val in frozen.items():
        env = DEFAULT_ENVIRONMENTS[name]
        spec = build_ccdf(env[state].fading, mean_snr(state, env, Deployment(d)))
        assert expected_spectral_efficiency(spec) == pytest.approx(val, abs=1e-4)


def test_domain_errors():
    spec = build_ccdf(OFFICE.los.fading, 10.0)
    with pytest.raises(DomainError):
        snr_ccdf(-1.0, spec)
    with pytest.raises(DomainError):
        build_ccdf(OFFICE.los.fading, 0.0)
    with pytest.raises(ValueError):
        build_ccdf(OFFICE.los.fading, 1.0, form="other")
