import csv
import io
import json

import pytest

from flexnum.cli import main
from flexnum.config import ConfigError, config_from_dict, load_config
from flexnum.report import CSV_COLUMNS


def write_config(tmp_path, **body):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"schema_version": 1, **body}))
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_defaults_round_trip():
    assert load_config(None) == config_from_dict({"schema_version": 1})


@pytest.mark.parametrize(
    "body, path",
    [
        ({"taus_ms": [0.3]}, "$.taus_ms[0]"),
        ({"taus_ms": [-1]}, "$.taus_ms[0]"),
        ({"mus": [7]}, "$.mus[0]"),
        ({"rate_mode": "peak"}, "$.rate_mode"),
        ({"channel": {"ccdf_form": "other"}}, "$.channel.ccdf_form"),
        ({"environments": {"office": {"LOS": {"m": 0.1}}}}, "$.environments.office.LOS.m"),
        ({"environments": {"lab": {"LOS": {"nu": 2.0}}}}, "$.environments.lab.LOS"),
        ({"monte_carlo": {"seed": -1}}, "$.monte_carlo.seed"),
        ({"unknown": 1}, "$"),
        ({"delta_t_ms": 0.1}, "$.delta_t_ms"),
    ],
)
def test_config_errors_name_the_path(body, path):
    with pytest.raises(ConfigError) as info:
        config_from_dict({"schema_version": 1, **body})
    assert info.value.path == path


def test_schema_version_required():
    with pytest.raises(ConfigError):
        config_from_dict({})
    with pytest.raises(ConfigError):
        config_from_dict({"schema_version": 2})


def test_partial_environment_override():
    cfg = config_from_dict({"schema_version": 1, "environments": {"office": {"NLOS": {"m": 4}}}})
    assert cfg.environments["office"].nlos.fading.m_raw == 4
    assert cfg.environments["office"].nlos.fading.alpha == 5.77


def test_evaluate_to_stdout(capsys):
    rc = main(["evaluate", "--env", "car_park", "--scenario", "pocket", "--distance", "10", "--mu", "4", "--tau", "0.25"])
    assert rc == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == 1
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[0]["recommended_flag"] == "1"
    assert float(rows[0]["p"]) == 0.5


def test_evaluate_bad_interval_is_config_error(capsys):
    rc = main(["evaluate", "--env", "office", "--scenario", "hand", "--distance", "1", "--mu", "2", "--tau", "0.3"])
    assert rc == 2
    assert "xi-integrality" in capsys.readouterr().err


def test_evaluate_unknown_environment(capsys):
    rc = main(["evaluate", "--env", "moon", "--scenario", "hand", "--distance", "1", "--mu", "2", "--tau", "1"])
    assert rc == 2
    assert "$.environments" in capsys.readouterr().err


def test_missing_config_file(tmp_path, capsys):
    assert main(["recommend", "--config", str(tmp_path / "none.json")]) == 2


def test_bad_seed_and_trials(capsys):
    assert main(["validate", "--seed", "-3"]) == 2
    assert main(["validate", "--trials", "0"]) == 2


def test_validate_flags_bad_efficiency(tmp_path, capsys):
    cfg = write_config(tmp_path, efficiency={"eta": {"3": 1.2}})
    assert main(["validate", "--config", cfg, "--trials", "10"]) == 1
    assert "eta3=1.2 violates eta <= 1" in capsys.readouterr().err
    assert main(["recommend", "--config", cfg]) == 2


def test_validate_small_trials_skips_monte_carlo(capsys):
    assert main(["validate", "--trials", "10"]) == 0
    assert "SKIPPED" in capsys.readouterr().out


def test_sweep_outputs(tmp_path, capsys):
    out = tmp_path / "run"
    assert main(["sweep", "--out", str(out)]) == 0
    fig4, fig5 = read_csv(out / "fig4.csv"), read_csv(out / "fig5.csv")
    assert len(fig4) == 2 * 2 * 2 * 3
    assert len(fig5) == 2 * 2 * 3 * 2
    assert {r["tau_ms"] for r in fig4} == {"1"}
    assert {r["environment"] for r in fig5} == {"car_park"}
    groups = {}
    for r in fig4:
        groups.setdefault((r["environment"], r["scenario"], r["d_A_m"]), []).append(r)
    for rows in groups.values():
        assert sum(r["recommended_flag"] == "1" for r in rows) == 1
        best = max(rows, key=lambda r: float(r["rate_time_avg_mbps"]))
        assert best["recommended_flag"] == "1"


def test_recommend_writes_files(tmp_path, capsys):
    assert main(["recommend", "--out", str(tmp_path)]) == 0
    text = capsys.readouterr().out
    assert "8/8 cells match" in text
    assert (tmp_path / "recommend.txt").read_text() == text
    assert len(read_csv(tmp_path / "recommend.csv")) == 8


def test_aggregate_mode_changes_recommendation(capsys):
    assert main(["recommend", "--rate-mode", "aggregate"]) == 0
    assert "MISMATCH" in capsys.readouterr().out
