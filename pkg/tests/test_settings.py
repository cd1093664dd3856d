import json

import pytest

from schiffer_lab.config.settings import RunConfig, build_config, get_settings, reset_settings, use_settings
from schiffer_lab.utils.exceptions import ConfigurationError


def test_defaults():
    config = get_settings()
    assert config.quad_tol == 1e-12
    assert config.certificate_tol == pytest.approx(1e-10)
    assert not config.extended_precision
    assert config.effective_theta_threshold == config.theta_threshold


def test_environment_override(monkeypatch):
    monkeypatch.setenv("SCHIFFER_LAB_QUAD_TOL", "1e-10")
    monkeypatch.setenv("SCHIFFER_LAB_EPS_GRID_THETA", "[1e-6, 1e-5]")
    config = RunConfig()
    assert config.quad_tol == 1e-10
    assert config.eps_grid_theta == [1e-6, 1e-5]


def test_extended_precision_halves_theta_threshold():
    config = build_config(prec=30)
    assert config.extended_precision
    assert config.effective_theta_threshold == config.theta_threshold / 2
    assert config.quad_tol == build_config().quad_tol
    assert "float64" in RunConfig.model_fields["prec"].description


def test_build_config_ignores_unset_values():
    assert build_config(quad_tol=None, seed=11).seed == 11


@pytest.mark.parametrize("values, key", [
    ({"quad_tol": -1.0}, "quad_tol"),
    ({"lll_delta": 1.0}, "lll_delta"),
    ({"prec": 10}, "prec"),
])
def test_invalid_values(values, key):
    with pytest.raises(ConfigurationError) as info:
        build_config(**values)
    assert info.value.details["config_key"] == key


def test_from_file_with_overrides(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"seed": 3, "theta_threshold": 1e-9}))
    config = RunConfig.from_file(path, seed=5, output_dir=None)
    assert config.seed == 5
    assert config.theta_threshold == 1e-9


def test_unreadable_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(ConfigurationError):
        RunConfig.from_file(path)


def test_active_settings_stack():
    use_settings(build_config(seed=99))
    assert get_settings().seed == 99
    reset_settings()
    assert get_settings().seed == 7
