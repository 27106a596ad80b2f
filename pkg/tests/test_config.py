"""
Configuration loading and validation
"""
import pytest
import yaml
from pydantic import ValidationError

from src.utils import Config, get_config, load_config, reload_config
from src.utils import config as config_module
from src.utils.config import RunConfig, SchemeConfig


def test_defaults_match_reference_setup():
    config = Config()
    assert (config.system.N, config.system.n, config.system.k, config.system.M) == (128, 4, 2, 16)
    assert config.scheme.R == 0.5
    assert config.scheme.R1 == 0.0
    assert config.solver.max_iterations == 2000
    assert config.run.min_errors == 200
    assert config.run.max_bits == 1_000_000
    assert config.run.snr_grid == [0.0, 2.0, 4.0, 6.0, 8.0, 10.0]


def test_ccdf_grid():
    grid = RunConfig().ccdf_grid()
    assert len(grid) == 37
    assert grid[0] == 4.0
    assert grid[-1] == 13.0
    assert grid[1] == 4.25


def test_scheme_names():
    assert SchemeConfig().names() == ["original", "single-level", "multilevel"]
    assert SchemeConfig(name="multilevel").names() == ["multilevel"]


@pytest.mark.parametrize("section, values", [
    ("scheme", {"name": "clipping"}),
    ("scheme", {"R": -1.0}),
    ("run", {"trials": 0}),
    ("run", {"snr_grid": [10.0, 5.0]}),
    ("run", {"snr_grid": []}),
    ("run", {"denominator": "median"}),
    ("run", {"detector_fallback": "ml"}),
    ("run", {"ccdf_step": 0.0}),
    ("logging", {"level": "LOUD"}),
    ("performance", {"workers": 0}),
])
def test_invalid_values_are_rejected(section, values):
    with pytest.raises(ValidationError):
        Config(**{section: values})


def test_yaml_round_trip(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump({
        "scheme": {"name": "single-level", "R": 0.25},
        "run": {"trials": 42, "snr_grid": [1, 2, 3]},
    }))
    config = Config.load_from_yaml(str(path))
    assert config.scheme.name == "single-level"
    assert config.scheme.R == 0.25
    assert config.run.trials == 42
    assert config.system.N == 128

    saved = tmp_path / "saved" / "config.yaml"
    config.save_to_yaml(str(saved))
    assert Config.load_from_yaml(str(saved)).run.snr_grid == [1.0, 2.0, 3.0]


def test_empty_yaml_gives_defaults(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("")
    assert Config.load_from_yaml(str(path)).run.trials == 10000


def test_missing_file_is_an_os_error(tmp_path):
    with pytest.raises(OSError):
        Config.load_from_yaml(str(tmp_path / "absent.yaml"))


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("OFDMIM_RUN__TRIALS", "7")
    assert Config.load_from_env().run.trials == 7


def test_global_config(monkeypatch, tmp_path):
    monkeypatch.setattr(config_module, "_config", None)
    with pytest.raises(RuntimeError):
        get_config()

    monkeypatch.chdir(tmp_path)
    loaded = load_config()
    assert get_config() is loaded


def test_reload_config(monkeypatch, tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump({"run": {"trials": 5}}))
    monkeypatch.setattr(config_module, "_config", None)
    assert load_config(str(path)).run.trials == 5

    path.write_text(yaml.safe_dump({"run": {"trials": 6}}))
    assert reload_config(str(path)).run.trials == 6
    assert get_config().run.trials == 6
