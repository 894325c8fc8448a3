import pytest

from blochlab.config import RunConfig, load_settings
from blochlab.constants import AnalysisSettings, GridSpec
from blochlab.errors import ConfigError

CONFIG = """
analysis:
  nmax: 50
  tol: 1.0e-5
grid:
  radial: 64
  angular: 32
ladder:
  kmax: 12
  assoc_nmax: 80
"""


def write_config(tmp_path, text):
    path = tmp_path / "config.yaml"
    path.write_text(text)
    return str(path)


def test_yaml_overrides(tmp_path):
    settings = load_settings(write_config(tmp_path, CONFIG))
    assert settings.nmax == 50
    assert settings.tol == 1e-5
    assert settings.grid == GridSpec(radial=64, angular=32, clamp=1e-12)
    assert settings.ladder_kmax == 12
    assert settings.assoc_nmax == 80
    assert settings.threads is None


def test_environment_settings(tmp_path, monkeypatch):
    monkeypatch.setenv("BLOCHLAB_NMAX", "32")
    monkeypatch.setenv("BLOCHLAB_GRID", "128x64")
    monkeypatch.setenv("BLOCHLAB_TOL", "1e-4")
    monkeypatch.setenv("BLOCHLAB_THREADS", "3")
    settings = load_settings(str(tmp_path / "none.yaml"))
    assert settings.nmax == 32
    assert settings.grid == GridSpec(radial=128, angular=64)
    assert settings.tol == 1e-4
    assert settings.threads == 3


def test_yaml_wins_over_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("BLOCHLAB_NMAX", "32")
    assert load_settings(write_config(tmp_path, CONFIG)).nmax == 50


def test_missing_file_gives_defaults(tmp_path):
    assert load_settings(str(tmp_path / "none.yaml")) == AnalysisSettings()


def test_malformed_config_falls_back_to_defaults(tmp_path):
    settings = load_settings(write_config(tmp_path, "grid:\n  radial: abc\n"))
    assert settings == AnalysisSettings()


def test_empty_config_keeps_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("BLOCHLAB_NMAX", "24")
    assert load_settings(write_config(tmp_path, "")).nmax == 24


@pytest.mark.parametrize("changes", [
    {"nmax": 4},
    {"grid": GridSpec(radial=8, angular=8)},
    {"tol": 0.5},
    {"tol": 0.0},
    {"threads": 0},
])
def test_run_config_validation(changes):
    settings = AnalysisSettings(**changes)
    with pytest.raises(ConfigError):
        RunConfig("analyze", "1", "z", settings).validate()


def test_valid_run_config():
    config = RunConfig("analyze", "1", "z", AnalysisSettings(nmax=8, grid=GridSpec(16, 16))).validate()
    assert config.out_path is None


@pytest.mark.parametrize("text, expected", [
    ("512x256", GridSpec(512, 256)),
    ("64X32", GridSpec(64, 32)),
])
def test_grid_parse(text, expected):
    assert GridSpec.parse(text) == expected
    assert str(GridSpec.parse(text)) == f"{expected.radial}x{expected.angular}"


@pytest.mark.parametrize("text", ["512", "axb", "64x32x2", "-4x8"])
def test_grid_parse_rejects(text):
    with pytest.raises(ValueError):
        GridSpec.parse(text)
