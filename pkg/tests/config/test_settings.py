import pytest

from seedwave.config.settings import RunConfig, Settings
from seedwave.core.model import ModelParams


def test_defaults(settings):
    assert settings.pde_cfl == 0.4
    assert settings.quick_factor == 4
    assert settings.quick_tolerance_multiplier == 2.0
    assert settings.float_format == "%.12g"


def test_environment_override(monkeypatch, tmp_path):
    monkeypatch.setenv("SEEDWAVE_THREADS", "3")
    monkeypatch.setenv("SEEDWAVE_DEFAULT_SEED", "7")
    settings = Settings(output_dir=str(tmp_path))
    assert settings.threads == 3
    assert settings.default_seed == 7


def test_log_level_is_normalized(settings):
    settings.log_level = "debug"
    assert settings.log_level == "DEBUG"
    with pytest.raises(ValueError):
        settings.log_level = "chatty"


def test_cfl_above_limit_rejected(tmp_path):
    with pytest.raises(ValueError):
        Settings(output_dir=str(tmp_path), pde_cfl=0.5)


def test_output_dir_is_created(tmp_path):
    target = tmp_path / "nested" / "out"
    Settings(output_dir=str(target))
    assert target.is_dir()


def test_run_config_header_lines():
    run = RunConfig(subcommand="bbm", params=ModelParams.unit("spore"), T=15.0, seed=3, extra={"emit": "rightmost"})
    lines = run.header_lines("0.1.0")
    assert lines[0] == "# seedwave_version=0.1.0"
    assert "# variant=spore" in lines
    assert "# T=15.0" in lines
    assert "# emit=rightmost" in lines
    assert all(line.startswith("# ") for line in lines)
    assert not any(line.startswith("# dt=") for line in lines)


def test_run_config_is_frozen():
    run = RunConfig(subcommand="speed")
    with pytest.raises(ValueError):
        run.T = 3.0
