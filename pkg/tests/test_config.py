"""
Tests for the job configuration.
"""

import pytest

from hidaquat.config import JobConfig, create_config
from hidaquat.errors import ConfigError


def test_defaults(config, tmp_path):
    """Test the default configuration."""
    assert config.D == 11
    assert config.M == 1
    assert config.p == 7
    assert config.m == 2
    assert config.prec == 4
    assert config.weights == (2, 8)
    assert config.probes == (2, 3, 5)
    assert config.classset_file is None
    assert config.target == 0
    assert config.interpolation
    assert config.out_dir == str(tmp_path)
    assert config.lines()[0] == "config.D = 11"
    assert "config.weights = 2,8" in config.lines()


def test_weights_must_be_congruent(clean_env):
    """Weights 2 and 9 are not congruent mod p - 1 unless interpolation is off."""
    with pytest.raises(ConfigError, match="not congruent"):
        create_config({"weights": "2,9"})
    assert create_config({"weights": "2,9", "interpolation": False}).weights == (2, 9)


@pytest.mark.parametrize("overrides, message", [
    ({"probes": ""}, "empty probe set"),
    ({"probes": "2,11"}, "probe 11"),
    ({"probes": "4"}, "probe 4"),
    ({"p": 3}, "prime >= 5"),
    ({"p": 11}, "divides DM"),
    ({"weights": "1"}, "weights must be >= 2"),
    ({"prec": 0}, "precision must be >= 1"),
    ({"workers": 0}, "workers"),
    ({"target": 14}, "unit mod 7"),
])
def test_invalid_values(clean_env, overrides, message):
    """Every invariant violation is a ConfigError."""
    with pytest.raises(ConfigError, match=message):
        create_config(overrides)


def test_malformed_integer(clean_env):
    """Non-numeric values are reported as malformed."""
    with pytest.raises(ConfigError, match="malformed configuration"):
        create_config({"prec": "four"})


def test_unknown_override(clean_env):
    """Unknown keys are rejected."""
    with pytest.raises(ConfigError, match="unknown configuration keys"):
        create_config({"bogus": 1})


def test_environment_override(clean_env):
    """HIDAQUAT_* variables replace the defaults; explicit values win."""
    clean_env.setenv("HIDAQUAT_P", "5")
    clean_env.setenv("HIDAQUAT_WEIGHTS", "2,6")
    clean_env.setenv("HIDAQUAT_TARGET_UP", "3")
    clean_env.setenv("HIDAQUAT_PROBES", "2,3")
    config = create_config()
    assert config.p == 5
    assert config.weights == (2, 6)
    assert config.target == 3
    assert create_config({"p": 13, "weights": "2,14"}).p == 13


def test_config_file(clean_env, tmp_path):
    """A flat key=value file accepts bare and environment-style keys."""
    path = tmp_path / "job.cfg"
    path.write_text("p=5\nHIDAQUAT_WEIGHTS=2,6\nHIDAQUAT_MEASURE_LEVEL=1\nprobes=2,3\nM=1\n")
    config = create_config(config_file=str(path))
    assert config.p == 5
    assert config.weights == (2, 6)
    assert config.m == 1
    assert create_config({"p": 13, "weights": "2,14"}, config_file=str(path)).p == 13


def test_config_file_errors(clean_env, tmp_path):
    """Missing files and unknown keys are configuration errors."""
    with pytest.raises(ConfigError, match="does not exist"):
        create_config(config_file=str(tmp_path / "missing.cfg"))
    path = tmp_path / "bad.cfg"
    path.write_text("colour=blue\n")
    with pytest.raises(ConfigError, match="unknown configuration key"):
        create_config(config_file=str(path))


def test_job_config_compares_without_interpolation_flag():
    """The interpolation switch does not take part in equality."""
    assert JobConfig() == JobConfig(interpolation=False)
    assert JobConfig().validate() is not None
