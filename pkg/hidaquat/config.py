"""
Job configuration.

Values come from the environment (and a .env file), then an optional flat
key=value config file, then explicit overrides such as command-line flags,
each layer winning over the previous one.
"""

import os
import logging
from dataclasses import dataclass, field, replace
from math import gcd
from typing import Mapping, Optional, Tuple

from dotenv import dotenv_values, load_dotenv
from sympy import isprime

from .errors import ConfigError

logger = logging.getLogger(__name__)

ENV_PREFIX = "HIDAQUAT_"

# config key -> (environment variable suffix, default)
DEFAULTS = {
    "D": ("D", "11"),
    "M": ("LEVEL", "1"),
    "p": ("P", "7"),
    "m": ("MEASURE_LEVEL", "2"),
    "prec": ("PREC", "4"),
    "weights": ("WEIGHTS", "2,8"),
    "char_exp": ("CHAR_EXP", "0"),
    "probes": ("PROBES", "2,3,5"),
    "classset_file": ("CLASSSET_FILE", ""),
    "out_dir": ("OUT_DIR", "out"),
    "workers": ("WORKERS", "1"),
    "seed": ("SEED", "0"),
    "target": ("TARGET_UP", "0"),
}


@dataclass(frozen=True)
class JobConfig:
    D: int = 11
    M: int = 1
    p: int = 7
    m: int = 2
    prec: int = 4
    weights: Tuple[int, ...] = (2, 8)
    char_exp: int = 0
    probes: Tuple[int, ...] = (2, 3, 5)
    classset_file: Optional[str] = None
    out_dir: str = "out"
    workers: int = 1
    seed: int = 0
    # U_p residue of the weight-2 packet to lift, 0 for the first distinguished cuspidal one
    target: int = 0
    interpolation: bool = field(default=True, compare=False)

    def validate(self) -> "JobConfig":
        """
        Raises:
            ConfigError: on the first violated invariant.
        """
        if self.p < 5 or not isprime(self.p):
            raise ConfigError(f"p must be a prime >= 5, got {self.p}")
        if (self.D * self.M) % self.p == 0:
            raise ConfigError(f"p={self.p} divides DM={self.D * self.M}")
        if self.m < 1 or self.prec < 1:
            raise ConfigError(f"measure level and precision must be >= 1, got m={self.m}, prec={self.prec}")
        if not self.weights or any(k < 2 for k in self.weights):
            raise ConfigError(f"weights must be >= 2, got {self.weights}")
        if self.interpolation and any((k - self.weights[0]) % (self.p - 1) for k in self.weights):
            raise ConfigError(f"weights {self.weights} are not congruent mod {self.p - 1}")
        if not self.probes:
            raise ConfigError("empty probe set")
        bad = self.D * self.M * self.p
        for ell in self.probes:
            if not isprime(ell) or gcd(ell, bad) != 1:
                raise ConfigError(f"probe {ell} must be a prime coprime to DMp={bad}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if self.target % self.p == 0 and self.target:
            raise ConfigError(f"target U_p residue must be a unit mod {self.p}, got {self.target}")
        return self

    def lines(self):
        """Configuration echo for reports."""
        return [
            f"config.D = {self.D}",
            f"config.M = {self.M}",
            f"config.p = {self.p}",
            f"config.level_m = {self.m}",
            f"config.prec = {self.prec}",
            f"config.weights = {','.join(map(str, self.weights))}",
            f"config.char_exp = {self.char_exp}",
            f"config.probes = {','.join(map(str, self.probes))}",
        ]


def _int_list(value) -> Tuple[int, ...]:
    if isinstance(value, (list, tuple)):
        return tuple(int(v) for v in value)
    return tuple(int(v) for v in str(value).replace(" ", "").split(",") if v)


def _coerce(key: str, value):
    if key in ("weights", "probes"):
        return _int_list(value)
    if key in ("classset_file",):
        return str(value) or None
    if key == "out_dir":
        return str(value)
    return int(value)


def _file_values(path: str) -> dict:
    """Keys of a config file may be bare (`p`, `weights`) or environment names (`HIDAQUAT_P`)."""
    raw = dotenv_values(path)
    by_env = {suffix: key for key, (suffix, _) in DEFAULTS.items()}
    lowered = {key.lower(): key for key in DEFAULTS}
    values = {}
    for name, value in raw.items():
        if value is None:
            continue
        bare = name[len(ENV_PREFIX):] if name.startswith(ENV_PREFIX) else name
        key = bare if bare in DEFAULTS else by_env.get(bare.upper()) or lowered.get(bare.lower().replace("-", "_"))
        if key is None:
            raise ConfigError(f"unknown configuration key {name!r} in {path}")
        values[key] = value
    return values


def create_config(test_config: Optional[Mapping] = None, config_file: Optional[str] = None) -> JobConfig:
    """
    Build and validate a JobConfig.

    Args:
        test_config: explicit values, overriding the file and the environment.
        config_file: optional flat key=value file.

    Raises:
        ConfigError: on malformed or invalid values.
    """
    load_dotenv()
    values = {key: os.getenv(ENV_PREFIX + suffix, default) for key, (suffix, default) in DEFAULTS.items()}
    if config_file:
        if not os.path.exists(config_file):
            raise ConfigError(f"config file {config_file} does not exist")
        values.update(_file_values(config_file))
    if test_config:
        values.update({k: v for k, v in test_config.items() if v is not None})
    try:
        extra = {k: values.pop(k) for k in list(values) if k not in DEFAULTS}
        config = JobConfig(**{key: _coerce(key, value) for key, value in values.items()})
        if "interpolation" in extra:
            config = replace(config, interpolation=bool(extra.pop("interpolation")))
        if extra:
            raise ConfigError(f"unknown configuration keys {sorted(extra)}")
    except (TypeError, ValueError) as e:
        if isinstance(e, ConfigError):
            raise
        logger.error(f"Error reading configuration: {e}")
        raise ConfigError(f"malformed configuration: {e}")
    logger.debug(f"Configuration: {config}")
    return config.validate()
