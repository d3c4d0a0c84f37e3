# Copyright (c) 2025 The cvtag Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import dataclasses
import json
import os
import typing
from typing import Optional

from .common_utils import env_int
from .errors import ConfigurationError

_DISTRIBUTIONS = ("gaussian", "uniform")
# Flag spellings that do not map onto a field name by swapping "-" for "_"
_KEY_ALIASES = {"va": "V_A", "v_a": "V_A", "eps": "eps_c"}


@dataclasses.dataclass
class ChannelConfig:
    preset: str = "table1"  # Choices: ["table1", "table3"]

    # Overrides of the preset evaluation parameters, None keeps the preset value
    eta: Optional[float] = None  # Mean detector efficiency
    eps_c: Optional[float] = None  # Channel excess noise, shot-noise units
    v_el: Optional[float] = None  # Detector electronic noise, shot-noise units
    V_A: Optional[float] = None  # Modulation variance
    beta: Optional[float] = None  # Reconciliation efficiency, fraction or percent (> 1)

    # Stage fluctuations, None keeps the preset value
    v1: Optional[float] = None  # Variance of the modulation gain a_m
    v2: Optional[float] = None  # Variance of the detection gain a_d
    distribution: str = "gaussian"  # Fluctuation law. Choices: ["gaussian", "uniform"]

    loss_db_per_km: Optional[float] = None  # Fiber attenuation
    strict_paper: bool = False  # Literal b_d variance eta*v_el/(1-eta) in the detection stage


@dataclasses.dataclass
class RuntimeConfig:
    # Single point (rate, optimize, mc-check)
    distance: float = 0.0  # Fiber length in km
    k1: Optional[float] = None  # Fixed modulation cutoff, None optimizes it
    k3: Optional[float] = None  # Fixed detection cutoff, None optimizes it

    # Distance sweep
    lmin: float = 0.0
    lmax: float = 120.0
    lstep: float = 1.0

    # Cutoff grid
    k_min: float = 1.0
    k_max: float = 1.3
    k_step: float = 0.005

    # Maximum secure distance search
    max_distance_km: float = 400.0  # Search cap, reported with a warning when reached
    search_step_km: float = 5.0  # Bracketing ladder step before bisection

    # Monte-Carlo check
    samples: int = 1_000_000
    seed: int = 1234

    out: Optional[str] = None  # CSV destination, None writes to stdout


@dataclasses.dataclass
class EngineConfig:
    threads: int = 0  # Worker threads, 0 reads CVTAG_THREADS and then falls back to the cpu count
    shard_size: int = 1 << 18  # Monte-Carlo samples per rng stream


def _parse_value(raw: str, hint):
    """Convert a flat-file string to the field's annotated type."""
    value = raw.strip()
    if typing.get_origin(hint) is typing.Union:
        if value.lower() in {"", "none", "null"}:
            return None
        hint = next(arg for arg in typing.get_args(hint) if arg is not type(None))
    if hint is bool:
        lowered = value.lower()
        if lowered in {"1", "true", "yes", "on"}:
            return True
        if lowered in {"0", "false", "no", "off"}:
            return False
        raise ConfigurationError(f"Expected a boolean, got {raw!r}")
    if hint is int:
        return int(value)
    if hint is float:
        return float(value)
    return value


@dataclasses.dataclass
class CVTagConfig:
    channel_config: ChannelConfig = dataclasses.field(default_factory=ChannelConfig)
    runtime_config: RuntimeConfig = dataclasses.field(default_factory=RuntimeConfig)
    engine_config: EngineConfig = dataclasses.field(default_factory=EngineConfig)

    _SECTIONS = (("channel_config", ChannelConfig), ("runtime_config", RuntimeConfig), ("engine_config", EngineConfig))

    @classmethod
    def _check_unknown_fields(cls, config_dict: dict, known_fields, where: str):
        unknown_fields = set(config_dict.keys()) - set(known_fields)
        if unknown_fields:
            raise ConfigurationError(f"Unknown fields in {where}: {', '.join(sorted(unknown_fields))}")

    @classmethod
    def _create_nested_config(cls, config_dict: dict, config_name: str, config_cls):
        nested_config_dict = config_dict.get(config_name, {})
        cls._check_unknown_fields(nested_config_dict, config_cls.__dataclass_fields__.keys(), config_name)
        return config_cls(**nested_config_dict)

    @classmethod
    def _create_config_from_dict(cls, config_dict: dict):
        cls._check_unknown_fields(config_dict, [name for name, _ in cls._SECTIONS], "the configuration file")
        sections = {name: cls._create_nested_config(config_dict, name, config_cls) for name, config_cls in cls._SECTIONS}
        return cls(**sections)

    @classmethod
    def _field_index(cls):
        index = {}
        for section, config_cls in cls._SECTIONS:
            hints = typing.get_type_hints(config_cls)
            for field in dataclasses.fields(config_cls):
                index[field.name] = (section, hints[field.name])
        return index

    @classmethod
    def field_names(cls):
        """Every field name across the three sections; these are also the CLI flag destinations."""
        return set(cls._field_index())

    @classmethod
    def _canonical_key(cls, key: str) -> str:
        key = key.strip().lstrip("-").replace("-", "_")
        return _KEY_ALIASES.get(key.lower(), key)

    @classmethod
    def from_json(cls, json_path: str):
        """Load nested `channel_config` / `runtime_config` / `engine_config` sections."""
        try:
            with open(json_path, "r") as f:
                config_dict = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(f"Cannot read config {json_path}: {e}") from e
        cvtag_config = cls._create_config_from_dict(config_dict)
        cvtag_config.post_validation()
        return cvtag_config

    @classmethod
    def from_flat(cls, path: str):
        """
        Load a flat `key = value` file whose keys mirror the CLI flags.

        Blank lines and `#` comments are skipped, `--k-min` and `k_min` name
        the same field.
        """
        try:
            with open(path, "r") as f:
                lines = f.readlines()
        except OSError as e:
            raise ConfigurationError(f"Cannot read config {path}: {e}") from e

        overrides = {}
        for lineno, line in enumerate(lines, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(f"{path}:{lineno}: expected `key = value`, got {line!r}")
            key, value = line.split("=", 1)
            overrides[key] = value
        try:
            return cls().apply_overrides(overrides, parse_strings=True)
        except ConfigurationError as e:
            raise ConfigurationError(f"{path}: {e}") from e

    @classmethod
    def from_file(cls, path: str):
        if os.path.splitext(path)[1].lower() == ".json":
            return cls.from_json(path)
        return cls.from_flat(path)

    def apply_overrides(self, overrides: dict, parse_strings: bool = False):
        """
        Return a copy with the given fields replaced; None values are skipped.

        Args:
            overrides (dict): Field name (or CLI flag spelling) to value.
            parse_strings (bool): Values are raw strings to convert by field type.
        """
        index = self._field_index()
        updates = {name: {} for name, _ in self._SECTIONS}
        for raw_key, value in overrides.items():
            if value is None:
                continue
            key = self._canonical_key(raw_key)
            if key not in index:
                raise ConfigurationError(f"Unknown config key {raw_key!r}")
            section, hint = index[key]
            if parse_strings:
                try:
                    value = _parse_value(value, hint)
                except ValueError as e:
                    raise ConfigurationError(f"Bad value for {raw_key!r}: {e}") from e
            updates[section][key] = value

        new_config = CVTagConfig(
            **{name: dataclasses.replace(getattr(self, name), **updates[name]) for name, _ in self._SECTIONS}
        )
        new_config.post_validation()
        return new_config

    def post_validation(self):
        channel, runtime, engine = self.channel_config, self.runtime_config, self.engine_config
        if channel.distribution not in _DISTRIBUTIONS:
            raise ConfigurationError(f"distribution must be one of {_DISTRIBUTIONS}, got {channel.distribution!r}")
        for name in ("v1", "v2"):
            value = getattr(channel, name)
            if value is not None and value < 0:
                raise ConfigurationError(f"{name} must be >= 0, got {value}")
        if channel.loss_db_per_km is not None and channel.loss_db_per_km <= 0:
            raise ConfigurationError(f"loss_db_per_km must be > 0, got {channel.loss_db_per_km}")
        if runtime.distance < 0:
            raise ConfigurationError(f"distance must be >= 0, got {runtime.distance}")
        if runtime.lmin < 0 or runtime.lmin > runtime.lmax:
            raise ConfigurationError(f"Need 0 <= lmin <= lmax, got lmin={runtime.lmin}, lmax={runtime.lmax}")
        if runtime.lstep <= 0:
            raise ConfigurationError(f"lstep must be > 0, got {runtime.lstep}")
        if runtime.samples < 1:
            raise ConfigurationError(f"samples must be >= 1, got {runtime.samples}")
        if runtime.max_distance_km <= 0 or runtime.search_step_km <= 0:
            raise ConfigurationError("max_distance_km and search_step_km must be > 0")
        if engine.threads < 0 or engine.shard_size < 1:
            raise ConfigurationError(f"Need threads >= 0 and shard_size >= 1, got {engine.threads}, {engine.shard_size}")

    def resolved_threads(self) -> int:
        """Configured thread count, with 0 deferring to CVTAG_THREADS (itself 0 = auto)."""
        return self.engine_config.threads or env_int("CVTAG_THREADS", 0)

    def to_json(self, json_path: str):
        directory = os.path.dirname(json_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        config_dict = {name: dataclasses.asdict(getattr(self, name)) for name, _ in self._SECTIONS}
        with open(json_path, "w") as f:
            json.dump(config_dict, f, indent=4)
