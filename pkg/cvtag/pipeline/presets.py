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
from dataclasses import dataclass
from typing import Dict

from cvtag.common import ChannelConfig, ConfigurationError, SystemParams, cvtag_logger
from cvtag.model.imperfection import Pipeline, detection_stage, lossy_channel_stage, modulation_stage

# Largest transmittance used when the channel carries excess noise; T_c = 1 leaves it no loss port
MAX_NOISY_TRANSMITTANCE = 1.0 - 1e-9


@dataclass(frozen=True)
class Preset:
    name: str
    params: SystemParams
    V1: float = 0.0  # Modulation gain variance
    V2: float = 0.0  # Detection gain variance
    fiber_loss_db_per_km: float = 0.2

    def __post_init__(self):
        if self.V1 < 0 or self.V2 < 0:
            raise ConfigurationError(f"Fluctuation variances must be >= 0, got V1={self.V1}, V2={self.V2}")
        if not self.fiber_loss_db_per_km > 0:
            raise ConfigurationError(f"fiber_loss_db_per_km must be > 0, got {self.fiber_loss_db_per_km}")


PRESETS: Dict[str, Preset] = {
    # Reference evaluation parameters with 5% gain fluctuations
    "table1": Preset(
        name="table1",
        params=SystemParams.from_table(eta=0.60, eps_c=0.02, v_el=0.02, V_A=18.0, beta_percent=95.6),
        V1=0.0025,
        V2=0.0015,
    ),
    # Long-distance field parameters
    "table3": Preset(
        name="table3",
        params=SystemParams.from_table(eta=0.6134, eps_c=0.0081, v_el=0.1523, V_A=7.65, beta_percent=98.0),
        V1=0.0025,
        V2=0.0015,
    ),
}


def get_preset(name: str) -> Preset:
    if name not in PRESETS:
        raise ConfigurationError(f"Unknown preset {name!r}, expected one of {sorted(PRESETS)}")
    return PRESETS[name]


def normalize_beta(beta: float) -> float:
    """Accept beta as a fraction or, when above 1, as a percentage."""
    return beta / 100.0 if beta > 1 else beta


def resolve_preset(channel_config: ChannelConfig) -> Preset:
    """Built-in preset with the overrides of `channel_config` applied."""
    preset = get_preset(channel_config.preset)
    param_overrides = {
        name: getattr(channel_config, name)
        for name in ("eta", "eps_c", "v_el", "V_A", "beta")
        if getattr(channel_config, name) is not None
    }
    if "beta" in param_overrides:
        param_overrides["beta"] = normalize_beta(param_overrides["beta"])

    preset_overrides = {}
    if param_overrides:
        preset_overrides["params"] = dataclasses.replace(preset.params, **param_overrides)
    if channel_config.v1 is not None:
        preset_overrides["V1"] = channel_config.v1
    if channel_config.v2 is not None:
        preset_overrides["V2"] = channel_config.v2
    if channel_config.loss_db_per_km is not None:
        preset_overrides["fiber_loss_db_per_km"] = channel_config.loss_db_per_km
    return dataclasses.replace(preset, **preset_overrides)


def build_preset_pipeline(preset: Preset, T_c: float, law: str = "gaussian", strict_paper: bool = False) -> Pipeline:
    """Modulation / lossy fiber / detection pipeline of `preset` at channel transmittance T_c."""
    params = preset.params
    if T_c > MAX_NOISY_TRANSMITTANCE and params.eps_c > 0:
        cvtag_logger.debug(f"Clamping T_c={T_c} to {MAX_NOISY_TRANSMITTANCE} for eps_c={params.eps_c}")
        T_c = MAX_NOISY_TRANSMITTANCE
    return Pipeline(
        modulation=modulation_stage(preset.V1, law),
        channel=lossy_channel_stage(T_c, params.eps_c),
        detection=detection_stage(params.eta, params.v_el, preset.V2, law, strict_paper=strict_paper),
        V_A=params.V_A,
    )
