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

from .imperfection_pipeline import (
    EffectiveParams,
    MonteCarloReport,
    Pipeline,
    PipelineSamples,
    effective_params,
    monte_carlo_check,
    simulate_pipeline,
)
from .stage import (
    StageLabel,
    StageTransform,
    apply_stage,
    detection_stage,
    lossy_channel_stage,
    modulation_stage,
    phase_rotation_stage,
)

__all__ = [
    "StageLabel",
    "StageTransform",
    "apply_stage",
    "lossy_channel_stage",
    "phase_rotation_stage",
    "modulation_stage",
    "detection_stage",
    "Pipeline",
    "EffectiveParams",
    "effective_params",
    "PipelineSamples",
    "simulate_pipeline",
    "MonteCarloReport",
    "monte_carlo_check",
]
