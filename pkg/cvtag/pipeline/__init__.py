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

from .pipeline import CVTagPipeline
from .presets import PRESETS, Preset, build_preset_pipeline, get_preset, resolve_preset
from .sweep import (
    SecureDistance,
    SweepRow,
    distance_sweep,
    evaluate_distance,
    max_secure_distance,
    read_sweep_csv,
    transmittance_from_distance,
    write_sweep_csv,
)

__all__ = [
    "CVTagPipeline",
    "PRESETS",
    "Preset",
    "get_preset",
    "resolve_preset",
    "build_preset_pipeline",
    "transmittance_from_distance",
    "SweepRow",
    "evaluate_distance",
    "distance_sweep",
    "SecureDistance",
    "max_secure_distance",
    "write_sweep_csv",
    "read_sweep_csv",
]
