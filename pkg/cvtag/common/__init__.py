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

from .common_utils import FloatOrArray, as_scalar, env_int, spawn_seeds
from .config import ChannelConfig, CVTagConfig, EngineConfig, RuntimeConfig
from .dataclass import EffectiveChannel, KeyRateBreakdown, SystemParams
from .errors import ConfigurationError, CVTagError, NumericalDomainError, SingularChannelError, UnsupportedShapeError
from .logger import cvtag_logger, set_log_level
from .timer import event_path_timer

__all__ = [
    "CVTagConfig",
    "ChannelConfig",
    "EngineConfig",
    "RuntimeConfig",
    "cvtag_logger",
    "set_log_level",
    "event_path_timer",
    "FloatOrArray",
    "as_scalar",
    "env_int",
    "spawn_seeds",
    "SystemParams",
    "EffectiveChannel",
    "KeyRateBreakdown",
    "CVTagError",
    "ConfigurationError",
    "UnsupportedShapeError",
    "NumericalDomainError",
    "SingularChannelError",
]
