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

import os
from typing import List, Union

import numpy as np

from .errors import ConfigurationError

FloatOrArray = Union[float, np.ndarray]


def env_int(env_name: str, default: int = 0) -> int:
    value = os.environ.get(env_name)
    if value is None or value.strip() == "":
        return default
    try:
        return int(value)
    except ValueError as e:
        raise ConfigurationError(f"{env_name} must be an integer, got {value!r}") from e


def as_scalar(value) -> FloatOrArray:
    """Unwrap 0-d numpy results to a plain float, leave arrays untouched."""
    if np.ndim(value) == 0:
        return float(value)
    return value


def spawn_seeds(seed, count: int) -> List[np.random.SeedSequence]:
    """Derive `count` independent child streams from a root seed (int or SeedSequence)."""
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return root.spawn(count)
