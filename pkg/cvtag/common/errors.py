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


class CVTagError(Exception):
    """Root of every error raised by cvtag."""


class ConfigurationError(CVTagError, ValueError):
    """Invalid parameters, grids, presets or config files."""


class UnsupportedShapeError(ConfigurationError):
    """Pipeline is not of the modulation/lossy-channel/detection preset shape."""


class NumericalDomainError(CVTagError, ArithmeticError):
    """A formula was evaluated outside of its mathematical domain."""


class SingularChannelError(NumericalDomainError):
    pass
