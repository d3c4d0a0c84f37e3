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

from .cv_tagging import (
    CutoffPlan,
    KGrid,
    MappedChannel,
    TaggedRateInput,
    active_plan,
    mapped_effective_channel,
    optimize_cutoffs,
    rate_with_tagging,
    untagged_probability,
)

__all__ = [
    "CutoffPlan",
    "KGrid",
    "TaggedRateInput",
    "MappedChannel",
    "untagged_probability",
    "active_plan",
    "mapped_effective_channel",
    "rate_with_tagging",
    "optimize_cutoffs",
]
