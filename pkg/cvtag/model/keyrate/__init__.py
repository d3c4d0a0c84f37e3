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

from .dv_tagging import DvTaggedInput, WcpInput, gllp_rate, wcp_rate
from .gg02_keyrate import (
    ChannelTerms,
    binary_entropy,
    bob_entropy,
    channel_terms,
    differential_entropy,
    g_func,
    holevo_bound,
    mutual_information,
    perfect_rate,
    symplectic_eigenvalues,
)

__all__ = [
    "ChannelTerms",
    "binary_entropy",
    "g_func",
    "channel_terms",
    "mutual_information",
    "symplectic_eigenvalues",
    "holevo_bound",
    "differential_entropy",
    "bob_entropy",
    "perfect_rate",
    "DvTaggedInput",
    "WcpInput",
    "gllp_rate",
    "wcp_rate",
]
