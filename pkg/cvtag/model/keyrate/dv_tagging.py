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

from dataclasses import dataclass

from cvtag.common import ConfigurationError

from .gg02_keyrate import binary_entropy


@dataclass(frozen=True)
class DvTaggedInput:
    p_tagged: float  # Fraction of tagged signals
    s: float  # Key length after error correction
    delta: float  # Phase error rate of the untagged signals

    def __post_init__(self):
        if not 0 <= self.p_tagged <= 1:
            raise ConfigurationError(f"p_tagged must lie in [0, 1], got {self.p_tagged}")
        if self.s < 0:
            raise ConfigurationError(f"s must be >= 0, got {self.s}")
        if not 0 <= self.delta <= 1:
            raise ConfigurationError(f"delta must lie in [0, 1], got {self.delta}")


@dataclass(frozen=True)
class WcpInput:
    Q1: float  # Single-photon gain
    e_phase: float  # Single-photon phase error rate
    f_u: float  # Error-correction inefficiency, >= 1
    Qu: float  # Overall gain at intensity u
    Eu: float  # Overall QBER at intensity u

    def __post_init__(self):
        if self.Q1 < 0 or self.Qu < 0:
            raise ConfigurationError(f"Gains must be >= 0, got Q1={self.Q1}, Qu={self.Qu}")
        if self.Q1 > self.Qu:
            raise ConfigurationError(f"Single-photon gain cannot exceed the total gain: Q1={self.Q1} > Qu={self.Qu}")
        if not 0 <= self.e_phase <= 1 or not 0 <= self.Eu <= 1:
            raise ConfigurationError(f"Error rates must lie in [0, 1], got e_phase={self.e_phase}, Eu={self.Eu}")
        if self.f_u < 1:
            raise ConfigurationError(f"f_u must be >= 1, got {self.f_u}")


def gllp_rate(inp: DvTaggedInput) -> float:
    """Key length (1 - p) s (1 - H2(delta)) left once tagged signals are conceded; not clamped."""
    return (1.0 - inp.p_tagged) * inp.s * (1.0 - binary_entropy(inp.delta))


def wcp_rate(inp: WcpInput, literal_correction: bool = False) -> float:
    """
    Weak-coherent-pulse rate Q1 (1 - H2(e_phase)) - f_u Qu H2(Eu), signed.

    Args:
        inp (WcpInput): Gains and error rates.
        literal_correction (bool): Charge the error correction as f_u Qu Eu
            (linear in the QBER) instead of f_u Qu H2(Eu).
    """
    correction = inp.Eu if literal_correction else binary_entropy(inp.Eu)
    return inp.Q1 * (1.0 - binary_entropy(inp.e_phase)) - inp.f_u * inp.Qu * correction
