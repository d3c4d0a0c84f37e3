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

import numpy as np

from .common_utils import FloatOrArray
from .errors import ConfigurationError


def _check(condition, message):
    if not np.all(condition):
        raise ConfigurationError(message)


@dataclass(frozen=True)
class SystemParams:
    # All noise figures in shot-noise units. Fields may hold numpy arrays
    # when a whole cutoff grid is evaluated at once.
    eta: FloatOrArray  # Mean detector efficiency, in (0, 1]
    eps_c: FloatOrArray  # Channel excess noise referred to channel input
    v_el: FloatOrArray  # Detector electronic noise
    V_A: FloatOrArray  # Modulation variance
    beta: FloatOrArray  # Reconciliation efficiency as a fraction, in [0, 1]

    def __post_init__(self):
        _check((np.asarray(self.eta) > 0) & (np.asarray(self.eta) <= 1), f"eta must lie in (0, 1], got {self.eta}")
        _check(np.asarray(self.eps_c) >= 0, f"eps_c must be >= 0, got {self.eps_c}")
        _check(np.asarray(self.v_el) >= 0, f"v_el must be >= 0, got {self.v_el}")
        _check(np.asarray(self.V_A) > 0, f"V_A must be > 0, got {self.V_A}")
        _check(
            (np.asarray(self.beta) >= 0) & (np.asarray(self.beta) <= 1),
            f"beta must be a fraction in [0, 1], got {self.beta} (percent values go through from_table)",
        )

    @classmethod
    def from_table(cls, eta, eps_c, v_el, V_A, beta_percent):
        """Build from a parameter table that quotes beta in percent (95.6 -> 0.956)."""
        return cls(eta=eta, eps_c=eps_c, v_el=v_el, V_A=V_A, beta=beta_percent / 100.0)


@dataclass(frozen=True)
class EffectiveChannel:
    T: FloatOrArray  # Power transmittance, in [0, 1]; 0 is rejected by channel_terms
    eps: FloatOrArray  # Excess noise referred to channel input

    def __post_init__(self):
        _check((np.asarray(self.T) >= 0) & (np.asarray(self.T) <= 1), f"T must lie in [0, 1], got {self.T}")
        _check(np.asarray(self.eps) >= 0, f"eps must be >= 0, got {self.eps}")


@dataclass(frozen=True)
class KeyRateBreakdown:
    p0: float  # Untagged probability
    I_AB: float  # Alice-Bob mutual information, bits/use
    H_XB: float  # Differential entropy of Bob's quadrature, bits/use
    chi_BE: float  # Holevo bound on Eve's information, bits/use
    beta: float
    rate: float  # Signed secret key rate, bits/use

    @classmethod
    def compose(cls, p0, I_AB, H_XB, chi_BE, beta):
        rate = beta * I_AB - (1.0 - p0) * H_XB - p0 * chi_BE
        return cls(p0=p0, I_AB=I_AB, H_XB=H_XB, chi_BE=chi_BE, beta=beta, rate=rate)
