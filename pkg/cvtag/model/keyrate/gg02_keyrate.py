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

"""
Asymptotic key-rate quantities of the Gaussian-modulated coherent-state
protocol with trusted homodyne detection and reverse reconciliation.

Everything is in shot-noise units with base-2 logs. The functions broadcast:
any field of `SystemParams` / `EffectiveChannel` may be a numpy array, in which
case arrays are returned.
"""

import math
from typing import NamedTuple

import numpy as np
from scipy.special import entr, xlogy

from cvtag.common import (
    EffectiveChannel,
    FloatOrArray,
    NumericalDomainError,
    SingularChannelError,
    SystemParams,
    as_scalar,
)

LN2 = math.log(2.0)
# Discriminants and symplectic occupations may dip below zero by rounding
DISCRIMINANT_TOL = 1e-9


class ChannelTerms(NamedTuple):
    chi_line: FloatOrArray  # Channel-added noise referred to the channel input
    chi_hom: FloatOrArray  # Detection-added noise referred to the detector input
    chi_tot: FloatOrArray  # Total added noise referred to the channel input
    V: FloatOrArray  # Alice's quadrature variance V_A + 1
    V_B: FloatOrArray  # Bob's measured quadrature variance


def binary_entropy(x: FloatOrArray) -> FloatOrArray:
    """H2(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0."""
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x > 1)) or np.any(np.isnan(x)):
        raise NumericalDomainError(f"binary_entropy needs 0 <= x <= 1, got {x}")
    return as_scalar((entr(x) + entr(1.0 - x)) / LN2)


def g_func(x: FloatOrArray) -> FloatOrArray:
    """Entropy of a thermal state with mean photon number x: (x+1)log2(x+1) - x log2 x."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise NumericalDomainError(f"g_func needs x >= 0, got {x}")
    return as_scalar((xlogy(x + 1.0, x + 1.0) - xlogy(x, x)) / LN2)


def channel_terms(params: SystemParams, ch: EffectiveChannel) -> ChannelTerms:
    T = np.asarray(ch.T, dtype=float)
    if np.any(T == 0):
        raise SingularChannelError("Channel transmittance T = 0, no signal reaches Bob")
    eta = np.asarray(params.eta, dtype=float)

    V = np.asarray(params.V_A, dtype=float) + 1.0
    chi_line = 1.0 / T - 1.0 + ch.eps
    chi_hom = (1.0 - eta) / eta + params.v_el / eta
    chi_tot = chi_line + chi_hom / T
    V_B = eta * T * (V + chi_tot)
    return ChannelTerms(*(as_scalar(term) for term in (chi_line, chi_hom, chi_tot, V, V_B)))


def mutual_information(params: SystemParams, ch: EffectiveChannel) -> FloatOrArray:
    terms = channel_terms(params, ch)
    return as_scalar(0.5 * np.log2((terms.V + terms.chi_tot) / (1.0 + terms.chi_tot)))


def _paired_roots(s, p, what):
    """Return the symplectic pair (l1, l2) with l1^2 + l2^2 = s and l1^2 l2^2 = p."""
    disc = s * s - 4.0 * p
    tol = DISCRIMINANT_TOL * np.maximum(1.0, s * s)
    if np.any(disc < -tol):
        raise NumericalDomainError(f"Negative {what} discriminant {np.min(disc)}")
    root = np.sqrt(np.maximum(disc, 0.0))
    return np.sqrt(0.5 * (s + root)), np.sqrt(np.maximum(0.5 * (s - root), 0.0))


def _occupation(nu):
    # (nu - 1)/2 with rounding just below the vacuum value clamped
    x = (nu - 1.0) / 2.0
    if np.any(x < -DISCRIMINANT_TOL):
        raise NumericalDomainError(f"Symplectic eigenvalue below 1: {np.min(nu)}")
    return np.maximum(x, 0.0)


def symplectic_eigenvalues(params: SystemParams, ch: EffectiveChannel):
    """
    Closed-form symplectic spectrum of the Alice-Bob state (l1, l2) and of the
    state conditioned on Bob's homodyne outcome (l3, l4).
    """
    terms = channel_terms(params, ch)
    T = np.asarray(ch.T, dtype=float)
    V, chi_line, chi_hom, chi_tot = terms.V, terms.chi_line, terms.chi_hom, terms.chi_tot

    A = V * V * (1.0 - 2.0 * T) + 2.0 * T + T * T * (V + chi_line) ** 2
    B = T * T * (V * chi_line + 1.0) ** 2
    l1, l2 = _paired_roots(A, B, "A^2 - 4B")

    sqrt_B = np.sqrt(B)
    denom = T * (V + chi_tot)
    C = (A * chi_hom + V * sqrt_B + T * (V + chi_line)) / denom
    D = sqrt_B * (V + sqrt_B * chi_hom) / denom
    l3, l4 = _paired_roots(C, D, "C^2 - 4D")
    return l1, l2, l3, l4


def holevo_bound(params: SystemParams, ch: EffectiveChannel) -> FloatOrArray:
    """
    Holevo bound chi_BE on Eve's information about Bob's data, bits/use.

    Args:
        params (SystemParams): eta and v_el are trusted detector noise, V_A the
            modulation variance.
        ch (EffectiveChannel): Transmittance T > 0 and input-referred excess noise.
    """
    l1, l2, l3, l4 = symplectic_eigenvalues(params, ch)
    chi = (
        g_func(_occupation(l1))
        + g_func(_occupation(l2))
        - g_func(_occupation(l3))
        - g_func(_occupation(l4))
    )
    return as_scalar(chi)


def differential_entropy(variance: FloatOrArray) -> FloatOrArray:
    """Differential entropy of a centred Gaussian, 1/2 log2(2 pi e V)."""
    variance = np.asarray(variance, dtype=float)
    if np.any(variance <= 0):
        raise NumericalDomainError(f"Differential entropy needs a positive variance, got {variance}")
    return as_scalar(0.5 * np.log2(2.0 * math.pi * math.e * variance))


def bob_entropy(params: SystemParams, ch: EffectiveChannel) -> FloatOrArray:
    return differential_entropy(channel_terms(params, ch).V_B)


def perfect_rate(params: SystemParams, ch: EffectiveChannel) -> FloatOrArray:
    """Untagged (p0 = 1) rate beta I_AB - chi_BE, signed."""
    return as_scalar(params.beta * mutual_information(params, ch) - holevo_bound(params, ch))
