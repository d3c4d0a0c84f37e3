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

import math

import numpy as np
import pytest

from cvtag.common import EffectiveChannel, SystemParams
from cvtag.pipeline import build_preset_pipeline, get_preset, transmittance_from_distance


@pytest.fixture(autouse=True)
def single_thread(monkeypatch):
    monkeypatch.setenv("CVTAG_THREADS", "1")


@pytest.fixture
def table1():
    return get_preset("table1")


@pytest.fixture
def table3():
    return get_preset("table3")


@pytest.fixture
def table1_params(table1):
    return table1.params


@pytest.fixture
def identity_params():
    return SystemParams(eta=1.0, eps_c=0.0, v_el=0.0, V_A=18.0, beta=1.0)


@pytest.fixture
def identity_channel():
    return EffectiveChannel(T=1.0, eps=0.0)


@pytest.fixture
def pipeline_at():
    def build(preset, L_km, **kwargs):
        return build_preset_pipeline(preset, transmittance_from_distance(L_km, preset.fiber_loss_db_per_km), **kwargs)

    return build


def symplectic_spectrum(sigma):
    """Symplectic eigenvalues of a 2n x 2n covariance matrix in (x1, p1, x2, p2, ...) order."""
    n = sigma.shape[0] // 2
    omega = np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    eig = np.sort(np.abs(np.linalg.eigvals(1j * omega @ sigma)))
    return eig[::2]


def g_entropy(nu):
    x = (nu - 1.0) / 2.0
    if x <= 0:
        return 0.0
    return (x + 1.0) * math.log2(x + 1.0) - x * math.log2(x)


def covariance_holevo(T, eps, eta, v_el, V_A):
    """
    Holevo bound from explicitly assembled covariance matrices.

    Bob's imperfect homodyne is a beam splitter of transmittance eta mixing B
    with one half of an EPR pair whose variance models v_el; the bound is
    S(AB) - S(A F G | x_B).
    """
    V = V_A + 1.0
    Z = np.diag([1.0, -1.0])
    I2 = np.eye(2)
    c_ab = math.sqrt(T * (V * V - 1.0))
    b = T * (V + 1.0 / T - 1.0 + eps)
    gamma_ab = np.block([[V * I2, c_ab * Z], [c_ab * Z, b * I2]])

    v = 1.0 + v_el / (1.0 - eta) if eta < 1 else 1.0
    c_fg = math.sqrt(v * v - 1.0)
    gamma_fg = np.block([[v * I2, c_fg * Z], [c_fg * Z, v * I2]])

    # Modes A, B, F0, G
    gamma = np.zeros((8, 8))
    gamma[:4, :4] = gamma_ab
    gamma[4:, 4:] = gamma_fg
    s, c = math.sqrt(eta), math.sqrt(1.0 - eta)
    bs = np.eye(8)
    bs[2:6, 2:6] = np.block([[s * I2, c * I2], [-c * I2, s * I2]])
    gamma = bs @ gamma @ bs.T

    # Homodyne x on B' (index 2): condition the remaining modes A, F, G
    keep = [0, 1, 4, 5, 6, 7]
    gamma_r = gamma[np.ix_(keep, keep)]
    cross = gamma[keep, 2]
    gamma_cond = gamma_r - np.outer(cross, cross) / gamma[2, 2]

    s_ab = sum(g_entropy(nu) for nu in symplectic_spectrum(gamma_ab))
    s_cond = sum(g_entropy(nu) for nu in symplectic_spectrum(gamma_cond))
    return s_ab - s_cond
