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
from dataclasses import dataclass
from enum import Enum

import numpy as np

from cvtag.common import ConfigurationError, FloatOrArray, SingularChannelError, as_scalar
from cvtag.model.distributions import Degenerate, Distribution, Gaussian, fluctuating

# Largest tolerated P(|a| > 1) for a stage that adds noise through sqrt(1 - a^2)
MAX_OVERSHOOT_PROB = 1e-6


class StageLabel(str, Enum):
    MODULATION = "modulation"
    CHANNEL = "channel"
    DETECTION = "detection"


@dataclass(frozen=True)
class StageTransform:
    """
    One imperfect stage x -> a x + sqrt(max(0, 1 - a^2)) (b + v).

    `a` and `b` are drawn afresh for every signal. `v` is unit-variance vacuum
    entering through the loss port and is only present when `injects_vacuum`
    is set (beam-splitter type stages: fiber loss, detector inefficiency).
    """

    a: Distribution
    b: Distribution
    label: StageLabel
    injects_vacuum: bool = False

    def __post_init__(self):
        object.__setattr__(self, "label", StageLabel(self.label))
        if self.b.mean() != 0:
            raise ConfigurationError(f"{self.label.value} stage: b must have zero mean, got {self.b.mean()}")
        if self.b.variance() > 0:
            overshoot = (1.0 - self.a.cdf(1.0)) + self.a.cdf(-1.0)
            if overshoot >= MAX_OVERSHOOT_PROB:
                raise ConfigurationError(
                    f"{self.label.value} stage: P(|a| > 1) = {overshoot:.3g} leaves the noise coefficient imaginary"
                )

    def propagate(self, second_moment: float) -> float:
        """Second moment of the output given the second moment of a zero-mean input."""
        a2 = self.a.second_moment()
        vacuum = max(0.0, 1.0 - a2) if self.injects_vacuum else 0.0
        return a2 * second_moment + vacuum + (1.0 - a2) * self.b.variance()

    def apply(self, x: FloatOrArray, rng: np.random.Generator) -> FloatOrArray:
        size = None if np.ndim(x) == 0 else np.shape(x)
        a = self.a.sample(rng, size)
        noise = self.b.sample(rng, size)
        if self.injects_vacuum:
            noise = noise + rng.standard_normal(size)
        return as_scalar(a * x + np.sqrt(np.maximum(0.0, 1.0 - np.square(a))) * noise)


def apply_stage(stage: StageTransform, x: FloatOrArray, rng: np.random.Generator) -> FloatOrArray:
    return stage.apply(x, rng)


def lossy_channel_stage(T_c: float, eps_c: float) -> StageTransform:
    """
    Fiber of transmittance T_c with input-referred excess noise eps_c.

    b carries the excess noise as Gaussian(0, T_c eps_c / (1 - T_c)) so the
    stage adds (1 - T_c) vacuum plus T_c eps_c.
    """
    if not 0 < T_c <= 1:
        raise ConfigurationError(f"T_c must lie in (0, 1], got {T_c}")
    if eps_c < 0:
        raise ConfigurationError(f"eps_c must be >= 0, got {eps_c}")
    if T_c == 1:
        if eps_c > 0:
            raise SingularChannelError("Excess noise on a lossless channel (T_c = 1) has no loss port to enter through")
        b = Degenerate(0.0)
    else:
        b = fluctuating(0.0, T_c * eps_c / (1.0 - T_c))
    return StageTransform(a=Degenerate(math.sqrt(T_c)), b=b, label=StageLabel.CHANNEL, injects_vacuum=True)


def phase_rotation_stage(
    theta: float, quadrature_variance: float = 1.0, label: StageLabel = StageLabel.CHANNEL
) -> StageTransform:
    """Rotation by theta mixing in the independent P quadrature (variance `quadrature_variance`)."""
    if not abs(theta) < math.pi / 2:
        raise ConfigurationError(f"|theta| must be below pi/2, got {theta}")
    if quadrature_variance < 1:
        raise ConfigurationError(f"quadrature_variance must be >= 1 (shot noise), got {quadrature_variance}")
    return StageTransform(a=Degenerate(math.cos(theta)), b=Gaussian(0.0, quadrature_variance), label=label)


def modulation_stage(V1: float, law: str = "gaussian") -> StageTransform:
    """Modulator gain fluctuation x -> a_m x with mean(a_m) = 1 and variance V1."""
    return StageTransform(a=fluctuating(1.0, V1, law), b=Degenerate(0.0), label=StageLabel.MODULATION)


def detection_stage(
    eta: float, v_el: float, V2: float = 0.0, law: str = "gaussian", strict_paper: bool = False
) -> StageTransform:
    """
    Homodyne detector with mean efficiency eta, electronic noise v_el and gain variance V2.

    With mean(a_d) = sqrt(eta), b_d of variance v_el / (1 - eta) adds v_el at the
    output. `strict_paper` uses eta v_el / (1 - eta) instead, which adds eta v_el.
    """
    if not 0 < eta <= 1:
        raise ConfigurationError(f"eta must lie in (0, 1], got {eta}")
    if v_el < 0:
        raise ConfigurationError(f"v_el must be >= 0, got {v_el}")
    if eta == 1:
        if v_el > 0:
            raise SingularChannelError("Electronic noise on a unit-efficiency detector has no port to enter through")
        b = Degenerate(0.0)
    else:
        scale = eta if strict_paper else 1.0
        b = fluctuating(0.0, scale * v_el / (1.0 - eta))
    return StageTransform(
        a=fluctuating(math.sqrt(eta), V2, law), b=b, label=StageLabel.DETECTION, injects_vacuum=True
    )
