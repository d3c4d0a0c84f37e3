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
from typing import Tuple

import numpy as np

from cvtag.common import ConfigurationError, UnsupportedShapeError, cvtag_logger, spawn_seeds
from cvtag.infra.parallelism import ordered_map

from .stage import StageLabel, StageTransform

DEFAULT_SHARD_SIZE = 1 << 18


@dataclass(frozen=True)
class Pipeline:
    modulation: StageTransform
    channel: StageTransform
    detection: StageTransform
    V_A: float  # Modulation variance claimed by Alice

    def __post_init__(self):
        if not self.V_A > 0:
            raise ConfigurationError(f"V_A must be > 0, got {self.V_A}")
        expected = (StageLabel.MODULATION, StageLabel.CHANNEL, StageLabel.DETECTION)
        labels = tuple(stage.label for stage in self.stages)
        if labels != expected:
            raise ConfigurationError(f"Stages must run modulation -> channel -> detection, got {[l.value for l in labels]}")

    @property
    def stages(self) -> Tuple[StageTransform, StageTransform, StageTransform]:
        return (self.modulation, self.channel, self.detection)

    @property
    def input_second_moment(self) -> float:
        # Coherent-state quadrature: modulation plus one unit of shot noise
        return self.V_A + 1.0

    def second_moments(self) -> Tuple[float, float, float, float]:
        """Second moments at the input and after each of the three stages."""
        moments = [self.input_second_moment]
        for stage in self.stages:
            moments.append(stage.propagate(moments[-1]))
        return tuple(moments)


@dataclass(frozen=True)
class EffectiveParams:
    T_eff: float  # Squared mean gain of modulation and channel
    eps_eff: float  # Excess noise referred to the channel input, fluctuations included
    eta: float  # Squared mean detection gain
    v_el: float  # Electronic noise at the detector output
    T_c: float  # Squared mean channel gain
    eps_c: float  # Channel excess noise without fluctuation terms
    V1: float  # Variance of the modulation gain
    V2: float  # Variance of the detection gain
    V_A: float
    mean_gain: float  # E[x_o | x_i] / x_i
    output_variance: float  # Var(x_o) from the moment recursion


def _check_preset_shape(pipeline: Pipeline):
    mod, ch, det = pipeline.stages
    problems = []
    if mod.injects_vacuum or not mod.b.is_degenerate:
        problems.append("modulation must be a pure gain a_m x")
    if not mod.a.mean() > 0:
        problems.append("modulation gain must have a positive mean")
    for stage in (ch, det):
        if not stage.injects_vacuum:
            problems.append(f"{stage.label.value} stage must be loss-type (vacuum through the loss port)")
        if not 0 < stage.a.mean() <= 1:
            problems.append(f"{stage.label.value} gain mean must lie in (0, 1], got {stage.a.mean()}")
    if problems:
        raise UnsupportedShapeError(
            "effective_params needs the modulation/lossy-channel/detection shape; use monte_carlo_check instead: "
            + "; ".join(problems)
        )


def effective_params(pipeline: Pipeline) -> EffectiveParams:
    """
    Collapse a preset-shaped pipeline into the (T, eps, eta, v_el) the key-rate
    engine consumes.

    The parties only estimate mean gains, so every gain fluctuation shows up as
    extra input-referred excess noise.

    Raises:
        UnsupportedShapeError: the pipeline is not modulation / lossy channel /
            detection shaped.
    """
    _check_preset_shape(pipeline)
    mod, ch, det = pipeline.stages
    M_in, M_mod, M_det, M_out = pipeline.second_moments()

    a_m, a_c, a_d = mod.a.mean(), ch.a.mean(), det.a.mean()
    V1, V_c, V2 = mod.a.variance(), ch.a.variance(), det.a.variance()

    T_c = a_c**2
    # Channel output beyond a lossy channel of transmittance T_c, referred to its input
    a_c2 = ch.a.second_moment()
    vacuum_surplus = max(0.0, 1.0 - a_c2) - (1.0 - T_c)
    eps_c = ((1.0 - a_c2) * ch.b.variance() + V_c * M_mod + vacuum_surplus) / T_c

    T_eff = a_m**2 * T_c
    eta = a_d**2
    eps_eff = (eps_c + V1 * M_in + (a_m**2 - 1.0)) / a_m**2 + V2 * M_det / (eta * T_eff)
    v_el = (1.0 - eta) * det.b.variance()

    return EffectiveParams(
        T_eff=T_eff,
        eps_eff=eps_eff,
        eta=eta,
        v_el=v_el,
        T_c=T_c,
        eps_c=eps_c,
        V1=V1,
        V2=V2,
        V_A=pipeline.V_A,
        mean_gain=a_m * a_c * a_d,
        output_variance=M_out,
    )


@dataclass(frozen=True)
class PipelineSamples:
    x_i: np.ndarray  # Alice's modulation symbols
    x_o: np.ndarray  # Bob's homodyne outcomes


def _simulate_shard(pipeline: Pipeline, size: int, seed_seq: np.random.SeedSequence):
    rng = np.random.default_rng(seed_seq)
    x_i = rng.normal(0.0, math.sqrt(pipeline.V_A), size=size)
    x = x_i + rng.standard_normal(size)
    for stage in pipeline.stages:
        x = stage.apply(x, rng)
    return x_i, x


def simulate_pipeline(
    pipeline: Pipeline, n: int, seed=1234, shard_size: int = DEFAULT_SHARD_SIZE, threads: int = 0
) -> PipelineSamples:
    """
    Push n coherent states through the three stages.

    Samples are drawn in fixed-size shards, each from its own stream spawned
    from `seed`, so the result is bit-identical for any `threads`.
    """
    if n < 1:
        raise ConfigurationError(f"n must be >= 1, got {n}")
    if shard_size < 1:
        raise ConfigurationError(f"shard_size must be >= 1, got {shard_size}")

    num_shards = -(-n // shard_size)
    sizes = [shard_size] * (num_shards - 1) + [n - shard_size * (num_shards - 1)]
    shards = ordered_map(
        lambda job: _simulate_shard(pipeline, *job),
        zip(sizes, spawn_seeds(seed, num_shards)),
        threads=threads,
        desc="Simulating",
    )
    x_i = np.concatenate([shard[0] for shard in shards])
    x_o = np.concatenate([shard[1] for shard in shards])
    return PipelineSamples(x_i=x_i, x_o=x_o)


@dataclass(frozen=True)
class MonteCarloReport:
    n_samples: int
    analytic_gain: float
    empirical_gain: float
    gain_se: float
    analytic_variance: float
    empirical_variance: float
    variance_se: float

    @property
    def gain_z(self) -> float:
        return abs(self.empirical_gain - self.analytic_gain) / self.gain_se

    @property
    def variance_z(self) -> float:
        return abs(self.empirical_variance - self.analytic_variance) / self.variance_se

    def passed(self, n_sigma: float = 3.0) -> bool:
        return self.gain_z <= n_sigma and self.variance_z <= n_sigma


def monte_carlo_check(
    pipeline: Pipeline, n: int, seed=1234, shard_size: int = DEFAULT_SHARD_SIZE, threads: int = 0
) -> MonteCarloReport:
    """
    Compare effective_params' mean gain and output variance with sampled data.

    The gain is the least-squares slope of x_o on x_i through the origin, with a
    heteroscedasticity-robust standard error. The variance error uses the
    sample fourth central moment.
    """
    eff = effective_params(pipeline)
    samples = simulate_pipeline(pipeline, n, seed=seed, shard_size=shard_size, threads=threads)
    x_i, x_o = samples.x_i, samples.x_o

    sxx = np.dot(x_i, x_i)
    gain = np.dot(x_i, x_o) / sxx
    residual = x_o - gain * x_i
    gain_se = math.sqrt(np.dot(x_i * x_i, residual * residual)) / sxx

    centred = x_o - x_o.mean()
    variance = float(np.mean(centred**2))
    m4 = float(np.mean(centred**4))
    variance_se = math.sqrt(max(m4 - variance**2, 0.0) / n)

    report = MonteCarloReport(
        n_samples=n,
        analytic_gain=eff.mean_gain,
        empirical_gain=float(gain),
        gain_se=float(gain_se),
        analytic_variance=eff.output_variance,
        empirical_variance=variance,
        variance_se=variance_se,
    )
    cvtag_logger.debug(f"Monte-Carlo check: gain z={report.gain_z:.2f}, variance z={report.variance_z:.2f}")
    return report
