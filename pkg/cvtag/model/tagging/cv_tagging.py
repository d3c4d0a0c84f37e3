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
from typing import NamedTuple, Tuple

import numpy as np

from cvtag.common import (
    ConfigurationError,
    EffectiveChannel,
    FloatOrArray,
    KeyRateBreakdown,
    NumericalDomainError,
    SystemParams,
    as_scalar,
    cvtag_logger,
)
from cvtag.model.imperfection import EffectiveParams, Pipeline, effective_params
from cvtag.model.keyrate import bob_entropy, holevo_bound, mutual_information


@dataclass(frozen=True)
class CutoffPlan:
    k1: FloatOrArray = 1.0  # Modulation cutoff, in units of mean(a_m)
    k2: FloatOrArray = 1.0  # Channel cutoff, in units of mean(a_c)
    k3: FloatOrArray = 1.0  # Detection cutoff, in units of mean(a_d)

    def __post_init__(self):
        for name in ("k1", "k2", "k3"):
            if not np.all(np.asarray(getattr(self, name)) >= 1):
                raise ConfigurationError(f"{name} must be >= 1, got {getattr(self, name)}")

    @property
    def k(self) -> FloatOrArray:
        return self.k1 * self.k2 * self.k3


@dataclass(frozen=True)
class KGrid:
    k_min: float = 1.0
    k_max: float = 1.3
    step: float = 0.005

    def __post_init__(self):
        if self.k_min < 1:
            raise ConfigurationError(f"k_min must be >= 1, got {self.k_min}")
        if self.k_max < self.k_min:
            raise ConfigurationError(f"Empty cutoff grid: k_max={self.k_max} < k_min={self.k_min}")
        if not self.step > 0:
            raise ConfigurationError(f"Grid step must be > 0, got {self.step}")

    def values(self) -> np.ndarray:
        count = int(math.floor((self.k_max - self.k_min) / self.step + 1e-9)) + 1
        # Rounded so grid points print as 1.005, not 1.0050000000000001
        return np.round(self.k_min + self.step * np.arange(count), 12)


@dataclass(frozen=True)
class TaggedRateInput:
    params: SystemParams  # beta is taken from here
    pipeline: Pipeline
    plan: CutoffPlan


class MappedChannel(NamedTuple):
    channel: EffectiveChannel  # (T_eff / k^2, k^2 eps_eff)
    V_A: FloatOrArray  # Claimed modulation variance k^2 V_A


def _untagged(pipeline: Pipeline, k1, k2, k3):
    mod, ch, det = pipeline.stages
    return (
        mod.a.cdf(k1 * mod.a.mean())
        * ch.a.cdf(k2 * ch.a.mean())
        * det.a.cdf(k3 * det.a.mean())
    )


def untagged_probability(pipeline: Pipeline, plan: CutoffPlan) -> float:
    """p0 = P(a_m <= k1 mean(a_m)) P(a_c <= k2 mean(a_c)) P(a_d <= k3 mean(a_d))."""
    return as_scalar(_untagged(pipeline, plan.k1, plan.k2, plan.k3))


def active_plan(pipeline: Pipeline, plan: CutoffPlan) -> CutoffPlan:
    """Plan with the cutoffs of non-fluctuating stages reset to 1; those need no remapping."""
    mod, ch, det = pipeline.stages
    return CutoffPlan(
        k1=1.0 if mod.a.is_degenerate else plan.k1,
        k2=1.0 if ch.a.is_degenerate else plan.k2,
        k3=1.0 if det.a.is_degenerate else plan.k3,
    )


def mapped_effective_channel(eff: EffectiveParams, plan: CutoffPlan) -> MappedChannel:
    """
    Channel seen by Eve once Alice rescales her data by k = k1 k2 k3.

    The rescaling keeps Bob's variance and the Alice-Bob covariance unchanged:
    V_A' = k^2 V_A, T' = T_eff / k^2, eps' = k^2 eps_eff.
    """
    k2 = np.square(plan.k)
    T_map = eff.T_eff / k2
    if not np.all((T_map > 0) & (T_map <= 1)):
        raise NumericalDomainError(f"Mapped transmittance left (0, 1]: {T_map}")
    channel = EffectiveChannel(T=as_scalar(T_map), eps=as_scalar(k2 * eff.eps_eff))
    return MappedChannel(channel=channel, V_A=as_scalar(k2 * eff.V_A))


def _engine_params(params: SystemParams, eff: EffectiveParams, V_A=None) -> SystemParams:
    return SystemParams(
        eta=eff.eta, eps_c=eff.eps_c, v_el=eff.v_el, V_A=eff.V_A if V_A is None else V_A, beta=params.beta
    )


def _measured_terms(params: SystemParams, eff: EffectiveParams) -> Tuple[float, float]:
    # Bob's data and the true correlation fix I_AB and H(X_B)
    base = _engine_params(params, eff)
    measured = EffectiveChannel(T=eff.T_eff, eps=eff.eps_eff)
    return mutual_information(base, measured), bob_entropy(base, measured)


def rate_with_tagging(inp: TaggedRateInput) -> KeyRateBreakdown:
    """
    Tagged key rate beta I_AB - (1 - p0) H(X_B) - p0 chi_BE, signed.

    I_AB and H(X_B) are evaluated on the measured effective channel, chi_BE on
    the mapped channel of the active cutoffs.
    """
    eff = effective_params(inp.pipeline)
    p0 = untagged_probability(inp.pipeline, inp.plan)
    I_AB, H_XB = _measured_terms(inp.params, eff)

    mapped = mapped_effective_channel(eff, active_plan(inp.pipeline, inp.plan))
    chi_BE = holevo_bound(_engine_params(inp.params, eff, V_A=mapped.V_A), mapped.channel)
    return KeyRateBreakdown.compose(
        p0=float(p0), I_AB=float(I_AB), H_XB=float(H_XB), chi_BE=float(chi_BE), beta=float(inp.params.beta)
    )


def optimize_cutoffs(params: SystemParams, pipeline: Pipeline, k_grid: KGrid) -> Tuple[CutoffPlan, KeyRateBreakdown]:
    """
    Exhaustive grid search of the cutoff plan maximizing rate_with_tagging.

    Only stages whose gain fluctuates get a searched axis; the others stay at
    k_min (k2 at 1). Ties go to the smallest k1, then the smallest k3, then k2.

    Returns:
        Tuple[CutoffPlan, KeyRateBreakdown]: argmax plan and its breakdown.
    """
    mod, ch, det = pipeline.stages
    grid = k_grid.values()
    collapsed = grid[:1]

    def axis(stage):
        return collapsed if stage.a.is_degenerate else grid

    k2_axis = np.array([1.0]) if ch.a.is_degenerate else grid
    k1, k3, k2 = (m.ravel() for m in np.meshgrid(axis(mod), axis(det), k2_axis, indexing="ij"))

    eff = effective_params(pipeline)
    I_AB, H_XB = _measured_terms(params, eff)
    p0 = _untagged(pipeline, k1, k2, k3)
    active = active_plan(pipeline, CutoffPlan(k1=k1, k2=k2, k3=k3))
    mapped = mapped_effective_channel(eff, active)
    chi_BE = np.asarray(holevo_bound(_engine_params(params, eff, V_A=mapped.V_A), mapped.channel))
    rate = params.beta * I_AB - (1.0 - p0) * H_XB - p0 * np.broadcast_to(chi_BE, p0.shape)
    if np.any(np.isnan(rate)):
        raise NumericalDomainError("NaN key rate on the cutoff grid")

    best = int(np.argmax(rate))
    plan = CutoffPlan(k1=float(k1[best]), k2=float(k2[best]), k3=float(k3[best]))
    breakdown = rate_with_tagging(TaggedRateInput(params=params, pipeline=pipeline, plan=plan))
    cvtag_logger.debug(f"Cutoff search over {rate.size} plans: best {plan} rate={breakdown.rate:.6g}")
    return plan, breakdown
