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

import dataclasses
import math

import numpy as np
import pytest

from cvtag.common import ConfigurationError, EffectiveChannel, SystemParams
from cvtag.model.imperfection import EffectiveParams, Pipeline, effective_params
from cvtag.model.imperfection import detection_stage, lossy_channel_stage, modulation_stage
from cvtag.model.keyrate import holevo_bound, perfect_rate
from cvtag.model.tagging import (
    CutoffPlan,
    KGrid,
    TaggedRateInput,
    active_plan,
    mapped_effective_channel,
    optimize_cutoffs,
    rate_with_tagging,
    untagged_probability,
)
from cvtag.pipeline import transmittance_from_distance


def build_pipeline(params, L_km, V1=0.0, V2=0.0):
    return Pipeline(
        modulation=modulation_stage(V1),
        channel=lossy_channel_stage(transmittance_from_distance(L_km), params.eps_c),
        detection=detection_stage(params.eta, params.v_el, V2),
        V_A=params.V_A,
    )


def tagged_rate(params, pipeline, k1=1.0, k3=1.0):
    return rate_with_tagging(TaggedRateInput(params=params, pipeline=pipeline, plan=CutoffPlan(k1=k1, k3=k3))).rate


def synthetic_effective(T_eff, eps_eff, V_A=18.0):
    return EffectiveParams(
        T_eff=T_eff,
        eps_eff=eps_eff,
        eta=0.6,
        v_el=0.02,
        T_c=T_eff,
        eps_c=eps_eff,
        V1=0.0,
        V2=0.0,
        V_A=V_A,
        mean_gain=math.sqrt(T_eff * 0.6),
        output_variance=1.0,
    )


class TestCutoffPlan:
    def test_product(self):
        assert CutoffPlan(k1=1.1, k2=1.0, k3=1.2).k == pytest.approx(1.32)

    def test_below_one_rejected(self):
        with pytest.raises(ConfigurationError):
            CutoffPlan(k1=0.99)

    def test_grid_values(self):
        values = KGrid(1.0, 1.3, 0.005).values()
        assert len(values) == 61
        assert values[0] == 1.0 and values[-1] == 1.3
        assert values[1] == 1.005

    def test_empty_grid_rejected(self):
        with pytest.raises(ConfigurationError):
            KGrid(k_min=1.2, k_max=1.1)

    def test_k_min_below_one_rejected(self):
        with pytest.raises(ConfigurationError):
            KGrid(k_min=0.9)


class TestUntaggedProbability:
    def test_symmetric_laws_at_unit_cutoffs(self, table1, pipeline_at):
        pipeline = pipeline_at(table1, 20.0)
        assert untagged_probability(pipeline, CutoffPlan()) == pytest.approx(0.25)

    def test_one_standard_deviation_cutoff(self, table1_params):
        # sd(a_m) = 0.05, so k1 = 1.05 sits one standard deviation above the mean
        pipeline = build_pipeline(table1_params, 20.0, V1=0.0025)
        assert untagged_probability(pipeline, CutoffPlan(k1=1.05)) == pytest.approx(0.841345, abs=1e-6)

    def test_steady_pipeline_is_untagged(self, table1_params):
        pipeline = build_pipeline(table1_params, 20.0)
        assert untagged_probability(pipeline, CutoffPlan()) == 1.0
        assert untagged_probability(pipeline, CutoffPlan(k1=1.3, k3=1.1)) == 1.0

    def test_non_decreasing_in_cutoff(self, table1, pipeline_at):
        pipeline = pipeline_at(table1, 20.0)
        grid = KGrid(1.0, 1.3, 0.01).values()
        p0 = [untagged_probability(pipeline, CutoffPlan(k1=k, k3=k)) for k in grid]
        assert np.all(np.diff(p0) >= 0)
        assert p0[-1] == pytest.approx(1.0, abs=1e-6)


class TestMappedChannel:
    def test_k_two(self):
        mapped = mapped_effective_channel(synthetic_effective(0.4, 0.01), CutoffPlan(k1=2.0))
        assert mapped.V_A == pytest.approx(72.0)
        assert mapped.channel.T == pytest.approx(0.1)
        assert mapped.channel.eps == pytest.approx(0.04)

    def test_unit_plan_is_identity(self):
        eff = synthetic_effective(0.3, 0.05)
        mapped = mapped_effective_channel(eff, CutoffPlan())
        assert (mapped.channel.T, mapped.channel.eps, mapped.V_A) == (0.3, 0.05, 18.0)

    def test_keeps_signal_covariance(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            eff = synthetic_effective(rng.uniform(0.01, 1.0), rng.uniform(0.0, 0.1), V_A=rng.uniform(2.0, 40.0))
            plan = CutoffPlan(k1=rng.uniform(1.0, 1.3), k3=rng.uniform(1.0, 1.3))
            mapped = mapped_effective_channel(eff, plan)
            assert mapped.channel.T * mapped.V_A == pytest.approx(eff.T_eff * eff.V_A, rel=1e-12)
            assert mapped.channel.T * mapped.channel.eps == pytest.approx(eff.T_eff * eff.eps_eff, rel=1e-12)

    def test_mapping_never_lowers_holevo_bound(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            eff = synthetic_effective(rng.uniform(0.01, 0.9), rng.uniform(0.0, 0.08), V_A=rng.uniform(2.0, 30.0))
            params = SystemParams(eta=eff.eta, eps_c=eff.eps_c, v_el=eff.v_el, V_A=eff.V_A, beta=0.95)
            plan = CutoffPlan(k1=rng.uniform(1.0, 1.3), k3=rng.uniform(1.0, 1.3))
            mapped = mapped_effective_channel(eff, plan)
            chi_plain = holevo_bound(params, EffectiveChannel(T=eff.T_eff, eps=eff.eps_eff))
            chi_mapped = holevo_bound(dataclasses.replace(params, V_A=mapped.V_A), mapped.channel)
            assert chi_mapped >= chi_plain - 1e-12

    def test_active_plan_drops_steady_stages(self, table1_params):
        pipeline = build_pipeline(table1_params, 20.0, V1=0.0025)
        plan = active_plan(pipeline, CutoffPlan(k1=1.1, k2=1.2, k3=1.3))
        assert (plan.k1, plan.k2, plan.k3) == (1.1, 1.0, 1.0)


class TestRateWithTagging:
    def test_steady_pipeline_matches_perfect_rate(self, table1_params):
        pipeline = build_pipeline(table1_params, 30.0)
        eff = effective_params(pipeline)
        engine = SystemParams(eta=eff.eta, eps_c=eff.eps_c, v_el=eff.v_el, V_A=eff.V_A, beta=table1_params.beta)
        expected = perfect_rate(engine, EffectiveChannel(T=eff.T_eff, eps=eff.eps_eff))
        for k1, k3 in [(1.0, 1.0), (1.2, 1.05), (1.3, 1.3)]:
            assert tagged_rate(table1_params, pipeline, k1, k3) == expected

    def test_steady_pipeline_matches_untagged_channel(self, table1_params):
        pipeline = build_pipeline(table1_params, 30.0)
        expected = perfect_rate(table1_params, EffectiveChannel(T=transmittance_from_distance(30.0), eps=0.02))
        assert tagged_rate(table1_params, pipeline, 1.15, 1.1) == pytest.approx(expected, rel=1e-9)

    def test_breakdown_composition(self, table1, pipeline_at):
        inp = TaggedRateInput(params=table1.params, pipeline=pipeline_at(table1, 10.0), plan=CutoffPlan(k1=1.1, k3=1.1))
        b = rate_with_tagging(inp)
        assert 0 < b.p0 < 1
        assert b.rate == pytest.approx(b.beta * b.I_AB - (1 - b.p0) * b.H_XB - b.p0 * b.chi_BE)

    def test_non_increasing_in_fluctuations(self, table1_params, table3):
        rng = np.random.default_rng(21)
        for _ in range(200):
            params = table1_params if rng.random() < 0.5 else table3.params
            L = rng.uniform(0.5, 100.0)
            k1, k3 = rng.uniform(1.0, 1.3, size=2)
            V1, V2 = rng.uniform(0.0001, 0.005), rng.uniform(0.0001, 0.0017)
            base = tagged_rate(params, build_pipeline(params, L, V1, V2), k1, k3)
            more_v1 = tagged_rate(params, build_pipeline(params, L, V1 + 0.0005, V2), k1, k3)
            more_v2 = tagged_rate(params, build_pipeline(params, L, V1, V2 + 0.0003), k1, k3)
            assert more_v1 <= base + 1e-12
            assert more_v2 <= base + 1e-12

    def test_fluctuations_cost_rate(self, table1, pipeline_at):
        steady = build_pipeline(table1.params, 10.0)
        assert tagged_rate(table1.params, pipeline_at(table1, 10.0)) < tagged_rate(table1.params, steady)


class TestOptimizeCutoffs:
    def test_matches_exhaustive_scan(self, table1_params):
        rng = np.random.default_rng(31)
        k_grid = KGrid(1.0, 1.2, 0.01)
        grid = k_grid.values()
        for _ in range(10):
            pipeline = build_pipeline(
                table1_params,
                rng.uniform(1.0, 40.0),
                V1=rng.uniform(0.0005, 0.004),
                V2=rng.uniform(0.0005, 0.0019),
            )
            plan, breakdown = optimize_cutoffs(table1_params, pipeline, k_grid)
            scanned = max(tagged_rate(table1_params, pipeline, k1, k3) for k1 in grid for k3 in grid)
            assert breakdown.rate == pytest.approx(scanned, abs=1e-12)
            assert plan.k1 in grid and plan.k3 in grid

    def test_no_worse_than_unit_cutoffs(self, table1, pipeline_at):
        pipeline = pipeline_at(table1, 5.0)
        _, breakdown = optimize_cutoffs(table1.params, pipeline, KGrid())
        assert breakdown.rate >= tagged_rate(table1.params, pipeline) - 1e-12

    def test_steady_pipeline_ties_to_smallest_cutoffs(self, table1_params):
        pipeline = build_pipeline(table1_params, 20.0)
        plan, breakdown = optimize_cutoffs(table1_params, pipeline, KGrid(1.05, 1.3, 0.05))
        assert (plan.k1, plan.k2, plan.k3) == (1.05, 1.0, 1.05)
        assert breakdown.p0 == 1.0

    def test_single_fluctuating_stage_searches_one_axis(self, table1_params):
        pipeline = build_pipeline(table1_params, 10.0, V1=0.0025)
        plan, _ = optimize_cutoffs(table1_params, pipeline, KGrid(1.0, 1.3, 0.01))
        assert plan.k3 == 1.0
        assert plan.k1 >= 1.0
