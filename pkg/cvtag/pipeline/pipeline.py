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

from typing import List, Optional, Tuple

from cvtag.common import CVTagConfig, KeyRateBreakdown, cvtag_logger, event_path_timer
from cvtag.model.imperfection import EffectiveParams, MonteCarloReport, Pipeline, effective_params, monte_carlo_check
from cvtag.model.tagging import CutoffPlan, KGrid, TaggedRateInput, optimize_cutoffs, rate_with_tagging

from .presets import build_preset_pipeline, resolve_preset
from .sweep import (
    SecureDistance,
    SweepRow,
    distance_sweep,
    fixed_plan,
    max_secure_distance,
    transmittance_from_distance,
    write_sweep_csv,
)


class CVTagPipeline:
    def __init__(self, config: Optional[CVTagConfig] = None):
        self.config = config or CVTagConfig()
        channel, runtime = self.config.channel_config, self.config.runtime_config
        self.preset = resolve_preset(channel)
        self.k_grid = KGrid(k_min=runtime.k_min, k_max=runtime.k_max, step=runtime.k_step)
        self.plan = fixed_plan(runtime.k1, runtime.k3)
        self.threads = self.config.resolved_threads()
        event_path_timer().reset()
        event_path_timer().record("CVTagPipeline init")
        cvtag_logger.debug(self.config)

    @property
    def law(self) -> str:
        return self.config.channel_config.distribution

    @property
    def strict_paper(self) -> bool:
        return self.config.channel_config.strict_paper

    def pipeline_at(self, L_km: float) -> Pipeline:
        T_c = transmittance_from_distance(L_km, self.preset.fiber_loss_db_per_km)
        return build_preset_pipeline(self.preset, T_c, law=self.law, strict_paper=self.strict_paper)

    def run_rate(self) -> Tuple[CutoffPlan, KeyRateBreakdown]:
        """Rate at the configured distance, at the fixed plan if one was given."""
        if self.plan is None:
            return self.run_optimize()
        pipeline = self.pipeline_at(self.config.runtime_config.distance)
        breakdown = rate_with_tagging(TaggedRateInput(params=self.preset.params, pipeline=pipeline, plan=self.plan))
        event_path_timer().record("rate")
        return self.plan, breakdown

    def run_optimize(self) -> Tuple[CutoffPlan, KeyRateBreakdown]:
        pipeline = self.pipeline_at(self.config.runtime_config.distance)
        plan, breakdown = optimize_cutoffs(self.preset.params, pipeline, self.k_grid)
        event_path_timer().record("optimize")
        return plan, breakdown

    def run_effective_params(self) -> EffectiveParams:
        return effective_params(self.pipeline_at(self.config.runtime_config.distance))

    def run_sweep(self, out=None) -> List[SweepRow]:
        """Distance sweep written as CSV to `out`, the configured path, or stdout."""
        runtime = self.config.runtime_config
        rows = distance_sweep(
            self.preset,
            runtime.lmin,
            runtime.lmax,
            runtime.lstep,
            self.k_grid,
            law=self.law,
            strict_paper=self.strict_paper,
            plan=self.plan,
            threads=self.threads,
        )
        event_path_timer().record("sweep")
        write_sweep_csv(rows, out if out is not None else runtime.out)
        positive = [row for row in rows if row.rate_signed > 0]
        if positive:
            cvtag_logger.info(f"Last positive-rate row at {positive[-1].distance_km:g} km of {len(rows)} rows")
        else:
            cvtag_logger.warning("No distance in the sweep has a positive key rate")
        return rows

    def run_maxdist(self) -> SecureDistance:
        runtime = self.config.runtime_config
        result = max_secure_distance(
            self.preset,
            self.k_grid,
            law=self.law,
            strict_paper=self.strict_paper,
            plan=self.plan,
            max_distance_km=runtime.max_distance_km,
            search_step_km=runtime.search_step_km,
        )
        event_path_timer().record("maxdist")
        return result

    def run_mc_check(self) -> MonteCarloReport:
        runtime, engine = self.config.runtime_config, self.config.engine_config
        report = monte_carlo_check(
            self.pipeline_at(runtime.distance),
            runtime.samples,
            seed=runtime.seed,
            shard_size=engine.shard_size,
            threads=self.threads,
        )
        event_path_timer().record("mc-check")
        return report
