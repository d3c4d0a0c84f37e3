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

import csv
import sys
from dataclasses import dataclass
from typing import List, Optional, TextIO, Union

import numpy as np

from cvtag.common import ConfigurationError, CVTagError, NumericalDomainError, cvtag_logger
from cvtag.infra.parallelism import ordered_map
from cvtag.model.tagging import CutoffPlan, KGrid, TaggedRateInput, optimize_cutoffs, rate_with_tagging

from .presets import Preset, build_preset_pipeline

CSV_HEADER = ("distance_km", "T_c", "p0", "k1", "k3", "I_AB", "H_XB", "chi_BE", "rate_signed", "rate")
# Slack for rounding when checking that the rate falls with distance
MONOTONE_RTOL = 1e-9


def transmittance_from_distance(L_km: float, loss_db_per_km: float = 0.2) -> float:
    if L_km < 0:
        raise ConfigurationError(f"Distance must be >= 0, got {L_km}")
    if not loss_db_per_km > 0:
        raise ConfigurationError(f"loss_db_per_km must be > 0, got {loss_db_per_km}")
    return 10.0 ** (-loss_db_per_km * L_km / 10.0)


@dataclass(frozen=True)
class SweepRow:
    distance_km: float
    T_c: float
    p0: float
    k1: float
    k3: float
    I_AB: float
    H_XB: float
    chi_BE: float
    rate_signed: float

    @property
    def rate(self) -> float:
        return max(self.rate_signed, 0.0)

    def as_csv_fields(self) -> List[str]:
        values = (
            self.distance_km, self.T_c, self.p0, self.k1, self.k3,
            self.I_AB, self.H_XB, self.chi_BE, self.rate_signed, self.rate,
        )
        return ["{:.12g}".format(v) for v in values]


def fixed_plan(k1: Optional[float], k3: Optional[float]) -> Optional[CutoffPlan]:
    """Plan pinned by the caller, or None to optimize. A missing coefficient defaults to 1."""
    if k1 is None and k3 is None:
        return None
    return CutoffPlan(k1=1.0 if k1 is None else k1, k3=1.0 if k3 is None else k3)


def evaluate_distance(
    preset: Preset,
    L_km: float,
    k_grid: KGrid,
    law: str = "gaussian",
    strict_paper: bool = False,
    plan: Optional[CutoffPlan] = None,
) -> SweepRow:
    """Tagged rate at one fiber length, optimizing the cutoffs unless `plan` is given."""
    try:
        T_c = transmittance_from_distance(L_km, preset.fiber_loss_db_per_km)
        pipeline = build_preset_pipeline(preset, T_c, law=law, strict_paper=strict_paper)
        if plan is None:
            plan, breakdown = optimize_cutoffs(preset.params, pipeline, k_grid)
        else:
            breakdown = rate_with_tagging(TaggedRateInput(params=preset.params, pipeline=pipeline, plan=plan))
    except CVTagError as e:
        raise type(e)(f"At {L_km:g} km: {e}") from e
    return SweepRow(
        distance_km=float(L_km),
        T_c=T_c,
        p0=breakdown.p0,
        k1=plan.k1,
        k3=plan.k3,
        I_AB=breakdown.I_AB,
        H_XB=breakdown.H_XB,
        chi_BE=breakdown.chi_BE,
        rate_signed=breakdown.rate,
    )


def sweep_distances(L_min: float, L_max: float, L_step: float) -> np.ndarray:
    if L_min < 0 or L_min > L_max:
        raise ConfigurationError(f"Need 0 <= L_min <= L_max, got {L_min}, {L_max}")
    if not L_step > 0:
        raise ConfigurationError(f"L_step must be > 0, got {L_step}")
    count = int(np.floor((L_max - L_min) / L_step + 1e-9)) + 1
    return np.round(L_min + L_step * np.arange(count), 9)


def check_monotone(rows: List[SweepRow]):
    """
    Signed rate must not rise with distance while it is positive.

    Past the zero crossing every term shrinks with T and the optimized negative
    rate creeps back towards 0, so only the positive prefix is checked.
    """
    for prev, row in zip(rows, rows[1:]):
        if prev.rate_signed <= 0:
            break
        if row.rate_signed > prev.rate_signed + MONOTONE_RTOL * abs(prev.rate_signed):
            raise NumericalDomainError(
                f"Key rate increased with distance: {prev.rate_signed:.12g} at {prev.distance_km:g} km "
                f"-> {row.rate_signed:.12g} at {row.distance_km:g} km"
            )


def distance_sweep(
    preset: Preset,
    L_min: float,
    L_max: float,
    L_step: float,
    k_grid: KGrid,
    law: str = "gaussian",
    strict_paper: bool = False,
    plan: Optional[CutoffPlan] = None,
    threads: int = 0,
) -> List[SweepRow]:
    """One row per distance in ascending order, evaluated on a thread pool."""
    distances = sweep_distances(L_min, L_max, L_step)
    rows = ordered_map(
        lambda L: evaluate_distance(preset, float(L), k_grid, law=law, strict_paper=strict_paper, plan=plan),
        distances,
        threads=threads,
        desc="Sweeping distance",
    )
    check_monotone(rows)
    return rows


@dataclass(frozen=True)
class SecureDistance:
    distance_km: float
    warning: Optional[str] = None


def max_secure_distance(
    preset: Preset,
    k_grid: KGrid,
    law: str = "gaussian",
    strict_paper: bool = False,
    plan: Optional[CutoffPlan] = None,
    max_distance_km: float = 400.0,
    search_step_km: float = 5.0,
    tolerance_km: float = 0.1,
) -> SecureDistance:
    """
    Largest distance with a positive optimized rate.

    A ladder of `search_step_km` brackets the first zero crossing, which is then
    bisected down to `tolerance_km`.
    """
    if not (max_distance_km > 0 and search_step_km > 0 and tolerance_km > 0):
        raise ConfigurationError("max_distance_km, search_step_km and tolerance_km must be > 0")

    def signed_rate(L):
        return evaluate_distance(preset, L, k_grid, law=law, strict_paper=strict_paper, plan=plan).rate_signed

    if signed_rate(0.0) <= 0:
        warning = "Key rate is not positive at 0 km"
        cvtag_logger.warning(f"{preset.name}: {warning}")
        return SecureDistance(distance_km=0.0, warning=warning)

    lo, hi = 0.0, None
    ladder = list(np.arange(search_step_km, max_distance_km, search_step_km)) + [max_distance_km]
    for L in ladder:
        if signed_rate(float(L)) <= 0:
            hi = float(L)
            break
        lo = float(L)
    if hi is None:
        warning = f"Key rate still positive at the search cap {max_distance_km:g} km"
        cvtag_logger.warning(f"{preset.name}: {warning}")
        return SecureDistance(distance_km=max_distance_km, warning=warning)

    while hi - lo > tolerance_km:
        mid = 0.5 * (lo + hi)
        if signed_rate(mid) > 0:
            lo = mid
        else:
            hi = mid
    return SecureDistance(distance_km=lo)


def write_sweep_csv(rows: List[SweepRow], out: Union[str, TextIO, None] = None):
    """Write rows to a path, an open text stream, or stdout when `out` is None."""
    if isinstance(out, str):
        try:
            f = open(out, "w", newline="")
        except OSError as e:
            raise ConfigurationError(f"Cannot write sweep CSV {out}: {e}") from e
        with f:
            write_sweep_csv(rows, f)
        return
    writer = csv.writer(out or sys.stdout, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(row.as_csv_fields())


def read_sweep_csv(path: str) -> List[SweepRow]:
    with open(path, "r", newline="") as f:
        reader = csv.DictReader(f)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ConfigurationError(f"{path}: unexpected CSV header {reader.fieldnames}")
        return [SweepRow(**{name: float(record[name]) for name in CSV_HEADER[:-1]}) for record in reader]
