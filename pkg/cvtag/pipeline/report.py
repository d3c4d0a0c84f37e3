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

from rich.markup import escape
from rich.table import Table

from cvtag.common import KeyRateBreakdown
from cvtag.model.imperfection import EffectiveParams, MonteCarloReport
from cvtag.model.tagging import CutoffPlan

from .sweep import SecureDistance


def _fmt(value: float) -> str:
    return "{:.9g}".format(value)


def breakdown_table(plan: CutoffPlan, breakdown: KeyRateBreakdown, title: str) -> Table:
    table = Table(title=title)
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for name in ("k1", "k2", "k3"):
        table.add_row(name, _fmt(getattr(plan, name)))
    table.add_row("p0", _fmt(breakdown.p0))
    table.add_row("beta", _fmt(breakdown.beta))
    table.add_row(escape("I_AB [bit]"), _fmt(breakdown.I_AB))
    table.add_row(escape("H_XB [bit]"), _fmt(breakdown.H_XB))
    table.add_row(escape("chi_BE [bit]"), _fmt(breakdown.chi_BE))
    table.add_row(escape("rate [bit/use]"), _fmt(breakdown.rate))
    return table


def effective_table(eff: EffectiveParams, title: str = "Effective channel") -> Table:
    table = Table(title=title)
    table.add_column("quantity")
    table.add_column("value", justify="right")
    for name in ("T_c", "eps_c", "T_eff", "eps_eff", "eta", "v_el", "V1", "V2", "V_A"):
        table.add_row(name, _fmt(getattr(eff, name)))
    return table


def monte_carlo_table(report: MonteCarloReport, n_sigma: float) -> Table:
    table = Table(title=f"Monte-Carlo check ({report.n_samples} samples)")
    for column in ("quantity", "analytic", "empirical", "std err", "|z|"):
        table.add_column(column, justify="left" if column == "quantity" else "right")
    # Labels are escaped; rich would read "[x_o|x_i]" as a markup tag
    table.add_row(
        escape("E[x_o|x_i]/x_i"),
        _fmt(report.analytic_gain),
        _fmt(report.empirical_gain),
        _fmt(report.gain_se),
        f"{report.gain_z:.2f}",
    )
    table.add_row(
        "Var(x_o)",
        _fmt(report.analytic_variance),
        _fmt(report.empirical_variance),
        _fmt(report.variance_se),
        f"{report.variance_z:.2f}",
    )
    table.caption = f"{'PASS' if report.passed(n_sigma) else 'FAIL'} at {n_sigma:g} standard errors"
    return table


def secure_distance_table(name: str, result: SecureDistance) -> Table:
    table = Table(title="Maximum secure distance")
    table.add_column("preset")
    table.add_column(escape("distance [km]"), justify="right")
    table.add_column("note")
    table.add_row(escape(name), f"{result.distance_km:.1f}", escape(result.warning or ""))
    return table


def dv_table(rows) -> Table:
    table = Table(title="Discrete-variable tagging")
    table.add_column("formula")
    table.add_column("value", justify="right")
    for name, value in rows:
        table.add_row(escape(name), _fmt(value))
    return table
