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

import io

import pytest
from rich.console import Console

from cvtag.pipeline import read_sweep_csv
from cvtag.pipeline.entry import EXIT_CONFIG_ERROR, EXIT_NUMERICAL_ERROR, EXIT_OK, cli_main
from cvtag.pipeline.sweep import CSV_HEADER

IDENTITY = ["--eta", "1", "--eps-c", "0", "--v-el", "0", "--beta", "1", "--v1", "0", "--v2", "0", "--distance", "0"]


def run(argv):
    buf = io.StringIO()
    code = cli_main(argv, console=Console(file=buf, width=160))
    return code, buf.getvalue()


class TestRateCommands:
    def test_identity_reduces_to_mutual_information(self):
        code, text = run(["rate", *IDENTITY, "--k1", "1", "--k3", "1"])
        assert code == EXIT_OK
        # 1/2 log2(1 + V_A) with V_A = 18
        assert "2.123963" in text

    def test_optimize(self):
        code, text = run(["optimize", "--preset", "table1", "--distance", "1", "--k-step", "0.05"])
        assert code == EXIT_OK
        assert "Optimal cutoffs at 1 km" in text

    def test_rate_without_plan_optimizes(self):
        code, text = run(["rate", "--preset", "table3", "--distance", "10", "--k-step", "0.05"])
        assert code == EXIT_OK
        assert "rate [bit/use]" in text

    def test_flat_config_file(self, tmp_path):
        conf = tmp_path / "identity.conf"
        conf.write_text("eta = 1\neps-c = 0\nv-el = 0\nbeta = 100   # percent\nv1 = 0\nv2 = 0\nk1 = 1\n")
        code, text = run(["rate", "--config", str(conf)])
        assert code == EXIT_OK
        assert "2.123963" in text


class TestSweepCommand:
    ARGS = ["sweep", "--preset", "table1", "--v1", "0", "--v2", "0", "--lmin", "0", "--lmax", "20", "--lstep", "10"]

    def test_csv_on_stdout(self, capsys):
        code, _ = run(self.ARGS)
        lines = capsys.readouterr().out.splitlines()
        assert code == EXIT_OK
        assert lines[0] == ",".join(CSV_HEADER)
        assert [line.split(",")[0] for line in lines[1:]] == ["0", "10", "20"]

    def test_csv_to_file(self, tmp_path, capsys):
        out = tmp_path / "sweep.csv"
        code, _ = run([*self.ARGS, "--out", str(out)])
        assert code == EXIT_OK
        assert capsys.readouterr().out == ""
        assert len(read_sweep_csv(str(out))) == 3


class TestOtherCommands:
    def test_maxdist_reports_cap(self):
        code, text = run(["maxdist", "--preset", "table3", "--v1", "0", "--v2", "0", "--max-distance-km", "50"])
        assert code == EXIT_OK
        assert "50.0" in text

    def test_mc_check(self):
        code, text = run(["mc-check", "--preset", "table1", "--distance", "10", "--samples", "20000", "--seed", "7"])
        assert code == EXIT_OK
        assert "Monte-Carlo check (20000 samples)" in text
        assert "Effective channel" in text

    def test_dv_gllp(self):
        code, text = run(["dv", "--p-tagged", "0.1", "--s", "1000", "--delta", "0.05"])
        assert code == EXIT_OK
        assert "642.24" in text

    def test_dv_wcp(self):
        code, text = run(["dv", "--q1", "0.1", "--e-phase", "0.05", "--qu", "0.12", "--eu", "0.03"])
        assert code == EXIT_OK
        assert "0.0443" in text


class TestExitCodes:
    @pytest.mark.parametrize(
        "argv",
        [
            ["rate", "--preset", "table9"],
            ["rate", "--v1", "-0.1"],
            ["rate", "--config", "/nonexistent/cvtag.json"],
            ["rate", "--k-min", "1.2", "--k-max", "1.1"],
            ["--log-level", "LOUD", "rate"],
            ["dv", "--p-tagged", "0.1"],
            ["dv"],
            ["nonsense"],
        ],
    )
    def test_configuration_errors(self, argv):
        assert run(argv)[0] == EXIT_CONFIG_ERROR

    def test_noise_on_unit_efficiency_detector(self):
        code, _ = run(["rate", "--eta", "1", "--v-el", "0.02", "--k1", "1", "--k3", "1"])
        assert code == EXIT_NUMERICAL_ERROR

    def test_bad_thread_count_in_environment(self, monkeypatch):
        monkeypatch.setenv("CVTAG_THREADS", "abc")
        assert run(["rate", "--preset", "table1", "--k-step", "0.05"])[0] == EXIT_CONFIG_ERROR

    def test_unwritable_sweep_output(self, tmp_path):
        out = tmp_path / "missing" / "sweep.csv"
        argv = ["sweep", "--v1", "0", "--v2", "0", "--lmax", "10", "--lstep", "10", "--out", str(out)]
        assert run(argv)[0] == EXIT_CONFIG_ERROR


class TestReportLabels:
    def test_breakdown_units(self):
        _, text = run(["rate", *IDENTITY, "--k1", "1", "--k3", "1"])
        for label in ("I_AB [bit]", "H_XB [bit]", "chi_BE [bit]", "rate [bit/use]"):
            assert label in text

    def test_monte_carlo_gain_label(self):
        _, text = run(["mc-check", "--preset", "table1", "--distance", "10", "--samples", "5000"])
        assert "E[x_o|x_i]/x_i" in text
        assert "Var(x_o)" in text

    def test_secure_distance_header(self):
        _, text = run(["maxdist", "--preset", "table3", "--v1", "0", "--v2", "0", "--max-distance-km", "20"])
        assert "distance [km]" in text
