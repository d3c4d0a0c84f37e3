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

import json

import pytest

from cvtag.common import ChannelConfig, ConfigurationError, CVTagConfig, RuntimeConfig, env_int
from cvtag.pipeline import CVTagPipeline, resolve_preset


class TestCVTagConfig:
    def test_defaults(self):
        config = CVTagConfig()
        assert config.channel_config.preset == "table1"
        assert config.runtime_config.k_step == 0.005
        assert config.engine_config.threads == 0

    def test_json_round_trip(self, tmp_path):
        config = CVTagConfig().apply_overrides({"v1": 0.004, "distance": 12.5, "out": "rows.csv"})
        path = str(tmp_path / "nested" / "config.json")
        config.to_json(path)
        assert CVTagConfig.from_json(path) == config

    def test_json_partial_sections(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"channel_config": {"preset": "table3"}}))
        config = CVTagConfig.from_file(str(path))
        assert config.channel_config.preset == "table3"
        assert config.runtime_config == RuntimeConfig()

    def test_json_unknown_field(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"channel_config": {"preset": "table1", "gain": 2}}))
        with pytest.raises(ConfigurationError, match="gain"):
            CVTagConfig.from_json(str(path))

    def test_json_unknown_section(self, tmp_path):
        path = tmp_path / "config.json"
        path.write_text(json.dumps({"model_config": {}}))
        with pytest.raises(ConfigurationError):
            CVTagConfig.from_json(str(path))

    def test_flat_file(self, tmp_path):
        path = tmp_path / "run.conf"
        path.write_text("# comment\npreset = table3\n\n--k-max = 1.2\nva = 10   # modulation\nstrict-paper = yes\nk1 = none\n")
        config = CVTagConfig.from_file(str(path))
        assert config.channel_config.preset == "table3"
        assert config.channel_config.V_A == 10.0
        assert config.channel_config.strict_paper is True
        assert config.runtime_config.k_max == 1.2
        assert config.runtime_config.k1 is None

    def test_flat_file_errors_name_the_file(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("samples = many\n")
        with pytest.raises(ConfigurationError, match="bad.conf"):
            CVTagConfig.from_flat(str(path))

    def test_flat_line_without_value(self, tmp_path):
        path = tmp_path / "bad.conf"
        path.write_text("lmax 40\n")
        with pytest.raises(ConfigurationError, match="bad.conf:1"):
            CVTagConfig.from_flat(str(path))

    def test_overrides_skip_none(self):
        config = CVTagConfig().apply_overrides({"eta": None, "seed": 7})
        assert config.channel_config.eta is None
        assert config.runtime_config.seed == 7

    def test_unknown_override(self):
        with pytest.raises(ConfigurationError):
            CVTagConfig().apply_overrides({"temperature": 1.0})

    @pytest.mark.parametrize(
        "overrides",
        [{"distribution": "cauchy"}, {"v2": -1e-3}, {"lmin": 50.0, "lmax": 10.0}, {"lstep": 0.0}, {"samples": 0}],
    )
    def test_validation(self, overrides):
        with pytest.raises(ConfigurationError):
            CVTagConfig().apply_overrides(overrides)

    def test_threads_from_environment(self, monkeypatch):
        monkeypatch.setenv("CVTAG_THREADS", "4")
        assert CVTagConfig().resolved_threads() == 4
        assert CVTagConfig().apply_overrides({"threads": 2}).resolved_threads() == 2


class TestResolvePreset:
    def test_overrides_applied(self):
        preset = resolve_preset(ChannelConfig(preset="table1", eta=0.5, beta=95.0, v1=0.0, loss_db_per_km=0.16))
        assert preset.params.eta == 0.5
        assert preset.params.beta == pytest.approx(0.95)
        assert preset.params.V_A == 18.0
        assert (preset.V1, preset.V2) == (0.0, 0.0015)
        assert preset.fiber_loss_db_per_km == 0.16

    def test_fractional_beta_kept(self):
        assert resolve_preset(ChannelConfig(preset="table3", beta=0.9)).params.beta == 0.9

    def test_unknown_preset(self):
        with pytest.raises(ConfigurationError):
            resolve_preset(ChannelConfig(preset="table2"))

    def test_pipeline_from_config(self):
        config = CVTagConfig().apply_overrides({"k1": 1.1, "k_step": 0.05})
        pipeline = CVTagPipeline(config)
        assert (pipeline.plan.k1, pipeline.plan.k3) == (1.1, 1.0)
        assert len(pipeline.k_grid.values()) == 7


class TestEnvInt:
    def test_unset_and_blank_give_default(self, monkeypatch):
        monkeypatch.delenv("CVTAG_TEST_INT", raising=False)
        assert env_int("CVTAG_TEST_INT", 3) == 3
        monkeypatch.setenv("CVTAG_TEST_INT", "  ")
        assert env_int("CVTAG_TEST_INT", 3) == 3

    def test_non_integer_names_the_variable(self, monkeypatch):
        monkeypatch.setenv("CVTAG_THREADS", "abc")
        with pytest.raises(ConfigurationError, match="CVTAG_THREADS"):
            CVTagConfig().resolved_threads()
