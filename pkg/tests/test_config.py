"""
Tests for run configuration loading and validation.
"""

import pytest

from src import config
from src.config import ConfigManager
from src.helpers.errors import ConfigError


class TestLoading:
    def test_defaults_merged(self, configs):
        run = ConfigManager(data=configs["fibonacci"]).run_config()
        assert run.name == "fibonacci"
        assert run.source == "substitution"
        assert run.metric == {"mode": "tiling", "d": 1}
        assert run.dim["depth"] == 40
        assert run.spectrum["mode"] == "enumerate"
        assert run.verify["k_values"] == [1, 2, 3]
        assert run.seed == 0

    def test_partial_section_keeps_defaults(self, configs):
        data = configs["fibonacci"]
        data["dim"] = {"depth": 20}
        run = ConfigManager(data=data).run_config()
        assert run.dim["depth"] == 20
        assert run.dim["epsilon"] == 5e-3

    def test_from_file(self, configs, write_config):
        path = write_config(configs["one_vertex"])
        manager = ConfigManager(path)
        assert manager.get("metric", "alpha") == pytest.approx(1 / 3)
        assert manager.get("embed", "n", 7) == 7

    def test_name_from_file(self, configs, write_config):
        data = configs["thue_morse"]
        del data["name"]
        path = write_config(data, "tm.json")
        assert ConfigManager(path).run_config().name == "tm"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            ConfigManager(str(tmp_path / "absent.json"))

    def test_no_config(self):
        with pytest.raises(ConfigError):
            ConfigManager()

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "metric": {"mode": "regular",}\n}')
        with pytest.raises(ConfigError, match="line 2"):
            ConfigManager(str(path))

    def test_top_level_array(self, tmp_path):
        path = tmp_path / "list.json"
        path.write_text("[1, 2]")
        with pytest.raises(ConfigError, match="JSON object"):
            ConfigManager(str(path))


class TestValidation:
    def test_needs_one_source(self, configs):
        data = configs["fibonacci"]
        data["diagram"] = {"vertices": ["a"], "adjacency": [[2]]}
        with pytest.raises(ConfigError, match="exactly one"):
            ConfigManager(data=data)
        del data["diagram"], data["substitution"]
        with pytest.raises(ConfigError, match="none"):
            ConfigManager(data=data)

    def test_metric_mode_required(self, configs):
        data = configs["fibonacci"]
        data["metric"] = "tiling"
        with pytest.raises(ConfigError, match="mode"):
            ConfigManager(data=data)

    @pytest.mark.parametrize("section,key,value", [
        ("dim", "depth", 1),
        ("dim", "epsilon", 0),
        ("embed", "n", 0),
        ("embed", "samples", "many"),
        ("spectrum", "mode", "exact"),
        ("spectrum", "budget", True),
        ("verify", "k_values", []),
        ("verify", "k_values", [1, 0]),
    ])
    def test_ranges(self, configs, section, key, value):
        manager = ConfigManager(data=configs["fibonacci"])
        manager.set(section, key, value)
        with pytest.raises(ConfigError, match=f"{section}.{key}"):
            manager.run_config()

    def test_negative_seed(self, configs):
        data = configs["fibonacci"]
        data["seed"] = -1
        with pytest.raises(ConfigError, match="seed"):
            ConfigManager(data=data).run_config()


class TestOverrides:
    def test_none_leaves_value(self, configs):
        manager = ConfigManager(data=configs["fibonacci"])
        manager.set("embed", "n", None)
        assert manager.get("embed", "n") is None
        manager.set("embed", "n", 3)
        assert manager.run_config().embed["n"] == 3

    def test_seed_override(self, configs):
        manager = ConfigManager(data=configs["fibonacci"])
        manager.set_seed(None)
        assert manager.seed == 0
        manager.set_seed(11)
        assert manager.run_config().seed == 11


class TestEnvironment:
    def test_enum_cap(self, monkeypatch):
        monkeypatch.setenv("CANTORLAB_ENUM_CAP", "123")
        assert config.enum_cap() == 123

    def test_enum_cap_invalid(self, monkeypatch):
        monkeypatch.setenv("CANTORLAB_ENUM_CAP", "lots")
        with pytest.raises(ConfigError):
            config.enum_cap()
        monkeypatch.setenv("CANTORLAB_ENUM_CAP", "0")
        with pytest.raises(ConfigError):
            config.enum_cap()

    def test_enum_cap_default(self, monkeypatch):
        monkeypatch.delenv("CANTORLAB_ENUM_CAP", raising=False)
        assert config.enum_cap() == config.ENUM_CAP
