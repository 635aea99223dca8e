"""
Tests for the command-line surface: exit codes, artifacts and determinism.
"""

import json
import os

import pytest
from click.testing import CliRunner

from src.cli import cli


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def invoke(runner, tmp_path):
    """Run cantorlab with a config dict (or path) and an output directory under tmp_path"""

    def run(config, *args, out="out"):
        if isinstance(config, dict):
            path = tmp_path / "run.json"
            path.write_text(json.dumps(config))
            config = str(path)
        out_dir = str(tmp_path / out)
        return runner.invoke(cli, ["--config", config, "--out", out_dir, *args]), out_dir

    return run


def _read(out_dir, name):
    with open(os.path.join(out_dir, name), "rb") as f:
        return f.read()


class TestInfo:
    def test_success(self, invoke, configs):
        result, out = invoke(configs["fibonacci"], "info")
        assert result.exit_code == 0, result.output
        assert json.loads(_read(out, "info.json"))["path_counts"][:4] == [1, 2, 3, 5]
        assert os.path.exists(os.path.join(out, "diagram.json"))

    def test_not_cantor(self, invoke, configs):
        result, out = invoke(configs["identity"], "info")
        assert result.exit_code == 3
        assert os.path.exists(os.path.join(out, "info.json"))

    def test_malformed_config(self, invoke, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"substitution": ')
        result, _ = invoke(str(path), "info")
        assert result.exit_code == 2

    def test_missing_config(self, invoke, tmp_path):
        result, _ = invoke(str(tmp_path / "absent.json"), "info")
        assert result.exit_code == 2

    def test_both_sources(self, invoke, configs):
        data = configs["fibonacci"]
        data["diagram"] = {"vertices": ["a"], "adjacency": [[2]]}
        result, _ = invoke(data, "info")
        assert result.exit_code == 2

    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == 0
        assert "0.1.0" in result.output


class TestDim:
    def test_one_vertex(self, invoke, configs):
        result, out = invoke(configs["one_vertex"], "dim", "--depth", "40", "--epsilon", "0.005")
        assert result.exit_code == 0, result.output
        written = json.loads(_read(out, "dim.json"))
        assert written["s0_closed"] == 0.630929753571
        assert written["epsilon"] == 0.005

    def test_depth_range(self, invoke, configs):
        result, _ = invoke(configs["one_vertex"], "dim", "--depth", "1")
        assert result.exit_code == 2


class TestEmbed:
    def test_plan(self, invoke, configs):
        result, out = invoke(configs["fibonacci"], "embed", "--plan", "--samples", "300", "--depth", "16")
        assert result.exit_code == 0, result.output
        report = json.loads(_read(out, "embed_report.json"))
        assert report["plan"]["k"] == 2
        assert report["lipschitz"]["violations"] == 0

    def test_nothing_to_embed(self, invoke, configs):
        result, _ = invoke(configs["fibonacci"], "embed")
        assert result.exit_code == 2

    def test_below_threshold(self, invoke, configs):
        result, _ = invoke(configs["fibonacci"], "embed", "--n", "1", "--samples", "10")
        assert result.exit_code == 3

    def test_byte_identical_reruns(self, invoke, configs):
        args = ("embed", "--n", "1", "--s", "1.0", "--samples", "200", "--depth", "16")
        first, out_a = invoke(configs["one_vertex"], *args, out="a")
        second, out_b = invoke(configs["one_vertex"], *args, out="b")
        assert first.exit_code == second.exit_code == 0
        for name in ("embed_points.csv", "embed_report.json"):
            assert _read(out_a, name) == _read(out_b, name)

    def test_seed_changes_points(self, invoke, configs):
        args = ("embed", "--n", "1", "--samples", "50", "--depth", "16")
        _, out_a = invoke(configs["one_vertex"], *args, out="a")
        _, out_b = invoke(configs["one_vertex"], "--seed", "5", *args, out="b")
        assert _read(out_a, "embed_points.csv") != _read(out_b, "embed_points.csv")


class TestSpectrum:
    def test_fibonacci(self, invoke, configs):
        result, out = invoke(configs["fibonacci"], "spectrum", "--s", "5.4", "--depth", "6")
        assert result.exit_code == 0, result.output
        header = _read(out, "eigenvalues.csv").decode().splitlines()[0]
        assert header == "word,depth,eigenvalue,multiplicity"
        assert json.loads(_read(out, "spectrum_report.json"))["tech"]["passed"] is True

    def test_missing_s(self, invoke, configs):
        result, _ = invoke(configs["thue_morse"], "spectrum")
        assert result.exit_code == 2

    def test_thue_morse_tech_failure(self, invoke, configs):
        result, out = invoke(configs["thue_morse"], "spectrum", "--s", "5.0", "--depth", "4")
        assert result.exit_code == 3
        assert os.path.exists(os.path.join(out, "spectrum_report.json"))

    def test_budget(self, invoke, configs):
        result, _ = invoke(configs["fibonacci"], "spectrum", "--s", "5.4", "--depth", "10", "--budget", "10")
        assert result.exit_code == 3

    def test_bad_mode(self, invoke, configs):
        result, _ = invoke(configs["fibonacci"], "spectrum", "--s", "5.4", "--mode", "exact")
        assert result.exit_code == 2


class TestVerify:
    def test_thue_morse_spectrum(self, invoke, configs):
        result, out = invoke(configs["thue_morse"], "verify", "--spectrum", "--samples", "100")
        assert result.exit_code == 3
        written = json.loads(_read(out, "verify.json"))
        assert written["checks"]["tech"]["status"] == "error"

    def test_one_vertex(self, invoke, configs):
        result, out = invoke(configs["one_vertex"], "verify", "--samples", "100")
        assert result.exit_code == 0, result.output
        assert json.loads(_read(out, "verify.json"))["overall_status"] == "success"

    def test_not_primitive(self, invoke, configs):
        result, _ = invoke(configs["identity"], "verify")
        assert result.exit_code == 3

    def test_failed_precondition_exits_nonzero(self, invoke, configs):
        data = configs["fibonacci"]
        data["spectrum"] = {"s": 2.5}
        result, out = invoke(data, "verify", "--spectrum", "--samples", "50")
        assert result.exit_code == 3
        written = json.loads(_read(out, "verify.json"))
        assert written["checks"]["omega"]["status"] == "error"
        assert written["overall_status"] == "error"

    def test_bad_enum_cap_is_a_config_error(self, runner, configs, tmp_path):
        path = tmp_path / "run.json"
        path.write_text(json.dumps(configs["one_vertex"]))
        args = ["--config", str(path), "--out", str(tmp_path / "out"), "verify", "--samples", "20"]
        result = runner.invoke(cli, args, env={"CANTORLAB_ENUM_CAP": "lots"})
        assert result.exit_code == 2
        assert "CANTORLAB_ENUM_CAP" in result.output
