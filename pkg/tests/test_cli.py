"""
Tests for the command line
"""
import json

import pytest
from unittest.mock import patch

from src import __version__
from src.cli import EXIT_FAILURE, EXIT_GRAPH, EXIT_INVALID, EXIT_NUMERICAL, EXIT_OK, exit_code_for, main
from src.liouville.linalg import NumericalError
from src.qaoa.graphs import GraphError
from src.services.config import ConfigError
from src.services.experiment_pipeline import ExperimentError


class TestExitCodes:
    """Test the error to exit-code mapping"""

    @pytest.mark.parametrize("error,code", [
        (ConfigError("x"), EXIT_INVALID),
        (GraphError("x"), EXIT_GRAPH),
        (NumericalError("x"), EXIT_NUMERICAL),
        (ExperimentError("x"), EXIT_FAILURE),
        (FileNotFoundError("x"), EXIT_INVALID),
    ])
    def test_mapping(self, error, code):
        """Test each error class maps to its code"""
        assert exit_code_for(error) == code


@pytest.mark.integration
class TestMain:
    """Test main() end to end"""

    def test_version(self, capsys):
        """Test --version prints the library version"""
        with pytest.raises(SystemExit) as excinfo:
            main(["--version"])
        assert excinfo.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_toy_purity_smoke(self, tmp_path, capsys):
        """Test a small toy-purity run writes its table and manifest"""
        code = main(["toy-purity", "--n", "2", "--channel", "ad:0.1^2", "--layers", "3",
                     "--samples", "4", "--seed", "1", "--output", str(tmp_path)])
        assert code == EXIT_OK
        assert (tmp_path / "toy-purity.csv").exists()
        assert (tmp_path / "manifest.json").exists()
        assert "toy-purity.csv" in capsys.readouterr().out

    def test_coeffs_to_stdout(self, tmp_path, capsys):
        """Test coeffs prints its table"""
        code = main(["coeffs", "--n", "1", "--channel", "ad:0.5", "--output", str(tmp_path)])
        out = capsys.readouterr().out
        assert code == EXIT_OK
        assert out.splitlines()[0] == "quantity,value"
        assert any(line.startswith("p_eff,") for line in out.splitlines())

    def test_reruns_are_identical(self, tmp_path):
        """Test the same seed writes the same CSV"""
        args = ["toy-purity", "--n", "2", "--channel", "ad:0.1^2", "--layers", "2", "--samples", "3", "--seed", "9"]
        assert main(args + ["--output", str(tmp_path / "a")]) == EXIT_OK
        assert main(args + ["--output", str(tmp_path / "b")]) == EXIT_OK
        first = (tmp_path / "a" / "toy-purity.csv").read_bytes()
        assert first == (tmp_path / "b" / "toy-purity.csv").read_bytes()

    def test_config_file(self, tmp_path):
        """Test --config with a flag override"""
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"n": 2, "channel": "ad:0.1^2", "layers": 9, "output": str(tmp_path / "out")}))
        assert main(["coeffs", "--config", str(config), "--layers", "1"]) == EXIT_OK
        manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
        assert manifest["config"]["layers"] == 1

    @pytest.mark.parametrize("args", [
        ["coeffs", "--n", "2", "--channel", "foo:1"],
        ["coeffs", "--n", "4", "--channel", "ad:0.1"],
        ["coeffs", "--channel", "ad:0.1"],
        ["coeffs", "--n", "1", "--channel", "ad:2"],
        ["qaoa-purity", "--n", "4", "--channel", "ad:0.1^4"],
        ["twirl-fidelity", "--n", "3", "--channel", "ad:0.1^3", "--graph", "universal:3:0.5:0.5:0.2:0.6"],
        ["qaoa-purity", "--n", "6", "--channel", "ad:0.01^6", "--graph", "reg:6:3:-1"],
    ], ids=["unknown-channel", "qubit-mismatch", "missing-n", "out-of-range", "missing-graph", "universality",
            "negative-graph-seed"])
    def test_invalid_input(self, args, tmp_path):
        """Test invalid specs and configs exit with 2"""
        assert main(args + ["--output", str(tmp_path)]) == EXIT_INVALID

    def test_infeasible_graph(self, tmp_path):
        """Test an impossible regular graph exits with 3"""
        args = ["qaoa-purity", "--n", "5", "--channel", "ad:0.1^5", "--graph", "reg:5:3:1", "--output", str(tmp_path)]
        assert main(args) == EXIT_GRAPH

    @patch('src.cli.ExperimentPipeline')
    def test_experiment_failure(self, mock_pipeline, tmp_path):
        """Test ExperimentError exits with 1"""
        mock_pipeline.return_value.run.side_effect = ExperimentError("failed")
        assert main(["coeffs", "--n", "1", "--channel", "id", "--output", str(tmp_path)]) == EXIT_FAILURE


@pytest.mark.integration
class TestVerify:
    """Test the verify subcommand"""

    def test_verify_written_manifest(self, tmp_path, capsys):
        """Test a fresh manifest verifies"""
        assert main(["coeffs", "--n", "2", "--channel", "ad:0.1^2", "--output", str(tmp_path)]) == EXIT_OK
        assert main(["verify", str(tmp_path / "manifest.json")]) == EXIT_OK
        assert "constants verified" in capsys.readouterr().out

    def test_tampered_manifest(self, tmp_path):
        """Test a changed constant exits with 2"""
        main(["coeffs", "--n", "2", "--channel", "ad:0.1^2", "--output", str(tmp_path)])
        path = tmp_path / "manifest.json"
        manifest = json.loads(path.read_text())
        manifest["constants"]["r"] *= 1.001
        path.write_text(json.dumps(manifest))
        assert main(["verify", str(path)]) == EXIT_INVALID

    def test_missing_manifest(self, tmp_path):
        """Test a missing manifest exits with 2"""
        assert main(["verify", str(tmp_path / "none.json")]) == EXIT_INVALID
