"""
Unit tests for the orbitree command line.
"""

import json

import pytest

from hother.orbitree.cli import EXIT_RESOURCE, EXIT_USAGE, RunConfig, main, parse_config
from hother.orbitree.core.exceptions import UsageError


class TestParseConfig:
    """Test flag parsing and validation."""

    def test_geometry_points(self):
        """Test a minimal geometry command."""
        config, log_level = parse_config(["geometry", "points", "--space", "p2", "--workers", "2"])
        assert config.command == "geometry points"
        assert config.space == "p2"
        assert config.ext == 1
        assert config.workers == 2
        assert log_level == "WARNING"

    def test_tree_flags(self, tmp_path):
        """Test the tree verify flags."""
        config, log_level = parse_config(
            [
                "tree", "verify", "--space", "fano", "--depth", "3", "--tree", str(tmp_path / "t.tree"),
                "--trials", "5", "--oracle", "independent", "--log-level", "DEBUG", "--strict",
            ]
        )  # fmt: skip
        assert config.command == "tree verify"
        assert config.tree == tmp_path / "t.tree"
        assert config.trials == 5
        assert config.oracle == "independent"
        assert config.strict
        assert log_level == "DEBUG"

    def test_default_workers(self, mocker):
        """Test that the worker count falls back to the usable CPUs."""
        mocker.patch("hother.orbitree.cli.default_workers", return_value=6)
        config, _ = parse_config(["strata", "precheck"])
        assert config.workers == 6

    @pytest.mark.parametrize(
        "argv",
        [
            [],
            ["tree"],
            ["tree", "build", "--space", "p2"],
            ["geometry", "points", "--space", "p2", "--ext", "two"],
            ["strata", "run", "--stratum", "g8-unknown"],
            ["strata", "precheck", "--bogus"],
        ],
    )
    def test_invalid_flags(self, argv):
        """Test that argparse failures become usage errors."""
        with pytest.raises(UsageError):
            parse_config(argv)

    def test_unknown_space(self):
        """Test the space id validator."""
        with pytest.raises(UsageError) as raised:
            parse_config(["geometry", "points", "--space", "p42"])
        assert raised.value.context["errors"][0]["field"] == "space"

    def test_out_of_range_ext(self):
        """Test the field degree bound."""
        with pytest.raises(UsageError):
            parse_config(["geometry", "points", "--space", "p1", "--ext", "9"])

    def test_help_exits_cleanly(self):
        """Test that --help is not reported as an error."""
        with pytest.raises(SystemExit) as raised:
            parse_config(["--help"])
        assert raised.value.code == 0


class TestRunConfigSettings:
    """Test the mapping from flags to settings."""

    def test_settings(self):
        """Test budgets and oracle parameters."""
        config = RunConfig(
            command="strata run",
            stratum="g6-plane-quintic",
            seed=3,
            k_max=3,
            threshold=10,
            max_extension=2,
            max_points=500,
            memory_percent=75.0,
        )
        settings = config.settings()
        assert settings.seed == 3
        assert settings.og.k_max == 3
        assert settings.og.threshold == 10
        assert settings.max_extension_degree == 2
        assert settings.budgets.max_points == 500
        assert settings.budgets.memory_percent == 75.0

    def test_unset_budgets_keep_defaults(self):
        """Test that absent budget flags keep the defaults."""
        assert RunConfig(command="strata precheck").settings().budgets.max_coset_dimension == 24


class TestMain:
    """Test exit statuses and error records."""

    def test_usage_error(self, capsys):
        """Test exit status 2 and the JSON record on stderr."""
        assert main(["tree", "build", "--space", "nope", "--depth", "2"]) == EXIT_USAGE
        record = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
        assert record["error"] == "usage"
        assert record["message"] == "Invalid configuration"

    def test_resource_error(self, capsys):
        """Test exit status 3 when the point budget is exceeded."""
        assert main(["geometry", "points", "--space", "p9", "--ext", "3", "--max-points", "10"]) == EXIT_RESOURCE
        record = json.loads(capsys.readouterr().err.strip())
        assert record["error"] == "resource"
        assert record["context"]["budget"] == "max_points"
        assert record["context"]["limit"] == 10

    def test_geometry_points_stdout(self, capsys):
        """Test that points go to stdout by default."""
        assert main(["geometry", "points", "--space", "p1", "--workers", "1"]) == 0
        assert capsys.readouterr().out == "# space p1\n# field-degree 1\n0 1\n1 0\n1 1\n"

    def test_precheck_lines(self, capsys):
        """Test one precheck report per stratum."""
        assert main(["strata", "precheck", "--workers", "1"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 15
        assert all("stratum" in json.loads(line) for line in lines)
