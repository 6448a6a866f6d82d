"""
Integration tests running the orbitree command end to end.
"""

import json

from hother.orbitree.cli import main
from hother.orbitree.config import OrbitreeSettings


class TestTreeCommands:
    """Test tree build followed by tree verify."""

    def test_build_then_verify(self, tmp_path, capsys):
        """Test that a written tree verifies and the manifests describe both runs."""
        tree_path = tmp_path / "trees" / "fano.tree"
        build_manifest = tmp_path / "build.json"
        common = ["--space", "fano", "--depth", "3", "--seed", "4", "--workers", "1"]
        assert main(["tree", "build", *common, "--output", str(tree_path), "--manifest", str(build_manifest)]) == 0
        assert tree_path.read_text().startswith("# orbitree-tree")

        manifest = json.loads(build_manifest.read_text())
        assert manifest["command"] == "tree build"
        assert manifest["seed"] == 4
        assert manifest["artifacts"]["output"] == str(tree_path)
        assert manifest["extra"]["nodes"] > 0
        assert manifest["config_hash"] == OrbitreeSettings.model_validate(manifest["settings"]).config_hash()

        capsys.readouterr()
        assert main(["tree", "verify", *common, "--tree", str(tree_path), "--trials", "50"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["passed"] is True
        assert report["resolved"] == 50
        assert report["orbit_sum"] == report["expected_sum"] == 35

    def test_verify_with_independence_oracle(self, tmp_path, capsys):
        """Test a tree with forbidden collinear triples."""
        tree_path = tmp_path / "independent.tree"
        flags = ["--space", "p2", "--depth", "3", "--oracle", "independent", "--workers", "1"]
        assert main(["tree", "build", *flags, "--output", str(tree_path)]) == 0
        assert main(["tree", "verify", *flags, "--tree", str(tree_path), "--trials", "100"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["resolved"] + report["forbidden"] == 100
        assert report["forbidden"] > 0

    def test_verify_missing_tree_file(self, tmp_path, capsys):
        """Test that an unreadable tree is reported as a failure."""
        status = main(
            ["tree", "verify", "--space", "p2", "--depth", "2", "--tree", str(tmp_path / "absent.tree"), "--workers", "1"]
        )
        assert status == 2


class TestGeometryAndStrata:
    """Test the geometry and strata commands."""

    def test_points_to_file(self, tmp_path):
        """Test the point export of the Fano plane."""
        output = tmp_path / "p2.txt"
        assert main(["geometry", "points", "--space", "p2", "--output", str(output), "--workers", "1"]) == 0
        lines = output.read_text().splitlines()
        assert lines[:2] == ["# space p2", "# field-degree 1"]
        assert lines[2:] == ["0 0 1", "0 1 0", "0 1 1", "1 0 0", "1 0 1", "1 1 0", "1 1 1"]

    def test_precheck_manifest(self, tmp_path, capsys):
        """Test that precheck verdicts land in the manifest."""
        manifest_path = tmp_path / "precheck.json"
        assert main(["strata", "precheck", "--manifest", str(manifest_path), "--workers", "1"]) == 0
        assert len(capsys.readouterr().out.splitlines()) == 15
        manifest = json.loads(manifest_path.read_text())
        verdicts = {p["stratum"]: p["verdict"] for p in manifest["prechecks"]}
        assert verdicts["g7-trigonal-maroni3"] == "excluded"
        assert verdicts["g7-bielliptic"] == "external"

    def test_run_settled_stratum(self, tmp_path, capsys):
        """Test that a run with --output prints its report on stdout."""
        output = tmp_path / "maroni3.jsonl"
        assert main(["strata", "run", "--stratum", "g7-trigonal-maroni3", "--output", str(output), "--workers", "1"]) == 0
        assert output.read_text() == ""
        report = json.loads(capsys.readouterr().out)
        assert report["stratum"] == "g7-trigonal-maroni3"
        assert report["candidates"] == 0
