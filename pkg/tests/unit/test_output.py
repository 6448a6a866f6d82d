"""
Unit tests for candidate records, JSON-lines files and the run manifest.
"""

import io
import json

from dirty_equals import IsStr

from hother.orbitree.config import OrbitreeSettings
from hother.orbitree.strata.models import CandidateScheme, FormRecord, PrecheckReport
from hother.orbitree.strata.output import RunManifest, package_versions, read_candidates, write_candidates


def make_candidate(**overrides):
    fields = {
        "stratum": "g6-plane-quintic",
        "ambient": "p2",
        "forms": [FormRecord(degree=[5], monomial_order="lex-desc", bits="1" + "0" * 20)],
        "points": [0, 2, 4, 6],
        "counts": [4, 14, 16],
        "config_hash": "0123456789abcdef",
    }
    fields.update(overrides)
    return CandidateScheme(**fields)


class TestModels:
    """Test record helpers."""

    def test_form_record_coefficients(self):
        """Test that bit j is the coefficient of basis form j."""
        assert FormRecord(degree=[1], monomial_order="lex-desc", bits="100").coefficients == 1
        assert FormRecord(degree=[1], monomial_order="lex-desc", bits="011").coefficients == 6
        assert FormRecord(degree=[1], monomial_order="lex-desc", bits="").coefficients == 0

    def test_form_key_ignores_points(self):
        """Test that the deduplication key is the ambient and the forms."""
        assert make_candidate().form_key() == make_candidate(points=[1, 3, 5, 6]).form_key()
        assert make_candidate().form_key() != make_candidate(ambient="p1xp1").form_key()

    def test_allowed_rational_counts(self):
        """Test the first entries of surviving tuples."""
        report = PrecheckReport(genus=7, stratum="s", verdict="partial", surviving=[(7, 15), (7, 16)])
        assert report.allowed_rational_counts() == {7}
        assert not report.excluded


class TestCandidateFiles:
    """Test JSON-lines candidate files."""

    def test_round_trip(self):
        """Test that written records read back equal."""
        records = [make_candidate(), make_candidate(points=[1, 3, 5, 6], flags=["partial-counts"])]
        stream = io.StringIO()
        assert write_candidates(records, stream) == 2
        stream.seek(0)
        assert list(read_candidates(stream)) == records

    def test_one_object_per_line(self):
        """Test the line layout and the absence of timings."""
        stream = io.StringIO()
        write_candidates([make_candidate()], stream)
        (line,) = stream.getvalue().splitlines()
        data = json.loads(line)
        assert data["forms"][0]["monomial_order"] == "lex-desc"
        assert "timings" not in data

    def test_blank_lines_skipped(self):
        """Test that empty lines are ignored."""
        text = make_candidate().model_dump_json() + "\n\n"
        assert len(list(read_candidates(io.StringIO(text)))) == 1


class TestManifest:
    """Test run provenance."""

    def test_for_settings(self):
        """Test the hash and seed copied from the settings."""
        settings = OrbitreeSettings(seed=4)
        manifest = RunManifest.for_settings("strata run", settings)
        assert manifest.seed == 4
        assert manifest.config_hash == settings.config_hash()
        assert manifest.settings["budgets"]["max_coset_dimension"] == 24
        assert manifest.created == IsStr(regex=r"\d{4}-\d{2}-\d{2}T.*")

    def test_write(self, tmp_path):
        """Test that the manifest is written as JSON, creating parents."""
        path = tmp_path / "nested" / "manifest.json"
        RunManifest.for_settings("tree build", OrbitreeSettings()).write(path)
        data = json.loads(path.read_text())
        assert data["command"] == "tree build"
        assert "numpy" in data["versions"]

    def test_package_versions(self):
        """Test that every tracked package has an entry."""
        versions = package_versions()
        assert {"python", "numpy", "galois", "pydantic"} <= set(versions)
