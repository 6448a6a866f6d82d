"""
Integration tests for the strata pipelines at reduced scale.
"""

import io
from collections import Counter

import numpy as np
import pytest

from hother.orbitree.config import Budgets, OrbitreeSettings
from hother.orbitree.core.exceptions import ResourceError
from hother.orbitree.geometry.spaces import ambient_space
from hother.orbitree.strata.linear_systems import count_points, verify_candidate
from hother.orbitree.strata.output import read_candidates, write_candidates
from hother.orbitree.strata.pipeline import execute_stratum, extends_allowed, representatives, run_paradigm, run_stratum
from hother.orbitree.strata.precheck import precheck_all, stratum_precheck
from hother.orbitree.strata.tables import stratum_spec


@pytest.fixture(scope="module")
def quintic_run():
    """Plane quintics through four prescribed F2-points."""
    return run_paradigm(stratum_spec("g6-plane-quintic"), OrbitreeSettings(seed=7, workers=2), sizes=[4])


class TestPlaneQuintic:
    """Test the paradigm on plane quintics with four rational points."""

    def test_candidates_are_exact(self, quintic_run):
        """Test that every candidate has exactly its prescribed points."""
        for candidate in quintic_run.candidates:
            assert candidate.stratum == "g6-plane-quintic"
            assert candidate.ambient == "p2"
            assert len(candidate.points) == 4
            assert candidate.counts[0] == 4
            assert verify_candidate(candidate)

    def test_counts_agree_with_recount(self, quintic_run):
        """Test the stored extension counts against a fresh evaluation."""
        for candidate in quintic_run.candidates[:5]:
            if "partial-counts" in candidate.flags:
                continue
            assert count_points(candidate, 2) == candidate.counts[1]

    def test_candidates_are_unique(self, quintic_run):
        """Test deduplication by form tuple."""
        keys = [c.form_key() for c in quintic_run.candidates]
        assert len(keys) == len(set(keys))
        assert quintic_run.report.candidates == len(keys)

    def test_candidates_match_exhaustive_scan(self, quintic_run):
        """Test the candidates against all 2^21 quintics evaluated on every prescribed set."""
        settings = OrbitreeSettings(seed=7, workers=2)
        spec = stratum_spec("g6-plane-quintic")
        space = ambient_space("p2")
        forms = space.forms(spec.final_degree)
        allowed = list(stratum_precheck(6, spec.stratum_id).surviving)
        coefficients = np.arange(1, 1 << forms.dimension, dtype=np.int64)
        bits = ((coefficients[:, np.newaxis] >> np.arange(forms.dimension)) & 1).astype(bool)
        rational = forms.values(space.enumerate_points(1))
        values = np.zeros((len(coefficients), rational.shape[0]), dtype=np.uint8)
        for j in range(forms.dimension):
            values ^= np.where(bits[:, j : j + 1], rational[:, j], np.uint8(0))
        extensions = [forms.values(space.enumerate_points(k)) for k in range(2, settings.max_extension_degree + 1)]
        labels = representatives(spec, space, [4], settings)
        assert labels
        for label in labels:
            exact = ((values == 0) == np.isin(np.arange(rational.shape[0]), label)).all(axis=1)
            counts = [np.full(int(exact.sum()), len(label))]
            for table in extensions:
                section = np.zeros((int(exact.sum()), table.shape[0]), dtype=np.uint8)
                for j in range(forms.dimension):
                    section ^= np.where(bits[exact, j : j + 1], table[:, j], np.uint8(0))
                counts.append((section == 0).sum(axis=1))
            expected = {
                int(c) for c, row in zip(coefficients[exact], zip(*counts, strict=True), strict=True)
                if extends_allowed([int(n) for n in row], allowed)
            }  # fmt: skip
            found = {c.forms[-1].coefficients for c in quintic_run.candidates if c.points == sorted(label)}
            assert found == expected

    def test_jsonl_round_trip(self, quintic_run):
        """Test the candidate stream written by the CLI."""
        stream = io.StringIO()
        assert write_candidates(quintic_run.candidates, stream) == len(quintic_run.candidates)
        stream.seek(0)
        assert list(read_candidates(stream)) == quintic_run.candidates

    def test_report_has_representatives(self, quintic_run):
        """Test the per-ambient counters."""
        assert "p2" in quintic_run.report.representatives
        assert "p2:representatives" in quintic_run.report.timings


class TestSeedIndependence:
    """Test that seeds change representatives but not the classes found."""

    @staticmethod
    def classes(candidates):
        return Counter((len(c.points), tuple(c.counts)) for c in candidates)

    def test_quintics_under_two_seeds(self, quintic_run):
        """Test the reduced quintic scan under another seed."""
        other = run_paradigm(stratum_spec("g6-plane-quintic"), OrbitreeSettings(seed=8, workers=2), sizes=[4])
        assert len(other.candidates) == len(quintic_run.candidates)
        assert self.classes(other.candidates) == self.classes(quintic_run.candidates)

    @pytest.mark.slow
    def test_run_stratum_under_two_seeds(self):
        """Test the full plane quintic stratum under two seeds."""
        first = run_stratum("g6-plane-quintic", OrbitreeSettings(seed=0, workers=4))
        second = run_stratum("g6-plane-quintic", OrbitreeSettings(seed=5, workers=4))
        assert len(first) == len(second)
        assert self.classes(first) == self.classes(second)


class TestPrecheckStrata:
    """Test strata settled by point counts alone."""

    @pytest.mark.parametrize(
        "stratum", ["g6-hyperelliptic", "g6-bielliptic", "g7-hyperelliptic", "g7-trigonal-maroni3", "g7-bielliptic"]
    )
    def test_no_candidates(self, stratum):
        """Test that precheck strata yield no schemes."""
        run = execute_stratum(stratum)
        assert run.candidates == []
        assert run.report.notes[0].startswith("verdict: ")

    def test_precheck_matches_table(self):
        """Test that every registered stratum gets one verdict."""
        reports = precheck_all()
        assert len(reports) == 15
        assert {r.genus for r in reports} == {6, 7}


class TestBudgets:
    """Test that pipelines stop at their budgets."""

    def test_coset_budget_names_checkpoint(self):
        """Test the checkpoint of an interrupted refinement."""
        settings = OrbitreeSettings(budgets=Budgets(max_coset_dimension=2))
        with pytest.raises(ResourceError) as raised:
            run_paradigm(stratum_spec("g6-plane-quintic"), settings, sizes=[4])
        assert raised.value.checkpoint is not None
        assert raised.value.checkpoint.startswith("g6-plane-quintic:p2:")
