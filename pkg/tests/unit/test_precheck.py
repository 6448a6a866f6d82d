"""
Unit tests for the point-count precheck.
"""

import pytest

from hother.orbitree.core.exceptions import DomainError
from hother.orbitree.strata.precheck import (
    bielliptic_counts,
    enumerated_strata,
    first_violation,
    precheck_all,
    stratum_precheck,
)
from hother.orbitree.strata.tables import STRATA


class TestBiellipticCounts:
    """Test elliptic point counts from the trace recurrence."""

    @pytest.mark.parametrize(
        ("e_f2", "expected"),
        [(1, (1, 5, 13, 25)), (3, (3, 9, 9, 9)), (5, (5, 5, 5, 25))],
    )
    def test_counts(self, e_f2, expected):
        """Test the first four counts."""
        assert bielliptic_counts(e_f2, 4) == expected

    @pytest.mark.parametrize("e_f2", [0, 6])
    def test_hasse_range(self, e_f2):
        """Test counts outside 1..5."""
        with pytest.raises(DomainError):
            bielliptic_counts(e_f2, 4)

    def test_first_violation(self):
        """Test the index of the first exceeded bound."""
        assert first_violation((3, 5, 20), lambda i: 2 * ((1 << i) + 1)) == 3
        assert first_violation((3, 5), lambda i: 10) is None


class TestVerdicts:
    """Test the verdict of every settled stratum."""

    @pytest.mark.parametrize("stratum_id", ["g6-hyperelliptic", "g7-hyperelliptic"])
    def test_hyperelliptic_excluded(self, stratum_id):
        """Test that no allowed tuple is a double cover of P1."""
        report = stratum_precheck(int(stratum_id[1]), stratum_id)
        assert report.excluded
        assert not report.surviving

    def test_maroni3_excluded(self):
        """Test three exclusions over F4 and four by smooth points of P(1:1:3)."""
        report = stratum_precheck(7, "g7-trigonal-maroni3")
        assert report.verdict == "excluded"
        assert len(report.exclusions) == 7
        assert sum(e.extension == 2 for e in report.exclusions) == 3
        assert sum("> 6 = smooth points" in e.inequality for e in report.exclusions) == 4

    def test_maroni1_partial(self):
        """Test that only the tuples with #C(F2) = 7 survive the trigonal bound."""
        report = stratum_precheck(7, "g7-trigonal-maroni1")
        assert report.verdict == "partial"
        assert len(report.exclusions) == 3
        assert len(report.surviving) == 4
        assert report.allowed_rational_counts() == {7}

    def test_genus6_bielliptic(self):
        """Test the five table rows and their dispositions."""
        report = stratum_precheck(6, "g6-bielliptic")
        assert report.excluded
        assert len(report.exclusions) == 5
        assert report.exclusions[0].extension == 1
        assert report.exclusions[-1].extension == 2

    def test_genus7_bielliptic_is_external(self):
        """Test the tuples left for external verification."""
        report = stratum_precheck(7, "g7-bielliptic")
        assert report.verdict == "external"
        assert len(report.surviving) == 3
        assert report.allowed_rational_counts() == {6}
        assert len(report.exclusions) == 3
        assert any("[3]" in note for note in report.notes)

    def test_enumerated_strata_survive(self):
        """Test that strata with an enumeration keep every tuple."""
        report = stratum_precheck(6, "g6-plane-quintic")
        assert report.verdict == "survives"
        assert len(report.surviving) == 33

    def test_wrong_genus(self):
        """Test a stratum asked for under another genus."""
        with pytest.raises(DomainError):
            stratum_precheck(7, "g6-plane-quintic")


class TestAll:
    """Test the registry-wide helpers."""

    def test_precheck_all(self):
        """Test one report per stratum, genus 6 first."""
        reports = precheck_all()
        assert [r.stratum for r in reports] == list(STRATA)
        assert reports[0].genus == 6

    def test_enumerated_strata(self):
        """Test the ten strata left to enumerate."""
        strata = enumerated_strata()
        assert len(strata) == 10
        assert "g6-hyperelliptic" not in strata
        assert "g7-generic" in strata
