"""
Unit tests for linear sections of quadric-defined varieties.
"""

import numpy as np
import pytest

from hother.orbitree.core.exceptions import DomainError
from hother.orbitree.geometry.forms import Polynomial
from hother.orbitree.geometry.sections import (
    QuadricSection,
    local_intersection_multiplicity,
    projective_dimension,
    restrict_quadric,
    span_of,
    span_points,
)
from hother.orbitree.geometry.spaces import enumerate_points, plucker_quadrics


@pytest.fixture
def conic():
    """x0 x1 + x2^2."""
    return Polynomial.from_monomials([(1, 1, 0), (0, 0, 2)])


def rows(*vectors):
    return np.array(vectors, dtype=np.uint8)


class TestSpans:
    """Test F2 spans of point sets."""

    def test_span_of_collinear_points(self):
        """Test that three points of a line span a plane of rank 2."""
        basis = span_of(rows((1, 0, 0), (0, 1, 0), (1, 1, 0)))
        assert basis.shape == (2, 3)
        assert projective_dimension(rows((1, 0, 0), (0, 1, 0), (1, 1, 0))) == 1

    def test_empty_span(self):
        """Test that no points have no span."""
        with pytest.raises(DomainError):
            span_of(np.zeros((0, 3), dtype=np.uint8))

    def test_span_points(self):
        """Test the three F2 points and five F4 points of a line."""
        basis = rows((1, 0, 0), (0, 1, 0))
        assert len(span_points(basis, 1)) == 3
        assert len(span_points(basis, 2)) == 5


class TestQuadricSection:
    """Test point counts of sections."""

    def test_restriction_along_identity(self, conic):
        """Test that pulling back along I3 changes nothing."""
        assert restrict_quadric(conic, np.eye(3, dtype=np.uint8)) == conic

    @pytest.mark.parametrize(("k", "count"), [(1, 3), (2, 5), (3, 9)])
    def test_conic_counts(self, conic, k, count):
        """Test q + 1 points on a smooth conic."""
        section = QuadricSection(np.eye(3, dtype=np.uint8), [conic])
        assert section.count(k) == count
        assert len(section.points(k)) == count

    def test_count_stops_at_limit(self, conic):
        """Test early exit once the limit is passed."""
        section = QuadricSection(np.eye(3, dtype=np.uint8), [conic])
        assert 2 < section.count(3, limit=2) <= 9

    def test_plane_section_of_grassmannian(self):
        """Test that the full Plücker space section recovers Gr(2,5)(F2)."""
        section = QuadricSection(np.eye(10, dtype=np.uint8), plucker_quadrics())
        points = section.points(1)
        assert len(points) == 155
        assert sorted(map(tuple, points.tolist())) == sorted(map(tuple, enumerate_points("gr25").coords.tolist()))

    def test_no_quadrics(self):
        """Test that the section of nothing is the whole span."""
        assert QuadricSection(np.eye(3, dtype=np.uint8), ()).count(1) == 7


class TestMultiplicity:
    """Test local intersection multiplicities."""

    def test_tangent_line(self, conic):
        """Test that the tangent line meets the conic doubly."""
        assert local_intersection_multiplicity(rows((1, 0, 0), (0, 0, 1)), (1, 0, 0), [conic]) == 2

    def test_transverse_line(self, conic):
        """Test a simple intersection."""
        assert local_intersection_multiplicity(rows((1, 0, 0), (0, 1, 0)), (1, 0, 0), [conic]) == 1

    def test_point_off_section(self, conic):
        """Test a point of the line not on the conic."""
        with pytest.raises(DomainError):
            local_intersection_multiplicity(rows((1, 0, 0), (0, 0, 1)), (0, 0, 1), [conic])

    def test_point_off_span(self, conic):
        """Test a point outside the line."""
        with pytest.raises(DomainError):
            local_intersection_multiplicity(rows((1, 0, 0), (0, 0, 1)), (0, 1, 0), [conic])
