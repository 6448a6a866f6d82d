"""
Unit tests for ambient spaces and point enumeration.
"""

import io

import numpy as np
import pytest

from hother.orbitree.config import Budgets
from hother.orbitree.core.exceptions import DomainError, ResourceError, UnsupportedError
from hother.orbitree.geometry.field import binary_field
from hother.orbitree.geometry.spaces import (
    PLUCKER_PAIRS,
    ProjectiveSpace,
    WeightedProjectiveSpace,
    ambient_space,
    enumerate_points,
    normalize_rows,
    plucker_quadrics,
)


class TestRegistry:
    """Test the shared space registry."""

    def test_alias(self):
        """Test that fano is the same space as p2."""
        assert ambient_space("fano") is ambient_space("p2")

    def test_unknown_space(self):
        """Test that unknown ids are rejected."""
        with pytest.raises(DomainError):
            ambient_space("p42")

    def test_unsupported_weights(self):
        """Test that only one heavy variable of weight 2 is supported."""
        with pytest.raises(UnsupportedError):
            WeightedProjectiveSpace((1, 2, 2))


class TestPointCounts:
    """Test the canonical point lists."""

    @pytest.mark.parametrize(
        ("space_id", "count"),
        [
            ("p1", 3),
            ("p2", 7),
            ("p1xp1", 9),
            ("p1xp2", 21),
            ("x21", 9),
            ("x11", 21),
            ("gr25", 155),
            ("wp1112", 15),
            ("twist", 21),
        ],
    )
    def test_rational_points(self, space_id, count):
        """Test F2-point counts."""
        assert len(enumerate_points(space_id)) == count

    def test_extension_points(self):
        """Test P2(F4) and (P1 x P1)(F4) counts."""
        assert len(enumerate_points("p2", 2)) == 21
        assert len(enumerate_points("p1xp1", 2)) == 25

    def test_expected_count_matches_projective_enumeration(self):
        """Test that the formula agrees with enumeration for P3 over F8."""
        space = ambient_space("p3")
        assert space.expected_count(3) == len(space.enumerate_points(3)) == 585

    def test_hypersurface_expected_count_is_ambient(self):
        """Test the pre-enumeration bound of a hypersurface."""
        assert ambient_space("x21").expected_count(1) == ambient_space("p1xp2").expected_count(1)

    def test_budget(self):
        """Test that enumeration over the point budget is refused."""
        with pytest.raises(ResourceError):
            ProjectiveSpace(9).enumerate_points(1, Budgets(max_points=10))

    def test_budget_applies_to_cached_points(self):
        """Test that a smaller budget is enforced after the points were enumerated once."""
        space = ambient_space("p2")
        assert len(space.enumerate_points(1)) == 7
        with pytest.raises(ResourceError) as raised:
            space.enumerate_points(1, Budgets(max_points=3))
        assert raised.value.limit == 3
        assert len(space.enumerate_points(1, Budgets(max_points=7))) == 7


class TestCanonicalOrder:
    """Test normalization and ordering."""

    def test_fano_order(self):
        """Test the lex-sorted normalized points of P2(F2)."""
        coords = enumerate_points("p2").coords.tolist()
        assert coords == [[0, 0, 1], [0, 1, 0], [0, 1, 1], [1, 0, 0], [1, 0, 1], [1, 1, 0], [1, 1, 1]]

    def test_leading_coordinate_is_one(self):
        """Test normalization over F8."""
        for row in enumerate_points("p2", 3).coords:
            assert row[np.flatnonzero(row)[0]] == 1

    def test_normalize_rows(self):
        """Test scaling by the inverse of the leading entry."""
        field = binary_field(2)
        rows = normalize_rows(np.array([[0, 2, 3]], dtype=np.uint8), field)
        assert rows.tolist() == [[0, 1, field.mul(field.inv(2), 3)]]

    def test_product_normalizes_per_factor(self):
        """Test that each factor of P1 x P2 is scaled separately."""
        space = ambient_space("p1xp2")
        field = binary_field(2)
        normalized = space.normalize(np.array([[2, 2, 0, 3, 3]], dtype=np.uint8), field)
        assert normalized.tolist() == [[1, 1, 0, 1, 1]]

    def test_index_of(self):
        """Test point lookup and a missing point."""
        points = enumerate_points("p2")
        assert points.index_of(np.array([1, 0, 1])) == 4
        with pytest.raises(DomainError):
            points.index_of(np.array([0, 0, 0]))

    def test_subset(self):
        """Test that subsets keep the field degree."""
        points = enumerate_points("p2", 2).subset([0, 5])
        assert len(points) == 2
        assert points.field_degree == 2


class TestMembership:
    """Test the defining equations of embedded spaces."""

    def test_plucker_order(self):
        """Test p01 first and p34 last."""
        assert PLUCKER_PAIRS[0] == (0, 1)
        assert PLUCKER_PAIRS[-1] == (3, 4)
        assert len(plucker_quadrics()) == 5

    def test_grassmannian_points_satisfy_plucker(self):
        """Test that every enumerated point is on Gr(2,5)."""
        space = ambient_space("gr25")
        assert all(space.contains(row) for row in enumerate_points("gr25").coords)

    def test_non_decomposable_vector(self):
        """Test that p01 + p34 is not a decomposable 2-vector."""
        row = np.zeros(10, dtype=np.uint8)
        row[0] = row[-1] = 1
        assert not ambient_space("gr25").contains(row)

    def test_hypersurface_points(self):
        """Test that the points of X11 satisfy x0 y0 + x1 y1."""
        space = ambient_space("x11")
        for row in enumerate_points("x11").coords:
            assert (int(row[0]) * int(row[2]) + int(row[1]) * int(row[3])) % 2 == 0
            assert space.contains(row)

    def test_twisted_points_are_conjugate(self):
        """Test that F2-points of the twist are pairs (p, Frob(p))."""
        space = ambient_space("twist")
        points = enumerate_points("twist")
        field = binary_field(2)
        assert points.field_degree == 2
        assert points.extension == 1
        for row in points.coords:
            assert [field.frobenius(int(c)) for c in row[:3]] == row[3:].tolist()
            assert space.contains(row)


class TestExport:
    """Test writing point lists."""

    def test_export_points(self):
        """Test the header lines and one row per point."""
        stream = io.StringIO()
        count = ambient_space("p1").export_points(1, stream)
        assert count == 3
        assert stream.getvalue() == "# space p1\n# field-degree 1\n0 1\n1 0\n1 1\n"
