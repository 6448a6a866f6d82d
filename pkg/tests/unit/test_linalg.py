"""
Unit tests for linear algebra over F_{2^k}.
"""

import numpy as np

from hother.orbitree.geometry import linalg
from hother.orbitree.geometry.field import binary_field


class TestLinalg:
    """Test galois-backed matrix operations."""

    def test_rank_and_rref(self):
        """Test a rank-deficient matrix over F4."""
        field = binary_field(2)
        matrix = np.array([[1, 2, 3], [2, field.mul(2, 2), field.mul(2, 3)]], dtype=np.uint8)
        assert linalg.rank(matrix, field) == 1
        reduced = linalg.rref(matrix, field)
        assert reduced.shape == (1, 3)
        assert reduced[0, 0] == 1

    def test_zero_matrix(self):
        """Test that zero matrices have rank zero and an empty echelon form."""
        field = binary_field(3)
        zero = np.zeros((2, 4), dtype=np.uint8)
        assert linalg.rank(zero, field) == 0
        assert linalg.rref(zero, field).shape == (0, 4)
        assert linalg.null_space(zero, field).shape == (4, 4)

    def test_null_space(self):
        """Test that null-space rows are annihilated."""
        field = binary_field(3)
        matrix = np.array([[1, 2, 3, 4], [0, 1, 5, 6]], dtype=np.uint8)
        basis = linalg.null_space(matrix, field)
        assert basis.shape == (2, 4)
        assert not linalg.matmul(matrix, basis.T, field).any()

    def test_left_null_space(self):
        """Test that left null-space rows annihilate from the left."""
        field = binary_field(2)
        matrix = np.array([[1, 0], [0, 1], [1, 1]], dtype=np.uint8)
        left = linalg.left_null_space(matrix, field)
        assert left.shape == (1, 3)
        assert not linalg.matmul(left, matrix, field).any()

    def test_solve(self):
        """Test a consistent and an inconsistent system."""
        field = binary_field(4)
        matrix = np.array([[1, 3], [0, 7]], dtype=np.uint8)
        rhs = np.array([5, 9], dtype=np.uint8)
        solution = linalg.solve(matrix, rhs, field)
        assert solution is not None
        assert linalg.matmul(matrix, solution, field).tolist() == rhs.tolist()
        singular = np.array([[1, 1], [1, 1]], dtype=np.uint8)
        assert linalg.solve(singular, np.array([0, 1], dtype=np.uint8), field) is None

    def test_inverse(self):
        """Test that the inverse gives the identity."""
        field = binary_field(3)
        matrix = np.array([[1, 2, 0], [0, 1, 3], [4, 0, 1]], dtype=np.uint8)
        assert linalg.rank(matrix, field) == 3
        product = linalg.matmul(matrix, linalg.inverse(matrix, field), field)
        assert np.array_equal(product, np.eye(3, dtype=np.uint8))

    def test_intersection_dimension(self):
        """Test the meet of two lines of F4^3."""
        field = binary_field(2)
        a = np.array([[1, 0, 0], [0, 1, 0]], dtype=np.uint8)
        b = np.array([[0, 1, 0], [0, 0, 1]], dtype=np.uint8)
        assert linalg.intersection_dimension(a, b, field) == 1

    def test_normalize_projective(self):
        """Test scaling the leading coordinate to one."""
        field = binary_field(2)
        assert linalg.normalize_projective([0, 2, 1], field).tolist() == [0, 1, field.inv(2)]
        assert linalg.normalize_projective([0, 0], field).tolist() == [0, 0]
