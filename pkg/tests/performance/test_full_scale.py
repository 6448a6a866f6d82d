"""
Full-scale reproductions of the orbit counts; run with ``pytest -m slow``.
"""

import time

import numpy as np
import pytest

from hother.orbitree.config import OrbitreeSettings
from hother.orbitree.core.permgroup import is_member
from hother.orbitree.geometry import spinor
from hother.orbitree.strata.genus6 import SECTION_CLASSES, genus6_generic_sections
from hother.orbitree.strata.genus7 import GREEN_REPRESENTATIVES, genus7_representatives

pytestmark = pytest.mark.slow


class TestOrthogonalGroup:
    """Test SO(V)(F2) acting on the points of OG+."""

    def test_certified_order(self):
        """Test that random rotations generate the full group."""
        group, matrices = spinor.so_generators(seed=0)
        assert group.degree == 2295
        assert group.order() == spinor.SO_ORDER
        assert all(spinor.dickson_invariant(m) == 0 for m in matrices)

    def test_generators_are_members(self):
        """Test membership of the induced permutations."""
        group, matrices = spinor.so_generators(seed=0)
        for matrix in matrices:
            assert is_member(group, spinor.og_permutation(matrix))

    def test_exhaustive_round_trip(self):
        """Test spinor and Lagrangian correspondence on every F2-point."""
        points = spinor.og_points(1)
        lagrangians = spinor.lagrangian_points(1)
        for position, s in enumerate(points.coords):
            assert spinor.spinor_to_lagrangian(s) == lagrangians[position]
            assert spinor.lagrangian_to_spinor(lagrangians[position]).tolist() == s.tolist()


class TestStrataCounts:
    """Test the class counts of the generic strata."""

    def test_genus7_representatives(self):
        """Test the green nodes of the OG+ tree."""
        started = time.perf_counter()
        labels = genus7_representatives(OrbitreeSettings(seed=0, workers=4))
        assert len(labels) == GREEN_REPRESENTATIVES == 494
        assert all(len(label) == 6 for label in labels)
        print(f"genus-7 representatives in {time.perf_counter() - started:.1f}s")

    def test_genus6_section_classes(self):
        """Test the classes of hyperplane quadruples of P^9."""
        sections = genus6_generic_sections(OrbitreeSettings(seed=0))
        assert len(sections.representatives) == SECTION_CLASSES == 55
        assert sections.report.stages["classes"] == 55
        assert sum(len(m) for m in sections.members) >= 55


def batch_rank(rows):
    """Ranks of a stack of F2 matrices given as ``(count, nrows)`` bit-packed rows."""
    rows = rows.copy()
    ranks = np.zeros(rows.shape[0], dtype=np.int64)
    everyone = np.arange(rows.shape[0])
    for bit in range(int(rows.max()).bit_length()):
        has = (rows >> bit) & 1 == 1
        found = has.any(axis=1)
        pivots = rows[everyone, has.argmax(axis=1)]
        rows = np.where(has, rows ^ pivots[:, np.newaxis], rows)
        ranks += found
    return ranks


class TestLagrangianMeets:
    """Test intersection parity between points of OG+."""

    def test_every_pair_meets_in_odd_dimension(self):
        """Test dim(L ∩ M) = 5 - rank(B restricted to L x M) is odd for all 2295^2 pairs."""
        lagrangians = spinor.lagrangian_points(1)
        rows = np.stack([lagrangian.rows for lagrangian in lagrangians]).astype(np.int64)
        paired = rows @ spinor.gram_matrix().astype(np.int64) % 2
        columns = rows.transpose(0, 2, 1)
        weights = 1 << np.arange(spinor.RANK, dtype=np.int64)
        for first in range(len(lagrangians)):
            pairing = paired[first] @ columns % 2
            meets = spinor.RANK - batch_rank(pairing.transpose(0, 2, 1) @ weights)
            assert meets[first] == spinor.RANK
            assert (meets % 2 == 1).all(), first

    def test_batch_rank_matches_intersection_dimension(self):
        """Test the bilinear-form meet against the subspace meet on a sample of pairs."""
        lagrangians = spinor.lagrangian_points(1)
        rng = np.random.default_rng(2)
        gram = spinor.gram_matrix().astype(np.int64)
        weights = 1 << np.arange(spinor.RANK, dtype=np.int64)
        for _ in range(200):
            a, b = (lagrangians[int(i)] for i in rng.integers(0, len(lagrangians), 2))
            pairing = a.rows.astype(np.int64) @ gram @ b.rows.T.astype(np.int64) % 2
            assert spinor.RANK - batch_rank((pairing @ weights)[np.newaxis, :])[0] == spinor.intersection_dimension(a, b)
