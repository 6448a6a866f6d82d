"""
Unit tests for orbit lookup trees.
"""

import math
from itertools import permutations

import pytest

from hother.orbitree.core.exceptions import DomainError
from hother.orbitree.core.models import NodeColor
from hother.orbitree.core.permgroup import Permutation, PermGroup
from hother.orbitree.core.tree import (
    OrbitTree,
    brute_force_orbits,
    build_tree,
    extend,
    green_nodes,
    new_tree,
    orbit_sizes,
    verify,
)
from hother.orbitree.geometry.spaces import ambient_space
from hother.orbitree.strata.oracles import IndependenceOracle


@pytest.fixture
def cyclic3() -> PermGroup:
    """Z/3 rotating three points."""
    return PermGroup([Permutation.from_cycles(3, (0, 1, 2))], 3)


@pytest.fixture(scope="module")
def fano_tree(fano_group):
    return build_tree(fano_group, 7, 3)


@pytest.fixture(scope="module")
def fano_oracle():
    return IndependenceOracle(ambient_space("p2").enumerate_points(1))


class TestTreeConstruction:
    """Test green counts and stabilizers."""

    def test_new_tree_has_green_root(self, symmetric3):
        """Test the depth-0 tree."""
        tree = new_tree(symmetric3, 3)
        assert tree.depth == 0
        assert tree.root.color is NodeColor.GREEN
        assert tree.root.stabilizer is symmetric3
        assert tree.forbids_nothing

    def test_domain_mismatch(self, symmetric3):
        """Test that the group degree must equal the domain size."""
        with pytest.raises(DomainError):
            OrbitTree(symmetric3, 4)

    def test_symmetric_group_has_one_orbit_per_size(self, symmetric3):
        """Test that S3 has one green node per depth."""
        tree = build_tree(symmetric3, 3, 3)
        assert tree.stats().green_counts() == [1, 1, 1, 1]

    def test_red_nodes_with_transporters(self, cyclic3):
        """Test that Z/3 merges the two pair children into one orbit."""
        tree = build_tree(cyclic3, 3, 2)
        depth2 = tree.stats().depths[2]
        assert (depth2.green, depth2.red) == (1, 1)
        green = tree.greens(2)[0]
        assert green.label == (0, 1)
        red = next(node for node in tree.levels[2] if node.color is NodeColor.RED)
        assert red.transporter is not None
        assert red.transporter.apply_to_set(green.label) == red.points

    def test_fano_orbits(self, fano_tree):
        """Test that lines and triangles are the two orbits of triples."""
        assert fano_tree.stats().green_counts() == [1, 1, 1, 2]
        assert orbit_sizes(fano_tree, 3) == [7, 28]
        assert sorted(order for _, order in green_nodes(fano_tree, 3)) == [6, 24]

    def test_orbit_sums(self, fano_tree):
        """Test that orbit sizes add up to binomial coefficients."""
        for depth in fano_tree.stats().depths:
            assert depth.orbit_sum == math.comb(7, depth.depth)

    def test_extend_one_level(self, symmetric3):
        """Test stepwise extension."""
        tree = new_tree(symmetric3, 3)
        extend(tree)
        assert tree.depth == 1
        assert [node.label for node in tree.greens(1)] == [(0,)]

    def test_strict_build_agrees(self, fano_group, strict_settings):
        """Test that strict validation accepts a consistent build."""
        tree = build_tree(fano_group, 7, 3, settings=strict_settings)
        assert orbit_sizes(tree, 3) == [7, 28]

    def test_green_nodes_depth_out_of_range(self, fano_tree):
        """Test that depths past the tree are rejected."""
        with pytest.raises(DomainError):
            green_nodes(fano_tree, 4)


class TestTreeLookup:
    """Test find() on every ordered input."""

    def test_find_every_triple(self, fano_tree):
        """Test that each transporter maps its green node onto the input set."""
        for sequence in permutations(range(7), 3):
            found = fano_tree.find(sequence)
            assert found is not None
            node, element = found
            assert node.is_green
            assert element.apply_to_set(node.label) == frozenset(sequence)
            assert element in fano_tree.group

    def test_find_empty_sequence(self, fano_tree):
        """Test that the empty sequence resolves to the root."""
        node, element = fano_tree.find(())
        assert node is fano_tree.root
        assert element.is_identity

    def test_green_for(self, fano_tree):
        """Test direct lookup of a green node by point set."""
        green = fano_tree.greens(3)[0]
        assert fano_tree.green_for(green.points) is green

    @pytest.mark.parametrize("sequence", [(0, 0), (7,), (-1, 2), (0, 1, 2, 3)])
    def test_invalid_sequences(self, fano_tree, sequence):
        """Test repeated, out-of-range and too-long inputs."""
        with pytest.raises(DomainError):
            fano_tree.find(sequence)


class TestOracleTrees:
    """Test trees whose oracle forbids subsets."""

    def test_independent_triples(self, fano_group, fano_oracle):
        """Test that only the triangle orbit survives independence."""
        tree = build_tree(fano_group, 7, 3, fano_oracle)
        stats = tree.stats().depths[3]
        assert stats.green == 1
        assert stats.forbidden == 1
        assert orbit_sizes(tree, 3) == [28]

    def test_collinear_lookup_returns_none(self, fano_group, fano_oracle):
        """Test that a line of the Fano plane is ineligible."""
        tree = build_tree(fano_group, 7, 3, fano_oracle)
        line = tree.greens(2)[0].label
        third = next(p for p in range(7) if p not in line and not fano_oracle((*line, p)))
        assert tree.find((*line, third)) is None

    def test_matches_brute_force(self, fano_group, fano_oracle):
        """Test the tree against enumeration of all 168 elements."""
        tree = build_tree(fano_group, 7, 3, fano_oracle)
        assert orbit_sizes(tree, 3) == brute_force_orbits(fano_group, 7, 3, fano_oracle)


class TestVerify:
    """Test the verification report."""

    def test_unrestricted_tree(self, fano_tree):
        """Test resolved lookups and the binomial orbit identity."""
        report = verify(fano_tree, 3, trials=50)
        assert report.resolved == 50
        assert report.forbidden == 0
        assert report.orbit_sum == report.expected_sum == 35
        assert report.passed

    def test_oracle_tree_skips_orbit_identity(self, fano_group, fano_oracle):
        """Test that forbidden subsets are counted and the identity is skipped."""
        tree = build_tree(fano_group, 7, 3, fano_oracle)
        report = verify(tree, 3, trials=100, seed=1)
        assert report.resolved + report.forbidden == 100
        assert report.forbidden > 0
        assert report.orbit_sum is None

    def test_brute_force_without_oracle(self, symmetric3):
        """Test brute-force orbits of S3."""
        assert brute_force_orbits(symmetric3, 3, 2) == [3]
