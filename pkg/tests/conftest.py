"""
Shared test fixtures for the orbitree test suite.
"""

import pytest

from hother.orbitree.config import Budgets, OrbitreeSettings
from hother.orbitree.core.permgroup import Permutation, PermGroup, schreier_sims
from hother.orbitree.geometry.automorphisms import automorphism_generators


@pytest.fixture
def symmetric3() -> PermGroup:
    """S3 acting on three points."""
    group = PermGroup([Permutation.from_cycles(3, (0, 1, 2)), Permutation.from_cycles(3, (0, 1))], 3)
    return schreier_sims(group)


@pytest.fixture(scope="session")
def fano_group() -> PermGroup:
    """PGL(3, 2) on the seven points of the Fano plane."""
    return automorphism_generators("p2", seed=0).group


@pytest.fixture(scope="session")
def p1xp2_group() -> PermGroup:
    """PGL(2, 2) x PGL(3, 2) on the 21 F2-points of P1 x P2."""
    return automorphism_generators("p1xp2", seed=0).group


@pytest.fixture
def settings() -> OrbitreeSettings:
    """Seeded settings with the default budgets."""
    return OrbitreeSettings(seed=7)


@pytest.fixture
def strict_settings() -> OrbitreeSettings:
    """Seeded settings validating retract labels and transporters."""
    return OrbitreeSettings(seed=3, strict=True)


@pytest.fixture
def small_budgets() -> Budgets:
    """Budgets small enough to trip on toy inputs."""
    return Budgets(max_points=50, max_evaluations=50, max_coset_dimension=2)
