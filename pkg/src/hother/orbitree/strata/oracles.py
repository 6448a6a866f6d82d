"""Forbidden-tuple predicates for the strata orbit trees.

Each oracle judges the underlying point set of a tuple, so its verdict is
independent of the order and invariant under the automorphism group (all
conditions are phrased through projections, spans and intersection
dimensions).
"""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Sequence

import numpy as np

from hother.orbitree.config import OgOracleSettings
from hother.orbitree.geometry import gf2, spinor
from hother.orbitree.geometry.sections import QuadricSection
from hother.orbitree.geometry.spaces import PointSet, ambient_space
from hother.orbitree.strata.models import OracleKind, StratumSpec
from hother.orbitree.types import EligibilityOracle, Label, allow_all
from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)


class ProjectionOracle:
    """Forbids sets with more than ``max_share`` points over one point of a factor."""

    def __init__(self, points: PointSet, factors: Sequence[slice], max_share: int):
        self.max_share = max_share
        self._keys = [[row[part].tobytes() for row in points.coords] for part in factors]

    def __call__(self, points: Label, /) -> bool:
        for keys in self._keys:
            shares = Counter(keys[p] for p in points)
            if shares and max(shares.values()) > self.max_share:
                return False
        return True


class IndependenceOracle:
    """Forbids linearly dependent sets of F2 vectors."""

    def __init__(self, points: PointSet):
        self._packed = gf2.pack_rows(points.coords)

    def __call__(self, points: Label, /) -> bool:
        return gf2.rank(self._packed[p] for p in points) == len(points)


class OrthogonalGrassmannianOracle:
    """Forbidden tuples for linear sections of OG+.

    A set is forbidden when three of its points are collinear or four coplanar,
    two of its Lagrangians meet in dimension above 1, its span carries more than
    ``max_rational_points`` F2-points of OG+, or the span meets OG+ in more
    than ``threshold`` points over some F_{2^k}, ``k <= k_max`` (taken as a
    positive-dimensional intersection).
    """

    def __init__(self, settings: OgOracleSettings | None = None):
        self.settings = settings or OgOracleSettings()
        points = spinor.og_points(1)
        self._vectors = gf2.pack_rows(points.coords)
        self._on_og = set(self._vectors)
        self._lagrangians = [gf2.pack_rows(lag.rows) for lag in spinor.lagrangian_points(1)]
        self._quadrics = spinor.spinor_quadrics()
        self._dimension_cache: dict[tuple[int, ...], bool] = {}

    def rational_points(self, basis: Sequence[int]) -> list[int]:
        """Packed F2-points of OG+ on the span of ``basis``."""
        return [v for v in gf2.span_elements(basis) if v in self._on_og]

    def reason(self, points: Label) -> str | None:
        """Name of the first violated condition, or ``None`` when eligible."""
        vectors = [self._vectors[p] for p in points]
        for a, b, c in itertools.combinations(vectors, 3):
            if a ^ b == c:
                return "collinear"
        for quadruple in itertools.combinations(vectors, 4):
            if gf2.rank(quadruple) < 4:
                return "coplanar"
        for a, b in itertools.combinations(points, 2):
            if gf2.intersection_dimension(self._lagrangians[a], self._lagrangians[b]) > 1:
                return "lagrangian-intersection"
        basis = gf2.rref(vectors)
        rational = len(self.rational_points(basis))
        if rational > self.settings.max_rational_points:
            return "rational-points"
        if rational > self.settings.threshold or self.positive_dimensional(basis):
            return "positive-dimensional"
        return None

    def positive_dimensional(self, basis: Sequence[int]) -> bool:
        """Whether the span of packed ``basis`` rows meets OG+ in more than ``threshold`` points over some F_{2^k}."""
        key = tuple(basis)
        cached = self._dimension_cache.get(key)
        if cached is not None:
            return cached
        rows = np.array([gf2.unpack(b, 16) for b in basis], dtype=np.uint8)
        section = QuadricSection(rows, self._quadrics)
        threshold = self.settings.threshold
        verdict = any(section.count(k, limit=threshold) > threshold for k in range(2, self.settings.k_max + 1))
        self._dimension_cache[key] = verdict
        return verdict

    def __call__(self, points: Label, /) -> bool:
        return self.reason(points) is None


def eligibility_oracle_for(spec: StratumSpec, settings: OgOracleSettings | None = None) -> EligibilityOracle:
    """The forbidden-tuple predicate of a stratum's orbit tree."""
    match spec.oracle:
        case OracleKind.NONE:
            return allow_all
        case OracleKind.PLANE_PROJECTIONS:
            space = ambient_space(spec.ambients[0])
            return ProjectionOracle(space.enumerate_points(1), space.factor_slices(), 2)
        case OracleKind.LINE_PROJECTION:
            space = ambient_space(spec.ambients[0])
            return ProjectionOracle(space.enumerate_points(1), space.factor_slices()[:1], 4)
        case OracleKind.INDEPENDENT:
            return IndependenceOracle(ambient_space("dual-p9").enumerate_points(1))
        case OracleKind.ORTHOGONAL_GRASSMANNIAN:
            return OrthogonalGrassmannianOracle(settings)
