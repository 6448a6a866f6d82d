"""Ambient spaces and their canonical point lists.

Every space enumerates its F_{2^k}-points as normalized coordinate rows
(first nonzero coordinate of every factor equal to 1), sorted
lexicographically. The F2 list is the domain on which automorphism groups
act as permutations.
"""

from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import TextIO

import numpy as np

from hother.orbitree.config import Budgets
from hother.orbitree.core.exceptions import DomainError, ResourceError, UnsupportedError
from hother.orbitree.geometry.field import BinaryField, Codes, binary_field
from hother.orbitree.geometry.forms import (
    Exponents,
    FormSpace,
    Polynomial,
    monomials,
    product_monomials,
    weighted_monomials,
)
from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)


class SpaceKind(str, Enum):
    """Kinds of ambient spaces."""

    PROJECTIVE = "projective"
    PRODUCT = "product"
    WEIGHTED = "weighted"
    HYPERSURFACE = "hypersurface"
    GRASSMANNIAN = "grassmannian"
    TWIST = "twist"
    ORTHOGONAL_GRASSMANNIAN = "orthogonal-grassmannian"


@dataclass(frozen=True, eq=False)
class PointSet:
    """Normalized points of a space over F_{2^k}.

    Attributes:
        space_id: Identifier of the ambient space
        coords: ``N x width`` coordinate codes
        field_degree: k such that the codes live in F_{2^k}
    """

    space_id: str
    coords: Codes
    field_degree: int = 1
    extension: int = field(default=1, compare=False)

    def __len__(self) -> int:
        return int(self.coords.shape[0])

    @cached_property
    def _index(self) -> dict[bytes, int]:
        return {row.tobytes(): position for position, row in enumerate(self.coords)}

    def index_of(self, row: Codes) -> int:
        """Position of a normalized coordinate row.

        Raises:
            DomainError: The row is not in the list
        """
        position = self._index.get(np.asarray(row, dtype=np.uint8).tobytes())
        if position is None:
            raise DomainError("Point not in the enumerated list", {"space": self.space_id, "row": list(map(int, row))})
        return position

    def indices_of(self, rows: Codes) -> list[int]:
        return [self.index_of(row) for row in rows]

    def subset(self, indices: Sequence[int]) -> PointSet:
        return PointSet(self.space_id, self.coords[list(indices)], self.field_degree, self.extension)


def grid(order: int, width: int) -> Codes:
    """All ``order^width`` tuples of codes in lexicographic order."""
    if width == 0:
        return np.zeros((1, 0), dtype=np.uint8)
    return np.indices((order,) * width, dtype=np.uint16).reshape(width, -1).T.astype(np.uint8)


def lex_sorted(rows: Codes) -> Codes:
    if rows.shape[0] == 0 or rows.shape[1] == 0:
        return rows
    return rows[np.lexsort(rows.T[::-1])]


def normalize_rows(rows: Codes, field: BinaryField) -> Codes:
    """Scale every row so that its first nonzero entry is 1."""
    rows = np.asarray(rows, dtype=np.uint8)
    nonzero = rows != 0
    has_lead = nonzero.any(axis=1)
    lead_index = nonzero.argmax(axis=1)
    leads = rows[np.arange(rows.shape[0]), lead_index]
    scale = np.where(has_lead, field.inv_table[leads], 1).astype(np.uint8)
    return field.mul_table[scale[:, np.newaxis], rows]


def projective_points(size: int, field: BinaryField) -> Codes:
    """Normalized points of P^{size-1}(F_q), lexicographically sorted."""
    blocks = []
    for lead in range(size):
        tail = grid(field.order, size - lead - 1)
        block = np.zeros((tail.shape[0], size), dtype=np.uint8)
        block[:, lead] = 1
        block[:, lead + 1 :] = tail
        blocks.append(block)
    return lex_sorted(np.vstack(blocks))


def product_rows(parts: Sequence[Codes]) -> Codes:
    """Concatenated rows of the cartesian product, first part major."""
    result = parts[0]
    for part in parts[1:]:
        left = np.repeat(result, part.shape[0], axis=0)
        right = np.tile(part, (result.shape[0], 1))
        result = np.hstack([left, right])
    return result


def _projective_count(size: int, order: int) -> int:
    return (order**size - 1) // (order - 1)


class AmbientSpace(ABC):
    """A space with a canonical point enumeration over every F_{2^k}."""

    kind: SpaceKind

    def __init__(self, space_id: str, factor_sizes: tuple[int, ...]):
        self.space_id = space_id
        self.factor_sizes = factor_sizes
        self._cache: dict[int, PointSet] = {}

    @property
    def width(self) -> int:
        return sum(self.factor_sizes)

    def factor_slices(self) -> list[slice]:
        slices = []
        start = 0
        for size in self.factor_sizes:
            slices.append(slice(start, start + size))
            start += size
        return slices

    def normalize(self, rows: Codes, field: BinaryField) -> Codes:
        """Per-factor projective normalization."""
        rows = np.atleast_2d(np.asarray(rows, dtype=np.uint8))
        return np.hstack([normalize_rows(rows[:, part], field) for part in self.factor_slices()])

    @abstractmethod
    def expected_count(self, k: int) -> int:
        """Number of F_{2^k}-points (used for budget checks before enumeration)."""

    @abstractmethod
    def _enumerate(self, k: int) -> PointSet:
        """Build the point list over F_{2^k}."""

    def enumerate_points(self, k: int = 1, budgets: Budgets | None = None) -> PointSet:
        """Canonical F_{2^k}-points.

        Raises:
            ResourceError: The point count exceeds ``budgets.max_points``
        """
        limits = budgets or Budgets()
        expected = self.expected_count(k)
        if expected > limits.max_points:
            raise ResourceError("max_points", limits.max_points, context={"space": self.space_id, "k": k, "points": expected})
        cached = self._cache.get(k)
        if cached is not None:
            return cached
        points = self._enumerate(k)
        logger.debug("Points enumerated", extra={"space": self.space_id, "k": k, "points": len(points)})
        self._cache[k] = points
        return points

    def contains(self, row: Codes, k: int = 1) -> bool:
        """Membership of a normalized coordinate row over F_{2^k}."""
        field_ = binary_field(self.field_degree_for(k))
        coords = np.atleast_2d(np.asarray(row, dtype=np.uint8))
        return all(int(eq.evaluate(coords, field_)[0]) == 0 for eq in self.equations()) and all(
            coords[0, part].any() for part in self.factor_slices()
        )

    def field_degree_for(self, k: int) -> int:
        """Degree of the field holding the coordinates of F_{2^k}-points."""
        return k

    def equations(self) -> list[Polynomial]:
        """Defining equations inside :meth:`form_ambient`."""
        return []

    def form_ambient(self) -> AmbientSpace:
        """The space whose coordinates the forms are written in."""
        return self

    def form_basis(self, degree: tuple[int, ...]) -> list[Polynomial]:
        return [Polynomial(((e, 1),)) for e in self.form_exponents(degree)]

    def form_exponents(self, degree: tuple[int, ...]) -> list[Exponents]:
        if len(degree) != len(self.factor_sizes):
            raise DomainError("Degree does not match the factors", {"space": self.space_id, "degree": list(degree)})
        return product_monomials(self.factor_sizes, degree)

    def form_coordinates(self, forms: FormSpace, poly: Polynomial) -> int:
        return forms.monomial_coordinates(poly)

    def forms(self, degree: int | Sequence[int]) -> FormSpace:
        return FormSpace(self.form_ambient(), degree)

    def export_points(self, k: int, stream: TextIO, budgets: Budgets | None = None) -> int:
        """Write the point list: a ``# field-degree`` header, then one coordinate tuple per line."""
        points = self.enumerate_points(k, budgets)
        stream.write(f"# space {self.space_id}\n# field-degree {points.field_degree}\n")
        for row in points.coords:
            stream.write(" ".join(map(str, row.tolist())) + "\n")
        return len(points)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.space_id!r})"


class ProjectiveSpace(AmbientSpace):
    """P^n."""

    kind = SpaceKind.PROJECTIVE

    def __init__(self, n: int, space_id: str | None = None):
        super().__init__(space_id or f"p{n}", (n + 1,))
        self.n = n

    def expected_count(self, k: int) -> int:
        return _projective_count(self.n + 1, 1 << k)

    def _enumerate(self, k: int) -> PointSet:
        return PointSet(self.space_id, projective_points(self.n + 1, binary_field(k)), k, k)


class ProductSpace(AmbientSpace):
    """P^a x P^b (x ...), coordinates concatenated."""

    kind = SpaceKind.PRODUCT

    def __init__(self, dims: Sequence[int], space_id: str | None = None):
        self.dims = tuple(dims)
        super().__init__(space_id or "x".join(f"p{d}" for d in self.dims), tuple(d + 1 for d in self.dims))

    @property
    def has_swap(self) -> bool:
        return len(self.dims) == 2 and self.dims[0] == self.dims[1]

    def expected_count(self, k: int) -> int:
        count = 1
        for size in self.factor_sizes:
            count *= _projective_count(size, 1 << k)
        return count

    def _enumerate(self, k: int) -> PointSet:
        field_ = binary_field(k)
        return PointSet(self.space_id, product_rows([projective_points(s, field_) for s in self.factor_sizes]), k, k)


class WeightedProjectiveSpace(AmbientSpace):
    """Weighted projective space; only weights ``(1, ..., 1, w)`` with one heavy variable.

    Points: if a weight-one coordinate is nonzero the first such is scaled to 1;
    otherwise the point is ``(0, ..., 0, 1)`` (squaring is bijective in
    characteristic 2, so every heavy coordinate can be scaled to 1).
    """

    kind = SpaceKind.WEIGHTED

    def __init__(self, weights: Sequence[int] = (1, 1, 1, 2), space_id: str = "wp1112"):
        self.weights = tuple(weights)
        if any(w != 1 for w in self.weights[:-1]) or self.weights[-1] not in (1, 2):
            raise UnsupportedError("weighted-projective", "Only weights (1,...,1,1|2) are supported")
        super().__init__(space_id, (len(self.weights),))

    def expected_count(self, k: int) -> int:
        q = 1 << k
        light = len(self.weights) - 1
        return _projective_count(light, q) * q + 1

    def normalize(self, rows: Codes, field: BinaryField) -> Codes:
        rows = np.atleast_2d(np.asarray(rows, dtype=np.uint8)).copy()
        heavy = self.weights[-1]
        for index, row in enumerate(rows):
            light = np.flatnonzero(row[:-1])
            if light.size:
                scale = field.inv(int(row[light[0]]))
                row[:-1] = field.mul_table[scale, row[:-1]]
                row[-1] = field.mul(field.power(scale, heavy), int(row[-1]))
            elif row[-1]:
                row[-1] = 1
            rows[index] = row
        return rows

    def _enumerate(self, k: int) -> PointSet:
        field_ = binary_field(k)
        light = projective_points(len(self.weights) - 1, field_)
        heavy = grid(field_.order, 1)
        rows = product_rows([light, heavy])
        tail = np.zeros((1, len(self.weights)), dtype=np.uint8)
        tail[0, -1] = 1
        return PointSet(self.space_id, lex_sorted(np.vstack([rows, tail])), k, k)

    def contains(self, row: Codes, k: int = 1) -> bool:
        return bool(np.asarray(row).any())

    def form_exponents(self, degree: tuple[int, ...]) -> list[Exponents]:
        if len(degree) != 1:
            raise DomainError("Weighted forms take a single degree", {"degree": list(degree)})
        return weighted_monomials(self.weights, degree[0])


class Hypersurface(AmbientSpace):
    """Zero locus of one form inside a product of projective spaces or a weighted space."""

    kind = SpaceKind.HYPERSURFACE

    def __init__(self, ambient: AmbientSpace, polynomial: Polynomial, space_id: str):
        super().__init__(space_id, ambient.factor_sizes)
        self.ambient = ambient
        self.polynomial = polynomial

    def normalize(self, rows: Codes, field: BinaryField) -> Codes:
        return self.ambient.normalize(rows, field)

    def expected_count(self, k: int) -> int:
        return self.ambient.expected_count(k)

    def _enumerate(self, k: int) -> PointSet:
        full = self.ambient.enumerate_points(k)
        values = self.polynomial.evaluate(full.coords, binary_field(k))
        return PointSet(self.space_id, full.coords[values == 0], k, k)

    def equations(self) -> list[Polynomial]:
        return [self.polynomial]

    def form_ambient(self) -> AmbientSpace:
        return self.ambient


def x21_polynomial() -> Polynomial:
    """``x0^2 y0 + x0 x1 y1 + x1^2 y2`` on P1 x P2."""
    return Polynomial.from_monomials([(2, 0, 1, 0, 0), (1, 1, 0, 1, 0), (0, 2, 0, 0, 1)])


def x11_polynomial() -> Polynomial:
    """``x0 y0 + x1 y1`` on P1 x P3."""
    return Polynomial.from_monomials([(1, 0, 1, 0, 0, 0), (0, 1, 0, 1, 0, 0)])


SELF_ADJOINT_CUBICS: dict[str, tuple[Exponents, ...]] = {
    "x3-1": ((0, 2, 1, 0), (0, 1, 2, 0)),
    "x3-2": ((0, 3, 0, 0), (0, 2, 1, 0), (0, 1, 2, 0)),
    "x3-3": ((0, 3, 0, 0), (0, 1, 2, 0), (0, 0, 3, 0)),
}
"""Binary cubics ``P(x1, x2)`` of the self-adjoint hypersurfaces ``x0 x3 + P`` in P(1:1:1:2)."""


def self_adjoint_polynomial(space_id: str) -> Polynomial:
    """``x0 x3 + P(x1, x2)`` for one of :data:`SELF_ADJOINT_CUBICS`."""
    return Polynomial.from_monomials([(1, 0, 0, 1), *SELF_ADJOINT_CUBICS[space_id]])


PLUCKER_PAIRS: list[tuple[int, int]] = list(itertools.combinations(range(5), 2))
"""Plücker coordinate order: ``p_ij`` for ``i < j`` lexicographically."""


def plucker_quadrics() -> list[Polynomial]:
    """``p_ij p_kl + p_ik p_jl + p_il p_jk`` for ``i < j < k < l``."""
    position = {pair: index for index, pair in enumerate(PLUCKER_PAIRS)}
    quadrics = []
    for i, j, k, l in itertools.combinations(range(5), 4):
        terms = []
        for first, second in (((i, j), (k, l)), ((i, k), (j, l)), ((i, l), (j, k))):
            exponent = [0] * 10
            exponent[position[first]] += 1
            exponent[position[second]] += 1
            terms.append(tuple(exponent))
        quadrics.append(Polynomial.from_monomials(terms))
    return quadrics


class Grassmannian(AmbientSpace):
    """Gr(2,5) in P^9 through Plücker coordinates."""

    kind = SpaceKind.GRASSMANNIAN

    def __init__(self, space_id: str = "gr25"):
        super().__init__(space_id, (10,))
        self.ambient = ProjectiveSpace(9, "p9")

    def expected_count(self, k: int) -> int:
        q = 1 << k
        return (q**5 - 1) * (q**4 - 1) // ((q**2 - 1) * (q - 1))

    def _enumerate(self, k: int) -> PointSet:
        field_ = binary_field(k)
        q = field_.order
        blocks = []
        for a, b in PLUCKER_PAIRS:
            free0 = [c for c in range(a + 1, 5) if c != b]
            free1 = list(range(b + 1, 5))
            values = grid(q, len(free0) + len(free1))
            count = values.shape[0]
            first = np.zeros((count, 5), dtype=np.uint8)
            second = np.zeros((count, 5), dtype=np.uint8)
            first[:, a] = 1
            second[:, b] = 1
            first[:, free0] = values[:, : len(free0)]
            second[:, free1] = values[:, len(free0) :]
            blocks.append(plucker_rows(first, second, field_))
        return PointSet(self.space_id, lex_sorted(np.vstack(blocks)), k, k)

    def equations(self) -> list[Polynomial]:
        return plucker_quadrics()

    def form_ambient(self) -> AmbientSpace:
        return self.ambient


def plucker_rows(first: Codes, second: Codes, field: BinaryField) -> Codes:
    """Plücker vectors of the row pairs ``(first[i], second[i])``."""
    columns = [
        field.mul_table[first[:, i], second[:, j]] ^ field.mul_table[first[:, j], second[:, i]] for i, j in PLUCKER_PAIRS
    ]
    return np.column_stack(columns).astype(np.uint8)


class TwistedProduct(AmbientSpace):
    """The quadratic twist of P2 x P2 (Frobenius composed with the factor swap).

    Its F_{2^i}-points are pairs ``(p, q)``: for odd ``i`` the point ``p``
    ranges over P2(F_{4^i}) with ``q = Frob^i(p)``; for even ``i`` both
    ``p`` and ``q`` range over P2(F_{2^i}). Coordinates are stored in
    F_{2^{2i}} (odd i) or F_{2^i} (even i). Forms of bidegree ``(a, a)``
    use the descended basis over F4::

        E_aa,  E_ab + E_ba,  w E_ab + w^2 E_ba   (a < b)

    where ``E_ab`` is the product of monomial ``a`` in ``p`` and monomial ``b`` in ``q``.
    """

    kind = SpaceKind.TWIST

    def __init__(self, space_id: str = "twist"):
        super().__init__(space_id, (3, 3))

    def expected_count(self, k: int) -> int:
        if k % 2:
            return _projective_count(3, 1 << (2 * k))
        return _projective_count(3, 1 << k) ** 2

    def field_degree_for(self, k: int) -> int:
        return 2 * k if k % 2 else k

    def _enumerate(self, k: int) -> PointSet:
        degree = self.field_degree_for(k)
        field_ = binary_field(degree)
        if k % 2:
            base = projective_points(3, field_)
            conjugate = np.vectorize(lambda c: field_.frobenius(int(c), k), otypes=[np.uint8])(base)
            rows = np.hstack([base, conjugate])
        else:
            plane = projective_points(3, field_)
            rows = product_rows([plane, plane])
        return PointSet(self.space_id, lex_sorted(rows), degree, k)

    def contains(self, row: Codes, k: int = 1) -> bool:
        coords = np.asarray(row, dtype=np.uint8)
        if not (coords[:3].any() and coords[3:].any()):
            return False
        if k % 2:
            field_ = binary_field(self.field_degree_for(k))
            return all(field_.frobenius(int(a), k) == int(b) for a, b in zip(coords[:3], coords[3:], strict=True))
        return True

    def form_basis(self, degree: tuple[int, ...]) -> list[Polynomial]:
        if len(degree) != 2 or degree[0] != degree[1]:
            raise UnsupportedError("twist", "Twisted forms need a bidegree (a, a)", {"degree": list(degree)})
        plane = monomials(3, degree[0])
        f4 = binary_field(2)
        omega = f4.omega()
        omega_squared = f4.mul(omega, omega)
        basis: list[Polynomial] = []
        for a, first in enumerate(plane):
            for b, second in enumerate(plane):
                if a == b:
                    basis.append(Polynomial((((*first, *second), 1),), 2))
                elif a < b:
                    ab, ba = (*first, *second), (*second, *first)
                    basis.append(Polynomial.from_mapping({ab: 1, ba: 1}, 2))
                    basis.append(Polynomial.from_mapping({ab: omega, ba: omega_squared}, 2))
        return basis

    def form_coordinates(self, forms: FormSpace, poly: Polynomial) -> int:
        plane = monomials(3, forms.degree[0])
        terms = poly.as_dict()
        packed = 0
        position = 0
        for a, first in enumerate(plane):
            for b, second in enumerate(plane):
                if a == b:
                    coefficient = terms.get((*first, *second), 0)
                    if coefficient not in (0, 1):
                        raise DomainError("Diagonal coefficient outside F2")
                    packed |= coefficient << position
                    position += 1
                elif a < b:
                    coefficient = terms.get((*first, *second), 0)
                    conjugate = terms.get((*second, *first), 0)
                    if binary_field(2).square_table[coefficient] != conjugate:
                        raise DomainError("Polynomial does not satisfy the descent condition")
                    packed |= (coefficient & 1) << position
                    packed |= (coefficient >> 1 & 1) << (position + 1)
                    position += 2
        return packed


class OrthogonalGrassmannianSpace(AmbientSpace):
    """OG+(5,10) in P^15 through the spinor embedding."""

    kind = SpaceKind.ORTHOGONAL_GRASSMANNIAN

    def __init__(self, space_id: str = "og+"):
        super().__init__(space_id, (16,))
        self.ambient = ProjectiveSpace(15, "p15")

    def expected_count(self, k: int) -> int:
        q = 1 << k
        count = 1
        for i in range(1, 5):
            count *= q**i + 1
        return count

    def _enumerate(self, k: int) -> PointSet:
        from hother.orbitree.geometry import spinor

        return spinor.og_points(k)

    def equations(self) -> list[Polynomial]:
        from hother.orbitree.geometry import spinor

        return spinor.spinor_quadrics()

    def contains(self, row: Codes, k: int = 1) -> bool:
        from hother.orbitree.geometry import spinor

        coords = np.asarray(row, dtype=np.uint8)
        return bool(coords.any()) and spinor.is_pure(coords, binary_field(k))

    def form_ambient(self) -> AmbientSpace:
        return self.ambient


SPACE_IDS: dict[str, str] = {
    "p1": "p1",
    "p2": "p2",
    "fano": "p2",
    "p3": "p3",
    "p9": "p9",
    "dual-p9": "dual-p9",
    "p1xp1": "p1xp1",
    "p1xp2": "p1xp2",
    "p2xp2": "p2xp2",
    "x21": "x21",
    "x11": "x11",
    "gr25": "gr25",
    "wp1112": "wp1112",
    "x3-1": "x3-1",
    "x3-2": "x3-2",
    "x3-3": "x3-3",
    "twist": "twist",
    "og+": "og+",
}

_SPACES: dict[str, AmbientSpace] = {}


def _build(space_id: str) -> AmbientSpace:
    match space_id:
        case "p1" | "p2" | "p3" | "p9":
            return ProjectiveSpace(int(space_id[1:]))
        case "dual-p9":
            return ProjectiveSpace(9, "dual-p9")
        case "p1xp1":
            return ProductSpace((1, 1))
        case "p1xp2":
            return ProductSpace((1, 2))
        case "p2xp2":
            return ProductSpace((2, 2))
        case "x21":
            return Hypersurface(ProductSpace((1, 2)), x21_polynomial(), "x21")
        case "x11":
            return Hypersurface(ProductSpace((1, 3)), x11_polynomial(), "x11")
        case "gr25":
            return Grassmannian()
        case "wp1112":
            return WeightedProjectiveSpace()
        case "x3-1" | "x3-2" | "x3-3":
            return Hypersurface(WeightedProjectiveSpace(), self_adjoint_polynomial(space_id), space_id)
        case "twist":
            return TwistedProduct()
        case "og+":
            return OrthogonalGrassmannianSpace()
        case _:
            raise DomainError("Unknown space id", {"space": space_id, "known": sorted(SPACE_IDS)})


def ambient_space(space_id: str) -> AmbientSpace:
    """Shared space instance for an id (``fano`` is an alias of ``p2``)."""
    canonical = SPACE_IDS.get(space_id)
    if canonical is None:
        raise DomainError("Unknown space id", {"space": space_id, "known": sorted(SPACE_IDS)})
    space = _SPACES.get(canonical)
    if space is None:
        space = _build(canonical)
        _SPACES[canonical] = space
    return space


def enumerate_points(space: AmbientSpace | str, k: int = 1, budgets: Budgets | None = None) -> PointSet:
    """Canonical F_{2^k}-points of a space."""
    resolved = ambient_space(space) if isinstance(space, str) else space
    return resolved.enumerate_points(k, budgets)
