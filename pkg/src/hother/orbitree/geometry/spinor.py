"""Spinor calculus for the orthogonal Grassmannian OG+(5, 10).

Coordinates on ``V = F^10`` are ``x_0 .. x_9`` with quadratic form
``Q(x) = x_0 x_5 + x_1 x_6 + ... + x_4 x_9``. ``L0`` is spanned by
``e_0 .. e_4`` and ``L_inf`` by ``e_5 .. e_9``. The spinor module is the
exterior algebra of ``L_inf``: the basis wedge ``e_S`` for ``S`` a subset of
``{0, .., 4}`` (bit ``j`` standing for ``e_{5+j}``) is stored at index
``mask(S)`` of a length-32 vector. Pure spinors live in the even half, whose
16 coordinates are ordered by :data:`EVEN_SUBSETS` (size, then lexicographic),
so the vacuum ``1`` comes first.

Clifford action (signs vanish in characteristic 2): ``e_{5+j}`` is creation
``e_S -> e_{S+j}`` and ``e_i`` (``i < 5``) is contraction ``e_S -> e_{S-i}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cache
from typing import TYPE_CHECKING

import numpy as np
import numpy.typing as npt

from hother.orbitree.config import Budgets
from hother.orbitree.core.exceptions import ComponentError, DomainError, IntegrityError, PurityError, ResourceError
from hother.orbitree.core.permgroup import PermGroup, Permutation, schreier_sims
from hother.orbitree.geometry import gf2, linalg
from hother.orbitree.geometry.field import BinaryField, Codes, binary_field
from hother.orbitree.geometry.forms import Polynomial, monomial_values, monomials
from hother.orbitree.utils.logging import get_logger

if TYPE_CHECKING:
    from hother.orbitree.geometry.spaces import PointSet

logger = get_logger(__name__)

RANK = 5
DIMENSION = 2 * RANK


def _mask(subset: tuple[int, ...]) -> int:
    return sum(1 << j for j in subset)


PAIRS: tuple[tuple[int, int], ...] = tuple(itertools.combinations(range(RANK), 2))
QUADRUPLES: tuple[tuple[int, ...], ...] = tuple(itertools.combinations(range(RANK), 4))
EVEN_SUBSETS: tuple[tuple[int, ...], ...] = ((), *PAIRS, *QUADRUPLES)
ODD_SUBSETS: tuple[tuple[int, ...], ...] = (
    *itertools.combinations(range(RANK), 1),
    *itertools.combinations(range(RANK), 3),
    tuple(range(RANK)),
)
EVEN_MASKS = np.array([_mask(s) for s in EVEN_SUBSETS], dtype=np.int64)
ODD_MASKS = np.array([_mask(s) for s in ODD_SUBSETS], dtype=np.int64)

_EVEN_POSITION = np.full(1 << RANK, -1, dtype=np.int64)
_EVEN_POSITION[EVEN_MASKS] = np.arange(EVEN_MASKS.size)
_ODD_POSITION = np.full(1 << RANK, -1, dtype=np.int64)
_ODD_POSITION[ODD_MASKS] = np.arange(ODD_MASKS.size)

SO_ORDER = 2**20 * (2**5 - 1) * (2**2 - 1) * (2**4 - 1) * (2**6 - 1) * (2**8 - 1)
"""Order of SO(V)(F2) for the split form on F2^10."""


def _operator_tables() -> tuple[list[npt.NDArray[np.int64]], list[npt.NDArray[np.int64]]]:
    masks = np.arange(1 << RANK)
    sources: list[npt.NDArray[np.int64]] = []
    targets: list[npt.NDArray[np.int64]] = []
    for i in range(DIMENSION):
        if i < RANK:
            present = masks[(masks >> i) & 1 == 1]
            sources.append(present)
            targets.append(present ^ (1 << i))
        else:
            j = i - RANK
            absent = masks[(masks >> j) & 1 == 0]
            sources.append(absent)
            targets.append(absent | (1 << j))
    return sources, targets


_SOURCES, _TARGETS = _operator_tables()


def _even_to_odd_operators() -> npt.NDArray[np.uint8]:
    """``(10, 16, 16)`` 0/1 matrices of the basis vectors acting from even to odd spinors."""
    operators = np.zeros((DIMENSION, ODD_MASKS.size, EVEN_MASKS.size), dtype=np.uint8)
    for i in range(DIMENSION):
        for source, target in zip(_SOURCES[i], _TARGETS[i], strict=True):
            if _EVEN_POSITION[source] >= 0:
                operators[i, _ODD_POSITION[target], _EVEN_POSITION[source]] = 1
    return operators


_EVEN_TO_ODD = _even_to_odd_operators()


def gram_matrix() -> Codes:
    """Matrix of the polar form ``B``."""
    gram = np.zeros((DIMENSION, DIMENSION), dtype=np.uint8)
    for i in range(RANK):
        gram[i, i + RANK] = gram[i + RANK, i] = 1
    return gram


def quadratic_form(vector: npt.ArrayLike, field: BinaryField | None = None) -> int:
    x = np.asarray(vector, dtype=np.uint8)
    return (field or binary_field(1)).dot(x[:RANK], x[RANK:])


def polar_form(first: npt.ArrayLike, second: npt.ArrayLike, field: BinaryField | None = None) -> int:
    """``B(x, y) = Q(x + y) - Q(x) - Q(y)``."""
    f = field or binary_field(1)
    x = np.asarray(first, dtype=np.uint8)
    y = np.asarray(second, dtype=np.uint8)
    return f.dot(x[:RANK], y[RANK:]) ^ f.dot(x[RANK:], y[:RANK])


def is_isotropic(rows: Codes, field: BinaryField | None = None) -> bool:
    """Whether the row space is totally isotropic for ``Q``."""
    f = field or binary_field(1)
    if any(quadratic_form(row, f) for row in rows):
        return False
    return not any(polar_form(a, b, f) for a, b in itertools.combinations(rows, 2))


def _canonical_rows(rows: npt.ArrayLike, field: BinaryField) -> Codes:
    array = np.atleast_2d(np.asarray(rows, dtype=np.uint8))
    if field.degree == 1:
        basis = gf2.rref(gf2.pack_rows(array))
        if not basis:
            return np.zeros((0, array.shape[1]), dtype=np.uint8)
        return np.array([gf2.unpack(row, array.shape[1]) for row in basis], dtype=np.uint8)
    return linalg.rref(array, field)


@dataclass(frozen=True, eq=False)
class Lagrangian:
    """A maximal isotropic subspace, stored as its reduced row echelon basis."""

    rows: Codes
    field_degree: int = 1

    @classmethod
    def from_rows(cls, rows: npt.ArrayLike, field: BinaryField | None = None) -> Lagrangian:
        """Validate and canonicalize a spanning set.

        Raises:
            DomainError: The rows do not span a 5-dimensional totally isotropic subspace
        """
        f = field or binary_field(1)
        reduced = _canonical_rows(rows, f)
        if reduced.shape != (RANK, DIMENSION):
            raise DomainError("A Lagrangian needs five independent vectors in F^10", {"rank": int(reduced.shape[0])})
        if not is_isotropic(reduced, f):
            raise DomainError("Subspace is not totally isotropic")
        return cls(reduced, f.degree)

    @property
    def field(self) -> BinaryField:
        return binary_field(self.field_degree)

    def key(self) -> bytes:
        return self.rows.tobytes()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lagrangian):
            return NotImplemented
        return self.field_degree == other.field_degree and self.key() == other.key()

    def __hash__(self) -> int:
        return hash((self.field_degree, self.key()))

    def transform(self, matrix: Codes) -> Lagrangian:
        """Image under ``x -> matrix @ x``."""
        image = linalg.matmul(self.rows, np.asarray(matrix, dtype=np.uint8).T, self.field)
        return Lagrangian(_canonical_rows(image, self.field), self.field_degree)

    def __repr__(self) -> str:
        return f"Lagrangian({self.rows.tolist()})"


def standard_lagrangian(field_degree: int = 1) -> Lagrangian:
    """``L0 = span(e_0, .., e_4)``."""
    return Lagrangian(np.hstack([np.eye(RANK, dtype=np.uint8), np.zeros((RANK, RANK), dtype=np.uint8)]), field_degree)


def infinity_lagrangian(field_degree: int = 1) -> Lagrangian:
    """``L_inf = span(e_5, .., e_9)``."""
    return Lagrangian(np.hstack([np.zeros((RANK, RANK), dtype=np.uint8), np.eye(RANK, dtype=np.uint8)]), field_degree)


def intersection_dimension(first: Lagrangian, second: Lagrangian) -> int:
    degree = max(first.field_degree, second.field_degree)
    if degree == 1:
        return gf2.intersection_dimension(gf2.pack_rows(first.rows), gf2.pack_rows(second.rows))
    field = binary_field(degree)
    a = field.embed_array(first.rows, first.field)
    b = field.embed_array(second.rows, second.field)
    return linalg.intersection_dimension(a, b, field)


def even_to_full(spinor: npt.ArrayLike) -> Codes:
    """Length-32 algebra vector of an even spinor given in :data:`EVEN_SUBSETS` order."""
    full = np.zeros(1 << RANK, dtype=np.uint8)
    full[EVEN_MASKS] = np.asarray(spinor, dtype=np.uint8)
    return full


def clifford_action(vector: npt.ArrayLike, element: npt.ArrayLike, field: BinaryField | None = None) -> Codes:
    """``v . s`` for ``v`` in ``V`` and ``s`` a length-32 element of the exterior algebra."""
    f = field or binary_field(1)
    v = np.asarray(vector, dtype=np.uint8)
    s = np.asarray(element, dtype=np.uint8)
    if v.shape != (DIMENSION,) or s.shape != (1 << RANK,):
        raise DomainError("Clifford action expects a vector of length 10 and an algebra element of length 32")
    result = np.zeros(1 << RANK, dtype=np.uint8)
    for i in np.flatnonzero(v):
        result[_TARGETS[i]] ^= f.mul_table[v[i], s[_SOURCES[i]]]
    return result


def clifford_matrix(spinor: npt.ArrayLike, field: BinaryField | None = None) -> Codes:
    """``16 x 10`` matrix of ``v -> v . s`` from ``V`` to the odd spinors."""
    f = field or binary_field(1)
    s = np.asarray(spinor, dtype=np.uint8)
    return np.bitwise_xor.reduce(f.mul_table[_EVEN_TO_ODD, s[np.newaxis, np.newaxis, :]], axis=2).T.copy()


def _check_spinor(spinor: npt.ArrayLike) -> Codes:
    s = np.asarray(spinor, dtype=np.uint8)
    if s.shape != (EVEN_MASKS.size,):
        raise DomainError("Even spinors have 16 coordinates", {"shape": list(s.shape)})
    if not s.any():
        raise DomainError("The zero vector is not a spinor")
    return s


def is_pure(spinor: npt.ArrayLike, field: BinaryField | None = None) -> bool:
    """Whether ``v -> v . s`` has a 5-dimensional kernel."""
    f = field or binary_field(1)
    matrix = clifford_matrix(_check_spinor(spinor), f)
    rank = gf2.rank(gf2.pack_columns(matrix)) if f.degree == 1 else linalg.rank(matrix, f)
    return rank == DIMENSION - RANK


def spinor_to_lagrangian(spinor: npt.ArrayLike, field: BinaryField | None = None) -> Lagrangian:
    """Kernel of the Clifford action on a pure spinor.

    Raises:
        PurityError: The spinor is not pure
    """
    f = field or binary_field(1)
    kernel = linalg.null_space(clifford_matrix(_check_spinor(spinor), f), f)
    if kernel.shape[0] != RANK:
        raise PurityError(context={"kernel_dimension": int(kernel.shape[0])})
    return Lagrangian.from_rows(kernel, f)


def lagrangian_to_spinor(lagrangian: Lagrangian) -> Codes:
    """Normalized generator of the joint kernel of a Lagrangian's Clifford operators.

    Raises:
        ComponentError: The Lagrangian is on the component not containing ``L0``
    """
    field = lagrangian.field
    meet = intersection_dimension(lagrangian, standard_lagrangian(lagrangian.field_degree))
    if meet % 2 == 0:
        raise ComponentError(meet)
    blocks = [
        np.bitwise_xor.reduce(field.mul_table[row[:, np.newaxis, np.newaxis], _EVEN_TO_ODD], axis=0)
        for row in lagrangian.rows
    ]
    kernel = linalg.null_space(np.vstack(blocks), field)
    if kernel.shape[0] != 1:
        raise IntegrityError("Joint kernel of a Lagrangian is not one-dimensional", context={"dimension": int(kernel.shape[0])})
    return linalg.normalize_projective(kernel[0], field)


def big_cell_spinors(alternating: Codes, field: BinaryField) -> Codes:
    """Spinors of the graphs of alternating matrices (entries in :data:`PAIRS` order).

    The graph of ``A`` is spanned by ``e_i + sum_j A_ij e_{5+j}``; its spinor has
    vacuum coordinate 1, pair coordinates ``A_ij`` and Pfaffians on quadruples.
    """
    count = alternating.shape[0]
    spinors = np.zeros((count, EVEN_MASKS.size), dtype=np.uint8)
    spinors[:, 0] = 1
    spinors[:, 1 : 1 + len(PAIRS)] = alternating
    position = {pair: index for index, pair in enumerate(PAIRS)}
    mul = field.mul_table
    for column, (i, j, k, l) in enumerate(QUADRUPLES, start=1 + len(PAIRS)):
        a = [alternating[:, position[pair]] for pair in ((i, j), (k, l), (i, k), (j, l), (i, l), (j, k))]
        spinors[:, column] = mul[a[0], a[1]] ^ mul[a[2], a[3]] ^ mul[a[4], a[5]]
    return spinors


def _chart_source(chart: int) -> npt.NDArray[np.int64]:
    """Column gather realizing ``e_S -> e_{S xor chart}`` on even spinors."""
    return _EVEN_POSITION[EVEN_MASKS ^ chart]


def _graph_rows(alternating: Codes, chart: int) -> npt.NDArray[np.uint8]:
    """``N x 5 x 10`` bases of the chart Lagrangians."""
    count = alternating.shape[0]
    rows = np.zeros((count, RANK, DIMENSION), dtype=np.uint8)
    rows[:, np.arange(RANK), np.arange(RANK)] = 1
    for column, (i, j) in enumerate(PAIRS):
        rows[:, i, RANK + j] = alternating[:, column]
        rows[:, j, RANK + i] = alternating[:, column]
    for i in range(RANK):
        if chart >> i & 1:
            rows[:, :, [i, RANK + i]] = rows[:, :, [RANK + i, i]]
    return rows


def _grid(order: int, width: int) -> Codes:
    return np.indices((order,) * width, dtype=np.uint16).reshape(width, -1).T.astype(np.uint8)


@cache
def _chart_enumeration(k: int) -> tuple[Codes, npt.NDArray[np.uint8]]:
    """Sorted OG+ spinors over F_{2^k} with their chart Lagrangian bases."""
    field = binary_field(k)
    alternating = _grid(field.order, len(PAIRS))
    cell = big_cell_spinors(alternating, field)
    spinor_blocks: list[Codes] = []
    row_blocks: list[npt.NDArray[np.uint8]] = []
    for position, chart in enumerate(EVEN_MASKS.tolist()):
        moved = cell[:, _chart_source(chart)]
        keep = ~moved[:, :position].any(axis=1)
        spinor_blocks.append(moved[keep])
        row_blocks.append(_graph_rows(alternating[keep], chart))
    spinors = np.vstack(spinor_blocks)
    rows = np.concatenate(row_blocks)
    order = np.lexsort(spinors.T[::-1])
    return spinors[order], rows[order]


def og_points(k: int = 1, budgets: Budgets | None = None) -> PointSet:
    """Canonical F_{2^k}-points of OG+ in P^15.

    Every point is assigned to the first even subset ``I`` with nonzero
    coordinate; it is the image of a unique big-cell point under the chart
    permutation of ``I``.

    Raises:
        ResourceError: The chart scan exceeds ``budgets.max_points``
    """
    from hother.orbitree.geometry.spaces import PointSet

    limits = budgets or Budgets()
    work = EVEN_MASKS.size * (1 << k) ** len(PAIRS)
    if work > limits.max_points:
        raise ResourceError("max_points", limits.max_points, context={"space": "og+", "k": k, "scan": work})
    spinors, _ = _chart_enumeration(k)
    logger.debug("Spinor points enumerated", extra={"k": k, "points": int(spinors.shape[0])})
    return PointSet("og+", spinors, k, k)


@cache
def lagrangian_points(k: int = 1) -> list[Lagrangian]:
    """Lagrangians of the points of :func:`og_points`, in the same order."""
    field = binary_field(k)
    _, rows = _chart_enumeration(k)
    return [Lagrangian(_canonical_rows(basis, field), k) for basis in rows]


@cache
def _lagrangian_index(k: int) -> dict[bytes, int]:
    return {lagrangian.key(): position for position, lagrangian in enumerate(lagrangian_points(k))}


def lagrangian_index(lagrangian: Lagrangian) -> int:
    """Position of a Lagrangian in the canonical point list."""
    position = _lagrangian_index(lagrangian.field_degree).get(lagrangian.key())
    if position is None:
        raise DomainError("Lagrangian is not on the L0 component")
    return position


def orthogonal_transvection(vector: npt.ArrayLike, field: BinaryField | None = None) -> Codes:
    """Matrix of ``x -> x + B(x, v) / Q(v) v``.

    Raises:
        DomainError: ``Q(v) == 0``
    """
    f = field or binary_field(1)
    v = np.asarray(vector, dtype=np.uint8)
    q = quadratic_form(v, f)
    if q == 0:
        raise DomainError("Transvections need an anisotropic vector", {"vector": v.tolist()})
    dual = np.concatenate([v[RANK:], v[:RANK]])
    scaled = f.mul_table[f.inv(q), v]
    return np.eye(DIMENSION, dtype=np.uint8) ^ f.mul_table[scaled[:, np.newaxis], dual[np.newaxis, :]]


def is_orthogonal(matrix: npt.ArrayLike, field: BinaryField | None = None) -> bool:
    """Whether the matrix preserves ``Q``."""
    f = field or binary_field(1)
    g = np.asarray(matrix, dtype=np.uint8)
    if g.shape != (DIMENSION, DIMENSION):
        return False
    if not np.array_equal(linalg.matmul(linalg.matmul(g.T, gram_matrix(), f), g, f), gram_matrix()):
        return False
    return all(quadratic_form(g[:, column], f) == 0 for column in range(DIMENSION))


def dickson_invariant(matrix: npt.ArrayLike) -> int:
    """``rank(g + I) mod 2`` of an orthogonal matrix over F2.

    Raises:
        DomainError: The matrix does not preserve ``Q``
    """
    g = np.asarray(matrix, dtype=np.uint8)
    if not is_orthogonal(g):
        raise DomainError("Matrix is not orthogonal")
    return gf2.rank(gf2.pack_rows(g ^ np.eye(DIMENSION, dtype=np.uint8))) % 2


def component_parity(matrix: npt.ArrayLike) -> int:
    """1 when ``g`` exchanges the two OG components, i.e. ``dim(g L0 ∩ L0)`` is even."""
    g = np.asarray(matrix, dtype=np.uint8)
    image = gf2.pack_rows(g[:, :RANK].T)
    meet = gf2.intersection_dimension(image, gf2.pack_rows(standard_lagrangian().rows))
    return (RANK - meet) % 2


def og_permutation(matrix: npt.ArrayLike) -> Permutation:
    """Permutation of the F2-points of OG+ induced by an element of SO(V)(F2)."""
    g = np.asarray(matrix, dtype=np.uint8)
    field = binary_field(1)
    images = [
        lagrangian_index(Lagrangian(_canonical_rows(lagrangian.rows @ g.T % 2, field), 1))
        for lagrangian in lagrangian_points(1)
    ]
    return Permutation(images)


def random_anisotropic(rng: np.random.Generator) -> Codes:
    while True:
        vector = rng.integers(0, 2, DIMENSION, dtype=np.uint8)
        if quadratic_form(vector):
            return vector


def random_rotation(rng: np.random.Generator) -> Codes:
    """Product of two transvections at distinct random anisotropic vectors."""
    first = random_anisotropic(rng)
    second = random_anisotropic(rng)
    while np.array_equal(first, second):
        second = random_anisotropic(rng)
    return orthogonal_transvection(first) @ orthogonal_transvection(second) % 2


@cache
def so_generators(seed: int = 0, max_generators: int = 8) -> tuple[PermGroup, list[Codes]]:
    """Generators of SO(V)(F2) on the 2295 points of OG+, with their matrices.

    Random rotations are added until Schreier-Sims certifies the full order.

    Raises:
        IntegrityError: ``max_generators`` rotations did not generate SO(V)(F2)
    """
    rng = np.random.default_rng(seed)
    degree = len(lagrangian_points(1))
    matrices: list[Codes] = []
    permutations: list[Permutation] = []
    while len(matrices) < max_generators:
        matrix = random_rotation(rng).astype(np.uint8)
        matrices.append(matrix)
        permutations.append(og_permutation(matrix))
        if len(matrices) < 2:
            continue
        group = PermGroup(permutations, degree, seed=seed)
        schreier_sims(group, known_order=SO_ORDER)
        if group.order() == SO_ORDER:
            logger.info("Orthogonal group generated", extra={"generators": len(matrices), "order": SO_ORDER})
            return PermGroup(permutations, degree, order=SO_ORDER, seed=seed), matrices
        logger.debug("Rotations generate a proper subgroup", extra={"generators": len(matrices), "order": group.order()})
    raise IntegrityError("Random rotations did not generate SO(V)", context={"generators": max_generators})


def random_pure_spinors(count: int, field: BinaryField, rng: np.random.Generator) -> Codes:
    """Random points of OG+ over ``field`` (big-cell points moved to random charts)."""
    alternating = rng.integers(0, field.order, (count, len(PAIRS)), dtype=np.uint8)
    cell = big_cell_spinors(alternating, field)
    charts = rng.choice(EVEN_MASKS, size=count)
    sources = np.stack([_chart_source(int(chart)) for chart in charts])
    return np.take_along_axis(cell, sources, axis=1)


@cache
def spinor_quadrics(seed: int = 0) -> list[Polynomial]:
    """The 10 quadrics cutting OG+ out of P^15, by interpolation through F16-points.

    Raises:
        IntegrityError: The interpolated space is not 10-dimensional over F2
    """
    field = binary_field(4)
    rng = np.random.default_rng(seed)
    exponents = monomials(EVEN_MASKS.size, 2)
    rows = np.zeros((0, len(exponents)), dtype=np.uint8)
    kernel = np.eye(len(exponents), dtype=np.uint8)
    for _ in range(4):
        samples = random_pure_spinors(2 * len(exponents), field, rng)
        rows = np.vstack([rows, monomial_values(samples, exponents, field)])
        kernel = linalg.null_space(rows, field)
        if kernel.shape[0] <= 10:
            break
    if kernel.shape[0] != 10:
        raise IntegrityError("Spinor quadrics do not span ten dimensions", context={"dimension": int(kernel.shape[0])})
    basis = linalg.rref(kernel, field)
    if (basis > 1).any():
        raise IntegrityError("Spinor quadrics are not defined over F2")
    logger.debug("Spinor quadrics interpolated", extra={"samples": int(rows.shape[0])})
    return [Polynomial.from_mapping({exponents[j]: 1 for j in np.flatnonzero(row)}) for row in basis]


def pure_mask(spinors: Codes, field: BinaryField) -> npt.NDArray[np.bool_]:
    """Bulk purity of nonzero spinors by the spinor quadrics."""
    result = np.asarray(spinors, dtype=np.uint8).any(axis=1)
    for quadric in spinor_quadrics():
        result &= quadric.evaluate(spinors, field) == 0
    return result
