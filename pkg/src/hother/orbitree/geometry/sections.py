"""Linear sections of quadric-defined varieties.

A linear subspace is handled through an F2 basis ``B`` (``m x n`` rows); its
points over F_{2^k} are the images ``t B`` of the normalized points ``t`` of
P^{m-1}. Quadrics are pulled back to the ``m`` coordinates ``t`` through the
polar form, so counting section points never touches the ambient coordinates.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from itertools import product

import numpy as np

from hother.orbitree.core.exceptions import DomainError
from hother.orbitree.geometry import gf2
from hother.orbitree.geometry.field import BinaryField, Codes, binary_field
from hother.orbitree.geometry.forms import Exponents, Polynomial, monomial_values, monomials
from hother.orbitree.geometry.spaces import grid, normalize_rows

CHUNK_POINTS = 1 << 18


def span_of(points: Codes) -> Codes:
    """Reduced F2 basis (rows) of the linear span of F2 points.

    Raises:
        DomainError: No points were given
    """
    rows = np.atleast_2d(np.asarray(points, dtype=np.uint8))
    if rows.shape[0] == 0 or not rows.any():
        raise DomainError("Span of an empty point set")
    width = rows.shape[1]
    return np.array([gf2.unpack(b, width) for b in gf2.rref(gf2.pack_rows(rows))], dtype=np.uint8)


def projective_dimension(points: Codes) -> int:
    return span_of(points).shape[0] - 1


def restrict_quadric(quadric: Polynomial, basis: Codes) -> Polynomial:
    """Pull an F2 quadric back along ``t -> t B``.

    Uses ``q(sum t_a b_a) = sum t_a^2 q(b_a) + sum_{a<b} t_a t_b (q(b_a + b_b) + q(b_a) + q(b_b))``.
    """
    rows = np.atleast_2d(np.asarray(basis, dtype=np.uint8))
    f2 = binary_field(1)
    m = rows.shape[0]
    diagonal = quadric.evaluate(rows, f2)
    terms: dict[Exponents, int] = {}
    for a in range(m):
        if diagonal[a]:
            exponent = [0] * m
            exponent[a] = 2
            terms[tuple(exponent)] = 1
    for a in range(m):
        sums = rows[a + 1 :] ^ rows[a]
        if not sums.shape[0]:
            continue
        polar = quadric.evaluate(sums, f2) ^ diagonal[a] ^ diagonal[a + 1 :]
        for offset in np.flatnonzero(polar):
            exponent = [0] * m
            exponent[a] = 1
            exponent[a + 1 + int(offset)] = 1
            terms[tuple(exponent)] = 1
    return Polynomial.from_mapping(terms)


def restrict_quadrics(quadrics: Sequence[Polynomial], basis: Codes) -> list[Polynomial]:
    return [restrict_quadric(q, basis) for q in quadrics]


def _projective_chunks(size: int, field: BinaryField, chunk: int = CHUNK_POINTS) -> Iterator[Codes]:
    """Normalized points of P^{size-1}(F_q) in bounded blocks, lexicographically ordered."""
    q = field.order
    for lead in range(size):
        width = size - lead - 1
        prefix_width = 0
        while q ** (width - prefix_width) > chunk and prefix_width < width:
            prefix_width += 1
        tail = grid(q, width - prefix_width)
        for prefix in product(range(q), repeat=prefix_width):
            block = np.zeros((tail.shape[0], size), dtype=np.uint8)
            block[:, lead] = 1
            block[:, lead + 1 : lead + 1 + prefix_width] = prefix
            block[:, lead + 1 + prefix_width :] = tail
            yield block


class QuadricSection:
    """A linear subspace intersected with the zero locus of F2 quadrics.

    Attributes:
        basis: F2 basis rows of the subspace (``m x n``)
        restricted: Quadrics in the ``m`` subspace coordinates
    """

    def __init__(self, basis: Codes, quadrics: Sequence[Polynomial]):
        self.basis = np.atleast_2d(np.asarray(basis, dtype=np.uint8))
        self.restricted = restrict_quadrics(quadrics, self.basis)
        size = self.basis.shape[0]
        self._exponents = monomials(size, 2)
        position = {e: j for j, e in enumerate(self._exponents)}
        self._columns = [[position[e] for e, _ in poly.terms] for poly in self.restricted]

    @property
    def size(self) -> int:
        return int(self.basis.shape[0])

    def _zero_mask(self, block: Codes, field: BinaryField) -> np.ndarray:
        values = monomial_values(block, self._exponents, field)
        mask = np.ones(block.shape[0], dtype=bool)
        for columns in self._columns:
            if columns:
                mask &= np.bitwise_xor.reduce(values[:, columns], axis=1) == 0
        return mask

    def parameters(self, k: int) -> Codes:
        """Subspace coordinates ``t`` of the section points over F_{2^k}."""
        field = binary_field(k)
        found = [block[self._zero_mask(block, field)] for block in _projective_chunks(self.size, field)]
        return np.vstack(found) if found else np.zeros((0, self.size), dtype=np.uint8)

    def points(self, k: int) -> Codes:
        """Normalized ambient coordinates of the section points over F_{2^k}."""
        field = binary_field(k)
        parameters = self.parameters(k)
        images = np.zeros((parameters.shape[0], self.basis.shape[1]), dtype=np.uint8)
        for a in range(self.size):
            images ^= field.mul_table[parameters[:, a][:, np.newaxis], self.basis[a][np.newaxis, :]]
        return normalize_rows(images, field)

    def count(self, k: int, limit: int | None = None) -> int:
        """Number of section points over F_{2^k}; stops early once ``limit`` is exceeded."""
        field = binary_field(k)
        total = 0
        for block in _projective_chunks(self.size, field):
            total += int(self._zero_mask(block, field).sum())
            if limit is not None and total > limit:
                return total
        return total


def span_points(basis: Codes, k: int) -> Codes:
    """Normalized ambient coordinates of all points of the span over F_{2^k}."""
    return QuadricSection(basis, ()).points(k)


def local_intersection_multiplicity(
    basis: Codes, point: Codes, quadrics: Sequence[Polynomial], *, max_order: int = 24
) -> int:
    """Length of the local ring of ``span(basis) ∩ V(quadrics)`` at an F2 point.

    Computed as the stable value of ``dim k[t]/(I + m^N)`` in the affine chart
    centred at the point.

    Raises:
        DomainError: The point is not on the section, or the section is not
            zero-dimensional there (no stabilization up to ``max_order``)
    """
    rows = np.atleast_2d(np.asarray(basis, dtype=np.uint8))
    width = rows.shape[1]
    target = gf2.pack(np.asarray(point, dtype=np.uint8))
    packed_basis = gf2.rref(gf2.pack_rows(rows))
    if not target or not gf2.in_span(target, packed_basis):
        raise DomainError("Point is not in the span")
    chosen = [target]
    for row in gf2.pack_rows(rows):
        if gf2.rank([*chosen, row]) > len(chosen):
            chosen.append(row)
    adapted = np.array([gf2.unpack(v, width) for v in chosen], dtype=np.uint8)
    local: list[dict[Exponents, int]] = []
    for poly in restrict_quadrics(quadrics, adapted):
        terms: dict[Exponents, int] = {}
        for exponent, _ in poly.terms:
            key = exponent[1:]
            terms[key] = terms.get(key, 0) ^ 1
        terms = {e: c for e, c in terms.items() if c}
        if terms.get((0,) * (len(chosen) - 1)):
            raise DomainError("Point is not on the section")
        if terms:
            local.append(terms)
    variables = len(chosen) - 1
    previous = 1
    for order in range(2, max_order + 1):
        basis_monomials = [e for d in range(order) for e in monomials(variables, d)]
        index = {e: j for j, e in enumerate(basis_monomials)}
        relations = []
        for shift_degree in range(order - 1):
            for shift in monomials(variables, shift_degree):
                for terms in local:
                    row = 0
                    for exponent in terms:
                        product_exponent = tuple(a + b for a, b in zip(shift, exponent, strict=True))
                        position = index.get(product_exponent)
                        if position is not None:
                            row ^= 1 << position
                    if row:
                        relations.append(row)
        current = len(basis_monomials) - gf2.rank(relations)
        if current == previous:
            return current
        previous = current
    raise DomainError("Section is not zero-dimensional at the point", {"max_order": max_order})
