"""Polynomials and spaces of (multi)homogeneous forms.

Monomial order: exponent vectors in lexicographically descending order
within each factor (``x0^d`` first), the first factor major. This order is
the ``lex-desc`` id recorded in every candidate record; bit ``j`` of a
packed F2 coefficient vector is the coefficient of basis form ``j``.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import TYPE_CHECKING

import numpy as np

from hother.orbitree.core.exceptions import DomainError
from hother.orbitree.geometry import gf2
from hother.orbitree.geometry.field import BinaryField, Codes, binary_field

if TYPE_CHECKING:
    from hother.orbitree.geometry.spaces import AmbientSpace, PointSet

MONOMIAL_ORDER = "lex-desc"

Exponents = tuple[int, ...]


def monomials(variables: int, degree: int) -> list[Exponents]:
    """Exponent vectors of total ``degree`` in lexicographically descending order."""
    if variables == 0:
        return [()] if degree == 0 else []
    if variables == 1:
        return [(degree,)]
    result: list[Exponents] = []
    for first in range(degree, -1, -1):
        result.extend((first, *rest) for rest in monomials(variables - 1, degree - first))
    return result


def weighted_monomials(weights: Sequence[int], degree: int) -> list[Exponents]:
    """Exponent vectors ``e`` with ``sum(w * e) == degree``, lexicographically descending."""
    if not weights:
        return [()] if degree == 0 else []
    head, *tail = weights
    result: list[Exponents] = []
    for first in range(degree // head, -1, -1):
        result.extend((first, *rest) for rest in weighted_monomials(tail, degree - head * first))
    return result


def product_monomials(factor_sizes: Sequence[int], degrees: Sequence[int]) -> list[Exponents]:
    """Multihomogeneous monomials, first factor major."""
    per_factor = [monomials(size, degree) for size, degree in zip(factor_sizes, degrees, strict=True)]
    return [tuple(e for part in combo for e in part) for combo in product(*per_factor)]


def monomial_values(coords: Codes, exponents: Sequence[Exponents], field: BinaryField) -> Codes:
    """``N x len(exponents)`` values of monomials at the rows of ``coords``."""
    count, width = coords.shape
    result = np.ones((count, len(exponents)), dtype=np.uint8)
    if not exponents:
        return result
    logs = field.log_table[coords]
    zero = coords == 0
    period = field.order - 1
    for column, exponent in enumerate(exponents):
        values = result[:, column]
        for variable in range(width):
            e = exponent[variable]
            if e == 0:
                continue
            powered = field.exp_table[(logs[:, variable] * e) % period]
            powered = np.where(zero[:, variable], 0, powered).astype(np.uint8)
            values = field.mul_table[values, powered]
        result[:, column] = values
    return result


@dataclass(frozen=True)
class Polynomial:
    """Sparse polynomial: exponent vector mapped to a coefficient code.

    Coefficients live in F_{2^c} with ``c = coefficient_degree`` (1 for F2,
    2 for F4) and are embedded into the field of the points at evaluation.
    """

    terms: tuple[tuple[Exponents, int], ...]
    coefficient_degree: int = 1

    @classmethod
    def from_mapping(cls, terms: Mapping[Exponents, int], coefficient_degree: int = 1) -> Polynomial:
        cleaned = tuple(sorted(((e, c) for e, c in terms.items() if c), reverse=True))
        return cls(cleaned, coefficient_degree)

    @classmethod
    def from_monomials(cls, exponents: Iterable[Exponents]) -> Polynomial:
        """Sum of monomials with coefficient 1 (repeated monomials cancel)."""
        terms: dict[Exponents, int] = {}
        for e in exponents:
            terms[e] = terms.get(e, 0) ^ 1
        return cls.from_mapping(terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def as_dict(self) -> dict[Exponents, int]:
        return dict(self.terms)

    def __add__(self, other: Polynomial) -> Polynomial:
        merged = self.as_dict()
        for e, c in other.terms:
            merged[e] = merged.get(e, 0) ^ c
        return Polynomial.from_mapping(merged, max(self.coefficient_degree, other.coefficient_degree))

    def __mul__(self, other: Polynomial) -> Polynomial:
        degree = max(self.coefficient_degree, other.coefficient_degree)
        field = binary_field(degree)
        mine = _embed_coefficients(self, field)
        theirs = _embed_coefficients(other, field)
        result: dict[Exponents, int] = {}
        for e1, c1 in mine:
            for e2, c2 in theirs:
                key = tuple(a + b for a, b in zip(e1, e2, strict=True))
                result[key] = result.get(key, 0) ^ field.mul(c1, c2)
        return Polynomial.from_mapping(result, degree)

    def evaluate(self, coords: Codes, field: BinaryField) -> Codes:
        """Values at the rows of ``coords`` (codes of ``field``)."""
        if not self.terms:
            return np.zeros(coords.shape[0], dtype=np.uint8)
        exponents = [e for e, _ in self.terms]
        values = monomial_values(coords, exponents, field)
        coefficients = _embed_coefficients(self, field)
        total = np.zeros(coords.shape[0], dtype=np.uint8)
        for column, (_, c) in enumerate(coefficients):
            total ^= values[:, column] if c == 1 else field.mul_table[c, values[:, column]]
        return total


def _embed_coefficients(poly: Polynomial, field: BinaryField) -> list[tuple[Exponents, int]]:
    if poly.coefficient_degree == 1:
        return list(poly.terms)
    if field.degree % poly.coefficient_degree:
        raise DomainError(
            "Coefficient field does not embed", {"coefficients": poly.coefficient_degree, "field": field.degree}
        )
    sub = binary_field(poly.coefficient_degree)
    return [(e, field.embed(c, sub)) for e, c in poly.terms]


class FormSpace:
    """Forms of a fixed (multi)degree on an ambient space, with an F2 basis.

    ``basis[j]`` is a :class:`Polynomial`; F2 combinations are packed integers.
    """

    def __init__(self, space: AmbientSpace, degree: int | Sequence[int]):
        self.space = space
        self.degree: tuple[int, ...] = (degree,) if isinstance(degree, int) else tuple(degree)
        self.basis: list[Polynomial] = space.form_basis(self.degree)
        self.monomial_order = MONOMIAL_ORDER

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @cached_property
    def _coordinate_index(self) -> dict[Exponents, int]:
        index: dict[Exponents, int] = {}
        for position, poly in enumerate(self.basis):
            if len(poly.terms) == 1 and poly.terms[0][1] == 1:
                index[poly.terms[0][0]] = position
        return index

    def values(self, points: PointSet) -> Codes:
        """``N x dimension`` values of the basis forms at the points."""
        field = binary_field(points.field_degree)
        if all(len(p.terms) == 1 and p.coefficient_degree == 1 for p in self.basis):
            return monomial_values(points.coords, [p.terms[0][0] for p in self.basis], field)
        if not self.basis:
            return np.zeros((len(points), 0), dtype=np.uint8)
        return np.column_stack([p.evaluate(points.coords, field) for p in self.basis])

    def rational_values(self, points: PointSet) -> Codes:
        """Basis values at F2-rational points, checked to lie in F2.

        Twisted points are stored over F4 but descended forms take F2 values on them.

        Raises:
            DomainError: Some value lies outside F2
        """
        values = self.values(points)
        if points.extension != 1 or (points.field_degree != 1 and bool((values > 1).any())):
            raise DomainError("Packed values need F2-rational points", {"field_degree": points.field_degree})
        return values

    def value_columns(self, points: PointSet) -> list[int]:
        """Basis values over F2 points packed per basis form (bit ``i`` = point ``i``)."""
        return gf2.pack_columns(self.rational_values(points))

    def value_rows(self, points: PointSet) -> list[int]:
        """Evaluation rows over F2 points (bit ``j`` = basis form ``j``)."""
        return gf2.pack_rows(self.rational_values(points))

    def evaluate(self, coefficients: int, points: PointSet) -> Codes:
        """Values of the F2 combination ``coefficients`` at the points."""
        values = self.values(points)
        total = np.zeros(len(points), dtype=np.uint8)
        for j in range(self.dimension):
            if coefficients >> j & 1:
                total ^= values[:, j]
        return total

    def polynomial(self, coefficients: int) -> Polynomial:
        result = Polynomial(())
        for j in range(self.dimension):
            if coefficients >> j & 1:
                result = result + self.basis[j]
        return result

    def coordinates(self, poly: Polynomial) -> int:
        """Packed F2 coordinates of ``poly`` in this basis.

        Raises:
            DomainError: ``poly`` is not an F2 combination of the basis
        """
        return self.space.form_coordinates(self, poly)

    def monomial_coordinates(self, poly: Polynomial) -> int:
        index = self._coordinate_index
        packed = 0
        for exponents, coefficient in poly.terms:
            position = index.get(exponents)
            if position is None or coefficient != 1:
                raise DomainError("Polynomial outside the form space", {"monomial": list(exponents)})
            packed ^= 1 << position
        return packed

    def describe(self, coefficients: int) -> dict[str, object]:
        """JSON-able description of a combination: degree, order id and bits."""
        return {
            "degree": list(self.degree),
            "monomial_order": self.monomial_order,
            "bits": format(coefficients, f"0{max(1, self.dimension)}b")[::-1],
        }

    def __repr__(self) -> str:
        return f"FormSpace({self.space.space_id}, degree={self.degree}, dimension={self.dimension})"
