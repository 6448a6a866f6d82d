"""Linear systems of forms through prescribed F2-points.

Forms of a fixed degree are packed F2 coefficient vectors in the basis of
:class:`~hother.orbitree.geometry.forms.FormSpace`. Two forms that differ by
an element of the degree-``d`` part of the ideal (multiples of the ambient
equations and of already chosen forms) cut the same scheme; every system
below works with canonical remainders modulo that part.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from hother.orbitree.config import Budgets
from hother.orbitree.core.exceptions import DomainError, ResourceError
from hother.orbitree.geometry import gf2
from hother.orbitree.geometry.field import binary_field
from hother.orbitree.geometry.forms import FormSpace, Polynomial
from hother.orbitree.geometry.sections import span_points
from hother.orbitree.geometry.spaces import (
    AmbientSpace,
    OrthogonalGrassmannianSpace,
    PointSet,
    WeightedProjectiveSpace,
    ambient_space,
)
from hother.orbitree.geometry.spinor import pure_mask
from hother.orbitree.strata.models import CandidateScheme, FormRecord
from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)

PARTIAL_COUNTS = "partial-counts"


def form_degree(space: AmbientSpace, poly: Polynomial) -> tuple[int, ...]:
    """(Multi)degree of a homogeneous polynomial in the form coordinates of ``space``.

    Raises:
        DomainError: The polynomial is zero
    """
    if poly.is_zero:
        raise DomainError("Zero polynomial has no degree")
    exponent = poly.terms[0][0]
    coordinates = space.form_ambient()
    if isinstance(coordinates, WeightedProjectiveSpace):
        return (sum(w * e for w, e in zip(coordinates.weights, exponent, strict=True)),)
    return tuple(sum(exponent[part]) for part in coordinates.factor_slices())


def ideal_part(space: AmbientSpace, degree: Sequence[int], generators: Sequence[Polynomial] = ()) -> list[int]:
    """Reduced basis of the degree-``degree`` part of ``(equations of space) + (generators)``."""
    forms = space.forms(degree)
    target = tuple(degree)
    coordinates = space.form_ambient()
    multiples: list[int] = []
    for generator in (*space.equations(), *generators):
        complement = tuple(t - d for t, d in zip(target, form_degree(space, generator), strict=True))
        if any(c < 0 for c in complement):
            continue
        for factor in coordinates.form_basis(complement):
            multiples.append(forms.coordinates(generator * factor))
    return gf2.rref(multiples)


def reduce_modulo(vectors: Sequence[int], ideal: Sequence[int]) -> list[int]:
    """Reduced basis of the image of ``span(vectors)`` in the quotient by ``span(ideal)``."""
    return gf2.rref(gf2.reduce(v, ideal) for v in vectors)


def hypersurfaces_through(points: PointSet, degree: int | Sequence[int], space: AmbientSpace | str) -> list[int]:
    """Basis of the forms of ``degree`` vanishing at every point.

    Args:
        points: F2-points of ``space``
        degree: (Multi)degree of the forms
        space: Ambient space (or its id)

    Returns:
        Packed coefficient vectors; all unit vectors when ``points`` is empty
    """
    resolved = ambient_space(space) if isinstance(space, str) else space
    forms = resolved.forms(degree)
    rows = forms.value_rows(points) if len(points) else []
    return gf2.kernel(rows, forms.dimension)


def subspaces(basis: Sequence[int], dimension: int) -> Iterator[list[int]]:
    """Every ``dimension``-dimensional subspace of ``span(basis)``, once, as a reduced basis.

    Subspaces are enumerated through reduced echelon forms of their
    coordinate vectors: pivot positions first, then the free entries.
    """
    size = len(basis)
    if not 0 <= dimension <= size:
        return
    for pivots in combinations(range(size), dimension):
        free = [[c for c in range(p + 1, size) if c not in pivots] for p in pivots]
        total = sum(len(f) for f in free)
        for assignment in range(1 << total):
            rows: list[int] = []
            shift = 0
            for p, positions in zip(pivots, free, strict=True):
                coordinates = 1 << p
                for offset, column in enumerate(positions):
                    if assignment >> (shift + offset) & 1:
                        coordinates |= 1 << column
                shift += len(positions)
                combined = 0
                for j in range(size):
                    if coordinates >> j & 1:
                        combined ^= basis[j]
                rows.append(combined)
            yield gf2.rref(rows)


@dataclass(frozen=True)
class FormCoset:
    """``offset + span(directions)``: the final forms of one exact refinement.

    Every element is a canonical remainder modulo the ideal part the coset
    was built with, so distinct elements cut distinct schemes.
    """

    forms: FormSpace
    offset: int
    directions: tuple[int, ...] = ()
    empty: bool = False
    ideal: tuple[int, ...] = field(default=(), compare=False)

    @property
    def dimension(self) -> int:
        return len(self.directions)

    def __len__(self) -> int:
        return 0 if self.empty else 1 << len(self.directions)

    def __iter__(self) -> Iterator[int]:
        """Elements in Gray-code order."""
        if self.empty:
            return
        for element in gf2.span_elements(self.directions):
            yield self.offset ^ element


def exact_point_refinement(
    forms: FormSpace,
    section: PointSet,
    target: PointSet,
    ideal: Sequence[int] = (),
    *,
    budgets: Budgets | None = None,
    checkpoint: str | None = None,
) -> FormCoset:
    """Final forms ``f`` with ``f = 0`` on ``target`` and ``f = 1`` on the rest of ``section``.

    Args:
        forms: Forms of the final degree
        section: F2-points of the partial intersection ``Y``
        target: The prescribed set ``Z`` (a subset of ``section``)
        ideal: Reduced basis of the ideal part in the final degree
        budgets: ``max_coset_dimension`` bounds the enumerated coset
        checkpoint: Resumption marker reported with resource errors

    Raises:
        DomainError: ``target`` is not contained in ``section``
        ResourceError: The coset is larger than the budget allows
    """
    limits = budgets or Budgets()
    try:
        inside = set(section.indices_of(target.coords))
    except DomainError as error:
        raise DomainError("Prescribed points are not on the partial intersection", error.context) from error
    rows = forms.value_rows(section) if len(section) else []
    rhs = [0 if position in inside else 1 for position in range(len(section))]
    reduced_ideal = gf2.rref(ideal)
    particular = gf2.solve(rows, rhs, forms.dimension) if rows else 0
    if particular is None:
        return FormCoset(forms, 0, empty=True, ideal=tuple(reduced_ideal))
    directions = reduce_modulo(gf2.kernel(rows, forms.dimension), reduced_ideal)
    if len(directions) > limits.max_coset_dimension:
        raise ResourceError(
            "max_coset_dimension",
            limits.max_coset_dimension,
            checkpoint=checkpoint,
            context={"dimension": len(directions), "points": len(target)},
        )
    offset = gf2.reduce(gf2.reduce(particular, reduced_ideal), directions)
    return FormCoset(forms, offset, tuple(directions), ideal=tuple(reduced_ideal))


def common_zeros(points: PointSet, polynomials: Sequence[Polynomial]) -> np.ndarray:
    """Mask of the points where every polynomial vanishes."""
    field_ = binary_field(points.field_degree)
    mask = np.ones(len(points), dtype=bool)
    for poly in polynomials:
        mask &= poly.evaluate(points.coords, field_) == 0
    return mask


class SectionCounter:
    """Point counts of ``Y ∩ V(f)`` over F_{2^i} for the forms ``f`` of one coset.

    ``Y`` is the partial intersection of the ambient space with the
    intermediate forms. Its points over each extension are enumerated once;
    a coset is then scanned in Gray-code order, XOR-ing one precomputed value
    column per step (addition in characteristic 2).

    Attributes:
        extensions: Degrees ``i`` whose counts are available
        partial: A budget stopped the scan before the configured degree
    """

    def __init__(
        self,
        space: AmbientSpace,
        forms: FormSpace,
        intermediates: Sequence[Polynomial],
        max_extension: int,
        budgets: Budgets | None = None,
    ):
        limits = budgets or Budgets()
        self.forms = forms
        self.extensions: list[int] = []
        self.partial = False
        self._values: list[np.ndarray] = []
        evaluations = 0
        for i in range(1, max_extension + 1):
            if space.expected_count(i) > limits.max_points:
                self.partial = True
                break
            points = space.enumerate_points(i, limits)
            section = points.subset(np.flatnonzero(common_zeros(points, intermediates)))
            evaluations += len(section)
            if evaluations > limits.max_evaluations:
                self.partial = True
                break
            self.extensions.append(i)
            self._values.append(forms.values(section))

    def _column(self, level: int, coefficients: int) -> np.ndarray:
        values = self._values[level]
        total = np.zeros(values.shape[0], dtype=np.uint8)
        for j in range(values.shape[1]):
            if coefficients >> j & 1:
                total ^= values[:, j]
        return total

    def scan(self, coset: FormCoset) -> Iterator[tuple[int, list[np.ndarray]]]:
        """``(form, value vectors per extension)`` over the coset in Gray-code order.

        The yielded arrays are updated in place by the next step.
        """
        if coset.empty:
            return
        levels = range(len(self._values))
        current = [self._column(level, coset.offset) for level in levels]
        steps = [[self._column(level, d) for level in levels] for d in coset.directions]
        element = coset.offset
        yield element, current
        for step in range(1, len(coset)):
            position = (step & -step).bit_length() - 1
            element ^= coset.directions[position]
            for level in levels:
                current[level] ^= steps[position][level]
            yield element, current

    def counts(self, coefficients: int) -> list[int]:
        """Counts of one form over every available extension."""
        return [int(np.count_nonzero(self._column(level, coefficients) == 0)) for level in range(len(self._values))]


def candidate_polynomials(candidate: CandidateScheme) -> tuple[AmbientSpace, list[Polynomial]]:
    """Ambient space and defining polynomials of a candidate record."""
    space = ambient_space(candidate.ambient)
    polynomials = [FormSpace(space.form_ambient(), f.degree).polynomial(f.coefficients) for f in candidate.forms]
    return space, polynomials


def form_record(forms: FormSpace, coefficients: int) -> FormRecord:
    return FormRecord.model_validate(forms.describe(coefficients))


def _linear_span(space: AmbientSpace, polynomials: Sequence[Polynomial]) -> list[int]:
    """Reduced F2 basis of the common zeros of linear forms on P^15."""
    forms = FormSpace(space.form_ambient(), (1,))
    return gf2.kernel([forms.coordinates(p) for p in polynomials], forms.dimension)


def count_points(candidate: CandidateScheme, i: int, budgets: Budgets | None = None) -> int:
    """``#(X ∩ V(forms))(F_{2^i})`` by evaluating every form at every point.

    On OG+ the forms are linear, so the points of their common zero locus in
    P^15 are enumerated and tested for purity.

    Raises:
        ResourceError: The point or evaluation budget does not admit the scan
    """
    limits = budgets or Budgets()
    space, polynomials = candidate_polynomials(candidate)
    if isinstance(space, OrthogonalGrassmannianSpace):
        width = space.width
        basis = _linear_span(space, polynomials)
        if not basis:
            return 0
        q = 1 << i
        size = (q ** len(basis) - 1) // (q - 1)
        if size > limits.max_points:
            raise ResourceError("max_points", limits.max_points, context={"ambient": candidate.ambient, "points": size})
        rows = np.array([gf2.unpack(b, width) for b in basis], dtype=np.uint8)
        return int(np.count_nonzero(pure_mask(span_points(rows, i), binary_field(i))))
    points = space.enumerate_points(i, limits)
    evaluations = len(points) * len(polynomials)
    if evaluations > limits.max_evaluations:
        raise ResourceError(
            "max_evaluations", limits.max_evaluations, context={"ambient": candidate.ambient, "evaluations": evaluations}
        )
    return int(np.count_nonzero(common_zeros(points, polynomials)))


def verify_candidate(candidate: CandidateScheme, budgets: Budgets | None = None) -> bool:
    """Whether the F2-locus of the candidate is exactly its prescribed point set."""
    space, polynomials = candidate_polynomials(candidate)
    if isinstance(space, OrthogonalGrassmannianSpace):
        return count_points(candidate, 1, budgets) == len(candidate.points)
    points = space.enumerate_points(1, budgets)
    locus = np.flatnonzero(common_zeros(points, polynomials)).tolist()
    return locus == sorted(candidate.points)
