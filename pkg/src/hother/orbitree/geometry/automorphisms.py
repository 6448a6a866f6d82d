"""Automorphism groups of the ambient spaces, as permutations of their F2-points.

Every generator comes with a matrix witness: one matrix per factor (acting
on column coordinate vectors), optionally followed by the factor swap.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from hother.orbitree.core.exceptions import DomainError, IntegrityError, UnsupportedError
from hother.orbitree.core.permgroup import PermGroup, Permutation, schreier_sims
from hother.orbitree.geometry import linalg, spinor
from hother.orbitree.geometry.field import BinaryField, Codes, binary_field
from hother.orbitree.geometry.spaces import (
    PLUCKER_PAIRS,
    AmbientSpace,
    Grassmannian,
    Hypersurface,
    OrthogonalGrassmannianSpace,
    PointSet,
    ProductSpace,
    ProjectiveSpace,
    TwistedProduct,
    ambient_space,
)
from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True, eq=False)
class MatrixWitness:
    """Linear data inducing one generator.

    Attributes:
        matrices: One square matrix per factor, acting on column vectors
        field_degree: Field of the matrix entries
        swap: Exchange the two factors after applying the matrices
    """

    matrices: tuple[Codes, ...]
    field_degree: int = 1
    swap: bool = False

    def to_text(self) -> str:
        """Bit rows (entry codes for fields larger than F2), one matrix after another."""
        lines = [f"# witness field-degree {self.field_degree} swap {int(self.swap)}"]
        for matrix in self.matrices:
            lines.append(f"# matrix {matrix.shape[0]}x{matrix.shape[1]}")
            separator = "" if self.field_degree == 1 else " "
            lines.extend(separator.join(str(int(c)) for c in row) for row in matrix)
        return "\n".join(lines) + "\n"


@dataclass
class AutomorphismGroup:
    """Aut(X)(F2) acting on the canonical F2-point list of ``space_id``."""

    space_id: str
    group: PermGroup
    witnesses: list[MatrixWitness] = field(default_factory=list)

    def dump(self) -> str:
        return "".join(w.to_text() for w in self.witnesses)


def gl_order(n: int, q: int = 2) -> int:
    return prod(q**n - q**i for i in range(n))


def gl_generators(n: int, field: BinaryField) -> list[Codes]:
    """Generators of GL(n, 2^k): a transvection, the cyclic shift, a transposition and a primitive diagonal."""
    transvection = np.eye(n, dtype=np.uint8)
    transvection[0, 1 % n] ^= 1 if n > 1 else 0
    cycle = np.roll(np.eye(n, dtype=np.uint8), 1, axis=0)
    swap = np.eye(n, dtype=np.uint8)
    swap[[0, 1 % n]] = swap[[1 % n, 0]]
    candidates = [transvection, cycle, swap]
    if field.order > 2:
        diagonal = np.eye(n, dtype=np.uint8)
        diagonal[0, 0] = 2
        candidates.append(diagonal)
    unique: list[Codes] = []
    for matrix in candidates:
        if not np.array_equal(matrix, np.eye(n, dtype=np.uint8)) and not any(np.array_equal(matrix, m) for m in unique):
            unique.append(matrix)
    return unique


def compound_matrix(matrix: Codes) -> Codes:
    """Action of ``g`` in GL(5, 2) on Plücker coordinates (second exterior power)."""
    g = np.asarray(matrix, dtype=np.uint8)
    size = len(PLUCKER_PAIRS)
    compound = np.zeros((size, size), dtype=np.uint8)
    for row, (i, j) in enumerate(PLUCKER_PAIRS):
        for column, (k, l) in enumerate(PLUCKER_PAIRS):
            compound[row, column] = (g[i, k] & g[j, l]) ^ (g[i, l] & g[j, k])
    return compound


def symmetric_square(matrix: Codes) -> Codes:
    """Action of ``A`` in GL(2, 2) on ``(x0^2, x0 x1, x1^2)``."""
    (a, b), (c, d) = np.asarray(matrix, dtype=np.uint8).tolist()
    return np.array([[a, 0, b], [a & c, (a & d) ^ (b & c), b & d], [c, 0, d]], dtype=np.uint8)


def apply_witness(space: AmbientSpace, points: PointSet, witness: MatrixWitness) -> Codes:
    """Normalized images of the point rows."""
    field_ = binary_field(points.field_degree)
    parts = []
    for part, matrix in zip(space.factor_slices(), witness.matrices, strict=True):
        entries = np.asarray(matrix, dtype=np.uint8)
        if witness.field_degree != field_.degree:
            entries = field_.embed_array(entries, binary_field(witness.field_degree))
        parts.append(linalg.matmul(points.coords[:, part], entries.T, field_))
    if witness.swap:
        parts.reverse()
    return space.normalize(np.hstack(parts), field_)


def induced_permutation(space: AmbientSpace, witness: MatrixWitness) -> Permutation:
    """Permutation of the F2-points induced by a witness.

    Raises:
        DomainError: The witness does not map the point list to itself
    """
    if isinstance(space, OrthogonalGrassmannianSpace):
        return spinor.og_permutation(witness.matrices[0])
    points = space.enumerate_points(1)
    return Permutation(points.indices_of(apply_witness(space, points, witness)))


def _product_witnesses(factor_sizes: tuple[int, ...], with_swap: bool) -> list[MatrixWitness]:
    field_ = binary_field(1)
    witnesses = []
    for position, size in enumerate(factor_sizes):
        for generator in gl_generators(size, field_):
            matrices = tuple(generator if i == position else np.eye(s, dtype=np.uint8) for i, s in enumerate(factor_sizes))
            witnesses.append(MatrixWitness(matrices))
    if with_swap:
        witnesses.append(MatrixWitness(tuple(np.eye(s, dtype=np.uint8) for s in factor_sizes), swap=True))
    return witnesses


def _x21_witnesses() -> list[MatrixWitness]:
    field_ = binary_field(1)
    witnesses = []
    for a in gl_generators(2, field_):
        b = linalg.inverse(symmetric_square(a), field_).T.copy()
        witnesses.append(MatrixWitness((a, b)))
    return witnesses


def _x11_witnesses() -> list[MatrixWitness]:
    field_ = binary_field(1)
    identity2 = np.eye(2, dtype=np.uint8)
    witnesses = []
    for a in gl_generators(2, field_):
        b = np.eye(4, dtype=np.uint8)
        b[:2, :2] = linalg.inverse(a, field_).T
        witnesses.append(MatrixWitness((a, b)))
    for i in range(2):
        for j in range(2):
            b = np.eye(4, dtype=np.uint8)
            b[2 + i, j] = 1
            witnesses.append(MatrixWitness((identity2, b)))
    for d in gl_generators(2, field_):
        b = np.eye(4, dtype=np.uint8)
        b[2:, 2:] = d
        witnesses.append(MatrixWitness((identity2, b)))
    return witnesses


def _twist_witnesses() -> list[MatrixWitness]:
    f4 = binary_field(2)
    witnesses = [MatrixWitness((a, f4.square_table[a]), field_degree=2) for a in gl_generators(3, f4)]
    identity = np.eye(3, dtype=np.uint8)
    witnesses.append(MatrixWitness((identity, identity), field_degree=2, swap=True))
    return witnesses


def automorphism_order(space: AmbientSpace | str, *, with_swap: bool = True) -> int:
    """Order of the group returned by :func:`automorphism_generators`."""
    resolved = ambient_space(space) if isinstance(space, str) else space
    match resolved.space_id:
        case "p1" | "p2" | "p3" | "p9" | "dual-p9":
            return gl_order(resolved.factor_sizes[0])
        case "p1xp1" | "p1xp2" | "p2xp2":
            swap = 2 if with_swap and isinstance(resolved, ProductSpace) and resolved.has_swap else 1
            return prod(gl_order(s) for s in resolved.factor_sizes) * swap
        case "x21":
            return gl_order(2)
        case "x11":
            return gl_order(2) * gl_order(2) * 16
        case "gr25":
            return gl_order(5)
        case "twist":
            return 2 * gl_order(3, 4) // 3
        case "og+":
            return spinor.SO_ORDER
        case _:
            raise UnsupportedError(resolved.kind.value, context={"space": resolved.space_id})


def _witnesses(space: AmbientSpace, with_swap: bool) -> list[MatrixWitness]:
    if space.space_id == "dual-p9":
        field_ = binary_field(1)
        return [
            MatrixWitness((linalg.inverse(compound_matrix(g), field_).T.copy(),)) for g in gl_generators(5, field_)
        ]
    if isinstance(space, Grassmannian):
        return [MatrixWitness((compound_matrix(g),)) for g in gl_generators(5, binary_field(1))]
    if isinstance(space, TwistedProduct):
        return _twist_witnesses()
    if isinstance(space, Hypersurface):
        if space.space_id == "x21":
            return _x21_witnesses()
        if space.space_id == "x11":
            return _x11_witnesses()
        raise UnsupportedError(space.kind.value, context={"space": space.space_id})
    if isinstance(space, ProductSpace):
        return _product_witnesses(space.factor_sizes, with_swap and space.has_swap)
    if isinstance(space, ProjectiveSpace):
        return _product_witnesses(space.factor_sizes, False)
    raise UnsupportedError(space.kind.value, context={"space": space.space_id})


def automorphism_generators(space: AmbientSpace | str, *, seed: int = 0, with_swap: bool = True) -> AutomorphismGroup:
    """Aut(X)(F2) on the canonical F2-point list, with matrix witnesses.

    ``with_swap=False`` drops the factor exchange of P^n x P^n, for forms of
    asymmetric bidegree.

    The order is certified by Schreier-Sims against :func:`automorphism_order`.

    Raises:
        UnsupportedError: The space kind has no automorphism model (weighted spaces)
        IntegrityError: The generated order differs from the expected one
    """
    resolved = ambient_space(space) if isinstance(space, str) else space
    if isinstance(resolved, OrthogonalGrassmannianSpace):
        group, matrices = spinor.so_generators(seed)
        return AutomorphismGroup(resolved.space_id, group, [MatrixWitness((m,)) for m in matrices])
    witnesses = _witnesses(resolved, with_swap)
    expected = automorphism_order(resolved, with_swap=with_swap)
    degree = len(resolved.enumerate_points(1))
    permutations = [induced_permutation(resolved, w) for w in witnesses]
    group = PermGroup(permutations, degree, seed=seed)
    schreier_sims(group, known_order=expected)
    if group.order() != expected:
        raise IntegrityError(
            "Automorphism generators have the wrong order",
            context={"space": resolved.space_id, "order": group.order(), "expected": expected},
        )
    logger.info("Automorphism group built", extra={"space": resolved.space_id, "degree": degree, "order": expected})
    return AutomorphismGroup(resolved.space_id, group, witnesses)


def check_witness(space: AmbientSpace, witness: MatrixWitness, permutation: Permutation) -> None:
    """Assert that a witness induces ``permutation`` index by index.

    Raises:
        DomainError: Mismatch at some point
    """
    induced = induced_permutation(space, witness)
    if induced != permutation:
        mismatch = int(np.flatnonzero(induced.images != permutation.images)[0])
        raise DomainError("Witness does not induce the generator", {"space": space.space_id, "point": mismatch})
