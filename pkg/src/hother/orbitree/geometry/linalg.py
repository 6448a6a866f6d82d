"""Dense linear algebra over F_{2^k} on uint8 code matrices, backed by galois."""

from __future__ import annotations

import numpy as np
import numpy.typing as npt

from hother.orbitree.geometry.field import BinaryField, Codes


def _as_matrix(matrix: npt.ArrayLike) -> Codes:
    array = np.asarray(matrix, dtype=np.uint8)
    return array.reshape(1, -1) if array.ndim == 1 else array


def rank(matrix: npt.ArrayLike, field: BinaryField) -> int:
    array = _as_matrix(matrix)
    if array.size == 0 or not array.any():
        return 0
    return int(np.linalg.matrix_rank(field.to_galois(array)))


def rref(matrix: npt.ArrayLike, field: BinaryField) -> Codes:
    """Reduced row echelon form with zero rows removed (leading entries equal 1)."""
    array = _as_matrix(matrix)
    if array.size == 0 or not array.any():
        return np.zeros((0, array.shape[1] if array.ndim == 2 else 0), dtype=np.uint8)
    reduced = field.from_galois(field.to_galois(array).row_reduce())
    return reduced[reduced.any(axis=1)]


def null_space(matrix: npt.ArrayLike, field: BinaryField) -> Codes:
    """Basis (as rows) of ``{x : matrix @ x == 0}``."""
    array = _as_matrix(matrix)
    columns = array.shape[1]
    if array.shape[0] == 0 or not array.any():
        return np.eye(columns, dtype=np.uint8)
    basis = field.from_galois(field.to_galois(array).null_space())
    return basis.reshape(-1, columns)


def left_null_space(matrix: npt.ArrayLike, field: BinaryField) -> Codes:
    """Basis (as rows) of ``{y : y @ matrix == 0}``."""
    return null_space(_as_matrix(matrix).T, field)


def solve(matrix: npt.ArrayLike, rhs: npt.ArrayLike, field: BinaryField) -> Codes | None:
    """One solution of ``matrix @ x == rhs``, or ``None`` when inconsistent."""
    array = _as_matrix(matrix)
    target = np.asarray(rhs, dtype=np.uint8).reshape(-1, 1)
    augmented = np.hstack([array, target])
    reduced = rref(augmented, field)
    columns = array.shape[1]
    solution = np.zeros(columns, dtype=np.uint8)
    for row in reduced:
        lead = int(np.flatnonzero(row)[0])
        if lead == columns:
            return None
        solution[lead] = row[columns]
    return solution


def matmul(a: npt.ArrayLike, b: npt.ArrayLike, field: BinaryField) -> Codes:
    return field.from_galois(field.to_galois(a) @ field.to_galois(b))


def inverse(matrix: npt.ArrayLike, field: BinaryField) -> Codes:
    return field.from_galois(np.linalg.inv(field.to_galois(matrix)))


def intersection_dimension(a: npt.ArrayLike, b: npt.ArrayLike, field: BinaryField) -> int:
    """``dim(rowspace(a) ∩ rowspace(b))``."""
    first, second = _as_matrix(a), _as_matrix(b)
    return rank(first, field) + rank(second, field) - rank(np.vstack([first, second]), field)


def normalize_projective(vector: npt.ArrayLike, field: BinaryField) -> Codes:
    """Scale so that the first nonzero coordinate equals 1."""
    array = np.asarray(vector, dtype=np.uint8).copy()
    nonzero = np.flatnonzero(array)
    if nonzero.size == 0:
        return array
    lead = int(array[nonzero[0]])
    if lead != 1:
        array = field.mul_table[field.inv_table[lead], array]
    return array
