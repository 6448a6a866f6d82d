"""GF(2) linear algebra on rows packed into Python integers.

Bit ``j`` of a row is coordinate ``j``. Reduced echelon forms use the lowest
set bit of each row as its pivot and are fully reduced (no pivot bit appears
in another row).
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence

import numpy as np
import numpy.typing as npt


def parity(value: int) -> int:
    return value.bit_count() & 1


def dot(a: int, b: int) -> int:
    """Standard bilinear pairing of two packed vectors."""
    return (a & b).bit_count() & 1


def pivot(row: int) -> int:
    """Index of the lowest set bit."""
    return (row & -row).bit_length() - 1


def rref(rows: Iterable[int]) -> list[int]:
    """Fully reduced echelon basis of the span of ``rows``, sorted by pivot."""
    basis: list[int] = []
    for row in rows:
        row = reduce(row, basis)
        if not row:
            continue
        low = row & -row
        basis = [b ^ row if b & low else b for b in basis]
        basis.append(row)
    basis.sort(key=lambda b: b & -b)
    return basis


def reduce(vector: int, basis: Sequence[int]) -> int:
    """Canonical remainder of ``vector`` modulo a fully reduced basis."""
    for row in basis:
        if vector & (row & -row):
            vector ^= row
    return vector


def rank(rows: Iterable[int]) -> int:
    return len(rref(rows))


def in_span(vector: int, basis: Sequence[int]) -> bool:
    """Membership test against a basis returned by :func:`rref`."""
    return reduce(vector, basis) == 0


def kernel(rows: Iterable[int], ncols: int) -> list[int]:
    """Basis of ``{x : dot(row, x) == 0 for every row}`` in ``GF(2)^ncols``."""
    basis = rref(rows)
    pivots = {pivot(b): b for b in basis}
    result = []
    for free in range(ncols):
        if free in pivots:
            continue
        vector = 1 << free
        for p, row in pivots.items():
            if row >> free & 1:
                vector |= 1 << p
        result.append(vector)
    return result


def solve(rows: Sequence[int], rhs: Sequence[int], ncols: int) -> int | None:
    """One solution of ``dot(rows[i], x) == rhs[i]``, or ``None`` when inconsistent."""
    augmented = [row | ((bit & 1) << ncols) for row, bit in zip(rows, rhs, strict=True)]
    marker = 1 << ncols
    solution = 0
    for row in rref(augmented):
        if row == marker:
            return None
        if row & marker:
            solution |= 1 << pivot(row)
    return solution


def intersection_dimension(a: Sequence[int], b: Sequence[int]) -> int:
    """``dim(span(a) ∩ span(b))``."""
    return rank(a) + rank(b) - rank([*a, *b])


def span_elements(basis: Sequence[int]) -> Iterator[int]:
    """All ``2^len(basis)`` combinations in Gray-code order, starting with 0."""
    current = 0
    yield current
    for step in range(1, 1 << len(basis)):
        current ^= basis[(step & -step).bit_length() - 1]
        yield current


def pack(bits: Sequence[int] | npt.NDArray[np.integer]) -> int:
    """Pack a 0/1 sequence (coordinate 0 first) into an integer."""
    array = np.asarray(bits, dtype=np.uint8) & 1
    return int.from_bytes(np.packbits(array, bitorder="little").tobytes(), "little")


def unpack(value: int, length: int) -> npt.NDArray[np.uint8]:
    return np.array([(value >> j) & 1 for j in range(length)], dtype=np.uint8)


def pack_columns(matrix: npt.NDArray[np.integer]) -> list[int]:
    """Each column of a 0/1 matrix packed over its rows."""
    array = np.asarray(matrix, dtype=np.uint8) & 1
    return [pack(array[:, j]) for j in range(array.shape[1])]


def pack_rows(matrix: npt.NDArray[np.integer]) -> list[int]:
    array = np.asarray(matrix, dtype=np.uint8) & 1
    return [pack(row) for row in array]
