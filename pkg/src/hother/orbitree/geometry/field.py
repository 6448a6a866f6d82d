"""Binary fields F_{2^k} for k <= 8.

Elements are stored as integer codes ``0 .. 2^k - 1`` in the polynomial
basis of a fixed modulus (the Conway polynomials, so F_{2^j} sits inside
F_{2^k} compatibly whenever j divides k). Addition is XOR; multiplication,
inversion and powers go through lookup tables built once per field with
:mod:`galois`.
"""

from __future__ import annotations

from functools import cache

import galois
import numpy as np
import numpy.typing as npt

from hother.orbitree.core.exceptions import DomainError
from hother.orbitree.utils.logging import get_logger

logger = get_logger(__name__)

MAX_DEGREE = 8

MODULI: dict[int, str] = {
    1: "x + 1",
    2: "x^2 + x + 1",
    3: "x^3 + x + 1",
    4: "x^4 + x + 1",
    5: "x^5 + x^2 + 1",
    6: "x^6 + x^4 + x^3 + x + 1",
    7: "x^7 + x + 1",
    8: "x^8 + x^4 + x^3 + x^2 + 1",
}

Codes = npt.NDArray[np.uint8]


class BinaryField:
    """The field F_{2^k} with table arithmetic on uint8 codes.

    Attributes:
        degree: k
        order: 2^k
        gf: The :mod:`galois` field class
        mul_table: ``order x order`` products
        inv_table: Inverses (``inv_table[0] == 0`` by convention)
        log_table / exp_table: Discrete logarithms to the base of the primitive root ``x``
    """

    def __init__(self, degree: int):
        if not 1 <= degree <= MAX_DEGREE:
            raise DomainError("Field degree out of range", {"degree": degree, "max": MAX_DEGREE})
        self.degree = degree
        self.order = 1 << degree
        if degree == 1:
            self.gf: type[galois.FieldArray] = galois.GF(2)
        else:
            self.gf = galois.GF(self.order, irreducible_poly=MODULI[degree])
        elements = self.gf(np.arange(self.order))
        products = elements[:, np.newaxis] * elements[np.newaxis, :]
        self.mul_table: Codes = np.asarray(products.view(np.ndarray), dtype=np.uint8)
        inverse = np.zeros(self.order, dtype=np.uint8)
        inverse[1:] = np.asarray((self.gf(np.arange(1, self.order)) ** -1).view(np.ndarray), dtype=np.uint8)
        self.inv_table: Codes = inverse
        primitive = 1 if degree == 1 else 2
        exp = np.ones(self.order - 1, dtype=np.uint8)
        for e in range(1, self.order - 1):
            exp[e] = self.mul_table[exp[e - 1], primitive]
        log = np.zeros(self.order, dtype=np.int64)
        log[exp] = np.arange(self.order - 1)
        self.exp_table: Codes = exp
        self.log_table = log
        self.square_table: Codes = np.asarray(self.mul_table[np.arange(self.order), np.arange(self.order)], dtype=np.uint8)
        logger.debug("Binary field tables built", extra={"degree": degree})

    def __repr__(self) -> str:
        return f"BinaryField(2^{self.degree})"

    def elements(self) -> Codes:
        return np.arange(self.order, dtype=np.uint8)

    def nonzero(self) -> Codes:
        return np.arange(1, self.order, dtype=np.uint8)

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("Zero has no inverse")
        return int(self.inv_table[a])

    def power(self, a: int, exponent: int) -> int:
        if a == 0:
            return 1 if exponent == 0 else 0
        return int(self.exp_table[(int(self.log_table[a]) * exponent) % (self.order - 1)])

    def frobenius(self, a: int, times: int = 1) -> int:
        """``a^(2^times)``."""
        return self.power(a, 1 << (times % self.degree)) if self.degree > 1 else a

    def mul_arrays(self, a: npt.NDArray[np.integer], b: npt.NDArray[np.integer]) -> Codes:
        """Elementwise product of code arrays (broadcasting)."""
        return self.mul_table[a, b]

    def dot(self, a: npt.NDArray[np.integer], b: npt.NDArray[np.integer]) -> int:
        """Inner product of two code vectors."""
        return int(np.bitwise_xor.reduce(self.mul_table[a, b], axis=None)) if len(a) else 0

    def to_galois(self, codes: npt.ArrayLike) -> galois.FieldArray:
        return self.gf(np.asarray(codes, dtype=np.int64))

    def from_galois(self, array: galois.FieldArray) -> Codes:
        return np.asarray(array.view(np.ndarray), dtype=np.uint8)

    def subfield_generator(self, sub_degree: int) -> int:
        """Primitive element of F_{2^j} inside this field (image of the subfield's ``x``)."""
        if self.degree % sub_degree:
            raise DomainError("Not a subfield", {"field": self.degree, "subfield": sub_degree})
        if sub_degree == 1:
            return 1
        return self.power(2 if self.degree > 1 else 1, (self.order - 1) // ((1 << sub_degree) - 1))

    def embed(self, code: int, sub: BinaryField) -> int:
        """Image of an element of the subfield ``sub`` under the Conway-compatible embedding."""
        if code == 0:
            return 0
        generator = self.subfield_generator(sub.degree)
        return self.power(generator, int(sub.log_table[code]))

    def embed_array(self, codes: npt.NDArray[np.integer], sub: BinaryField) -> Codes:
        table = np.array([self.embed(c, sub) for c in range(sub.order)], dtype=np.uint8)
        return table[codes]

    def omega(self) -> int:
        """A primitive cube root of unity (requires an even degree)."""
        if self.degree % 2:
            raise DomainError("F4 does not embed in an odd-degree field", {"degree": self.degree})
        return self.subfield_generator(2)

    def in_subfield(self, code: int, sub_degree: int) -> bool:
        """Whether ``code`` lies in F_{2^j}."""
        return self.power(code, 1 << sub_degree) == code


@cache
def binary_field(degree: int) -> BinaryField:
    """Shared field instance for ``degree``."""
    return BinaryField(degree)
