"""
Unit tests for polynomials and form spaces.
"""

import numpy as np
import pytest

from hother.orbitree.core.exceptions import DomainError
from hother.orbitree.geometry import gf2
from hother.orbitree.geometry.field import binary_field
from hother.orbitree.geometry.forms import (
    MONOMIAL_ORDER,
    Polynomial,
    monomial_values,
    monomials,
    product_monomials,
    weighted_monomials,
)
from hother.orbitree.geometry.spaces import ambient_space


class TestMonomials:
    """Test the lex-descending monomial order."""

    def test_linear_monomials(self):
        """Test x0, x1, x2 in that order."""
        assert monomials(3, 1) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]

    def test_quadratic_monomials(self):
        """Test the six conics with x0^2 first and x2^2 last."""
        quadrics = monomials(3, 2)
        assert len(quadrics) == 6
        assert quadrics[0] == (2, 0, 0)
        assert quadrics[-1] == (0, 0, 2)
        assert quadrics == sorted(quadrics, reverse=True)

    def test_degenerate_cases(self):
        """Test zero variables."""
        assert monomials(0, 0) == [()]
        assert monomials(0, 2) == []

    def test_weighted(self):
        """Test degree-2 monomials of P(1:1:1:2)."""
        exponents = weighted_monomials((1, 1, 1, 2), 2)
        assert len(exponents) == 7
        assert exponents[0] == (2, 0, 0, 0)
        assert (0, 0, 0, 1) in exponents

    def test_product(self):
        """Test bidegree (1, 1) on P1 x P2, first factor major."""
        exponents = product_monomials((2, 3), (1, 1))
        assert len(exponents) == 6
        assert exponents[:2] == [(1, 0, 1, 0, 0), (1, 0, 0, 1, 0)]


class TestPolynomial:
    """Test sparse polynomial arithmetic."""

    def test_addition_cancels(self):
        """Test that f + f == 0 in characteristic 2."""
        f = Polynomial.from_monomials([(1, 0), (0, 1)])
        assert (f + f).is_zero

    def test_from_monomials_cancels_repeats(self):
        """Test that repeated monomials cancel."""
        assert Polynomial.from_monomials([(1, 0), (1, 0)]).is_zero

    def test_square_is_frobenius(self):
        """Test (x0 + x1)^2 == x0^2 + x1^2."""
        f = Polynomial.from_monomials([(1, 0), (0, 1)])
        assert f * f == Polynomial.from_monomials([(2, 0), (0, 2)])

    def test_evaluate_over_extension(self):
        """Test x0 x1 + x2^2 on points of P2(F4)."""
        field = binary_field(2)
        conic = Polynomial.from_monomials([(1, 1, 0), (0, 0, 2)])
        coords = np.array([[1, 0, 0], [1, 1, 1], [1, 3, 2]], dtype=np.uint8)
        expected = [field.mul(int(a), int(b)) ^ field.mul(int(c), int(c)) for a, b, c in coords]
        assert conic.evaluate(coords, field).tolist() == expected

    def test_f4_coefficients_need_even_field(self):
        """Test that F4 coefficients do not embed in F8."""
        poly = Polynomial.from_mapping({(1,): 2}, coefficient_degree=2)
        with pytest.raises(DomainError):
            poly.evaluate(np.array([[1]], dtype=np.uint8), binary_field(3))

    def test_monomial_values(self):
        """Test the value matrix of monomials."""
        field = binary_field(1)
        coords = np.array([[1, 0], [1, 1]], dtype=np.uint8)
        assert monomial_values(coords, [(1, 0), (0, 1), (1, 1)], field).tolist() == [[1, 0, 0], [1, 1, 1]]


class TestFormSpace:
    """Test packed form coordinates."""

    def test_linear_forms_on_p2(self):
        """Test that value rows of linear forms are the packed points."""
        space = ambient_space("p2")
        forms = space.forms(1)
        points = space.enumerate_points(1)
        assert forms.dimension == 3
        assert forms.value_rows(points) == gf2.pack_rows(points.coords)

    def test_value_columns_transpose_rows(self):
        """Test that columns pack the same values per form."""
        space = ambient_space("p2")
        forms = space.forms(2)
        points = space.enumerate_points(1)
        values = forms.rational_values(points)
        assert forms.value_columns(points) == gf2.pack_columns(values)

    def test_grassmannian_forms_use_plucker_coordinates(self):
        """Test that forms on Gr(2,5) live on P9."""
        assert ambient_space("gr25").forms(1).dimension == 10

    def test_coordinates_and_polynomial(self):
        """Test the packed coordinates of x1 and back."""
        forms = ambient_space("p2").forms(1)
        x1 = Polynomial.from_monomials([(0, 1, 0)])
        assert forms.coordinates(x1) == 0b010
        assert forms.polynomial(0b010) == x1

    def test_outside_form_space(self):
        """Test that a quadric is not a linear form."""
        forms = ambient_space("p2").forms(1)
        with pytest.raises(DomainError):
            forms.coordinates(Polynomial.from_monomials([(2, 0, 0)]))

    def test_evaluate_combination(self):
        """Test the values of x0 + x1."""
        space = ambient_space("p2")
        points = space.enumerate_points(1)
        values = space.forms(1).evaluate(0b011, points)
        assert values.tolist() == [int(a ^ b) for a, b, _ in points.coords]

    def test_describe(self):
        """Test the JSON description with reversed bits."""
        description = ambient_space("p2").forms(1).describe(0b001)
        assert description == {"degree": [1], "monomial_order": MONOMIAL_ORDER, "bits": "100"}

    def test_rational_values_reject_extension_points(self):
        """Test that packed values need F2 points."""
        space = ambient_space("p2")
        with pytest.raises(DomainError):
            space.forms(1).rational_values(space.enumerate_points(2))

    def test_twisted_forms_are_rational(self):
        """Test that descended forms take F2 values on twisted F2 points."""
        space = ambient_space("twist")
        forms = space.forms((1, 1))
        values = forms.rational_values(space.enumerate_points(1))
        assert forms.dimension == 9
        assert values.shape == (21, 9)
        assert values.max() <= 1
