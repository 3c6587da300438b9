from fractions import Fraction

import pytest

from bent.errors import VariableMismatch
from bent.polynomials import SparsePolynomial, es_poly_in_p, monomials_up_to

P = SparsePolynomial


def test_product_of_conjugates():
    x, y = P.variable(0, 2), P.variable(1, 2)
    assert (x + y) * (x - y) == x**2 - y**2


def test_zero_coefficients_dropped():
    x = P.variable(0, 1)
    assert (x - x).is_zero()
    assert (x * 0).terms == {}


def test_power_and_degree():
    x, y = P.variable(0, 2), P.variable(1, 2)
    p = (x + 2 * y) ** 3
    assert p.degree() == 3
    assert p.coefficient((1, 2)) == Fraction(12)
    assert (x**0) == P.constant(1, 2)


def test_rational_exactness():
    x = P.variable(0, 1)
    p = x * Fraction(1, 3) + x * Fraction(1, 6)
    assert p.coefficient((1,)) == Fraction(1, 2)


def test_variable_mismatch():
    with pytest.raises(VariableMismatch):
        P.variable(0, 2) + P.variable(0, 3)


def test_substitute_squares():
    x, y = P.variable(0, 2), P.variable(1, 2)
    p = x * y + x**2
    q = p.substitute({0: P.variable(0, 2) ** 2, 1: P.variable(1, 2) ** 2})
    assert q == P.variable(0, 2) ** 2 * P.variable(1, 2) ** 2 + P.variable(0, 2) ** 4


def test_substitute_to_constant():
    x, y = P.variable(0, 2), P.variable(1, 2)
    p = x + y
    q = p.substitute({0: P.constant(2, 1), 1: P.variable(0, 1)})
    assert q == P.variable(0, 1) + 2


def test_evaluate():
    x, y = P.variable(0, 2), P.variable(1, 2)
    p = 3 * x**2 * y - Fraction(1, 2)
    assert p.evaluate([2.0, 1.0]) == pytest.approx(11.5)
    assert p.evaluate_exact([2, 1]) == Fraction(23, 2)
    with pytest.raises(VariableMismatch):
        p.evaluate([1.0])


def test_monomials_up_to():
    monos = monomials_up_to(2, 2)
    assert len(monos) == 6
    assert (0, 0) in monos and (2, 0) in monos and (1, 1) in monos


def test_es_poly_three_level_coefficients():
    # 1 - p1^2 - 2 p1 p2 - p2^2/4, derived independently from the closed form
    p = es_poly_in_p(3)
    assert p.coefficient((0, 0)) == 1
    assert p.coefficient((2, 0)) == -1
    assert p.coefficient((1, 1)) == -2
    assert p.coefficient((0, 2)) == Fraction(-1, 4)
    assert len(p.terms) == 4


def test_es_poly_matches_measure_route():
    from bent.measures import es_p_form
    from bent.schmidt import PCoordinates

    for pt in [(0.3, 0.4, 0.3), (0.1, 0.2, 0.7), (1.0, 0.0, 0.0)]:
        poly_val = es_poly_in_p(3).evaluate(pt[:2])
        assert poly_val == pytest.approx(es_p_form(PCoordinates(pt)), abs=1e-12)


def test_es_poly_four_level_against_permutation():
    from bent.measures import es_p_form
    from bent.schmidt import PCoordinates

    poly = es_poly_in_p(4)
    for pt in [(0.25, 0.25, 0.25, 0.25), (0.1, 0.0, 0.5, 0.4), (0.0, 0.0, 0.0, 1.0)]:
        assert poly.evaluate(pt[:3]) == pytest.approx(es_p_form(PCoordinates(pt)), abs=1e-12)
