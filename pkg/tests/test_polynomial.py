import random
from fractions import Fraction

import pytest
import sympy as sp

from toricres.errors import InputError
from toricres.polynomial import SparsePoly


def random_poly(rng, nvars=3, terms=5, degree=4):
    return SparsePoly(nvars, [(tuple(rng.randint(0, degree) for _ in range(nvars)),
                               Fraction(rng.randint(-5, 5), rng.randint(1, 3)))
                              for _ in range(terms)])


def to_sympy(p, xs):
    return sum(sp.Rational(c.numerator, c.denominator) * sp.Mul(*[x ** k for x, k in zip(xs, e)])
               for e, c in p.items())


def test_arithmetic_matches_sympy():
    rng = random.Random(0)
    xs = sp.symbols("x0:3")
    for _ in range(20):
        p, q = random_poly(rng), random_poly(rng)
        assert sp.expand(to_sympy(p * q, xs) - to_sympy(p, xs) * to_sympy(q, xs)) == 0
        assert sp.expand(to_sympy(p - q, xs) - (to_sympy(p, xs) - to_sympy(q, xs))) == 0
        assert sp.expand(to_sympy(p ** 2, xs) - to_sympy(p, xs) ** 2) == 0


def test_zero_coefficients_dropped():
    p = SparsePoly(2, [((1, 0), 1), ((1, 0), -1), ((0, 1), 2)])
    assert p.terms == {(0, 1): Fraction(2)}
    assert (p - p).is_zero()


def test_graded_lex_order_and_format():
    p = SparsePoly(2, {(0, 1): 1, (0, 0): -1, (1, 1): -1})
    assert [e for e, _ in p.items()] == [(0, 0), (0, 1), (1, 1)]
    assert p.format() == "-y1*y2 + y2 - 1"
    assert p.format(["u", "v"]) == "-u*v + v - 1"


def test_pullback_substitutes_monomial_map():
    # U0 = y1 y2^2, U1 = y1 y2^3
    p = SparsePoly(2, {(3, 0): 1, (0, 2): -1})
    chart = [[1, 1], [2, 3]]
    pulled = p.pullback(chart)
    assert pulled.terms == {(3, 6): 1, (2, 6): -1}
    assert pulled.divide_monomial((2, 6)).format() == "y1 - 1"


def test_substitute_evaluate_derivative():
    x, y = SparsePoly.variable(2, 0), SparsePoly.variable(2, 1)
    p = x ** 2 * y - y * 3 + 1
    q = p.substitute([x + y, y])
    assert q.evaluate([2, 1]) == p.evaluate([3, 1])
    assert p.derivative(0).evaluate([2, 5]) == 20
    assert p.constant_term() == 1


def test_json_round_trip():
    rng = random.Random(2)
    p = random_poly(rng)
    assert SparsePoly.from_json(3, p.to_json()) == p


def test_bad_input():
    with pytest.raises(InputError):
        SparsePoly(2, [((1,), 1)])
    with pytest.raises(InputError):
        SparsePoly(2, [((1, -1), 1)])
    with pytest.raises(InputError):
        SparsePoly(2, {(1, 0): 1}).divide_monomial((0, 1))
