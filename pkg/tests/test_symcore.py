from fractions import Fraction

import pytest
import sympy
from hypothesis import given

from helpers import VARS, polys
from lieruth.errors import PolyParseError, StructureError, UnknownIdentifierError
from lieruth.symcore import Poly, parse_poly


def to_sympy(p: Poly):
    syms = sympy.symbols(p.variables)
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** e for s, e in zip(syms, exps)])
                            for exps, c in p.terms()))


@given(polys(), polys(), polys())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == Poly.zero(VARS)
    assert a * Poly.one(VARS) == a


@given(polys(), polys())
def test_product_matches_sympy(a, b):
    assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0


@given(polys())
def test_print_parse_round_trip(p):
    assert parse_poly(str(p), VARS) == p


@given(polys(), polys())
def test_partial_is_a_derivation(a, b):
    for i in range(len(VARS)):
        assert (a * b).partial(i) == a.partial(i) * b + a * b.partial(i)


@given(polys())
def test_partial_matches_sympy(p):
    x = sympy.Symbol("x")
    assert sympy.expand(to_sympy(p.partial(0)) - sympy.diff(to_sympy(p), x)) == 0


def test_parse_grammar():
    x, y = Poly.coordinates(VARS)
    assert parse_poly("(x - 1/2*y)^2", VARS) == x * x - x * y + y * y / 4
    assert parse_poly("-3", VARS) == -3
    assert parse_poly("2*x*y - x^0", VARS) == 2 * x * y - 1
    assert str(parse_poly("y^2 + x", VARS)) == "y^2 + x"


def test_evaluate_is_exact():
    p = parse_poly("1/3*x^2 - y", VARS)
    assert p.evaluate([Fraction(1, 2), 1]) == Fraction(1, 12) - 1


@pytest.mark.parametrize("text, position", [("x+*y", 2), ("(x+1", 4), ("x^", 2)])
def test_parse_errors_report_position(text, position):
    with pytest.raises(PolyParseError) as info:
        parse_poly(text, VARS)
    assert info.value.position == position
    assert "position" in str(info.value)


def test_unknown_identifier():
    with pytest.raises(UnknownIdentifierError) as info:
        parse_poly("x + q", VARS)
    assert info.value.name == "q"


def test_mixed_charts_refused():
    with pytest.raises(StructureError):
        Poly.var(("x",), 0) + Poly.var(("y",), 0)


def test_division_only_in_rational_literals():
    with pytest.raises(PolyParseError):
        parse_poly("x/2", VARS)
