from fractions import Fraction

import pytest
from hypothesis import given

from plainchart.cli.parser import ParseError, parse_poly, parse_rational, tokenize
from plainchart.polycore import to_string

from conftest import R, polynomials

XYZ = R("x", "y", "z")


def test_surface_equation():
    x, y, z = XYZ.gens()
    assert parse_poly("x-(x^2+z^2)*y", XYZ) == x - (x**2 + z**2) * y


def test_zero_and_constants():
    assert parse_poly("0", XYZ).is_zero()
    assert parse_poly("3/4", XYZ) == XYZ.const(Fraction(3, 4))
    assert parse_poly("-(2)", XYZ) == XYZ.const(-2)


def test_multichar_identifiers():
    ring = R("x_1", "x_2", "t1")
    f = parse_poly("x_1*t1 - x_2^2", ring)
    assert f.variables_used() == ("x_1", "x_2", "t1")


def test_precedence():
    a = parse_poly("x+y*z^2", XYZ)
    x, y, z = XYZ.gens()
    assert a == x + y * z**2
    assert parse_poly("2*x^2", XYZ) == 2 * x**2


@pytest.mark.parametrize("text, column, expected", [
    ("2x", 2, "operator"),
    ("x +", 4, "identifier, number or '('"),
    ("x^y", 3, "unsigned integer"),
    ("(x+y", 5, "')'"),
    ("x y", 3, "'+', '-', '*' or end of input"),
])
def test_errors_carry_position(text, column, expected):
    with pytest.raises(ParseError) as info:
        parse_poly(text, XYZ)
    assert info.value.line == 1
    assert info.value.column == column
    assert info.value.expected == expected


def test_error_line_numbers():
    with pytest.raises(ParseError) as info:
        parse_poly("x +\n  y + q", XYZ)
    assert (info.value.line, info.value.column) == (2, 7)
    assert "unknown variable" in str(info.value)


def test_bad_characters_and_zero_denominator():
    with pytest.raises(ParseError):
        tokenize("x $ y")
    with pytest.raises(ParseError):
        parse_poly("1/0", XYZ)
    with pytest.raises(ParseError):
        parse_poly("x^-2", XYZ)


@given(polynomials(XYZ, max_terms=6))
def test_roundtrip(f):
    assert parse_poly(to_string(f), XYZ) == f


def test_parse_rational():
    assert parse_rational("3/2") == Fraction(3, 2)
    assert parse_rational("-4") == -4
    assert parse_rational(7) == 7
    for bad in (1.5, "1.5", "1e3", "abc", True):
        with pytest.raises(ValueError):
            parse_rational(bad)
