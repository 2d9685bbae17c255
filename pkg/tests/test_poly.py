from fractions import Fraction

import pytest

from weilab.poly import (
    ContextMismatch,
    DegreeTooHigh,
    PolyError,
    PolySyntaxError,
    RingContext,
    TruncPoly,
    UnknownVariable,
    monomials_of_degree,
    parse_poly,
    partial_derivative,
    substitute,
)

XY4 = RingContext(("x", "y"), 4)


def p(text, ctx=XY4):
    return parse_poly(text, ctx)


def test_truncation_drops_high_degree_products():
    assert p("x^3") * p("x*y") == TruncPoly(XY4)
    assert p("x^2") * p("y^2") == p("x^2*y^2")
    assert p("1 + x") ** 5 == p("1 + 5*x + 10*x^2 + 10*x^3 + 5*x^4")


def test_parse_examples():
    assert p("x^2*y + y^4").terms == {(2, 1): 1, (0, 4): 1}
    assert p("-3/2*x*y + 2").terms == {(1, 1): Fraction(-3, 2), (0, 0): 2}
    assert p("x*x").terms == {(2, 0): 1}
    assert p("x - x") == TruncPoly(XY4)
    assert p("0") == TruncPoly(XY4)
    assert p(" x ^ 2 * y ").terms == {(2, 1): 1}


def test_render_grammar():
    assert str(p("y^4 + x^2*y")) == "x^2*y + y^4"
    assert str(p("-x^2*y")) == "-x^2*y"
    assert str(p("1/2*x - 3")) == "-3 + 1/2*x"
    assert str(TruncPoly(XY4)) == "0"


@pytest.mark.parametrize("text,exc", [
    ("x^5", DegreeTooHigh),
    ("x^2*y^3", DegreeTooHigh),
    ("w", UnknownVariable),
    ("x +", PolySyntaxError),
    ("x ^", PolySyntaxError),
    ("2 * * x", PolySyntaxError),
    ("1/0", PolyError),
    ("x + - 2", PolySyntaxError),
])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        p(text)


def test_syntax_error_position():
    with pytest.raises(PolySyntaxError) as info:
        p("x^2 + * y")
    assert info.value.pos == 6


def test_context_mismatch():
    other = RingContext(("x", "y"), 3)
    with pytest.raises(ContextMismatch):
        p("x") + parse_poly("x", other)


def test_ring_context_validation():
    with pytest.raises(PolyError):
        RingContext(("x", "x"), 2)
    with pytest.raises(PolyError):
        RingContext(("x",), 0)
    with pytest.raises(PolyError):
        RingContext(("x", "y"), 2, ("x", "z"))


def test_substitute_and_derivative():
    f = p("x^2*y + y^4")
    assert substitute(f, [p("y"), p("x")]) == p("x*y^2 + x^4")
    assert substitute(f, [p("x + y^2"), p("y")]) == p("x^2*y + y^4 + 2*x*y^3")
    assert partial_derivative(f, 0) == p("2*x*y")
    assert partial_derivative(f, 1) == p("x^2 + 4*y^3")


def test_monomials_of_degree_lex_descending():
    assert monomials_of_degree(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(monomials_of_degree(3, 4)) == 15


def test_degree_helpers():
    f = p("x + x^2*y")
    assert f.min_degree == 1 and f.max_degree == 3
    assert f.constant_term == 0
    assert TruncPoly.from_vector(XY4, f.to_vector()) == f
