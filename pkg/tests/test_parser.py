from fractions import Fraction

import pytest

from qinv.parser import (
    MatrixEntryError,
    OutsideRing,
    ParseError,
    RaggedRows,
    UnknownVariable,
    parse_ast,
    parse_matrix,
    parse_scalar,
    print_canonical,
)
from qinv.rings import QQ, ZBETA, ZZ, IntegersModP, PolyRing, ProperRatRing, RatFuncField

QSD = RatFuncField(("s", "d"))


def canon(text, R=QSD):
    return print_canonical(parse_scalar(text, R))


def test_precedence():
    assert parse_scalar("1+2*3", ZZ) == 7
    assert parse_scalar("-2^2", ZZ) == -4
    # every binary operator, ^ included, associates to the left
    assert parse_scalar("2^3^2", ZZ) == 64
    assert parse_scalar("(1+2)*3", ZZ) == 9
    assert parse_scalar("8/2/2", QQ) == 2
    assert parse_scalar("2*-3", ZZ) == -6


def test_implicit_structure():
    assert canon("(s+1)^2") == "s^2+2*s+1"
    assert canon("1/(s*d+2)") == "1/(s*d+2)"
    assert canon("s/s") == "1"


def test_integer_division_only_when_exact():
    assert parse_scalar("4/2", ZZ) == 2
    with pytest.raises(OutsideRing):
        parse_scalar("1/2", ZZ)


def test_modular_division():
    assert parse_scalar("1/3", IntegersModP(7)) == 5
    with pytest.raises(OutsideRing):
        parse_scalar("1/7", IntegersModP(7))


def test_zbeta_reduces():
    assert print_canonical(parse_scalar("b^2", ZBETA)) == "-3+b"
    assert parse_scalar("-1/-1", ZBETA).value == (1, 0)


def test_proper_ring_rejects_improper():
    R = ProperRatRing(("s",), ("d",))
    parse_scalar("s^5/(d+1)", R)
    with pytest.raises(OutsideRing):
        parse_scalar("d", R)


def test_polynomial_ring_division():
    R = PolyRing(("x",))
    assert print_canonical(parse_scalar("(x^2-1)/(x-1)", R)) == "x+1"
    with pytest.raises(OutsideRing):
        parse_scalar("1/x", R)


@pytest.mark.parametrize("text,pos", [
    ("1+", 2),
    ("(1", 2),
    ("1)", 1),
    ("2**3", 2),
    ("", 0),
    ("1 $", 2),
])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(ParseError) as e:
        parse_scalar(text, ZZ)
    assert e.value.pos == pos


def test_unknown_variable():
    with pytest.raises(UnknownVariable) as e:
        parse_scalar("s+x", QSD)
    assert e.value.pos == 2


def test_division_by_zero():
    with pytest.raises(OutsideRing):
        parse_scalar("1/(s-s)", QSD)


def test_huge_exponent_rejected():
    with pytest.raises(ParseError):
        parse_scalar("(s+1)^100000", QSD)


def test_ast_positions():
    node = parse_ast("s + 1")
    assert node.op == "+" and node.right.pos == 4


def test_matrix_parsing():
    A = parse_matrix([["1", 2], ["1/2", "0"]], QQ)
    assert A.raw(1, 0) == Fraction(1, 2)
    assert print_canonical(A) == '[["1", "2"], ["1/2", "0"]]'
    with pytest.raises(RaggedRows):
        parse_matrix([["1"], ["1", "2"]], QQ)
    with pytest.raises(MatrixEntryError) as e:
        parse_matrix([["1", "1/2"]], ZZ)
    assert (e.value.row, e.value.col) == (0, 1)
    with pytest.raises(ParseError):
        parse_matrix([], ZZ)
