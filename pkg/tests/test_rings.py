from fractions import Fraction

import pytest

from qinv.parser import parse_scalar
from qinv.rings import (
    QQ,
    ZBETA,
    ZZ,
    INFINITE,
    UNKNOWN,
    Finite,
    IntegersModP,
    NotAUnit,
    PolyRing,
    PolynomialExtension,
    ProperRatRing,
    RatFuncField,
    RingElement,
    RingMismatch,
    ValueOutsideRing,
    arith,
    is_unit,
    residue_floor,
    ring_from_json,
    try_invert,
)

F7 = IntegersModP(7)


def el(R, x):
    return RingElement(R, R.convert(x))


def test_mod_p_inverse():
    assert try_invert(el(F7, 3)) == 5
    with pytest.raises(NotAUnit):
        try_invert(el(F7, 0))


def test_mod_p_requires_prime():
    with pytest.raises(ValueError):
        IntegersModP(6)


def test_integer_units():
    assert is_unit(el(ZZ, -1))
    assert not is_unit(el(ZZ, 2))
    with pytest.raises(NotAUnit):
        try_invert(el(ZZ, 2))


def test_rationals():
    assert try_invert(el(QQ, Fraction(2, 3))).value == Fraction(3, 2)


def test_zbeta_multiplication():
    b = RingElement(ZBETA, ZBETA.variable("b"))
    # beta^2 = beta - 3
    assert b * b == RingElement(ZBETA, (-3, 1))
    assert str(b * b) == "-3+b"
    x = RingElement(ZBETA, (2, 1))
    y = RingElement(ZBETA, (-1, 3))
    assert x * y == y * x
    assert ZBETA.norm((2, 1)) == 4 + 2 + 3


def test_zbeta_units_are_plus_minus_one():
    units = [(a, c) for a in range(-4, 5) for c in range(-4, 5) if ZBETA.is_unit((a, c))]
    assert sorted(units) == [(-1, 0), (1, 0)]
    assert not ZBETA.is_unit((2, 0))


def test_zbeta_format():
    assert ZBETA.format((1, -10)) == "1-10*b"
    assert ZBETA.format((0, -1)) == "-b"
    assert ZBETA.format((17, 15)) == "17+15*b"


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        arith("add", el(ZZ, 1), el(F7, 1))


def test_arith_ops():
    a, b = el(ZZ, 7), el(ZZ, -3)
    assert arith("add", a, b) == 4
    assert arith("sub", a, b) == 10
    assert arith("mul", a, b) == -21
    assert arith("neg", a) == -7


def test_residue_floors():
    assert residue_floor(ZZ) == Finite(2)
    assert residue_floor(F7) == Finite(7)
    assert residue_floor(QQ) == INFINITE
    assert residue_floor(ZBETA) == UNKNOWN
    assert residue_floor(ProperRatRing((), ("s",))) == INFINITE
    assert Finite(7).at_least(5) is True
    assert Finite(2).at_least(5) is None
    assert INFINITE.at_least(10 ** 9) is True
    assert UNKNOWN.at_least(2) is None


def test_proper_ring_membership_and_units():
    R = ProperRatRing((), ("s",))
    one_over_s = parse_scalar("1/s", R)
    assert not one_over_s.is_unit()
    assert parse_scalar("(s+1)/(s+2)", R).is_unit()
    with pytest.raises(ValueOutsideRing):
        R.variable("s")
    with pytest.raises(ValueOutsideRing):
        R.convert(RatFuncField(("s",)).variable("s"))


def test_proper_ring_free_variables():
    R = ProperRatRing(("z",), ("s",))
    x = parse_scalar("z^3/(s+1)", R)
    assert R.contains(x.value)
    # free variables are invertible: 1/z is still proper in s
    assert R.is_unit(parse_scalar("z", R).value)
    assert not R.is_unit(parse_scalar("z/s", R).value)


def test_polynomial_ring_units():
    R = PolyRing(("x",))
    assert R.is_unit(R.from_int(3))
    assert not R.is_unit(R.variable("x"))


def test_polynomial_extension():
    E = PolynomialExtension(ZZ, 2)
    c1, c2 = E.gen(0), E.gen(1)
    p = E.mul(E.add(c1, c2), E.add(c1, E.neg(c2)))
    assert p == {(2, 0): 1, (0, 2): -1}
    assert E.is_unit(E.const(-1)) and not E.is_unit(c1)


@pytest.mark.parametrize("obj", [
    {"kind": "integers"}, {"kind": "rationals"}, {"kind": "mod_p", "p": 5}, {"kind": "zbeta"},
    {"kind": "poly", "vars": ["x"]}, {"kind": "ratfunc", "vars": ["s", "d"]},
    {"kind": "proper", "free_vars": ["z"], "proper_vars": ["s", "d"]},
])
def test_ring_json_round_trip(obj):
    R = ring_from_json(obj)
    assert ring_from_json(R.to_json()) == R


def test_ring_json_rejects_unknown():
    with pytest.raises(ValueError):
        ring_from_json({"kind": "octonions"})
