import pytest

from qinv.matrix import CapabilityError, Matrix
from qinv.parser import parse_matrix
from qinv.rings import QQ, ZBETA, ZZ, IntegersModP, PolyRing
from qinv.vandermonde import (
    cauchy_binet_sum,
    check_generator_reconstruction,
    det_product_formula,
    search_left_invertible,
    vandermonde,
    verify_left_inverse,
)
from qinv.matrix import determinant


def test_vandermonde_shape():
    V = vandermonde(ZZ, [0, 1, 2, 3], 3)
    assert V.to_strings() == [["1", "0", "0"], ["1", "1", "1"], ["1", "2", "4"], ["1", "3", "9"]]
    with pytest.raises(ValueError):
        vandermonde(ZZ, [0, 1], 3)


def test_det_sign_convention():
    pts = [0, 1, 3]
    assert determinant(vandermonde(ZZ, pts, 3)) == det_product_formula(ZZ, pts)
    # (1-0)(3-0)(3-1)
    assert det_product_formula(ZZ, pts) == 6
    pts = ["b", "1", "2", "-1"]
    assert determinant(vandermonde(ZBETA, pts, 4)) == det_product_formula(ZBETA, pts)


def test_integers_have_no_small_left_inverse():
    assert search_left_invertible(ZZ, 3, [0, 1, 2], 3) is None


def test_integers_with_more_points():
    found = search_left_invertible(ZZ, 2, [0, 1, 2], 3)
    pts, L = found
    # 0 and 1 already give a unimodular matrix
    assert [str(p) for p in pts] == ["0", "1"]
    assert verify_left_inverse(L, vandermonde(ZZ, pts, 2))


def test_zbeta_search_result():
    pts, L = search_left_invertible(ZBETA, 3, [0, 1, 2, "b"], 4)
    assert [str(p) for p in pts] == ["0", "1", "2", "b"]
    assert L.to_strings() == [["1", "0", "0", "0"], ["-2-b", "5+b", "-2", "-1"], ["1+b", "-4-b", "2", "1"]]
    V = vandermonde(ZBETA, pts, 3)
    assert verify_left_inverse(L, V)
    assert cauchy_binet_sum(L, V) == 1


def test_zbeta_needs_four_points():
    assert search_left_invertible(ZBETA, 3, [0, 1, 2, "b"], 3) is None


def test_field_search():
    pts, L = search_left_invertible(IntegersModP(7), 3, [0, 1, 2, 3], 3)
    assert [str(p) for p in pts] == ["0", "1", "2"]
    # repeated points never give an invertible square matrix
    assert search_left_invertible(IntegersModP(3), 3, [0, 1, 4], 3) is None
    with pytest.raises(ValueError):
        search_left_invertible(IntegersModP(2), 3, [0, 1], 3)


def test_left_inverse_rejects_wrong_shape():
    V = vandermonde(QQ, [0, 1], 2)
    assert not verify_left_inverse(Matrix.identity(QQ, 3), V)


def test_generator_reconstruction():
    pts, L = search_left_invertible(ZBETA, 3, [0, 1, 2, "b"], 4)
    H = [parse_matrix(m, ZBETA) for m in ([["1", "b"]], [["0", "2"]], [["b", "-1"]])]
    assert check_generator_reconstruction(H, pts, L)
    bad = L.map(lambda x: ZBETA.add(x, ZBETA.one()))
    assert not check_generator_reconstruction(H, pts, bad)


def test_unsupported_ring():
    R = PolyRing(("x",))
    with pytest.raises(CapabilityError):
        search_left_invertible(R, 2, ["x", "x+1"], 2)
