import pytest

from qinv.controllers import DelayBounds, GeneratorSet, Sparsity, full_set
from qinv.matrix import CapabilityError, DimensionMismatch, Matrix
from qinv.parser import parse_matrix
from qinv.rings import QQ, ZZ, PolyRing, ProperRatRing, RingMismatch

P = ProperRatRing(("s",), ("d",))


def test_sparsity_membership():
    S = Sparsity(QQ, [[1, 0], [1, 1]])
    assert parse_matrix([["1", "0"], ["2", "3"]], QQ) in S
    res = S.contains(parse_matrix([["1", "5"], ["0", "0"]], QQ))
    assert not res and res.certificate["entry"] == [0, 1]
    assert len(S.generators()) == 3
    assert all(H in S for H in S.generators())


def test_full_set():
    S = full_set(ZZ, 2, 3)
    assert S.shape == (2, 3) and len(S.generators()) == 6


def test_delay_membership():
    S = DelayBounds(P, "d", [[1]])
    assert parse_matrix([["1/(d*(s+1))"]], P) in S
    res = S.contains(parse_matrix([["1/(s+1)"]], P))
    assert not res
    assert res.certificate == {"entry": [0, 0], "delay": 0, "bound": 1}
    assert S.contains(parse_matrix([["0"]], P))


def test_delay_generators_are_members():
    S = DelayBounds(P, "d", [[0, 2], [1, 3]])
    gens = S.generators()
    assert len(gens) == 4
    assert all(H in S for H in gens)
    assert gens[1] == parse_matrix([["0", "1/d^2"], ["0", "0"]], P)
    K = parse_matrix([["s/(d+1)", "1/(d^2+d^3)"], ["1/d", "s^2/(d^4+1)"]], P)
    cert = S.contains(K).certificate["coefficients"]
    assert S.combine(cert) == K


def test_delay_needs_proper_variable():
    with pytest.raises(ValueError):
        DelayBounds(ProperRatRing((), ("s",)), "d", [[1]])
    with pytest.raises(ValueError):
        DelayBounds(P, "d", [[-1]])


def test_generator_membership_over_integers():
    H = parse_matrix([["2", "0"], ["0", "2"]], ZZ)
    S = GeneratorSet(ZZ, [H])
    assert parse_matrix([["4", "0"], ["0", "4"]], ZZ) in S
    res = S.contains(parse_matrix([["1", "0"], ["0", "1"]], ZZ))
    assert not res and "∤" in res.certificate["obstruction"]
    assert not S.contains(parse_matrix([["2", "0"], ["0", "4"]], ZZ))


def test_generator_combination_round_trip():
    gens = [parse_matrix(m, QQ) for m in ([["1", "1"]], [["0", "1"]])]
    S = GeneratorSet(QQ, gens)
    K = parse_matrix([["3", "1/2"]], QQ)
    assert S.combine(S.contains(K).certificate["coefficients"]) == K


def test_empty_generator_set():
    S = GeneratorSet(ZZ, [], shape=(1, 1))
    assert Matrix.zeros(ZZ, 1, 1) in S
    assert parse_matrix([["1"]], ZZ) not in S
    with pytest.raises(ValueError):
        GeneratorSet(ZZ, [])


def test_shape_and_ring_checks():
    S = Sparsity(ZZ, [[1]])
    with pytest.raises(DimensionMismatch):
        S.contains(Matrix.zeros(ZZ, 2, 1))
    with pytest.raises(RingMismatch):
        S.contains(Matrix.zeros(QQ, 1, 1))
    with pytest.raises(DimensionMismatch):
        Sparsity(ZZ, [[1], [1, 0]])


def test_generator_membership_unsupported_ring():
    R = PolyRing(("x",))
    S = GeneratorSet(R, [Matrix.identity(R, 1)])
    with pytest.raises(CapabilityError):
        S.contains(Matrix.identity(R, 1))
