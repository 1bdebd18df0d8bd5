import pytest

from qinv.controllers import GeneratorSet, Sparsity
from qinv.matrix import DimensionMismatch, Matrix
from qinv.parser import parse_matrix, print_canonical
from qinv.problem import load_problem
from qinv.qi import (
    Method,
    NotInM,
    Verdict,
    adjugate_invariance,
    check_qi,
    check_strong_qi,
    closed_loop_set,
    h_invariance,
    h_map,
    k_adj,
    symbolic_k_adj,
)
from qinv.rings import QQ, ZZ, IntegersModP, RatFuncField


def counterexample():
    prob = load_problem("corpus:counterexample")
    return prob.plant, prob.controller_set


@pytest.mark.parametrize("name,qi,h", [
    ("counterexample", "true", "unknown"),
    ("network", "true", "true"),
    ("network_nodelay", "true", "unknown"),
    ("multidim", "true", "unknown"),
    ("multidim_strict", "true", "true"),
    ("sparsity_chain", "true", "true"),
    ("sparsity_decentralized", "false", "false"),
])
def test_corpus_verdicts(name, qi, h):
    prob = load_problem(f"corpus:{name}")
    assert check_qi(prob.plant, prob.controller_set).verdict.value == qi
    assert h_invariance(prob.plant, prob.controller_set).verdict.value == h


def test_sparsity_methods_agree():
    prob = load_problem("corpus:sparsity_chain")
    G, S = prob.plant, prob.controller_set
    a = check_qi(G, S, method="sparsity")
    b = check_qi(G, S, method="generators")
    assert a.method == Method.SPARSITY and b.method == Method.POLARIZATION
    assert a.verdict == b.verdict == Verdict.TRUE


def test_sparsity_method_needs_pattern():
    G, S = counterexample()
    with pytest.raises(ValueError):
        check_qi(G, S, method="sparsity")


def test_qi_false_witness_is_checkable():
    prob = load_problem("corpus:sparsity_decentralized")
    G, S = prob.plant, prob.controller_set
    rep = check_qi(G, S)
    K = rep.witness["K"]
    assert K in S and (K @ G @ K) not in S


def test_decentralized_over_field_adjugate_false():
    prob = load_problem("corpus:sparsity_decentralized")
    rep = adjugate_invariance(prob.plant, prob.controller_set)
    assert rep.verdict == Verdict.FALSE


def test_counterexample_adjugate_not_invariant():
    G, S = counterexample()
    K0 = S.generators()[2]
    assert check_qi(G, S).verdict == Verdict.TRUE
    rep = adjugate_invariance(G, S)
    assert rep.verdict == Verdict.FALSE
    assert rep.witness["K"] == K0
    assert print_canonical(k_adj(K0, G)) == '[["1", "1", "1"], ["1", "1", "0"], ["1", "0", "0"]]'


def test_counterexample_mod_small_primes():
    G, S0 = counterexample()
    gens = S0.generators()
    for p in (3, 5):
        F = IntegersModP(p)
        Gp = G.map(F.convert, F)
        S = GeneratorSet(F, [H.map(F.convert, F) for H in gens])
        assert check_qi(Gp, S).verdict == Verdict.TRUE
        assert adjugate_invariance(Gp, S).verdict == Verdict.TRUE


def test_symbolic_expansion_degree():
    G, S = counterexample()
    coeffs = symbolic_k_adj(G, S)
    assert max(sum(e) for e in coeffs) <= 3
    # constant term of K adj(I - GK) is zero
    assert all(sum(e) >= 1 for e in coeffs)


def test_strong_qi():
    G = parse_matrix([["0", "0"], ["1", "0"]], QQ)
    S = Sparsity(QQ, [[1, 0], [1, 1]])
    assert check_qi(G, S).verdict == Verdict.TRUE
    assert check_strong_qi(G, S).verdict == Verdict.TRUE
    # span{I, e12, e21} is closed under squaring but e12 e21 = e11 escapes
    gens = [parse_matrix(m, QQ) for m in ([["1", "0"], ["0", "1"]], [["0", "1"], ["0", "0"]], [["0", "0"], ["1", "0"]])]
    S2 = GeneratorSet(QQ, gens)
    I = Matrix.identity(QQ, 2)
    assert check_qi(I, S2).verdict == Verdict.TRUE
    rep = check_strong_qi(I, S2)
    assert rep.verdict == Verdict.FALSE and rep.witness["K1GK2"] not in S2


def test_h_map_scalar():
    prob = load_problem("corpus:scalar")
    K = parse_matrix([["1"]], prob.plant.ring)
    hK = h_map(K, prob.plant)
    assert hK.to_strings() == [["-s/(s-1)"]]
    assert h_map(hK, prob.plant) == K


def test_h_map_not_in_m():
    G = parse_matrix([["1"]], QQ)
    with pytest.raises(NotInM) as e:
        h_map(parse_matrix([["1"]], QQ), G)
    assert e.value.det == 0
    with pytest.raises(DimensionMismatch):
        h_map(parse_matrix([["1", "1"]], QQ), G)


def test_h_invariance_counterexample_over_field():
    prob = load_problem("corpus:sparsity_decentralized")
    rep = h_invariance(prob.plant, prob.controller_set)
    assert rep.verdict == Verdict.FALSE
    assert rep.witness["hK"] not in prob.controller_set


def test_field_size_precondition():
    F3 = IntegersModP(3)
    G = Matrix.zeros(F3, 2, 2)
    rep = h_invariance(G, Sparsity(F3, [[1, 1], [1, 1]]))
    assert rep.verdict == Verdict.UNKNOWN
    assert ("field has at least 2*min(m,n)+1 = 5 elements", "fails") in rep.preconditions


def test_char_two_precondition():
    F2 = IntegersModP(2)
    G = Matrix.zeros(F2, 1, 1)
    # min(m,n) = 1 needs nothing
    assert h_invariance(G, Sparsity(F2, [[1]])).verdict == Verdict.TRUE


def test_closed_loop_images():
    prob = load_problem("corpus:sparsity_chain")
    aff = closed_loop_set(prob.p11, prob.p12, prob.p21, prob.plant, prob.controller_set)
    assert aff is not None
    assert len(aff.images) == len(prob.controller_set.generators())
    assert aff.element([0] * len(aff.images)) == prob.p11


def test_closed_loop_unknown_returns_none():
    R = RatFuncField(("s",))
    G = parse_matrix([["1/s"]], R)
    S = Sparsity(R, [[1]])
    I = Matrix.identity(R, 1)
    assert closed_loop_set(I, I, I, G, S) is not None
    prob = load_problem("corpus:counterexample")
    I3 = Matrix.identity(ZZ, 3)
    assert closed_loop_set(I3, I3, I3, prob.plant, prob.controller_set) is None


def test_report_is_not_boolean():
    prob = load_problem("corpus:network")
    rep = check_qi(prob.plant, prob.controller_set)
    with pytest.raises(TypeError):
        bool(rep)
    assert rep.to_json()["verdict"] == "true"
