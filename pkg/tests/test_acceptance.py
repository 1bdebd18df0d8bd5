"""Acceptance checks; each test prints one PASS/FAIL line."""
import random
import time
import zlib
from fractions import Fraction

import numpy as np

from qinv import oracle
from qinv.matrix import Matrix, adjugate, adjugate_cofactor, char_poly, determinant, poly_eval_matrix
from qinv.parser import ParseError, parse_matrix, parse_scalar, print_canonical
from qinv.poly import MultiPoly, RatFunc, delay, format_ratfunc, is_proper_in
from qinv.problem import load_problem
from qinv.qi import NotInM, Verdict, check_qi, closed_loop_set, h_invariance, h_map
from qinv.rings import ZBETA, IntegersModP, ProperRatRing, RatFuncField, RingElement
from qinv.vandermonde import search_left_invertible, vandermonde, verify_left_inverse

import randgen


def test_counterexample_replay(criterion):
    with criterion("integer counterexample replay"):
        start = time.perf_counter()
        rep = oracle.counterexample_replay()
        elapsed = time.perf_counter() - start
        assert rep["module_closed"]
        assert rep["qi"] == "true"
        assert rep["k0_in_s"] and rep["k0_coefficients"] == [0, 0, 1]
        assert rep["k0_adj"] == [["1", "1", "1"], ["1", "1", "0"], ["1", "0", "0"]]
        assert rep["k0_adj_in_s"] is False
        assert rep["obstruction"] == "2 ∤ 1"
        assert elapsed < 1.0, elapsed


def test_delay_examples(criterion):
    with criterion("delay of 1/(s*d+2) is 1, of (s+d^2)/(s^2*d+d^5) is 3"):
        R = RatFuncField(("s", "d"))
        assert delay(parse_scalar("1/(s*d+2)", R).value, "d") == 1
        assert delay(parse_scalar("(s+d^2)/(s^2*d+d^5)", R).value, "d") == 3


def test_multidim_properness(criterion):
    with criterion("s1*s2*s3/(s1^2+2*s2+s3) proper in s1, s2, s3"):
        R = RatFuncField(("s1", "s2", "s3"))
        g = parse_scalar("s1*s2*s3/(s1^2+2*s2+s3)", R).value
        assert all(is_proper_in(g, v) for v in ("s1", "s2", "s3"))
        # and it is an element of the ring proper in all three
        P = ProperRatRing((), ("s1", "s2", "s3"))
        parse_scalar("s1*s2*s3/(s1^2+2*s2+s3)", P)


def test_zbeta_left_inverse(criterion):
    with criterion("Z[b]: 3x4 times 4x3 is I3; search over {0,1,2,b} with N_max=4 succeeds"):
        L = parse_matrix([["1", "1", "1", "1"], ["0", "1", "2", "b"], ["0", "1", "4", "b^2"]], ZBETA)
        M = parse_matrix([["1", "1-10*b", "1+b"], ["0", "17+15*b", "-4-b"],
                          ["0", "-11-3*b", "2"], ["0", "-7-2*b", "1"]], ZBETA)
        assert L @ M == Matrix.identity(ZBETA, 3)
        found = search_left_invertible(ZBETA, 3, [0, 1, 2, "b"], 4)
        assert found is not None
        pts, Linv = found
        assert [str(p) for p in pts] == ["0", "1", "2", "b"]
        assert verify_left_inverse(Linv, vandermonde(ZBETA, pts, 3))


def test_network_example(criterion):
    with criterion("delay network: QI, h-invariant via properness theorem, 4 closed-loop images"):
        prob = load_problem("corpus:network")
        G, S = prob.plant, prob.controller_set
        assert check_qi(G, S).verdict == Verdict.TRUE
        rep = h_invariance(G, S)
        assert rep.verdict == Verdict.TRUE
        assert rep.preconditions and all(status == "holds" for _, status in rep.preconditions)
        assert any("strictly proper" in name for name, _ in rep.preconditions)
        aff = closed_loop_set(prob.p11, prob.p12, prob.p21, G, S)
        assert aff is not None and len(aff.images) == 4


def test_oracle_agreement(criterion):
    with criterion("p=7, m=n=2, 200 trials: brute-force QI iff h-invariance"):
        start = time.perf_counter()
        rep = oracle.run_experiment(oracle.ExperimentConfig(p=7, m=2, n=2, trials=200, seed=42))
        elapsed = time.perf_counter() - start
        assert not rep["exploratory"]
        assert rep["trials"] >= 200
        assert rep["discrepancies"] == []
        assert rep["agreements"] == rep["trials"]
        # both outcomes are exercised
        assert 0 < rep["qi_true"] < rep["trials"]
        assert elapsed < 60, elapsed


def _identity_suite(R, samples, seed):
    rng = random.Random(seed)
    checked_h = 0
    for i in range(samples):
        n = rng.randint(1, 4)
        A = randgen.matrix(rng, R, n, n)
        adjA = adjugate(A)
        d = determinant(A).value
        assert A @ adjA == Matrix.identity(R, n).map(lambda x: R.mul(x, d))
        assert poly_eval_matrix(char_poly(A), A).is_zero()
        assert adjA == adjugate_cofactor(A)
        m = rng.randint(1, 3)
        if i % 2:
            G, K = randgen.triangular_pair(rng, R, m, n)
        else:
            G, K = randgen.matrix(rng, R, m, n), randgen.matrix(rng, R, n, m)
        lhs = K @ adjugate(Matrix.identity(R, m) - G @ K)
        rhs = adjugate(Matrix.identity(R, n) - K @ G) @ K
        assert lhs == rhs
        try:
            hK = h_map(K, G)
        except NotInM:
            continue
        assert h_map(hK, G) == K
        checked_h += 1
    return checked_h


def test_identity_suites(criterion):
    with criterion("adjugate / Cayley-Hamilton / push-through / h(h(K))=K over 7 rings, 1000 each"):
        start = time.perf_counter()
        for name, R in randgen.IDENTITY_RINGS.items():
            checked = _identity_suite(R, 1000, seed=zlib.crc32(name.encode()))
            # the triangular half always has I - GK unipotent
            assert checked >= 500, (name, checked)
        elapsed = time.perf_counter() - start
        assert elapsed < 120, elapsed


def test_strictly_proper_feedback(criterion):
    with criterion("200 strictly proper G, proper K: det(I-GK) a unit and h(K) proper"):
        R = randgen.QS_P
        rng = random.Random(8)
        for _ in range(200):
            m, n = rng.randint(1, 3), rng.randint(1, 3)
            G = Matrix._raw(R, [[randgen.strictly_proper_element(rng, R) for _ in range(n)] for _ in range(m)])
            K = randgen.matrix(rng, R, n, m)
            det = determinant(Matrix.identity(R, m) - G @ K).value
            assert R.is_unit(det)
            hK = h_map(K, G)
            assert all(R.contains(x) for x in hK.vec())


def test_power_closure_mod5(criterion):
    with criterion("Z/5, QI instances: K(GK)^i in S for i <= 4, exhaustively"):
        cfg = oracle.ExperimentConfig(p=5, m=2, n=2, trials=1)
        rng = np.random.default_rng(5)
        qi_instances = 0
        for t in range(300):
            G, gens = oracle.random_instance(rng, cfg, structured=t % 2 == 1)
            if not oracle.qi_bruteforce(G, gens, 5)[0]:
                continue
            qi_instances += 1
            assert oracle.power_closure_bruteforce(G, gens, 5, i_max=4)
        assert qi_instances >= 100, qi_instances


def test_vanishing_polynomials(criterion):
    with criterion("x+x^2 vanishes on Z/2 but is nonzero; degree <= 2 over Z/3 has no such polynomial"):
        assert (0, 1, 1) in oracle.vanishing_polynomials(2, 2)
        assert not oracle.poly_zero_property(2, 2)
        assert oracle.poly_zero_property(3, 2)
        assert oracle.vanishing_polynomials(3, 2) == []


_ALPHABET = "0123456789sdx+-*/^() "
_TOKENS = ["s", "d", "1", "2", "10", "(", ")", "+", "-", "*", "/", "^", "^2", "^300", "x", " ", "0"]


def _fuzz_string(rng):
    if rng.random() < 0.5:
        return "".join(rng.choice(_ALPHABET) for _ in range(rng.randint(0, 25)))
    return "".join(rng.choice(_TOKENS) for _ in range(rng.randint(0, 15)))


def _random_poly(rng, vars):
    p = MultiPoly.zero(vars)
    for _ in range(rng.randint(0, 4)):
        e = tuple(rng.randint(0, 3) for _ in vars)
        p = p + MultiPoly.monomial(vars, e, Fraction(rng.randint(-9, 9), rng.randint(1, 5)))
    return p


def test_parser_fuzz_and_round_trip(criterion):
    with criterion("parser: 10000 fuzz inputs without crashing, 1000 random round trips"):
        rng = random.Random(11)
        rings = [RatFuncField(("s", "d")), ProperRatRing(("s",), ("d",)), IntegersModP(7), ZBETA]
        for _ in range(10000):
            text = _fuzz_string(rng)
            try:
                out = parse_scalar(text, rng.choice(rings))
            except ParseError:
                continue
            assert isinstance(out, RingElement)
        R = RatFuncField(("s", "d"))
        vars = R.vars
        for _ in range(1000):
            den = _random_poly(rng, vars)
            while den.is_zero():
                den = _random_poly(rng, vars)
            f = RatFunc.of(_random_poly(rng, vars), den)
            text = format_ratfunc(f)
            back = parse_scalar(text, R)
            assert back.value == f
            assert print_canonical(back) == text
