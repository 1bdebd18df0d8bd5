"""Decision procedures for quadratic invariance and the feedback map h.

For a module S generated by H_1..H_q and K = sum c_i H_i,

    KGK = sum_i c_i^2 H_i G H_i + sum_{i<j} c_i c_j (H_i G H_j + H_j G H_i),

so S is QI under G exactly when every H_i G H_i and every symmetrized
cross term lies in S (take c = e_i and c = e_i + e_j for the converse).
This holds over any commutative ring, which makes :func:`check_qi` exact.

:func:`h_invariance` does not compute h over S.  It checks which
invariance theorem applies to the ring at hand and, when its hypotheses
hold, returns the QI verdict; otherwise the verdict is unknown.
"""
from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .controllers import ControllerSet, Sparsity
from .matrix import (
    CapabilityError,
    DimensionMismatch,
    Matrix,
    NotInvertible,
    adjugate,
    char_poly,
    inverse,
)
from .poly import is_strictly_proper_in
from .rings import IntegersModP, PolynomialExtension, ProperRatRing, RatFuncField, Ring, RingElement, RingMismatch

HOLDS, FAILS, UNKNOWN = "holds", "fails", "unknown"

# cap on exhaustive enumeration of coefficient vectors over finite rings
ENUMERATION_LIMIT = 10 ** 6


class Verdict(str, Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, b: Optional[bool]) -> "Verdict":
        return cls.UNKNOWN if b is None else (cls.TRUE if b else cls.FALSE)


class Method(str, Enum):
    SPARSITY = "sparsity-closed-form"
    POLARIZATION = "generator-polarization"
    ADJUGATE = "adjugate-symbolic"
    BRUTE_FORCE = "finite-brute-force"
    THEOREM_CHAIN = "theorem-chain"


@dataclass
class QiReport:
    verdict: Verdict
    method: Method
    witness: Optional[Dict[str, Any]] = None
    preconditions: List[Tuple[str, str]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def __bool__(self):
        raise TypeError("QiReport has three outcomes; compare .verdict instead")

    @property
    def holds(self) -> Optional[bool]:
        return {Verdict.TRUE: True, Verdict.FALSE: False}.get(self.verdict)

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"verdict": self.verdict.value, "method": self.method.value}
        if self.witness is not None:
            out["witness"] = {k: _jsonify(v) for k, v in self.witness.items()}
        out["preconditions"] = [{"name": n, "status": s} for n, s in self.preconditions]
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _jsonify(v):
    if isinstance(v, Matrix):
        return v.to_strings()
    if isinstance(v, RingElement):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_jsonify(x) for x in v]
    return v


class NotInM(ArithmeticError):
    """``I - GK`` is not invertible; ``det`` is its determinant."""

    def __init__(self, det: RingElement):
        super().__init__(f"I - GK is not invertible (det = {det})")
        self.det = det


def _check_pair(G: Matrix, S: ControllerSet) -> Tuple[int, int]:
    if G.ring != S.ring:
        raise RingMismatch(f"plant over {G.ring}, controller set over {S.ring}")
    m, n = G.shape
    if S.shape != (n, m):
        raise DimensionMismatch(f"plant is {m}x{n}, controller set must be {n}x{m}, got {S.shape[0]}x{S.shape[1]}")
    return m, n


def default_seed() -> int:
    return int(os.environ.get("QINV_SEED", "0"))


# -- QI ---------------------------------------------------------------------------------

def _sparsity_closed_form(G: Matrix, S: Sparsity) -> QiReport:
    pos = S.positions()
    allowed = set(pos)
    R = G.ring
    for a, (i, j) in enumerate(pos):
        for b, (k, l) in enumerate(pos):
            if (i, l) in allowed or R.is_zero(G.raw(j, k)):
                continue
            H1, H2 = S.generators()[a], S.generators()[b]
            K = H1 if a == b else H1 + H2
            return QiReport(
                Verdict.FALSE,
                Method.SPARSITY,
                witness={"positions": [[i, j], [k, l]], "K": K, "KGK": K @ G @ K,
                         "reason": f"G[{j},{k}] != 0 but entry ({i},{l}) is outside the pattern"},
            )
    return QiReport(Verdict.TRUE, Method.SPARSITY)


def _polarization(G: Matrix, S: ControllerSet) -> QiReport:
    H = S.generators()
    try:
        for i in range(len(H)):
            M = H[i] @ G @ H[i]
            if not S.contains(M):
                return QiReport(Verdict.FALSE, Method.POLARIZATION,
                                witness={"pair": [i, i], "K": H[i], "KGK": M})
        for i, j in itertools.combinations(range(len(H)), 2):
            cross = H[i] @ G @ H[j] + H[j] @ G @ H[i]
            if not S.contains(cross):
                K = H[i] + H[j]
                return QiReport(Verdict.FALSE, Method.POLARIZATION,
                                witness={"pair": [i, j], "K": K, "KGK": K @ G @ K, "cross_term": cross})
    except CapabilityError as e:
        return QiReport(Verdict.UNKNOWN, Method.POLARIZATION,
                        preconditions=[("membership is decidable over " + str(S.ring), UNKNOWN)], notes=[str(e)])
    return QiReport(Verdict.TRUE, Method.POLARIZATION)


def check_qi(G: Matrix, S: ControllerSet, method: str = "auto") -> QiReport:
    """Decide whether ``KGK`` lies in ``S`` for every ``K`` in ``S``."""
    _check_pair(G, S)
    if method == "sparsity" or (method == "auto" and isinstance(S, Sparsity)):
        if not isinstance(S, Sparsity):
            raise ValueError("the sparsity method needs a sparsity-pattern controller set")
        return _sparsity_closed_form(G, S)
    if method not in ("auto", "generators"):
        raise ValueError(f"unknown method {method!r}")
    return _polarization(G, S)


def check_strong_qi(G: Matrix, S: ControllerSet) -> QiReport:
    """Decide whether ``K1 G K2`` lies in ``S`` for all ``K1, K2`` in ``S``."""
    _check_pair(G, S)
    H = S.generators()
    try:
        for i, j in itertools.product(range(len(H)), repeat=2):
            M = H[i] @ G @ H[j]
            if not S.contains(M):
                return QiReport(Verdict.FALSE, Method.POLARIZATION,
                                witness={"pair": [i, j], "K1": H[i], "K2": H[j], "K1GK2": M})
    except CapabilityError as e:
        return QiReport(Verdict.UNKNOWN, Method.POLARIZATION,
                        preconditions=[("membership is decidable over " + str(S.ring), UNKNOWN)], notes=[str(e)])
    return QiReport(Verdict.TRUE, Method.POLARIZATION)


# -- adjugate invariance ------------------------------------------------------------------

def k_adj(K: Matrix, G: Matrix) -> Matrix:
    """``K adj(I - GK)``."""
    m = G.rows
    return K @ adjugate(Matrix.identity(G.ring, m) - G @ K)


def symbolic_k_adj(G: Matrix, S: ControllerSet) -> Dict[Tuple[int, ...], Matrix]:
    """Coefficient matrices of ``K adj(I - GK)`` with ``K = sum c_i H_i``.

    Keys are exponent vectors of the indeterminates ``c``.
    """
    H = S.generators()
    R = G.ring
    q = len(H)
    E = PolynomialExtension(R, q)
    lift = lambda M: M.map(E.const, E)
    K = Matrix.zeros(E, S.rows, S.cols)
    for i, Hi in enumerate(H):
        K = K + Matrix._raw(E, [[E.mul(E.gen(i), x) for x in r] for r in lift(Hi)._v])
    P = K @ adjugate(Matrix.identity(E, G.rows) - lift(G) @ K)
    monomials = sorted({e for r in P._v for x in r for e in x}, key=lambda e: (sum(e), e))
    z = R.zero()
    return {
        e: Matrix._raw(R, [[x.get(e, z) for x in r] for r in P._v])
        for e in monomials
    }


def _coefficient_vectors(R: Ring, q: int, seed: int, budget: int):
    """Candidate coefficient vectors for an explicit counterexample search."""
    if isinstance(R, IntegersModP) and R.p ** q <= ENUMERATION_LIMIT:
        yield from itertools.product(range(R.p), repeat=q)
        return
    seen = 0
    for radius in range(1, 3):
        vals = [0, 1, -1, 2, -2][:2 * radius + 1]
        # sparsest combinations first, so single generators are tried early
        cands = sorted((c for c in itertools.product(vals, repeat=q) if max(map(abs, c), default=0) == radius),
                       key=lambda c: sum(x != 0 for x in c))
        for c in cands:
            yield tuple(R.from_int(x) for x in c)
            seen += 1
            if seen >= budget:
                return
    rng = random.Random(seed)
    while seen < budget:
        yield tuple(R.from_int(rng.randint(-10, 10)) for _ in range(q))
        seen += 1


def _search_k_adj_violation(G, S, seed, budget=2000):
    R = G.ring
    for c in _coefficient_vectors(R, len(S.generators()), seed, budget):
        K = S.combine(list(c))
        M = k_adj(K, G)
        if not S.contains(M):
            return K, M
    return None


def adjugate_invariance(G: Matrix, S: ControllerSet, seed: int | None = None) -> QiReport:
    """Decide whether ``K adj(I - GK)`` lies in ``S`` for every ``K`` in ``S``.

    Every coefficient matrix of the symbolic expansion lying in S proves
    the property.  A failing coefficient disproves it when every residue
    field has more than ``min(m, n)`` elements (the expansion has degree
    at most ``min(m, n)`` in the indeterminates); otherwise an explicit
    counterexample is searched for, exhaustively over small finite fields.
    """
    m, n = _check_pair(G, S)
    seed = default_seed() if seed is None else seed
    R = G.ring
    try:
        coeffs = symbolic_k_adj(G, S)
        failing = next(((e, M) for e, M in coeffs.items() if not S.contains(M)), None)
    except CapabilityError as e:
        return QiReport(Verdict.UNKNOWN, Method.ADJUGATE,
                        preconditions=[("membership is decidable over " + str(R), UNKNOWN)], notes=[str(e)])
    if failing is None:
        return QiReport(Verdict.TRUE, Method.ADJUGATE,
                        preconditions=[("every coefficient matrix lies in S", HOLDS)])
    k = min(m, n)
    bound_name = f"residue_floor >= min(m,n)+1 = {k + 1}"
    necessary = R.residue_floor().at_least(k + 1)
    trace = [("every coefficient matrix lies in S", FAILS),
             (bound_name, HOLDS if necessary else UNKNOWN)]
    found = _search_k_adj_violation(G, S, seed)
    exhaustive = isinstance(R, IntegersModP) and R.p ** len(S.generators()) <= ENUMERATION_LIMIT
    if found is not None:
        K, M = found
        return QiReport(Verdict.FALSE, Method.BRUTE_FORCE if exhaustive else Method.ADJUGATE,
                        witness={"K": K, "K_adj": M, "monomial": list(failing[0])}, preconditions=trace)
    if necessary:
        e, M = failing
        return QiReport(Verdict.FALSE, Method.ADJUGATE,
                        witness={"monomial": list(e), "coefficient_matrix": M}, preconditions=trace)
    if exhaustive:
        return QiReport(Verdict.TRUE, Method.BRUTE_FORCE, preconditions=trace,
                        notes=["a coefficient matrix lies outside S, yet every element of S passes"])
    return QiReport(Verdict.UNKNOWN, Method.ADJUGATE, preconditions=trace,
                    notes=["coefficientwise test failed; no explicit counterexample found"])


# -- the feedback map h -----------------------------------------------------------------------

def h_map(K: Matrix, G: Matrix) -> Matrix:
    """``h(K) = -K (I - GK)^-1``; raises :class:`NotInM` when undefined."""
    if K.ring != G.ring:
        raise RingMismatch(f"{K.ring} vs {G.ring}")
    if K.shape != (G.cols, G.rows):
        raise DimensionMismatch(f"K must be {G.cols}x{G.rows}, got {K.rows}x{K.cols}")
    A = Matrix.identity(G.ring, G.rows) - G @ K
    try:
        return -(K @ inverse(A))
    except NotInvertible as e:
        raise NotInM(e.det) from None


def is_strictly_proper_matrix(G: Matrix) -> bool:
    R = G.ring
    if not isinstance(R, ProperRatRing):
        return False
    return all(is_strictly_proper_in(x, s) for x in G.vec() for s in R.proper_vars)


def _h_preconditions(G: Matrix) -> Tuple[List[Tuple[str, str]], bool, str]:
    """Hypotheses of the invariance theorem matching the ring of ``G``."""
    R = G.ring
    m, n = G.shape
    k = min(m, n)
    if isinstance(R, ProperRatRing):
        sp = is_strictly_proper_matrix(G)
        name = "G strictly proper in each of " + ",".join(R.proper_vars)
        trace = [(name, HOLDS if sp else FAILS), ("S is a module over " + str(R), HOLDS)]
        return trace, sp, "h(S) = S"
    if R.is_field:
        if k == 1:
            return [("min(m,n) = 1", HOLDS)], True, "h(S∩M) = S∩M"
        size = R.residue_floor().at_least(2 * k + 1)
        two = R.two_is_unit()
        trace = [
            (f"field has at least 2*min(m,n)+1 = {2 * k + 1} elements", HOLDS if size else FAILS),
            ("char != 2 (2 is a unit)", HOLDS if two else FAILS),
        ]
        return trace, bool(size and two), "h(S∩M) = S∩M"
    return [(f"invariance theorem available for {R}", FAILS)], False, "h(S∩M) = S∩M"


def _h_counterexample(G: Matrix, S: ControllerSet, K0: Matrix, seed: int):
    """Find ``r`` with ``h(r K0)`` outside S, given ``K0 G K0`` outside S."""
    R = G.ring
    if isinstance(R, IntegersModP):
        rs = range(1, R.p)
    else:
        k = min(G.shape)
        rs = list(range(1, 4 * k + 4)) + list(range(-1, -(4 * k + 4), -1))
    for r in rs:
        K = K0.map(lambda x, r=r: R.mul(R.from_int(r), x))
        try:
            hK = h_map(K, G)
        except NotInM:
            continue
        if not S.contains(hK):
            return K, hK
    return None


def h_invariance(G: Matrix, S: ControllerSet, seed: int | None = None) -> QiReport:
    """Decide h-invariance of S through the invariance theorem for the ring."""
    _check_pair(G, S)
    seed = default_seed() if seed is None else seed
    trace, applies, claim = _h_preconditions(G)
    qi = check_qi(G, S)
    trace = trace + [("QI decided", HOLDS if qi.verdict != Verdict.UNKNOWN else UNKNOWN)]
    notes = [f"claim: {claim}"]
    if not applies or qi.verdict == Verdict.UNKNOWN:
        return QiReport(Verdict.UNKNOWN, Method.THEOREM_CHAIN, preconditions=trace, notes=notes)
    if qi.verdict == Verdict.TRUE:
        return QiReport(Verdict.TRUE, Method.THEOREM_CHAIN, preconditions=trace, notes=notes)
    found = _h_counterexample(G, S, qi.witness["K"], seed)
    if found is None:
        return QiReport(Verdict.FALSE, Method.THEOREM_CHAIN, witness={"K": qi.witness["K"], "KGK": qi.witness["KGK"]},
                        preconditions=trace, notes=notes + ["no explicit h(K) outside S found; witness is the QI violation"])
    K, hK = found
    return QiReport(Verdict.FALSE, Method.THEOREM_CHAIN, witness={"K": K, "hK": hK},
                    preconditions=trace, notes=notes)


# -- closed-loop maps ----------------------------------------------------------------------------

@dataclass
class AffineSet:
    """``{offset - sum c_i images[i]}`` over ring coefficients ``c``."""

    offset: Matrix
    images: List[Matrix]
    report: QiReport

    def element(self, coeffs: Sequence[Any]) -> Matrix:
        acc = self.offset
        R = self.offset.ring
        for c, M in zip(coeffs, self.images):
            c = c.value if isinstance(c, RingElement) else c
            acc = acc - M.map(lambda x, c=c: R.mul(c, x))
        return acc

    def to_json(self):
        return {"offset": self.offset.to_strings(), "images": [M.to_strings() for M in self.images]}


def closed_loop_set(P11: Matrix, P12: Matrix, P21: Matrix, G: Matrix, S: ControllerSet) -> Optional[AffineSet]:
    """Closed-loop maps ``P11 - P12 h(K) P21`` for K in S, as an affine set.

    Returns None when h-invariance of S is not established.
    """
    m, n = _check_pair(G, S)
    for P in (P11, P12, P21):
        if P.ring != G.ring:
            raise RingMismatch(f"{P.ring} vs {G.ring}")
    if P12.cols != n or P21.rows != m or P11.shape != (P12.rows, P21.cols):
        raise DimensionMismatch(
            f"P11 {P11.shape}, P12 {P12.shape}, P21 {P21.shape} do not fit a {m}x{n} plant")
    report = h_invariance(G, S)
    if report.verdict != Verdict.TRUE:
        return None
    return AffineSet(P11, [P12 @ H @ P21 for H in S.generators()], report)
