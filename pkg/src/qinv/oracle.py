"""Exhaustive checks over small prime fields.

Everything here works on plain integer arrays mod p and does its own
elimination, so it shares no code path with :mod:`qinv.qi` or
:mod:`qinv.matrix` (except :func:`counterexample_replay`, which drives the
library on the integer counterexample on purpose).
"""
from __future__ import annotations

import itertools
import logging
import time
from dataclasses import asdict, dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

log = logging.getLogger(__name__)

GUARD = 10 ** 6


class GuardExceeded(ValueError):
    pass


class PreconditionViolation(ValueError):
    pass


# -- small linear algebra mod p -------------------------------------------------------

def _as_int_matrix(M, p: int) -> np.ndarray:
    if hasattr(M, "entries") and hasattr(M, "ring"):
        M = [[int(x) for x in r] for r in M.entries()]
    return np.asarray(M, dtype=np.int64) % p


def _rref(rows: List[List[int]], p: int) -> Tuple[List[List[int]], List[int]]:
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


class Span:
    """Span of integer vectors over Z/pZ with a membership test."""

    def __init__(self, vectors: Sequence[Sequence[int]], p: int):
        self.p = p
        self.basis, self.pivots = _rref([list(map(int, v)) for v in vectors], p)

    def __contains__(self, v) -> bool:
        v = [int(x) % self.p for x in np.ravel(v)]
        for row, c in zip(self.basis, self.pivots):
            if v[c]:
                f = v[c]
                v = [(x - f * y) % self.p for x, y in zip(v, row)]
        return not any(v)


def det_mod(A: np.ndarray, p: int) -> int:
    """Determinant mod p by elimination."""
    A = [[int(x) % p for x in r] for r in A]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv % p
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[c])]
    return det % p


def inv_mod(A: np.ndarray, p: int) -> Optional[np.ndarray]:
    n = len(A)
    aug = [[int(x) % p for x in r] + [int(i == k) for k in range(n)] for i, r in enumerate(A)]
    rows, pivots = _rref(aug, p)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        return None
    return np.array([r[n:] for r in rows[:n]], dtype=np.int64)


# -- enumeration -----------------------------------------------------------------------------

def enumerate_module(p: int, generators: Sequence, shape: Tuple[int, int] | None = None) -> Iterator[np.ndarray]:
    """All ``sum c_i H_i`` for ``c`` in (Z/pZ)^q, in lexicographic order of ``c``."""
    gens = [_as_int_matrix(H, p) for H in generators]
    q = len(gens)
    if p ** q > GUARD:
        raise GuardExceeded(f"{p}^{q} elements exceeds the enumeration guard {GUARD}")
    if not gens:
        if shape is None:
            raise ValueError("shape is required when there are no generators")
        yield np.zeros(shape, dtype=np.int64)
        return
    stack = np.stack(gens)
    for c in itertools.product(range(p), repeat=q):
        yield np.tensordot(np.array(c, dtype=np.int64), stack, axes=1) % p


def _setup(G, generators, p):
    G = _as_int_matrix(G, p)
    gens = [_as_int_matrix(H, p) for H in generators]
    m, n = G.shape
    span = Span([H.ravel() for H in gens], p)
    return G, gens, (n, m), span


def qi_bruteforce(G, generators, p: int) -> Tuple[bool, Optional[np.ndarray]]:
    """``(True, None)`` if KGK is in the span for every K; else ``(False, K)``."""
    G, gens, shape, span = _setup(G, generators, p)
    for K in enumerate_module(p, gens, shape):
        if (K @ G @ K % p).ravel().tolist() not in span:
            return False, K
    return True, None


def _h(K, G, p):
    m = G.shape[0]
    A = (np.eye(m, dtype=np.int64) - G @ K) % p
    if det_mod(A, p) == 0:
        return None
    return (-K @ inv_mod(A, p)) % p


def h_invariance_bruteforce(G, generators, p: int) -> bool:
    """Whether ``h(S ∩ M) = S ∩ M`` with ``M = {K : det(I - GK) != 0}``."""
    G, gens, shape, span = _setup(G, generators, p)
    m = G.shape[0]
    domain = set()
    images = set()
    for K in enumerate_module(p, gens, shape):
        hK = _h(K, G, p)
        if hK is None:
            continue
        domain.add(K.tobytes())
        if hK.ravel().tolist() not in span:
            return False
        if det_mod((np.eye(m, dtype=np.int64) - G @ hK) % p, p) == 0:
            return False
        images.add(hK.tobytes())
    return images == domain


def power_closure_bruteforce(G, generators, p: int, i_max: int = 4) -> bool:
    """Whether ``K (GK)^i`` is in S for every enumerated K and ``i <= i_max``.

    Requires p odd (2 a unit) and S QI under G.
    """
    if p == 2:
        raise PreconditionViolation("2 is not a unit mod 2")
    qi, _ = qi_bruteforce(G, generators, p)
    if not qi:
        raise PreconditionViolation("S is not QI with respect to G")
    G, gens, shape, span = _setup(G, generators, p)
    for K in enumerate_module(p, gens, shape):
        T = K
        for _ in range(i_max):
            T = T @ G @ K % p
            if T.ravel().tolist() not in span:
                return False
    return True


# -- polynomials vanishing on a field -----------------------------------------------------------

def vanishing_polynomials(p: int, degree_bound: int) -> List[Tuple[int, ...]]:
    """Nonzero coefficient tuples ``(a_0..a_d)``, ``d <= degree_bound``, vanishing on Z/pZ."""
    if p ** (degree_bound + 1) > GUARD:
        raise GuardExceeded(f"{p}^{degree_bound + 1} polynomials exceeds the guard")
    out = []
    for coeffs in itertools.product(range(p), repeat=degree_bound + 1):
        if not any(coeffs):
            continue
        if all(sum(a * pow(r, k, p) for k, a in enumerate(coeffs)) % p == 0 for r in range(p)):
            out.append(coeffs)
    return out


def poly_zero_property(p: int, degree_bound: int) -> bool:
    """True iff the only polynomial of degree <= bound vanishing on Z/pZ is 0."""
    return not vanishing_polynomials(p, degree_bound)


# -- randomized agreement experiment ----------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    p: int = 7
    m: int = 2
    n: int = 2
    gen_count: int = 3
    trials: int = 200
    seed: int = 0
    # half the trials use sparse plants and elementary generators
    mix: bool = True
    cross_check_engine: bool = True

    def __post_init__(self):
        if not (1 <= self.m <= 3 and 1 <= self.n <= 3 and 0 <= self.gen_count <= 3):
            raise ValueError("m, n must be in 1..3 and gen_count in 0..3")
        if self.p ** self.gen_count > GUARD:
            raise GuardExceeded("enumeration guard exceeded")

    @property
    def hypotheses_hold(self) -> bool:
        return self.p != 2 and self.p >= 2 * min(self.m, self.n) + 1


def random_instance(rng: np.random.Generator, cfg: ExperimentConfig, structured: bool = False):
    p, m, n = cfg.p, cfg.m, cfg.n
    q = int(rng.integers(0, cfg.gen_count + 1))
    G = rng.integers(0, p, size=(m, n))
    if structured:
        G = G * (rng.random((m, n)) < 0.5)
        gens = []
        for _ in range(q):
            H = np.zeros((n, m), dtype=np.int64)
            H[rng.integers(0, n), rng.integers(0, m)] = rng.integers(1, p)
            gens.append(H)
    else:
        gens = [rng.integers(0, p, size=(n, m)) for _ in range(q)]
    return G.astype(np.int64), [H.astype(np.int64) for H in gens]


def _engine_qi(G, gens, p):
    from .controllers import GeneratorSet
    from .matrix import Matrix
    from .qi import check_qi
    from .rings import IntegersModP

    R = IntegersModP(p)
    Gm = Matrix(R, G.tolist())
    S = GeneratorSet(R, [Matrix(R, H.tolist()) for H in gens], shape=(G.shape[1], G.shape[0]))
    return check_qi(Gm, S).holds


def run_experiment(cfg: ExperimentConfig) -> dict:
    """Compare QI with h-invariance (and the engine's verdict) on random instances."""
    start = time.perf_counter()
    rng = np.random.default_rng(cfg.seed)
    agreements = 0
    qi_true = 0
    discrepancies = []
    for t in range(cfg.trials):
        G, gens = random_instance(rng, cfg, structured=cfg.mix and t % 2 == 1)
        qi, _ = qi_bruteforce(G, gens, cfg.p)
        hinv = h_invariance_bruteforce(G, gens, cfg.p)
        engine = _engine_qi(G, gens, cfg.p) if cfg.cross_check_engine else qi
        qi_true += qi
        if qi == hinv == engine:
            agreements += 1
        else:
            rec = {"trial": t, "qi": qi, "h_invariant": hinv, "engine_qi": engine,
                   "G": G.tolist(), "generators": [H.tolist() for H in gens]}
            discrepancies.append(rec)
            if not cfg.hypotheses_hold:
                log.info("exploratory discrepancy: %s", rec)
    return {
        "config": asdict(cfg),
        "exploratory": not cfg.hypotheses_hold,
        "trials": cfg.trials,
        "agreements": agreements,
        "qi_true": qi_true,
        "discrepancies": discrepancies,
        "runtime_ms": round((time.perf_counter() - start) * 1000, 1),
    }


# -- the integer counterexample ---------------------------------------------------------------------

def counterexample_data():
    """Plant, generators and K0 of the integer counterexample (2 is not a unit)."""
    G = [[0, 0, 0], [0, 0, 1], [0, 1, 0]]
    Hx = [[2, 0, 0], [0, 0, 0], [0, 0, 0]]
    Hy = [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
    Hz = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    K0 = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    return G, [Hx, Hy, Hz], K0


def counterexample_replay(samples: int = 50, seed: int = 0) -> dict:
    """Replay the integer counterexample step by step.

    (a) S is closed under sampled integer combinations, (b) S is QI,
    (c) K0 is in S, (d) ``K0 adj(I - G K0)`` is not in S; then the same
    data reduced mod 2.
    """
    from .controllers import GeneratorSet
    from .matrix import Matrix
    from .qi import check_qi, k_adj
    from .rings import ZZ, IntegersModP

    Gl, Hl, K0l = counterexample_data()
    G = Matrix(ZZ, Gl)
    S = GeneratorSet(ZZ, [Matrix(ZZ, H) for H in Hl])
    K0 = Matrix(ZZ, K0l)
    rng = np.random.default_rng(seed)
    closed = True
    for _ in range(samples):
        c1 = [int(x) for x in rng.integers(-5, 6, 3)]
        c2 = [int(x) for x in rng.integers(-5, 6, 3)]
        r = int(rng.integers(-5, 6))
        K = S.combine(c1) + S.combine(c2) * r
        closed &= S.contains(K).member
    qi = check_qi(G, S)
    mem = S.contains(K0)
    M = k_adj(K0, G)
    out = S.contains(M)

    F2 = IntegersModP(2)
    G2 = Matrix(F2, Gl)
    S2 = GeneratorSet(F2, [Matrix(F2, H) for H in Hl])
    K02 = Matrix(F2, K0l)
    M2 = k_adj(K02, G2)
    return {
        "module_closed": closed,
        "qi": qi.verdict.value,
        "k0_in_s": mem.member,
        "k0_coefficients": [int(c) for c in mem.certificate["coefficients"]],
        "k0_adj": M.to_strings(),
        "k0_adj_in_s": out.member,
        "obstruction": out.certificate.get("obstruction") if not out.member else None,
        "mod2": {
            "qi": check_qi(G2, S2).verdict.value,
            "k0_adj": M2.to_strings(),
            "k0_adj_in_s": S2.contains(M2).member,
            "qi_bruteforce": qi_bruteforce(Gl, Hl, 2)[0],
        },
    }
