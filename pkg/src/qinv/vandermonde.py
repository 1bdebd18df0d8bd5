"""Vandermonde matrices over commutative rings and their left inverses.

Over a field an n x n Vandermonde matrix on distinct points is invertible.
Over a ring the square case can fail while a tall N x n matrix still has
a left inverse (Z[beta] with beta^2 = beta - 3 is the standard example);
:func:`search_left_invertible` looks for one among given candidate points.
"""
from __future__ import annotations

import itertools
from typing import Any, List, Optional, Sequence, Tuple

from .matrix import (
    CapabilityError,
    DimensionMismatch,
    Matrix,
    NoSolution,
    NotInvertible,
    determinant,
    inverse,
    solve_linear,
)
from .rings import Ring, RingElement


def _raw(R: Ring, x):
    if isinstance(x, RingElement):
        return x.value
    if isinstance(x, str):
        from .parser import parse_scalar
        return parse_scalar(x, R).value
    return R.convert(x)


def vandermonde(ring: Ring, points: Sequence[Any], n: int) -> Matrix:
    """``V[i][j] = r_i ** j`` for ``j < n``."""
    pts = [_raw(ring, r) for r in points]
    if not 1 <= n <= len(pts):
        raise ValueError(f"need 1 <= n <= N, got n={n}, N={len(pts)}")
    return Matrix._raw(ring, [[ring.pow(r, j) for j in range(n)] for r in pts])


def det_product_formula(ring: Ring, points: Sequence[Any]) -> RingElement:
    """``prod_{i<j} (r_j - r_i)``, equal to ``det(vandermonde(points, N))``.

    The other common convention ``prod_{i<j} (r_i - r_j)`` differs by
    ``(-1) ** (N(N-1)/2)``.
    """
    pts = [_raw(ring, r) for r in points]
    acc = ring.one()
    for i, j in itertools.combinations(range(len(pts)), 2):
        acc = ring.mul(acc, ring.sub(pts[j], pts[i]))
    return RingElement(ring, acc)


def verify_left_inverse(L: Matrix, V: Matrix) -> bool:
    if L.cols != V.rows or L.rows != V.cols:
        return False
    return L @ V == Matrix.identity(V.ring, V.cols)


def cauchy_binet_sum(L: Matrix, V: Matrix) -> RingElement:
    """``sum_s det(L[:, s]) det(V[s, :])`` over n-subsets ``s`` of the N rows."""
    n, N = L.shape
    R = V.ring
    acc = R.zero()
    for s in itertools.combinations(range(N), n):
        a = determinant(L.submatrix(range(n), s)).value
        b = determinant(V.submatrix(s, range(n))).value
        acc = R.add(acc, R.mul(a, b))
    return RingElement(R, acc)


def _left_inverse(V: Matrix) -> Optional[Matrix]:
    N, n = V.shape
    R = V.ring
    if R.is_field and N == n:
        try:
            return inverse(V)
        except NotInvertible:
            return None
    Vt = V.T
    rows = []
    for k in range(n):
        e = [R.one() if i == k else R.zero() for i in range(n)]
        try:
            x = solve_linear(Vt, e)
        except NoSolution:
            return None
        rows.append([x.raw(i, 0) for i in range(N)])
    return Matrix._raw(R, rows)


def search_left_invertible(ring: Ring, n: int, candidates: Sequence[Any], n_max: int
                           ) -> Optional[Tuple[List[RingElement], Matrix]]:
    """First ``(points, L)`` with ``L @ vandermonde(points, n) == I``.

    Subsets of the candidates are tried by increasing size N (n..n_max)
    and then lexicographically.  None means no subset of the candidates
    works; it says nothing about other points.
    """
    pts = [_raw(ring, r) for r in candidates]
    if not 1 <= n <= len(pts):
        raise ValueError(f"need 1 <= n <= number of candidates, got n={n} with {len(pts)} candidates")
    if ring.is_field:
        # distinct points give an invertible square matrix
        for s in itertools.combinations(range(len(pts)), n):
            V = vandermonde(ring, [pts[i] for i in s], n)
            L = _left_inverse(V)
            if L is not None:
                return [RingElement(ring, pts[i]) for i in s], L
        return None
    if not (ring.kind in ("integers", "zbeta")):
        raise CapabilityError(f"left-inverse search is not implemented over {ring}")
    for N in range(n, min(n_max, len(pts)) + 1):
        for s in itertools.combinations(range(len(pts)), N):
            V = vandermonde(ring, [pts[i] for i in s], n)
            L = _left_inverse(V)
            if L is not None:
                return [RingElement(ring, pts[i]) for i in s], L
    return None


def check_generator_reconstruction(H: Sequence[Matrix], points: Sequence[Any], L: Matrix) -> bool:
    """Check ``H_i = sum_j L_ij (H_1 + r_j H_2 + ... + r_j^(n-1) H_n)`` for all i.

    Holds whenever ``L`` is a left inverse of the Vandermonde matrix on
    ``points`` with width ``len(H)``.
    """
    n = len(H)
    if n == 0:
        raise ValueError("need at least one generator")
    R = H[0].ring
    pts = [_raw(R, r) for r in points]
    if L.shape != (n, len(pts)):
        raise DimensionMismatch(f"L must be {n}x{len(pts)}, got {L.rows}x{L.cols}")
    scale = lambda c, M: M.map(lambda x: R.mul(c, x))
    evals = []
    for r in pts:
        acc = Matrix.zeros(R, *H[0].shape)
        for k, Hk in enumerate(H):
            acc = acc + scale(R.pow(r, k), Hk)
        evals.append(acc)
    for i in range(n):
        acc = Matrix.zeros(R, *H[0].shape)
        for j, Ej in enumerate(evals):
            acc = acc + scale(L.raw(i, j), Ej)
        if acc != H[i]:
            return False
    return True
