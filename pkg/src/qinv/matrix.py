"""Dense matrices over any :class:`~qinv.rings.Ring`, and division-free algebra.

Determinants and characteristic polynomials use Berkowitz's algorithm, so
they only need ring addition and multiplication.  The adjugate comes from
the characteristic polynomial,

    adj(A) = -(p_1 I + p_2 A + ... + p_n A^(n-1)),   p_A(x) = det(A - xI),

and the cofactor versions (:func:`det_laplace`, :func:`adjugate_cofactor`)
are kept as independent checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, List, Optional, Sequence, Tuple

from .poly import MultiPoly, RatFunc, poly_gcd
from .rings import (
    Integers,
    IntegersModP,
    NotAUnit,
    PolyRing,
    ProperRatRing,
    QuadraticZBeta,
    RatFuncField,
    Ring,
    RingElement,
    RingMismatch,
)


class DimensionMismatch(ValueError):
    pass


class NotInvertible(ArithmeticError):
    """Matrix whose determinant is not a unit; ``det`` holds the determinant."""

    def __init__(self, det: RingElement):
        super().__init__(f"determinant {det} is not a unit")
        self.det = det


class NoSolution(ArithmeticError):
    """Linear system without solution, with a checkable certificate.

    ``vector`` is a row combination ``y`` of the equations.  Over a field
    ``y A = 0`` while ``y b != 0``.  Over the integers every entry of
    ``y A`` is divisible by ``divisor`` while ``y b`` is not.
    """

    def __init__(self, kind: str, vector: list, divisor: int | None = None, residue: Any = None, message: str = ""):
        super().__init__(message or kind)
        self.kind = kind
        self.vector = vector
        self.divisor = divisor
        self.residue = residue

    @property
    def obstruction(self) -> str:
        if self.kind == "divisibility":
            return f"{self.divisor} ∤ {self.residue}"
        return f"0 = {self.residue}"


class CapabilityError(NotImplementedError):
    """The requested operation is not implemented for this ring."""


class Matrix:
    """Immutable m x n matrix; entries are raw ring payloads."""

    __slots__ = ("ring", "rows", "cols", "_v")

    def __init__(self, ring: Ring, entries: Sequence[Sequence[Any]]):
        entries = [list(r) for r in entries]
        if not entries or not entries[0]:
            raise DimensionMismatch("matrices must have at least one row and one column")
        n = len(entries[0])
        if any(len(r) != n for r in entries):
            raise DimensionMismatch("ragged rows")
        conv = []
        for r in entries:
            row = []
            for x in r:
                if isinstance(x, RingElement):
                    if x.ring != ring:
                        raise RingMismatch(f"{x.ring} vs {ring}")
                    row.append(x.value)
                else:
                    row.append(ring.convert(x))
            conv.append(tuple(row))
        self.ring = ring
        self.rows = len(conv)
        self.cols = n
        self._v = tuple(conv)

    @classmethod
    def _raw(cls, ring: Ring, v) -> "Matrix":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._v = tuple(tuple(r) for r in v)
        obj.rows = len(obj._v)
        obj.cols = len(obj._v[0])
        return obj

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "Matrix":
        z, o = ring.zero(), ring.one()
        return cls._raw(ring, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring: Ring, m: int, n: int) -> "Matrix":
        z = ring.zero()
        return cls._raw(ring, [[z] * n for _ in range(m)])

    @classmethod
    def unit(cls, ring: Ring, m: int, n: int, i: int, j: int, value=None) -> "Matrix":
        """``value * e_ij`` (``value`` defaults to 1)."""
        z = ring.zero()
        v = [[z] * n for _ in range(m)]
        v[i][j] = ring.one() if value is None else value
        return cls._raw(ring, v)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij) -> RingElement:
        i, j = ij
        return RingElement(self.ring, self._v[i][j])

    def raw(self, i: int, j: int):
        return self._v[i][j]

    def entries(self) -> List[List[Any]]:
        return [list(r) for r in self._v]

    def to_strings(self) -> List[List[str]]:
        return [[self.ring.format(x) for x in r] for r in self._v]

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.ring, list(zip(*self._v)))

    def vec(self) -> list:
        """Row-major flattening of the raw entries."""
        return [x for r in self._v for x in r]

    def is_zero(self) -> bool:
        R = self.ring
        return all(R.is_zero(x) for r in self._v for x in r)

    def map(self, f, ring: Ring | None = None) -> "Matrix":
        return Matrix._raw(ring or self.ring, [[f(x) for x in r] for r in self._v])

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix._raw(self.ring, [[self._v[i][j] for j in cols] for i in rows])

    def __add__(self, other): return mat_add(self, other)
    def __sub__(self, other): return mat_add(self, scalar_mul(self.ring.from_int(-1), other))
    def __neg__(self): return scalar_mul(self.ring.from_int(-1), self)
    def __matmul__(self, other): return matmul(self, other)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return matmul(self, other)
        if isinstance(other, RingElement):
            return scalar_mul(other.value, self)
        if isinstance(other, int):
            return scalar_mul(self.ring.from_int(other), self)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Matrix":
        if self.rows != self.cols:
            raise DimensionMismatch("power of a non-square matrix")
        result, base = Matrix.identity(self.ring, self.rows), self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ring != other.ring or self.shape != other.shape:
            return False
        eq = self.ring.eq
        return all(eq(a, b) for r1, r2 in zip(self._v, other._v) for a, b in zip(r1, r2))

    def __hash__(self):
        return hash((self.ring, self.shape, tuple(self.ring.format(x) for x in self.vec())))

    def __repr__(self):
        return f"Matrix({self.ring}, {self.to_strings()})"

    def __str__(self):
        rows = self.to_strings()
        w = max(len(s) for r in rows for s in r)
        return "\n".join("[" + "  ".join(s.rjust(w) for s in r) + "]" for r in rows)


# -- basic products -------------------------------------------------------------

def _check_ring(A: Matrix, B: Matrix) -> None:
    if A.ring != B.ring:
        raise RingMismatch(f"{A.ring} vs {B.ring}")


def matmul(A: Matrix, B: Matrix) -> Matrix:
    _check_ring(A, B)
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    R = A.ring
    add, mul, z = R.add, R.mul, R.zero()
    Bt = list(zip(*B._v))
    out = []
    for row in A._v:
        new = []
        for col in Bt:
            acc = z
            for a, b in zip(row, col):
                if R.is_zero(a) or R.is_zero(b):
                    continue
                acc = add(acc, mul(a, b))
            new.append(acc)
        out.append(new)
    return Matrix._raw(R, out)


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    _check_ring(A, B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"cannot add {A.shape} and {B.shape}")
    add = A.ring.add
    return Matrix._raw(A.ring, [[add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(A._v, B._v)])


def scalar_mul(c, A: Matrix) -> Matrix:
    """``c * A`` for a raw payload or :class:`RingElement` ``c``."""
    if isinstance(c, RingElement):
        if c.ring != A.ring:
            raise RingMismatch(f"{c.ring} vs {A.ring}")
        c = c.value
    mul = A.ring.mul
    return Matrix._raw(A.ring, [[mul(c, a) for a in r] for r in A._v])


def _square(A: Matrix) -> int:
    if A.rows != A.cols:
        raise DimensionMismatch(f"matrix of shape {A.shape} is not square")
    return A.rows


# -- characteristic polynomial ------------------------------------------------------

@dataclass(frozen=True)
class CharPoly:
    """Coefficients ``p_0..p_n`` of ``det(A - xI)`` (ascending powers)."""

    ring: Ring
    coeffs: Tuple[Any, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> RingElement:
        return RingElement(self.ring, self.coeffs[k])

    @property
    def det(self) -> RingElement:
        return self[0]

    def __call__(self, x: RingElement) -> RingElement:
        acc = self.ring.zero()
        for c in reversed(self.coeffs):
            acc = self.ring.add(self.ring.mul(acc, x.value), c)
        return RingElement(self.ring, acc)


def _berkowitz(R: Ring, a) -> list:
    """Coefficients of det(xI - A), highest power first."""
    n = len(a)
    add, mul, neg, z = R.add, R.mul, R.neg, R.zero()
    poly = [R.one()]
    for k in range(n):
        col = [R.one(), neg(a[k][k])]
        row = a[k][:k]
        v = [a[i][k] for i in range(k)]
        for _ in range(k):
            acc = z
            for r, x in zip(row, v):
                acc = add(acc, mul(r, x))
            col.append(neg(acc))
            v = [
                _dot(R, a[i][:k], v)
                for i in range(k)
            ]
        # lower-triangular Toeplitz matrix with first column ``col`` times ``poly``
        new = []
        for i in range(k + 2):
            acc = z
            for j in range(min(i, k) + 1):
                if j < len(poly):
                    acc = add(acc, mul(col[i - j], poly[j]))
            new.append(acc)
        poly = new
    return poly


def _dot(R: Ring, xs, ys):
    acc = R.zero()
    for x, y in zip(xs, ys):
        acc = R.add(acc, R.mul(x, y))
    return acc


def _over_polynomials(A: Matrix):
    """``(P, A', D)`` with ``A = A' / D`` and ``A'`` over the polynomial ring P.

    Only for rational-function rings; Berkowitz then runs on polynomials
    and a single division at the end replaces a gcd per operation.
    """
    R = A.ring
    if not isinstance(R, (RatFuncField, ProperRatRing)):
        return None
    D = None
    for x in A.vec():
        den = x.den
        if D is None:
            D = den
        elif den != D:
            D = (D * den).exact_div(poly_gcd(D, den))
    P = PolyRing(R.variables)
    Ap = [[x.num * D.exact_div(x.den) for x in r] for r in A._v]
    # scale to integer coefficients so Berkowitz runs on Python ints
    scale = 1
    for p in [D] + [x for r in Ap for x in r]:
        for c in p.terms.values():
            if not isinstance(c, int):
                scale = math.lcm(scale, c.denominator)
    if scale != 1:
        D = D.scale(scale)
        Ap = [[x.scale(scale) for x in r] for r in Ap]
    return P, Ap, D


def _char_poly_raw(R: Ring, a, n: int) -> list:
    high_first = _berkowitz(R, a)
    return [R.neg(high_first[n - i]) if n % 2 else high_first[n - i] for i in range(n + 1)]


def _adj_from_coeffs(R: Ring, a, p) -> list:
    n = len(a)
    acc = [[p[n] if i == j else R.zero() for j in range(n)] for i in range(n)]
    for k in range(n - 1, 0, -1):
        acc = [[R.add(_dot(R, acc[i], [a[t][j] for t in range(n)]), p[k] if i == j else R.zero())
                for j in range(n)] for i in range(n)]
    return [[R.neg(x) for x in r] for r in acc]


def char_poly(A: Matrix) -> CharPoly:
    """Characteristic polynomial ``det(A - xI)``, computed division-free."""
    n = _square(A)
    R = A.ring
    cleared = _over_polynomials(A)
    if cleared is None:
        return CharPoly(R, tuple(_char_poly_raw(R, A._v, n)))
    # det(A - xI) = det(A' - xD I) / D^n
    P, Ap, D = cleared
    c = _char_poly_raw(P, Ap, n)
    return CharPoly(R, tuple(RatFunc.of(c[k], D ** (n - k)) for k in range(n + 1)))


def determinant(A: Matrix) -> RingElement:
    return char_poly(A).det


def poly_eval_matrix(p: CharPoly, A: Matrix) -> Matrix:
    """``p_0 I + p_1 A + ... + p_n A^n`` by Horner's rule."""
    n = _square(A)
    R = A.ring
    cleared = _over_polynomials(A)
    if cleared is not None and p.coeffs:
        # with A = A'/D and p_k = e_k/E:  p(A) = sum e_k D^(d-k) A'^k / (E D^d)
        P, Ap, D = cleared
        E = MultiPoly.const(P.vars, 1)
        for c in p.coeffs:
            if c.den != E:
                E = (E * c.den).exact_div(poly_gcd(E, c.den))
        d = len(p.coeffs) - 1
        Am = Matrix._raw(P, Ap)
        acc = Matrix.zeros(P, n, n)
        for k in range(d, -1, -1):
            c = p.coeffs[k]
            e = c.num * E.exact_div(c.den) * D ** (d - k)
            acc = matmul(acc, Am) + Matrix._raw(P, [[e if i == j else P.zero() for j in range(n)] for i in range(n)])
        den = E * D ** d
        return Matrix._raw(R, [[RatFunc.of(x, den) for x in r] for r in acc._v])
    I = Matrix.identity(R, n)
    acc = Matrix.zeros(R, n, n)
    for c in reversed(p.coeffs):
        acc = matmul(acc, A) + scalar_mul(c, I)
    return acc


def adjugate(A: Matrix) -> Matrix:
    """Adjugate via ``adj(A) = -(p_1 I + p_2 A + ... + p_n A^(n-1))``."""
    n = _square(A)
    R = A.ring
    cleared = _over_polynomials(A)
    if cleared is None:
        return Matrix._raw(R, _adj_from_coeffs(R, A._v, _char_poly_raw(R, A._v, n)))
    # adj(A' / D) = adj(A') / D^(n-1)
    P, Ap, D = cleared
    adj = _adj_from_coeffs(P, Ap, _char_poly_raw(P, Ap, n))
    Dn = D ** (n - 1)
    return Matrix._raw(R, [[RatFunc.of(x, Dn) for x in r] for r in adj])


def det_laplace(A: Matrix) -> RingElement:
    """Cofactor expansion along the first row (exponential; tests only)."""
    _square(A)
    R = A.ring

    def rec(v):
        if len(v) == 1:
            return v[0][0]
        acc = R.zero()
        for j, x in enumerate(v[0]):
            if R.is_zero(x):
                continue
            minor = [r[:j] + r[j + 1:] for r in v[1:]]
            t = R.mul(x, rec(minor))
            acc = R.add(acc, t if j % 2 == 0 else R.neg(t))
        return acc

    return RingElement(R, rec([list(r) for r in A._v]))


def adjugate_cofactor(A: Matrix) -> Matrix:
    """Transpose of the cofactor matrix, from minors."""
    n = _square(A)
    R = A.ring
    if n == 1:
        return Matrix.identity(R, 1)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != j]
            cols = [c for c in range(n) if c != i]
            d = det_laplace(A.submatrix(rows, cols)).value
            out[i][j] = d if (i + j) % 2 == 0 else R.neg(d)
    return Matrix._raw(R, out)


def inverse(A: Matrix) -> Matrix:
    """``det(A)^-1 adj(A)``; raises :class:`NotInvertible` if det is not a unit."""
    n = _square(A)
    R = A.ring
    cleared = _over_polynomials(A)
    if cleared is not None:
        P, Ap, D = cleared
        c = _char_poly_raw(P, Ap, n)
        det = RatFunc.of(c[0], D ** n)
        if not R.is_unit(det):
            raise NotInvertible(RingElement(R, det))
        # A^-1 = D adj(A') / det(A')
        adj = _adj_from_coeffs(P, Ap, c)
        return Matrix._raw(R, [[RatFunc.of(x * D, c[0]) for x in r] for r in adj])
    p = _char_poly_raw(R, A._v, n)
    det = p[0]
    if not R.is_unit(det):
        raise NotInvertible(RingElement(R, det))
    inv = R.inv(det)
    return Matrix._raw(R, [[R.mul(inv, x) for x in r] for r in _adj_from_coeffs(R, A._v, p)])


# -- Smith normal form ----------------------------------------------------------------

def smith_normal_form(A: Sequence[Sequence[int]]):
    """Integer Smith form ``U A V = D`` with unimodular ``U`` and ``V``.

    Returns ``(U, D, V)`` as lists of lists of ints.  The nonzero diagonal
    entries of ``D`` are positive and each divides the next.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(map(int, r)) for r in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (D, V):
            for r in M:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        if k:
            D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
            U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        if k:
            for M in (D, V):
                for r in M:
                    r[dst] += k * r[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                add_row(i, t, -q)
                if D[i][t]:
                    done = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                add_col(j, t, -q)
                if D[t][j]:
                    done = False
            if done:
                # enforce divisibility of the remaining block by the pivot
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            nz = [(abs(D[i][t]), i, 0) for i in range(t, m) if D[i][t]]
            nz += [(abs(D[t][j]), t, j) for j in range(t + 1, n) if D[t][j]]
            _, i, j = min(nz)
            if j == 0:
                swap_rows(t, i)
            else:
                swap_cols(t, j)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


# -- linear solving -----------------------------------------------------------------------

def _column(b, R: Ring) -> list:
    if isinstance(b, Matrix):
        if b.cols != 1:
            raise DimensionMismatch("right-hand side must be a column")
        if b.ring != R:
            raise RingMismatch(f"{b.ring} vs {R}")
        return [r[0] for r in b._v]
    return [x.value if isinstance(x, RingElement) else R.convert(x) for x in b]


def _solve_field(R: Ring, A, b):
    m = len(A)
    n = len(A[0]) if m else 0
    # augmented [A | b | I] so a zero row of A carries its certificate
    rows = [list(A[i]) + [b[i]] + [R.one() if k == i else R.zero() for k in range(m)] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if not R.is_zero(rows[i][c])), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = R.inv(rows[r][c])
        rows[r] = [R.mul(inv, x) for x in rows[r]]
        for i in range(m):
            if i != r and not R.is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [R.sub(x, R.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if not R.is_zero(rows[i][n]):
            raise NoSolution("rank", rows[i][n + 1:], residue=R.format(rows[i][n]),
                             message=f"inconsistent system (rank certificate: 0 = {R.format(rows[i][n])})")
    x = [R.zero()] * n
    for i, c in enumerate(pivots):
        x[c] = rows[i][n]
    return x


def _solve_integers(A, b):
    m = len(A)
    n = len(A[0]) if m else 0
    U, D, V = smith_normal_form(A)
    ub = [sum(u * y for u, y in zip(row, b)) for row in U]
    y = [0] * n
    for i in range(m):
        d = D[i][i] if i < n else 0
        if d:
            if ub[i] % d:
                raise NoSolution("divisibility", U[i], divisor=d, residue=ub[i] % d,
                                 message=f"no integer solution: {d} ∤ {ub[i] % d}")
            y[i] = ub[i] // d
        elif ub[i]:
            raise NoSolution("divisibility", U[i], divisor=0, residue=ub[i],
                             message=f"no integer solution: 0 = {ub[i]}")
    return [sum(v * t for v, t in zip(row, y)) for row in V]


def _realify_zbeta(A, b):
    # a + b*beta acting on (x0, x1) as [[a, -3b], [b, a + b]]
    M = []
    for row in A:
        r0, r1 = [], []
        for a, bb in row:
            r0 += [a, -3 * bb]
            r1 += [bb, a + bb]
        M.append(r0)
        M.append(r1)
    rhs = [t for pair in b for t in pair]
    return M, rhs


def solve_linear(A: Matrix, b) -> Matrix:
    """Exact solution ``x`` (a column) of ``A x = b``.

    Fields use Gauss-Jordan elimination, the integers use the Smith form,
    and Z[beta] is solved as an integer system on coordinates.  Raises
    :class:`NoSolution` (with certificate) or :class:`CapabilityError`.
    """
    R = A.ring
    rhs = _column(b, R)
    if len(rhs) != A.rows:
        raise DimensionMismatch(f"right-hand side has {len(rhs)} rows, matrix has {A.rows}")
    rows = A.entries()
    if R.is_field:
        x = _solve_field(R, rows, rhs)
    elif isinstance(R, Integers):
        x = _solve_integers(rows, rhs)
    elif isinstance(R, QuadraticZBeta):
        M, r = _realify_zbeta(rows, rhs)
        xs = _solve_integers(M, r)
        x = [(xs[2 * k], xs[2 * k + 1]) for k in range(A.cols)]
    else:
        raise CapabilityError(f"linear solving is not implemented over {R}")
    return Matrix._raw(R, [[v] for v in x])


def hstack(mats: Sequence[Matrix]) -> Matrix:
    R = mats[0].ring
    return Matrix._raw(R, [sum((list(M._v[i]) for M in mats), []) for i in range(mats[0].rows)])


def vstack(mats: Sequence[Matrix]) -> Matrix:
    R = mats[0].ring
    return Matrix._raw(R, [r for M in mats for r in M._v])
