"""Controller constraint sets S as finitely generated R-modules.

Three shapes are supported: sparsity patterns, minimum-delay bounds over a
ring proper in the delay variable, and explicit generator lists.  Every set
answers membership with a certificate and exposes a finite generating set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, List, Optional, Sequence, Tuple

from .matrix import CapabilityError, DimensionMismatch, Matrix, NoSolution, solve_linear
from .poly import RatFunc, delay
from .rings import ProperRatRing, Ring, RingMismatch


@dataclass
class Membership:
    """Result of a membership test; truthy when the matrix is in the set.

    ``certificate`` holds either a coefficient list (member) or a
    description of the obstruction (non-member).
    """

    member: bool
    certificate: Any = None

    def __bool__(self):
        return self.member


class ControllerSet:
    """Base class: an R-module of ``rows x cols`` matrices."""

    kind = "abstract"

    def __init__(self, ring: Ring, rows: int, cols: int):
        if rows < 1 or cols < 1:
            raise DimensionMismatch("controller sets need positive dimensions")
        self.ring = ring
        self.rows = rows
        self.cols = cols

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def _check(self, K: Matrix) -> None:
        if K.ring != self.ring:
            raise RingMismatch(f"{K.ring} vs {self.ring}")
        if K.shape != self.shape:
            raise DimensionMismatch(f"matrix {K.shape} vs controller set {self.shape}")

    def contains(self, K: Matrix) -> Membership:
        raise NotImplementedError

    def __contains__(self, K: Matrix) -> bool:
        return bool(self.contains(K))

    def generators(self) -> List[Matrix]:
        raise NotImplementedError

    def combine(self, coeffs: Sequence[Any]) -> Matrix:
        """``sum c_i H_i`` for raw ring payloads ``coeffs``."""
        gens = self.generators()
        if len(coeffs) != len(gens):
            raise ValueError(f"expected {len(gens)} coefficients, got {len(coeffs)}")
        acc = Matrix.zeros(self.ring, self.rows, self.cols)
        for c, H in zip(coeffs, gens):
            acc = acc + H.map(lambda x, c=c: self.ring.mul(c, x))
        return acc

    def to_json(self) -> dict:
        raise NotImplementedError


class Sparsity(ControllerSet):
    """Matrices vanishing outside a boolean pattern."""

    kind = "sparsity"

    def __init__(self, ring: Ring, pattern: Sequence[Sequence[bool]]):
        pat = tuple(tuple(bool(x) for x in r) for r in pattern)
        if not pat or any(len(r) != len(pat[0]) for r in pat):
            raise DimensionMismatch("sparsity pattern must be rectangular and nonempty")
        super().__init__(ring, len(pat), len(pat[0]))
        self.pattern = pat

    def contains(self, K):
        self._check(K)
        R = self.ring
        for i in range(self.rows):
            for j in range(self.cols):
                if not self.pattern[i][j] and not R.is_zero(K.raw(i, j)):
                    return Membership(False, {"entry": [i, j], "reason": "nonzero outside the pattern"})
        return Membership(True, {"coefficients": [K.raw(i, j) for i, j in self.positions()]})

    def positions(self) -> List[Tuple[int, int]]:
        return [(i, j) for i in range(self.rows) for j in range(self.cols) if self.pattern[i][j]]

    def generators(self):
        return [Matrix.unit(self.ring, self.rows, self.cols, i, j) for i, j in self.positions()]

    def to_json(self):
        return {"kind": "sparsity", "pattern": [[int(x) for x in r] for r in self.pattern]}


class DelayBounds(ControllerSet):
    """Matrices whose ``(i, j)`` entry has delay at least ``a_ij`` in ``d``.

    An entry has delay at least ``a`` exactly when it is ``d^-a`` times an
    element proper in ``d``, so the set is generated by ``d^-a_ij e_ij``.
    """

    kind = "delay_bounds"

    def __init__(self, ring: ProperRatRing, d_var: str, bounds: Sequence[Sequence[int]]):
        if not isinstance(ring, ProperRatRing) or d_var not in ring.proper_vars:
            raise ValueError(f"delay bounds need a ring proper in {d_var!r}")
        b = tuple(tuple(int(x) for x in r) for r in bounds)
        if not b or any(len(r) != len(b[0]) for r in b):
            raise DimensionMismatch("delay bounds must be rectangular and nonempty")
        if any(x < 0 for r in b for x in r):
            raise ValueError("delay bounds must be nonnegative")
        super().__init__(ring, len(b), len(b[0]))
        self.d_var = d_var
        self.bounds = b

    def contains(self, K):
        self._check(K)
        for i in range(self.rows):
            for j in range(self.cols):
                dl = delay(K.raw(i, j), self.d_var)
                if dl < self.bounds[i][j]:
                    return Membership(False, {"entry": [i, j], "delay": dl, "bound": self.bounds[i][j]})
        R = self.ring
        coeffs = []
        for i in range(self.rows):
            for j in range(self.cols):
                # K_ij = d^-a * (d^a K_ij)
                coeffs.append(R.mul(K.raw(i, j), self._dpow(self.bounds[i][j], invert=False)))
        return Membership(True, {"coefficients": coeffs})

    def _dpow(self, a: int, invert: bool = True) -> RatFunc:
        d = RatFunc.var(self.ring.variables, self.d_var)
        return (d ** a).inverse() if invert else d ** a

    def generators(self):
        return [
            Matrix.unit(self.ring, self.rows, self.cols, i, j, self._dpow(self.bounds[i][j]))
            for i in range(self.rows)
            for j in range(self.cols)
        ]

    def to_json(self):
        return {"kind": "delay_bounds", "d_var": self.d_var, "bounds": [list(r) for r in self.bounds]}


class GeneratorSet(ControllerSet):
    """The R-span of an explicit list of matrices.

    Membership solves ``sum c_i vec(H_i) = vec(K)``: Gauss-Jordan over
    fields, Smith normal form over the integers (and Z[beta] through its
    integer coordinates).  Other rings raise :class:`CapabilityError`.
    """

    kind = "generators"

    def __init__(self, ring: Ring, matrices: Sequence[Matrix], shape: Tuple[int, int] | None = None):
        mats = list(matrices)
        if mats:
            shape = mats[0].shape
        if shape is None:
            raise ValueError("an empty generator list needs an explicit shape")
        super().__init__(ring, *shape)
        for H in mats:
            self._check(H)
        self.matrices = mats

    def contains(self, K):
        self._check(K)
        R = self.ring
        if not self.matrices:
            if K.is_zero():
                return Membership(True, {"coefficients": []})
            return Membership(False, {"reason": "the zero module contains only 0"})
        cols = [H.vec() for H in self.matrices]
        A = Matrix._raw(R, [list(r) for r in zip(*cols)])
        try:
            x = solve_linear(A, K.vec())
        except NoSolution as e:
            return Membership(False, {"obstruction": e.obstruction, "kind": e.kind,
                                      "vector": e.vector, "divisor": e.divisor})
        return Membership(True, {"coefficients": [x.raw(i, 0) for i in range(x.rows)]})

    def generators(self):
        return list(self.matrices)

    def to_json(self):
        return {"kind": "generators", "matrices": [H.to_strings() for H in self.matrices]}


def full_set(ring: Ring, rows: int, cols: int) -> Sparsity:
    """The unconstrained set of all ``rows x cols`` matrices."""
    return Sparsity(ring, [[True] * cols for _ in range(rows)])


def contains(S: ControllerSet, K: Matrix) -> Membership:
    return S.contains(K)


def generators(S: ControllerSet) -> List[Matrix]:
    return S.generators()
