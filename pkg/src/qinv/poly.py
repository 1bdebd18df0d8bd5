"""Sparse multivariate polynomials over Q and rational functions built on them.

Polynomials are dictionaries from exponent tuples to nonzero rational
coefficients, stored as ``int`` when integral (integer-only arithmetic is
much cheaper) and ``Fraction`` otherwise.  Monomials are ordered graded-lexicographically using the
declared variable order; this order fixes leading terms, and therefore
the canonical (monic-denominator) form of a :class:`RatFunc`.

Per-variable degree is additive under multiplication, so properness and
delay queries give the same answer on reduced and unreduced fractions.
"""
from __future__ import annotations

import math
from fractions import Fraction

from gmpy2 import mpq
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple, Union

Exponent = Tuple[int, ...]
Number = Union[int, Fraction]
_SCALARS = (int, Fraction, type(mpq(0)))

NEG_INF = -math.inf


def _coeff(c: Number) -> Number:
    if isinstance(c, int):
        return c
    c = mpq(c)
    return int(c.numerator) if c.denominator == 1 else c


def _fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _grlex(e: Exponent):
    return (sum(e), e)


class MultiPoly:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars: Sequence[str], terms: Mapping[Exponent, Number] | None = None):
        self.vars = tuple(vars)
        clean: Dict[Exponent, Fraction] = {}
        if terms:
            k = len(self.vars)
            for e, c in terms.items():
                if c == 0:
                    continue
                if len(e) != k:
                    raise ValueError(f"exponent {e} does not match variables {self.vars}")
                clean[tuple(e)] = _coeff(c)
        self.terms = clean
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def _raw(cls, vars: Tuple[str, ...], terms: Dict[Exponent, Fraction]) -> "MultiPoly":
        # trusted path: caller guarantees no zero coefficients
        obj = cls.__new__(cls)
        obj.vars = vars
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, vars: Sequence[str]) -> "MultiPoly":
        return cls._raw(tuple(vars), {})

    @classmethod
    def const(cls, vars: Sequence[str], c: Number) -> "MultiPoly":
        vars = tuple(vars)
        if c == 0:
            return cls._raw(vars, {})
        return cls._raw(vars, {(0,) * len(vars): _coeff(c)})

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "MultiPoly":
        vars = tuple(vars)
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls._raw(vars, {tuple(e): 1})

    @classmethod
    def monomial(cls, vars: Sequence[str], exp: Exponent, c: Number = 1) -> "MultiPoly":
        return cls(vars, {tuple(exp): c})

    # queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        if not self.terms:
            return True
        return len(self.terms) == 1 and not any(next(iter(self.terms)))

    def constant_value(self) -> Fraction:
        """Coefficient of the constant monomial."""
        return _fraction(self.terms.get((0,) * len(self.vars), 0))

    def _index(self, v: Union[str, int]) -> int:
        if isinstance(v, int):
            return v
        try:
            return self.vars.index(v)
        except ValueError:
            raise KeyError(f"unknown variable {v!r}; declared {self.vars}") from None

    def degree_in(self, v: Union[str, int]):
        """Degree in one variable; ``-inf`` for the zero polynomial."""
        i = self._index(v)
        if not self.terms:
            return NEG_INF
        return max(e[i] for e in self.terms)

    def total_degree(self):
        if not self.terms:
            return NEG_INF
        return max(sum(e) for e in self.terms)

    def leading(self) -> Tuple[Exponent, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=_grlex)
        return e, self.terms[e]

    def leading_coeff(self) -> Fraction:
        return _fraction(self.leading()[1])

    def variables_used(self) -> Tuple[int, ...]:
        used = set()
        for e in self.terms:
            used.update(i for i, d in enumerate(e) if d)
        return tuple(sorted(used))

    def eval(self, point: Union[Mapping[str, Number], Sequence[Number]]) -> Fraction:
        if isinstance(point, Mapping):
            xs = [Fraction(point[v]) for v in self.vars]
        else:
            xs = [Fraction(x) for x in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            t = _fraction(c)
            for x, d in zip(xs, e):
                if d:
                    t *= x ** d
            total += t
        return total

    def sorted_terms(self):
        """Terms in descending graded-lex order."""
        return sorted(self.terms.items(), key=lambda kv: _grlex(kv[0]), reverse=True)

    # arithmetic ---------------------------------------------------------
    def _check(self, other: "MultiPoly") -> None:
        if self.vars != other.vars:
            raise ValueError(f"variable mismatch: {self.vars} vs {other.vars}")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, _SCALARS):
            return MultiPoly.const(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MultiPoly._raw(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _SCALARS):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        if not self.terms or not other.terms:
            return MultiPoly._raw(self.vars, {})
        out: Dict[Exponent, Fraction] = {}
        if len(self.vars) == 1:
            # dense convolution is cheaper than dictionary updates here
            dense = [0] * (max(self.terms)[0] + max(other.terms)[0] + 1)
            other_items = [(b, c2) for (b,), c2 in other.terms.items()]
            for (a,), c1 in self.terms.items():
                for b, c2 in other_items:
                    dense[a + b] += c1 * c2
            return MultiPoly._raw(self.vars, {(k,): c for k, c in enumerate(dense) if c})
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return MultiPoly._raw(self.vars, out)

    __rmul__ = __mul__

    def scale(self, c: Number) -> "MultiPoly":
        if c == 0:
            return MultiPoly._raw(self.vars, {})
        c = _coeff(c)
        return MultiPoly._raw(self.vars, {e: v * c for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def exact_div(self, other: "MultiPoly") -> "MultiPoly":
        """Quotient ``self / other``; raises ``ArithmeticError`` if inexact."""
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if len(other.terms) == 1:
            (ge, gc), = other.terms.items()
            out = {}
            for e, c in self.terms.items():
                q = tuple(a - b for a, b in zip(e, ge))
                if min(q, default=0) < 0:
                    raise ArithmeticError("inexact polynomial division")
                out[q] = _coeff(mpq(c) / gc)
            return MultiPoly._raw(self.vars, out)
        if len(self.vars) == 1:
            return self._exact_div_dense(other)
        ge, gc = other.leading()
        rem = dict(self.terms)
        quot: Dict[Exponent, Fraction] = {}
        g_items = list(other.terms.items())
        while rem:
            re_ = max(rem, key=_grlex)
            rc = rem[re_]
            q = tuple(a - b for a, b in zip(re_, ge))
            if min(q, default=0) < 0:
                raise ArithmeticError("inexact polynomial division")
            qc = _coeff(mpq(rc) / gc)
            quot[q] = qc
            for e, c in g_items:
                t = tuple(a + b for a, b in zip(e, q))
                s = rem.get(t, 0) - qc * c
                if s:
                    rem[t] = s
                else:
                    rem.pop(t, None)
        return MultiPoly._raw(self.vars, quot)

    def _exact_div_dense(self, other: "MultiPoly") -> "MultiPoly":
        if not self.terms:
            return self
        rem = [0] * (max(self.terms)[0] + 1)
        for (k,), c in self.terms.items():
            rem[k] = c
        dg = max(other.terms)[0]
        den = [0] * (dg + 1)
        for (k,), c in other.terms.items():
            den[k] = c
        lc = mpq(den[dg])
        quot = {}
        for top in range(len(rem) - 1, dg - 1, -1):
            c = rem[top]
            if not c:
                continue
            qc = _coeff(c / lc)
            quot[(top - dg,)] = qc
            off = top - dg
            for k in range(dg + 1):
                if den[k]:
                    rem[off + k] -= qc * den[k]
        if any(rem[:dg]):
            raise ArithmeticError("inexact polynomial division")
        return MultiPoly._raw(self.vars, quot)

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, _SCALARS):
            return self == MultiPoly.const(self.vars, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r}, vars={self.vars})"

    def __str__(self):
        return format_poly(self)


# -- gcd -------------------------------------------------------------------

def _coeffs_in(f: MultiPoly, i: int) -> Dict[int, MultiPoly]:
    """View ``f`` as a polynomial in variable ``i`` with coefficients free of it."""
    buckets: Dict[int, Dict[Exponent, Fraction]] = {}
    for e, c in f.terms.items():
        d = e[i]
        e2 = e[:i] + (0,) + e[i + 1:]
        buckets.setdefault(d, {})[e2] = c
    return {d: MultiPoly._raw(f.vars, t) for d, t in buckets.items()}


def _content(f: MultiPoly, i: int) -> MultiPoly:
    g = None
    for c in _coeffs_in(f, i).values():
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant():
            break
    return g


def _primitive(f: MultiPoly, i: int) -> MultiPoly:
    return f.exact_div(_content(f, i))


def _prem(a: MultiPoly, b: MultiPoly, i: int) -> MultiPoly:
    """Sparse pseudo-remainder of ``a`` by ``b`` in variable ``i``."""
    db = b.degree_in(i)
    cb = _coeffs_in(b, i)
    lc_b = cb[db]
    r = a
    while not r.is_zero():
        dr = r.degree_in(i)
        if dr < db:
            break
        lc_r = _coeffs_in(r, i)[dr]
        shift = [0] * len(a.vars)
        shift[i] = dr - db
        xk = MultiPoly._raw(a.vars, {tuple(shift): 1})
        r = lc_b * r - lc_r * xk * b
    return r


def _int_primitive(a: List[Number]) -> List[int]:
    den = 1
    for c in a:
        den = den * c.denominator // math.gcd(den, c.denominator)
    ints = [int(c * den) for c in a]
    g = 0
    for c in ints:
        g = math.gcd(g, c)
    return [c // g for c in ints] if g > 1 else ints


def _univariate_gcd(f: MultiPoly, g: MultiPoly, i: int) -> MultiPoly:
    # primitive remainder sequence over Z[x]; coefficient lists ascending
    def dense(p):
        out = [0] * (p.degree_in(i) + 1)
        for e, c in p.terms.items():
            out[e[i]] = c
        return _int_primitive(out)

    a, b = dense(f), dense(g)
    if len(a) < len(b):
        a, b = b, a
    while b:
        lb = b[-1]
        while len(a) >= len(b):
            la = a[-1]
            k = len(a) - len(b)
            a = [lb * x for x in a]
            for j, c in enumerate(b):
                a[k + j] -= la * c
            a.pop()
            while a and a[-1] == 0:
                a.pop()
        if a:
            a = _int_primitive(a)
        a, b = b, a
    lead = a[-1]
    k = len(f.vars)
    out = {}
    for d, c in enumerate(a):
        if c:
            e = [0] * k
            e[i] = d
            out[tuple(e)] = _coeff(mpq(c, lead))
    return MultiPoly._raw(f.vars, out)


def poly_gcd(f: MultiPoly, g: MultiPoly) -> MultiPoly:
    """Greatest common divisor over Q, up to a rational scalar.

    Recursive content / primitive-part Euclid: the main variable is the
    first one used by either argument, coefficients live in the
    polynomial ring of the remaining variables.
    """
    f._check(g)
    if f.is_zero():
        return g
    if g.is_zero():
        return f
    used = sorted(set(f.variables_used()) | set(g.variables_used()))
    if not used:
        return MultiPoly.const(f.vars, 1)
    i = used[0]
    if len(used) == 1:
        return _univariate_gcd(f, g, i)
    if f.degree_in(i) == 0 or g.degree_in(i) == 0:
        # one side is free of x_i: gcd divides every x_i-coefficient of the other
        if f.degree_in(i) == 0:
            f, g = g, f
        return poly_gcd(_content(f, i), g)
    cf, cg = _content(f, i), _content(g, i)
    c = poly_gcd(cf, cg)
    a, b = f.exact_div(cf), g.exact_div(cg)
    if a.degree_in(i) < b.degree_in(i):
        a, b = b, a
    while not b.is_zero():
        r = _prem(a, b, i)
        a, b = b, (r if r.is_zero() else _primitive(r, i))
    return c * _primitive(a, i)


# -- rational functions ------------------------------------------------------

class RatFunc:
    """Quotient of two :class:`MultiPoly` over the same variables.

    The constructor keeps the given representation; :meth:`normalize`
    (applied by every arithmetic operation) cancels the gcd and makes the
    denominator's leading coefficient 1.  Equality is by cross
    multiplication, so it ignores representation.
    """

    __slots__ = ("num", "den", "_hash", "_reduced")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if den is None:
            den = MultiPoly.const(num.vars, 1)
        num._check(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den
        self._hash = None
        self._reduced = False

    def _mark(self) -> "RatFunc":
        self._reduced = True
        return self

    @property
    def vars(self) -> Tuple[str, ...]:
        return self.num.vars

    @classmethod
    def of(cls, num: MultiPoly, den: MultiPoly | None = None) -> "RatFunc":
        return cls(num, den).normalize()

    @classmethod
    def const(cls, vars: Sequence[str], c: Number) -> "RatFunc":
        c = Fraction(c)
        return cls(MultiPoly.const(vars, c), MultiPoly.const(vars, 1))

    @classmethod
    def var(cls, vars: Sequence[str], name: str) -> "RatFunc":
        return cls(MultiPoly.var(vars, name), MultiPoly.const(vars, 1))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_normalized(self) -> bool:
        if self.num.is_zero():
            return self.den == MultiPoly.const(self.vars, 1)
        return self.den.leading_coeff() == 1 and poly_gcd(self.num, self.den).is_constant()

    def _monic(self) -> "RatFunc":
        lc = self.den.leading_coeff()
        if lc == 1:
            return self._mark()
        inv = mpq(1) / lc
        return RatFunc(self.num.scale(inv), self.den.scale(inv))._mark()

    def normalize(self) -> "RatFunc":
        if self._reduced:
            return self
        num, den = self.num, self.den
        if num.is_zero():
            return RatFunc(num, MultiPoly.const(num.vars, 1))._mark()
        if not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.exact_div(g)
                den = den.exact_div(g)
        lc = den.leading_coeff()
        if lc != 1:
            inv = mpq(1) / lc
            num = num.scale(inv)
            den = den.scale(inv)
        return RatFunc(num, den)._mark()

    def degree_in(self, v):
        return self.num.degree_in(v), self.den.degree_in(v)

    def eval(self, point) -> Fraction:
        d = self.den.eval(point)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        return self.num.eval(point) / d

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, RatFunc):
            self.num._check(other.num)
            return other
        if isinstance(other, _SCALARS):
            return RatFunc.const(self.vars, other)
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            return self.normalize()
        if self.is_zero():
            return other.normalize()
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den).normalize()
        # with g = gcd(d1, d2) only a common factor of the new numerator and g can cancel
        a, b = self.normalize(), other.normalize()
        g = poly_gcd(a.den, b.den)
        if g.is_constant():
            return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den)._monic()
        d1, d2 = a.den.exact_div(g), b.den.exact_div(g)
        return RatFunc(a.num * d2 + b.num * d1, a.den * d2).normalize()

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return RatFunc.const(self.vars, 0)
        # cross-cancel reduced factors; the product is then reduced
        a, b = self.normalize(), other.normalize()
        n1, d1, n2, d2 = a.num, a.den, b.num, b.den
        g = poly_gcd(n1, d2)
        if not g.is_constant():
            n1, d2 = n1.exact_div(g), d2.exact_div(g)
        g = poly_gcd(n2, d1)
        if not g.is_constant():
            n2, d1 = n2.exact_div(g), d1.exact_div(g)
        return RatFunc(n1 * n2, d1 * d2)._monic()

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num).normalize()

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k).normalize()

    def __eq__(self, other):
        if isinstance(other, _SCALARS + (MultiPoly,)):
            other = self._coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.vars != other.vars:
            return False
        return self.num * other.den == other.num * self.den

    def __hash__(self):
        if self._hash is None:
            n = self.normalize()
            self._hash = hash((n.num, n.den))
        return self._hash

    def __repr__(self):
        return f"RatFunc({format_ratfunc(self)!r})"

    def __str__(self):
        return format_ratfunc(self)


# -- properness and delay -----------------------------------------------------

def degree_in(f: Union[MultiPoly, RatFunc], v: str):
    """Per-variable degree; a ``(num, den)`` pair for rational functions."""
    return f.degree_in(v)


def is_proper_in(f: RatFunc, v: str) -> bool:
    if f.is_zero():
        return True
    dn, dd = f.degree_in(v)
    return dn <= dd


def is_strictly_proper_in(f: RatFunc, v: str) -> bool:
    if f.is_zero():
        return True
    dn, dd = f.degree_in(v)
    return dn < dd


def delay(f: RatFunc, d: str):
    """Denominator degree minus numerator degree in ``d``; ``inf`` for 0.

    Negative values mean the function is not proper in ``d``.
    """
    if f.is_zero():
        return math.inf
    dn, dd = f.degree_in(d)
    return dd - dn


def normalize(f: RatFunc) -> RatFunc:
    return f.normalize()


# -- printing -------------------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _format_monomial(vars: Sequence[str], e: Exponent) -> str:
    parts = []
    for v, d in zip(vars, e):
        if d == 1:
            parts.append(v)
        elif d > 1:
            parts.append(f"{v}^{d}")
    return "*".join(parts)


def format_poly(p: MultiPoly) -> str:
    if p.is_zero():
        return "0"
    out = []
    for k, (e, c) in enumerate(p.sorted_terms()):
        mono = _format_monomial(p.vars, e)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = _format_coeff(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_coeff(a)}*{mono}"
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("-" if neg else "+") + body)
    return "".join(out)


def _is_single_power(p: MultiPoly) -> bool:
    if len(p.terms) != 1:
        return False
    (e, c), = p.terms.items()
    return c == 1 and sum(1 for d in e if d) == 1


def format_ratfunc(f: RatFunc) -> str:
    f = f.normalize()
    num = format_poly(f.num)
    if f.den.is_constant():
        return num
    if len(f.num.terms) > 1:
        num = f"({num})"
    den = format_poly(f.den)
    if not _is_single_power(f.den):
        den = f"({den})"
    return f"{num}/{den}"
