"""Quadratic invariance of controller-set modules over commutative rings."""
from .controllers import DelayBounds, GeneratorSet, Membership, Sparsity, full_set
from .matrix import Matrix, adjugate, char_poly, determinant, inverse, solve_linear
from .parser import ParseError, parse_matrix, parse_scalar, print_canonical
from .poly import MultiPoly, RatFunc, delay, is_proper_in, is_strictly_proper_in
from .problem import Problem, load_problem
from .qi import (
    Method,
    NotInM,
    QiReport,
    Verdict,
    adjugate_invariance,
    check_qi,
    check_strong_qi,
    closed_loop_set,
    h_invariance,
    h_map,
)
from .rings import QQ, ZBETA, ZZ, IntegersModP, PolyRing, ProperRatRing, RatFuncField

__version__ = "0.1.0"
