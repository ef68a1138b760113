"""The Caldero-Chapoton map.

X_M = sum_e chi(Gr_e(M)) prod_i x_i^(-<e, s_i> - <s_i, dim M - e>), with
X_{P_i[1]} = x_i and X_{M + N} = X_M X_N.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import NonRigidDimension, UndecomposableSign, DimensionMismatch
from .laurent import LaurentPoly, default_variables
from .quiver import Quiver
from .rep import RepFamily, euler_chars, generic_rep

__all__ = [
    "ClusterObject",
    "cc_module",
    "cc_object",
    "cc_by_dimension",
    "cc_shifted",
    "cc_exponent",
    "split_signed",
]


@dataclass(frozen=True)
class ClusterObject:
    """A module (possibly absent) plus shifted projectives P_i[1], i 0-based."""

    quiver: Quiver
    module: RepFamily | None = None
    shifts: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(sorted(int(i) for i in self.shifts)))
        if any(not 0 <= i < self.quiver.n for i in self.shifts):
            raise DimensionMismatch(f"shift indices {self.shifts} outside the vertex range")

    @property
    def dim(self) -> tuple[int, ...]:
        d = list(self.module.dims) if self.module is not None else [0] * self.quiver.n
        for i in self.shifts:
            d[i] -= 1
        return tuple(d)

    def __add__(self, other: "ClusterObject") -> "ClusterObject":
        if self.module is None or other.module is None:
            module = self.module or other.module
        else:
            from .rep import DirectSumFamily

            module = DirectSumFamily([self.module, other.module])
        return ClusterObject(self.quiver, module, self.shifts + other.shifts)


def cc_exponent(q: Quiver, d: Sequence[int], e: Sequence[int]) -> tuple[int, ...]:
    """Exponent vector -<e, s_i> - <s_i, d - e> for each vertex i."""
    E = q.euler_matrix
    e = np.asarray(e, dtype=np.int64)
    f = np.asarray(d, dtype=np.int64) - e
    return tuple(int(x) for x in -(e @ E) - (E @ f))


_CC_CACHE: dict = {}


def cc_module(m: RepFamily | None, primes: Sequence[int] | None = None, jobs: int = 1) -> LaurentPoly:
    """X_M for a module family; the zero module (None or dimension 0) gives 1."""
    if m is None or not any(m.dims):
        n = m.quiver.n if m is not None else 0
        return LaurentPoly.one(default_variables(n))
    key = (m.key, tuple(primes) if primes is not None else None)
    if key in _CC_CACHE:
        return _CC_CACHE[key]
    q = m.quiver
    terms: dict = {}
    for e, chi in euler_chars(m, primes, jobs).items():
        if chi:
            exps = cc_exponent(q, m.dims, e)
            terms[exps] = terms.get(exps, 0) + chi
    value = LaurentPoly(default_variables(q.n), terms)
    _CC_CACHE[key] = value
    return value


def cc_object(o: ClusterObject, primes: Sequence[int] | None = None, jobs: int = 1) -> LaurentPoly:
    variables = default_variables(o.quiver.n)
    value = cc_module(o.module, primes, jobs) if o.module is not None else LaurentPoly.one(variables)
    for i in o.shifts:
        value = value * LaurentPoly.gen(variables, i)
    return value


def split_signed(v: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(module part, shift multiset) with v = module - sum of simples over the shifts."""
    v = [int(x) for x in v]
    module = tuple(max(x, 0) for x in v)
    shifts = tuple(i for i, x in enumerate(v) for _ in range(-x) if x < 0)
    return module, shifts


def cc_by_dimension(
    q: Quiver, v: Sequence[int], seed: int = 0, primes: Sequence[int] | None = None, jobs: int = 1
) -> LaurentPoly:
    """X of the generic rigid object of signed dimension vector v.

    Negative entries become shifted projectives, the rest a generic module;
    the module part must come out rigid.
    """
    if len(v) != q.n:
        raise DimensionMismatch(f"dimension vector {tuple(v)} has length {len(v)}, quiver has {q.n} vertices")
    if any(not isinstance(x, (int, np.integer)) for x in v):
        raise UndecomposableSign(f"{tuple(v)} is not an integer vector")
    module_dim, shifts = split_signed(v)
    module = None
    if any(module_dim):
        module, flag = generic_rep(q, module_dim, seed)
        if flag == "non-rigid":
            raise NonRigidDimension(f"the generic representation of dimension {module_dim} has self-extensions")
    return cc_object(ClusterObject(q, module, shifts), primes, jobs)


def cc_shifted(q: Quiver, v: Sequence[int], seed: int = 0, primes: Sequence[int] | None = None, jobs: int = 1) -> LaurentPoly:
    """X of M(v)[-1] for the rigid indecomposable module M(v).

    In the cluster category [-1] agrees with tau^-1: an injective I_j goes
    to P_j[1], any other M to the module of dimension Phi^-1 (dim M).
    """
    v = tuple(int(x) for x in v)
    for j in range(q.n):
        if v == q.injective_dim(j):
            return LaurentPoly.gen(default_variables(q.n), j)
    module, flag = generic_rep(q, v, seed)
    if flag != "indecomposable-rigid":
        raise NonRigidDimension(f"M{v}[-1] needs a rigid indecomposable M, the generic module is {flag}")
    w = tuple(int(x) for x in q.coxeter_inverse @ np.asarray(v, dtype=np.int64))
    if any(x < 0 for x in w):
        raise NonRigidDimension(f"tau^-1 of dimension {v} is not a module (got {w})")
    return cc_by_dimension(q, w, seed, primes, jobs)
