"""Quivers, the Euler form, exchange matrices and seed mutation.

Vertices are 0-based internally and 1-based in files and on the command
line.  The variables of a cluster are always named ``x1..xn``: inside a
seed other than the initial one, ``xi`` stands for the i-th variable of
*that* cluster.
"""

from __future__ import annotations

import json
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, NotAcyclic
from .laurent import LaurentPoly, default_variables, lp_divexact, lp_substitute

__all__ = [
    "Quiver",
    "euler_form",
    "Seed",
    "initial_seed",
    "mutate_matrix",
    "mutate_seed",
    "mutate_word",
    "express_in_cluster",
    "express_step",
    "reduced_words",
    "walk_seeds",
]


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        arrows = tuple((int(s), int(t)) for s, t in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i + 1) for i in range(self.n)))
        for s, t in arrows:
            if not (0 <= s < self.n and 0 <= t < self.n):
                raise ValueError(f"arrow {s + 1}->{t + 1} leaves the vertex range")
            if s == t:
                raise NotAcyclic(f"loop at vertex {s + 1}")
        self.topological_order  # raises on cycles

    @classmethod
    def from_one_based(cls, n: int, arrows, name: str = "") -> "Quiver":
        return cls(n, tuple((s - 1, t - 1) for s, t in arrows), name=name)

    @classmethod
    def from_json(cls, data) -> "Quiver":
        if isinstance(data, (str, Path)):
            data = json.loads(Path(data).read_text())
        return cls.from_one_based(int(data["vertices"]), data["arrows"], name=data.get("name", ""))

    def to_json(self) -> dict:
        out = {"vertices": self.n, "arrows": [[s + 1, t + 1] for s, t in self.arrows]}
        if self.name:
            out["name"] = self.name
        return out

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        indeg = [0] * self.n
        for _, t in self.arrows:
            indeg[t] += 1
        ready = [v for v in range(self.n) if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(0)
            order.append(v)
            for s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        ready.append(t)
        if len(order) != self.n:
            raise NotAcyclic("quiver has an oriented cycle")
        return tuple(order)

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for s, t in self.arrows:
            a[s, t] += 1
        return a

    @cached_property
    def euler_matrix(self) -> np.ndarray:
        """E with <d, e> = d^T E e."""
        return np.eye(self.n, dtype=np.int64) - self.adjacency

    @cached_property
    def coxeter(self) -> np.ndarray:
        """Phi with dim(tau M) = Phi dim(M) for M without projective summands."""
        return -self._euler_inverse @ self.euler_matrix.T

    @cached_property
    def coxeter_inverse(self) -> np.ndarray:
        return -self._euler_inverse.T @ self.euler_matrix

    @cached_property
    def _euler_inverse(self) -> np.ndarray:
        # E = I - A with A nilpotent
        inv = np.eye(self.n, dtype=np.int64)
        power = np.eye(self.n, dtype=np.int64)
        for _ in range(self.n):
            power = power @ self.adjacency
            inv = inv + power
        return inv

    def projective_dim(self, i: int) -> tuple[int, ...]:
        """Dimension vector of P_i: number of paths starting at i."""
        return tuple(int(x) for x in self._euler_inverse[i])

    def injective_dim(self, i: int) -> tuple[int, ...]:
        """Dimension vector of I_i: number of paths ending at i."""
        return tuple(int(x) for x in self._euler_inverse[:, i])

    def simple(self, i: int) -> tuple[int, ...]:
        return tuple(int(j == i) for j in range(self.n))

    def exchange_matrix(self) -> tuple[tuple[int, ...], ...]:
        a = self.adjacency
        b = a - a.T
        return tuple(tuple(int(x) for x in row) for row in b)

    def neighbours(self, v: int) -> set[int]:
        return {t for s, t in self.arrows if s == v} | {s for s, t in self.arrows if t == v}

    def euler_form(self, d, e) -> int:
        return euler_form(self, d, e)


def euler_form(q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    """<d, e> = sum_i d_i e_i - sum_{a: i -> j} d_i e_j."""
    if len(d) != q.n or len(e) != q.n:
        raise DimensionMismatch(f"vectors of length {len(d)}, {len(e)} for a quiver with {q.n} vertices")
    return sum(int(a) * int(b) for a, b in zip(d, e)) - sum(int(d[s]) * int(e[t]) for s, t in q.arrows)


def mutate_matrix(b: Sequence[Sequence[int]], k: int) -> tuple[tuple[int, ...], ...]:
    n = len(b)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == k or j == k:
                row.append(-b[i][j])
            else:
                row.append(b[i][j] + (abs(b[i][k]) * b[k][j] + b[i][k] * abs(b[k][j])) // 2)
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class Seed:
    """A seed reached from the initial one by ``word``.

    ``cluster[i]`` is the i-th cluster variable written in the initial
    variables; ``inverse[j]`` is the initial variable x_{j+1} written in
    this seed's cluster variables.
    """

    B: tuple[tuple[int, ...], ...]
    cluster: tuple[LaurentPoly, ...]
    inverse: tuple[LaurentPoly, ...]
    word: tuple[int, ...] = field(default=())

    @property
    def n(self) -> int:
        return len(self.B)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.cluster[0].variables if self.cluster else ()

    def same_cluster(self, other: "Seed") -> bool:
        return self.B == other.B and self.cluster == other.cluster


def initial_seed(q: Quiver | Sequence[Sequence[int]]) -> Seed:
    b = q.exchange_matrix() if isinstance(q, Quiver) else tuple(tuple(r) for r in q)
    n = len(b)
    if any(b[i][j] != -b[j][i] for i in range(n) for j in range(n)):
        raise ValueError("exchange matrix must be skew-symmetric")
    gens = LaurentPoly.gens(default_variables(n))
    return Seed(b, gens, gens, ())


def _exchange_binomial(b, k: int, variables) -> LaurentPoly:
    n = len(b)
    plus = [max(b[i][k], 0) for i in range(n)]
    minus = [max(-b[i][k], 0) for i in range(n)]
    return LaurentPoly.monomial(variables, plus) + LaurentPoly.monomial(variables, minus)


def mutate_seed(s: Seed, k: int) -> Seed:
    """Mutate at the 0-based vertex k."""
    n = s.n
    if not 0 <= k < n:
        raise IndexError(f"mutation index {k + 1} outside 1..{n}")
    b = s.B
    plus = [max(b[i][k], 0) for i in range(n)]
    minus = [max(-b[i][k], 0) for i in range(n)]
    one = LaurentPoly.one(s.variables)
    p1, p2 = one, one
    for i in range(n):
        if plus[i]:
            p1 = p1 * s.cluster[i] ** plus[i]
        if minus[i]:
            p2 = p2 * s.cluster[i] ** minus[i]
    new_var = lp_divexact(p1 + p2, s.cluster[k])
    cluster = s.cluster[:k] + (new_var,) + s.cluster[k + 1:]
    inverse = tuple(express_step(z, s, k) for z in s.inverse)
    return Seed(mutate_matrix(b, k), cluster, inverse, s.word + (k,))


def mutate_word(s: Seed, word: Sequence[int]) -> Seed:
    for k in word:
        s = mutate_seed(s, k)
    return s


def express_step(z: LaurentPoly, s: Seed, k: int) -> LaurentPoly:
    """Rewrite z, given in the cluster of s, in the cluster of mutate(s, k).

    Substitutes x_k = binomial / x_k' one power of x_k at a time; each
    negative power is divided out exactly.
    """
    binom = _exchange_binomial(s.B, k, z.variables)
    groups: dict[int, dict] = {}
    for exps, c in z.terms.items():
        a = exps[k]
        rest = exps[:k] + (0,) + exps[k + 1:]
        groups.setdefault(a, {})[rest] = c
    acc: dict = {}
    for a, terms in groups.items():
        g = LaurentPoly._raw(z.variables, terms)
        if a >= 0:
            piece = g * binom ** a if a else g
        else:
            piece = lp_divexact(g, binom ** (-a))
        for kk, c in piece.terms.items():
            kk = kk[:k] + (kk[k] - a,) + kk[k + 1:]
            acc[kk] = acc.get(kk, 0) + c
    return LaurentPoly(z.variables, acc)


def express_in_cluster(z: LaurentPoly, s: Seed) -> LaurentPoly:
    """Write z (in the initial variables) in the cluster of s.

    Substitutes the inverse expressions of the initial variables and
    divides out the resulting denominator exactly.
    """
    if not s.word:
        return z
    bindings = {}
    for name, expr in zip(z.variables, s.inverse):
        num, den = expr.split_monomial_denominator()
        bindings[name] = (num, den)
    num, den = lp_substitute(z, bindings)
    return lp_divexact(num, den)


def reduced_words(n: int, depth: int) -> Iterator[tuple[int, ...]]:
    """All words of length <= depth without two equal adjacent letters, in DFS order.

    Words with a repeated adjacent letter revisit a shorter word's seed,
    since mutation is an involution, so they add no new cluster.
    """

    def rec(prefix):
        yield prefix
        if len(prefix) == depth:
            return
        for k in range(n):
            if prefix and prefix[-1] == k:
                continue
            yield from rec(prefix + (k,))

    yield from rec(())


def walk_seeds(start: Seed, depth: int) -> Iterator[Seed]:
    """Depth-first walk over seeds reached by reduced words of length <= depth."""

    def rec(s):
        yield s
        if len(s.word) - len(start.word) == depth:
            return
        for k in range(s.n):
            if s.word and s.word[-1] == k:
                continue
            yield from rec(mutate_seed(s, k))

    yield from rec(start)
