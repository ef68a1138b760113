"""Normalized Chebyshev polynomials and the delta recursions.

F_0 = 2, F_1 = x, F_n = x F_{n-1} - F_{n-2}, so that F_n(t + 1/t) = t^n + t^-n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import OutOfRange, PreconditionFailed
from .laurent import LaurentPoly

__all__ = ["ChebPoly", "cheb_F", "cheb_eval", "x_ndelta", "tube_variable", "split_length"]


@dataclass(frozen=True)
class ChebPoly:
    """Univariate integer polynomial, coefficients from the constant term up."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z: LaurentPoly) -> LaurentPoly:
        """Horner evaluation at a Laurent polynomial."""
        acc = LaurentPoly.zero(z.variables)
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __mul__(self, other: "ChebPoly") -> "ChebPoly":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return ChebPoly(_trim(out))

    def __add__(self, other: "ChebPoly") -> "ChebPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return ChebPoly(_trim([x + y for x, y in zip(a, b)]))

    def render(self, var: str = "x") -> str:
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else var if k == 1 else f"{var}^{k}"
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts) if parts else "0"

    def __str__(self):
        return self.render()


def _trim(c: list[int]) -> tuple[int, ...]:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


@lru_cache(maxsize=None)
def cheb_F(n: int) -> ChebPoly:
    if n < 0:
        raise OutOfRange(f"F_n needs n >= 0, got {n}")
    if n == 0:
        return ChebPoly((2,))
    if n == 1:
        return ChebPoly((0, 1))
    a, b = cheb_F(n - 1).coeffs, cheb_F(n - 2).coeffs
    out = [0] + list(a)
    for i, c in enumerate(b):
        out[i] -= c
    return ChebPoly(_trim(out))


def cheb_eval(n: int, z: LaurentPoly) -> LaurentPoly:
    """F_n(z) by running the three-term recursion in Laurent arithmetic."""
    if n < 0:
        raise OutOfRange(f"F_n needs n >= 0, got {n}")
    prev, cur = LaurentPoly.constant(z.variables, 2), z
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, z * cur - prev
    return cur


def x_ndelta(source, n: int) -> LaurentPoly:
    """X_{n delta} = F_n(X_delta) + X_{(n-2) delta} with X_0 = 1 and X_delta given.

    ``source`` is either X_delta itself or a catalog entry that can produce it.
    """
    if n < 0:
        raise OutOfRange(f"n must be >= 0, got {n}")
    xd = source if isinstance(source, LaurentPoly) else source.xdelta()
    values = [LaurentPoly.one(xd.variables), xd]
    for k in range(2, n + 1):
        values.append(cheb_eval(k, xd) + values[k - 2])
    return values[n]


def split_length(L: int, r: int) -> tuple[int, int]:
    """L = n r + k with 0 <= k < r."""
    return divmod(L, r)


def tube_variable(tube, i: int, L: int, xdelta: LaurentPoly | None = None) -> LaurentPoly:
    """X_{E_i[L]} in an exceptional tube, by the difference property.

    Writes L = n r + k and uses X_{E_i[nr+k]} = X_{E_i[k]} F_n(X_delta)
    + X_{E_{i+k+1}[nr-k-2]}, recursing until the quasi-length drops below r.
    Quasi-simples are numbered 1..r in tau-order; quasi-length 0 gives 1
    and quasi-length -1 gives 0.
    """
    r = tube.rank
    if r < 2:
        raise PreconditionFailed(f"tube {tube.label} has rank {r}; the difference property needs rank >= 2")
    if L < -1:
        raise OutOfRange(f"quasi-length {L} < -1")
    xd = xdelta if xdelta is not None else tube.xdelta()
    variables = xd.variables

    def rec(j: int, length: int) -> LaurentPoly:
        if length == -1:
            return LaurentPoly.zero(variables)
        if length == 0:
            return LaurentPoly.one(variables)
        n, k = split_length(length, r)
        if n == 0:
            return tube.base_value(j, k)
        head = LaurentPoly.one(variables) if k == 0 else tube.base_value(j, k)
        return head * cheb_eval(n, xd) + rec((j + k) % r + 1, n * r - k - 2)

    return rec((i - 1) % r + 1, L)
