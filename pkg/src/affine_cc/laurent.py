"""Sparse integer Laurent polynomials in a fixed, ordered list of variables.

Exponent vectors are tuples of ints (negative entries allowed); coefficients
are Python ints, so nothing overflows.  Terms are ordered graded-lex:
higher total degree first, ties broken lexicographically (larger exponent
of the first variable first).
"""

from __future__ import annotations

import heapq
import re
from collections.abc import Mapping, Sequence
from operator import add, sub

from .errors import NotDivisible, UnboundVariable, VariableMismatch

__all__ = [
    "LaurentPoly",
    "lp_arith",
    "lp_divexact",
    "lp_substitute",
    "lp_is_nonneg",
    "parse",
    "default_variables",
]

Exps = tuple


def default_variables(n: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, n + 1))


def _order_key(exps: Exps):
    return (sum(exps), exps)


class LaurentPoly:
    """An immutable element of Z[x_1^{+-1}, ..., x_n^{+-1}]."""

    __slots__ = ("variables", "terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exps, int] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        if terms:
            for exps, coeff in terms.items():
                exps = tuple(int(x) for x in exps)
                if len(exps) != n:
                    raise VariableMismatch(f"exponent vector {exps} has length != {n}")
                if coeff:
                    clean[exps] = int(coeff)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "LaurentPoly":
        # terms already canonical; skips validation on hot paths
        obj = cls.__new__(cls)
        obj.variables = variables
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, variables):
        return cls(variables)

    @classmethod
    def constant(cls, variables, c: int):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def one(cls, variables):
        return cls.constant(variables, 1)

    @classmethod
    def monomial(cls, variables, exps, coeff: int = 1):
        return cls(variables, {tuple(exps): coeff})

    @classmethod
    def gen(cls, variables, name_or_index):
        variables = tuple(variables)
        i = name_or_index if isinstance(name_or_index, int) else variables.index(name_or_index)
        exps = [0] * len(variables)
        exps[i] = 1
        return cls(variables, {tuple(exps): 1})

    @classmethod
    def gens(cls, variables):
        return tuple(cls.gen(variables, i) for i in range(len(tuple(variables))))

    # basic queries
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def sorted_terms(self) -> list[tuple[Exps, int]]:
        return sorted(self.terms.items(), key=lambda t: _order_key(t[0]), reverse=True)

    def leading_term(self) -> tuple[Exps, int]:
        exps = max(self.terms, key=_order_key)
        return exps, self.terms[exps]

    def min_exponents(self) -> Exps:
        return tuple(min(col) for col in zip(*self.terms)) if self.terms else (0,) * self.nvars

    def max_exponents(self) -> Exps:
        return tuple(max(col) for col in zip(*self.terms)) if self.terms else (0,) * self.nvars

    def coefficient(self, exps) -> int:
        return self.terms.get(tuple(exps), 0)

    def split_monomial_denominator(self) -> tuple["LaurentPoly", Exps]:
        """Return (numerator polynomial, exponent vector d) with self = numerator / x^d."""
        low = self.min_exponents()
        den = tuple(max(0, -x) for x in low)
        return self.shift(den), den

    # arithmetic
    def _check(self, other: "LaurentPoly"):
        if self.variables != other.variables:
            raise VariableMismatch(f"{self.variables} vs {other.variables}")

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, 0) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return LaurentPoly._raw(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.variables, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero(self.variables)
            return LaurentPoly._raw(self.variables, {k: c * other for k, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        get = out.get
        for eb, cb in b.items():
            for ea, ca in a.items():
                k = tuple(map(add, ea, eb))
                out[k] = get(k, 0) + ca * cb
        return LaurentPoly._raw(self.variables, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise NotDivisible("negative power of a non-monomial")
            (exps, c), = self.terms.items()
            if c not in (1, -1):
                raise NotDivisible("negative power of a monomial with coefficient != +-1")
            return LaurentPoly.monomial(self.variables, [-x * -n for x in exps], c ** (-n))
        result = LaurentPoly.one(self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, exps) -> "LaurentPoly":
        """Multiply by the monomial x^exps."""
        exps = tuple(exps)
        return LaurentPoly._raw(self.variables, {tuple(map(add, k, exps)): c for k, c in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, int):
            return self == LaurentPoly.constant(self.variables, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self.terms.items())))
        return self._hash

    def rename(self, variables) -> "LaurentPoly":
        variables = tuple(variables)
        if len(variables) != self.nvars:
            raise VariableMismatch("rename must keep the variable count")
        return LaurentPoly._raw(variables, self.terms)

    # rendering
    def render(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            factors = []
            for name, x in zip(self.variables, exps):
                if x == 1:
                    factors.append(name)
                elif x:
                    factors.append(f"{name}^{x}")
            mag = abs(coeff)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            sign = "-" if coeff < 0 else "+"
            if not pieces:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f"{sign} {body}")
        return " ".join(pieces)

    def render_fraction(self) -> str:
        """Render as (polynomial)/(monomial), the usual way cluster variables are written."""
        num, den = self.split_monomial_denominator()
        if not any(den):
            return num.render()
        factors = [name if x == 1 else f"{name}^{x}" for name, x in zip(self.variables, den) if x]
        top = num.render()
        if len(num) > 1:
            top = f"({top})"
        bottom = "*".join(factors)
        if len(factors) > 1:
            bottom = f"({bottom})"
        return f"{top}/{bottom}"

    def __str__(self):
        return self.render()

    def __repr__(self):
        return f"LaurentPoly({self.render()!r})"

    def to_json(self) -> list[dict]:
        return [{"coeff": c, "exps": list(e)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, variables, data) -> "LaurentPoly":
        out: dict = {}
        for item in data:
            k = tuple(item["exps"])
            out[k] = out.get(k, 0) + int(item["coeff"])
        return cls(variables, out)


_TERM_SPLIT = re.compile(r"(?<!\^)(?=[+-])")
_FACTOR = re.compile(r"^([A-Za-z_][\w']*)(?:\^(-?\d+))?$")


def parse(text: str, variables: Sequence[str]) -> LaurentPoly:
    """Inverse of :meth:`LaurentPoly.render` and :meth:`LaurentPoly.render_fraction`."""
    variables = tuple(variables)
    index = {v: i for i, v in enumerate(variables)}
    s = text.replace(" ", "")
    if s in ("", "0"):
        return LaurentPoly.zero(variables)
    if "/" in s:
        num, den = s.rsplit("/", 1)
        den = parse(den[1:-1] if den.startswith("(") and den.endswith(")") else den, variables)
        if not den.is_monomial() or den.leading_term()[1] != 1:
            raise ValueError(f"denominator of {text!r} must be a monomial")
        num = parse(num[1:-1] if num.startswith("(") and num.endswith(")") else num, variables)
        return num.shift(tuple(-x for x in den.leading_term()[0]))
    out: dict = {}
    for chunk in _TERM_SPLIT.split(s):
        if not chunk:
            continue
        sign = -1 if chunk[0] == "-" else 1
        chunk = chunk.lstrip("+-")
        coeff = 1
        exps = [0] * len(variables)
        for factor in chunk.split("*"):
            if factor.isdigit():
                coeff *= int(factor)
                continue
            m = _FACTOR.match(factor)
            if not m or m.group(1) not in index:
                raise ValueError(f"cannot parse factor {factor!r} in {text!r}")
            exps[index[m.group(1)]] += int(m.group(2) or 1)
        k = tuple(exps)
        out[k] = out.get(k, 0) + sign * coeff
    return LaurentPoly(variables, out)


def lp_arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    a._check(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def lp_divexact(num: LaurentPoly, den: LaurentPoly) -> LaurentPoly:
    """Return q with q * den == num, raising NotDivisible otherwise.

    Leading-term elimination in graded-lex order.  Every quotient exponent
    must lie in the box [min(num) - min(den), max(num) - max(den)], which
    bounds the loop even when the input is not divisible.
    """
    num._check(den)
    if not den.terms:
        raise ZeroDivisionError("division by the zero Laurent polynomial")
    variables = num.variables
    if not num.terms:
        return LaurentPoly.zero(variables)
    if den.is_monomial():
        (de, dc), = den.terms.items()
        out = {}
        for k, c in num.terms.items():
            q, r = divmod(c, dc)
            if r:
                raise NotDivisible(f"coefficient {c} not divisible by {dc}")
            out[tuple(map(sub, k, de))] = q
        return LaurentPoly._raw(variables, out)

    lo = tuple(map(sub, num.min_exponents(), den.min_exponents()))
    hi = tuple(map(sub, num.max_exponents(), den.max_exponents()))
    if any(a > b for a, b in zip(lo, hi)):
        raise NotDivisible("Newton box of the quotient is empty")
    lead_e, lead_c = den.leading_term()
    den_items = list(den.terms.items())

    rem = dict(num.terms)
    heap = [(-sum(k), tuple(-x for x in k), k) for k in rem]
    heapq.heapify(heap)
    quotient: dict = {}
    while heap:
        _, _, k = heapq.heappop(heap)
        c = rem.get(k)
        if not c:
            continue
        qe = tuple(map(sub, k, lead_e))
        if any(x < a or x > b for x, a, b in zip(qe, lo, hi)):
            raise NotDivisible(f"quotient term {qe} outside Newton box")
        qc, r = divmod(c, lead_c)
        if r:
            raise NotDivisible(f"coefficient {c} not divisible by leading coefficient {lead_c}")
        quotient[qe] = quotient.get(qe, 0) + qc
        for de, dc in den_items:
            kk = tuple(map(add, qe, de))
            v = rem.get(kk, 0) - qc * dc
            if v:
                if kk not in rem:
                    heapq.heappush(heap, (-sum(kk), tuple(-x for x in kk), kk))
                rem[kk] = v
            else:
                rem.pop(kk, None)
    return LaurentPoly._raw(variables, {k: c for k, c in quotient.items() if c})


def lp_substitute(
    p: LaurentPoly,
    bindings: Mapping[str, tuple[LaurentPoly, Sequence[int]]],
) -> tuple[LaurentPoly, LaurentPoly]:
    """Substitute ``var -> num / x^den`` for every variable of ``p``.

    Returns ``(N, D)`` with the substituted value equal to N / D before any
    reduction.  ``D`` collects the non-monomial numerators raised to the
    deepest negative power they occur with.
    """
    missing = [v for v in p.variables if v not in bindings]
    if missing:
        raise UnboundVariable(f"unbound variables: {missing}")
    targets = None
    values = []
    for v in p.variables:
        b_num, b_den = bindings[v]
        if targets is None:
            targets = b_num.variables
        elif b_num.variables != targets:
            raise VariableMismatch("bindings must share one target variable set")
        values.append(b_num.shift([-x for x in b_den]) if b_den is not None else b_num)
    if targets is None:  # zero variables
        return p, LaurentPoly.one(())

    n = p.nvars
    unit = [v.is_monomial() and abs(next(iter(v.terms.values()))) == 1 for v in values]
    deficit = [0] * n
    if p.terms:
        low = p.min_exponents()
        deficit = [0 if unit[i] else max(0, -low[i]) for i in range(n)]

    power_cache: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in power_cache:
            power_cache[key] = values[i] ** k
        return power_cache[key]

    total = LaurentPoly.zero(targets)
    acc: dict = {}
    for exps, coeff in p.terms.items():
        term = LaurentPoly.constant(targets, coeff)
        for i, a in enumerate(exps):
            k = a + deficit[i]
            if k:
                term = term * power(i, k)
        for kk, c in term.terms.items():
            acc[kk] = acc.get(kk, 0) + c
    total = LaurentPoly(targets, acc)
    den = LaurentPoly.one(targets)
    for i, m in enumerate(deficit):
        if m:
            den = den * power(i, m)
    return total, den


def lp_is_nonneg(p: LaurentPoly) -> tuple[bool, tuple[int, Exps] | None]:
    """True iff every stored coefficient is positive; otherwise one offending term."""
    for exps, coeff in p.sorted_terms():
        if coeff < 0:
            return False, (coeff, exps)
    return True, None
