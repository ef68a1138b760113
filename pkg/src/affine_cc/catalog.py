"""Built-in affine quivers: the Kronecker quiver and D~4 with four arrows into vertex 1.

Each entry carries delta, the exceptional and homogeneous tubes, the named
preprojective/preinjective families and matrix presentations for small
members.  Family presentations are generic representations whose seeds
are frozen here; the quasi-simples of exceptional tubes are explicit
0/1 patterns, and longer tube modules are built as non-split extensions.
"""

from __future__ import annotations

import json
import re
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from .ccmap import cc_module
from .errors import NoPresentation, NotAffine, OutOfRange, ParityViolation
from .laurent import LaurentPoly
from .quiver import Quiver, euler_form
from .rep import ExtensionFamily, GenericFamily, PatternFamily, RepFamily, generic_rep

__all__ = [
    "Family",
    "TubeDescriptor",
    "CatalogEntry",
    "load_quiver",
    "dim_family",
    "presentation",
    "compatible",
    "KRONECKER",
    "D4TILDE",
]

# frozen seeds for the generic presentations; every one passes the rigidity flags
FAMILY_SEED = 0
MAX_FAMILY_N = 7
MAX_TUBE_LENGTH = 6
MAX_HOMOGENEOUS_N = 4


@dataclass(frozen=True)
class Family:
    name: str
    formula: Callable[[int], tuple[int, ...]]
    kind: str  # "preprojective" or "preinjective"
    parity: str | None = None  # "odd", "even" or None
    min_n: int = 1

    def check(self, n: int):
        if self.parity == "odd" and n % 2 == 0:
            raise ParityViolation(f"{self.name}(n) needs odd n, got {n}")
        if self.parity == "even" and n % 2:
            raise ParityViolation(f"{self.name}(n) needs even n, got {n}")
        if n < self.min_n:
            raise OutOfRange(f"{self.name}(n) needs n >= {self.min_n}, got {n}")

    def __call__(self, n: int) -> tuple[int, ...]:
        self.check(n)
        return self.formula(n)


@dataclass(eq=False)
class TubeDescriptor:
    """A tube: label, rank and quasi-simples in tau-order (tau E_i = E_{i-1}).

    Quasi-simples are numbered 1..rank.  ``quasi_simples`` holds their
    presentations; E_i[L] is the non-split extension of E_{i+1}[L-1] by E_i.
    """

    label: str
    rank: int
    quasi_simples: tuple[RepFamily, ...]
    entry: "CatalogEntry" = field(repr=False)
    names: tuple[str, ...] = ()

    @property
    def dims(self) -> tuple[tuple[int, ...], ...]:
        return tuple(f.dims for f in self.quasi_simples)

    def _index(self, i: int) -> int:
        return (i - 1) % self.rank

    def presentation(self, i: int, length: int) -> RepFamily | None:
        """E_i[length]; None for length 0."""
        if length < 0:
            raise OutOfRange(f"quasi-length {length} < 0")
        if length == 0:
            return None
        if length > MAX_TUBE_LENGTH:
            raise NoPresentation(f"tube {self.label}: presentations stop at quasi-length {MAX_TUBE_LENGTH}")
        return self._presentation(self._index(i), length)

    def _presentation(self, j: int, length: int) -> RepFamily:
        cache = self.__dict__.setdefault("_cache", {})
        if (j, length) not in cache:
            base = self.quasi_simples[j]
            if length == 1:
                fam = base
            else:
                rest = self._presentation((j + 1) % self.rank, length - 1)
                fam = ExtensionFamily(base, rest, name=f"{self.name(j + 1)}[{length}]")
            cache[(j, length)] = fam
        return cache[(j, length)]

    def name(self, i: int) -> str:
        j = self._index(i)
        return self.names[j] if self.names else f"E{j + 1}@{self.label}"

    def dim(self, i: int, length: int) -> tuple[int, ...]:
        d = [0] * self.entry.quiver.n
        for step in range(length):
            for v, x in enumerate(self.quasi_simples[self._index(i + step)].dims):
                d[v] += x
        return tuple(d)

    def base_value(self, i: int, length: int) -> LaurentPoly:
        """X_{E_i[length]} from the presentation (quasi-length 0 gives 1)."""
        fam = self.presentation(i, length)
        if fam is None:
            return LaurentPoly.one(self.entry.variables)
        return cc_module(fam)

    def xdelta(self) -> LaurentPoly:
        return self.entry.xdelta()

    def to_json(self) -> dict:
        return {"label": self.label, "rank": self.rank, "quasi_simples": [list(d) for d in self.dims], "names": list(self.names)}


class CatalogEntry:
    def __init__(self, name: str, quiver: Quiver, delta, families: Sequence[Family] = (), builtin: bool = True):
        self.name = name
        self.quiver = quiver
        self.delta = tuple(int(x) for x in delta)
        self.families = {f.name: f for f in families}
        self.builtin = builtin
        self.tubes: list[TubeDescriptor] = []
        self.homogeneous_lambda: int | None = None
        self._homogeneous: Callable[[int], RepFamily] | None = None
        self.quasi_simple_names: dict[str, tuple[TubeDescriptor, int]] = {}

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.quiver.n))

    def family(self, name: str) -> Family:
        key = normalize_family(name)
        if key not in self.families:
            raise OutOfRange(f"{self.name} has no family {name!r}; known: {', '.join(self.families)}")
        return self.families[key]

    def dim_family(self, family: str, n: int) -> tuple[int, ...]:
        return self.family(family)(n)

    def presentation(self, family: str, n: int) -> RepFamily:
        fam = self.family(family)
        d = fam(n)
        if n > MAX_FAMILY_N:
            raise NoPresentation(f"{fam.name}({n}): presentations ship for n <= {MAX_FAMILY_N}")
        return GenericFamily(self.quiver, d, seed=FAMILY_SEED, name=f"{fam.name}({n})")

    def module(self, d: Sequence[int], seed: int = FAMILY_SEED) -> RepFamily:
        """The generic module of dimension d (rigid modules are determined by d)."""
        return generic_rep(self.quiver, d, seed)[0]

    def homogeneous(self, n: int) -> RepFamily:
        """The quasi-length n module of a homogeneous tube with the pinned parameter."""
        if self._homogeneous is None:
            raise NoPresentation(f"{self.name}: no homogeneous presentation")
        if n < 1 or n > MAX_HOMOGENEOUS_N:
            raise NoPresentation(f"homogeneous presentations ship for 1 <= n <= {MAX_HOMOGENEOUS_N}")
        return self._homogeneous(n)

    def xdelta(self) -> LaurentPoly:
        return cc_module(self.homogeneous(1))

    def tube(self, label: str) -> TubeDescriptor:
        for t in self.tubes:
            if t.label == label or (label in {"inf", "infinity", "oo"} and t.label == "∞"):
                return t
        raise OutOfRange(f"{self.name} has no tube {label!r}; known: {', '.join(t.label for t in self.tubes)}")

    def quasi_simple(self, name: str) -> RepFamily:
        tube, i = self.quasi_simple_names[name]
        return tube.presentation(i, 1)

    @cached_property
    def all_tubes(self) -> list[TubeDescriptor]:
        out = list(self.tubes)
        if self._homogeneous is not None:
            out.append(
                TubeDescriptor(f"homogeneous({self.homogeneous_lambda})", 1, (self.homogeneous(1),), self, ("M(delta)",))
            )
        return out

    def to_json(self) -> dict:
        fams = {}
        for name, f in self.families.items():
            ns = [n for n in range(f.min_n, MAX_FAMILY_N + 1) if f.parity is None or (n % 2 == 1) == (f.parity == "odd")]
            fams[name] = {"kind": f.kind, "parity": f.parity, "min_n": f.min_n, "dims": {str(n): list(f(n)) for n in ns}}
        return {
            "name": self.name,
            "quiver": self.quiver.to_json(),
            "delta": list(self.delta),
            "tubes": [t.to_json() for t in self.all_tubes],
            "families": fams,
            "presentation_seed": FAMILY_SEED,
            "homogeneous_parameter": self.homogeneous_lambda,
        }


def normalize_family(name: str) -> str:
    """Accept M1, M'1, M1', Mp1, M′1 and similar spellings."""
    s = name.strip().replace("′", "'")
    m = re.fullmatch(r"([A-Za-z])('|p)?(\d*)('|p)?", s)
    if not m:
        return s
    letter, pre, idx, post = m.groups()
    prime = "'" if (pre or post) else ""
    return f"{letter.upper()}{prime}{idx}"


def _thin(q: Quiver, support: Sequence[int], name: str) -> PatternFamily:
    d = tuple(int(v in support) for v in range(q.n))
    mats = [[[1]] if d[s] and d[t] else [[0] * d[s] for _ in range(d[t])] for s, t in q.arrows]
    return PatternFamily(q, d, mats, name=name)


def _jordan(n: int, lam: int) -> list[list[int]]:
    return [[lam if i == j else 1 if j == i + 1 else 0 for j in range(n)] for i in range(n)]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _kronecker() -> CatalogEntry:
    q = Quiver.from_one_based(2, [(1, 2), (1, 2)], name="kronecker")
    fams = [
        Family("P", lambda n: (n, n + 1), "preprojective", min_n=0),
        Family("I", lambda n: (n + 1, n), "preinjective", min_n=0),
    ]
    entry = CatalogEntry("kronecker", q, (1, 1), fams)
    lam = 1
    entry.homogeneous_lambda = lam
    entry._homogeneous = lambda n: PatternFamily(q, (n, n), [_identity(n), _jordan(n, lam)], name=f"M({n}delta)")
    return entry


def _d4tilde() -> CatalogEntry:
    q = Quiver.from_one_based(5, [(2, 1), (3, 1), (4, 1), (5, 1)], name="d4tilde")

    def leaf(i, big, small, centre):
        return lambda n: (centre(n),) + tuple(big(n) if k == i else small(n) for k in range(1, 5))

    fams = [Family("C", lambda n: (2 * n - 1,) + (n - 1,) * 4, "preprojective")]
    fams += [Family(f"M{i}", leaf(i, lambda n: (n + 1) // 2, lambda n: (n - 1) // 2, lambda n: n), "preprojective", "odd") for i in range(1, 5)]
    fams += [Family(f"N{i}", leaf(i, lambda n: (n - 2) // 2, lambda n: n // 2, lambda n: n), "preprojective", "even", 2) for i in range(1, 5)]
    fams += [Family("C'", lambda n: (2 * n - 1,) + (n,) * 4, "preinjective")]
    fams += [Family(f"M'{i}", leaf(i, lambda n: (n + 1) // 2, lambda n: (n - 1) // 2, lambda n: n - 1), "preinjective", "odd") for i in range(1, 5)]
    fams += [Family(f"N'{i}", leaf(i, lambda n: (n - 2) // 2, lambda n: n // 2, lambda n: n - 1), "preinjective", "even", 2) for i in range(1, 5)]
    entry = CatalogEntry("d4tilde", q, (2, 1, 1, 1, 1), fams)

    supports = {1: (0, 1, 2), 2: (0, 3, 4), 3: (0, 1, 3), 4: (0, 2, 4), 5: (0, 2, 3), 6: (0, 1, 4)}
    E = {k: _thin(q, s, f"E{k}") for k, s in supports.items()}
    for label, (a, b) in (("1", (1, 2)), ("∞", (3, 4)), ("0", (5, 6))):
        tube = TubeDescriptor(label, 2, (E[a], E[b]), entry, (f"E{a}", f"E{b}"))
        entry.tubes.append(tube)
        entry.quasi_simple_names[f"E{a}"] = (tube, 1)
        entry.quasi_simple_names[f"E{b}"] = (tube, 2)

    # the four leaf images are the lines 0, infinity, 1 and lambda of P^1;
    # lambda = 2 stays off {0, 1, infinity} for every p >= 3
    lam = 2
    entry.homogeneous_lambda = lam

    def homogeneous(n):
        zero = [[0] * n for _ in range(n)]
        one = _identity(n)
        mats = [one + zero, zero + one, one + one, one + _jordan(n, lam)]
        return PatternFamily(q, (2 * n, n, n, n, n), mats, name=f"M({n}delta)", min_prime=3)

    entry._homogeneous = homogeneous
    return entry


KRONECKER = _kronecker()
D4TILDE = _d4tilde()
_BUILTIN = {"kronecker": KRONECKER, "d4tilde": D4TILDE}
_ALIASES = {"kronecker": "kronecker", "kron": "kronecker", "a1tilde": "kronecker", "d4tilde": "d4tilde", "d4~": "d4tilde", "d4": "d4tilde"}


def _radical(q: Quiver) -> tuple[int, ...]:
    """Positive generator of the radical of the symmetrised Euler form, or NotAffine."""
    E = q.euler_matrix
    sym = E + E.T
    if np.linalg.eigvalsh(sym.astype(float)).min() < -1e-9:
        raise NotAffine(f"{q.name or 'quiver'}: the Euler form is indefinite")
    rows = [[Fraction(int(x)) for x in r] for r in sym]
    n = q.n
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, n) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise NotAffine(f"{q.name or 'quiver'}: radical of dimension {len(free)}, expected 1")
    f = free[0]
    vec = [Fraction(0)] * n
    vec[f] = Fraction(1)
    for i, c in enumerate(pivots):
        vec[c] = -rows[i][f]
    den = 1
    for x in vec:
        den = den * x.denominator // np.gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    if all(x <= 0 for x in ints):
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise NotAffine(f"{q.name or 'quiver'}: radical vector {ints} is not sincere and positive")
    g = 0
    for x in ints:
        g = int(np.gcd(g, x))
    return tuple(x // g for x in ints)


def load_quiver(name_or_path) -> CatalogEntry:
    """A built-in entry by name, or an affine quiver file with delta computed from the Euler form.

    Files may list exceptional tubes as {"tubes": [{"label": ..., "quasi_simples": [[dims], ...]}]};
    their quasi-simples are then presented generically.
    """
    if isinstance(name_or_path, CatalogEntry):
        return name_or_path
    key = str(name_or_path).strip().lower()
    if key in _ALIASES:
        return _BUILTIN[_ALIASES[key]]
    path = Path(name_or_path)
    if not path.exists():
        raise OutOfRange(f"unknown quiver {name_or_path!r}: not a built-in name or a file")
    data = json.loads(path.read_text())
    q = Quiver.from_json(data)
    delta = _radical(q)
    if euler_form(q, delta, delta) != 0:
        raise NotAffine("delta is not isotropic")
    entry = CatalogEntry(data.get("name", path.stem), q, delta, builtin=False)
    for k, t in enumerate(data.get("tubes", [])):
        qs = tuple(generic_rep(q, d, FAMILY_SEED, name=f"E{k + 1}.{j + 1}")[0] for j, d in enumerate(t["quasi_simples"]))
        entry.tubes.append(TubeDescriptor(str(t.get("label", k)), len(qs), qs, entry, tuple(t.get("names", ()))))
    return entry


def dim_family(entry, family: str, n: int) -> tuple[int, ...]:
    return load_quiver(entry).dim_family(family, n)


def presentation(entry, family: str, n: int, prime: int | None = None):
    """A family member as a RepFamily, or as an FqRep over ``prime`` when given."""
    fam = load_quiver(entry).presentation(family, n)
    return fam.at(prime) if prime is not None else fam


def compatible(entry, summands: Sequence[Sequence[int]], tube: TubeDescriptor) -> bool:
    """True when no summand of the tilting object (given by dimension vectors) is a quasi-simple of the tube."""
    quasi = {tuple(d) for d in tube.dims}
    return not any(tuple(int(x) for x in s) in quasi for s in summands)
