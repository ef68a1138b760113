"""Quiver representations over prime fields.

A :class:`FqRep` is one representation over F_p.  A :class:`RepFamily` is
a rule producing "the same" representation over every admissible prime;
Euler characteristics of quiver Grassmannians are read off by counting
points over several primes and interpolating the counting polynomial at 1.
"""

from __future__ import annotations

import json
import random
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from math import prod
from pathlib import Path

import numpy as np

from . import fp
from .errors import (
    DimensionMismatch,
    InsufficientPrimes,
    NonPolynomialCount,
    NoPresentation,
    OutOfRange,
)
from .quiver import Quiver, euler_form

__all__ = [
    "FqRep",
    "RepFamily",
    "PatternFamily",
    "GenericFamily",
    "ExtensionFamily",
    "DirectSumFamily",
    "GENERIC",
    "REFERENCE_PRIME",
    "hom_dim",
    "ext1_dim",
    "ext1_dim_cokernel",
    "ext1_cluster_dim",
    "count_subreps",
    "count_subreps_bruteforce",
    "counting_polynomial",
    "euler_char",
    "euler_chars",
    "degree_bound",
    "generic_rep",
    "nonsplit_extension",
    "load_module",
]

GENERIC = "generic"
REFERENCE_PRIME = 10007


@dataclass(frozen=True, eq=False)
class FqRep:
    quiver: Quiver
    p: int
    dims: tuple[int, ...]
    mats: tuple  # per arrow: d_target rows of d_source entries, reduced mod p

    def __post_init__(self):
        dims = tuple(int(x) for x in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) != self.quiver.n:
            raise DimensionMismatch("dimension vector length differs from the vertex count")
        if len(self.mats) != len(self.quiver.arrows):
            raise DimensionMismatch("one matrix per arrow required")
        mats = []
        for (s, t), m in zip(self.quiver.arrows, self.mats):
            m = np.zeros((dims[t], dims[s]), dtype=np.int64) if m is None else np.asarray(m, dtype=np.int64)
            if dims[t] * dims[s] and m.shape != (dims[t], dims[s]):
                raise DimensionMismatch(f"arrow {s + 1}->{t + 1}: matrix {m.shape}, expected {(dims[t], dims[s])}")
            m = m.reshape(dims[t], dims[s]) % self.p
            mats.append(tuple(tuple(int(x) for x in row) for row in m))
        object.__setattr__(self, "mats", tuple(mats))

    def matrix(self, a: int) -> np.ndarray:
        s, t = self.quiver.arrows[a]
        return np.array(self.mats[a], dtype=np.int64).reshape(self.dims[t], self.dims[s])

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def __eq__(self, other):
        return (
            isinstance(other, FqRep)
            and self.quiver == other.quiver
            and self.p == other.p
            and self.dims == other.dims
            and self.mats == other.mats
        )

    def __hash__(self):
        return hash((self.quiver, self.p, self.dims, self.mats))

    def direct_sum(self, other: "FqRep") -> "FqRep":
        _same_setting(self, other)
        mats = []
        for a in range(len(self.quiver.arrows)):
            x, y = self.matrix(a), other.matrix(a)
            z = np.zeros((x.shape[0] + y.shape[0], x.shape[1] + y.shape[1]), dtype=np.int64)
            z[: x.shape[0], : x.shape[1]] = x
            z[x.shape[0]:, x.shape[1]:] = y
            mats.append(z)
        return FqRep(self.quiver, self.p, tuple(a + b for a, b in zip(self.dims, other.dims)), tuple(mats))


def _same_setting(m: FqRep, n: FqRep):
    if m.quiver != n.quiver:
        raise DimensionMismatch("representations of different quivers")
    if m.p != n.p:
        raise DimensionMismatch(f"representations over F_{m.p} and F_{n.p}")


def _hom_system(m: FqRep, n: FqRep) -> tuple[np.ndarray, int]:
    """Matrix of phi -> (N_a phi_s - phi_t M_a)_a and the number of unknowns."""
    q = m.quiver
    offsets, total = [], 0
    for v in range(q.n):
        offsets.append(total)
        total += n.dims[v] * m.dims[v]
    blocks = []
    for a, (s, t) in enumerate(q.arrows):
        rows = n.dims[t] * m.dims[s]
        if rows == 0:
            continue
        block = np.zeros((rows, total), dtype=np.int64)
        if n.dims[s] * m.dims[s]:
            block[:, offsets[s]:offsets[s] + n.dims[s] * m.dims[s]] += np.kron(n.matrix(a), np.eye(m.dims[s], dtype=np.int64))
        if n.dims[t] * m.dims[t]:
            block[:, offsets[t]:offsets[t] + n.dims[t] * m.dims[t]] -= np.kron(np.eye(n.dims[t], dtype=np.int64), m.matrix(a).T)
        blocks.append(block)
    if not blocks:
        return np.zeros((0, total), dtype=np.int64), total
    return np.vstack(blocks), total


def hom_dim(m: FqRep, n: FqRep) -> int:
    """dim_F Hom(m, n): solutions of N_a phi_s = phi_t M_a for every arrow a."""
    _same_setting(m, n)
    system, unknowns = _hom_system(m, n)
    if unknowns == 0:
        return 0
    if system.shape[0] == 0:
        return unknowns
    return unknowns - fp.rank_np(system, m.p)


def ext1_dim(m: FqRep, n: FqRep) -> int:
    """dim Ext^1(m, n) = dim Hom(m, n) - <dim m, dim n>."""
    return hom_dim(m, n) - euler_form(m.quiver, m.dims, n.dims)


def ext1_dim_cokernel(m: FqRep, n: FqRep) -> int:
    """Ext^1(m, n) as the cokernel of the same map (Ringel's standard resolution)."""
    _same_setting(m, n)
    system, unknowns = _hom_system(m, n)
    if system.shape[0] == 0:
        return 0
    rank = fp.rank_np(system, m.p) if unknowns else 0
    return system.shape[0] - rank


def nonsplit_extension(sub: FqRep, quot: FqRep) -> FqRep:
    """A representation E with 0 -> sub -> E -> quot -> 0 non-split.

    The cocycle is the first coordinate vector of Hom(quot_s, sub_t)_a that
    is not a coboundary, so the choice is deterministic.
    """
    _same_setting(sub, quot)
    q, p = sub.quiver, sub.p
    # coboundaries: phi_v: quot_v -> sub_v  |->  (sub_a phi_s - phi_t quot_a)_a
    coords, total = [], 0
    for a, (s, t) in enumerate(q.arrows):
        coords.append(total)
        total += sub.dims[t] * quot.dims[s]
    unknown_off, nunk = [], 0
    for v in range(q.n):
        unknown_off.append(nunk)
        nunk += sub.dims[v] * quot.dims[v]
    delta = np.zeros((total, nunk), dtype=np.int64)
    for a, (s, t) in enumerate(q.arrows):
        r0, nr = coords[a], sub.dims[t] * quot.dims[s]
        if nr == 0:
            continue
        if sub.dims[s] * quot.dims[s]:
            delta[r0:r0 + nr, unknown_off[s]:unknown_off[s] + sub.dims[s] * quot.dims[s]] += np.kron(sub.matrix(a), np.eye(quot.dims[s], dtype=np.int64))
        if sub.dims[t] * quot.dims[t]:
            delta[r0:r0 + nr, unknown_off[t]:unknown_off[t] + sub.dims[t] * quot.dims[t]] -= np.kron(np.eye(sub.dims[t], dtype=np.int64), quot.matrix(a).T)
    base = fp.rank_np(delta.T, p) if nunk and total else 0
    beta = None
    for i in range(total):
        probe = np.zeros((1, total), dtype=np.int64)
        probe[0, i] = 1
        stacked = np.vstack([delta.T, probe]) if nunk else probe
        if fp.rank_np(stacked, p) > base:
            beta = i
            break
    if beta is None:
        raise NoPresentation("Ext^1(quot, sub) vanishes; no non-split extension")
    dims = tuple(a + b for a, b in zip(sub.dims, quot.dims))
    mats = []
    for a, (s, t) in enumerate(q.arrows):
        z = np.zeros((dims[t], dims[s]), dtype=np.int64)
        z[: sub.dims[t], : sub.dims[s]] = sub.matrix(a)
        z[sub.dims[t]:, sub.dims[s]:] = quot.matrix(a)
        r0, nr = coords[a], sub.dims[t] * quot.dims[s]
        if coords[a] <= beta < r0 + nr:
            k = beta - r0
            z[k // quot.dims[s], sub.dims[s] + k % quot.dims[s]] = 1
        mats.append(z)
    return FqRep(q, p, dims, tuple(mats))


# ----------------------------------------------------------------------------
# families


class RepFamily:
    """A representation given over every admissible prime.

    Subclasses implement ``_build(p)``.  A prime is admissible when the
    reduction there has the same endomorphism and self-extension dimensions
    as over the reference prime; this rejects the few primes where the
    integer pattern degenerates.
    """

    quiver: Quiver
    dims: tuple[int, ...]
    name: str
    min_prime: int = 2

    def _build(self, p: int) -> FqRep:
        raise NotImplementedError

    @property
    def key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, RepFamily) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def at(self, p: int) -> FqRep:
        cache = self.__dict__.setdefault("_reps", {})
        if p not in cache:
            cache[p] = self._build(p)
        return cache[p]

    def flags_at(self, p: int) -> tuple[int, int]:
        rep = self.at(p)
        return hom_dim(rep, rep), ext1_dim(rep, rep)

    @cached_property
    def reference_flags(self) -> tuple[int, int]:
        """(dim End, dim Ext^1(M, M)) over the reference prime."""
        return self.flags_at(REFERENCE_PRIME)

    def admissible(self, p: int) -> bool:
        if p < self.min_prime:
            return False
        try:
            return self.flags_at(p) == self.reference_flags
        except NoPresentation:
            return False

    @property
    def end_dim(self) -> int:
        return self.reference_flags[0]

    @property
    def self_ext(self) -> int:
        return self.reference_flags[1]

    @property
    def is_rigid(self) -> bool:
        return self.self_ext == 0

    @property
    def is_rigid_indecomposable(self) -> bool:
        return self.self_ext == 0 and self.end_dim == 1

    def admissible_primes(self, candidates: Iterable[int] | None = None) -> Iterable[int]:
        if candidates is None:
            p = 2
            while True:
                if fp.is_prime(p) and self.admissible(p):
                    yield p
                p += 1
        else:
            for p in candidates:
                if self.admissible(p):
                    yield p

    def __repr__(self):
        return f"{type(self).__name__}({self.name or self.dims})"

    def __getstate__(self):
        state = dict(self.__dict__)
        state.pop("_reps", None)
        return state


class PatternFamily(RepFamily):
    """Integer matrices reduced mod p; ``GENERIC`` entries are drawn per prime.

    Generic entries come from a PRNG seeded by (seed, p) and lie in F_p^*.
    ``min_prime`` excludes small fields where a pinned parameter degenerates.
    """

    def __init__(self, quiver: Quiver, dims, matrices, seed: int = 0, name: str = "", min_prime: int = 2):
        self.quiver = quiver
        self.min_prime = min_prime
        self.dims = tuple(int(x) for x in dims)
        self.seed = seed
        self.name = name
        mats = []
        for (s, t), m in zip(quiver.arrows, matrices):
            rows = [list(r) for r in m] if m is not None else []
            if self.dims[t] * self.dims[s] and (len(rows) != self.dims[t] or any(len(r) != self.dims[s] for r in rows)):
                raise DimensionMismatch(f"arrow {s + 1}->{t + 1}: pattern does not match dims {self.dims}")
            mats.append(tuple(tuple(x if x == GENERIC else int(x) for x in r) for r in rows))
        self.pattern = tuple(mats)

    @property
    def key(self):
        return ("pattern", self.quiver, self.dims, self.pattern, self.seed, self.min_prime)

    def _build(self, p):
        rng = random.Random(f"{self.seed}:{p}")
        mats = []
        for (s, t), m in zip(self.quiver.arrows, self.pattern):
            z = np.zeros((self.dims[t], self.dims[s]), dtype=np.int64)
            for i, row in enumerate(m):
                for j, x in enumerate(row):
                    z[i, j] = rng.randrange(1, p) if x == GENERIC else x % p
            mats.append(z)
        return FqRep(self.quiver, p, self.dims, tuple(mats))


class GenericFamily(RepFamily):
    """Pseudo-random matrices, redrawn per prime until the flags match the generic ones.

    Draw ``j`` over F_p is seeded by (seed, p, j); at most ``attempts`` draws.
    """

    def __init__(self, quiver: Quiver, dims, seed: int = 0, name: str = "", attempts: int = 4000):
        self.quiver = quiver
        self.dims = tuple(int(x) for x in dims)
        self.seed = seed
        self.name = name
        self.attempts = attempts

    @property
    def key(self):
        return ("generic", self.quiver, self.dims, self.seed)

    def _draw(self, p, j):
        rng = random.Random(f"{self.seed}:{p}:{j}")
        mats = []
        for s, t in self.quiver.arrows:
            mats.append(np.array([[rng.randrange(p) for _ in range(self.dims[s])] for _ in range(self.dims[t])], dtype=np.int64))
        return FqRep(self.quiver, p, self.dims, tuple(mats))

    @cached_property
    def reference_flags(self):
        rep = self._draw(REFERENCE_PRIME, 0)
        return hom_dim(rep, rep), ext1_dim(rep, rep)

    def _build(self, p):
        if p == REFERENCE_PRIME:
            return self._draw(p, 0)
        want = self.reference_flags
        for j in range(self.attempts):
            rep = self._draw(p, j)
            if (hom_dim(rep, rep), ext1_dim(rep, rep)) == want:
                return rep
        raise NoPresentation(f"no draw over F_{p} matches the generic flags {want}")


class ExtensionFamily(RepFamily):
    """The non-split extension 0 -> sub -> E -> quot -> 0, built over each prime."""

    def __init__(self, sub: RepFamily, quot: RepFamily, name: str = ""):
        self.sub, self.quot = sub, quot
        self.quiver = sub.quiver
        self.dims = tuple(a + b for a, b in zip(sub.dims, quot.dims))
        self.name = name

    @property
    def key(self):
        return ("extension", self.sub.key, self.quot.key)

    def _build(self, p):
        return nonsplit_extension(self.sub.at(p), self.quot.at(p))


class DirectSumFamily(RepFamily):
    def __init__(self, parts: Sequence[RepFamily], name: str = ""):
        if not parts:
            raise ValueError("empty direct sum")
        self.parts = tuple(parts)
        self.quiver = parts[0].quiver
        self.dims = tuple(sum(x) for x in zip(*(f.dims for f in parts)))
        self.name = name or " + ".join(f.name or str(f.dims) for f in parts)

    @property
    def key(self):
        return ("sum",) + tuple(f.key for f in self.parts)

    def _build(self, p):
        rep = self.parts[0].at(p)
        for f in self.parts[1:]:
            rep = rep.direct_sum(f.at(p))
        return rep


def ext1_cluster_dim(m: RepFamily, n: RepFamily, p: int | None = None) -> int:
    """Symmetrised Ext^1(m, n) + Ext^1(n, m) at p (default: first common admissible prime)."""
    if p is None:
        p = next(q for q in m.admissible_primes() if n.admissible(q))
    a, b = m.at(p), n.at(p)
    return ext1_dim(a, b) + ext1_dim(b, a)


def generic_rep(q: Quiver, d: Sequence[int], seed: int = 0, name: str = "") -> tuple[RepFamily, str]:
    """A generic representation of dimension d and its flag.

    The flag is ``"indecomposable-rigid"`` when Ext^1(M, M) = 0 and
    End(M) is one-dimensional, ``"rigid"`` for rigid decomposables and
    ``"non-rigid"`` otherwise.
    """
    d = tuple(int(x) for x in d)
    if len(d) != q.n:
        raise DimensionMismatch("dimension vector length differs from the vertex count")
    if any(x < 0 for x in d) or not any(d):
        raise OutOfRange(f"dimension vector {d} must be nonnegative and nonzero")
    fam = GenericFamily(q, d, seed=seed, name=name)
    end, ext = fam.reference_flags
    if ext:
        flag = "non-rigid"
    elif end == 1:
        flag = "indecomposable-rigid"
    else:
        flag = "rigid"
    return fam, flag


# ----------------------------------------------------------------------------
# counting subrepresentations


class _SubrepCounter:
    """Counts subrepresentations of a fixed dimension vector.

    Every vertex carries bounds L_v <= U_v <= H_v.  Bounds are propagated
    along arrows (images of lower bounds, preimages of upper bounds); a
    vertex whose neighbours are all fixed contributes a Gaussian binomial;
    otherwise we branch on the vertex with the fewest candidate subspaces.
    Connected pieces of the undetermined part are counted independently.
    """

    def __init__(self, rep: FqRep, e: Sequence[int]):
        q = rep.quiver
        self.p = rep.p
        self.n = q.n
        self.d = rep.dims
        self.e = tuple(e)
        self.mats = rep.mats
        self.topo = q.topological_order
        self.rtopo = tuple(reversed(self.topo))
        self.inc = [[(a, s) for a, (s, t) in enumerate(q.arrows) if t == v] for v in range(q.n)]
        self.out = [[(a, t) for a, (s, t) in enumerate(q.arrows) if s == v] for v in range(q.n)]
        self.nbrs = [q.neighbours(v) for v in range(q.n)]
        self.full = [tuple(tuple(int(i == j) for j in range(dv)) for i in range(dv)) for dv in self.d]

    def count(self) -> int:
        L = [() for _ in range(self.n)]
        H = list(self.full)
        return self._solve(L, H, frozenset(range(self.n)))

    def _propagate(self, L, H, verts) -> bool:
        p, e, d = self.p, self.e, self.d
        while True:
            for v in self.topo:
                if v not in verts:
                    continue
                rows = None
                for a, s in self.inc[v]:
                    if L[s]:
                        if rows is None:
                            rows = list(L[v])
                        rows.extend(fp.image(self.mats[a], L[s], p))
                if rows is not None:
                    L[v] = fp.rref(rows, d[v], p)
                    if len(L[v]) > e[v]:
                        return False
            for v in self.rtopo:
                if v not in verts:
                    continue
                h = H[v]
                for a, t in self.out[v]:
                    if len(H[t]) < d[t]:
                        h = fp.preimage(self.mats[a], H[t], h, d[t], p)
                if len(h) < e[v]:
                    return False
                H[v] = h
            changed = False
            for v in verts:
                if len(L[v]) != len(H[v]) and not fp.contains(H[v], L[v], p):
                    return False
                if len(L[v]) == e[v] and len(H[v]) != e[v]:
                    H[v] = L[v]
                    changed = True
                elif len(H[v]) == e[v] and len(L[v]) != e[v]:
                    L[v] = H[v]
                    changed = True
                elif len(L[v]) == len(H[v]) == e[v] and L[v] != H[v]:
                    return False
            if not changed:
                return True

    def _solve(self, L, H, verts) -> int:
        if not self._propagate(L, H, verts):
            return 0
        p, e, d = self.p, self.e, self.d
        und = {v for v in verts if len(L[v]) < e[v] < len(H[v])}
        # U_u <= H_u and M_a U_u <= U_t = L_t + (e_t - l_t dims) bound dim U_u
        for u in und:
            for a, t in self.out[u]:
                if t in und:
                    pre = fp.preimage(self.mats[a], L[t], H[u], d[t], p)
                    if e[u] > len(pre) + e[t] - len(L[t]):
                        return 0
        result = 1
        active = set()
        for v in und:
            if self.nbrs[v] & und:
                active.add(v)
            else:
                result *= fp.gaussian_binomial(len(H[v]) - len(L[v]), e[v] - len(L[v]), p)
        if not active:
            return result
        for comp in _components(active, self.nbrs):
            v = min(comp, key=lambda u: (fp.gaussian_binomial(len(H[u]) - len(L[u]), e[u] - len(L[u]), p), u))
            sub = 0
            for U in fp.intermediate_subspaces(L[v], H[v], e[v], p, d[v]):
                L2, H2 = list(L), list(H)
                L2[v] = H2[v] = U
                sub += self._solve(L2, H2, comp)
            if not sub:
                return 0
            result *= sub
        return result


def _star_shape(q: Quiver):
    """(centre, [(leaf, arrow)]) when every arrow runs from a distinct leaf into one sink."""
    if not q.arrows:
        return None
    targets = {t for _, t in q.arrows}
    sources = [s for s, _ in q.arrows]
    if len(targets) != 1 or len(set(sources)) != len(sources):
        return None
    centre = targets.pop()
    if q.n != len(sources) + 1:
        return None
    return centre, [(s, a) for a, (s, _) in enumerate(q.arrows)]


def _hub_shapes(q: Quiver) -> list:
    """("source" | "sink", hub, {other end: [arrows]}) for each vertex that every arrow touches from one side."""
    if not q.arrows:
        return []
    out = []
    for side, end in (("source", 0), ("sink", 1)):
        hubs = {a[end] for a in q.arrows}
        if len(hubs) == 1:
            groups: dict[int, list[int]] = {}
            for a, arrow in enumerate(q.arrows):
                groups.setdefault(arrow[1 - end], []).append(a)
            out.append((side, hubs.pop(), groups))
    return out


@lru_cache(maxsize=4096)
def _hub_hist(rep: FqRep, side: str, hub: int, others: tuple, k: int) -> dict:
    if side == "source":
        groups = [[rep.mats[a] for a in arrows] for _, arrows in others]
    else:
        groups = [[tuple(zip(*rep.mats[a])) for a in arrows] for _, arrows in others]
    return fp.image_rank_histogram(groups, rep.dims[hub], k, rep.p)


def _count_hub(rep: FqRep, e: tuple, side: str, hub: int, groups: dict) -> int:
    """Count subrepresentations when every arrow leaves (or enters) one hub vertex.

    Source hub: U at the hub fixes the spans W_t = sum of M_a U, and the
    subspace at t is any e_t-space containing W_t.  Sink hub: dually, the
    annihilator A of U (a (d - e)-space of row vectors) fixes the spaces
    {v : M_a v in U for all a} at each source, of dimension d_s - rank[A M_a].
    Only the ranks matter, so one histogram over the hub serves every e
    with the same hub dimension.
    """
    p, d = rep.p, rep.dims
    others = tuple(sorted((v, tuple(arrows)) for v, arrows in groups.items()))
    rest = prod(_grass(d[v], e[v], p) for v in range(len(d)) if v != hub and v not in groups)
    if not rest:
        return 0
    k = e[hub] if side == "source" else d[hub] - e[hub]
    total = 0
    for ranks, mult in _hub_hist(rep, side, hub, others, k).items():
        term = mult
        for (v, _), r in zip(others, ranks):
            if side == "source":
                term *= _grass(d[v] - r, e[v] - r, p) if e[v] >= r else 0
            else:
                term *= _grass(d[v] - r, e[v], p)
        total += term
    return total * rest


def _grass(n: int, k: int, q: int) -> int:
    return fp.gaussian_binomial(n, k, q) if n >= 0 else 0


def _meet(a: int, i: int, e: int, j: int, q: int) -> int:
    """e-subspaces of F_q^a meeting a fixed i-subspace in exactly j dimensions."""
    if j < 0 or j > i or e - j > a - i or e - j < 0:
        return 0
    return q ** ((i - j) * (e - j)) * _grass(i, j, q) * _grass(a - i, e - j, q)


@lru_cache(maxsize=None)
def _star_tail(q: int, n: int, u: int, leaf4: tuple, leaf5: tuple, i: int) -> int:
    """Sum over u-subspaces U of F_q^n of G(c4 + dim U∩A4, e4) G(c5 + dim U∩A5, e5).

    leafK = (eK, cK, aK) with aK = dim AK and i = dim A4∩A5.  Each weight
    is expanded into Grassmannians of U∩AK; what remains counts pairs
    X4 <= A4, X5 <= A5 and a U containing X4 + X5, which only depends on
    dim X4∩X5, and X4∩X5 = X5∩(X4∩A4∩A5).
    """
    if u < 0 or u > n:
        return 0
    e4, c4, a4 = leaf4
    e5, c5, a5 = leaf5
    total = 0
    for f4 in range(min(e4, a4) + 1):
        w4 = _grass(c4, e4 - f4, q) * q ** (f4 * (c4 - e4 + f4)) if e4 - f4 <= c4 else 0
        if not w4:
            continue
        for f5 in range(min(e5, a5) + 1):
            w5 = _grass(c5, e5 - f5, q) * q ** (f5 * (c5 - e5 + f5)) if e5 - f5 <= c5 else 0
            if not w5:
                continue
            pairs = 0
            for j in range(min(i, f4) + 1):
                m4 = _meet(a4, i, f4, j, q)
                if not m4:
                    continue
                for t in range(min(j, f5) + 1):
                    r = f4 + f5 - t
                    if r > u:
                        continue
                    pairs += m4 * _meet(a5, j, f5, t, q) * _grass(n - r, u - r, q)
            total += w4 * w5 * pairs
    return total


def _image_space(mat, p: int, n: int) -> tuple:
    cols = [tuple(row[j] for row in mat) for j in range(len(mat[0]))] if mat and mat[0] else []
    return fp.rref(cols, n, p)


def _count_star(rep: FqRep, e: tuple, centre: int, leaves, chunk: int = 20000) -> int:
    """Count subrepresentations of a sink-centred star representation.

    All but two leaves are enumerated (the innermost one in numpy batches);
    the centre and the remaining two leaves are summed in closed form from
    the relative position of the enumerated span S and the two images.
    """
    p, d = rep.p, rep.dims
    n, ec = d[centre], e[centre]
    info = []
    for v, a in leaves:
        W = _image_space(rep.mats[a], p, n)
        info.append((v, a, W, d[v] - len(W)))
    if n == 0:
        return prod(_grass(d[v], e[v], p) for v, _ in leaves)
    # cheapest: keep the two leaves with the most candidate subspaces for the closed form
    info.sort(key=lambda t: (_grass(d[t[0]], e[t[0]], p), t[0]))
    free = info[-2:]
    enum = info[:-2]
    while len(free) < 2:
        free.insert(0, (None, None, (), 0))
    ef = [e[v] if v is not None else 0 for v, *_ in free]
    Wf = [np.array(W, dtype=np.int64).reshape(len(W), n) for _, _, W, _ in free]
    wlen = [len(W) for _, _, W, _ in free]
    kap = [k for *_, k in free]

    def tail(s, r4, r5, r45):
        leaf = []
        for m, r in enumerate((r4, r5)):
            leaf.append((ef[m], kap[m] + s + wlen[m] - r, r - s))
        i = leaf[0][2] + leaf[1][2] - (r45 - s)
        return _star_tail(p, n - s, ec - s, leaf[0], leaf[1], i)

    if not enum:
        return tail(0, wlen[0], wlen[1], len(fp.rref(list(free[0][2]) + list(free[1][2]), n, p)))

    def images(v, a):
        mat = rep.mats[a]
        out = []
        for X in fp.subspaces(d[v], e[v], p):
            out.append([fp.matvec(mat, x, p) for x in X])
        return np.array(out, dtype=np.int64).reshape(len(out), e[v], n)

    inner_v, inner_a = enum[-1][0], enum[-1][1]
    inner = images(inner_v, inner_a)
    outer = [list(fp.subspaces(d[v], e[v], p)) for v, *_ in enum[:-1]]
    both = np.concatenate(Wf, axis=0)
    total = 0
    for choice in product(*outer):
        fixed = []
        for X, (v, a, _, _) in zip(choice, enum[:-1]):
            fixed.extend(fp.matvec(rep.mats[a], x, p) for x in X)
        fixed = np.array(fixed, dtype=np.int64).reshape(len(fixed), n)
        for lo in range(0, len(inner), chunk):
            block = inner[lo:lo + chunk]
            ranks = fp.stacked_ranks(fixed, block, (Wf[0], Wf[1], both), p)
            keys, mult = np.unique(ranks, axis=0, return_counts=True)
            for key, m in zip(keys.tolist(), mult.tolist()):
                total += m * tail(*key)
    return total


def _components(vertices: set, nbrs) -> list[frozenset]:
    left = set(vertices)
    comps = []
    while left:
        start = min(left)
        stack, comp = [start], {start}
        while stack:
            v = stack.pop()
            for w in nbrs[v]:
                if w in left and w not in comp:
                    comp.add(w)
                    stack.append(w)
        left -= comp
        comps.append(frozenset(comp))
    return comps


def _check_range(rep: FqRep, e):
    e = tuple(int(x) for x in e)
    if len(e) != rep.quiver.n:
        raise DimensionMismatch("dimension vector length differs from the vertex count")
    if any(x < 0 or x > dv for x, dv in zip(e, rep.dims)):
        raise OutOfRange(f"sub-dimension vector {e} not within 0..{rep.dims}")
    return e


def count_subreps(m: FqRep, e: Sequence[int]) -> int:
    """Number of F_p-points of the quiver Grassmannian Gr_e(m)."""
    e = _check_range(m, e)
    star = _star_shape(m.quiver)
    if star is not None:
        return _count_star(m, e, *star)
    hubs = _hub_shapes(m.quiver)
    if hubs:
        def cost(shape):
            side, hub = shape[0], shape[1]
            k = e[hub] if side == "source" else m.dims[hub] - e[hub]
            return fp.gaussian_binomial(m.dims[hub], k, m.p)

        return _count_hub(m, e, *min(hubs, key=cost))
    return _SubrepCounter(m, e).count()


def count_subreps_bruteforce(m: FqRep, e: Sequence[int]) -> int:
    """Oracle: try every tuple of subspaces and test each arrow."""
    e = _check_range(m, e)
    p = m.p
    choices = [list(fp.rref_patterns(dv, ev, p)) for dv, ev in zip(m.dims, e)]
    total = 0
    for tup in product(*choices):
        ok = True
        for a, (s, t) in enumerate(m.quiver.arrows):
            if not tup[s]:
                continue
            if not fp.contains(tup[t], tuple(fp.image(m.mats[a], tup[s], p)), p):
                ok = False
                break
        total += ok
    return total


# ----------------------------------------------------------------------------
# Euler characteristics


def degree_bound(q: Quiver, d, e, self_ext: int) -> int:
    """Upper bound on dim Gr_e(M); negative means the Grassmannian is empty.

    At a point U the tangent space is Hom(U, M/U), of dimension
    <e, d-e> + dim Ext^1(U, M/U), and Ext^1(M, M) surjects onto
    Ext^1(U, M/U) because Ext^2 vanishes.
    """
    f = tuple(a - b for a, b in zip(d, e))
    ambient = sum(a * b for a, b in zip(e, f))
    return min(ambient, euler_form(q, e, f) + self_ext)


_COUNT_CACHE: dict = {}


def _cached_count(fam: RepFamily, p: int, e: tuple) -> int:
    key = (fam.key, p, e)
    if key not in _COUNT_CACHE:
        _COUNT_CACHE[key] = count_subreps(fam.at(p), e)
    return _COUNT_CACHE[key]


def _interpolate(points: Sequence[tuple[int, int]]) -> list[Fraction]:
    """Coefficients (low to high) of the polynomial through the points."""
    xs = [Fraction(x) for x, _ in points]
    coef = [Fraction(y) for _, y in points]
    n = len(points)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        # poly = poly * (x - xs[i]) + coef[i]
        shifted = [Fraction(0)] + poly[:-1]
        poly = [s - xs[i] * c for s, c in zip(shifted, poly)]
        poly[0] += coef[i]
    return poly


def _choose_primes(fam: RepFamily, needed: int, primes: Sequence[int] | None) -> list[int]:
    pool = fam.admissible_primes(primes)
    chosen = []
    for p in pool:
        chosen.append(p)
        if len(chosen) == needed:
            return chosen
    raise InsufficientPrimes(f"{fam!r}: {needed} admissible primes needed, got {len(chosen)}")


def _solve_rational(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a square nonsingular system exactly."""
    n = len(rows)
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(n):
        piv = next(i for i in range(c, n) if m[i][c])
        m[c], m[piv] = m[piv], m[c]
        for i in range(n):
            if i != c and m[i][c]:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [m[i][n] / m[i][i] for i in range(n)]


def _palindromic_fit(points: Sequence[tuple[int, int]], deg: int) -> list[Fraction]:
    """Coefficients of the degree-``deg`` palindromic polynomial through the points."""
    half = deg // 2 + 1
    rows = []
    for x, _ in points:
        rows.append([Fraction(x ** j + (x ** (deg - j) if 2 * j != deg else 0)) for j in range(half)])
    low = _solve_rational(rows, [Fraction(y) for _, y in points])
    coeffs = [Fraction(0)] * (deg + 1)
    for j, c in enumerate(low):
        coeffs[j] = c
        coeffs[deg - j] = c
    return coeffs


def counting_polynomial(fam: RepFamily, e: Sequence[int], primes: Sequence[int] | None = None) -> list[int]:
    """Integer coefficients (low to high) of p -> |Gr_e(M)(F_p)|.

    In general this interpolates through degree-bound + 1 admissible primes.
    For a rigid family Gr_e(M) is smooth projective of dimension <e, d-e>
    with a polynomial point count, so the count is palindromic of exactly
    that degree and half as many primes suffice.  One further prime is held
    out as a consistency check either way.
    """
    e = tuple(int(x) for x in e)
    if any(x < 0 or x > dv for x, dv in zip(e, fam.dims)):
        raise OutOfRange(f"sub-dimension vector {e} not within 0..{fam.dims}")
    deg = degree_bound(fam.quiver, fam.dims, e, fam.self_ext)
    if deg < 0:
        return []
    palindromic = fam.is_rigid
    needed = deg // 2 + 1 if palindromic else deg + 1
    chosen = _choose_primes(fam, needed + 1, primes)
    points = [(p, _cached_count(fam, p, e)) for p in chosen]
    poly = _palindromic_fit(points[:-1], deg) if palindromic else _interpolate(points[:-1])
    if any(c.denominator != 1 for c in poly):
        raise NonPolynomialCount(f"{fam!r}, e={e}: interpolant has non-integral coefficients {poly}")
    coeffs = [int(c) for c in poly]
    held_p, held_count = points[-1]
    if sum(c * held_p ** i for i, c in enumerate(coeffs)) != held_count:
        raise NonPolynomialCount(f"{fam!r}, e={e}: held-out prime {held_p} gives {held_count}, polynomial disagrees")
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def euler_char(fam: RepFamily, e: Sequence[int], primes: Sequence[int] | None = None) -> int:
    """chi(Gr_e(M)) as the counting polynomial evaluated at q = 1."""
    return sum(counting_polynomial(fam, e, primes))


def _euler_cell(args):
    fam, e, primes = args
    return euler_char(fam, e, primes)


def euler_chars(fam: RepFamily, primes: Sequence[int] | None = None, jobs: int = 1) -> dict[tuple, int]:
    """chi(Gr_e(M)) for every 0 <= e <= dim M, in lexicographic order of e.

    With ``jobs > 1`` the cells are farmed out to worker processes; results
    are gathered in input order, so the output does not depend on ``jobs``.
    """
    cells = list(product(*(range(x + 1) for x in fam.dims)))
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            values = list(pool.map(_euler_cell, [(fam, e, primes) for e in cells], chunksize=8))
    else:
        values = [euler_char(fam, e, primes) for e in cells]
    return dict(zip(cells, values))


# ----------------------------------------------------------------------------
# module files


def load_module(data, quiver: Quiver | None = None) -> RepFamily:
    """Module file: {"quiver": ..., "dim": [...], "matrices": {"arrow_index": [[int]]}, "prime": p}.

    The quiver is an inline {"vertices", "arrows"} object, a built-in name
    or the path of a quiver file.

    Arrow indices are 1-based positions in the quiver's arrow list.  Entries
    may be the string "generic".  The prime, if present, is only a hint for
    single-prime commands; the family itself reduces to any prime.
    """
    if isinstance(data, (str, Path)):
        data = json.loads(Path(data).read_text())
    if quiver is None:
        qd = data["quiver"]
        if isinstance(qd, dict):
            quiver = Quiver.from_json(qd)
        else:
            from .catalog import load_quiver  # built-in names as well as files

            quiver = load_quiver(qd).quiver
    dims = tuple(int(x) for x in data["dim"])
    raw = data.get("matrices", {})
    mats = []
    for a, (s, t) in enumerate(quiver.arrows):
        m = raw.get(str(a + 1), raw.get(a + 1))
        if m is None:
            m = [[0] * dims[s] for _ in range(dims[t])]
        mats.append(m)
    return PatternFamily(
        quiver, dims, mats, seed=int(data.get("seed", 0)), name=data.get("name", ""), min_prime=int(data.get("min_prime", 2))
    )
