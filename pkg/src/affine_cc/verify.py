"""Machine checks of the delta identities and of positivity in every nearby cluster.

Identities are compared as fully expanded Laurent polynomials, so a failure
always comes with the exact difference.  Positivity is checked by writing
an element in each cluster reached by a reduced mutation word and looking
for a negative coefficient.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product

import numpy as np

from .catalog import CatalogEntry, MAX_TUBE_LENGTH, TubeDescriptor, load_quiver
from .ccmap import cc_by_dimension, cc_module, cc_shifted
from .cheb import cheb_eval, tube_variable, x_ndelta
from .errors import ClusterError, OutOfRange, PreconditionFailed, Unsupported
from .laurent import LaurentPoly, lp_is_nonneg
from .quiver import Seed, express_step, initial_seed, mutate_seed, reduced_words
from .rep import RepFamily, ext1_cluster_dim

__all__ = [
    "IdentityReport",
    "PositivityReport",
    "check_one_dim_multiplication",
    "check_cheb_ladder",
    "check_difference_property",
    "check_positivity",
    "gen_basis_elements",
    "element",
    "suite_prop41",
    "suite_prop42",
    "suite_prop43",
    "suite_difference",
]


@dataclass
class IdentityReport:
    name: str
    left: LaurentPoly
    right: LaurentPoly
    equal: bool = field(init=False)
    diff: LaurentPoly = field(init=False)

    def __post_init__(self):
        self.diff = self.left - self.right
        self.equal = self.diff.is_zero()

    @property
    def ok(self) -> bool:
        return self.equal

    def line(self) -> str:
        status = "PASS" if self.equal else "FAIL"
        tail = "" if self.equal else f"  diff = {self.diff.render()}"
        return f"{status} {self.name}{tail}"

    def to_json(self) -> dict:
        out = {"identity": self.name, "equal": self.equal, "left": self.left.render(), "right": self.right.render()}
        if not self.equal:
            out["diff"] = self.diff.render()
        return out


@dataclass
class PositivityReport:
    element: str
    word: tuple[int, ...]
    expansion: LaurentPoly
    nonneg: bool
    witness: tuple[int, tuple[int, ...]] | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.nonneg and self.error is None

    def line(self) -> str:
        word = "".join(f"mu{k + 1}" for k in self.word) or "initial"
        if self.error:
            return f"FAIL {self.element} @ {word}: {self.error}"
        if self.nonneg:
            return f"PASS {self.element} @ {word} ({len(self.expansion)} terms)"
        c, exps = self.witness
        return f"FAIL {self.element} @ {word}: coefficient {c} at {exps}"

    def to_json(self) -> dict:
        out = {"element": self.element, "word": [k + 1 for k in self.word], "nonneg": self.nonneg, "terms": len(self.expansion)}
        if self.witness is not None:
            out["witness"] = {"coeff": self.witness[0], "exps": list(self.witness[1])}
        if self.error:
            out["error"] = self.error
        return out


# ----------------------------------------------------------------------------
# objects and values


def _value(entry: CatalogEntry, obj, seed: int = 0, jobs: int = 1) -> LaurentPoly:
    """X of an object given as a module family, a signed dimension vector, or ("shift", v) for M(v)[-1]."""
    if isinstance(obj, LaurentPoly):
        return obj
    if isinstance(obj, RepFamily):
        return cc_module(obj, jobs=jobs)
    if isinstance(obj, tuple) and len(obj) == 2 and obj[0] == "shift":
        return cc_shifted(entry.quiver, obj[1], seed, jobs=jobs)
    return cc_by_dimension(entry.quiver, tuple(int(x) for x in obj), seed, jobs=jobs)


def _module(entry: CatalogEntry, t, seed: int = 0) -> RepFamily:
    return t if isinstance(t, RepFamily) else entry.module(tuple(int(x) for x in t), seed)


def check_one_dim_multiplication(
    entry, t_i, e_pair, seed: int = 0, name: str | None = None, jobs: int = 1
) -> IdentityReport:
    """X_delta X_{T_i} against X_E + X_E' for the pair of objects ``e_pair``.

    The precondition dim Ext^1_C(T_i, M(delta)) = 1 is checked first.
    """
    entry = load_quiver(entry)
    t = _module(entry, t_i, seed)
    ext = ext1_cluster_dim(t, entry.homogeneous(1))
    if ext != 1:
        raise PreconditionFailed(f"Ext^1 in the cluster category between {t!r} and M(delta) has dimension {ext}, not 1")
    left = entry.xdelta() * cc_module(t, jobs=jobs)
    right = _value(entry, e_pair[0], seed, jobs) + _value(entry, e_pair[1], seed, jobs)
    return IdentityReport(name or f"X_delta*X[{t.name or t.dims}] = X[E] + X[E']", left, right)


def _ladder_terms(entry: CatalogEntry, dim_t: Sequence[int], n: int):
    delta = np.array(entry.delta)
    d = np.array(dim_t)
    up = tuple(int(x) for x in d + n * delta)
    if all(d >= n * delta):
        return up, tuple(int(x) for x in d - n * delta)
    if all(d <= n * delta):
        return up, ("shift", tuple(int(x) for x in n * delta - d))
    raise Unsupported(f"dim T_i = {tuple(dim_t)} and {n}*delta are incomparable")


def check_cheb_ladder(entry, t_i, n: int, seed: int = 0, jobs: int = 1) -> IdentityReport:
    """F_n(X_delta) X_{T_i} against X_{M(dim T_i + n delta)} plus the lower object.

    The lower object is M(dim T_i - n delta) when dim T_i >= n delta and
    M(n delta - dim T_i)[-1] when dim T_i <= n delta.
    """
    entry = load_quiver(entry)
    if n < 1:
        raise OutOfRange(f"ladder index n must be >= 1, got {n}")
    t = _module(entry, t_i, seed)
    up, low = _ladder_terms(entry, t.dims, n)
    left = cheb_eval(n, entry.xdelta()) * cc_module(t, jobs=jobs)
    right = _value(entry, up, seed, jobs) + _value(entry, low, seed, jobs)
    label = f"M{low[1]}[-1]" if low and low[0] == "shift" else f"M{low}"
    return IdentityReport(f"F_{n}(X_delta)*X[{t.name or t.dims}] = X[M{up}] + X[{label}]", left, right)


def _tube_module_value(tube: TubeDescriptor, i: int, length: int) -> LaurentPoly:
    """X_{E_i[length]} from a presentation, or from quasi-simples by the tube recurrence
    X_{E_i[L]} = X_{E_i} X_{E_{i+1}[L-1]} - X_{E_{i+2}[L-2]} when there is none."""
    if length <= MAX_TUBE_LENGTH:
        return tube.base_value(i, length)
    one = LaurentPoly.one(tube.entry.variables)
    memo: dict = {}

    def rec(j, L):
        if L == 0:
            return one
        if L == 1:
            return tube.base_value(j, 1)
        key = ((j - 1) % tube.rank, L)
        if key not in memo:
            memo[key] = rec(j, 1) * rec(j + 1, L - 1) - rec(j + 2, L - 2)
        return memo[key]

    return rec(i, length)


def check_difference_property(entry, tube, i: int, n: int, k: int) -> IdentityReport:
    """X_{E_i[nr+k]} (presentation or tube recurrence) against X_{E_i[k]} F_n(X_delta) + X_{E_{i+k+1}[nr-k-2]}."""
    entry = load_quiver(entry)
    if not isinstance(tube, TubeDescriptor):
        tube = entry.tube(str(tube))
    r = tube.rank
    if r < 2:
        raise PreconditionFailed(f"tube {tube.label} has rank {r} < 2")
    if not 0 <= k < r:
        raise OutOfRange(f"k must lie in 0..{r - 1}, got {k}")
    if n < 0:
        raise OutOfRange(f"n must be >= 0, got {n}")
    L = n * r + k
    xd = entry.xdelta()
    one = LaurentPoly.one(entry.variables)
    left = _tube_module_value(tube, i, L) if L else one
    head = one if k == 0 else tube.base_value(i, k)
    name = f"tube {tube.label}: X[{tube.name(i)}[{L}]] = X[{tube.name(i)}[{k}]]"
    if n == 0:
        return IdentityReport(name, left, head)
    low = n * r - k - 2
    j = (i + k) % r + 1
    right = head * cheb_eval(n, xd) + tube_variable(tube, j, low, xd)
    return IdentityReport(f"{name}*F_{n}(X_delta) + X[{tube.name(j)}[{low}]]", left, right)


# ----------------------------------------------------------------------------
# named elements


def element(entry, spec: str, seed: int = 0) -> tuple[str, LaurentPoly]:
    """Parse an element name.

    cheb:n (F_n(X_delta)), ndelta:n, xdelta, tube:LABEL:i:L, family:NAME:n,
    dim:a,b,... (generic rigid object, negative entries are shifts).
    """
    entry = load_quiver(entry)
    kind, _, rest = spec.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "xdelta":
            return "X_delta", entry.xdelta()
        if kind == "cheb":
            n = int(args[0])
            return f"F_{n}(X_delta)", cheb_eval(n, entry.xdelta())
        if kind == "ndelta":
            n = int(args[0])
            return f"X_{n}delta", x_ndelta(entry, n)
        if kind == "tube":
            tube = entry.tube(args[0])
            i, L = int(args[1]), int(args[2])
            return f"X[{tube.name(i)}[{L}]]", tube_variable(tube, i, L)
        if kind == "family":
            name, n = args[0], int(args[1])
            return f"X[{name}({n})]", cc_module(entry.presentation(name, n))
        if kind == "dim":
            v = tuple(int(x) for x in args[0].split(","))
            return f"X[M{v}]", cc_by_dimension(entry.quiver, v, seed)
    except (IndexError, ValueError) as exc:
        raise OutOfRange(f"cannot parse element {spec!r}: {exc}") from None
    raise OutOfRange(f"unknown element kind {kind!r} in {spec!r}")


# ----------------------------------------------------------------------------
# positivity


def _expand_subtree(seed: Seed, z: LaurentPoly, depth: int) -> list[tuple[tuple[int, ...], LaurentPoly | str]]:
    """(word, expansion or error) for every reduced word extending seed.word, depth-first."""
    out = [(seed.word, z)]
    if depth == 0:
        return out
    for k in range(seed.n):
        if seed.word and seed.word[-1] == k:
            continue
        try:
            z2 = express_step(z, seed, k)
        except ClusterError as exc:
            out.append((seed.word + (k,), f"{type(exc).__name__}: {exc}"))
            continue
        out.extend(_expand_subtree(mutate_seed(seed, k), z2, depth - 1))
    return out


def _subtree_job(args):
    seed, z, depth = args
    return _expand_subtree(seed, z, depth)


def check_positivity(element_value: LaurentPoly, entry, depth: int, name: str = "element", jobs: int = 1) -> list[PositivityReport]:
    """One report per reduced mutation word of length <= depth, in depth-first order.

    The element is carried along the walk one mutation at a time.  Words
    with two equal adjacent letters are skipped: they return to a seed
    already on the walk.
    """
    entry = load_quiver(entry)
    if depth < 0:
        raise OutOfRange("depth must be >= 0")
    root = initial_seed(entry.quiver)
    z = element_value
    results: list = [((), z)]
    if depth > 0:
        tasks = []
        for k in range(root.n):
            try:
                tasks.append((mutate_seed(root, k), express_step(z, root, k), depth - 1))
            except ClusterError as exc:
                results.append(((k,), f"{type(exc).__name__}: {exc}"))
        if jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                parts = list(pool.map(_subtree_job, tasks))
        else:
            parts = [_subtree_job(t) for t in tasks]
        for part in parts:
            results.extend(part)
    # lexicographic order on words is depth-first order
    results.sort(key=lambda item: item[0])
    reports = []
    for word, value in results:
        if isinstance(value, str):
            reports.append(PositivityReport(name, word, LaurentPoly.zero(z.variables), False, None, value))
            continue
        ok, witness = lp_is_nonneg(value)
        reports.append(PositivityReport(name, word, value, ok, witness))
    return reports


# ----------------------------------------------------------------------------
# bases


def _regular_rigid(entry: CatalogEntry, max_summands: int) -> Iterator[tuple[str, tuple]]:
    """Regular rigid modules R as multisets of quasi-simples, at most one quasi-simple per tube."""
    yield "0", ()
    options = []
    for tube in entry.tubes:
        options.append([None] + [(tube, i) for i in range(1, tube.rank + 1)])
    seen = set()
    for total in range(1, max_summands + 1):
        for choice in product(*options):
            picked = [c for c in choice if c is not None]
            if not picked:
                continue
            # distribute ``total`` summands over the picked quasi-simples, each at least once
            for counts in _compositions(total, len(picked)):
                parts = tuple((tube.label, i, c) for (tube, i), c in zip(picked, counts))
                if parts in seen:
                    continue
                seen.add(parts)
                label = " + ".join(f"{c}*{tube.name(i)}" if c > 1 else tube.name(i) for (tube, i), c in zip(picked, counts))
                yield label, parts


def _compositions(total: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        return
    if k == 1:
        yield (total,)
        return
    for first in range(1, total - k + 2):
        for rest in _compositions(total - first, k - 1):
            yield (first,) + rest


def _regular_value(entry: CatalogEntry, parts) -> LaurentPoly:
    value = LaurentPoly.one(entry.variables)
    for label, i, c in parts:
        value = value * entry.tube(label).base_value(i, 1) ** c
    return value


def _cluster_monomials(entry: CatalogEntry, max_degree: int, depth: int) -> Iterator[tuple[str, LaurentPoly]]:
    root = initial_seed(entry.quiver)
    seen = set()
    for word in reduced_words(root.n, depth):
        s = root
        for k in word:
            s = mutate_seed(s, k)
        for deg in range(1, max_degree + 1):
            for combo in combinations_with_replacement(range(s.n), deg):
                value = LaurentPoly.one(entry.variables)
                for i in combo:
                    value = value * s.cluster[i]
                if value in seen:
                    continue
                seen.add(value)
                word_label = "".join(f"mu{k + 1}" for k in word) or "initial"
                yield f"CM {word_label}: " + "*".join(f"y{i + 1}" for i in combo), value


def gen_basis_elements(entry, kind: str, bound: int, cm_depth: int = 1) -> Iterator[tuple[str, LaurentPoly]]:
    """Elements of B, S or G.

    The delta part runs over n = 1..bound and regular rigid R with at most
    bound - n summands: B uses F_n(X_delta) X_R, S uses X_{n delta} X_R and
    G uses X_delta^n X_R.  The cluster-monomial part lists monomials of
    degree <= bound in the clusters reached by words of length <= cm_depth.
    """
    entry = load_quiver(entry)
    kind = kind.upper()
    if kind not in {"B", "S", "G"}:
        raise OutOfRange(f"basis kind must be B, S or G, got {kind!r}")
    yield from _cluster_monomials(entry, bound, cm_depth)
    xd = entry.xdelta()
    for n in range(1, bound + 1):
        if kind == "B":
            head, hname = cheb_eval(n, xd), f"F_{n}(X_delta)"
        elif kind == "S":
            head, hname = x_ndelta(xd, n), f"X_{n}delta"
        else:
            head, hname = xd ** n, f"X_delta^{n}"
        for label, parts in _regular_rigid(entry, bound - n):
            value = head if not parts else head * _regular_value(entry, parts)
            yield f"{kind} {hname}" + ("" if not parts else f" * X[{label}]"), value


# ----------------------------------------------------------------------------
# suites


def suite_prop41(entry="d4tilde", max_n: int = 5, jobs: int = 1) -> list[IdentityReport]:
    """X_delta X_{P_2} = X_{M_1(3)} + X_{M'_1(1)} and X_delta X_{M_1(n)} = X_{M_1(n+2)} + X_{M_1(n-2)} for odd 3 <= n <= max_n."""
    entry = load_quiver(entry)
    X = lambda name, n: cc_module(entry.presentation(name, n), jobs=jobs)  # noqa: E731
    P2 = entry.presentation("M1", 1)
    reports = [
        check_one_dim_multiplication(
            entry,
            P2,
            (entry.presentation("M1", 3), entry.presentation("M'1", 1)),
            name="X_delta*X[P2] = X[M1(3)] + X[M'1(1)]",
            jobs=jobs,
        )
    ]
    xd = entry.xdelta()
    for n in range(3, max_n + 1, 2):
        left = xd * X("M1", n)
        right = X("M1", n + 2) + X("M1", n - 2)
        reports.append(IdentityReport(f"X_delta*X[M1({n})] = X[M1({n + 2})] + X[M1({n - 2})]", left, right))
    return reports


def suite_prop42(entry="d4tilde", max_n: int = 3, jobs: int = 1) -> list[IdentityReport]:
    """X_delta X_{M'_1(n)} = X_{M'_1(n+2)} + X_{M'_1(n-2)} for odd 3 <= n <= max_n."""
    entry = load_quiver(entry)
    X = lambda name, n: cc_module(entry.presentation(name, n), jobs=jobs)  # noqa: E731
    xd = entry.xdelta()
    reports = []
    for n in range(3, max_n + 1, 2):
        left = xd * X("M'1", n)
        right = X("M'1", n + 2) + X("M'1", n - 2)
        reports.append(IdentityReport(f"X_delta*X[M'1({n})] = X[M'1({n + 2})] + X[M'1({n - 2})]", left, right))
    return reports


def suite_prop43(entry="d4tilde", max_n: int = 3, jobs: int = 1) -> list[IdentityReport]:
    """F_n(X_delta) X_{P_2} = X_{M_1(2n+1)} + X_{M'_1(2n-1)} for 1 <= n <= max_n."""
    entry = load_quiver(entry)
    X = lambda name, n: cc_module(entry.presentation(name, n), jobs=jobs)  # noqa: E731
    xd = entry.xdelta()
    xp2 = X("M1", 1)
    reports = []
    for n in range(1, max_n + 1):
        left = cheb_eval(n, xd) * xp2
        right = X("M1", 2 * n + 1) + X("M'1", 2 * n - 1)
        reports.append(IdentityReport(f"F_{n}(X_delta)*X[P2] = X[M1({2 * n + 1})] + X[M'1({2 * n - 1})]", left, right))
    return reports


def _difference_job(args):
    name, label, i, n, k = args
    entry = load_quiver(name)
    return check_difference_property(entry, entry.tube(label), i, n, k)


def suite_difference(entry="d4tilde", max_n: int = 2, jobs: int = 1) -> list[IdentityReport]:
    """Every tube, quasi-simple, 0 <= n <= max_n and 0 <= k < rank; reports come back in that order."""
    entry = load_quiver(entry)
    tasks = [
        (entry.name, tube.label, i, n, k)
        for tube in entry.tubes
        for i in range(1, tube.rank + 1)
        for n in range(0, max_n + 1)
        for k in range(tube.rank)
    ]
    if jobs > 1 and entry.builtin and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_difference_job, tasks))
    return [check_difference_property(entry, entry.tube(label), i, n, k) for _, label, i, n, k in tasks]
