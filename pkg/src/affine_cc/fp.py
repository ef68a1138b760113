"""Linear algebra over a prime field F_p.

Small vectors and subspaces (the ones met while counting subrepresentations)
are plain tuples of ints: a subspace is the tuple of rows of its reduced
row-echelon basis, which makes it canonical and hashable.  Larger systems
(Hom spaces) go through the numpy elimination in :func:`rank_np`.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, product

import numpy as np
from numba import njit

Vec = tuple
Space = tuple  # tuple of RREF rows


def rref(rows, ncols: int, p: int) -> Space:
    """Reduced row-echelon basis of the span of ``rows``."""
    m = [[x % p for x in r] for r in rows]
    out = []
    r0 = 0
    for col in range(ncols):
        piv = None
        for i in range(r0, len(m)):
            if m[i][col]:
                piv = i
                break
        if piv is None:
            continue
        m[r0], m[piv] = m[piv], m[r0]
        row = m[r0]
        inv = pow(row[col], -1, p)
        if inv != 1:
            row = [(x * inv) % p for x in row]
            m[r0] = row
        for i in range(len(m)):
            if i != r0:
                f = m[i][col]
                if f:
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], row)]
        r0 += 1
        if r0 == len(m):
            break
    return tuple(tuple(r) for r in m[:r0])


def pivots(space: Space) -> tuple[int, ...]:
    return tuple(next(j for j, x in enumerate(r) if x) for r in space)


def reduce_vector(v, space: Space, p: int):
    v = list(v)
    for row in space:
        j = next(j for j, x in enumerate(row) if x)
        f = v[j] % p
        if f:
            v = [(a - f * b) % p for a, b in zip(v, row)]
    return [x % p for x in v]


def contains(space: Space, sub: Space, p: int) -> bool:
    return all(not any(reduce_vector(v, space, p)) for v in sub)


def nullspace(rows, ncols: int, p: int) -> list[tuple[int, ...]]:
    """Basis of {x : A x = 0} for A given by its rows."""
    red = rref(rows, ncols, p)
    piv = pivots(red)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        x = [0] * ncols
        x[f] = 1
        for row, pc in zip(red, piv):
            x[pc] = (-row[f]) % p
        basis.append(tuple(x))
    return basis


@lru_cache(maxsize=200_000)
def annihilator(space: Space, ncols: int, p: int) -> tuple:
    """Rows spanning the functionals that vanish on ``space``."""
    return tuple(nullspace(space, ncols, p))


def matvec(mat, v, p: int) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) % p for row in mat)


def image(mat, space: Space, p: int) -> list:
    return [matvec(mat, v, p) for v in space]


def preimage(mat, target: Space, within: Space, target_dim: int, p: int) -> Space:
    """{x in span(within) : mat x in span(target)} as an RREF basis."""
    if not within:
        return ()
    ann = annihilator(target, target_dim, p)
    if not ann:
        return within
    imgs = [matvec(mat, h, p) for h in within]
    cond = [[sum(a * b for a, b in zip(y, img)) % p for img in imgs] for y in ann]
    coeffs = nullspace(cond, len(within), p)
    if len(coeffs) == len(within):
        return within
    ncols = len(within[0])
    vecs = [
        tuple(sum(c * h[j] for c, h in zip(cv, within)) % p for j in range(ncols))
        for cv in coeffs
    ]
    return rref(vecs, ncols, p)


def complement(sub: Space, space: Space, p: int) -> list:
    """Vectors of ``space`` spanning a complement of ``sub`` inside it."""
    cur = list(sub)
    out = []
    ncols = len(space[0]) if space else 0
    red = rref(cur, ncols, p)
    for v in space:
        if any(reduce_vector(v, red, p)):
            out.append(v)
            red = rref(list(red) + [v], ncols, p)
    return out


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def rref_patterns(m: int, k: int, p: int):
    """Every k x m reduced row-echelon matrix over F_p, i.e. every k-subspace of F_p^m."""
    if k == 0:
        yield ()
        return
    for piv in combinations(range(m), k):
        pivset = set(piv)
        free = [(i, j) for i, pc in enumerate(piv) for j in range(pc + 1, m) if j not in pivset]
        for values in product(range(p), repeat=len(free)):
            rows = [[0] * m for _ in range(k)]
            for i, pc in enumerate(piv):
                rows[i][pc] = 1
            for (i, j), x in zip(free, values):
                rows[i][j] = x
            yield tuple(tuple(r) for r in rows)


@lru_cache(maxsize=256)
def _cached_patterns(m: int, k: int, p: int) -> tuple:
    return tuple(rref_patterns(m, k, p))


def subspaces(m: int, k: int, p: int):
    """k-subspaces of F_p^m; cached when the list is small."""
    if gaussian_binomial(m, k, p) <= 50_000:
        return _cached_patterns(m, k, p)
    return rref_patterns(m, k, p)


def intermediate_subspaces(low: Space, high: Space, k: int, p: int, ncols: int):
    """Every k-dimensional U with span(low) <= U <= span(high), as RREF bases."""
    comp = complement(low, high, p)
    need = k - len(low)
    if need < 0 or need > len(comp):
        return
    for pattern in subspaces(len(comp), need, p):
        vecs = list(low)
        for row in pattern:
            vecs.append(tuple(sum(c * v[j] for c, v in zip(row, comp)) % p for j in range(ncols)))
        yield rref(vecs, ncols, p)


@njit(cache=True)
def _rank_inplace(m, rows, cols, p):
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if m[i, c] % p:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                t = m[r, j]
                m[r, j] = m[piv, j]
                m[piv, j] = t
        inv = 1
        base, e = m[r, c] % p, p - 2
        while e:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for j in range(c, cols):
            m[r, j] = m[r, j] * inv % p
        for i in range(r + 1, rows):
            f = m[i, c] % p
            if f:
                for j in range(c, cols):
                    m[i, j] = (m[i, j] - f * m[r, j]) % p
        r += 1
    return r


def rank_np(a: np.ndarray, p: int) -> int:
    """Rank over F_p by Gaussian elimination."""
    m = np.array(a, dtype=np.int64) % p
    if m.ndim != 2 or m.size == 0:
        return 0
    return int(_rank_inplace(m, m.shape[0], m.shape[1], p))


def nullspace_np(a: np.ndarray, p: int) -> np.ndarray:
    """Rows spanning the right kernel of ``a`` over F_p."""
    m = np.array(a, dtype=np.int64) % p
    rows, cols = m.shape
    piv_cols = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        mask = col != 0
        if mask.any():
            m[mask] = (m[mask] - np.outer(col[mask], m[r])) % p
        piv_cols.append(c)
        r += 1
    free = [c for c in range(cols) if c not in piv_cols]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for row, pc in enumerate(piv_cols):
            basis[i, pc] = (-m[row, f]) % p
    return basis


def small_primes(count: int, start: int = 2) -> list[int]:
    out = []
    c = max(start, 2)
    while len(out) < count:
        if all(c % d for d in range(2, int(c ** 0.5) + 1)):
            out.append(c)
        c += 1
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


@njit(cache=True)
def _stacked_ranks(fixed, block, extras, p):
    count, k, cols = block.shape
    f = fixed.shape[0]
    out = np.zeros((count, 1 + len(extras)), dtype=np.int64)
    for idx in range(count):
        m = np.empty((f + k, cols), dtype=np.int64)
        m[:f] = fixed
        m[f:] = block[idx]
        out[idx, 0] = _rank_inplace(m, f + k, cols, p)
        for x in range(len(extras)):
            extra = extras[x]
            m = np.empty((f + k + extra.shape[0], cols), dtype=np.int64)
            m[:f] = fixed
            m[f:f + k] = block[idx]
            m[f + k:] = extra
            out[idx, x + 1] = _rank_inplace(m, m.shape[0], cols, p)
    return out


def stacked_ranks(fixed: np.ndarray, block: np.ndarray, extras, p: int) -> np.ndarray:
    """For each matrix B in ``block``: rank [fixed; B] and rank [fixed; B; X] for X in extras.

    Returns an array of shape (len(block), 1 + len(extras)).
    """
    cols = block.shape[2]
    fixed = np.ascontiguousarray(np.asarray(fixed, dtype=np.int64).reshape(-1, cols) % p)
    block = np.ascontiguousarray(np.asarray(block, dtype=np.int64) % p)
    extras = tuple(np.ascontiguousarray(np.asarray(x, dtype=np.int64).reshape(-1, cols) % p) for x in extras)
    return _stacked_ranks(fixed, block, extras, p)


@njit(cache=True)
def _image_rank_hist(pivs, m, k, p, mats, sink_of, radix, hist):
    n_arrows, width = mats.shape[0], mats.shape[1]
    nsinks = radix.shape[0]
    u = np.zeros((k, m), dtype=np.int64)
    free_i = np.empty(k * m, dtype=np.int64)
    free_j = np.empty(k * m, dtype=np.int64)
    buf = np.empty((n_arrows * k, width), dtype=np.int64)
    for c in range(pivs.shape[0]):
        u[:, :] = 0
        nf = 0
        for i in range(k):
            u[i, pivs[c, i]] = 1
            for j in range(pivs[c, i] + 1, m):
                is_piv = False
                for i2 in range(k):
                    if pivs[c, i2] == j:
                        is_piv = True
                if not is_piv:
                    free_i[nf] = i
                    free_j[nf] = j
                    nf += 1
        vals = np.zeros(nf, dtype=np.int64)
        while True:
            for f in range(nf):
                u[free_i[f], free_j[f]] = vals[f]
            code = 0
            for t in range(nsinks):
                rows = 0
                for a in range(n_arrows):
                    if sink_of[a] != t:
                        continue
                    for i in range(k):
                        for row in range(width):
                            s = 0
                            for j in range(m):
                                s += mats[a, row, j] * u[i, j]
                            buf[rows, row] = s % p
                        rows += 1
                code = code * radix[t] + _rank_inplace(buf, rows, width, p)
            hist[code] += 1
            f = 0
            while f < nf:
                vals[f] += 1
                if vals[f] < p:
                    break
                vals[f] = 0
                f += 1
            if f == nf:
                break


def image_rank_histogram(groups, m: int, k: int, p: int) -> dict[tuple[int, ...], int]:
    """Distribution of image ranks over all k-subspaces U of F_p^m.

    ``groups`` lists, per target, the matrices (d_t x m) applied to U; the
    key is the tuple of dim(sum of M U over the group) per target.
    """
    if k == 0:
        return {tuple(0 for _ in groups): 1}
    width = max([1] + [len(mat) for g in groups for mat in g])
    flat, sink_of = [], []
    for t, g in enumerate(groups):
        for mat in g:
            z = np.zeros((width, m), dtype=np.int64)
            a = np.asarray(mat, dtype=np.int64).reshape(-1, m) % p
            z[: a.shape[0]] = a
            flat.append(z)
            sink_of.append(t)
    mats = np.array(flat, dtype=np.int64).reshape(len(flat), width, m)
    radix = np.array([width + 1] * len(groups), dtype=np.int64)
    hist = np.zeros(int(np.prod(radix)) if len(groups) else 1, dtype=np.int64)
    pivs = np.array(list(combinations(range(m), k)), dtype=np.int64).reshape(-1, k)
    _image_rank_hist(pivs, m, k, p, mats, np.array(sink_of, dtype=np.int64), radix, hist)
    out = {}
    for code in np.nonzero(hist)[0]:
        key, c = [], int(code)
        for _ in groups:
            c, r = divmod(c, width + 1)
            key.append(r)
        out[tuple(reversed(key))] = int(hist[code])
    return out
