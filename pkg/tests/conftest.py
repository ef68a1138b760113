import sympy

from affine_cc.laurent import LaurentPoly


def to_sympy(p: LaurentPoly):
    xs = sympy.symbols(p.variables)
    if not isinstance(xs, tuple):
        xs = (xs,)
    expr = sympy.Integer(0)
    for exps, c in p.terms.items():
        term = sympy.Integer(c)
        for x, a in zip(xs, exps):
            term *= x ** a
        expr += term
    return expr, xs


def sympy_equal(p: LaurentPoly, expr) -> bool:
    mine, _ = to_sympy(p)
    return sympy.simplify(sympy.together(mine - expr)) == 0


def oracle_cc(fam, primes):
    """X_M from brute-force subspace enumeration and sympy interpolation.

    Shares nothing with the production counter or interpolation: every
    tuple of subspaces is tested, the count polynomial is fitted by sympy
    through all the given primes and evaluated at 1.
    """
    import itertools

    import numpy as np

    from affine_cc.laurent import default_variables
    from affine_cc.rep import count_subreps_bruteforce

    q = fam.quiver
    x = sympy.Symbol("q")
    E = np.eye(q.n, dtype=np.int64)
    for s, t in q.arrows:
        E[s, t] -= 1
    terms = {}
    for e in itertools.product(*(range(d + 1) for d in fam.dims)):
        pts = [(p, count_subreps_bruteforce(fam.at(p), e)) for p in primes]
        chi = int(sympy.interpolate(pts, x).subs(x, 1)) if len(pts) > 1 else pts[0][1]
        if chi:
            ev = np.array(e)
            f = np.array(fam.dims) - ev
            exps = tuple(int(v) for v in -(ev @ E) - (E @ f))
            terms[exps] = terms.get(exps, 0) + chi
    return LaurentPoly(default_variables(q.n), terms)
