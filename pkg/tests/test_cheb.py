import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from affine_cc.catalog import load_quiver
from affine_cc.ccmap import cc_module
from affine_cc.cheb import ChebPoly, cheb_eval, cheb_F, split_length, tube_variable, x_ndelta
from affine_cc.errors import OutOfRange
from affine_cc.laurent import LaurentPoly


def test_first_polynomials():
    assert cheb_F(0).coeffs == (2,)
    assert cheb_F(1).coeffs == (0, 1)
    assert cheb_F(2).coeffs == (-2, 0, 1)
    assert cheb_F(3).coeffs == (0, -3, 0, 1)
    assert cheb_F(4).render() == "x^4 - 4*x^2 + 2"


def test_against_sympy_chebyshev():
    # F_n(x) = 2 T_n(x / 2)
    x = sympy.Symbol("x")
    for n in range(13):
        ref = sympy.Poly(sympy.expand(2 * sympy.chebyshevt(n, x / 2)), x)
        assert cheb_F(n).coeffs == tuple(int(c) for c in reversed(ref.all_coeffs()))


def test_eval_paths_agree():
    t = LaurentPoly.gens(("t",))[0]
    z = t + t ** -1
    for n in range(8):
        assert cheb_eval(n, z) == cheb_F(n)(z) == t ** n + t ** -n


def test_product_rule():
    for m in range(7):
        for n in range(7):
            assert cheb_F(m) * cheb_F(n) == cheb_F(m + n) + cheb_F(abs(m - n))


def test_negative_index():
    with pytest.raises(OutOfRange):
        cheb_F(-1)
    assert split_length(7, 2) == (3, 1)


def test_ndelta_recursion_matches_homogeneous_modules():
    kr = load_quiver("kronecker")
    xd = kr.xdelta()
    assert x_ndelta(kr, 0) == 1
    assert x_ndelta(kr, 2) == xd * xd - 1
    for n in (2, 3):
        assert x_ndelta(kr, n) == cc_module(kr.homogeneous(n))


def test_tube_variable_small_lengths():
    d4 = load_quiver("d4tilde")
    for tube in d4.tubes:
        for i in (1, 2):
            assert tube_variable(tube, i, -1) == 0
            assert tube_variable(tube, i, 0) == 1
            for L in (1, 2, 3, 4):
                assert tube_variable(tube, i, L) == tube.base_value(i, L)


def test_chebpoly_arith():
    a, b = ChebPoly((1, 2)), ChebPoly((0, 0, 3))
    assert (a * b).coeffs == (0, 0, 3, 6)
    assert (a + b).coeffs == (1, 2, 3)
    assert (ChebPoly((1, 1)) + ChebPoly((0, -1))).coeffs == (1,)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 8), st.dictionaries(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), st.integers(-3, 3).filter(bool), max_size=3))
def test_eval_matches_polynomial_substitution(n, terms):
    z = LaurentPoly(("x1", "x2"), terms)
    expected = LaurentPoly.zero(z.variables)
    for i, c in enumerate(cheb_F(n).coeffs):
        expected = expected + c * z ** i
    assert cheb_eval(n, z) == cheb_F(n)(z) == expected


def test_ndelta_is_a_sum_of_chebyshev_values():
    # X_{n delta} = F_n + F_{n-2} + ... ending in F_1 or the constant 1
    for entry in (load_quiver("kronecker"), load_quiver("d4tilde")):
        xd = entry.xdelta()
        for n in range(1, 7):
            total = sum((cheb_eval(m, xd) for m in range(n, 0, -2)), LaurentPoly.zero(xd.variables))
            assert x_ndelta(xd, n) == total + (1 if n % 2 == 0 else 0)
