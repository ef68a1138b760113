import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from affine_cc.errors import NotDivisible, UnboundVariable, VariableMismatch
from affine_cc.laurent import LaurentPoly, lp_arith, lp_divexact, lp_is_nonneg, lp_substitute, parse

from conftest import to_sympy

V = ("x1", "x2", "x3")

terms = st.dictionaries(
    st.tuples(*(st.integers(-3, 3) for _ in V)), st.integers(-5, 5).filter(bool), max_size=6
)
polys = terms.map(lambda t: LaurentPoly(V, t))


def test_zero_coefficients_dropped():
    p = LaurentPoly(V, {(1, 0, 0): 0, (0, 1, 0): 2})
    assert p.terms == {(0, 1, 0): 2}
    assert LaurentPoly(V, {(1, 0, 0): 3}) - LaurentPoly(V, {(1, 0, 0): 3}) == 0


def test_render_and_parse():
    x1, x2, _ = LaurentPoly.gens(V)
    p = (x1 ** 2 + x2 ** 2 + 1) * x1 ** -1 * x2 ** -1
    assert p.render_fraction() == "(x1^2 + x2^2 + 1)/(x1*x2)"
    assert parse(p.render(), V) == p
    assert parse(p.render_fraction(), V) == p
    assert parse("3*x1^-2*x3 - 2", V) == LaurentPoly(V, {(-2, 0, 1): 3, (0, 0, 0): -2})


def test_parse_rejects_garbage():
    with pytest.raises(ValueError):
        parse("x1 + y", V)
    with pytest.raises(ValueError):
        parse("x1/(x1 + 1)", V)


def test_variable_mismatch():
    a = LaurentPoly.one(("x1",))
    with pytest.raises(VariableMismatch):
        a + LaurentPoly.one(("x2",))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == 0


@settings(max_examples=40, deadline=None)
@given(polys, polys)
def test_arith_against_sympy(a, b):
    sa, _ = to_sympy(a)
    sb, _ = to_sympy(b)
    for op, ref in (("add", sa + sb), ("sub", sa - sb), ("mul", sa * sb)):
        got, _ = to_sympy(lp_arith(a, b, op))
        assert sympy.expand(got - ref) == 0


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_divexact_inverts_multiplication(a, b):
    if b.is_zero():
        return
    assert lp_divexact(a * b, b) == a


def test_divexact_detects_remainder():
    x1, x2, _ = LaurentPoly.gens(V)
    with pytest.raises(NotDivisible):
        lp_divexact(x1 ** 2 + 1, x1 + 1)
    with pytest.raises(NotDivisible):
        lp_divexact(x1 + x2, x1 + 2 * x2 + 1)
    with pytest.raises(ZeroDivisionError):
        lp_divexact(x1, LaurentPoly.zero(V))


def test_substitute_matches_sympy():
    x1, x2, x3 = LaurentPoly.gens(V)
    p = x1 ** -2 * x2 + 3 * x3 - x1 * x2 ** -1
    bindings = {
        "x1": (x2 + 1, (0, 0, 1)),  # (x2 + 1)/x3
        "x2": (x1, None),
        "x3": (x1 * x2 + 2, (1, 0, 0)),
    }
    num, den = lp_substitute(p, bindings)
    s1, s2, s3 = sympy.symbols(V)
    ref = (s2 + 1) ** -2 * s3 ** 2 * s1 + 3 * (s1 * s2 + 2) / s1 - (s2 + 1) / (s3 * s1)
    n_expr, _ = to_sympy(num)
    d_expr, _ = to_sympy(den)
    assert sympy.simplify(n_expr / d_expr - ref) == 0
    with pytest.raises(UnboundVariable):
        lp_substitute(p, {"x1": bindings["x1"]})


def test_is_nonneg_reports_witness():
    x1, x2, _ = LaurentPoly.gens(V)
    ok, w = lp_is_nonneg(x1 + 2 * x2)
    assert ok and w is None
    ok, w = lp_is_nonneg(x1 - 3 * x2 ** -1)
    assert not ok and w == (-3, (0, -1, 0))


def test_json_roundtrip():
    p = parse("(x1^2 - 4*x2*x3 + 1)/(x1*x3^2)", V)
    assert LaurentPoly.from_json(V, p.to_json()) == p


@given(polys)
def test_identity_substitution(p):
    gens = LaurentPoly.gens(V)
    num, den = lp_substitute(p, {v: (g, None) for v, g in zip(V, gens)})
    assert den == 1 and num == p
