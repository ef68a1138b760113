import pytest

from affine_cc.catalog import load_quiver
from affine_cc.cheb import x_ndelta
from affine_cc.errors import OutOfRange, PreconditionFailed, Unsupported
from affine_cc.laurent import LaurentPoly, lp_divexact, lp_is_nonneg
from affine_cc.verify import (
    IdentityReport,
    check_cheb_ladder,
    check_difference_property,
    check_one_dim_multiplication,
    check_positivity,
    element,
    gen_basis_elements,
    suite_prop41,
)

D4 = load_quiver("d4tilde")
KR = load_quiver("kronecker")


def test_negative_control_nonneg():
    xd = D4.xdelta()
    ok, witness = lp_is_nonneg(xd * xd - 3)
    assert not ok and witness[0] < 0


def test_negative_control_wrong_summand():
    p2 = D4.presentation("M1", 1)
    good = check_one_dim_multiplication(D4, p2, (D4.presentation("M1", 3), D4.presentation("M'1", 1)))
    assert good.ok
    bad = check_one_dim_multiplication(D4, p2, (D4.presentation("M1", 3), D4.presentation("M'2", 1)))
    assert not bad.equal and not bad.diff.is_zero()
    assert "FAIL" in bad.line() or not bad.ok


def test_precondition():
    # Ext^1 in the cluster category between P_1 and M(delta) is two-dimensional
    with pytest.raises(PreconditionFailed):
        check_one_dim_multiplication(D4, (1, 0, 0, 0, 0), ((0, 0, 0, 0, 0), (0, 0, 0, 0, 0)))


def test_ladders():
    assert check_cheb_ladder(D4, (1, 1, 0, 0, 0), 1).ok
    assert check_cheb_ladder(D4, (1, 1, 0, 0, 0), 2).ok
    assert check_cheb_ladder(KR, (0, 1), 1).ok
    assert check_cheb_ladder(KR, (1, 2), 2).ok
    with pytest.raises(Unsupported):
        check_cheb_ladder(D4, (3, 1, 1, 1, 0), 1)
    with pytest.raises(OutOfRange):
        check_cheb_ladder(D4, (1, 1, 0, 0, 0), 0)


def test_difference_property_small():
    for tube in D4.tubes:
        for i in (1, 2):
            for k in (0, 1):
                assert check_difference_property(D4, tube, i, 1, k).ok
    with pytest.raises(OutOfRange):
        check_difference_property(D4, "1", 1, 1, 2)


def test_prop41_n1():
    reports = suite_prop41(D4, max_n=1)
    assert len(reports) == 1 and reports[0].ok
    data = reports[0].to_json()
    assert data["equal"] is True


def test_positivity():
    reports = check_positivity(KR.xdelta(), KR, 3, "X_delta")
    assert len(reports) == 7 and all(r.ok for r in reports)
    assert [r.word for r in reports] == sorted(r.word for r in reports)
    bad = check_positivity(KR.xdelta() - 1, KR, 1, "X_delta - 1")
    assert not bad[0].ok and bad[0].witness is not None


def test_positivity_parallel_matches_serial():
    z = x_ndelta(D4, 2)
    a = check_positivity(z, D4, 2, "X_2delta", jobs=1)
    b = check_positivity(z, D4, 2, "X_2delta", jobs=2)
    assert [r.to_json() for r in a] == [r.to_json() for r in b]


def test_elements():
    assert element(KR, "xdelta")[1] == KR.xdelta()
    assert element(KR, "ndelta:2")[1] == KR.xdelta() ** 2 - 1
    assert element(D4, "tube:1:1:2")[0] == "X[E1[2]]"
    with pytest.raises(OutOfRange):
        element(D4, "bogus:1")


def test_basis_counts():
    kr = list(gen_basis_elements(KR, "B", 3))
    assert len(kr) == 24
    names = [n for n, _ in gen_basis_elements(D4, "S", 2)]
    assert len(names) == len(set(names))
    assert any("X_1delta * X[E1]" in n for n in names)
    with pytest.raises(OutOfRange):
        list(gen_basis_elements(KR, "Q", 2))


def test_identity_report_json():
    one = LaurentPoly.one(("x1",))
    r = IdentityReport("trivial", one, one)
    assert r.ok and r.to_json()["identity"] == "trivial"


@pytest.mark.parametrize("entry,t", [(KR, (0, 1)), (D4, (1, 1, 0, 0, 0))], ids=["kronecker", "d4tilde"])
def test_ladder_induction_step(entry, t):
    # right sides obey the same three-term recursion as F_n, starting from 2 X_T
    r1, r2 = (check_cheb_ladder(entry, t, n) for n in (1, 2))
    base = 2 * lp_divexact(r1.left, entry.xdelta())
    assert r2.right == entry.xdelta() * r1.right - base
    assert r2.left == entry.xdelta() * r1.left - base


@pytest.mark.parametrize("entry,bound", [(KR, 4), (D4, 3)], ids=["kronecker", "d4tilde"])
def test_s_elements_in_terms_of_b_elements(entry, bound):
    xd = entry.xdelta()
    b = dict(gen_basis_elements(entry, "B", bound))
    s = dict(gen_basis_elements(entry, "S", bound))
    checked = 0
    for label, value in s.items():
        if not label.startswith("S X_"):
            continue
        head, _, rest = label[len("S X_"):].partition("delta")
        n = int(head)
        b_name = lambda m: f"B F_{m}(X_delta){rest}"  # noqa: E731
        x_r = lp_divexact(b[b_name(1)], xd)
        total = sum((b[b_name(m)] for m in range(n, 0, -2)), LaurentPoly.zero(xd.variables))
        assert value == total + (x_r if n % 2 == 0 else 0)
        checked += 1
    assert checked >= bound
