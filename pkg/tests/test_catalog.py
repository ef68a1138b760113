import json

import numpy as np
import pytest

from affine_cc.catalog import compatible, dim_family, load_quiver, normalize_family, presentation
from affine_cc.errors import NoPresentation, NotAffine, OutOfRange, ParityViolation
from affine_cc.quiver import euler_form
from affine_cc.rep import ext1_dim, hom_dim

D4 = load_quiver("d4tilde")
KR = load_quiver("kronecker")


def test_delta():
    assert D4.delta == (2, 1, 1, 1, 1)
    assert KR.delta == (1, 1)
    assert load_quiver("D4~") is D4 and load_quiver("kron") is KR


def test_family_dimensions():
    assert dim_family(D4, "M1", 1) == (1, 1, 0, 0, 0)
    assert dim_family(D4, "M1", 3) == (3, 2, 1, 1, 1)
    assert dim_family(D4, "M'1", 1) == (0, 1, 0, 0, 0)
    assert dim_family(D4, "M'1", 3) == (2, 2, 1, 1, 1)
    assert dim_family(D4, "N2", 4) == (4, 2, 1, 2, 2)
    assert dim_family(D4, "C", 1) == (1, 0, 0, 0, 0)
    assert dim_family(D4, "C'", 2) == (3, 2, 2, 2, 2)
    assert dim_family(KR, "P", 2) == (2, 3)
    # the odd and even families step by delta every two indices
    for name in ("M1", "M'2", "N3", "N'4", "C", "C'"):
        n0 = 2 if name.startswith("N") else 1
        a, b = dim_family(D4, name, n0), dim_family(D4, name, n0 + 2)
        step = np.array(b) - np.array(a)
        assert tuple(step) == tuple(2 * x for x in D4.delta) if name.startswith("C") else tuple(step) == D4.delta


def test_family_members_are_real_roots():
    for name in ("M1", "M4", "M'3", "C", "C'"):
        for n in (1, 3, 5):
            d = dim_family(D4, name, n)
            assert euler_form(D4.quiver, d, d) == 1


def test_parity_and_range():
    with pytest.raises(ParityViolation):
        dim_family(D4, "M1", 2)
    with pytest.raises(ParityViolation):
        dim_family(D4, "N1", 3)
    with pytest.raises(OutOfRange):
        dim_family(D4, "N1", 0)
    with pytest.raises(OutOfRange):
        dim_family(D4, "Q1", 1)
    with pytest.raises(NoPresentation):
        presentation(D4, "M1", 9)


def test_name_spellings():
    for s in ("M'1", "M1'", "Mp1", "M′1"):
        assert normalize_family(s) == "M'1"
    assert dim_family(D4, "m1", 3) == (3, 2, 1, 1, 1)


def test_presentations_have_generic_flags():
    for name, n in [("M1", 1), ("M2", 3), ("M'1", 3), ("N1", 2), ("C", 2), ("C'", 1), ("N'3", 4)]:
        fam = presentation(D4, name, n)
        assert fam.is_rigid_indecomposable
        rep = presentation(D4, name, n, prime=7)
        assert hom_dim(rep, rep) == 1 and ext1_dim(rep, rep) == 0


def test_tubes():
    assert [t.label for t in D4.tubes] == ["1", "∞", "0"]
    phi = D4.quiver.coxeter
    for tube in D4.tubes:
        assert tube.rank == 2
        a, b = tube.dims
        assert tuple(x + y for x, y in zip(a, b)) == D4.delta
        # tau permutes the mouth cyclically
        assert tuple(phi @ np.array(b)) == a and tuple(phi @ np.array(a)) == b
        e1, e2 = (tube.presentation(i, 1).at(5) for i in (1, 2))
        assert ext1_dim(e2, e1) == 1 and ext1_dim(e1, e2) == 1
        assert hom_dim(e1, e2) == 0
        assert tube.presentation(1, 3).dims == tuple(x + y for x, y in zip(D4.delta, a))
    assert D4.tube("inf") is D4.tube("∞")
    assert KR.tubes == []


def test_homogeneous_modules():
    for n in (1, 2):
        m = D4.homogeneous(n)
        assert m.dims == tuple(n * x for x in D4.delta)
        assert m.end_dim == n and m.self_ext == n
    with pytest.raises(NoPresentation):
        D4.homogeneous(9)


def test_compatibility():
    tube = D4.tube("1")
    assert compatible(D4, [(1, 0, 0, 0, 0), (1, 1, 0, 0, 0)], tube)
    assert not compatible(D4, [tube.dims[0], (1, 0, 0, 0, 0)], tube)


def test_quiver_files(tmp_path):
    a2 = tmp_path / "a2.json"
    a2.write_text(json.dumps({"vertices": 2, "arrows": [[1, 2]]}))
    with pytest.raises(NotAffine):
        load_quiver(a2)
    wild = tmp_path / "k3.json"
    wild.write_text(json.dumps({"vertices": 2, "arrows": [[1, 2]] * 3}))
    with pytest.raises(NotAffine):
        load_quiver(wild)
    a2t = tmp_path / "a2t.json"
    a2t.write_text(json.dumps({"vertices": 3, "arrows": [[1, 2], [2, 3], [1, 3]], "tubes": [{"label": "t", "quasi_simples": [[0, 1, 0], [1, 0, 1]]}]}))
    entry = load_quiver(a2t)
    assert entry.delta == (1, 1, 1)
    assert entry.tubes[0].rank == 2
    e6 = tmp_path / "e6.json"
    e6.write_text(json.dumps({"vertices": 7, "arrows": [[2, 1], [3, 2], [4, 1], [5, 4], [6, 1], [7, 6]]}))
    assert load_quiver(e6).delta == (3, 2, 1, 2, 1, 2, 1)
    with pytest.raises(OutOfRange):
        load_quiver(tmp_path / "missing.json")


def test_json_export():
    data = D4.to_json()
    assert data["delta"] == [2, 1, 1, 1, 1]
    assert data["families"]["M1"]["dims"]["3"] == [3, 2, 1, 1, 1]
    assert len(data["tubes"]) == 4
    json.dumps(data, ensure_ascii=False)


def test_shipped_presentations_match_formulas():
    from affine_cc.catalog import MAX_FAMILY_N

    for entry in (D4, KR):
        for name, fam in entry.families.items():
            for n in range(fam.min_n, MAX_FAMILY_N + 1):
                if fam.parity == "odd" and n % 2 == 0 or fam.parity == "even" and n % 2:
                    continue
                assert entry.presentation(name, n).dims == dim_family(entry, name, n)


def test_quasi_simples_are_bricks_without_self_extensions():
    assert len(D4.quasi_simple_names) == 6
    for name in D4.quasi_simple_names:
        rep = D4.quasi_simple(name).at(5)
        assert hom_dim(rep, rep) == 1 and ext1_dim(rep, rep) == 0


@pytest.mark.parametrize("entry", [D4, KR], ids=["d4tilde", "kronecker"])
def test_delta_in_radical(entry):
    n = entry.quiver.n
    for i in range(n):
        unit = tuple(int(j == i) for j in range(n))
        assert euler_form(entry.quiver, entry.delta, unit) + euler_form(entry.quiver, unit, entry.delta) == 0
