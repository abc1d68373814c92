import pytest

from ballquot import data
from ballquot.matgroups import (ModMatrix, OrderCapExceeded, center_order, closed_form_power,
                                closure_enumerate, commutator, element_order, format_matrices,
                                parse_matrices, power_closed_form_check, verify_commutator_powers, verify_relations)
from ballquot.perms import FiniteGroup, Perm
from ballquot.words import LEFT, RIGHT


def test_modmatrix_basics():
    a = ModMatrix([[1, 1], [0, 1]], 5)
    assert a ** 5 == ModMatrix.identity(2, 5)
    assert element_order(a) == 5
    assert a * a.inverse() == ModMatrix.identity(2, 5)
    z = ModMatrix([[2, 1], [1, 1]])
    assert z * z.inverse() == ModMatrix.identity(2)
    assert z.determinant() == 1
    with pytest.raises(ValueError):
        ModMatrix([[1]], 1)
    with pytest.raises(OrderCapExceeded):
        element_order(ModMatrix([[1, 1], [0, 1]]), cap=50)


def test_matrix_file_round_trip():
    mats = data.load_matrices("tau_h.mat")
    assert set(mats) == {"h1", "h2", "h3", "h4"}
    assert parse_matrices(format_matrices(mats)) == mats


def test_heisenberg_mod_3():
    a = ModMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]], 3)
    b = ModMatrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]], 3)
    g = closure_enumerate([a, b])
    assert g.order == 27
    assert center_order(g) == 3
    c = commutator(a, b)
    assert c != ModMatrix.identity(3, 3) and c ** 3 == ModMatrix.identity(3, 3)


def test_tau_relations_both_conventions():
    taus = data.tau_matrices()[0]
    p = data.load_presentation("gamma1.pres")
    assert all(verify_relations(taus, p, LEFT))
    assert all(verify_relations(taus, p, RIGHT))


def test_closed_form_powers():
    from ballquot.hirzebruch import tau_images
    t = tau_images()
    for j in range(1, 5):
        assert closed_form_power(j, 0) == ModMatrix.identity(5)
        for m in (-3, 1, 4):
            assert power_closed_form_check(j, m, t)


def test_commutator_powers_n1_to_5():
    from ballquot.hirzebruch import tau_images
    t = tau_images()
    for n in range(1, 6):
        assert all(verify_commutator_powers(n, t, t).values())


def test_finite_group_helpers():
    s3 = FiniteGroup.generated_by([Perm([1, 0, 2]), Perm([1, 2, 0])], Perm.identity(3))
    assert s3.order == 6
    assert len(s3.center()) == 1
    assert len(s3.derived_subgroup()) == 3
    assert s3.order_histogram() == {1: 1, 2: 3, 3: 2}
    assert all(s3.inverse(g) * g == s3.identity for g in s3)
