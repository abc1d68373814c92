from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ballquot.eisenstein import (H0, ONE, SQRT_M3, ZERO, ZETA, CycMatrix, CycScalar, check_integral_form,
                                 parse_scalar, projective_equal, unitarity_scalar)
from ballquot import data

q = st.fractions(min_value=-20, max_value=20, max_denominator=12)
scalars = st.builds(CycScalar, q, q)


def test_zeta_relations():
    assert ZETA * ZETA == ZETA - 1
    assert ZETA ** 6 == ONE and ZETA ** 3 == -ONE
    assert SQRT_M3 * SQRT_M3 == CycScalar(-3)
    assert ZETA.conjugate() == ONE - ZETA
    assert ZETA * ZETA.conjugate() == ONE


@given(scalars, scalars, scalars)
def test_field_axioms(a, b, c):
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + ZERO == a and a * ONE == a
    assert a - a == ZERO
    if a:
        assert a * a.inverse() == ONE
        assert (b / a) * a == b


@given(scalars, scalars)
def test_conjugation_and_norm(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()
    assert a.norm() == (a * a.conjugate()).a and (a * a.conjugate()).b == 0
    assert (a * b).norm() == a.norm() * b.norm()


def test_parse_scalar():
    assert parse_scalar("-1/3 + 2/3*z") == CycScalar(Fraction(-1, 3), Fraction(2, 3))
    assert parse_scalar("1 - z") == ONE - ZETA
    assert parse_scalar("z") == ZETA
    with pytest.raises(ValueError):
        parse_scalar("")
    with pytest.raises(ValueError):
        parse_scalar("1 + w")


def test_integrality():
    assert (ZETA + 3).is_integral()
    assert not CycScalar(Fraction(1, 2)).is_integral()


def test_matrix_inverse_and_projective():
    x = data.load_cyc_matrices("dm_x.mat")["x"]
    y = data.load_cyc_matrices("dm_y.mat")["y"]
    for m in (x, y, x * y):
        assert m * m.inverse() == CycMatrix.identity()
        assert unitarity_scalar(m) is not None
        ok, s = projective_equal(ZETA * m, m)
        assert ok and s == ZETA
    assert not projective_equal(x, y)[0]
    assert (x * y).projective_key() == (CycScalar(5) * x * y).projective_key()


def test_integral_form_check():
    assert check_integral_form(CycMatrix.identity())
    r = SQRT_M3
    ok = CycMatrix([[1, 0, r.inverse()], [r, 1, 0], [r, r, 1]])
    assert check_integral_form(ok)
    bad = CycMatrix([[1, 0, 0], [1, 1, 0], [0, 0, 1]])
    assert not check_integral_form(bad)


def test_hermitian_form_is_symmetric():
    assert H0.star() == H0
