import random
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from ballquot import data
from ballquot.abelian import (AbelianInvariants, Class2Collector, IntegerMatrix, abelian_invariants,
                              class2_quotient_invariants, free_rank_mod_p, invariant_factors,
                              random_sparse_matrix, rank_mod_p, relation_matrix, smith_normal_form)
from ballquot.matgroups import ModMatrix
from ballquot.words import Word, parse_presentation


def _diag(rows, cols, factors):
    return IntegerMatrix(rows, cols, {(i, i): f for i, f in enumerate(factors)})


def _check_snf(a: IntegerMatrix):
    factors, u, v = smith_normal_form(a)
    d = u @ a @ v
    assert d == _diag(a.rows, a.cols, factors)
    assert all(f > 0 for f in factors)
    assert all(y % x == 0 for x, y in zip(factors, factors[1:]))
    assert abs(u.determinant()) == 1 and abs(v.determinant()) == 1
    # reconstruction a = u^-1 d v^-1
    ui = ModMatrix(u.to_dense()).inverse()
    vi = ModMatrix(v.to_dense()).inverse()
    back = IntegerMatrix.from_dense(ui.rows) @ d @ IntegerMatrix.from_dense(vi.rows)
    assert back == a
    assert invariant_factors(a) == factors
    return factors


def test_snf_examples():
    assert _check_snf(IntegerMatrix.from_dense([[2, 0], [0, 3]])) == [1, 6]
    assert _check_snf(IntegerMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])) == [2, 6, 12]
    assert _check_snf(IntegerMatrix.from_dense([[0, 0], [0, 0]])) == []


def test_snf_reconstruction_random_sparse():
    rng = random.Random(12345)
    for _ in range(100):
        r, c = rng.randint(1, 7), rng.randint(1, 7)
        a = random_sparse_matrix(r, c, 0.35, 6, rng)
        if a.rows == 0 or a.cols == 0:
            continue
        factors = _check_snf(a)
        if r == c and len(factors) == r:
            assert prod(factors) == abs(a.determinant())


@settings(max_examples=50, deadline=None)
@given(st.lists(st.lists(st.integers(-9, 9), min_size=4, max_size=4), min_size=1, max_size=5))
def test_invariant_factors_match_snf(rows):
    a = IntegerMatrix.from_dense(rows)
    assert invariant_factors(a) == smith_normal_form(a)[0]


def test_large_unit_pivot_path():
    # a long unimodular bidiagonal block next to diag(2, 3): factors 1^400 then 6
    n = 400
    entries = {(i, i): 1 for i in range(n)}
    entries.update({(i, i + 1): 1 for i in range(n - 1)})
    entries[(n, n)] = 2
    entries[(n + 1, n + 1)] = 3
    entries[(n, 5)] = 4
    a = IntegerMatrix(n + 2, n + 2, entries)
    assert invariant_factors(a) == [1] * (n + 1) + [6]


def test_abelian_invariants_validation_and_text():
    assert str(AbelianInvariants(2, (3, 9))) == "Z^2 + Z/3 + Z/9"
    assert str(AbelianInvariants(0, ())) == "0"
    with pytest.raises(ValueError):
        AbelianInvariants(0, (2, 3))
    with pytest.raises(ValueError):
        AbelianInvariants(0, (1,))
    assert AbelianInvariants.from_factors(3, [1, 2, 6]) == AbelianInvariants(0, (2, 6))


def test_presentation_invariants():
    assert abelian_invariants(data.load_presentation("gamma1.pres")) == AbelianInvariants(4, ())
    assert abelian_invariants(data.load_presentation("3-3-3.pres")) == AbelianInvariants(0, (3,))
    assert abelian_invariants(data.load_presentation("3-4-6.pres")) == AbelianInvariants(0, (12,))
    assert abelian_invariants(parse_presentation("gens: a b\n")) == AbelianInvariants(2, ())


def test_rank_mod_p():
    a = IntegerMatrix.from_dense([[1, 2], [3, 6], [0, 5]])
    assert rank_mod_p(a, 2) == 2
    assert rank_mod_p(a, 5) == 1
    rng = random.Random(7)
    for _ in range(30):
        m = random_sparse_matrix(rng.randint(1, 9), rng.randint(1, 9), 0.4, 5, rng)
        assert rank_mod_p(m, 101) == len(invariant_factors(m)) - sum(f % 101 == 0 for f in invariant_factors(m))


def test_free_rank_mod_p_on_gamma1():
    b = free_rank_mod_p(data.load_presentation("gamma1.pres"))
    assert b.upper == 4
    assert relation_matrix(data.load_presentation("gamma1.pres")).cols == 4


def test_class2_heisenberg_and_free():
    ab, comm = class2_quotient_invariants(data.load_presentation("heisenberg.pres"))
    assert ab == AbelianInvariants(2, ()) and comm == AbelianInvariants(1, ())
    ab, comm = class2_quotient_invariants(parse_presentation("gens: a b c\n"))
    assert ab == AbelianInvariants(3, ()) and comm == AbelianInvariants(3, ())
    ab, comm = class2_quotient_invariants(parse_presentation("gens: a b\nrel: a b A B\n"))
    assert ab == AbelianInvariants(2, ()) and comm == AbelianInvariants(0, ())


letters = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12)


@given(letters, letters)
def test_class2_collection_is_homomorphism(u, v):
    c = Class2Collector(3)
    x, y = c.collect(Word(u)), c.collect(Word(v))
    assert c.collect(Word(u) * Word(v)) == c.mul(x, y)
    assert c.collect(Word(u) ** 3) == c.power(x, 3)
    assert c.collect(Word(u) ** -2) == c.power(x, -2)
