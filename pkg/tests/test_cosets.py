import pytest
from hypothesis import given, settings, strategies as st

from ballquot import data
from ballquot.cosets import (FELSCH, HLT, CosetTable, ResourceLimitError, coset_enumerate, is_normal,
                             membership, perm_rep, permutation_image_order, table_from_finite_quotient,
                             transversal)
from ballquot.perms import Perm
from ballquot.words import Word, parse_presentation

from shipped import shipped_enumerations

S3 = parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b\n")


def test_trivial_subgroup_gives_group_order():
    assert coset_enumerate(S3).index == 6
    assert coset_enumerate(data.load_presentation("3-3-3.pres")).index == 24
    assert coset_enumerate(data.load_presentation("3-4-6.pres")).index == 288


def test_non_normal_index_three():
    t = coset_enumerate(S3, [S3.word("a")])
    assert t.index == 3
    assert not is_normal(t)
    assert permutation_image_order(t) == 6


def test_normal_index_two():
    t = coset_enumerate(S3, [S3.word("b")])
    assert t.index == 2 and is_normal(t)


def test_membership_and_transversal():
    t = coset_enumerate(S3, [S3.word("a")])
    assert membership(S3.word("a"), t)
    assert not membership(S3.word("b"), t)
    for c, w in enumerate(transversal(t)):
        assert t.trace(t.base, w) == c


def test_resource_limit():
    free = parse_presentation("gens: a b\n")
    with pytest.raises(ResourceLimitError):
        coset_enumerate(free, max_cosets=50)
    with pytest.raises(ValueError):
        coset_enumerate(S3, max_cosets=0)
    with pytest.raises(ValueError):
        coset_enumerate(S3, strategy="bogus")


def test_problems_detects_corruption():
    t = coset_enumerate(S3)
    assert t.problems() == []
    rows = [list(r) for r in t.rows]
    rows[0][0], rows[1][0] = rows[1][0], rows[0][0]
    bad = CosetTable(tuple(map(tuple, rows)), t.ngens, 0, t.subgroup_words, t.relators)
    assert bad.problems()


def test_table_from_finite_quotient_matches_enumeration():
    a, b = Perm([1, 0, 2]), Perm([1, 2, 0])
    t = table_from_finite_quotient([a, b])
    assert t.index == 6
    assert t.standardized() == coset_enumerate(S3).standardized()
    assert perm_rep(t)[0].order() == 2


@pytest.mark.parametrize("label,table", shipped_enumerations(), ids=lambda x: x if isinstance(x, str) else "")
def test_shipped_tables_are_valid(label, table):
    assert table.problems() == [], label


def test_hlt_felsch_agree_on_shipped():
    tabs = dict(shipped_enumerations())
    pairs = [k[:-4] for k in tabs if k.endswith("/hlt")]
    assert pairs
    for k in pairs:
        assert tabs[k + "/hlt"].standardized() == tabs[k + "/felsch"].standardized(), k


small = st.lists(st.sampled_from([1, -1, 2, -2]), min_size=1, max_size=6)


@settings(max_examples=40, deadline=None)
@given(st.lists(small, max_size=2))
def test_hlt_felsch_agree_random_subgroups(subs):
    p = data.load_presentation("3-4-6.pres")
    words = [Word(s) for s in subs]
    a = coset_enumerate(p, words, strategy=HLT)
    b = coset_enumerate(p, words, strategy=FELSCH)
    assert a.problems() == [] and b.problems() == []
    assert a.standardized() == b.standardized()
    assert 288 % a.index == 0
