import pytest
from hypothesis import given, settings, strategies as st

from ballquot import data, hirzebruch
from ballquot.abelian import AbelianInvariants, abelian_invariants
from ballquot.cosets import coset_enumerate
from ballquot.subgroups import (NotInSubgroupError, reidemeister_schreier, rewrite_in_subgroup,
                                tietze_simplify, tietze_simplify_tracked)
from ballquot.words import Presentation, Word, evaluate_word, parse_presentation
from ballquot.perms import Perm

S3 = parse_presentation("gens: a b\nrel: a^2\nrel: b^3\nrel: a b a b\n")


def test_rs_counts_schreier_formula():
    # index i subgroup of a k-generator group: i*(k-1)+1 free generators, i*|R| relators
    p = data.load_presentation("3-4-6.pres")
    t = coset_enumerate(p, [p.word("a")])
    rs, m = reidemeister_schreier(p, t)
    assert rs.ngens == t.index * (p.ngens - 1) + 1
    assert len(rs.relators) == t.index * len(p.relators)
    assert len(m.pairs) == t.index * p.ngens


def test_rs_of_trivial_subgroup_is_trivial():
    rs, _ = reidemeister_schreier(S3, coset_enumerate(S3))
    assert abelian_invariants(rs) == AbelianInvariants(0, ())
    assert tietze_simplify(rs).ngens == 0


def test_rs_of_index_two_is_cyclic_three():
    rs, _ = reidemeister_schreier(S3, coset_enumerate(S3, [S3.word("b")]))
    assert abelian_invariants(rs) == AbelianInvariants(0, (3,))


def test_rewrite_round_trip():
    t = coset_enumerate(S3, [S3.word("a")])
    _, m = reidemeister_schreier(S3, t)
    for text in ("a", "b a b a", "a^3", "b^3 a", "a b^3 A"):
        w = S3.word(text)
        assert t.trace(t.base, w) == t.base
        # the rewrite is equal to w in the free group, not merely in S3
        assert rewrite_in_subgroup(w, m).substitute(m.generator_words) == w
    with pytest.raises(NotInSubgroupError):
        rewrite_in_subgroup(S3.word("b"), m)


def test_delta3_counts():
    p = hirzebruch.gamma1()
    t = hirzebruch.delta_n_table(3)
    rs, m = reidemeister_schreier(p, t)
    assert t.index == 243
    assert len(m.pairs) == 972            # 243 cosets x 4 generators
    assert rs.ngens == 972 - 242          # minus the spanning-tree edges
    assert len(rs.relators) == 243 * 9


def test_tietze_tracking_images():
    p = parse_presentation("gens: a b c\nrel: c B A\nrel: a^4\nrel: b^6\nrel: a b a^-1 b^-1\n")
    q, images = tietze_simplify_tracked(p)
    assert q.ngens == 2
    assert abelian_invariants(q) == abelian_invariants(p) == AbelianInvariants(0, (2, 12))


def test_tietze_keep():
    p = parse_presentation("gens: a b\nrel: a B\n")
    assert tietze_simplify(p, keep=[0]).generators == ("a",)
    assert tietze_simplify(p, keep=[1]).generators == ("b",)


def test_tietze_images_evaluate_consistently():
    p = data.load_presentation("3-3-3.pres")
    t = coset_enumerate(p)
    images = [Perm(row[2 * i] for row in t.rows) for i in range(p.ngens)]
    rs, m = reidemeister_schreier(p, coset_enumerate(p, [p.word("a")]))
    q, tr = tietze_simplify_tracked(rs)
    # each RS generator is a word in the survivors; both sides agree in the regular rep
    e = Perm.identity(t.index)
    surv = [evaluate_word(m.generator_words[rs.generators.index(g)], images, identity=e) for g in q.generators]
    for i, w in enumerate(m.generator_words):
        assert evaluate_word(w, images, identity=e) == evaluate_word(tr[i], surv, identity=e)


rel = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), min_size=1, max_size=8)


@settings(max_examples=60, deadline=None)
@given(st.lists(rel, min_size=1, max_size=5))
def test_tietze_preserves_abelian_invariants(rels):
    p = Presentation(("a", "b", "c"), [Word(r) for r in rels])
    assert abelian_invariants(tietze_simplify(p)) == abelian_invariants(p)


def test_tietze_preserves_invariants_on_shipped():
    for name in ("3-3-3.pres", "3-4-6.pres", "gamma1.pres", "dm_xy.pres", "dm_buv.pres", "cusp_rs.pres"):
        p = data.load_presentation(name)
        assert abelian_invariants(tietze_simplify(p)) == abelian_invariants(p), name
