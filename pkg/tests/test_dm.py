from fractions import Fraction

from ballquot import data, dm
from ballquot.abelian import AbelianInvariants


def test_index_72_normal_and_strategies_agree():
    h = dm.enumerate_H("hlt")
    f = dm.enumerate_H("felsch")
    assert h.index == 72 and h.normal and h.F.order == 72
    assert h.table.standardized() == f.table.standardized()


def test_F_structure():
    q = dm.analyze_F(dm.enumerate_H().F)
    assert (q.order, q.center_order, q.quotient_order, q.derived_order) == (72, 6, 12, 4)
    assert q.quotient_histogram == {1: 1, 2: 3, 3: 8}
    assert q.looks_like_A4


def test_homomorphism_count():
    h = dm.count_homs_to_F(dm.enumerate_H().F)
    assert (h.satisfying, h.surjective, h.kernel_is_H, h.distinct_kernels) == (729, 288, 144, 2)


def test_H_presentation():
    rep = dm.verify_H_presentation()
    assert rep["ok"] and rep["hwords_in_H"]
    assert len(rep["relators_projectively_trivial"]) == 9
    assert rep["ab_rs"] == AbelianInvariants(4, ())


def test_isomorphism_both_directions():
    rep = dm.verify_isomorphism()
    assert rep["ok"]
    assert all(rep["xy_round_trip"]) and all(rep["buv_round_trip"])


def test_cusp_kernel_heisenberg():
    c = dm.cusp_kernel_analysis()
    assert c.image_order == 18 and c.index_in_F == 4
    assert c.ab == AbelianInvariants(2, ()) and c.comm == AbelianInvariants(1, ())


def test_euler_characteristic():
    rep = dm.orbifold_euler_consistency()
    assert rep["stratified"] == Fraction(1, 72) and rep["index_times_chi"] == 1 and rep["ok"]


def test_stratified_euler_sensitivity():
    strata = data.load_toml("orbifold_strata.toml")
    assert dm.stratified_euler(strata) == Fraction(1, 72)
    # a single wrong local order changes the answer
    for p in strata["point"]:
        if p["name"] == "A1 point":
            p["order"] = 6
    assert dm.stratified_euler(strata) != Fraction(1, 72)


def test_gw_words_regenerate_to_shipped_file():
    rep = dm.rewrite_gi_words()
    assert rep.convention == "left"
    shipped = data.load_words("gw_words.words")[1]
    assert rep.words == shipped
    assert data.read_text("gw_words.words") == rep.text()


def test_torsion_check_skips_without_data():
    assert dm.torsion_freeness()["status"] == "not checked"


def test_torsion_check_with_supplied_words(data_copy):
    (data_copy / dm.TORSION_FILE).write_text("gens: x y\nt1 = x\nt2 = y\n")
    rep = dm.torsion_freeness(str(data_copy))
    assert rep["status"] == "pass" and rep["checked"] == 2
    (data_copy / dm.TORSION_FILE).write_text("gens: x y\nbad = x^72\n")
    rep = dm.torsion_freeness(str(data_copy))
    assert rep["checked"] == 1
