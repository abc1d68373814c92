"""Acceptance suite: one PASS/FAIL line per criterion, with wall time against its budget.

Run with ``pytest tests/test_acceptance.py -v``; the summary lines are printed
even when output capture is on.
"""

import random
import time
from fractions import Fraction

import pytest

from ballquot import data, dm, geometry as geo, hirzebruch as hz
from ballquot.abelian import (AbelianInvariants, IntegerMatrix, abelian_invariants, random_sparse_matrix,
                              smith_normal_form)
from ballquot.cosets import FELSCH, HLT, coset_enumerate
from ballquot.matgroups import ModMatrix
from ballquot.subgroups import tietze_simplify
from ballquot.words import Presentation, Word, format_presentation, format_word, parse_presentation, parse_word

from shipped import shipped_enumerations


@pytest.fixture
def report(capsys):
    def _report(number, title, budget, check):
        t0 = time.perf_counter()
        ok, detail = check()
        dt = time.perf_counter() - t0
        ok = bool(ok) and dt < budget
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} "
                  f"({dt:.2f}s, budget {budget:g}s) {detail}")
        assert ok, detail
    return _report


def test_c01_gamma1_abelianization(report):
    def check():
        ab = abelian_invariants(hz.gamma1())
        return ab == AbelianInvariants(4, ()), str(ab)
    report(1, "Gamma_1^ab = Z^4", 1, check)


def test_c02_tau_relations(report):
    def check():
        rep = hz.relation_report()
        passing = [c for c, v in rep.items() if len(v) == 9 and all(v)]
        return passing, f"conventions passing all 9 relators: {passing}"
    report(2, "tau satisfies the nine relators", 1, check)


def test_c03_kernel_and_orders(report):
    def check():
        kern = hz.kernel_products()
        odd = {n: hz.orders_mod_n(n) for n in (3, 5, 7)}
        even = {n: hz.orders_mod_n(n) for n in (2, 4)}
        ok = all(kern.values())
        ok = ok and all(set(o.values()) == {n} for n, o in odd.items())
        # for even n the g_j with an odd (1,5) entry at m = n fail to have order n;
        # tau_n(w1) keeps order n for every n, and so does g3 (its (1,5) entry is m(2m+1))
        ok = ok and all(o[k] != n for n, o in even.items() for k in ("g1", "g2", "g4"))
        ok = ok and all(o["w1"] == n for n, o in even.items())
        return ok, f"kernel={kern} even={even}"
    report(3, "kernel products trivial over Z; orders n for odd n, not n for even n", 5, check)


def test_c04_Gn_structure(report):
    def check():
        out = {}
        for n in (3, 5):
            g = hz.build_Gn(n)
            target = AbelianInvariants(0, (n,) * 4)
            out[n] = (g.order == n ** 5 and g.center_order == n and g.center_is_sigma
                      and g.ab_from_quotient == target and g.ab_from_exponents == target,
                      g.order, g.center_order)
        return all(v[0] for v in out.values()), {n: v[1:] for n, v in out.items()}
    report(4, "|G_3| = 243, |G_5| = 3125, centers Z/n, ab (Z/n)^4", 60, check)


def test_c05_normal_forms(report):
    def check():
        r3 = hz.check_normal_forms(3)
        r5 = hz.check_normal_forms(5, sample=1000, seed=0)
        ok = r3["bijective"] and not r3["failures"] and r5["checked"] == 1000 and not r5["failures"]
        return ok, f"G_3 {r3['distinct']}/243 distinct; G_5 {r5['checked']} sampled, {len(r5['failures'])} failures"
    report(5, "normal-form bijection and t_n formula", 60, check)


def test_c06_commutator_powers(report):
    def check():
        res = {n: hz.commutator_power_report(n) for n in range(1, 6)}
        return all(all(v.values()) for v in res.values()), "j = 1..4, n = 1..5"
    report(6, "tau(w_j)^(n^2) = [tau(g_{2j-1})^n, tau(g_{2j})^n]", 5, check)


def test_c07_lambda_equals_delta(report):
    def check():
        rep = hz.verify_lambda_equals_delta(3)
        return rep["ok"], f"index={rep['index']} contained={rep['contained']}"
    report(7, "Lambda_3 = Delta_3 (index 243, generators in ker tau_3)", 60, check)


def test_c08_delta3_abelianization(report):
    def check():
        rep = hz.delta_n_abelianization(3)
        inv = rep.invariants
        ok = inv.free_rank == 4 and all(9 % t == 0 for t in inv.torsion)
        return ok, (f"{inv}; RS {rep.rs_relators}x{rep.rs_generators}; b1 = {inv.free_rank}, "
                    f"irregularity {inv.free_rank // 2}")
    report(8, "Delta_3^ab free rank 4, torsion exponents divide 9", 600, check)


@pytest.mark.slow
def test_c08_stretch_delta5_rank(report):
    def check():
        rep = hz.delta_n_abelianization(5)
        return rep.free_rank == 4, (f"rank bounds lower={rep.rank_lower} upper={rep.rank_upper} "
                                    f"(primes {sorted(rep.per_prime)}), RS {rep.rs_relators}x{rep.rs_generators}")
    report("8 (stretch)", "Delta_5^ab free rank 4 via modular rank", 1800, check)


def test_c09_gamma3_and_cusps(report):
    def check():
        index, ab = hz.gamma_n_index_and_ab(3)
        tc = hz.gamma_n_table_todd_coxeter(3).standardized() == hz.gamma_n_table(3).standardized()
        c1, c3 = hz.cusp_class_count(1)["total"], hz.cusp_class_count(3)["total"]
        ok = index == 81 and ab.free_rank == 4 and all(9 % t == 0 for t in ab.torsion) and tc
        ok = ok and c1 == 4 and c3 == 36
        return ok, f"index={index} ab={ab} todd_coxeter_agrees={tc} cusps n=1:{c1} n=3:{c3}"
    report(9, "Gamma_3 index 81, ab rank 4 / torsion | 9; cusp classes 4 and 36", 300, check)


def test_c10_chern_numbers(report):
    def check():
        rows = {}
        ok = True
        for n, want in ((3, (621, 243)), (5, (8875, 3125))):
            ch = geo.chern_numbers(n)
            am = geo.ampleness_margin(n)
            ok = ok and (ch["c1sq"], ch["c2"]) == want and ch["agree"]
            ok = ok and ch["slope"] == 3 - Fraction(4, n * n)
            ok = ok and am["margin"] == -1 + 4 * (1 - Fraction(1, n)) and am["positive"]
            ok = ok and geo.lifted_genus(n) == n - 1
            rows[n] = (ch["c1sq"], ch["c2"], str(ch["slope"]))
        return ok, rows
    report(10, "Chern numbers, slope, ampleness margin, lifted genus", 10, check)


def test_c11_line_bundle_degrees(report):
    def check():
        ok = True
        for n in (3, 5):
            ok = ok and geo.line_bundle_identity(n)
            for i in range(1, n):
                r = geo.line_bundle_degrees(n, i)
                ok = ok and r["ok"] and r["exceptional"] == [-1]
                for s, v in r["components"].items():
                    ok = ok and v["degrees"][0] in (-i * n, -n * (n - i))
        return ok, "n = 3, 5; all 1 <= i <= n-1"
    report(11, "degrees of L^(i) on branch and exceptional curves; class of L^n", 10, check)


def test_c12_dm_lattice(report):
    def check():
        h = dm.enumerate_H(HLT)
        q = dm.analyze_F(h.F)
        pres = dm.verify_H_presentation()
        iso = dm.verify_isomorphism()
        cusp = dm.cusp_kernel_analysis()
        eul = dm.orbifold_euler_consistency()
        parts = {
            "index72_normal": h.index == 72 and h.normal and h.F.order == 72,
            "center6_A4": q.center_order == 6 and q.looks_like_A4,
            "projective_relations": pres["ok"],
            "isomorphism": iso["ok"],
            "cusp_index4": cusp.index_in_F == 4,
            "heisenberg": cusp.ab == AbelianInvariants(2, ()) and cusp.comm == AbelianInvariants(1, ()),
            "euler": eul["ok"] and eul["stratified"] == Fraction(1, 72) and eul["index_times_chi"] == 1,
        }
        return all(parts.values()), parts
    report(12, "Deligne-Mostow lattice: index 72, F, relations, isomorphism, cusp, Euler characteristic", 300, check)


def test_c13_property_suites(report):
    def check():
        parts = {}
        rng = random.Random(2024)
        snf_ok = 0
        for _ in range(100):
            a = random_sparse_matrix(rng.randint(1, 8), rng.randint(1, 8), 0.3, 7, rng)
            factors, u, v = smith_normal_form(a)
            d = IntegerMatrix(a.rows, a.cols, {(i, i): f for i, f in enumerate(factors)})
            ui = IntegerMatrix.from_dense(ModMatrix(u.to_dense()).inverse().rows)
            vi = IntegerMatrix.from_dense(ModMatrix(v.to_dense()).inverse().rows)
            snf_ok += (u @ a @ v == d) and (ui @ d @ vi == a)
        parts["snf_reconstruction"] = f"{snf_ok}/100"
        tables = shipped_enumerations()
        bad = [k for k, t in tables if t.problems()]
        parts["table_scan"] = f"{len(tables) - len(bad)}/{len(tables)} valid"
        td = dict(tables)
        agree = [k[:-4] for k in td if k.endswith("/hlt") and td[k].standardized() == td[k[:-4] + "/felsch"].standardized()]
        npairs = sum(k.endswith("/hlt") for k in td)
        parts["hlt_felsch"] = f"{len(agree)}/{npairs} agree"
        tz_ok = True
        for name in ("3-3-3.pres", "3-4-6.pres", "gamma1.pres", "dm_xy.pres", "dm_buv.pres", "cusp_rs.pres"):
            p = data.load_presentation(name)
            tz_ok = tz_ok and abelian_invariants(tietze_simplify(p)) == abelian_invariants(p)
        for _ in range(50):
            p = Presentation(("a", "b", "c"), [Word(rng.choice((1, -1)) * rng.randint(1, 3)
                                                    for _ in range(rng.randint(1, 8))) for _ in range(rng.randint(1, 4))])
            tz_ok = tz_ok and abelian_invariants(tietze_simplify(p)) == abelian_invariants(p)
        parts["tietze_invariance"] = tz_ok
        rt_ok = True
        gens = ("a", "b", "c")
        for _ in range(200):
            w = Word(rng.choice((1, -1)) * rng.randint(1, 3) for _ in range(rng.randint(0, 20)))
            rt_ok = rt_ok and parse_word(format_word(w, gens), gens) == w
        for name in ("3-3-3.pres", "3-4-6.pres", "gamma1.pres", "dm_xy.pres", "dm_buv.pres", "heisenberg.pres"):
            p = data.load_presentation(name)
            rt_ok = rt_ok and parse_presentation(format_presentation(p)) == p
        parts["parser_round_trips"] = rt_ok
        ok = snf_ok == 100 and not bad and len(agree) == npairs and tz_ok and rt_ok
        return ok, parts
    report(13, "property suites (SNF, table scan, HLT/Felsch, Tietze, parser)", 300, check)
