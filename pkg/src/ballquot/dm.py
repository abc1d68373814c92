"""The Deligne-Mostow lattice for weights (5,4,1,1,1) and its index-72 normal subgroup.

Everything here is driven by the shipped data files: the two presentations of the
lattice (generators ``b, u, v`` and ``x, y``), the matrices of ``x`` and ``y`` over
Q(zeta), the four generator words of the subgroup H, and the cusp subgroup.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import data as _data
from .abelian import AbelianInvariants, abelian_invariants, class2_quotient_invariants
from .cosets import (CosetTable, coset_enumerate, is_normal, membership, perm_rep,
                     table_from_finite_quotient)
from .eisenstein import CycMatrix, check_integral_form_projective, projective_equal
from .matgroups import ModMatrix
from .perms import FiniteGroup, Perm
from .subgroups import (RewritingMap, reidemeister_schreier, rewrite_in_subgroup,
                        tietze_simplify_tracked)
from .words import (LEFT, RIGHT, Presentation, Word, commutator, evaluate_word,
                    format_word_file)

GW_FILE = "gw_words.words"
TORSION_FILE = "torsion_reps.words"


@dataclass(frozen=True)
class DMData:
    xy: Presentation
    buv: Presentation
    hwords: tuple[Word, ...]
    x: CycMatrix
    y: CycMatrix
    cusp: Presentation
    gamma1: Presentation

    @property
    def xy_matrices(self) -> list[CycMatrix]:
        return [self.x, self.y]


@lru_cache(maxsize=None)
def load(data_dir: str | None = None) -> DMData:
    _, hw = _data.load_words("dm_hwords.words", data_dir)
    return DMData(
        xy=_data.load_presentation("dm_xy.pres", data_dir),
        buv=_data.load_presentation("dm_buv.pres", data_dir),
        hwords=tuple(hw[f"h{i}"] for i in range(1, 5)),
        x=_data.load_cyc_matrices("dm_x.mat", data_dir)["x"],
        y=_data.load_cyc_matrices("dm_y.mat", data_dir)["y"],
        cusp=_data.load_presentation("cusp_rs.pres", data_dir),
        gamma1=_data.load_presentation("gamma1.pres", data_dir),
    )


def _proj(w: Word, mats) -> CycMatrix:
    return evaluate_word(w, mats, identity=CycMatrix.identity(3))


def _is_scalar(m: CycMatrix) -> bool:
    return m.scalar_value() is not None


# --- H and the quotient F -------------------------------------------------

@dataclass
class HEnumeration:
    table: CosetTable
    normal: bool
    F: FiniteGroup
    images: list[Perm]          # images of x, y in F

    @property
    def index(self) -> int:
        return self.table.index


@lru_cache(maxsize=None)
def enumerate_H(strategy: str = "hlt", data_dir: str | None = None,
                max_cosets: int = 10**6) -> HEnumeration:
    d = load(data_dir)
    t = coset_enumerate(d.xy, d.hwords, max_cosets=max_cosets, strategy=strategy)
    images = perm_rep(t)
    F = FiniteGroup.generated_by(images, Perm.identity(t.index), cap=10**5)
    return HEnumeration(t, is_normal(t), F, images)


@dataclass
class QuotientAnalysis:
    order: int
    center_order: int
    quotient_order: int
    derived_order: int
    quotient_histogram: dict[int, int]

    @property
    def looks_like_A4(self) -> bool:
        return (self.quotient_order == 12 and self.derived_order == 4
                and set(self.quotient_histogram) <= {1, 2, 3})


def analyze_F(F: FiniteGroup) -> QuotientAnalysis:
    z = F.center()
    q = F.quotient_by_central(z)
    return QuotientAnalysis(
        order=F.order,
        center_order=len(z),
        quotient_order=q.order,
        derived_order=len(q.derived_subgroup()),
        quotient_histogram=dict(sorted(q.order_histogram().items())),
    )


@dataclass
class HomCount:
    satisfying: int
    surjective: int
    kernel_is_H: int
    distinct_kernels: int = 0
    surjective_pairs: list[tuple[int, int]] = field(default_factory=list)


def count_homs_to_F(F: FiniteGroup, data_dir: str | None = None) -> HomCount:
    """Brute force over all pairs (x, y) of elements of F."""
    d = load(data_dir)
    elems = list(F.elements)
    ident = F.identity
    cube_roots = [i for i, g in enumerate(elems) if (g * g * g) == ident]
    sat = surj = kerH = 0
    pairs, kernels = [], set()
    for i in cube_roots:
        for j in cube_roots:
            assign = [elems[i], elems[j]]
            if not all(evaluate_word(r, assign, identity=ident) == ident for r in d.xy.relators):
                continue
            sat += 1
            if len(FiniteGroup.generated_by(assign, ident).elements) != F.order:
                continue
            surj += 1
            pairs.append((i, j))
            # surjections with equal kernels differ by an automorphism of F;
            # the standardized Cayley action identifies the kernel
            kernels.add(table_from_finite_quotient(assign, identity=ident).standardized().rows)
            if all(evaluate_word(h, assign, identity=ident) == ident for h in d.hwords):
                kerH += 1
    return HomCount(sat, surj, kerH, len(kernels), pairs)


# --- presentations and isomorphisms ----------------------------------------

def _rs_of_H(data_dir=None) -> tuple[Presentation, RewritingMap]:
    d = load(data_dir)
    return reidemeister_schreier(d.xy, enumerate_H(data_dir=data_dir).table)


def verify_H_presentation(data_dir: str | None = None) -> dict:
    d = load(data_dir)
    en = enumerate_H(data_dir=data_dir)
    rels_xy = [r.substitute(d.hwords) for r in d.gamma1.relators]
    rel_ok = [_is_scalar(_proj(r, d.xy_matrices)) for r in rels_xy]
    rs, _ = _rs_of_H(data_dir)
    ab_rs = abelian_invariants(rs)
    ab_g1 = abelian_invariants(d.gamma1)
    return {
        "index": en.index,
        "hwords_in_H": all(membership(h, en.table) for h in d.hwords),
        "relators_projectively_trivial": rel_ok,
        "rs_generators": rs.ngens,
        "rs_relators": len(rs.relators),
        "ab_rs": ab_rs,
        "ab_gamma1": ab_g1,
        "ok": en.index == 72 and all(rel_ok) and ab_rs == ab_g1,
    }


def isomorphism_maps(data_dir: str | None = None) -> tuple[list[Word], list[Word]]:
    """(images of b, u, v as x,y-words; images of x, y as b,u,v-words)."""
    d = load(data_dir)
    to_xy = d.xy.words("x", "y x Y", "y X Y X y")
    to_buv = d.buv.words("b", "b u v")
    return to_xy, to_buv


def verify_isomorphism(data_dir: str | None = None) -> dict:
    d = load(data_dir)
    to_xy, to_buv = isomorphism_maps(data_dir)
    xy_m = d.xy_matrices
    buv_m = [_proj(w, xy_m) for w in to_xy]
    report = {
        "xy_relations": [_is_scalar(_proj(r, xy_m)) for r in d.xy.relators],
        "buv_relations_via_xy": [_is_scalar(_proj(r.substitute(to_xy), xy_m)) for r in d.buv.relators],
        "xy_relations_via_buv": [_is_scalar(_proj(r.substitute(to_buv), buv_m)) for r in d.xy.relators],
    }
    # round trips on generators, compared against the original matrices
    report["xy_round_trip"] = [projective_equal(_proj(w.substitute(to_xy), xy_m), m)[0]
                               for w, m in zip(to_buv, xy_m)]
    report["buv_round_trip"] = [projective_equal(_proj(w.substitute(to_buv), buv_m), m)[0]
                                for w, m in zip(to_xy, buv_m)]
    report["integral_form"] = [check_integral_form_projective(m)[0] for m in xy_m + buv_m]
    report["ok"] = all(all(v) for v in report.values())
    return report


# --- the cusp subgroup ------------------------------------------------------

HEISENBERG_C1 = ModMatrix([[1, 1, 0], [0, 1, 0], [0, 0, 1]])
HEISENBERG_C2 = ModMatrix([[1, 0, 0], [0, 1, 1], [0, 0, 1]])


@dataclass
class CuspKernel:
    image_order: int
    index_in_F: int
    raw: Presentation
    simplified: Presentation
    survivors_xy: list[Word]
    ab: AbelianInvariants
    comm: AbelianInvariants
    report: dict


def cusp_words(data_dir: str | None = None) -> tuple[Word, Word]:
    xy = load(data_dir).xy
    return xy.word("(y X y)^2"), xy.word("y X")


@lru_cache(maxsize=None)
def cusp_kernel_analysis(data_dir: str | None = None) -> CuspKernel:
    d = load(data_dir)
    en = enumerate_H(data_dir=data_dir)
    rw, sw = cusp_words(data_dir)
    xy_m = d.xy_matrices
    rs_m = [_proj(rw, xy_m), _proj(sw, xy_m)]
    relators_hold = [_is_scalar(_proj(r, rs_m)) for r in d.cusp.relators]

    pr, ps = (evaluate_word(w, en.images) for w in (rw, sw))
    ct = table_from_finite_quotient([pr, ps], identity=en.F.identity)
    raw, m = reidemeister_schreier(d.cusp, ct)
    simple, _ = tietze_simplify_tracked(raw)
    survivors = [m.generator_words[raw.generators.index(g)] for g in simple.generators]
    surv_xy = [w.substitute([rw, sw]) for w in survivors]
    ab, comm = class2_quotient_invariants(simple)
    ab_raw = abelian_invariants(raw)

    report = {"cusp_relators_projective": relators_hold, "ab_raw_equals_simplified": ab_raw == ab}
    if simple.ngens == 2:
        # c_i -> survivor words: Heisenberg relators hold in the matrix group
        a, b = surv_xy
        c = commutator(a, b)
        heis = _data.load_presentation("heisenberg.pres", data_dir)
        report["heisenberg_relators_in_kernel"] = [
            _is_scalar(_proj(r.substitute([a, b, c]), xy_m)) for r in heis.relators]
        # kernel -> Heisenberg: simplified relators die under a -> c1, b -> c2
        hm = [HEISENBERG_C1, HEISENBERG_C2]
        ident = ModMatrix.identity(3)
        report["kernel_relators_in_heisenberg"] = [
            evaluate_word(r, hm, identity=ident).is_identity() for r in simple.relators]
        c3 = HEISENBERG_C1.inverse() * HEISENBERG_C2.inverse() * HEISENBERG_C1 * HEISENBERG_C2
        report["heisenberg_target_relators"] = [
            evaluate_word(r, hm + [c3], identity=ident).is_identity() for r in heis.relators]
        report["c_in_H"] = [membership(w, en.table) for w in (a, b)]
    return CuspKernel(ct.index, en.F.order // ct.index, raw, simple, surv_xy, ab, comm, report)


# --- words for g1..g8, w1..w4 -------------------------------------------------

@dataclass
class GWReport:
    words: dict[str, Word]                 # h-words
    xy_words: dict[str, Word]
    matches: dict[str, dict[str, bool | None]]
    convention: str
    notes: list[str]

    def text(self) -> str:
        header = ["generated by ballquot.dm.rewrite_gi_words; derived, cross-checked against tau",
                  f"evaluation convention: {self.convention}"] + self.notes
        return format_word_file(("h1", "h2", "h3", "h4"), self.words, "\n".join(header))


class HWordRewriter:
    """Rewrite x,y-words lying in H as words in h1..h4."""

    def __init__(self, data_dir=None):
        d = load(data_dir)
        self.table = enumerate_H(data_dir=data_dir).table
        rs, self.map = reidemeister_schreier(d.xy, self.table)
        k = rs.ngens
        extra = tuple(Word((-(k + i + 1),)) * rewrite_in_subgroup(h, self.map)
                      for i, h in enumerate(d.hwords))
        aug = Presentation(rs.generators + ("h1", "h2", "h3", "h4"), rs.relators + extra)
        simple, images = tietze_simplify_tracked(aug, keep=range(k, k + 4))
        if simple.generators != ("h1", "h2", "h3", "h4"):
            raise RuntimeError("could not eliminate all Schreier generators")
        self.images = images[:k]

    def __call__(self, w: Word) -> Word:
        return rewrite_in_subgroup(w, self.map).substitute(self.images)


def rewrite_gi_words(data_dir: str | None = None, search: int = 2) -> GWReport:
    """Produce h-words for g1..g8 and w1..w4.

    g1, g2 are located inside the kernel of the cusp subgroup: words a^i b^j [a,b]^k
    in the two surviving kernel generators are matched against the reference tau(g1),
    tau(g2) under both evaluation conventions. The remaining elements follow from
    g3 = x^-1 g1 x, g4 = x^-1 g2 x, g5 = x g1 x^-1, g6 = x g2 x^-1,
    g7 = g1^-1 y g1 y^-1 g1, g8 = g1^-1 y g2 y^-1 g1 and w_j = [g_{2j-1}, g_{2j}].
    """
    d = load(data_dir)
    taus, ref_g, ref_w1 = _data.tau_matrices(data_dir)
    ref = dict(ref_g)
    ref["w1"] = ref_w1
    hword = HWordRewriter(data_dir)
    ident = ModMatrix.identity(5)

    def tau(w: Word, conv: str) -> ModMatrix:
        return evaluate_word(hword(w), taus, conv, identity=ident)

    a, b = cusp_kernel_analysis(data_dir).survivors_xy
    c = commutator(a, b)
    rng = range(-search, search + 1)
    found: dict[tuple[str, str], Word] = {}
    for i, j, k in itertools.product(rng, rng, rng):
        w = (a ** i) * (b ** j) * (c ** k)
        for conv in (LEFT, RIGHT):
            m = tau(w, conv)
            for name in ("g1", "g2"):
                if m == ref[name]:
                    key = (name, conv)
                    if key not in found or len(w) < len(found[key]):
                        found[key] = w
    conv = next((cv for cv in (LEFT, RIGHT) if ("g1", cv) in found and ("g2", cv) in found), None)
    if conv is None:
        raise RuntimeError("no word in the cusp kernel matches the reference tau(g1), tau(g2)")
    g1, g2 = found[("g1", conv)], found[("g2", conv)]
    x, y = d.xy.words("x", "y")
    xi, yi = x.inverse(), y.inverse()
    xyw = {
        "g1": g1, "g2": g2,
        "g3": xi * g1 * x, "g4": xi * g2 * x,
        "g5": x * g1 * xi, "g6": x * g2 * xi,
        "g7": g1.inverse() * y * g1 * yi * g1, "g8": g1.inverse() * y * g2 * yi * g1,
    }
    for j in range(1, 5):
        xyw[f"w{j}"] = commutator(xyw[f"g{2 * j - 1}"], xyw[f"g{2 * j}"])

    en = enumerate_H(data_dir=data_dir)
    words, matches, notes = {}, {}, []
    sigma = ref_w1
    expected = dict(ref)
    expected.update({"w2": sigma, "w3": sigma.inverse(), "w4": sigma.inverse()})
    xy_m = d.xy_matrices
    for name, w in xyw.items():
        if not membership(w, en.table):
            raise ValueError(f"{name} does not lie in H")
        hw = hword(w)
        # rewriting must commute with evaluation in the faithful matrix model
        if not projective_equal(_proj(hw.substitute(d.hwords), xy_m), _proj(w, xy_m))[0]:
            raise RuntimeError(f"rewriting of {name} disagrees with the matrix model")
        row = {}
        for cv in (LEFT, RIGHT):
            row[cv] = (evaluate_word(hw, taus, cv, identity=ident) == expected[name]
                       if name in expected else None)
        matches[name] = row
        words[name] = hw
    for name in ("g5", "g6", "g7", "g8"):
        notes.append(f"{name}: no reference matrix; validated through w{(int(name[1]) + 1) // 2}")
    bad = [n for n, r in matches.items() if r[conv] is False]
    if bad:
        raise RuntimeError(f"derived words disagree with reference tau: {bad}")
    return GWReport(words, xyw, matches, conv, notes)


# --- orbifold Euler characteristic ----------------------------------------------

def stratified_euler(strata: dict, drop: tuple[str, ...] = ()) -> Fraction:
    """Sum of chi(open stratum) / |local group| over the strata.

    Open-stratum Euler characteristics are obtained from the closed ones by removing
    the special points; cusp points (order 0) are deleted and contribute nothing.
    """
    curves = {c["name"]: c for c in strata["curve"]}
    points = [p for p in strata["point"] if p["name"] not in drop]
    total = Fraction(0)
    for p in points:
        if p["order"]:
            total += Fraction(1, p["order"])
    open_curve = {}
    for name, c in curves.items():
        open_curve[name] = c["euler"] - sum(1 for p in points if name in p["on"])
        total += Fraction(open_curve[name], c["weight"])
    # chi(union of curves) = sum chi(curves) - sum over points of (curves through it - 1)
    union = sum(c["euler"] for c in curves.values())
    union -= sum(max(len(p["on"]) - 1, 0) for p in points)
    isolated = sum(1 for p in points if not p["on"])
    total += strata["ambient_euler"] - union - isolated
    return total


def orbifold_euler_consistency(data_dir: str | None = None, drop: tuple[str, ...] = ()) -> dict:
    strata = _data.load_toml("orbifold_strata.toml", data_dir)
    chi = stratified_euler(strata, drop)
    index = enumerate_H(data_dir=data_dir).index
    return {
        "stratified": chi,
        "index": index,
        "index_times_chi": index * chi,
        "ok": chi == Fraction(1, 72) and index * chi == 1,
    }


def torsion_freeness(data_dir: str | None = None) -> dict:
    """Membership test for user supplied torsion representatives, if present."""
    try:
        _, reps = _data.load_words(TORSION_FILE, data_dir)
    except _data.MissingDataError:
        return {"status": "not checked", "reason": "external data absent"}
    t = enumerate_H(data_dir=data_dir).table
    inside = [k for k, w in reps.items() if membership(w, t)]
    return {"status": "pass" if not inside else "fail", "in_H": inside, "checked": len(reps)}
