"""Constructions around Gamma_1 (Hirzebruch's lattice), Gamma_n, Delta_n and G_n.

The representation tau sends h1..h4 to unipotent 5x5 integer matrices; tau_n is
its reduction mod n, G_n the image and Delta_n the kernel.  Gamma_n is the
kernel of Gamma_1 -> Gamma_1^ab (x) Z/n.  Elements g1..g8, w1..w4 are taken as
h-words from ``gw_words.words`` (produced by ``dm.rewrite_gi_words``) and are
always cross-checked against the reference tau matrices before use.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from . import data as _data
from .abelian import (AbelianInvariants, IntegerMatrix, abelian_invariants,
                      class2_quotient_invariants, free_rank_mod_p, invariant_factors)
from .cosets import CosetTable, coset_enumerate, table_from_finite_quotient
from .matgroups import FiniteMatrixGroup, ModMatrix, closure_enumerate, element_order
from .subgroups import reidemeister_schreier
from .words import LEFT, Presentation, Word, commutator, evaluate_word

G_NAMES = tuple(f"g{i}" for i in range(1, 9))
W_NAMES = tuple(f"w{i}" for i in range(1, 5))


class UnresolvedWordsError(LookupError):
    pass


class NotInGammaN(ValueError):
    pass


# --- data -------------------------------------------------------------------

@lru_cache(maxsize=None)
def gamma1(data_dir: str | None = None) -> Presentation:
    return _data.load_presentation("gamma1.pres", data_dir)


@lru_cache(maxsize=None)
def gw_words(data_dir: str | None = None) -> dict[str, Word]:
    """h-words for g1..g8 and w1..w4, validated against the reference matrices."""
    try:
        gens, words = _data.load_words("gw_words.words", data_dir)
    except _data.MissingDataError:
        from .dm import rewrite_gi_words

        gens, words = ("h1", "h2", "h3", "h4"), rewrite_gi_words(data_dir).words
    if tuple(gens) != gamma1(data_dir).generators:
        raise UnresolvedWordsError("g/w words must be written in h1..h4")
    missing = [k for k in G_NAMES + W_NAMES if k not in words]
    if missing:
        raise UnresolvedWordsError(f"missing words: {missing}")
    taus, ref_g, ref_w1 = _data.tau_matrices(data_dir)
    ident = ModMatrix.identity(5)
    for name, m in list(ref_g.items()) + [("w1", ref_w1)]:
        if evaluate_word(words[name], taus, identity=ident) != m:
            raise UnresolvedWordsError(f"{name} does not evaluate to its reference matrix")
    return dict(words)


def tau(w: Word, n: int = 0, data_dir: str | None = None, convention: str = LEFT) -> ModMatrix:
    taus = _data.tau_matrices(data_dir)[0]
    if n:
        taus = [m.mod(n) for m in taus]
    return evaluate_word(w, taus, convention, identity=ModMatrix.identity(5, n))


def tau_images(n: int = 0, data_dir: str | None = None) -> dict[str, ModMatrix]:
    return dict(_tau_images(n, data_dir))


@lru_cache(maxsize=None)
def _tau_images(n: int, data_dir: str | None) -> tuple:
    return tuple((k, tau(w, n, data_dir)) for k, w in gw_words(data_dir).items())


def relation_report(data_dir: str | None = None) -> dict[str, list[bool]]:
    """Which evaluation convention makes tau satisfy the Gamma_1 relators."""
    from .matgroups import verify_relations

    taus = _data.tau_matrices(data_dir)[0]
    return {conv: verify_relations(taus, gamma1(data_dir), conv) for conv in ("left", "right")}


def kernel_products(data_dir: str | None = None) -> dict[str, bool]:
    t = tau_images(0, data_dir)
    return {
        "w2 w1^-1": (t["w2"] * t["w1"].inverse()).is_identity(),
        "w4 w3^-1": (t["w4"] * t["w3"].inverse()).is_identity(),
        "w3 w1": (t["w3"] * t["w1"]).is_identity(),
    }


def orders_mod_n(n: int, data_dir: str | None = None) -> dict[str, int]:
    t = tau_images(n, data_dir)
    return {k: element_order(t[k], cap=10 * n * n) for k in ("g1", "g2", "g3", "g4", "w1")}


# --- G_n --------------------------------------------------------------------

@dataclass
class GnInfo:
    n: int
    group: FiniteMatrixGroup
    center_order: int
    center_is_sigma: bool
    ab_from_quotient: AbelianInvariants
    ab_from_exponents: AbelianInvariants

    @property
    def order(self) -> int:
        return self.group.order


def _finite_abelian_invariants(images, identity, key) -> AbelianInvariants:
    """Invariants of an abelian group given by generator images.

    The relation lattice is spanned by exponent vectors killed by the map; it is
    searched in the box [0, e)^k, e being the exponent, which suffices.
    """
    k = len(images)
    e = 1
    for g in images:
        p, m = g, 1
        while key(p) != key(identity):
            p, m = p * g, m + 1
        e = e * m // _gcd(e, m)
    powers = [[identity] for _ in images]
    for i, g in enumerate(images):
        for _ in range(e - 1):
            powers[i].append(powers[i][-1] * g)
    rels = [[e if a == b else 0 for b in range(k)] for a in range(k)]
    for vec in itertools.product(range(e), repeat=k):
        if not any(vec):
            continue
        p = identity
        for i, v in enumerate(vec):
            p = p * powers[i][v]
        if key(p) == key(identity):
            rels.append(list(vec))
    factors = invariant_factors(IntegerMatrix.from_dense(rels))
    return AbelianInvariants.from_factors(k, factors)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


@lru_cache(maxsize=None)
def build_Gn(n: int, data_dir: str | None = None, cap: int = 10**6) -> GnInfo:
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        raise ValueError("G_1 is trivial; use n >= 2")
    taus = [m.mod(n) for m in _data.tau_matrices(data_dir)[0]]
    G = closure_enumerate(taus, cap)
    center = G.center()
    sigma = tau(gw_words(data_dir)["w1"], n, data_dir)
    sig_powers = {sigma ** k for k in range(n)}
    derived = G.derived_subgroup()
    dset = set(derived)

    def coset_key(g):
        return min(tuple(x.rows) for x in (g * d for d in dset))

    ab_q = _finite_abelian_invariants(taus, ModMatrix.identity(5, n), coset_key)
    p = gamma1(data_dir)
    ab_e = abelian_invariants(p.add_relators(Word.gen(i, n) for i in range(p.ngens)))
    return GnInfo(n, G, len(center), set(center) == sig_powers, ab_q, ab_e)


# --- normal form ------------------------------------------------------------

@dataclass(frozen=True)
class NormalFormExponents:
    m: tuple[int, int, int, int, int]
    n: int


def t_n(m: tuple[int, ...], n: int) -> int:
    """The (1,5) entry of the normal form matrix, 2 inverted mod odd n."""
    m1, m2, m3, m4, m5 = m
    twice = (-m1 + 5 * m1 ** 2 - 3 * m2 + 4 * m1 * m2 + m2 ** 2
             + 2 * m3 + 6 * m1 * m3 - 2 * m2 * m3 + 4 * m3 ** 2 - m4
             + 6 * m1 * m4 - 2 * m2 * m4 + 8 * m3 * m4 + 3 * m4 ** 2 + 2 * m5)
    if n % 2 == 0:
        raise ValueError("t_n needs n odd")
    return twice * pow(2, -1, n) % n


def normal_form_matrix(m: tuple[int, ...], n: int) -> ModMatrix:
    """The displayed matrix of g1^m1 g2^m2 g3^m3 g4^m4 w1^m5 (with t_n)."""
    m1, m2, m3, m4, _ = m
    return ModMatrix([
        [1, 2 * m1 + m2 + m3, -m1 - m3 - m4, m2 - m3 - m4, t_n(m, n)],
        [0, 1, 0, 0, 2 * m1 + m2 + m3 + m4],
        [0, 0, 1, 0, -m1 - m3 - m4],
        [0, 0, 0, 1, -m1 - 2 * m3 - 2 * m4],
        [0, 0, 0, 0, 1],
    ], n)


def normal_form(g: ModMatrix, n: int, data_dir: str | None = None) -> NormalFormExponents:
    """Solve for the exponents from the matrix entries, then confirm by reconstruction."""
    a12, a13, a14, a25, a45 = g[0, 1], g[0, 2], g[0, 3], g[1, 4], g[3, 4]
    m4 = (a25 - a12) % n
    m13 = (-a13 - m4) % n
    m3 = (-a45 - m13 - 2 * m4) % n
    m1 = (m13 - m3) % n
    m2 = (a14 + m3 + m4) % n
    t = tau_images(n, data_dir)
    partial = t["g1"] ** m1 * t["g2"] ** m2 * t["g3"] ** m3 * t["g4"] ** m4
    sigma = t["w1"]
    rest = partial.inverse() * g
    for m5 in range(n):
        if sigma ** m5 == rest:
            return NormalFormExponents((m1, m2, m3, m4, m5), n)
    raise ValueError("matrix is not in G_n")


def reconstruct(nf: NormalFormExponents, data_dir: str | None = None) -> ModMatrix:
    t = tau_images(nf.n, data_dir)
    out = ModMatrix.identity(5, nf.n)
    for name, e in zip(("g1", "g2", "g3", "g4", "w1"), nf.m):
        out = out * t[name] ** e
    return out


def check_normal_forms(n: int, sample: int | None = None, seed: int = 0,
                       data_dir: str | None = None) -> dict:
    """Round trip g -> exponents -> product and compare with the t_n matrix.

    With ``sample=None`` every element of G_n is checked, otherwise a random
    sample of elements built as random words in tau_n(h_i).
    """
    if sample is None:
        elems = list(build_Gn(n, data_dir).group.elements)
    else:
        rng = random.Random(seed)
        taus = [m.mod(n) for m in _data.tau_matrices(data_dir)[0]]
        elems = []
        for _ in range(sample):
            w = Word(rng.choice((1, -1)) * rng.randint(1, 4) for _ in range(rng.randint(0, 40)))
            elems.append(evaluate_word(w, taus, identity=ModMatrix.identity(5, n)))
    seen, bad = set(), []
    for g in elems:
        nf = normal_form(g, n, data_dir)
        if reconstruct(nf, data_dir) != g or normal_form_matrix(nf.m, n) != g:
            bad.append(nf.m)
        seen.add(nf.m)
    return {"checked": len(elems), "distinct": len(seen), "failures": bad,
            "bijective": sample is None and len(seen) == len(elems) == n ** 5}


# --- the character chi -------------------------------------------------------

@dataclass
class CoverCharacter:
    n: int
    sigma: ModMatrix
    data_dir: str | None = None

    def value(self, w: Word) -> int:
        """chi(w) as an exponent of sigma; ``w`` must lie in Gamma_n."""
        m = tau(w, self.n, self.data_dir)
        p = ModMatrix.identity(5, self.n)
        for k in range(self.n):
            if p == m:
                return k
            p = p * self.sigma
        raise NotInGammaN("tau_n(w) is not a power of sigma")


def character(n: int, data_dir: str | None = None) -> CoverCharacter:
    if n % 2 == 0 or n < 3:
        raise ValueError("n must be odd and at least 3")
    return CoverCharacter(n, tau(gw_words(data_dir)["w1"], n, data_dir), data_dir)


def character_report(n: int, samples: int = 20, seed: int = 0, data_dir: str | None = None) -> dict:
    chi = character(n, data_dir)
    gw = gw_words(data_dir)
    vals = {k: chi.value(gw[k]) for k in W_NAMES}
    p = gamma1(data_dir)
    rng = random.Random(seed)
    deltas = [p.word("h1"), p.word("h2 h4")]
    deltas += [Word(rng.choice((1, -1)) * rng.randint(1, 4) for _ in range(12)) for _ in range(samples)]
    central = all(chi.value(gw[k].conjugate(d.inverse())) == vals[k] for k in W_NAMES for d in deltas)
    return {
        "values": vals,
        "expected": {"w1": 1, "w2": 1, "w3": n - 1, "w4": n - 1},
        "w3w1": chi.value(gw["w3"] * gw["w1"]),
        "conjugation_invariant": central,
        "ok": vals == {"w1": 1, "w2": 1, "w3": n - 1, "w4": n - 1} and central
        and chi.value(gw["w3"] * gw["w1"]) == 0,
    }


# --- Gamma_n and Delta_n ------------------------------------------------------

def _abelian_image(n: int, k: int = 4) -> list[ModMatrix]:
    """Generators of (Z/n)^k as commuting unipotent matrices."""
    out = []
    for i in range(k):
        rows = [[int(a == b) for b in range(k + 1)] for a in range(k + 1)]
        rows[i][k] = 1
        out.append(ModMatrix(rows, n))
    return out


def gamma_n_table(n: int, data_dir: str | None = None) -> CosetTable:
    if n == 1:
        return CosetTable(((0,) * 8,), 4, 0)
    return table_from_finite_quotient(_abelian_image(n), order=n ** 4)


def gamma_n_table_todd_coxeter(n: int, data_dir: str | None = None, **limits) -> CosetTable:
    """Same table through enumeration of the trivial subgroup of Gamma_1 / <<h_i^n, [h_i,h_j]>>."""
    p = gamma1(data_dir)
    extra = [Word.gen(i, n) for i in range(4)]
    extra += [commutator(Word.gen(i), Word.gen(j)) for i in range(4) for j in range(i + 1, 4)]
    return coset_enumerate(p.add_relators(extra), [], **limits)


def gamma_n_index_and_ab(n: int, data_dir: str | None = None) -> tuple[int, AbelianInvariants]:
    t = gamma_n_table(n, data_dir)
    rs, _ = reidemeister_schreier(gamma1(data_dir), t)
    return t.index, abelian_invariants(rs)


def delta_n_table(n: int, data_dir: str | None = None) -> CosetTable:
    """Cayley action of G_n, i.e. the coset table of Delta_n = ker(tau_n)."""
    taus = [m.mod(n) for m in _data.tau_matrices(data_dir)[0]]
    return table_from_finite_quotient(taus)


@dataclass
class DeltaAb:
    n: int
    index: int
    rs_generators: int
    rs_relators: int
    invariants: AbelianInvariants | None      # full SNF, when run
    rank_upper: int | None                    # from ranks mod p
    rank_lower: int | None                    # rank of the image in Gamma_1^ab
    per_prime: dict | None = None

    @property
    def free_rank(self) -> int | None:
        if self.invariants is not None:
            return self.invariants.free_rank
        if self.rank_upper == self.rank_lower:
            return self.rank_upper
        return None


def delta_n_abelianization(n: int, full: bool | None = None, primes=(101, 103),
                           data_dir: str | None = None) -> DeltaAb:
    """Abelianization of Delta_n from Reidemeister-Schreier on the G_n Cayley table.

    ``full`` selects the complete Smith normal form (default for n <= 3); otherwise
    the free rank is pinned between a rank-mod-p upper bound and the rank of the
    image of the Schreier generators in Gamma_1^ab = Z^4 (a finite-index image
    forces free rank >= that rank).
    """
    p = gamma1(data_dir)
    t = delta_n_table(n, data_dir)
    rs, m = reidemeister_schreier(p, t)
    if full is None:
        full = n <= 3
    if full:
        inv = abelian_invariants(rs)
        return DeltaAb(n, t.index, rs.ngens, len(rs.relators), inv, None, None)
    bounds = free_rank_mod_p(rs, primes)
    sums = [w.exponent_sums(p.ngens) for w in m.generator_words]
    lower = _rational_rank(sums)
    return DeltaAb(n, t.index, rs.ngens, len(rs.relators), None, bounds.upper, lower,
                   bounds.per_prime)


def _rational_rank(vectors) -> int:
    entries = {(i, j): v for i, vec in enumerate(vectors) for j, v in enumerate(vec) if v}
    m = IntegerMatrix(len(vectors), len(vectors[0]) if vectors else 0, entries)
    return len(invariant_factors(m))


def lambda_quotient(data_dir: str | None = None) -> Presentation:
    """Gamma_1 with the normal-closure generators w2 w1^-1, w4 w3^-1, w3 w1 as relators."""
    gw = gw_words(data_dir)
    extra = [gw["w2"] * gw["w1"].inverse(), gw["w4"] * gw["w3"].inverse(), gw["w3"] * gw["w1"]]
    return gamma1(data_dir).add_relators(extra)


def verify_lambda_equals_delta(n: int, data_dir: str | None = None, strategy: str = "hlt",
                               **limits) -> dict:
    gw = gw_words(data_dir)
    subgens = [gw[f"g{i}"] ** n for i in range(1, 5)] + [gw["w1"] ** n]
    t = coset_enumerate(lambda_quotient(data_dir), subgens, strategy=strategy, **limits)
    if n == 1:
        contained = True
    else:
        contained = all(tau(w, n, data_dir).is_identity() for w in subgens)
    return {"n": n, "index": t.index, "expected": n ** 5, "contained": contained,
            "ok": t.index == n ** 5 and contained}


def cusp_class_count(n: int, data_dir: str | None = None) -> dict:
    """Per slope, the index of the image of <g_{2j-1}, g_{2j}> in (Z/n)^4."""
    gw = gw_words(data_dir)
    per = []
    for j in range(1, 5):
        a = [v % n for v in gw[f"g{2 * j - 1}"].exponent_sums(4)]
        b = [v % n for v in gw[f"g{2 * j}"].exponent_sums(4)]
        span = {tuple((s * x + t * y) % n for x, y in zip(a, b)) for s in range(n) for t in range(n)}
        per.append(n ** 4 // len(span))
    return {"n": n, "per_slope": per, "total": sum(per)}


def commutator_normal_generation_evidence(data_dir: str | None = None) -> dict:
    gw = gw_words(data_dir)
    p = gamma1(data_dir)
    zero_sums = {k: not any(gw[k].exponent_sums(4)) for k in W_NAMES}
    ab, comm = class2_quotient_invariants(p.add_relators(gw[k] for k in W_NAMES))
    ab0, comm0 = class2_quotient_invariants(p)
    return {
        "w_in_commutator": zero_sums,
        "quotient_ab": ab,
        "quotient_comm": comm,
        "control_comm": comm0,
        "ok": all(zero_sums.values()) and ab == AbelianInvariants(4, ()) and comm == AbelianInvariants(0, ())
        and comm0.free_rank > 0,
    }


def commutator_power_report(n: int, data_dir: str | None = None) -> dict[int, bool]:
    from .matgroups import verify_commutator_powers

    t = tau_images(0, data_dir)
    return verify_commutator_powers(n, t, t)


def power_forms_report(ms=range(-10, 11), data_dir: str | None = None) -> bool:
    from .matgroups import power_closed_form_check

    t = tau_images(0, data_dir)
    return all(power_closed_form_check(j, m, t) for j in range(1, 5) for m in ms)
