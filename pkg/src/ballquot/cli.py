"""Claim registry and the ``verify`` command line driver.

Usage::

    ballquot verify --all --n 3
    ballquot verify --claim chern.n3 --format text
    ballquot verify --claim tau.relations --convention both

Exit status: 0 when every selected claim passes or is skipped, 1 when any claim
fails, 2 when none failed but some hit a resource limit, 3 on bad input
(unknown claim id, missing data file).
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import data as _data
from .abelian import AbelianInvariants
from .cosets import ResourceLimitError
from .matgroups import ModMatrix, OrderCapExceeded
from .perms import GroupTooLarge

SCHEMA = "ballquot.report/1"
STATUSES = ("pass", "fail", "skipped", "resource-limit")


class Skip(Exception):
    """Raised by a claim that does not apply to the requested parameters."""


class UnknownClaim(KeyError):
    pass


@dataclass
class Context:
    data_dir: str | None = None
    seed: int = 0
    convention: str = "both"
    max_cosets: int = 10**6


@dataclass
class ClaimResult:
    claim: str
    status: str
    witness: dict = field(default_factory=dict)
    seconds: float = 0.0

    def as_dict(self, timing: bool = True) -> dict:
        d = {"claim": self.claim, "status": self.status, "witness": _jsonable(self.witness)}
        if timing:
            d["seconds"] = round(self.seconds, 3)
        return d


@dataclass(frozen=True)
class Claim:
    template: str                       # e.g. "chern.n{N}" or "gamma1.ab"
    run: Callable[[Context, int | None], tuple[bool, dict]]
    deps: tuple[str, ...] = ()
    summary: str = ""

    @property
    def parametrized(self) -> bool:
        return "{N}" in self.template

    def cid(self, n: int | None) -> str:
        return self.template.replace("{N}", str(n)) if self.parametrized else self.template


REGISTRY: dict[str, Claim] = {}


def claim(template: str, deps: tuple[str, ...] = (), summary: str = ""):
    def deco(fn):
        REGISTRY[template] = Claim(template, fn, deps, summary or (fn.__doc__ or "").strip())
        return fn
    return deco


def _odd(n: int) -> None:
    if n % 2 == 0 or n < 3:
        raise Skip("requires odd n >= 3")


# --- claims: Gamma_1 and tau -------------------------------------------------------

@claim("gamma1.ab")
def _gamma1_ab(ctx, n):
    """Gamma_1 abelianization is Z^4."""
    from .abelian import abelian_invariants
    from .hirzebruch import gamma1

    ab = abelian_invariants(gamma1(ctx.data_dir))
    return ab == AbelianInvariants(4, ()), {"invariants": ab}


@claim("tau.relations")
def _tau_relations(ctx, n):
    """tau satisfies the nine Gamma_1 relators."""
    from .hirzebruch import relation_report

    rep = relation_report(ctx.data_dir)
    convs = ("left", "right") if ctx.convention == "both" else (ctx.convention,)
    passing = [c for c in convs if all(rep[c])]
    return bool(passing), {"per_convention": {c: rep[c] for c in convs}, "passing": passing}


@claim("gw.words")
def _gw_words(ctx, n):
    """h-words of g1..g8, w1..w4 reproduce from scratch and match the shipped file."""
    from .dm import rewrite_gi_words

    rep = rewrite_gi_words(ctx.data_dir)
    try:
        shipped = _data.load_words("gw_words.words", ctx.data_dir)[1]
    except _data.MissingDataError:
        shipped = None
    same = shipped is None or shipped == rep.words
    return same, {"convention": rep.convention, "matches": rep.matches,
                  "lengths": {k: len(w) for k, w in rep.words.items()},
                  "shipped_file_matches": None if shipped is None else same}


@claim("tau.kernel", deps=("gw.words",))
def _tau_kernel(ctx, n):
    """tau(w2 w1^-1) = tau(w4 w3^-1) = tau(w3 w1) = Id over Z."""
    from .hirzebruch import kernel_products

    rep = kernel_products(ctx.data_dir)
    return all(rep.values()), rep


@claim("tau.powers", deps=("gw.words",))
def _tau_powers(ctx, n):
    """Closed forms for tau(g_j)^m, j = 1..4, m in [-10, 10]."""
    from .hirzebruch import power_forms_report

    ok = power_forms_report(data_dir=ctx.data_dir)
    return ok, {"range": [-10, 10]}


@claim("tau.orders.n{N}", deps=("gw.words",))
def _tau_orders(ctx, n):
    """Orders of tau_n(g_j), tau_n(w1): exactly n for odd n, not n for even n."""
    from .hirzebruch import orders_mod_n

    if n < 2:
        raise Skip("requires n >= 2")
    orders = orders_mod_n(n, ctx.data_dir)
    if n % 2:
        ok = all(v == n for v in orders.values())
    else:
        ok = any(orders[k] != n for k in ("g1", "g2", "g3", "g4"))
    return ok, {"orders": orders}


@claim("tau.commpowers.n{N}", deps=("gw.words",))
def _commpowers(ctx, n):
    """tau(w_j)^(n^2) = [tau(g_{2j-1})^n, tau(g_{2j})^n] for j = 1..4."""
    from .hirzebruch import commutator_power_report

    rep = commutator_power_report(n, ctx.data_dir)
    return all(rep.values()), {"per_j": rep}


# --- claims: G_n, Gamma_n, Delta_n ---------------------------------------------------

@claim("gn.order.n{N}", deps=("gw.words",))
def _gn_order(ctx, n):
    """|G_n| = n^5 with abelianization (Z/n)^4, two ways."""
    from .hirzebruch import build_Gn

    _odd(n)
    g = build_Gn(n, ctx.data_dir)
    target = AbelianInvariants(0, (n,) * 4)
    ok = g.order == n ** 5 and g.ab_from_quotient == target and g.ab_from_exponents == target
    return ok, {"order": g.order, "ab_quotient": g.ab_from_quotient, "ab_exponents": g.ab_from_exponents}


@claim("gn.center.n{N}", deps=("gw.words",))
def _gn_center(ctx, n):
    """Center of G_n has order n and is generated by tau_n(w1)."""
    from .hirzebruch import build_Gn

    _odd(n)
    g = build_Gn(n, ctx.data_dir)
    return g.center_order == n and g.center_is_sigma, {"center_order": g.center_order,
                                                       "generated_by_sigma": g.center_is_sigma}


@claim("gn.normalform.n{N}", deps=("gw.words",))
def _gn_normalform(ctx, n):
    """Normal form exponents round trip and match the t_n matrix."""
    from .hirzebruch import check_normal_forms

    _odd(n)
    sample = None if n ** 5 <= 243 else 1000
    rep = check_normal_forms(n, sample=sample, seed=ctx.seed, data_dir=ctx.data_dir)
    ok = not rep["failures"] and (sample is not None or rep["bijective"])
    return ok, {k: v for k, v in rep.items() if k != "failures"} | {"failures": rep["failures"][:5]}


@claim("chi.values.n{N}", deps=("gw.words",))
def _chi(ctx, n):
    """chi(w1) = chi(w2) = sigma, chi(w3) = chi(w4) = sigma^-1, conjugation invariant."""
    from .hirzebruch import character_report

    _odd(n)
    rep = character_report(n, seed=ctx.seed, data_dir=ctx.data_dir)
    return rep["ok"], rep


@claim("lambda-eq-delta.n{N}", deps=("gw.words",))
def _lambda(ctx, n):
    """<g_i^n, w1^n> has index n^5 in the quotient presentation and lies in ker tau_n."""
    from .hirzebruch import verify_lambda_equals_delta

    if n % 2 == 0:
        raise Skip("requires odd n")
    if n ** 5 > ctx.max_cosets:
        raise ResourceLimitError(f"index {n ** 5} exceeds max-cosets {ctx.max_cosets}")
    rep = verify_lambda_equals_delta(n, ctx.data_dir, max_cosets=ctx.max_cosets)
    return rep["ok"], rep


@claim("delta.ab.n{N}", deps=("gw.words",))
def _delta_ab(ctx, n):
    """Delta_n^ab has free rank 4 and torsion exponents dividing n^2."""
    from .hirzebruch import delta_n_abelianization

    _odd(n)
    if n ** 5 > ctx.max_cosets:
        raise ResourceLimitError(f"index {n ** 5} exceeds max-cosets {ctx.max_cosets}")
    rep = delta_n_abelianization(n, data_dir=ctx.data_dir)
    w = {"index": rep.index, "rs_generators": rep.rs_generators, "rs_relators": rep.rs_relators,
         "free_rank": rep.free_rank}
    if rep.invariants is not None:
        w["invariants"] = rep.invariants
        ok = rep.free_rank == 4 and all((n * n) % t == 0 for t in rep.invariants.torsion)
    else:
        w.update(rank_upper=rep.rank_upper, rank_lower=rep.rank_lower, per_prime=rep.per_prime)
        ok = rep.free_rank == 4
    w["irregularity"] = (rep.free_rank // 2) if rep.free_rank is not None else None
    return ok, w


@claim("gamma.ab.n{N}")
def _gamma_ab(ctx, n):
    """Gamma_n has index n^4, free rank 4 and torsion exponents dividing n^2."""
    from .hirzebruch import gamma_n_index_and_ab, gamma_n_table, gamma_n_table_todd_coxeter

    if n ** 4 > ctx.max_cosets:
        raise ResourceLimitError(f"index {n ** 4} exceeds max-cosets {ctx.max_cosets}")
    index, ab = gamma_n_index_and_ab(n, ctx.data_dir)
    w = {"index": index, "invariants": ab}
    ok = index == n ** 4 and ab.free_rank == 4 and all((n * n) % t == 0 for t in ab.torsion)
    if 1 < n <= 5:
        same = (gamma_n_table_todd_coxeter(n, ctx.data_dir, max_cosets=ctx.max_cosets).standardized()
                == gamma_n_table(n, ctx.data_dir).standardized())
        w["todd_coxeter_agrees"] = same
        ok = ok and same
    return ok, w


@claim("cusp.classes.n{N}", deps=("gw.words",))
def _cusp_classes(ctx, n):
    """4 n^2 Gamma_n-conjugacy classes of cusp subgroups."""
    from .hirzebruch import cusp_class_count

    rep = cusp_class_count(n, ctx.data_dir)
    return rep["total"] == 4 * n * n, rep


@claim("commutator.normalgen", deps=("gw.words",))
def _normalgen(ctx, n):
    """w1..w4 lie in the commutator subgroup and kill the class-2 commutator part."""
    from .hirzebruch import commutator_normal_generation_evidence

    rep = commutator_normal_generation_evidence(ctx.data_dir)
    return rep["ok"], rep


# --- claims: the Deligne-Mostow lattice ------------------------------------------------

@claim("dm.index72")
def _dm_index(ctx, n):
    """The four h-words generate a normal subgroup of index 72; HLT and Felsch agree."""
    from .dm import enumerate_H

    hlt = enumerate_H("hlt", ctx.data_dir, ctx.max_cosets)
    fel = enumerate_H("felsch", ctx.data_dir, ctx.max_cosets)
    same = hlt.table.standardized() == fel.table.standardized()
    ok = hlt.index == 72 and hlt.normal and hlt.F.order == 72 and same and not hlt.table.problems()
    return ok, {"index": hlt.index, "normal": hlt.normal, "F_order": hlt.F.order,
                "felsch_agrees": same}


@claim("dm.F", deps=("dm.index72",))
def _dm_F(ctx, n):
    """F has center Z/6 and F/Z looks like A4."""
    from .dm import analyze_F, enumerate_H

    q = analyze_F(enumerate_H(data_dir=ctx.data_dir).F)
    return q.center_order == 6 and q.looks_like_A4, q.__dict__ | {"looks_like_A4": q.looks_like_A4}


@claim("dm.homs", deps=("dm.index72",))
def _dm_homs(ctx, n):
    """Homomorphisms Gamma -> F; some surjection has kernel H."""
    from .dm import count_homs_to_F, enumerate_H

    h = count_homs_to_F(enumerate_H(data_dir=ctx.data_dir).F, ctx.data_dir)
    return h.kernel_is_H > 0, {"satisfying": h.satisfying, "surjective": h.surjective,
                               "kernel_is_H": h.kernel_is_H, "distinct_kernels": h.distinct_kernels}


@claim("dm.presentation", deps=("dm.index72",))
def _dm_pres(ctx, n):
    """The Gamma_1 relators hold in H and both abelianizations are Z^4."""
    from .dm import verify_H_presentation

    rep = verify_H_presentation(ctx.data_dir)
    return rep["ok"], rep


@claim("dm.isomorphism")
def _dm_iso(ctx, n):
    """Both presentations of the lattice hold in exact Q(zeta) matrices, both directions."""
    from .dm import verify_isomorphism

    rep = verify_isomorphism(ctx.data_dir)
    return rep["ok"], rep


@claim("dm.cusp", deps=("dm.index72",))
def _dm_cusp(ctx, n):
    """Cusp image has index 4 in F; its kernel has Heisenberg invariants."""
    from .dm import cusp_kernel_analysis

    c = cusp_kernel_analysis(ctx.data_dir)
    ok = (c.index_in_F == 4 and c.ab == AbelianInvariants(2, ()) and c.comm == AbelianInvariants(1, ())
          and all(all(v) if isinstance(v, list) else v for v in c.report.values()))
    return ok, {"image_order": c.image_order, "index_in_F": c.index_in_F, "ab": c.ab,
                "comm": c.comm, "simplified_generators": list(c.simplified.generators), **c.report}


@claim("dm.euler", deps=("dm.index72",))
def _dm_euler(ctx, n):
    """Stratified orbifold Euler characteristic 1/72 and 72 x 1/72 = 1."""
    from .dm import orbifold_euler_consistency

    rep = orbifold_euler_consistency(ctx.data_dir)
    return rep["ok"], rep


@claim("dm.torsion", deps=("dm.index72",))
def _dm_torsion(ctx, n):
    """User-supplied torsion representatives avoid H."""
    from .dm import torsion_freeness

    rep = torsion_freeness(ctx.data_dir)
    if rep["status"] == "not checked":
        raise Skip("not checked - external data absent")
    return rep["status"] == "pass", rep


# --- claims: geometry ----------------------------------------------------------------

@claim("geometry.intersections")
def _intersections(ctx, n):
    """T_a . T_b = 1 for distinct slopes, by counting and by norms."""
    from .geometry import pairwise_slope_intersections

    rep = pairwise_slope_intersections()
    ok = all(v["value"] == v["norm"] == 1 for v in rep.values())
    return ok, {f"{a}.{b}": v["value"] for (a, b), v in rep.items()}


@claim("geometry.incidence.n{N}")
def _incidence(ctx, n):
    """n^2 translates of size n^2 per slope; 4 through each point; distinct slopes meet once."""
    from .geometry import incidence

    inc = incidence(n)
    sizes = inc.class_sizes()
    ok = (len(inc.points) == n ** 4 and all(v == n * n for v in inc.class_counts().values())
          and all(s == {n * n} for s in sizes.values()) and inc.curves_through() == {4})
    w = {"points": len(inc.points), "classes": inc.class_counts()}
    if n <= 5:
        w["crossings"] = sorted(inc.crossings())
        ok = ok and inc.crossings() == {1}
    return ok, w


@claim("chern.n{N}")
def _chern(ctx, n):
    """c1^2 = 3n^5 - 4n^3 and c2 = n^5, closed form against the intersection model."""
    from .geometry import ampleness_margin, chern_numbers, lifted_genus

    _odd(n)
    ch = chern_numbers(n)
    am = ampleness_margin(n)
    g = lifted_genus(n)
    ok = ch["agree"] and ch["slope"] == ch["slope_closed"] and am["positive"] and g == n - 1
    return ok, {"c1sq": ch["c1sq"], "c2": ch["c2"], "c1sq_model": ch["c1sq_model"],
                "slope": ch["slope"], "ample_margin": am["margin"], "genus": g}


@claim("geometry.degrees.n{N}")
def _degrees(ctx, n):
    """Degrees of L^(i) on branch components and exceptional curves; n L = branch class."""
    from .geometry import line_bundle_identity, line_bundle_degrees

    if n < 2:
        raise Skip("requires n >= 2")
    reps = [line_bundle_degrees(n, i) for i in range(1, n)]
    ident = line_bundle_identity(n)
    return ident and all(r["ok"] for r in reps), {
        "line_bundle_identity": ident,
        "per_i": {r["i"]: {s: v["degrees"] for s, v in r["components"].items()} | {"E": r["exceptional"]}
                  for r in reps}}


# --- selection, ordering, execution ---------------------------------------------------------

_PARAM = re.compile(r"^(?P<stem>.+)\.n(?P<n>\d+)$")


def resolve(cid: str) -> tuple[Claim, int | None]:
    if cid in REGISTRY and not REGISTRY[cid].parametrized:
        return REGISTRY[cid], None
    m = _PARAM.match(cid)
    if m:
        tmpl = f"{m['stem']}.n{{N}}"
        if tmpl in REGISTRY:
            return REGISTRY[tmpl], int(m["n"])
    raise UnknownClaim(cid)


def select(claims: list[str] | None, all_: bool, ns: list[int]) -> list[str]:
    if all_:
        out = []
        for c in REGISTRY.values():
            out += [c.cid(n) for n in ns] if c.parametrized else [c.cid(None)]
        return out
    ids = []
    for cid in claims or []:
        resolve(cid)
        ids.append(cid)
    return ids


def ordered(ids: list[str]) -> list[list[str]]:
    """Waves of claim ids; each wave only depends on earlier ones (within the selection)."""
    chosen = set(ids)
    done: set[str] = set()
    waves = []
    remaining = list(dict.fromkeys(ids))
    while remaining:
        wave = [c for c in remaining
                if all(d in done or d not in chosen for d in resolve(c)[0].deps)]
        if not wave:
            raise RuntimeError("dependency cycle among claims")
        waves.append(sorted(wave))
        done.update(wave)
        remaining = [c for c in remaining if c not in done]
    return waves


def run_one(cid: str, ctx: Context) -> ClaimResult:
    c, n = resolve(cid)
    t0 = time.perf_counter()
    try:
        ok, witness = c.run(ctx, n)
        status = "pass" if ok else "fail"
    except Skip as e:
        status, witness = "skipped", {"reason": str(e)}
    except (ResourceLimitError, OrderCapExceeded, GroupTooLarge, MemoryError) as e:
        status, witness = "resource-limit", {"error": str(e)}
    except _data.MissingDataError:
        raise
    except Exception as e:  # a crash inside a check counts as a failure with a witness
        status, witness = "fail", {"error": f"{type(e).__name__}: {e}"}
    return ClaimResult(cid, status, witness, time.perf_counter() - t0)


def run(ids: list[str], ctx: Context, workers: int = 1) -> list[ClaimResult]:
    results: dict[str, ClaimResult] = {}
    for wave in ordered(ids):
        if workers > 1 and len(wave) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for r in pool.map(lambda c: run_one(c, ctx), wave):
                    results[r.claim] = r
        else:
            for c in wave:
                results[c] = run_one(c, ctx)
    return [results[c] for c in dict.fromkeys(ids)]


def exit_code(results: list[ClaimResult]) -> int:
    statuses = {r.status for r in results}
    if "fail" in statuses:
        return 1
    if "resource-limit" in statuses:
        return 2
    return 0


# --- reporting --------------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [_jsonable(v) for v in items]
    if isinstance(x, AbelianInvariants):
        return {"free_rank": x.free_rank, "torsion": list(x.torsion), "text": str(x)}
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, ModMatrix):
        return [list(r) for r in x.rows]
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


def emit_report(results: list[ClaimResult], fmt: str = "json", timing: bool = True) -> str:
    counts = {s: sum(r.status == s for r in results) for s in STATUSES}
    if fmt == "json":
        doc = {"schema": SCHEMA, "results": [r.as_dict(timing) for r in results],
               "summary": counts | {"exit_code": exit_code(results)}}
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if fmt == "text":
        lines = []
        for r in results:
            t = f"  ({r.seconds:.2f}s)" if timing else ""
            lines.append(f"{r.status.upper():15s} {r.claim}{t}")
            if r.status != "pass":
                lines.append("    " + json.dumps(_jsonable(r.witness))[:400])
        lines.append(" ".join(f"{k}={v}" for k, v in counts.items()))
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ballquot", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", help="run registered claims")
    sel = v.add_mutually_exclusive_group()
    sel.add_argument("--all", action="store_true", help="every registered claim")
    sel.add_argument("--claim", action="append", default=[], metavar="ID")
    v.add_argument("--n", type=int, action="append", dest="ns", metavar="N",
                   help="values of n for parametrized claims with --all (default 3)")
    v.add_argument("--max-cosets", type=int, default=10**6)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--data-dir", default=None, help=f"defaults to ${_data.ENV_VAR} or the shipped data")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--convention", choices=("left", "right", "both"), default="both")
    v.add_argument("--no-timing", action="store_true", help="omit wall times from the report")
    v.add_argument("--output", "-o", default=None, help="write the report to a file")
    sub.add_parser("list", help="list claim ids")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for c in REGISTRY.values():
            print(f"{c.template:24s} {c.summary}")
        return 0
    ctx = Context(args.data_dir, args.seed, args.convention, args.max_cosets)
    try:
        if args.data_dir and not os.path.isdir(args.data_dir):
            raise _data.MissingDataError(f"data directory not found: {args.data_dir}")
        ids = select(args.claim, args.all, args.ns or [3])
        results = run(ids, ctx, args.workers)
    except UnknownClaim as e:
        print(f"error: unknown claim id {e.args[0]!r}", file=sys.stderr)
        return 3
    except _data.MissingDataError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    text = emit_report(results, args.format, timing=not args.no_timing)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(results)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
