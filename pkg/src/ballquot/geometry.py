"""Numerical intersection theory on the blowup Y_n of A = T x T at its n-division points.

T is the elliptic curve C / Z[zeta].  The four slope curves are the graphs
{(z, a z)} for a in {0, 1, zeta} together with T_inf = {0} x T.  Translates of
T_a through division points give the branch components; their proper transforms
live in the span of the pulled back slope classes and the exceptional curves
E_p, which is all the bookkeeping needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

SLOPES = ("0", "1", "zeta", "inf")
_NORM = {("0", "1"): 1, ("0", "zeta"): 1, ("1", "zeta"): 1}   # norms of a - b in Z[zeta]

Residue = tuple[int, int]           # a + b zeta mod n
Point = tuple[Residue, Residue]     # a point of U_n = (Z[zeta]/n)^2


# --- Z[zeta]/n and the division points ------------------------------------------

def _mul_slope(slope: str, z: Residue, n: int) -> Residue:
    a, b = z
    if slope == "0":
        return (0, 0)
    if slope == "1":
        return (a % n, b % n)
    if slope == "zeta":
        # zeta (a + b zeta) = -b + (a + b) zeta, using zeta^2 = zeta - 1
        return (-b % n, (a + b) % n)
    raise ValueError(f"no multiplication by slope {slope!r}")


def _sub(z: Residue, w: Residue, n: int) -> Residue:
    return ((z[0] - w[0]) % n, (z[1] - w[1]) % n)


def division_points(n: int) -> list[Point]:
    r = [(a, b) for a in range(n) for b in range(n)]
    return [(z, w) for z in r for w in r]


def translate_class(slope: str, p: Point, n: int) -> Residue:
    """Label of the translate of T_slope through p (a coset of {(z, slope z)})."""
    z, w = p
    if slope == "inf":
        return z
    return _sub(w, _mul_slope(slope, z, n), n)


@dataclass
class Incidence:
    n: int
    points: list[Point]
    classes: dict[str, dict[Residue, list[Point]]]

    def class_counts(self) -> dict[str, int]:
        return {s: len(c) for s, c in self.classes.items()}

    def class_sizes(self) -> dict[str, set[int]]:
        return {s: {len(v) for v in c.values()} for s, c in self.classes.items()}

    def curves_through(self) -> set[int]:
        """Number of branch components through each point (as a set of values)."""
        count = {p: 0 for p in self.points}
        for c in self.classes.values():
            for pts in c.values():
                for p in pts:
                    count[p] += 1
        return set(count.values())

    def crossings(self) -> set[int]:
        """Sizes of C cap C' over components of different slopes."""
        out = set()
        for i, s in enumerate(SLOPES):
            for t in SLOPES[i + 1:]:
                for a in self.classes[s].values():
                    sa = set(a)
                    for b in self.classes[t].values():
                        out.add(len(sa.intersection(b)))
        return out


@lru_cache(maxsize=None)
def incidence(n: int) -> Incidence:
    if n < 1:
        raise ValueError("n must be positive")
    pts = division_points(n)
    classes = {}
    for s in SLOPES:
        c: dict[Residue, list[Point]] = {}
        for p in pts:
            c.setdefault(translate_class(s, p, n), []).append(p)
        classes[s] = c
    return Incidence(n, pts, classes)


def pairwise_slope_intersections(ns: Iterable[int] = (2, 3, 4, 5, 7)) -> dict[tuple[str, str], dict]:
    """T_a . T_b as the number of z with a z = b z, counted in (Z[zeta]/n) for several n."""
    out = {}
    for i, a in enumerate(SLOPES):
        for b in SLOPES[i + 1:]:
            counts = {}
            for n in ns:
                r = [(x, y) for x in range(n) for y in range(n)]
                if b == "inf":
                    # (z, a z) = (0, w) forces z = 0
                    counts[n] = sum(1 for z in r if z == (0, 0))
                else:
                    counts[n] = sum(1 for z in r if _mul_slope(a, z, n) == _mul_slope(b, z, n))
            values = set(counts.values())
            oracle = 1 if b == "inf" else _NORM[(a, b)]
            out[(a, b)] = {"counts": counts, "value": values.pop() if len(values) == 1 else None,
                           "norm": oracle}
    return out


# --- divisor classes -------------------------------------------------------------

class DivisorClass:
    """Rational combination of pulled back slope classes and exceptional curves."""

    __slots__ = ("slope", "exc")

    def __init__(self, slope: Mapping[str, Fraction] | None = None,
                 exc: Mapping[Point, Fraction] | None = None):
        self.slope = {s: Fraction(v) for s, v in (slope or {}).items() if v}
        self.exc = {p: Fraction(v) for p, v in (exc or {}).items() if v}
        bad = set(self.slope) - set(SLOPES)
        if bad:
            raise ValueError(f"unknown slopes {bad}")

    @classmethod
    def pullback(cls, slope: str) -> "DivisorClass":
        return cls({slope: 1})

    @classmethod
    def exceptional(cls, points: Iterable[Point]) -> "DivisorClass":
        return cls(exc={p: 1 for p in points})

    def __add__(self, o: "DivisorClass") -> "DivisorClass":
        s = dict(self.slope)
        for k, v in o.slope.items():
            s[k] = s.get(k, 0) + v
        e = dict(self.exc)
        for k, v in o.exc.items():
            e[k] = e.get(k, 0) + v
        return DivisorClass(s, e)

    def __neg__(self) -> "DivisorClass":
        return DivisorClass({k: -v for k, v in self.slope.items()}, {k: -v for k, v in self.exc.items()})

    def __sub__(self, o: "DivisorClass") -> "DivisorClass":
        return self + (-o)

    def __rmul__(self, c) -> "DivisorClass":
        c = Fraction(c)
        return DivisorClass({k: c * v for k, v in self.slope.items()}, {k: c * v for k, v in self.exc.items()})

    def dot(self, o: "DivisorClass") -> Fraction:
        """(s_a)^2 = 0, s_a . s_b = 1 (a != b), E_p^2 = -1, all other pairings 0."""
        total = Fraction(0)
        for a, u in self.slope.items():
            for b, v in o.slope.items():
                if a != b:
                    total += u * v
        small, big = (self.exc, o.exc) if len(self.exc) <= len(o.exc) else (o.exc, self.exc)
        for p, u in small.items():
            v = big.get(p)
            if v:
                total -= u * v
        return total

    def __eq__(self, o) -> bool:
        return isinstance(o, DivisorClass) and self.slope == o.slope and self.exc == o.exc

    def __repr__(self) -> str:
        return f"DivisorClass({self.slope}, <{len(self.exc)} exceptional terms>)"


def proper_transform_class(n: int, slope: str, translate: Residue) -> DivisorClass:
    pts = incidence(n).classes[slope].get(translate)
    if pts is None:
        raise ValueError(f"no translate {translate} of slope {slope} for n={n}")
    return DivisorClass.pullback(slope) - DivisorClass.exceptional(pts)


def total_exceptional(n: int) -> DivisorClass:
    return DivisorClass.exceptional(division_points(n))


def branch_divisor(n: int, slope: str) -> DivisorClass:
    """Sum of the proper transforms of all n^2 translates of one slope."""
    cls = incidence(n).classes[slope]
    return DivisorClass({slope: len(cls)}) - DivisorClass(
        exc={p: 1 for pts in cls.values() for p in pts})


def branch_divisor_by_components(n: int, slope: str) -> DivisorClass:
    out = DivisorClass()
    for t in incidence(n).classes[slope]:
        out = out + proper_transform_class(n, slope, t)
    return out


# --- Chern numbers and friends ------------------------------------------------

def _require_odd(n: int) -> None:
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and at least 3")


def log_canonical_part(n: int) -> DivisorClass:
    """K_Y + (1 - 1/n) D with K_Y = E (A has trivial canonical class)."""
    c = Fraction(n - 1, n)
    d = DivisorClass()
    for s in SLOPES:
        d = d + branch_divisor(n, s)
    return total_exceptional(n) + c * d


def chern_numbers(n: int) -> dict:
    _require_odd(n)
    closed_c1 = 3 * n ** 5 - 4 * n ** 3
    L = log_canonical_part(n)
    model_c1 = n * L.dot(L)
    c2_Y = 0 + n ** 4                  # chi(A) = 0, each point blowup adds 1
    chi_branch = 4 * n ** 2 * (2 - 2 * 1)   # 4 n^2 elliptic components
    c2 = n * (c2_Y - chi_branch) + chi_branch
    return {
        "n": n,
        "c1sq": closed_c1,
        "c1sq_model": model_c1,
        "c2": n ** 5,
        "c2_model": c2,
        "slope": Fraction(closed_c1, n ** 5),
        "slope_closed": 3 - Fraction(4, n ** 2),
        "agree": model_c1 == closed_c1 and c2 == n ** 5,
    }


def ampleness_margin(n: int) -> dict:
    if n < 2:
        raise ValueError("n must be at least 2")
    p = division_points(n)[0]
    c = Fraction(n - 1, n)
    d = DivisorClass()
    for s in SLOPES:
        d = d + branch_divisor(n, s)
    L = total_exceptional(n) + c * d
    value = L.dot(DivisorClass.exceptional([p]))
    return {"n": n, "margin": value, "formula": -1 + 4 * c, "positive": value > 0}


def lifted_genus(n: int, branch_points: int = 4) -> int:
    """Genus of an n-fold cyclic cover of P^1 totally ramified over the branch points."""
    if n < 2:
        raise ValueError("n must be at least 2")
    two_g_minus_2 = n * (-2) + branch_points * (n - 1)
    return two_g_minus_2 // 2 + 1


def line_bundle_L(n: int) -> DivisorClass:
    return DivisorClass({"0": n, "1": n, "inf": n * (n - 1), "zeta": n * (n - 1)}) \
        - 2 * total_exceptional(n)


def line_bundle_L_i(n: int, i: int) -> DivisorClass:
    return i * line_bundle_L(n) - (i - 1) * (branch_divisor(n, "inf") + branch_divisor(n, "zeta"))


def line_bundle_identity(n: int) -> bool:
    """n L equals D_0 + D_1 + (n-1) D_inf + (n-1) D_zeta as classes."""
    rhs = (branch_divisor(n, "0") + branch_divisor(n, "1")
           + (n - 1) * branch_divisor(n, "inf") + (n - 1) * branch_divisor(n, "zeta"))
    return n * line_bundle_L(n) == rhs


def line_bundle_degrees(n: int, i: int) -> dict:
    if not 1 <= i <= n - 1:
        raise ValueError("need 1 <= i <= n - 1")
    Li = line_bundle_L_i(n, i)
    K = total_exceptional(n)
    inc = incidence(n)
    per_slope = {}
    for s in SLOPES:
        degs, k_degs = set(), set()
        for t in inc.classes[s]:
            C = proper_transform_class(n, s, t)
            degs.add(Li.dot(C))
            k_degs.add((K + Li).dot(C))
        expected = -i * n if s in ("0", "1") else -n * (n - i)
        per_slope[s] = {"degrees": sorted(degs), "expected": expected,
                        "K_plus_L_positive": min(k_degs) > 0}
    exc = set()
    for p in inc.points:
        Ep = DivisorClass.exceptional([p])
        exc.add(-2 + K.dot(Ep) + Li.dot(Ep))
    ok = all(v["degrees"] == [v["expected"]] and v["K_plus_L_positive"] for v in per_slope.values())
    return {"n": n, "i": i, "components": per_slope, "exceptional": sorted(exc),
            "ok": ok and exc == {-1}}


def geometry_rows(ns: Iterable[int]) -> list[dict]:
    rows = []
    for n in ns:
        ch = chern_numbers(n)
        rows.append({"n": n, "c1sq": ch["c1sq"], "c2": ch["c2"], "slope": str(ch["slope"]),
                     "ample_margin": str(ampleness_margin(n)["margin"]), "genus": lifted_genus(n)})
    return rows
