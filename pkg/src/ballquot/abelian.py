"""Exact integer linear algebra: Smith normal form, abelian invariants and the
class-2 nilpotent quotient invariants of a presentation.

Commutators follow ``[a, b] = a^-1 b^-1 a b`` throughout.
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .words import Presentation, Word


@dataclass
class IntegerMatrix:
    """Sparse integer matrix; ``entries`` maps ``(row, col)`` to a nonzero int."""

    rows: int
    cols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        for (i, j), v in list(self.entries.items()):
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
            if v == 0:
                del self.entries[(i, j)]

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[int]]) -> "IntegerMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, {(i, j): int(v) for i, r in enumerate(data) for j, v in enumerate(r) if v})

    @classmethod
    def identity(cls, n: int) -> "IntegerMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries.get(ij, 0)

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out: dict[tuple[int, int], int] = {}
        for (i, k), v in self.entries.items():
            for j, w in by_row.get(k, ()):
                out[(i, j)] = out.get((i, j), 0) + v * w
        return IntegerMatrix(self.rows, other.cols, out)

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntegerMatrix) and (self.rows, self.cols) == (other.rows, other.cols)
                and self.entries == other.entries)

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def is_diagonal(self) -> bool:
        return all(i == j for i, j in self.entries)

    def determinant(self) -> int:
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        return _bareiss_det(self.to_dense())

    def to_triplets(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += [f"{i} {j} {v}" for (i, j), v in sorted(self.entries.items())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_triplets(cls, text: str) -> "IntegerMatrix":
        it = iter(line.split() for line in text.splitlines() if line.strip() and not line.startswith("#"))
        rows, cols = map(int, next(it))
        return cls(rows, cols, {(int(i), int(j)): int(v) for i, j, v in it})


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(self.torsion))
        if any(t < 2 for t in self.torsion):
            raise ValueError("torsion coefficients must be >= 2")
        if any(b % a for a, b in zip(self.torsion, self.torsion[1:])):
            raise ValueError("torsion coefficients must form a divisibility chain")

    @classmethod
    def from_factors(cls, ngens: int, factors: Iterable[int]) -> "AbelianInvariants":
        factors = [abs(f) for f in factors if f]
        return cls(ngens - len(factors), tuple(sorted(f for f in factors if f != 1)))

    def exponent(self) -> int:
        return self.torsion[-1] if self.torsion else 1

    def __str__(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


# --- Smith normal form -----------------------------------------------------------

def smith_normal_form(a: IntegerMatrix):
    """Return ``(factors, u, v)`` with ``u @ a @ v`` diagonal.

    ``factors`` are the nonzero invariant factors, positive, each dividing the
    next; they sit at the start of the diagonal.  ``u`` and ``v`` are unimodular.
    """
    m, n = a.rows, a.cols
    A = a.to_dense()
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst -= q * row src
        if q:
            A[dst] = [x - q * y for x, y in zip(A[dst], A[src])]
            U[dst] = [x - q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst -= q * col src
        if q:
            for row in A:
                row[dst] -= q * row[src]
            for row in V:
                row[dst] -= q * row[src]

    t = 0
    while t < min(m, n):
        # smallest nonzero entry of the trailing block as pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, A[i][t] // p)
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, A[t][j] // p)
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest leftover in row/column t into the pivot
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], -1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    factors = [A[i][i] for i in range(min(m, n)) if A[i][i]]
    return factors, IntegerMatrix.from_dense(U) if m else IntegerMatrix(0, 0), \
        IntegerMatrix.from_dense(V) if n else IntegerMatrix(0, 0)


def invariant_factors(a: IntegerMatrix) -> list[int]:
    """Nonzero invariant factors of ``a`` without transforms.

    Unit pivots are eliminated sparsely first (Markowitz-style choice to keep
    fill low); the remaining block goes through the dense algorithm.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (i, j), v in a.entries.items():
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)
    units = 0
    while True:
        best = None
        for j in sorted(cols, key=lambda c: len(cols[c])):
            cj = cols[j]
            if best is not None and (len(cj) - 1) * 1 >= best[0]:
                break
            for i in cj:
                if abs(rows[i][j]) == 1:
                    cost = (len(cj) - 1) * (len(rows[i]) - 1)
                    if best is None or cost < best[0] or (cost == best[0] and (i, j) < best[1:]):
                        best = (cost, i, j)
        if best is None:
            break
        _, pi, pj = best
        prow = rows.pop(pi)
        s = prow[pj]
        for j in prow:
            cols[j].discard(pi)
        for i in list(cols[pj]):
            row = rows[i]
            q = row[pj] * s  # s = +-1 so row -= (row[pj]/s) * prow
            for j, v in prow.items():
                nv = row.get(j, 0) - q * v
                if nv:
                    if j not in row:
                        cols[j].add(i)
                    row[j] = nv
                elif j in row:
                    del row[j]
                    cols[j].discard(i)
            if not row:
                del rows[i]
        del cols[pj]
        for j in [j for j, c in cols.items() if not c]:
            del cols[j]
        units += 1
    if not rows:
        return [1] * units
    rlist = sorted(rows)
    clist = sorted(cols)
    cpos = {j: k for k, j in enumerate(clist)}
    dense = [[0] * len(clist) for _ in rlist]
    for r, i in enumerate(rlist):
        for j, v in rows[i].items():
            dense[r][cpos[j]] = v
    rest = _dense_factors(dense)
    return [1] * units + rest


def _dense_factors(A: list[list[int]]) -> list[int]:
    m = len(A)
    n = len(A[0]) if m else 0
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        done = False
            if not done:
                cands = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                cands += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(cands)
                A[t], A[i] = A[i], A[t]
                for row in A:
                    row[t], row[j] = row[j], row[t]
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad])]
        t += 1
    return sorted(abs(A[i][i]) for i in range(min(m, n)) if A[i][i])


def relation_matrix(p: Presentation) -> IntegerMatrix:
    entries: dict[tuple[int, int], int] = {}
    for i, r in enumerate(p.relators):
        for j, v in enumerate(r.exponent_sums(p.ngens)):
            if v:
                entries[(i, j)] = v
    return IntegerMatrix(len(p.relators), p.ngens, entries)


def abelian_invariants(p: Presentation) -> AbelianInvariants:
    return AbelianInvariants.from_factors(p.ngens, invariant_factors(relation_matrix(p)))


def rank_mod_p(a: IntegerMatrix, prime: int) -> int:
    """Rank over GF(prime) by sparse elimination.

    Pivots are taken from the currently sparsest column, using its shortest
    row, which keeps fill-in low on the very sparse relation matrices.
    """
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (i, j), v in a.entries.items():
        v %= prime
        if v:
            rows.setdefault(i, {})[j] = v
            cols.setdefault(j, set()).add(i)
    heap = [(len(c), j) for j, c in cols.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        size, pj = heapq.heappop(heap)
        cj = cols.get(pj)
        if not cj:
            continue
        if size != len(cj):
            heapq.heappush(heap, (len(cj), pj))
            continue
        pi = min(cj, key=lambda i: (len(rows[i]), i))
        prow = rows.pop(pi)
        for j in prow:
            cols[j].discard(pi)
        inv = pow(prow[pj], -1, prime)
        touched = set()
        for i in list(cols[pj]):
            row = rows[i]
            q = row[pj] * inv % prime
            for j, v in prow.items():
                nv = (row.get(j, 0) - q * v) % prime
                if nv:
                    if j not in row:
                        cols[j].add(i)
                        touched.add(j)
                    row[j] = nv
                elif j in row:
                    del row[j]
                    cols[j].discard(i)
                    touched.add(j)
            if not row:
                del rows[i]
        del cols[pj]
        for j in touched | set(prow):
            if j in cols:
                heapq.heappush(heap, (len(cols[j]), j))
        rank += 1
    return rank


@dataclass(frozen=True)
class RankBounds:
    lower: int
    upper: int
    per_prime: dict

    @property
    def agree(self) -> bool:
        return self.lower == self.upper


def free_rank_mod_p(p: Presentation, primes: Sequence[int] = (101, 103)) -> RankBounds:
    """Bounds on the free rank of the abelianization from ranks over GF(p).

    The rank over GF(p) never exceeds the rational rank, so
    ``ngens - rank_p`` is an upper bound on the free rank; it is exact unless
    ``p`` divides a torsion coefficient.  The lower bound ``ngens - rows`` is
    trivial but honest.
    """
    m = relation_matrix(p)
    ranks = {q: rank_mod_p(m, q) for q in primes}
    upper = p.ngens - max(ranks.values())
    lower = max(0, p.ngens - min(m.rows, p.ngens))
    return RankBounds(lower, upper, {q: p.ngens - r for q, r in ranks.items()})


# --- class-2 nilpotent quotient ---------------------------------------------------

class Class2Collector:
    """Normal forms ``x_1^a_1 ... x_k^a_k * prod_{i<j} [x_i, x_j]^c_ij`` in the free
    nilpotent group of class 2 on ``k`` generators."""

    def __init__(self, k: int):
        self.k = k
        self.pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
        self.pos = {p: n for n, p in enumerate(self.pairs)}

    def beta(self, a, b) -> list[int]:
        # correction term in (a, c)(b, d) = (a + b, c + d + beta(a, b))
        return [-a[j] * b[i] for i, j in self.pairs]

    def kappa(self, a, b) -> list[int]:
        # central part of the commutator [(a, .), (b, .)]
        return [a[i] * b[j] - a[j] * b[i] for i, j in self.pairs]

    def mul(self, x, y):
        (a, c), (b, d) = x, y
        beta = self.beta(a, b)
        return ([u + v for u, v in zip(a, b)], [u + v + w for u, v, w in zip(c, d, beta)])

    def power(self, x, m: int):
        a, c = x
        bb = self.beta(a, a)
        t = comb(m, 2) if m >= 0 else m * (m - 1) // 2
        return ([m * u for u in a], [m * u + t * v for u, v in zip(c, bb)])

    def collect(self, w: Word):
        x = ([0] * self.k, [0] * len(self.pairs))
        for letter in w.letters:
            g = abs(letter) - 1
            e = [0] * self.k
            e[g] = 1 if letter > 0 else -1
            x = self.mul(x, (e, [0] * len(self.pairs)))
        return x


def class2_quotient_invariants(p: Presentation) -> tuple[AbelianInvariants, AbelianInvariants]:
    """Invariants of ``G/[G,G]`` and of ``[G,G] gamma_3 / gamma_3``.

    Relators are collected in the free class-2 nilpotent group and brought to
    echelon form on their abelian parts using group operations (products and
    powers of relators, which keep the normal closure).  The kernel inside the
    commutator part is spanned by the commutators of relators with generators
    and by the central parts of relators whose abelian part vanished.
    """
    k = p.ngens
    col = Class2Collector(k)
    elems = [col.collect(r) for r in p.relators]
    ab_rows = [list(a) for a, _ in elems]
    ab = AbelianInvariants.from_factors(k, invariant_factors(IntegerMatrix.from_dense(ab_rows)) if ab_rows else [])
    # echelon on abelian parts with tracked central parts
    work = [e for e in elems]
    lead: list = []
    for c in range(k):
        rest = [e for e in work if e[0][c] != 0]
        others = [e for e in work if e[0][c] == 0]
        while len(rest) > 1:
            rest.sort(key=lambda e: abs(e[0][c]))
            piv = rest[0]
            new = [piv]
            for e in rest[1:]:
                q = e[0][c] // piv[0][c]
                e2 = col.mul(e, col.power(piv, -q))
                if e2[0][c]:
                    new.append(e2)
                else:
                    others.append(e2)
            rest = new
        lead.extend(rest)
        work = others
    central = [c for a, c in work]  # abelian part zero
    m = len(col.pairs)
    span = [list(c) for c in central if any(c)]
    for a, _ in lead:
        for l in range(k):
            e = [0] * k
            e[l] = 1
            v = col.kappa(a, e)
            if any(v):
                span.append(v)
    factors = invariant_factors(IntegerMatrix.from_dense(span)) if span and m else []
    comm = AbelianInvariants.from_factors(m, factors)
    return ab, comm


def random_sparse_matrix(rows: int, cols: int, density: float, bound: int, rng: random.Random) -> IntegerMatrix:
    entries = {}
    for i in range(rows):
        for j in range(cols):
            if rng.random() < density:
                v = rng.randint(-bound, bound)
                if v:
                    entries[(i, j)] = v
    return IntegerMatrix(rows, cols, entries)
