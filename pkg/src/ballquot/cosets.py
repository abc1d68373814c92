"""Todd-Coxeter coset enumeration.

Column ``2*i`` of a table holds the action of generator ``i`` and column
``2*i + 1`` the action of its inverse.  Cosets act on the right, so a word is
traced letter by letter in written order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .perms import Perm, closure
from .words import Presentation, Word

HLT = "hlt"
FELSCH = "felsch"
DEFAULT_MAX_COSETS = 10**6


class ResourceLimitError(RuntimeError):
    """Enumeration ran out of cosets or steps (not a mathematical failure)."""


class IncompleteTableError(ValueError):
    pass


def col(letter: int) -> int:
    return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1


@dataclass(frozen=True)
class CosetTable:
    rows: tuple[tuple[int, ...], ...]
    ngens: int
    base: int = 0
    subgroup_words: tuple[Word, ...] = ()
    relators: tuple[Word, ...] = field(default=(), compare=False)

    @property
    def index(self) -> int:
        return len(self.rows)

    def act(self, coset: int, letter: int) -> int:
        return self.rows[coset][col(letter)]

    def trace(self, coset: int, w: Word) -> int:
        rows = self.rows
        for x in w.letters:
            coset = rows[coset][col(x)]
        return coset

    def dump(self) -> str:
        return "\n".join(f"{c}: " + " ".join(map(str, row)) for c, row in enumerate(self.rows)) + "\n"

    def problems(self) -> list[str]:
        """Violations of the table invariants; empty for a valid complete table."""
        out = []
        n = self.index
        for c, row in enumerate(self.rows):
            if len(row) != 2 * self.ngens:
                out.append(f"row {c} has {len(row)} columns")
                continue
            for k, d in enumerate(row):
                if not (0 <= d < n):
                    out.append(f"entry ({c},{k}) undefined")
                elif self.rows[d][k ^ 1] != c:
                    out.append(f"entry ({c},{k}) not inverted by column {k ^ 1}")
        if out:
            return out
        for r in self.relators:
            for c in range(n):
                if self.trace(c, r) != c:
                    out.append(f"relator {list(r.letters)} moves coset {c}")
                    break
        for w in self.subgroup_words:
            if self.trace(self.base, w) != self.base:
                out.append(f"subgroup word {list(w.letters)} moves the base coset")
        return out

    def standardized(self) -> "CosetTable":
        """Renumber cosets in breadth-first order from the base, columns in order."""
        order = [self.base]
        pos = {self.base: 0}
        i = 0
        while i < len(order):
            for d in self.rows[order[i]]:
                if d not in pos:
                    pos[d] = len(order)
                    order.append(d)
            i += 1
        rows = tuple(tuple(pos[d] for d in self.rows[c]) for c in order)
        return CosetTable(rows, self.ngens, 0, self.subgroup_words, self.relators)


class _Enumerator:
    def __init__(self, p: Presentation, subgens: Sequence[Word], max_cosets: int, max_steps: int):
        self.ngens = p.ngens
        self.ncols = 2 * p.ngens
        self.relators = [Word(r) for r in p.relators if len(r)]
        self.subgens = [w for w in subgens if len(w)]
        self.max_cosets = max_cosets
        self.max_steps = max_steps
        self.table: list[list[int]] = []
        self.parent: list[int] = []
        self.live = 0
        self.steps = 0
        self.deductions: list[tuple[int, int]] = []
        self.track_deductions = False
        self._new()

    # --- primitive operations -------------------------------------------------
    def _new(self) -> int:
        if self.live >= self.max_cosets:
            raise ResourceLimitError(f"more than {self.max_cosets} live cosets")
        self.steps += 1
        if self.steps > self.max_steps:
            raise ResourceLimitError(f"more than {self.max_steps} coset definitions")
        c = len(self.table)
        self.table.append([-1] * self.ncols)
        self.parent.append(c)
        self.live += 1
        return c

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def rep(self, c: int) -> int:
        parent = self.parent
        r = c
        while parent[r] != r:
            r = parent[r]
        while parent[c] != r:
            parent[c], c = r, parent[c]
        return r

    def define(self, c: int, k: int) -> int:
        d = self._new()
        self.table[c][k] = d
        self.table[d][k ^ 1] = c
        if self.track_deductions:
            self.deductions.append((c, k))
        return d

    def _merge(self, a: int, b: int, queue: list[int]) -> None:
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.parent[b] = a
        self.live -= 1
        queue.append(b)

    def coincidence(self, a: int, b: int) -> None:
        table = self.table
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = table[e]
            for k in range(self.ncols):
                f = row[k]
                if f < 0:
                    continue
                if table[f][k ^ 1] == e:
                    table[f][k ^ 1] = -1
                e1, f1 = self.rep(e), self.rep(f)
                t = table[e1][k]
                if t >= 0:
                    self._merge(f1, t, queue)
                else:
                    t = table[f1][k ^ 1]
                    if t >= 0:
                        self._merge(e1, t, queue)
                    else:
                        table[e1][k] = f1
                        table[f1][k ^ 1] = e1
                        if self.track_deductions:
                            self.deductions.append((e1, k))

    def scan(self, c: int, cols: Sequence[int], fill: bool) -> None:
        table = self.table
        n = len(cols)
        f, i = c, 0
        b, j = c, n - 1
        while True:
            while i <= j and table[f][cols[i]] >= 0:
                f = table[f][cols[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][cols[j] ^ 1] >= 0:
                b = table[b][cols[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                k = cols[i]
                table[f][k] = b
                table[b][k ^ 1] = f
                if self.track_deductions:
                    self.deductions.append((f, k))
                return
            if not fill:
                return
            self.define(f, cols[i])

    # --- strategies -----------------------------------------------------------
    def run_hlt(self, lookahead: bool = True) -> None:
        rels = [[col(x) for x in r.letters] for r in self.relators]
        for w in self.subgens:
            self.scan(0, [col(x) for x in w.letters], fill=True)
            if not self.alive(0):
                break
        c = 0
        while c < len(self.table):
            if self.alive(c):
                try:
                    for r in rels:
                        self.scan(c, r, fill=True)
                        if not self.alive(c):
                            break
                    if self.alive(c):
                        for k in range(self.ncols):
                            if self.table[c][k] < 0:
                                self.define(c, k)
                except ResourceLimitError:
                    if not lookahead or not self._lookahead(rels):
                        raise
                    continue
            c += 1

    def _lookahead(self, rels) -> bool:
        before = self.live
        for c in range(len(self.table)):
            if self.alive(c):
                for r in rels:
                    if not self.alive(c):
                        break
                    self.scan(c, r, fill=False)
        return self.live < before

    def run_felsch(self) -> None:
        self.track_deductions = True
        conj: dict[int, list[list[int]]] = {k: [] for k in range(self.ncols)}
        seen = set()
        for r in self.relators:
            for w in (r, r.inverse()):
                cols = [col(x) for x in w.letters]
                for s in range(len(cols)):
                    rot = tuple(cols[s:] + cols[:s])
                    if rot not in seen:
                        seen.add(rot)
                        conj[rot[0]].append(list(rot))
        for w in self.subgens:
            self.scan(0, [col(x) for x in w.letters], fill=True)
            self._process_deductions(conj)
        c = 0
        while c < len(self.table):
            if self.alive(c):
                for k in range(self.ncols):
                    if self.alive(c) and self.table[c][k] < 0:
                        self.define(c, k)
                        self._process_deductions(conj)
            c += 1

    def _process_deductions(self, conj) -> None:
        while self.deductions:
            c, k = self.deductions.pop()
            if not self.alive(c):
                continue
            for r in conj[k]:
                if not self.alive(c):
                    break
                self.scan(c, r, fill=False)
            d = self.table[c][k] if self.alive(c) else -1
            if d >= 0 and self.alive(d):
                for r in conj[k ^ 1]:
                    if not self.alive(d):
                        break
                    self.scan(d, r, fill=False)

    def result(self, relators, subgens) -> CosetTable:
        live = [c for c in range(len(self.table)) if self.alive(c)]
        pos = {c: i for i, c in enumerate(live)}
        rows = []
        for c in live:
            row = []
            for d in self.table[c]:
                if d < 0:
                    raise IncompleteTableError(f"coset {c} has undefined entries")
                row.append(pos[self.rep(d)])
            rows.append(tuple(row))
        return CosetTable(tuple(rows), self.ngens, 0, tuple(subgens), tuple(relators))


def coset_enumerate(
    p: Presentation,
    subgens: Sequence[Word] = (),
    max_cosets: int = DEFAULT_MAX_COSETS,
    max_steps: int = 10**8,
    strategy: str = HLT,
) -> CosetTable:
    """Enumerate the cosets of ``<subgens>`` in the group presented by ``p``.

    Raises :class:`ResourceLimitError` when the limits are hit.  Cosets are
    numbered by order of first definition (after compaction).
    """
    if max_cosets <= 0 or max_steps <= 0:
        raise ValueError("limits must be positive")
    e = _Enumerator(p, subgens, max_cosets, max_steps)
    if strategy == HLT:
        e.run_hlt()
    elif strategy == FELSCH:
        e.run_felsch()
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return e.result(p.relators, subgens)


def perm_rep(t: CosetTable) -> list[Perm]:
    return [Perm(row[2 * i] for row in t.rows) for i in range(t.ngens)]


def membership(w: Word, t: CosetTable) -> bool:
    return t.trace(t.base, w) == t.base


def table_from_finite_quotient(images: Sequence, identity=None, order: int | None = None,
                               cap: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Coset table of the kernel of the map sending generator ``i`` to ``images[i]``.

    Cosets are the elements of the generated group (breadth-first, identity
    first); generator ``i`` acts by right multiplication.  If ``order`` is
    given it must equal the size of the generated group.
    """
    if identity is None:
        if not images:
            raise ValueError("need an identity for an empty generator list")
        identity = images[0] ** 0
    inverses = [g ** -1 for g in images]
    elements = closure(list(images) + inverses, identity, cap)
    if order is not None and len(elements) != order:
        raise ValueError(f"images generate a group of order {len(elements)}, expected {order}")
    pos = {e: i for i, e in enumerate(elements)}
    rows = []
    for e in elements:
        row = []
        for g, gi in zip(images, inverses):
            row.append(pos[e * g])
            row.append(pos[e * gi])
        rows.append(tuple(row))
    return CosetTable(tuple(rows), len(images), 0)


def transversal(t: CosetTable) -> list[Word]:
    """Breadth-first Schreier transversal; ties broken by column order."""
    words: list[Word | None] = [None] * t.index
    words[t.base] = Word()
    queue = deque([t.base])
    while queue:
        c = queue.popleft()
        for k, d in enumerate(t.rows[c]):
            if words[d] is None:
                letter = k // 2 + 1 if k % 2 == 0 else -(k // 2 + 1)
                words[d] = words[c] * Word((letter,))
                queue.append(d)
    return words  # type: ignore[return-value]


def stabilizer_is_trivial(t: CosetTable) -> bool:
    """True iff the permutation image acts regularly, i.e. has order equal to the index."""
    gens = perm_rep(t)
    n = t.index
    # permutation of each coset's transversal element, built along the BFS tree
    tperm: list[Perm | None] = [None] * n
    tperm[t.base] = Perm.identity(n)
    queue = deque([t.base])
    inv = [g.inverse() for g in gens]
    while queue:
        c = queue.popleft()
        for k, d in enumerate(t.rows[c]):
            if tperm[d] is None:
                g = gens[k // 2] if k % 2 == 0 else inv[k // 2]
                tperm[d] = tperm[c] * g
                queue.append(d)
    tinv = [p.inverse() for p in tperm]  # type: ignore[union-attr]
    for c in range(n):
        for i, g in enumerate(gens):
            d = t.rows[c][2 * i]
            if not (tperm[c] * g * tinv[d]).is_identity():  # type: ignore[operator]
                return False
    return True


def is_normal(t: CosetTable) -> bool:
    """The subgroup is normal iff the coset action has order equal to the index."""
    return stabilizer_is_trivial(t)


def permutation_image_order(t: CosetTable, cap: int = 10**6) -> int:
    gens = perm_rep(t)
    return len(closure(gens, Perm.identity(t.index), cap))
