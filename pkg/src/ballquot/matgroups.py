"""Exact square integer matrices, their reductions mod n, and finite matrix groups."""

from __future__ import annotations

from typing import Mapping, Sequence

from .perms import FiniteGroup, GroupTooLarge, closure
from .words import LEFT, Presentation, Word, evaluate_word


class OrderCapExceeded(RuntimeError):
    pass


class ModMatrix:
    """Square matrix over ``Z/n``; ``n = 0`` means exact integers."""

    __slots__ = ("rows", "n", "_hash")

    def __init__(self, rows: Sequence[Sequence[int]], n: int = 0):
        if n < 0 or n == 1:
            raise ValueError("modulus must be 0 (integers) or >= 2")
        self.n = n
        if n:
            self.rows = tuple(tuple(int(x) % n for x in r) for r in rows)
        else:
            self.rows = tuple(tuple(int(x) for x in r) for r in rows)
        if any(len(r) != len(self.rows) for r in self.rows):
            raise ValueError("matrix must be square")
        self._hash = hash((self.rows, n))

    @classmethod
    def identity(cls, size: int, n: int = 0) -> "ModMatrix":
        return cls([[int(i == j) for j in range(size)] for i in range(size)], n)

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def mod(self, n: int) -> "ModMatrix":
        return ModMatrix(self.rows, n)

    def __mul__(self, other: "ModMatrix") -> "ModMatrix":
        if self.n != other.n:
            raise ValueError("moduli differ")
        cols = list(zip(*other.rows))
        return ModMatrix([[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows], self.n)

    def inverse(self) -> "ModMatrix":
        """Inverse via exact Gauss-Jordan (over Z the matrix must be unimodular)."""
        from fractions import Fraction

        size = self.size
        if self.n:
            return self._inverse_mod()
        a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(size)]
             for i, r in enumerate(self.rows)]
        for c in range(size):
            p = next(i for i in range(c, size) if a[i][c] != 0)
            a[c], a[p] = a[p], a[c]
            pv = a[c][c]
            a[c] = [x / pv for x in a[c]]
            for i in range(size):
                if i != c and a[i][c] != 0:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        out = [[x for x in r[size:]] for r in a]
        if any(x.denominator != 1 for r in out for x in r):
            raise ValueError("matrix is not invertible over the integers")
        return ModMatrix([[int(x) for x in r] for r in out])

    def _inverse_mod(self) -> "ModMatrix":
        # unipotent matrices: (I + N)^-1 = sum (-N)^k; otherwise use the adjugate via powers
        size, n = self.size, self.n
        ident = ModMatrix.identity(size, n)
        nil = ModMatrix([[self.rows[i][j] - int(i == j) for j in range(size)] for i in range(size)], n)
        term, total = ident, ident
        for _ in range(size):
            term = term * ModMatrix([[-x for x in r] for r in nil.rows], n)
            total = ModMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(total.rows, term.rows)], n)
        if self * total == ident:
            return total
        p, prev = self, ident
        for _ in range(10**6):
            if p == ident:
                return prev
            prev, p = p, p * self
        raise ValueError("could not invert matrix")

    def __pow__(self, k: int) -> "ModMatrix":
        base = self if k >= 0 else self.inverse()
        result = ModMatrix.identity(self.size, self.n)
        k = abs(k)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_identity(self) -> bool:
        return all(x == int(i == j) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def determinant(self) -> int:
        from .abelian import _bareiss_det

        d = _bareiss_det([list(r) for r in self.rows])
        return d % self.n if self.n else d

    def __eq__(self, other) -> bool:
        return isinstance(other, ModMatrix) and self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        suffix = f", n={self.n}" if self.n else ""
        return f"ModMatrix({[list(r) for r in self.rows]}{suffix})"


def parse_matrices(text: str) -> dict[str, ModMatrix]:
    """Parse ``name:`` headers each followed by whitespace separated integer rows."""
    out: dict[str, list[list[int]]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.endswith(":"):
            current = line[:-1].strip()
            out[current] = []
            continue
        if current is None:
            raise ValueError("matrix row before a 'name:' header")
        out[current].append([int(x) for x in line.split()])
    return {k: ModMatrix(v) for k, v in out.items()}


def format_matrices(mats: Mapping[str, ModMatrix], header: str = "") -> str:
    lines = [f"# {h}" for h in header.splitlines()]
    for name, m in mats.items():
        lines.append(f"{name}:")
        width = max(len(str(x)) for r in m.rows for x in r)
        lines += [" ".join(str(x).rjust(width) for x in r) for r in m.rows]
    return "\n".join(lines) + "\n"


def verify_relations(assign: Sequence, p: Presentation, convention: str = LEFT) -> list[bool]:
    """One flag per relator: does it evaluate to the identity?"""
    if not assign:
        return [not r for r in p.relators]
    ident = assign[0] ** 0
    return [evaluate_word(r, assign, convention, identity=ident) == ident for r in p.relators]


def element_order(m: ModMatrix, cap: int = 10**6) -> int:
    ident = ModMatrix.identity(m.size, m.n)
    p, k = m, 1
    while p != ident:
        p = p * m
        k += 1
        if k > cap:
            raise OrderCapExceeded(f"order exceeds {cap}")
    return k


class FiniteMatrixGroup(FiniteGroup):
    def __init__(self, elements, identity, gens, n: int):
        super().__init__(elements, identity, gens)
        self.n = n


def closure_enumerate(gens: Sequence[ModMatrix], cap: int = 10**6) -> FiniteMatrixGroup:
    if not gens:
        raise ValueError("need at least one generator")
    ident = ModMatrix.identity(gens[0].size, gens[0].n)
    try:
        elems = closure(list(gens), ident, cap)
    except GroupTooLarge as e:
        raise OrderCapExceeded(str(e)) from None
    return FiniteMatrixGroup(elems, ident, list(gens), gens[0].n)


def center_order(g: FiniteGroup) -> int:
    return len(g.center())


def commutator(a: ModMatrix, b: ModMatrix) -> ModMatrix:
    return a.inverse() * b.inverse() * a * b


def _half(v: int) -> int:
    assert v % 2 == 0
    return v // 2


def closed_form_power(j: int, m: int) -> ModMatrix:
    """The displayed formula for tau(g_j)^m, j = 1..4, over the integers."""
    if j == 1:
        top, col = [2 * m, -m, 0, _half(m * (5 * m - 1))], [2 * m, -m, -m]
    elif j == 2:
        top, col = [m, 0, m, _half(m * (m - 3))], [m, 0, 0]
    elif j == 3:
        top, col = [m, -m, -m, m * (2 * m + 1)], [m, -m, -2 * m]
    elif j == 4:
        top, col = [0, -m, -m, _half(m * (3 * m - 1))], [m, -m, -2 * m]
    else:
        raise ValueError("j must be in 1..4")
    rows = [[1] + top]
    for i in range(3):
        r = [0] * 5
        r[i + 1] = 1
        r[4] = col[i]
        rows.append(r)
    rows.append([0, 0, 0, 0, 1])
    return ModMatrix(rows)


def power_closed_form_check(j: int, m: int, g: Mapping[str, ModMatrix]) -> bool:
    """Compare the iterated power of ``g['g{j}']`` with the closed form."""
    return g[f"g{j}"] ** m == closed_form_power(j, m)


def verify_commutator_powers(n: int, g: Mapping[str, ModMatrix], w: Mapping[str, ModMatrix]) -> dict[int, bool]:
    """tau(w_j)^(n^2) == [tau(g_{2j-1})^n, tau(g_{2j})^n] for j = 1..4.

    Missing matrices raise ``KeyError``; callers supply word-derived values for g5..g8.
    """
    out = {}
    for j in range(1, 5):
        a, b = g[f"g{2 * j - 1}"] ** n, g[f"g{2 * j}"] ** n
        out[j] = w[f"w{j}"] ** (n * n) == commutator(a, b)
    return out
