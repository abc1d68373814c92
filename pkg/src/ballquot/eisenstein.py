"""Exact arithmetic in Q(zeta), zeta = exp(pi i / 3), and 3x3 matrices over it.

Scalars are pairs of rationals ``a + b*zeta`` with ``zeta^2 = zeta - 1``.
Complex conjugation sends ``zeta`` to ``1 - zeta``; ``sqrt(-3)`` is the
element ``2*zeta - 1``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence, Union

Number = Union[int, Fraction, "CycScalar"]


def _is_number(x) -> bool:
    return isinstance(x, (int, Fraction, CycScalar))


class CycScalar:
    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @classmethod
    def coerce(cls, x) -> "CycScalar":
        return x if isinstance(x, CycScalar) else cls(x)

    def __add__(self, o):
        if not _is_number(o):
            return NotImplemented
        o = CycScalar.coerce(o)
        return CycScalar(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-CycScalar.coerce(o))

    def __rsub__(self, o):
        return CycScalar.coerce(o) - self

    def __mul__(self, o):
        if not _is_number(o):
            return NotImplemented
        o = CycScalar.coerce(o)
        bd = self.b * o.b
        return CycScalar(self.a * o.a - bd, self.a * o.b + self.b * o.a + bd)

    __rmul__ = __mul__

    def conjugate(self) -> "CycScalar":
        return CycScalar(self.a + self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b + self.b * self.b

    def inverse(self) -> "CycScalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        c = self.conjugate()
        return CycScalar(c.a / n, c.b / n)

    def __truediv__(self, o):
        return self * CycScalar.coerce(o).inverse()

    def __rtruediv__(self, o):
        return CycScalar.coerce(o) * self.inverse()

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        out = CycScalar(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    def is_integral(self) -> bool:
        """Membership in the Eisenstein integers Z[zeta]."""
        return self.a.denominator == 1 and self.b.denominator == 1

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __eq__(self, o) -> bool:
        if isinstance(o, (int, Fraction)):
            o = CycScalar(o)
        return isinstance(o, CycScalar) and self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}*z"
        return f"{self.a} + {self.b}*z"

    def __repr__(self) -> str:
        return f"CycScalar({self})"


ZETA = CycScalar(0, 1)
ONE = CycScalar(1)
ZERO = CycScalar(0)
SQRT_M3 = CycScalar(-1, 2)


def parse_scalar(text: str) -> CycScalar:
    """Parse ``p/q + r/s*z`` style expressions (``z`` is zeta)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    total = CycScalar()
    for m in re.finditer(r"([+-]?)([^+-]+)", s):
        sign, term = m.groups()
        if term.endswith("*z"):
            coeff, is_z = term[:-2], True
        elif term == "z":
            coeff, is_z = "1", True
        else:
            coeff, is_z = term, False
        v = Fraction(coeff) * (-1 if sign == "-" else 1)
        total = total + (CycScalar(0, v) if is_z else CycScalar(v))
    if re.sub(r"([+-]?)([^+-]+)", "", s):
        raise ValueError(f"cannot parse scalar {text!r}")
    return total


class CycMatrix:
    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = tuple(tuple(CycScalar.coerce(x) for x in r) for r in rows)
        if any(len(r) != len(self.rows) for r in self.rows):
            raise ValueError("matrix must be square")

    @classmethod
    def identity(cls, n: int = 3) -> "CycMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, s, n: int = 3) -> "CycMatrix":
        return cls([[s if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __mul__(self, o):
        if isinstance(o, CycMatrix):
            cols = list(zip(*o.rows))
            out = []
            for r in self.rows:
                row = []
                for c in cols:
                    acc = ZERO
                    for x, y in zip(r, c):
                        if x and y:
                            acc = acc + x * y
                    row.append(acc)
                out.append(row)
            return CycMatrix(out)
        o = CycScalar.coerce(o)
        return CycMatrix([[x * o for x in r] for r in self.rows])

    def __rmul__(self, o):
        return self * o

    def star(self) -> "CycMatrix":
        """Conjugate transpose."""
        return CycMatrix([[self.rows[j][i].conjugate() for j in range(self.size)] for i in range(self.size)])

    def determinant(self) -> CycScalar:
        m = [list(r) for r in self.rows]
        n = self.size
        det = ONE
        for c in range(n):
            p = next((i for i in range(c, n) if m[i][c]), None)
            if p is None:
                return ZERO
            if p != c:
                m[c], m[p] = m[p], m[c]
                det = -det
            det = det * m[c][c]
            inv = m[c][c].inverse()
            for i in range(c + 1, n):
                if m[i][c]:
                    f = m[i][c] * inv
                    m[i] = [x - f * y for x, y in zip(m[i], m[c])]
        return det

    def inverse(self) -> "CycMatrix":
        n = self.size
        a = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            p = next((i for i in range(c, n) if a[i][c]), None)
            if p is None:
                raise ZeroDivisionError("singular matrix")
            a[c], a[p] = a[p], a[c]
            inv = a[c][c].inverse()
            a[c] = [x * inv for x in a[c]]
            for i in range(n):
                if i != c and a[i][c]:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return CycMatrix([r[n:] for r in a])

    def __pow__(self, k: int) -> "CycMatrix":
        base = self if k >= 0 else self.inverse()
        out = CycMatrix.identity(self.size)
        k = abs(k)
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scalar_value(self):
        """The scalar ``s`` if this is ``s * I``, else ``None``."""
        s = self.rows[0][0]
        for i, r in enumerate(self.rows):
            for j, x in enumerate(r):
                if x != (s if i == j else ZERO):
                    return None
        return s

    def projective_key(self) -> tuple:
        """Hashable key equal for matrices differing by a nonzero scalar."""
        lead = next(x for r in self.rows for x in r if x)
        inv = lead.inverse()
        return tuple((y.a, y.b) for r in self.rows for y in (x * inv for x in r))

    def __eq__(self, o) -> bool:
        return isinstance(o, CycMatrix) and self.rows == o.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __repr__(self) -> str:
        return "CycMatrix([" + ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.rows) + "])"


H0 = CycMatrix([[0, 0, 1], [0, 1, 0], [1, 0, 0]])


def hermitian_transform(m: CycMatrix, h: CycMatrix = H0) -> CycMatrix:
    return m.star() * h * m


def unitarity_scalar(m: CycMatrix, h: CycMatrix = H0):
    """``lam`` with ``m* h m = lam h``, or ``None`` if there is no such scalar."""
    t = hermitian_transform(m, h)
    lam = None
    for r1, r2 in zip(t.rows, h.rows):
        for x, y in zip(r1, r2):
            if y:
                q = x / y
                if lam is None:
                    lam = q
                elif q != lam:
                    return None
            elif x:
                return None
    return lam


def projective_equal(m: CycMatrix, k: CycMatrix):
    """``(True, s)`` when ``m = s * k`` for a scalar ``s``; ``(False, None)`` otherwise."""
    s = (m * k.inverse()).scalar_value()
    return (s is not None and bool(s)), s


def check_integral_form(m: CycMatrix) -> bool:
    """Is ``m`` of the shape

        [[a11,      a12,      a13/r],
         [r a21,    a22,      a23  ],
         [r a31,    r a32,    a33  ]]   with r = sqrt(-3), all a_ij in Z[zeta]?
    """
    if m.size != 3:
        return False
    r = SQRT_M3
    rinv = r.inverse()
    scale = [[ONE, ONE, r], [rinv, ONE, ONE], [rinv, rinv, ONE]]
    return all((m.rows[i][j] * scale[i][j]).is_integral() for i in range(3) for j in range(3))


def check_integral_form_projective(m: CycMatrix) -> tuple[bool, object]:
    """Integral form up to a global unit-or-rational scalar; returns the scalar used."""
    if check_integral_form(m):
        return True, ONE
    # normalise by a unit of Z[zeta] times a rational, taken from a nonzero a_22-slot style entry
    for s in _candidate_scalars(m):
        if check_integral_form(m * s):
            return True, s
    return False, None


def _candidate_scalars(m: CycMatrix):
    units = [ZETA ** k for k in range(6)]
    det = m.determinant()
    for u in units:
        yield u
    for r in m.rows:
        for x in r:
            if x:
                for u in units:
                    yield u * x.inverse()
    if det:
        yield det.inverse()


def parse_cyc_matrices(text: str) -> dict[str, CycMatrix]:
    """``name:`` headers followed by rows of scalars separated by ``,`` or ``;``."""
    out: dict[str, list[list[CycScalar]]] = {}
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
        out[current].append([parse_scalar(t) for t in re.split(r"[,;]", line) if t.strip()])
    return {k: CycMatrix(v) for k, v in out.items()}


def verify_projective_relations(assign: Sequence[CycMatrix], relators, convention="left") -> list[bool]:
    from .words import evaluate_word

    ident = CycMatrix.identity(assign[0].size)
    return [evaluate_word(r, assign, convention, identity=ident).scalar_value() is not None
            for r in relators]
