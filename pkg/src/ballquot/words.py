"""Free-group words, finite presentations and the presentation text format.

A word is stored as a tuple of nonzero integers: ``i + 1`` stands for the
generator with index ``i`` and ``-(i + 1)`` for its inverse.  Words are freely
reduced when constructed, so equal group elements of the free group compare
equal.

Presentation files are line oriented::

    # comment
    gens: a b
    rel: a^3
    rel: a b a B A B      # uppercase letter = inverse (terse mode)

Terse mode is available when every generator is a single lowercase letter.
Exponents may be written ``x^-1``, ``x^{-1}`` or ``x^3``.
"""

from __future__ import annotations

import operator
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

LEFT = "left"
RIGHT = "right"
CONVENTIONS = (LEFT, RIGHT)


class PresentationSyntaxError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class UnassignedGeneratorError(KeyError):
    pass


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(letters: Sequence[int]) -> tuple[int, ...]:
    w = free_reduce(letters)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1]


class Word:
    """Freely reduced word in the free group on generators ``0, 1, ...``."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        object.__setattr__(self, "letters", free_reduce(letters))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @classmethod
    def gen(cls, index: int, power: int = 1) -> "Word":
        x = index + 1
        return cls((x if power > 0 else -x,) * abs(power))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        return self.letters[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, Word) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def __bool__(self) -> bool:
        return bool(self.letters)

    def inverse(self) -> "Word":
        return Word(-x for x in reversed(self.letters))

    def conjugate(self, by: "Word") -> "Word":
        """``by^-1 * self * by``."""
        return by.inverse() * self * by

    def generators(self) -> set[int]:
        return {abs(x) - 1 for x in self.letters}

    def exponent_sums(self, ngens: int) -> list[int]:
        sums = [0] * ngens
        for x in self.letters:
            sums[abs(x) - 1] += 1 if x > 0 else -1
        return sums

    def substitute(self, images: Sequence["Word"]) -> "Word":
        """Apply the free-group endomorphism sending generator ``i`` to ``images[i]``."""
        out: list[int] = []
        inv = [w.inverse().letters for w in images]
        for x in self.letters:
            out.extend(images[x - 1].letters if x > 0 else inv[-x - 1])
        return Word(out)

    def __repr__(self) -> str:
        return f"Word({list(self.letters)})"


def commutator(a: Word, b: Word) -> Word:
    """``[a, b] = a^-1 b^-1 a b``."""
    return a.inverse() * b.inverse() * a * b


@dataclass(frozen=True)
class Presentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator names")
        k = len(self.generators)
        for r in self.relators:
            for x in r.letters:
                if abs(x) > k:
                    raise ValueError(f"relator {r!r} uses undeclared generator {abs(x) - 1}")

    @property
    def ngens(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        return self.generators.index(name)

    def word(self, text: str) -> Word:
        return parse_word(text, self.generators)

    def words(self, *texts: str) -> list[Word]:
        return [self.word(t) for t in texts]

    def format_word(self, w: Word) -> str:
        return format_word(w, self.generators)

    def add_relators(self, extra: Iterable[Word]) -> "Presentation":
        return Presentation(self.generators, self.relators + tuple(extra), self.name)

    def total_length(self) -> int:
        return sum(len(r) for r in self.relators)


_LEX = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<pow>\^\s*(?:\{\s*-?\d+\s*\}|-?\d+))"
                  r"|(?P<punct>[()\[\],])|(?P<one>1(?![0-9]))|(?P<bad>\S))")


def _terse(gens: Sequence[str]) -> bool:
    return all(len(g) == 1 and g.islower() for g in gens)


class _WordParser:
    """word := factor* ; factor := atom ('^' int)? ;
    atom := name | '1' | '(' word ')' | '[' word ',' word ']'"""

    def __init__(self, text, gens, line, col0):
        self.index = {g: i for i, g in enumerate(gens)}
        self.terse = _terse(gens)
        self.line, self.col0 = line, col0
        self.toks = []
        for m in _LEX.finditer(text):
            kind = m.lastgroup
            if kind is None:
                continue
            val = m.group(kind)
            col = col0 + m.start(kind) + 1
            if kind == "bad":
                raise PresentationSyntaxError(f"unexpected character {val!r}", line, col)
            self.toks.append((kind, val, col))
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, self.col0 + 1)

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def parse(self) -> Word:
        w = self.word()
        kind, val, col = self.peek()
        if kind is not None:
            raise PresentationSyntaxError(f"unexpected {val!r}", self.line, col)
        return w

    def word(self) -> Word:
        letters: list[int] = []
        while True:
            kind, val, col = self.peek()
            if kind is None or (kind == "punct" and val in ")],"):
                return Word(letters)
            letters.extend(self.factor().letters)

    def factor(self) -> Word:
        atom, last_only = self.atom()
        kind, val, col = self.peek()
        if kind != "pow":
            return atom
        self.take()
        power = int(val.strip("^ {}").replace(" ", ""))
        if last_only is not None:
            # in a terse run like "aB^2" the exponent binds to the last letter
            head, tail = last_only
            return head * tail ** power
        return atom ** power

    def atom(self):
        kind, val, col = self.take()
        if kind == "one":
            return Word(), None
        if kind == "name":
            if val in self.index:
                return Word.gen(self.index[val]), None
            if self.terse:
                letters = []
                for k, ch in enumerate(val):
                    if ch in self.index:
                        letters.append(self.index[ch] + 1)
                    elif ch.lower() in self.index:
                        letters.append(-(self.index[ch.lower()] + 1))
                    else:
                        raise PresentationSyntaxError(f"undeclared generator {ch!r}", self.line, col + k)
                return Word(letters), (Word(letters[:-1]), Word(letters[-1:]))
            raise PresentationSyntaxError(f"undeclared generator {val!r}", self.line, col)
        if kind == "punct" and val == "(":
            w = self.word()
            self._expect(")")
            return w, None
        if kind == "punct" and val == "[":
            a = self.word()
            self._expect(",")
            b = self.word()
            self._expect("]")
            return commutator(a, b), None
        raise PresentationSyntaxError(f"unexpected {val!r}" if val else "unexpected end of word", self.line, col)

    def _expect(self, ch):
        kind, val, col = self.take()
        if val != ch:
            raise PresentationSyntaxError(f"expected {ch!r}", self.line, col)


def parse_word(text: str, gens: Sequence[str], line: int = 0, col0: int = 0) -> Word:
    """Parse a word over ``gens``.

    Tokens: generator names, ``name^k`` (also ``name^{k}``), parentheses,
    commutators ``[u, v]`` and ``1`` for the identity.  With single-letter
    lowercase generators an uppercase letter means the inverse and runs such
    as ``abAB`` are allowed.
    """
    return _WordParser(text, gens, line, col0).parse()


def format_word(w: Word, gens: Sequence[str]) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    letters = w.letters
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        x, run = letters[i], j - i
        power = run if x > 0 else -run
        name = gens[abs(x) - 1]
        parts.append(name if power == 1 else f"{name}^{power}")
        i = j
    return " ".join(parts)


def parse_presentation(text: str, name: str = "") -> Presentation:
    gens: list[str] | None = None
    rels: list[Word] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep:
            raise PresentationSyntaxError("expected 'gens:' or 'rel:'", lineno, 1)
        offset = len(key) + 2
        if key == "gens":
            if gens is not None:
                raise PresentationSyntaxError("generators declared twice", lineno, 1)
            gens = rest.split()
            for g in gens:
                if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", g):
                    raise PresentationSyntaxError(f"bad generator name {g!r}", lineno, offset)
        elif key == "rel":
            if gens is None:
                raise PresentationSyntaxError("relator before 'gens:'", lineno, 1)
            rels.append(parse_word(rest, gens, lineno, offset))
        else:
            raise PresentationSyntaxError(f"unknown key {key!r}", lineno, 1)
    if gens is None:
        raise PresentationSyntaxError("missing 'gens:' line")
    return Presentation(tuple(gens), tuple(rels), name)


def format_presentation(p: Presentation) -> str:
    lines = ["gens: " + " ".join(p.generators)]
    lines += ["rel: " + format_word(r, p.generators) for r in p.relators]
    return "\n".join(lines) + "\n"


def parse_word_file(text: str) -> tuple[tuple[str, ...], dict[str, Word]]:
    """Parse a ``.words`` file: a ``gens:`` line then ``name = word`` lines."""
    gens: tuple[str, ...] | None = None
    words: dict[str, Word] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if line.strip().startswith("gens:"):
            gens = tuple(line.split(":", 1)[1].split())
            continue
        if gens is None:
            raise PresentationSyntaxError("missing 'gens:' line", lineno, 1)
        name, sep, rest = line.partition("=")
        if not sep:
            raise PresentationSyntaxError("expected 'name = word'", lineno, 1)
        words[name.strip()] = parse_word(rest, gens, lineno, len(name) + 2)
    if gens is None:
        raise PresentationSyntaxError("missing 'gens:' line")
    return gens, words


def format_word_file(gens: Sequence[str], words: Mapping[str, Word], header: str = "") -> str:
    lines = [f"# {h}" if h else "#" for h in header.splitlines()]
    lines.append("gens: " + " ".join(gens))
    lines += [f"{k} = {format_word(w, gens)}" for k, w in words.items()]
    return "\n".join(lines) + "\n"


def evaluate_word(
    w: Word,
    assign: Sequence | Mapping,
    convention: str = LEFT,
    *,
    identity=None,
    mul: Callable = operator.mul,
    inv: Callable | None = None,
):
    """Evaluate ``w`` with generator ``i`` sent to ``assign[i]``.

    ``convention="left"`` multiplies letters in written order;
    ``"right"`` composes them right to left (the product of the reversed word).
    Elements need ``*`` and ``** -1`` unless ``mul``/``inv`` are given.
    """
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if inv is None:
        inv = lambda a: a ** -1  # noqa: E731
    letters = w.letters if convention == LEFT else tuple(reversed(w.letters))
    cache: dict[int, object] = {}
    result = identity
    for x in letters:
        g = abs(x) - 1
        try:
            base = assign[g]
        except (KeyError, IndexError):
            raise UnassignedGeneratorError(g) from None
        if x < 0:
            if x not in cache:
                cache[x] = inv(base)
            base = cache[x]
        result = base if result is None else mul(result, base)
    if result is None:
        if not assign:
            raise ValueError("empty word with no identity and no assignment")
        first = assign[0] if not isinstance(assign, Mapping) else next(iter(assign.values()))
        result = first ** 0
    return result
