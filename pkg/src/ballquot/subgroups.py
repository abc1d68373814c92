"""Reidemeister-Schreier presentations of finite-index subgroups and Tietze moves."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cosets import CosetTable, IncompleteTableError, col, transversal
from .words import Presentation, Word, cyclic_reduce, free_reduce


class NotInSubgroupError(ValueError):
    pass


@dataclass(frozen=True)
class RewritingMap:
    """Schreier data for a subgroup given by a complete coset table.

    ``pairs`` lists every (coset, generator) pair; ``gen_index[c][i]`` is the
    subgroup generator number (0-based) of the pair, or ``-1`` when the pair is
    a transversal edge and therefore trivial.
    """

    table: CosetTable
    transversal: tuple[Word, ...]
    pairs: tuple[tuple[int, int], ...]
    gen_index: tuple[tuple[int, ...], ...]
    generator_words: tuple[Word, ...]

    def schreier_word(self, coset: int, gen: int) -> Word:
        d = self.table.rows[coset][2 * gen]
        return self.transversal[coset] * Word.gen(gen) * self.transversal[d].inverse()


def _rewrite_from(t: CosetTable, gen_index, coset: int, letters: Sequence[int]) -> tuple[list[int], int]:
    out = []
    rows = t.rows
    for x in letters:
        if x > 0:
            s = gen_index[coset][x - 1]
            if s >= 0:
                out.append(s + 1)
            coset = rows[coset][col(x)]
        else:
            d = rows[coset][col(x)]
            s = gen_index[d][-x - 1]
            if s >= 0:
                out.append(-(s + 1))
            coset = d
    return out, coset


def reidemeister_schreier(p: Presentation, t: CosetTable) -> tuple[Presentation, RewritingMap]:
    """Presentation of the subgroup with base coset ``t.base``.

    Generators are the nontrivial Schreier generators ``s_{c,g}``, named
    ``s<c>_<g>``; relators are the rewrites of ``t_c R t_c^-1`` for every coset
    ``c`` and relator ``R`` (one relator per pair, so ``index * len(relators)``).
    """
    if t.problems() and any("undefined" in m or "columns" in m for m in t.problems()):
        raise IncompleteTableError("coset table is not complete")
    if t.ngens != p.ngens:
        raise ValueError("table and presentation have different generator counts")
    trans = transversal(t)
    tree = set()
    for c, w in enumerate(trans):
        if w:
            x = w.letters[-1]
            parent = t.trace(t.base, Word(w.letters[:-1]))
            # edge parent --x--> c; record as a (coset, positive generator) pair
            if x > 0:
                tree.add((parent, x - 1))
            else:
                tree.add((c, -x - 1))
    pairs = []
    gen_index = []
    names = []
    words = []
    for c in range(t.index):
        row = []
        for i in range(p.ngens):
            pairs.append((c, i))
            if (c, i) in tree:
                row.append(-1)
            else:
                row.append(len(names))
                names.append(f"s{c}_{p.generators[i]}")
                d = t.rows[c][2 * i]
                words.append(trans[c] * Word.gen(i) * trans[d].inverse())
        gen_index.append(tuple(row))
    gen_index_t = tuple(gen_index)
    rels = []
    for c in range(t.index):
        for r in p.relators:
            letters, end = _rewrite_from(t, gen_index_t, c, r.letters)
            if end != c:
                raise IncompleteTableError("relator does not close up: table is not a coset table for p")
            rels.append(Word(letters))
    m = RewritingMap(t, tuple(trans), tuple(pairs), gen_index_t, tuple(words))
    return Presentation(tuple(names), tuple(rels), f"RS({p.name})" if p.name else "RS"), m


def rewrite_in_subgroup(w: Word, m: RewritingMap) -> Word:
    t = m.table
    letters, end = _rewrite_from(t, m.gen_index, t.base, w.letters)
    if end != t.base:
        raise NotInSubgroupError("word does not lie in the subgroup")
    return Word(letters)


# --- Tietze transformations ------------------------------------------------------

def _occurrences(r: Sequence[int], g: int) -> int:
    return sum(1 for x in r if abs(x) == g)


def _solve_for(r: Sequence[int], g: int) -> list[int]:
    """Given relator ``r`` with exactly one occurrence of generator ``g``, return
    a word (over the other letters) equal to ``g``."""
    i = next(k for k, x in enumerate(r) if abs(x) == g)
    rest = list(r[i + 1:]) + list(r[:i])  # g^e * rest = 1 after rotation
    if r[i] > 0:
        return [-x for x in reversed(rest)]
    return rest


def _substitute(r: Sequence[int], g: int, image: Sequence[int]) -> list[int]:
    inv = [-x for x in reversed(image)]
    out = []
    for x in r:
        if x == g:
            out.extend(image)
        elif x == -g:
            out.extend(inv)
        else:
            out.append(x)
    return out


def _canon(r: Sequence[int]) -> tuple[int, ...]:
    """Canonical representative of a relator up to rotation and inversion."""
    r = cyclic_reduce(r)
    if not r:
        return ()
    n = len(r)
    cands = []
    for w in (r, tuple(-x for x in reversed(r))):
        for s in range(n):
            cands.append(w[s:] + w[:s])
    return min(cands)


def tietze_simplify(p: Presentation, effort: int = 20, max_length: int | None = None,
                    keep: Sequence[int] = ()) -> Presentation:
    """Simplify ``p`` with Tietze moves only.

    Each round removes trivial and duplicate relators, then eliminates a
    generator occurring exactly once in some relator (shortest relator first,
    so length-1 and length-2 relators go first), then tries greedy substring
    replacement.  ``max_length`` bounds the growth allowed by an elimination;
    generators listed in ``keep`` are never eliminated.
    """
    return tietze_simplify_tracked(p, effort, max_length, keep)[0]


def tietze_simplify_tracked(p: Presentation, effort: int = 20, max_length: int | None = None,
                            keep: Sequence[int] = ()) -> tuple[Presentation, list[Word]]:
    """Like :func:`tietze_simplify`, also returning, for every generator of
    ``p``, a word in the generators of the simplified presentation equal to it."""
    k = p.ngens
    alive = [True] * k
    protected = set(g + 1 for g in keep)
    images: list[list[int]] = [[g + 1] for g in range(k)]
    rels = _dedupe(list(p.relators))
    for _ in range(effort):
        changed = False
        while True:
            step = _eliminate_one(rels, alive, max_length, protected)
            if step is None:
                break
            new_rels, g, image = step
            for i in range(k):
                if any(abs(x) == g for x in images[i]):
                    images[i] = list(free_reduce(_substitute(images[i], g, image)))
            rels = _dedupe(new_rels)
            changed = True
        new = _substring_reduce(rels)
        if new is not None:
            rels = _dedupe(new)
            changed = True
        if not changed:
            break
    kept = [i for i in range(k) if alive[i]]
    renum = {i + 1: j + 1 for j, i in enumerate(kept)}

    def ren(r):
        return Word(renum[x] if x > 0 else -renum[-x] for x in r)

    q = Presentation(tuple(p.generators[i] for i in kept), tuple(ren(r) for r in rels), p.name)
    return q, [ren(im) for im in images]


def _dedupe(rels) -> list[tuple[int, ...]]:
    seen = set()
    out = []
    for r in rels:
        c = _canon(r)
        if c and c not in seen:
            seen.add(c)
            out.append(c)
    return out


def _eliminate_one(rels, alive, max_length, protected=frozenset()):
    best = None
    for ri, r in enumerate(rels):
        if best is not None and len(r) >= best[0]:
            continue
        gens = {abs(x) for x in r} - protected
        for g in sorted(gens):
            if _occurrences(r, g) == 1:
                best = (len(r), ri, g)
                break
    if best is None:
        return None
    _, ri, g = best
    image = _solve_for(rels[ri], g)
    new = []
    total = 0
    for j, r in enumerate(rels):
        if j == ri:
            continue
        nr = free_reduce(_substitute(r, g, image)) if any(abs(x) == g for x in r) else r
        total += len(nr)
        new.append(nr)
    if max_length is not None and total > max_length and total > sum(len(r) for r in rels):
        return None
    alive[g - 1] = False
    return new, g, image


def _substring_reduce(rels):
    """Replace a long piece of one relator by the shorter complement of another."""
    changed = False
    rels = [tuple(r) for r in rels]
    order = sorted(range(len(rels)), key=lambda i: len(rels[i]))
    for i in order:
        r = rels[i]
        n = len(r)
        if n == 0:
            continue
        pieces = {}
        for w in (r, tuple(-x for x in reversed(r))):
            for s in range(n):
                rot = w[s:] + w[:s]
                for length in range(n // 2 + 1, n + 1):
                    piece = rot[:length]
                    rest = rot[length:]  # piece * rest = 1 so piece = rest^-1
                    pieces.setdefault(piece, tuple(-x for x in reversed(rest)))
        for j in range(len(rels)):
            if j == i:
                continue
            s = rels[j]
            m = len(s)
            if m < n // 2 + 1:
                continue
            best = None
            doubled = s + s
            for start in range(m):
                for length in range(min(n, m), n // 2, -1):
                    piece = doubled[start:start + length]
                    if piece in pieces:
                        repl = pieces[piece]
                        if len(repl) < length:
                            best = (start, length, repl)
                            break
                if best:
                    break
            if best:
                start, length, repl = best
                rot = doubled[start:start + m]
                new = cyclic_reduce(repl + rot[length:])
                rels[j] = new
                changed = True
    return rels if changed else None
