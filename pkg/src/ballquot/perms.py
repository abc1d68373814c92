"""Small permutation toolkit: enough to analyse groups of a few thousand elements.

Permutations act on the right, matching the coset action: ``(p * q)[i] == q[p[i]]``.
"""

from __future__ import annotations

from collections import Counter, deque
from math import gcd
from typing import Iterable, Sequence


class GroupTooLarge(RuntimeError):
    pass


class Perm:
    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        self.images = tuple(images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        o = other.images
        return Perm(o[i] for i in self.images)

    def inverse(self) -> "Perm":
        out = [0] * len(self.images)
        for i, j in enumerate(self.images):
            out[j] = i
        return Perm(out)

    def __pow__(self, k: int) -> "Perm":
        base = self if k >= 0 else self.inverse()
        result = Perm.identity(self.degree)
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def order(self) -> int:
        seen = [False] * len(self.images)
        result = 1
        for i in range(len(self.images)):
            if seen[i]:
                continue
            n, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = self.images[j]
                n += 1
            result = result * n // gcd(result, n)
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Perm({list(self.images)})"


def closure(gens: Sequence, identity, cap: int = 10**6) -> list:
    """All products of ``gens`` (which must have finite order), breadth first."""
    seen = {identity}
    order = [identity]
    queue = deque([identity])
    while queue:
        a = queue.popleft()
        for g in gens:
            b = a * g
            if b not in seen:
                seen.add(b)
                order.append(b)
                if len(order) > cap:
                    raise GroupTooLarge(f"more than {cap} elements")
                queue.append(b)
    return order


class FiniteGroup:
    """A finite group given by its full element list; elements need ``*``, hashing."""

    def __init__(self, elements: Sequence, identity, gens: Sequence = ()):
        self.elements = list(elements)
        self.identity = identity
        self.gens = list(gens)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._inverses: dict | None = None

    @classmethod
    def generated_by(cls, gens: Sequence, identity, cap: int = 10**6) -> "FiniteGroup":
        return cls(closure(gens, identity, cap), identity, gens)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._index

    def __iter__(self):
        return iter(self.elements)

    def inverse(self, g):
        if self._inverses is None:
            self._inverses = {}
            for a in self.elements:
                if a in self._inverses:
                    continue
                # walk powers until we come back to the identity
                p, prev = a, self.identity
                while p != self.identity:
                    prev, p = p, p * a
                self._inverses[a] = prev
                self._inverses[prev] = a
        return self._inverses[g]

    def element_order(self, g) -> int:
        k, p = 1, g
        while p != self.identity:
            p = p * g
            k += 1
        return k

    def is_closed(self) -> bool:
        return all(a * b in self._index for a in self.elements for b in self.elements)

    def center(self) -> list:
        test = self.gens or self.elements
        return [z for z in self.elements if all(z * g == g * z for g in test)]

    def derived_subgroup(self) -> list:
        comms = set()
        test = self.gens or self.elements
        # commutators of generators and their conjugates generate the derived subgroup
        for a in test:
            for b in test:
                c = self.inverse(a) * self.inverse(b) * a * b
                comms.add(c)
        normal_gens = {self.inverse(g) * c * g for c in comms for g in self.elements}
        return closure(sorted(normal_gens, key=self._index.__getitem__), self.identity, len(self.elements))

    def order_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.element_order(g) for g in self.elements).items()))

    def quotient_by_central(self, normal: Sequence) -> "FiniteGroup":
        """Quotient by a normal subgroup, elements represented as frozensets (cosets)."""
        normal = list(normal)
        cosets: dict = {}
        reps = []
        for g in self.elements:
            if g in cosets:
                continue
            coset = frozenset(n * g for n in normal)
            for h in coset:
                cosets[h] = coset
            reps.append(coset)
        table = cosets

        class _Coset:
            __slots__ = ("key",)

            def __init__(self, key):
                self.key = key

            def __mul__(self, other):
                a = next(iter(self.key))
                b = next(iter(other.key))
                return _Coset(table[a * b])

            def __eq__(self, other):
                return self.key == other.key

            def __hash__(self):
                return hash(self.key)

        elements = [_Coset(c) for c in reps]
        identity = _Coset(table[self.identity])
        gens = [_Coset(table[g]) for g in self.gens]
        return FiniteGroup(elements, identity, gens)
