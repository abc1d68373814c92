"""Exact verification tools for a family of ball-quotient surfaces.

Modules
-------
words       free-group words, presentations, text formats, evaluation
cosets      Todd-Coxeter coset enumeration and coset tables
subgroups   Reidemeister-Schreier presentations, rewriting, Tietze moves
abelian     integer matrices, Smith normal form, abelian and class-2 invariants
matgroups   5x5 integer matrices mod n and finite matrix groups
eisenstein  arithmetic over Q(zeta), zeta^2 = zeta - 1, and 3x3 matrices over it
hirzebruch  Gamma_1, Gamma_n, Delta_n, G_n and the branched-cover character
dm          the Deligne-Mostow lattice and its index-72 normal subgroup
geometry    intersection numbers on the blown up abelian surface
cli         claim registry and the ``verify`` driver
"""

from .abelian import AbelianInvariants, IntegerMatrix, abelian_invariants, smith_normal_form
from .cosets import CosetTable, coset_enumerate
from .words import Presentation, Word, parse_presentation

__version__ = "0.1.0"

__all__ = [
    "AbelianInvariants",
    "CosetTable",
    "IntegerMatrix",
    "Presentation",
    "Word",
    "abelian_invariants",
    "coset_enumerate",
    "parse_presentation",
    "smith_normal_form",
]
