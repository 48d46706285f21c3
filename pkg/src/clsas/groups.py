"""The free abelian grading group of rank nu, realized as integer vectors.

Group elements are plain tuples of ints.  The embedding sends (n1,..,nv) to
the linear scalar n1*e1 + .. + nv*ev; since the grading symbols are
independent indeterminates, lattice membership of a scalar is decidable and
generic parameters automatically avoid the lattice.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import List, Optional, Tuple

from .scalars import Polynomial, Scalar, Symbols

GroupElement = Tuple[int, ...]


def zero(rank: int) -> GroupElement:
    return (0,) * rank


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    if len(a) != len(b):
        raise ValueError(f"rank mismatch: {len(a)} vs {len(b)}")
    return tuple(x + y for x, y in zip(a, b))


def neg(a: GroupElement) -> GroupElement:
    return tuple(-x for x in a)


def sub(a: GroupElement, b: GroupElement) -> GroupElement:
    return add(a, neg(b))


def eq(a: GroupElement, b: GroupElement) -> bool:
    if len(a) != len(b):
        raise ValueError(f"rank mismatch: {len(a)} vs {len(b)}")
    return a == b


def is_zero(a: GroupElement) -> bool:
    return not any(a)


def window(rank: int, radius: int) -> List[GroupElement]:
    """All vectors with coordinates in [-radius, radius], lexicographic."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    return list(itertools.product(range(-radius, radius + 1), repeat=rank))


def embed(symbols: Symbols, g: GroupElement) -> Scalar:
    """The injective homomorphism (n1,..,nv) -> n1*e1 + .. + nv*ev."""
    if len(g) != symbols.rank:
        raise ValueError(f"rank mismatch: element has {len(g)}, session has {symbols.rank}")
    terms = {}
    for i, n in enumerate(g):
        if n:
            exp = [0] * symbols.nvars
            exp[i] = 1
            terms[tuple(exp)] = Fraction(n)
    return Scalar(Polynomial(symbols, terms), Polynomial.const(symbols, 1), _canonical=True)


def is_in_group(s: Scalar) -> Optional[GroupElement]:
    """The unique g with embed(g) = s, if s is a Z-combination of grading
    symbols (degree-1 terms, integer coefficients, no parameters); else None.
    """
    symbols = s.symbols
    if not s.den.is_one():
        return None
    coords = [0] * symbols.rank
    for exp, c in s.num.terms.items():
        if sum(exp) != 1:
            return None
        i = exp.index(1)
        if not symbols.is_grading(i):
            return None
        if c.denominator != 1:
            return None
        coords[i] = c.numerator
    return tuple(coords)
