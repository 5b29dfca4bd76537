"""Classifying identity systems and searching for degree certificates."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import islice
from typing import Optional

from .model import DEFAULT_BOUND, FiniteUnarySemigroup, satisfies
from .terms import (
    Atom, Bar, Identity, IdentitySystem, classify_identity, factors_of,
    is_semigroup_word, iter_letters, mul, power,
)

__all__ = [
    "Verdict", "is_variety_class", "equals_varE", "transform_mn",
    "PeriodicConsequence", "periodic_consequence", "DegreeForm",
    "recognize_degree_form", "degree_identity", "DegreeWitness",
    "find_degree_witness",
]


@dataclass(frozen=True)
class Verdict:
    value: bool
    witness: Optional[Identity] = None
    category: str = ""


def is_variety_class(system) -> Verdict:
    """True iff the system has a non-balanced semigroup identity or a mixed one.

    Otherwise every identity is balanced or strictly unary, and the class
    of epigroups satisfying the system is not closed under products.
    """
    for ident in system:
        flags = classify_identity(ident)
        if flags.is_semigroup and not flags.is_balanced:
            return Verdict(True, ident, "semigroup non-balanced")
        if flags.is_mixed:
            return Verdict(True, ident, "mixed")
    return Verdict(False, None, "all identities balanced or strictly unary")


def equals_varE(system) -> Verdict:
    """True iff the system has a heterotypical semigroup identity or a mixed one."""
    for ident in system:
        flags = classify_identity(ident)
        if flags.is_semigroup and flags.is_heterotypical:
            return Verdict(True, ident, "semigroup heterotypical")
        if flags.is_mixed:
            return Verdict(True, ident, "mixed")
    return Verdict(False, None, "all identities homotypical or strictly unary")


def transform_mn(system: IdentitySystem, m: int, n: int) -> IdentitySystem:
    """Wrap every identity as  x1..xm u y1..yn = x1..xm v y1..yn  with fresh letters."""
    if m < 0 or n < 0:
        raise ValueError("m and n must be non-negative")
    if m == n == 0:
        return system
    fresh = [Atom(a) for a in islice(system.fresh_supply(), m + n)]
    pre, post = fresh[:m], fresh[m:]
    return IdentitySystem(tuple(
        Identity(mul(*pre, ident.lhs, *post), mul(*pre, ident.rhs, *post))
        for ident in system
    ))


@dataclass(frozen=True)
class PeriodicConsequence:
    p: int
    q: int
    mixed: Identity


def periodic_consequence(ident: Identity) -> Optional[PeriodicConsequence]:
    """From a non-balanced semigroup identity derive  x' = x^((p+1)q-1).

    Collapsing all letters to x gives x^a = x^b.  When a == b some letter
    still occurs unevenly, and doubling it makes the lengths differ.
    """
    flags = classify_identity(ident)
    if not flags.is_semigroup or flags.is_balanced:
        return None
    a, b = len(factors_of(ident.lhs)), len(factors_of(ident.rhs))
    if a == b:
        cl, cr = Counter(iter_letters(ident.lhs)), Counter(iter_letters(ident.rhs))
        letter = min(v for v in cl.keys() | cr.keys() if cl[v] != cr[v])
        # substituting letter -> letter^2 adds one per occurrence
        a, b = a + cl[letter], b + cr[letter]
    p, q = min(a, b), abs(a - b)
    x = Atom("x")
    return PeriodicConsequence(p, q, Identity(Bar(x), power(x, (p + 1) * q - 1)))


# -- degree forms ------------------------------------------------------------

def degree_identity(n: int, i: int, j: int, letters=None) -> Identity:
    """x1..xn = x1..x(i-1) ((xi..xj)')' x(j+1)..xn."""
    if not 1 <= i <= j <= n:
        raise ValueError("need 1 <= i <= j <= n")
    xs = [Atom(a) for a in letters] if letters else [Atom(f"x{k}") for k in range(1, n + 1)]
    return Identity(mul(*xs), mul(*xs[:i - 1], Bar(Bar(mul(*xs[i - 1:j]))), *xs[j:]))


@dataclass(frozen=True)
class DegreeForm:
    form: int
    n: int
    i: Optional[int] = None
    j: Optional[int] = None


def recognize_degree_form(ident: Identity) -> Optional[DegreeForm]:
    lhs = ident.lhs
    if not is_semigroup_word(lhs):
        return None
    names = list(iter_letters(lhs))
    n = len(names)
    if len(set(names)) != n:
        return None
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if degree_identity(n, i, j, names).rhs == ident.rhs:
                return DegreeForm(6, n, i, j)
    rhs_len = len(factors_of(ident.rhs)) if is_semigroup_word(ident.rhs) else float("inf")
    if rhs_len > n:
        return DegreeForm(5, n)
    return None


@dataclass(frozen=True)
class DegreeWitness:
    n: int
    i: int
    j: int


def find_degree_witness(S: FiniteUnarySemigroup, n_max: int,
                        bound: int = DEFAULT_BOUND) -> Optional[DegreeWitness]:
    """Least n <= n_max (then least i, j) with S satisfying the double-bar degree identity."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    for n in range(1, n_max + 1):
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                if satisfies(S, degree_identity(n, i, j), bound).holds:
                    return DegreeWitness(n, i, j)
    return None
