"""Named small semigroups and exhaustive enumeration of tiny ones."""

from __future__ import annotations

import re
from itertools import combinations, permutations
from math import comb
from typing import Iterator

from .model import (
    FiniteEpigroup, FiniteUnarySemigroup, ResourceGuardError,
    derive_epigroup, dual, validate_table,
)

__all__ = [
    "make_P", "make_C", "make_T", "make_N", "make_Z", "make_cyclic", "make_named",
    "make_free_nil", "enumerate_semigroups", "named_models", "oracle_models",
    "default_catalog", "free_nil_system", "P_SYSTEM", "C_SYSTEM",
]

P_SYSTEM = "x y = x x y\nx x y y = y y x x\n"
C_SYSTEM = "x x = x x x\nx y = y x\n"


def _epigroup(elements, rule, name) -> FiniteEpigroup:
    n = len(elements)
    mult = tuple(tuple(rule(i, j) for j in range(n)) for i in range(n))
    S = validate_table(FiniteUnarySemigroup(tuple(elements), mult, name=name))
    return derive_epigroup(S)[0]


def make_P() -> FiniteEpigroup:
    """{e, a, 0} with e^2 = e, ea = a, ae = 0; a^2 = (ae)a = 0 is forced."""
    E, A, Z = 0, 1, 2
    table = {(E, E): E, (E, A): A}
    return _epigroup(["e", "a", "0"], lambda i, j: table.get((i, j), Z), "P")


def make_C() -> FiniteEpigroup:
    """{e, a, 0} with e^2 = e, ae = ea = a, a^2 = 0."""
    E, A, Z = 0, 1, 2
    table = {(E, E): E, (E, A): A, (A, E): A}
    return _epigroup(["e", "a", "0"], lambda i, j: table.get((i, j), Z), "C")


def make_T() -> FiniteUnarySemigroup:
    """Two-element semilattice {e, 0} with the non-pseudoinverse unary e* = 0* = 0."""
    mult = ((0, 1), (1, 1))
    return validate_table(FiniteUnarySemigroup(("e", "0"), mult, (1, 1), name="T"))


def make_N(k: int) -> FiniteEpigroup:
    """Nilpotent monogenic <a | a^(k+1) = 0> = {a, ..., a^k, 0}."""
    if k < 1:
        raise ValueError("N(k) needs k >= 1")
    names = ["a"] + [f"a^{e}" for e in range(2, k + 1)] + ["0"]
    # element i < k is a^(i+1); element k is zero

    def rule(i, j):
        if i == k or j == k:
            return k
        e = i + j + 2
        return e - 1 if e <= k else k

    return _epigroup(names, rule, f"N({k})")


def make_Z(n: int) -> FiniteEpigroup:
    """Cyclic group of order n; element i is g^i."""
    if n < 1:
        raise ValueError("Z(n) needs n >= 1")
    names = ["e"] + (["g"] if n > 1 else []) + [f"g^{i}" for i in range(2, n)]
    return _epigroup(names, lambda i, j: (i + j) % n, f"Z({n})")


def make_cyclic(i: int, p: int) -> FiniteEpigroup:
    """Monogenic semigroup with index i and period p: a^i = a^(i+p)."""
    if i < 1 or p < 1:
        raise ValueError("cyclic(i, p) needs i >= 1 and p >= 1")
    size = i + p - 1
    names = ["a"] + [f"a^{e}" for e in range(2, size + 1)]

    def reduce(e):
        return e if e < i + p else i + (e - i) % p

    return _epigroup(names, lambda r, s: reduce(r + s + 2) - 1, f"cyclic({i},{p})")


def make_free_nil(k: int, m: int, bound: int = 4096) -> FiniteEpigroup:
    """Free object on m generators of the variety x^2 = x1...xk = 0, xy = yx.

    Elements are the nonempty sets of at most k-1 generators, plus 0;
    disjoint sets multiply to their union while it stays small enough.
    """
    if k < 2 or m < 1:
        raise ValueError("make_free_nil needs k >= 2 and m >= 1")
    size = 1 + sum(comb(m, s) for s in range(1, min(k - 1, m) + 1))
    if size > bound:
        raise ResourceGuardError(f"free nil object would have {size} elements (bound {bound})")
    gens = "xyz" if m <= 3 else [f"x{i}" for i in range(1, m + 1)]
    gens = list(gens[:m])
    subsets = [frozenset(c) for s in range(1, min(k - 1, m) + 1)
               for c in combinations(range(m), s)]
    names = ["".join(gens[g] for g in sorted(A)) for A in subsets] + ["0"]
    zero = len(subsets)
    pos = {A: i for i, A in enumerate(subsets)}

    def rule(i, j):
        if i == zero or j == zero:
            return zero
        A, B = subsets[i], subsets[j]
        if A & B or len(A | B) > k - 1:
            return zero
        return pos[A | B]

    return _epigroup(names, rule, f"F({k},{m})")


def free_nil_system(k: int) -> str:
    letters = " ".join(f"x{i}" for i in range(1, k + 1))
    return f"x x = 0\n{letters} = 0\nx y = y x\n"


_NAMED = re.compile(r"\s*([A-Za-z]+)\s*(?:\(\s*([0-9,\s]*)\))?\s*\Z")


def make_named(spec: str):
    """Build a structure from a name such as ``P``, ``N(3)``, ``Z(4)``,
    ``cyclic(2,3)``, ``free(3,2)`` or ``P-dual``."""
    if spec.endswith("-dual"):
        return dual(make_named(spec[:-5]))
    m = _NAMED.match(spec)
    if not m:
        raise ValueError(f"unknown structure {spec!r}")
    head = m.group(1)
    args = [int(a) for a in m.group(2).split(",") if a.strip()] if m.group(2) else []
    makers = {
        "P": (make_P, 0), "C": (make_C, 0), "T": (make_T, 0), "N": (make_N, 1),
        "Z": (make_Z, 1), "cyclic": (make_cyclic, 2), "free": (make_free_nil, 2),
    }
    if head not in makers or len(args) != makers[head][1]:
        raise ValueError(f"unknown structure {spec!r}")
    return makers[head][0](*args)


# -- enumeration -------------------------------------------------------------

def _labeled_tables(n: int) -> Iterator[tuple]:
    """All associative n x n tables, in lexicographic order of the flattened table."""
    cells = [(i, j) for i in range(n) for j in range(n)]
    t = [[None] * n for _ in range(n)]

    def consistent():
        # every fully determined triple must associate
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                if ab is None:
                    continue
                for c in range(n):
                    bc = t[b][c]
                    if bc is None:
                        continue
                    left, right = t[ab][c], t[a][bc]
                    if left is not None and right is not None and left != right:
                        return False
        return True

    def rec(k):
        if k == len(cells):
            yield tuple(tuple(row) for row in t)
            return
        i, j = cells[k]
        for v in range(n):
            t[i][j] = v
            if consistent():
                yield from rec(k + 1)
        t[i][j] = None

    yield from rec(0)


def _canonical(table: tuple) -> tuple:
    n = len(table)
    best = None
    for perm in permutations(range(n)):
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        # relabel element x as perm[x]
        cand = tuple(tuple(perm[table[inv[i]][inv[j]]] for j in range(n)) for i in range(n))
        if best is None or cand < best:
            best = cand
    return best


def enumerate_semigroups(order: int, up_to_iso: bool = False, allow_order4: bool = False) -> Iterator[FiniteEpigroup]:
    """All semigroups on {s0, ..., s(order-1)}, as epigroups.

    Labeled tables come out in lexicographic order; with ``up_to_iso``
    one canonical (lexicographically least) table per isomorphism class,
    sorted.
    """
    if order < 1 or order > 4 or (order == 4 and not allow_order4):
        raise ValueError("enumeration supports order 1..3 (order 4 with allow_order4=True)")
    tables = _labeled_tables(order)
    if up_to_iso:
        tables = sorted({_canonical(t) for t in tables})
    names = tuple(f"s{i}" for i in range(order))
    for num, t in enumerate(tables):
        tag = "iso" if up_to_iso else "lab"
        yield derive_epigroup(FiniteUnarySemigroup(names, t, name=f"S{order}{tag}#{num}"))[0]


def named_models() -> list:
    """The named epigroups used by oracle suites."""
    models = [make_P(), make_C(), dual(make_P())]
    models += [make_N(k) for k in range(1, 6)]
    models += [make_Z(n) for n in range(1, 7)]
    models += [make_cyclic(i, p) for i in range(1, 5) for p in range(1, 5)]
    models += [make_free_nil(k, m) for k in range(2, 5) for m in range(1, 4)]
    return models


def oracle_models(labeled: bool = False) -> list:
    """Named epigroups plus every semigroup of order <= 3."""
    models = named_models()
    for order in (1, 2, 3):
        models += list(enumerate_semigroups(order, up_to_iso=not labeled))
    return models


def default_catalog() -> dict:
    """The small set written by ``epiworks catalog --write-dir``."""
    return {
        "P": make_P(), "P-dual": dual(make_P()), "C": make_C(), "T": make_T(),
        "N3": make_N(3), "Z3": make_Z(3), "F3_2": make_free_nil(3, 2),
    }
