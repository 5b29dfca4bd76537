"""Finite unary semigroups given by Cayley tables.

Elements are the integers ``0..n-1``; ``elements`` only carries display
names.  A table without a unary operation is a plain semigroup, and
:func:`derive_epigroup` equips it with pseudoinversion.

Words are evaluated with numpy over the whole assignment space at once.
Assignments are enumerated odometer-style with the first letter most
significant, so the first separating assignment found is the
lexicographically least one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional, Sequence

import numpy as np

from .terms import Atom, Bar, Identity, Word, letters_in_order

__all__ = [
    "DEFAULT_BOUND", "AssociativityError", "TableError", "ResourceGuardError",
    "UnboundLetterError", "FiniteUnarySemigroup", "FiniteEpigroup", "CyclicData",
    "validate_table", "cyclic_data", "derive_epigroup", "epigroup_profile",
    "eval_word", "eval_all", "satisfies", "satisfies_system", "nil_profile",
    "gr_right_ideal", "dual", "parse_table", "render_table", "load_table",
    "SatResult", "SystemResult", "EpigroupProfile", "NilProfile",
    "RightIdealResult", "ModelBundle", "zero_element", "epigroup_law_violations",
]

DEFAULT_BOUND = 10**8
CHUNK = 1 << 18


class TableError(ValueError):
    pass


class AssociativityError(TableError):
    def __init__(self, a, b, c, names=None):
        self.triple = (a, b, c)
        na, nb, nc = (names[a], names[b], names[c]) if names else (a, b, c)
        super().__init__(f"not associative: ({na} {nb}) {nc} != {na} ({nb} {nc})")


class ResourceGuardError(RuntimeError):
    pass


class UnboundLetterError(KeyError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteUnarySemigroup:
    elements: tuple
    mult: tuple
    unary: Optional[tuple] = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.elements)
        if n == 0:
            raise TableError("a semigroup needs at least one element")
        if len(set(self.elements)) != n:
            raise TableError("duplicate element names")
        mult = tuple(tuple(int(v) for v in row) for row in self.mult)
        if len(mult) != n or any(len(row) != n for row in mult):
            raise TableError(f"multiplication table must be {n}x{n}")
        if any(not 0 <= v < n for row in mult for v in row):
            raise TableError("multiplication table entry out of range")
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "mult", mult)
        if self.unary is not None:
            unary = tuple(int(v) for v in self.unary)
            if len(unary) != n or any(not 0 <= v < n for v in unary):
                raise TableError(f"unary table must list {n} elements")
            object.__setattr__(self, "unary", unary)

    def __eq__(self, other):
        if not isinstance(other, FiniteUnarySemigroup):
            return NotImplemented
        return (self.elements, self.mult, self.unary) == (other.elements, other.mult, other.unary)

    def __hash__(self):
        return hash((self.elements, self.mult, self.unary))

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        label = self.name or "table"
        return f"<{type(self).__name__} {label} order={len(self)}>"

    @cached_property
    def mult_array(self) -> np.ndarray:
        return np.array(self.mult, dtype=np.intp)

    @cached_property
    def unary_array(self) -> Optional[np.ndarray]:
        return None if self.unary is None else np.array(self.unary, dtype=np.intp)

    def index_of(self, name: str) -> int:
        try:
            return self.elements.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r}") from None

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def pow(self, a: int, k: int) -> int:
        r = a
        for _ in range(k - 1):
            r = self.mult[r][a]
        return r


def validate_table(S: FiniteUnarySemigroup) -> FiniteUnarySemigroup:
    """Return ``S`` unchanged if its multiplication is associative."""
    m = S.mult_array
    lhs = m[m]                      # lhs[a, b, c] = (ab)c
    rhs = m[np.arange(len(S))[:, None, None], m[None, :, :]]   # a(bc)
    bad = np.argwhere(lhs != rhs)
    if len(bad):
        a, b, c = (int(v) for v in bad[0])
        raise AssociativityError(a, b, c, S.elements)
    return S


@dataclass(frozen=True)
class CyclicData:
    index: int
    period: int
    omega: int
    pseudoinverse: int


def cyclic_data(S: FiniteUnarySemigroup, x: int) -> CyclicData:
    powers = [x]            # powers[k-1] = x^k
    seen = {x: 1}
    while True:
        nxt = S.mult[powers[-1]][x]
        k = len(powers) + 1
        if nxt in seen:
            i = seen[nxt]
            p = k - i
            break
        seen[nxt] = k
        powers.append(nxt)

    def xpow(e):
        if e > len(powers):
            e = i + (e - i) % p
        return powers[e - 1]

    m = -(-i // p) * p
    j = max(i, 1)
    j += (p - 1 - j) % p
    return CyclicData(index=i, period=p, omega=xpow(m), pseudoinverse=xpow(j))


class FiniteEpigroup(FiniteUnarySemigroup):
    """A finite semigroup whose unary operation is pseudoinversion."""

    @cached_property
    def cyclic(self) -> tuple:
        return tuple(cyclic_data(self, x) for x in range(len(self)))

    def omega(self, x: int) -> int:
        return self.cyclic[x].omega

    @cached_property
    def group_elements(self) -> frozenset:
        return frozenset(x for x in range(len(self)) if self.mult[self.omega(x)][x] == x)

    @cached_property
    def index(self) -> int:
        return max(c.index for c in self.cyclic)


def derive_epigroup(S: FiniteUnarySemigroup) -> tuple:
    """Equip ``S`` with pseudoinversion.

    Returns ``(epigroup, mismatches)`` where ``mismatches`` lists the
    elements at which a declared unary table disagrees with the derived
    one (empty when ``S`` declares none).
    """
    if isinstance(S, FiniteEpigroup):
        return S, []
    pinv = tuple(cyclic_data(S, x).pseudoinverse for x in range(len(S)))
    E = FiniteEpigroup(S.elements, S.mult, pinv, name=S.name)
    mismatches = [] if S.unary is None else [x for x in range(len(S)) if S.unary[x] != pinv[x]]
    return E, mismatches


@dataclass(frozen=True)
class EpigroupProfile:
    group_elements: frozenset
    index: int
    is_completely_regular: bool


def epigroup_profile(S: FiniteEpigroup) -> EpigroupProfile:
    cr = len(S.group_elements) == len(S)
    x = Atom("x")
    # completely regular <=> x = x''
    assert cr == satisfies(S, Identity(x, Bar(Bar(x)))).holds
    return EpigroupProfile(S.group_elements, S.index, cr)


# -- evaluation --------------------------------------------------------------

def _eval_vec(S: FiniteUnarySemigroup, w: Word, env: Mapping[str, np.ndarray], cache: dict) -> np.ndarray:
    got = cache.get(w)
    if got is not None:
        return got
    if isinstance(w, Atom):
        try:
            out = env[w.name]
        except KeyError:
            raise UnboundLetterError(w.name) from None
    elif isinstance(w, Bar):
        if S.unary is None:
            raise TableError("table has no unary operation")
        out = S.unary_array[_eval_vec(S, w.body, env, cache)]
    else:
        m = S.mult_array
        fs = w.factors
        out = _eval_vec(S, fs[0], env, cache)
        for f in fs[1:]:
            out = m[out, _eval_vec(S, f, env, cache)]
    cache[w] = out
    return out


def eval_word(S: FiniteUnarySemigroup, w: Word, alpha: Mapping[str, int]) -> int:
    env = {k: np.array([v], dtype=np.intp) for k, v in alpha.items()}
    return int(_eval_vec(S, w, env, {})[0])


def _assignment_block(n: int, k: int, start: int, stop: int) -> np.ndarray:
    """Rows ``start..stop`` of the odometer over ``n**k`` assignments; shape (k, stop-start)."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((k, stop - start), dtype=np.intp)
    for pos in range(k - 1, -1, -1):
        out[pos] = idx % n
        idx //= n
    return out


def eval_all(S: FiniteUnarySemigroup, words: Sequence[Word], letters: Sequence[str],
             start: int = 0, stop: Optional[int] = None):
    """Values of ``words`` at assignments ``start..stop`` of ``letters``."""
    n, k = len(S), len(letters)
    total = n ** k
    stop = total if stop is None else min(stop, total)
    block = _assignment_block(n, k, start, stop)
    env = {name: block[pos] for pos, name in enumerate(letters)}
    cache = {}
    return [np.broadcast_to(_eval_vec(S, w, env, cache), (stop - start,)) for w in words]


@dataclass(frozen=True)
class SatResult:
    holds: bool
    witness: Optional[dict] = None     # letter -> element index
    values: Optional[tuple] = None     # (lhs value, rhs value) at the witness


def _check_bound(S, k, bound):
    if len(S) ** k > bound:
        raise ResourceGuardError(
            f"{len(S)}^{k} = {len(S) ** k} assignments exceeds the bound {bound}")


def satisfies(S: FiniteUnarySemigroup, ident: Identity, bound: int = DEFAULT_BOUND) -> SatResult:
    letters = letters_in_order(ident.lhs, ident.rhs)
    if ident.is_trivial:
        return SatResult(True)
    _check_bound(S, len(letters), bound)
    total = len(S) ** len(letters)
    for start in range(0, total, CHUNK):
        lv, rv = eval_all(S, [ident.lhs, ident.rhs], letters, start, start + CHUNK)
        diff = np.flatnonzero(lv != rv)
        if len(diff):
            pos = int(diff[0])
            row = _assignment_block(len(S), len(letters), start + pos, start + pos + 1)[:, 0]
            witness = {name: int(row[i]) for i, name in enumerate(letters)}
            return SatResult(False, witness, (int(lv[pos]), int(rv[pos])))
    return SatResult(True)


@dataclass(frozen=True)
class SystemResult:
    holds: bool
    first_failure: Optional[tuple] = None  # (position, identity, SatResult)


def satisfies_system(S: FiniteUnarySemigroup, system, bound: int = DEFAULT_BOUND) -> SystemResult:
    for pos, ident in enumerate(system):
        res = satisfies(S, ident, bound)
        if not res.holds:
            return SystemResult(False, (pos, ident, res))
    return SystemResult(True)


# -- structural predicates ---------------------------------------------------

def zero_element(S: FiniteUnarySemigroup) -> Optional[int]:
    for z in range(len(S)):
        if all(S.mult[z][x] == z and S.mult[x][z] == z for x in range(len(S))):
            return z
    return None


@dataclass(frozen=True)
class NilProfile:
    is_nil: bool
    nilpotency_degree: Optional[int] = None


def nil_profile(S: FiniteUnarySemigroup) -> NilProfile:
    z = zero_element(S)
    if z is None:
        return NilProfile(False)
    if any(cyclic_data(S, x).omega != z for x in range(len(S))):
        return NilProfile(False)
    every = frozenset(range(len(S)))
    current, degree = every, 1
    while current != {z}:
        current = frozenset(S.mult[a][b] for a in current for b in every)
        degree += 1
    return NilProfile(True, degree)


@dataclass(frozen=True)
class RightIdealResult:
    holds: bool
    witness: Optional[tuple] = None  # (x in Gr S, y) with xy outside Gr S


def gr_right_ideal(S: FiniteEpigroup) -> RightIdealResult:
    gr = S.group_elements
    for x in range(len(S)):
        if x not in gr:
            continue
        for y in range(len(S)):
            if S.mult[x][y] not in gr:
                return RightIdealResult(False, (x, y))
    return RightIdealResult(True)


def dual(S: FiniteUnarySemigroup) -> FiniteUnarySemigroup:
    """The anti-isomorphic copy: transposed table, same unary operation."""
    mult = tuple(zip(*S.mult))
    name = S.name[:-5] if S.name.endswith("-dual") else (S.name + "-dual" if S.name else "")
    return type(S)(S.elements, mult, S.unary, name=name)


# -- table files -------------------------------------------------------------

def parse_table(text: str, name: str = "") -> FiniteUnarySemigroup:
    """Read the table format and validate associativity.

    Line 1 is the order n, line 2 the element names, then n rows of
    products, then optionally ``unary:`` followed by n names.
    """
    lines = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise TableError("empty table file")
    try:
        n = int(lines[0])
    except ValueError:
        raise TableError(f"first line must be the order, got {lines[0]!r}") from None
    if n < 1:
        raise TableError("order must be positive")
    if len(lines) < n + 2:
        raise TableError(f"expected {n} rows after the element names")
    names = lines[1].split()
    if len(names) != n:
        raise TableError(f"expected {n} element names, got {len(names)}")
    pos = {s: i for i, s in enumerate(names)}

    def lookup(token):
        if token not in pos:
            raise TableError(f"unknown element {token!r}")
        return pos[token]

    rows = []
    for line in lines[2:n + 2]:
        toks = line.split()
        if len(toks) != n:
            raise TableError(f"row {len(rows) + 1} must have {n} entries")
        rows.append(tuple(lookup(t) for t in toks))
    unary = None
    rest = lines[n + 2:]
    if rest:
        if not rest[0].startswith("unary:"):
            raise TableError(f"unexpected line {rest[0]!r}")
        toks = " ".join([rest[0][len("unary:"):]] + rest[1:]).split()
        if len(toks) != n:
            raise TableError(f"unary table must list {n} elements")
        unary = tuple(lookup(t) for t in toks)
    S = FiniteUnarySemigroup(tuple(names), tuple(rows), unary, name=name)
    return validate_table(S)


def render_table(S: FiniteUnarySemigroup, with_unary: bool = True) -> str:
    names = S.elements
    out = [str(len(S)), " ".join(names)]
    out.extend(" ".join(names[v] for v in row) for row in S.mult)
    if with_unary and S.unary is not None:
        out.append("unary: " + " ".join(names[v] for v in S.unary))
    return "\n".join(out) + "\n"


def load_table(path) -> FiniteUnarySemigroup:
    from pathlib import Path
    path = Path(path)
    return parse_table(path.read_text(), name=path.stem)


class ModelBundle:
    """Several models evaluated in one pass.

    The tables are stacked block-diagonally and every model's full
    assignment grid for ``letters`` is laid end to end, so a single
    vectorized evaluation covers all of them.  Products never leave a
    block, so the result per block equals evaluation in that model.
    """

    def __init__(self, models: Sequence[FiniteUnarySemigroup], letters: Sequence[str],
                 bound: int = DEFAULT_BOUND):
        self.models = [m if m.unary is not None else derive_epigroup(m)[0] for m in models]
        self.letters = list(letters)
        k = len(self.letters)
        sizes = [len(m) for m in self.models]
        total = sum(n ** k for n in sizes)
        if total > bound:
            raise ResourceGuardError(f"{total} assignments exceeds the bound {bound}")
        N = sum(sizes)
        mult = np.zeros((N, N), dtype=np.intp)
        unary = np.zeros(N, dtype=np.intp)
        grids, self.offsets, self.segments = [], [], []
        off = seg = 0
        for m, n in zip(self.models, sizes):
            mult[off:off + n, off:off + n] = m.mult_array + off
            unary[off:off + n] = m.unary_array + off
            grids.append(_assignment_block(n, k, 0, n ** k) + off)
            self.offsets.append(off)
            self.segments.append((seg, seg + n ** k))
            off += n
            seg += n ** k
        self._mult, self._unary = mult, unary
        block = np.concatenate(grids, axis=1) if grids else np.empty((k, 0), dtype=np.intp)
        self.env = {name: block[pos] for pos, name in enumerate(self.letters)}
        self.size = seg

    def evaluate(self, w: Word, cache: Optional[dict] = None) -> np.ndarray:
        if cache is None:
            cache = {}
        return np.broadcast_to(self._eval(w, cache), (self.size,))

    def _eval(self, w, cache):
        got = cache.get(w)
        if got is not None:
            return got
        if isinstance(w, Atom):
            try:
                out = self.env[w.name]
            except KeyError:
                raise UnboundLetterError(w.name) from None
        elif isinstance(w, Bar):
            out = self._unary[self._eval(w.body, cache)]
        else:
            out = self._eval(w.factors[0], cache)
            for f in w.factors[1:]:
                out = self._mult[out, self._eval(f, cache)]
        cache[w] = out
        return out

    def separations(self, lv: np.ndarray, rv: np.ndarray) -> list:
        """First separating assignment per model: (model, witness, (lhs, rhs))."""
        out = []
        diff = lv != rv
        if not diff.any():
            return out
        for m, off, (a, b) in zip(self.models, self.offsets, self.segments):
            hits = np.flatnonzero(diff[a:b])
            if len(hits):
                pos = a + int(hits[0])
                witness = {name: int(self.env[name][pos]) - off for name in self.letters}
                out.append((m, witness, (int(lv[pos]) - off, int(rv[pos]) - off)))
        return out


def _one_letter(text):
    from .terms import parse_word
    return parse_word(text)


def epigroup_law_violations(S: FiniteEpigroup, max_n: int = 5) -> list:
    """Pointwise check of the basic epigroup laws at every element.

    Each law is a list of one-letter words that must all take the same
    value; ``"omega"`` stands for x^omega taken from power iteration.
    Returns ``(law, element)`` pairs that fail.
    """
    laws = {
        "x x' = (x x')^2 = (x x')'": ["x x'", "x x' x x'", "(x x')'"],
        "x x' = x' x = omega": ["x x'", "x' x", "omega"],
        "omega x = x omega = x''": ["omega x", "x omega", "x''"],
        "x' = (x x)' x = x (x x)'": ["x'", "(x x)' x", "x (x x)'"],
        "x''' = x'": ["x'''", "x'"],
    }
    for n in range(1, max_n + 1):
        laws[f"(x^{n})' = x'^{n}"] = [f"(x^{n})'", f"x'^{n}"]
        laws[f"x^{n} x'^{n} = x'^{n} x^{n} = omega"] = [f"x^{n} x'^{n}", f"x'^{n} x^{n}", "omega"]
    xs = np.arange(len(S), dtype=np.intp)
    omega = np.array([S.omega(x) for x in range(len(S))], dtype=np.intp)
    # "omega" is not a letter name, so route it through a spare letter
    env = {"x": xs, "w": omega}
    bad = []
    for name, forms in laws.items():
        vals = [_eval_vec(S, _one_letter(f.replace("omega", "w")), env, {}) for f in forms]
        for x in range(len(S)):
            if len({int(np.broadcast_to(v, xs.shape)[x]) for v in vals}) != 1:
                bad.append((name, x))
    return bad
