"""Unary-semigroup words and identities.

A word is built from letters, (associative) products and the unary bar
operation.  Products are kept flat, so two words that differ only by
bracketing are the same Python value.

Surface syntax::

    x y (x y)'        product of x, y and the bar of x y
    x''               bar applied twice
    x^3               power sugar, the same as  x x x
    x y = y x         an identity
    x x = 0           zero sugar:  x x z = x x,  z x x = x x
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

__all__ = [
    "Atom", "Product", "Bar", "Word", "WordStats", "Identity", "IdentityFlags",
    "IdentitySystem", "ParseError", "mul", "power", "parse_word", "render_word",
    "parse_identity", "parse_identities", "parse_system", "render_identity",
    "analyze_word", "substitute", "reverse_word", "classify_identity",
    "expand_zero", "fresh_letters", "letters_in_order", "first_letter",
    "last_letter", "content", "is_semigroup_word", "weight", "enumerate_words",
    "iter_letters", "factors_of",
]

LETTER_RE = re.compile(r"[a-z][0-9]*\Z")


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: Optional[int] = None):
        self.text = text
        self.pos = pos
        if pos is not None:
            message = f"{message} at position {pos}"
        super().__init__(message)


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not isinstance(self.name, str) or not LETTER_RE.match(self.name):
            raise ValueError(f"invalid letter name {self.name!r}")

    def __str__(self):
        return render_word(self)


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("a product needs at least two factors")
        for f in self.factors:
            if isinstance(f, Product):
                raise ValueError("products must be flattened")
            if not isinstance(f, (Atom, Bar)):
                raise TypeError(f"not a word: {f!r}")

    def __str__(self):
        return render_word(self)


@dataclass(frozen=True)
class Bar:
    body: "Word"

    def __post_init__(self):
        if not isinstance(self.body, (Atom, Product, Bar)):
            raise TypeError(f"not a word: {self.body!r}")

    def __str__(self):
        return render_word(self)


Word = Union[Atom, Product, Bar]


def mul(*words: Word) -> Word:
    """Flattened product of one or more words."""
    factors = []
    for w in words:
        if isinstance(w, Product):
            factors.extend(w.factors)
        else:
            factors.append(w)
    if not factors:
        raise ValueError("empty product")
    if len(factors) == 1:
        return factors[0]
    return Product(tuple(factors))


def power(w: Word, k: int) -> Word:
    if k < 1:
        raise ValueError("exponent must be positive")
    return mul(*([w] * k))


def factors_of(w: Word) -> tuple:
    return w.factors if isinstance(w, Product) else (w,)


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<letter>[a-z][0-9]*)|(?P<pow>\^\s*[0-9]+)|(?P<sym>[()'])|(?P<bad>\S))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group("bad") is not None:
            raise ParseError(f"unexpected character {m.group('bad')!r}", text, m.start("bad"))
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def error(self, message, pos=None):
        if pos is None:
            tok = self.peek()
            pos = tok[2] if tok else len(self.text)
        raise ParseError(message, self.text, pos)

    def word(self) -> Word:
        factors = []
        while True:
            tok = self.peek()
            if tok is None or tok[1] == ")":
                break
            factors.append(self.factor())
        if not factors:
            self.error("expected a word")
        return mul(*factors)

    def factor(self) -> Word:
        kind, value, pos = self.tokens[self.i]
        if kind == "letter":
            self.i += 1
            w = Atom(value)
        elif value == "(":
            self.i += 1
            w = self.word()
            tok = self.peek()
            if tok is None or tok[1] != ")":
                self.error("expected ')'")
            self.i += 1
        else:
            self.error(f"unexpected {value!r}", pos)
        while True:
            tok = self.peek()
            if tok is None:
                break
            if tok[1] == "'":
                self.i += 1
                w = Bar(w)
            elif tok[0] == "pow":
                self.i += 1
                k = int(tok[1][1:].strip())
                if k < 1:
                    self.error("exponent must be a positive integer", tok[2])
                w = power(w, k)
            else:
                break
        return w


def parse_word(text: str) -> Word:
    """Parse the surface syntax into a canonical (flattened) word."""
    if not text.strip():
        raise ParseError("empty word", text, 0)
    p = _Parser(text)
    w = p.word()
    if p.peek() is not None:
        p.error(f"unexpected {p.peek()[1]!r}")
    return w


def render_word(w: Word) -> str:
    if isinstance(w, Atom):
        return w.name
    if isinstance(w, Product):
        return " ".join(render_word(f) for f in w.factors)
    if isinstance(w.body, Product):
        return "(" + render_word(w.body) + ")'"
    return render_word(w.body) + "'"


# -- structure ---------------------------------------------------------------

def weight(w: Word) -> int:
    if isinstance(w, Atom):
        return 0
    if isinstance(w, Bar):
        return 1 + weight(w.body)
    return len(w.factors) - 1 + sum(weight(f) for f in w.factors)


def is_semigroup_word(w: Word) -> bool:
    if isinstance(w, Atom):
        return True
    if isinstance(w, Bar):
        return False
    return all(isinstance(f, Atom) for f in w.factors)


def iter_letters(w: Word) -> Iterator[str]:
    """Letter occurrences, left to right."""
    if isinstance(w, Atom):
        yield w.name
    elif isinstance(w, Bar):
        yield from iter_letters(w.body)
    else:
        for f in w.factors:
            yield from iter_letters(f)


def content(w: Word) -> frozenset:
    return frozenset(iter_letters(w))


def last_letter(w: Word) -> str:
    while not isinstance(w, Atom):
        w = w.body if isinstance(w, Bar) else w.factors[-1]
    return w.name


def first_letter(w: Word) -> str:
    while not isinstance(w, Atom):
        w = w.body if isinstance(w, Bar) else w.factors[0]
    return w.name


def letters_in_order(*words: Word) -> list:
    """Distinct letters by first occurrence, scanning the words in turn."""
    seen = {}
    for w in words:
        for name in iter_letters(w):
            seen.setdefault(name, None)
    return list(seen)


@dataclass(frozen=True)
class WordStats:
    weight: int
    length: float  # int, or math.inf for non-semigroup words
    content: frozenset
    last_letter: str
    occurrences: Optional[Mapping[str, int]]


def analyze_word(w: Word) -> WordStats:
    semigroup = is_semigroup_word(w)
    occ = dict(sorted(Counter(iter_letters(w)).items())) if semigroup else None
    return WordStats(
        weight=weight(w),
        length=sum(occ.values()) if semigroup else math.inf,
        content=content(w),
        last_letter=last_letter(w),
        occurrences=occ,
    )


def substitute(w: Word, sigma: Mapping[str, Word]) -> Word:
    if isinstance(w, Atom):
        return sigma.get(w.name, w)
    if isinstance(w, Bar):
        return Bar(substitute(w.body, sigma))
    return mul(*(substitute(f, sigma) for f in w.factors))


def reverse_word(w: Word) -> Word:
    if isinstance(w, Atom):
        return w
    if isinstance(w, Bar):
        return Bar(reverse_word(w.body))
    return Product(tuple(reverse_word(f) for f in reversed(w.factors)))


# -- identities --------------------------------------------------------------

@dataclass(frozen=True)
class Identity:
    lhs: Word
    rhs: Word

    @property
    def is_trivial(self) -> bool:
        return self.lhs == self.rhs

    def letters(self) -> list:
        return letters_in_order(self.lhs, self.rhs)

    def reversed(self) -> "Identity":
        return Identity(reverse_word(self.lhs), reverse_word(self.rhs))

    def swapped(self) -> "Identity":
        return Identity(self.rhs, self.lhs)

    def substitute(self, sigma) -> "Identity":
        return Identity(substitute(self.lhs, sigma), substitute(self.rhs, sigma))

    def __str__(self):
        return render_identity(self)


def render_identity(ident: Identity) -> str:
    return f"{render_word(ident.lhs)} = {render_word(ident.rhs)}"


def fresh_letters(used: Iterable[str]) -> Iterator[str]:
    """z1, z2, ... skipping anything in ``used``."""
    used = set(used)
    k = 1
    while True:
        name = f"z{k}"
        if name not in used:
            yield name
        k += 1


def expand_zero(lhs: Word) -> tuple:
    """The identity pair abbreviated by ``lhs = 0``.

    The absorbing letter is ``z`` when that is free, otherwise the first
    unused name from :func:`fresh_letters`.
    """
    used = content(lhs)
    name = "z" if "z" not in used else next(fresh_letters(used))
    z = Atom(name)
    return (Identity(mul(lhs, z), lhs), Identity(mul(z, lhs), lhs))


def parse_identities(text: str) -> list:
    """Parse ``u = v`` (one identity) or ``u = 0`` (two identities)."""
    if text.count("=") != 1:
        raise ParseError("an identity needs exactly one '='", text,
                         text.find("=", text.find("=") + 1) if "=" in text else len(text))
    left, right = text.split("=")
    offset = len(left) + 1
    try:
        lhs = parse_word(left)
    except ParseError as e:
        raise ParseError(str(e).split(" at position")[0], text, e.pos) from None
    if right.strip() == "0":
        return list(expand_zero(lhs))
    try:
        rhs = parse_word(right)
    except ParseError as e:
        raise ParseError(str(e).split(" at position")[0], text,
                         None if e.pos is None else e.pos + offset) from None
    return [Identity(lhs, rhs)]


def parse_identity(text: str) -> Identity:
    idents = parse_identities(text)
    if len(idents) != 1:
        raise ParseError("zero identities abbreviate two identities; use parse_identities", text)
    return idents[0]


@dataclass(frozen=True)
class IdentitySystem:
    identities: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "identities", tuple(self.identities))

    def __iter__(self):
        return iter(self.identities)

    def __len__(self):
        return len(self.identities)

    def __getitem__(self, i):
        return self.identities[i]

    def letters(self) -> frozenset:
        out = set()
        for ident in self.identities:
            out |= content(ident.lhs) | content(ident.rhs)
        return frozenset(out)

    def fresh_supply(self) -> Iterator[str]:
        return fresh_letters(self.letters())

    def __str__(self):
        return "\n".join(render_identity(i) for i in self.identities)


def parse_system(text: str) -> IdentitySystem:
    """One identity per line; ``#`` starts a comment."""
    idents = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0]
        if not line.strip():
            continue
        try:
            idents.extend(parse_identities(line))
        except ParseError as e:
            raise ParseError(f"line {lineno}: {e}") from None
    return IdentitySystem(tuple(idents))


@dataclass(frozen=True)
class IdentityFlags:
    is_semigroup: bool
    is_balanced: bool
    is_homotypical: bool
    is_heterotypical: bool
    is_mixed: bool
    is_strictly_unary: bool
    is_permutational: bool
    is_linear_lhs: bool
    is_linear_rhs: bool


def _is_linear(w: Word) -> bool:
    if not is_semigroup_word(w):
        return False
    names = list(iter_letters(w))
    return len(names) == len(set(names))


def classify_identity(ident: Identity) -> IdentityFlags:
    lsg, rsg = is_semigroup_word(ident.lhs), is_semigroup_word(ident.rhs)
    semigroup = lsg and rsg
    balanced = semigroup and Counter(iter_letters(ident.lhs)) == Counter(iter_letters(ident.rhs))
    same_content = content(ident.lhs) == content(ident.rhs)
    lin_l, lin_r = _is_linear(ident.lhs), _is_linear(ident.rhs)
    permutational = (lin_l and lin_r and same_content and not ident.is_trivial)
    return IdentityFlags(
        is_semigroup=semigroup,
        is_balanced=balanced,
        is_homotypical=same_content,
        is_heterotypical=not same_content,
        is_mixed=lsg != rsg,
        is_strictly_unary=not lsg and not rsg,
        is_permutational=permutational,
        is_linear_lhs=lin_l,
        is_linear_rhs=lin_r,
    )


def enumerate_words(letters, max_weight: int) -> list:
    """Every canonical word over ``letters`` with weight <= ``max_weight``,
    ordered by weight."""
    atoms = [Atom(a) for a in letters]
    words = {0: list(atoms)}          # all words of a given weight
    single = {0: list(atoms)}         # non-product words
    seqs = {0: [(a,) for a in atoms]}  # factor sequences, sequence weight
    for w in range(1, max_weight + 1):
        single[w] = [Bar(u) for u in words[w - 1]]
        seqs[w] = [(f,) for f in single[w]]
        for a in range(0, w):
            for f in single[a]:
                seqs[w].extend((f,) + s for s in seqs[w - 1 - a])
        words[w] = single[w] + [Product(s) for s in seqs[w] if len(s) > 1]
    return [u for w in range(max_weight + 1) for u in words[w]]
