"""Rewriting unary words with the epigroup laws.

Two procedures, both recorded as traces of single-position rewrites:

* :func:`normalize_one_letter` brings a word in one letter to the form
  ``x^p x'^q``;
* :func:`factor_tail` rewrites any word so that it ends in a plain
  letter, ``u = u* z``.

Every trace step names a rule from :data:`RULES` together with the
position it was applied at, so :func:`replay_step` can re-derive each
step independently.  Rules (``x'`` is the bar of ``x``):

==========  ==========================================  =================
tag         rewrite                                     condition
==========  ==========================================  =================
R1          x'^t x^m  ->  x^(m-t+1) x'                  1 <= t <= m
R2          x'^t x^m  ->  x'^(t-m)                      t > m >= 1
bar-power   (x^r)'    ->  x'^r                          r >= 2
bar-gt      (x^s x'^t)'  ->  x'^(s-t)                   s > t >= 1
bar-eq      (x^s x'^s)'  ->  x x'                       s >= 1
bar-lt      (x^s x'^t)'  ->  x^(2(t-s)) x'^(t-s)        t > s >= 0
bar-split   w'        ->  (w w)' w                      any w
==========  ==========================================  =================
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .model import DEFAULT_BOUND, ModelBundle
from .terms import (
    Atom, Bar, Product, Word, content, factors_of, last_letter, letters_in_order,
    mul, render_word,
)

__all__ = [
    "OneLetterNF", "RewriteStep", "RULES", "NoMatch", "normalize_one_letter",
    "nf_multiply", "factor_tail", "oracle_check", "OracleReport", "replay_step",
    "render_trace", "nf_word", "as_nf",
]


class NoMatch(ValueError):
    pass


@dataclass(frozen=True)
class OneLetterNF:
    p: int
    q: int
    letter: str = "x"

    def __post_init__(self):
        if self.p < 0 or self.q < 0 or self.p + self.q < 1:
            raise ValueError("need p, q >= 0 and p + q >= 1")

    def word(self) -> Word:
        return nf_word(self.letter, self.p, self.q)

    def __str__(self):
        return f"{self.letter}^{self.p} {self.letter}'^{self.q}"


@dataclass(frozen=True)
class RewriteStep:
    before: Word
    after: Word
    rule: str
    path: tuple = ()
    span: Optional[tuple] = None   # (start, stop) factor slice of the product at ``path``

    def __str__(self):
        return f"{render_word(self.before)}  --[{self.rule}]-->  {render_word(self.after)}"


def render_trace(steps: Iterable[RewriteStep]) -> str:
    return "\n".join(str(s) for s in steps)


def nf_word(letter: str, p: int, q: int) -> Word:
    x = Atom(letter)
    return mul(*([x] * p + [Bar(x)] * q))


def as_nf(w: Word) -> Optional[tuple]:
    """``(letter, p, q)`` if ``w`` is literally ``x^p x'^q``, else None."""
    fs = factors_of(w)
    letter = fs[0].name if isinstance(fs[0], Atom) else None
    if letter is None:
        if not (isinstance(fs[0], Bar) and isinstance(fs[0].body, Atom)):
            return None
        letter = fs[0].body.name
    x = Atom(letter)
    p = 0
    while p < len(fs) and fs[p] == x:
        p += 1
    if any(f != Bar(x) for f in fs[p:]):
        return None
    return letter, p, len(fs) - p


def _bar_then_power(seg: Word) -> tuple:
    fs = factors_of(seg)
    if not (isinstance(fs[0], Bar) and isinstance(fs[0].body, Atom)):
        raise NoMatch("segment must start with x'")
    x = fs[0].body
    t = 0
    while t < len(fs) and fs[t] == Bar(x):
        t += 1
    m = len(fs) - t
    if m < 1 or any(f != x for f in fs[t:]):
        raise NoMatch("segment must be x'^t x^m")
    return x.name, t, m


def _rule_r1(seg):
    x, t, m = _bar_then_power(seg)
    if t > m:
        raise NoMatch("R1 needs t <= m")
    return nf_word(x, m - t + 1, 1)


def _rule_r2(seg):
    x, t, m = _bar_then_power(seg)
    if t <= m:
        raise NoMatch("R2 needs t > m")
    return nf_word(x, 0, t - m)


def _bar_of_nf(node) -> tuple:
    if not isinstance(node, Bar):
        raise NoMatch("expected a bar")
    nf = as_nf(node.body)
    if nf is None:
        raise NoMatch("bar body is not of the form x^s x'^t")
    return nf


def _rule_bar_power(node):
    x, r, t = _bar_of_nf(node)
    if t != 0 or r < 2:
        raise NoMatch("bar-power needs (x^r)' with r >= 2")
    return nf_word(x, 0, r)


def _rule_bar_gt(node):
    x, s, t = _bar_of_nf(node)
    if not s > t >= 1:
        raise NoMatch("bar-gt needs s > t >= 1")
    return nf_word(x, 0, s - t)


def _rule_bar_eq(node):
    x, s, t = _bar_of_nf(node)
    if not s == t >= 1:
        raise NoMatch("bar-eq needs s = t >= 1")
    return nf_word(x, 1, 1)


def _rule_bar_lt(node):
    x, s, t = _bar_of_nf(node)
    if not t > s:
        raise NoMatch("bar-lt needs t > s")
    return nf_word(x, 2 * (t - s), t - s)


def _rule_bar_split(node):
    if not isinstance(node, Bar):
        raise NoMatch("expected a bar")
    w = node.body
    return mul(Bar(mul(w, w)), w)


RULES = {
    "R1": _rule_r1,
    "R2": _rule_r2,
    "bar-power": _rule_bar_power,
    "bar-gt": _rule_bar_gt,
    "bar-eq": _rule_bar_eq,
    "bar-lt": _rule_bar_lt,
    "bar-split": _rule_bar_split,
}


# -- positions ---------------------------------------------------------------

def _get(w: Word, path: tuple) -> Word:
    for i in path:
        if isinstance(w, Bar):
            if i != 0:
                raise IndexError("bar has a single child")
            w = w.body
        elif isinstance(w, Product):
            w = w.factors[i]
        else:
            raise IndexError("letters have no children")
    return w


def _replace(w: Word, path: tuple, new: Word) -> Word:
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(w, Bar):
        return Bar(_replace(w.body, rest, new))
    fs = w.factors
    return mul(*fs[:i], _replace(fs[i], rest, new), *fs[i + 1:])


def apply_rule(word: Word, rule: str, path: tuple = (), span: Optional[tuple] = None) -> Word:
    node = _get(word, path)
    if span is None:
        return _replace(word, path, RULES[rule](node))
    start, stop = span
    fs = factors_of(node)
    if not 0 <= start < stop <= len(fs):
        raise NoMatch("span out of range")
    new = RULES[rule](mul(*fs[start:stop]))
    return _replace(word, path, mul(*fs[:start], new, *fs[stop:]))


def replay_step(step: RewriteStep) -> bool:
    """Re-apply the step's rule at its position and compare."""
    try:
        return apply_rule(step.before, step.rule, step.path, step.span) == step.after
    except (NoMatch, IndexError, KeyError):
        return False


def _step(word, rule, path, span, steps):
    new = apply_rule(word, rule, path, span)
    steps.append(RewriteStep(word, new, rule, path, span))
    return new


# -- one-letter normal form --------------------------------------------------

def _combine(word: Word, path: tuple, steps: list) -> Word:
    """Rewrite the flat x/x' product at ``path`` into x^p x'^q, left to right."""
    while True:
        node = _get(word, path)
        if not isinstance(node, Product):
            return word
        fs = node.factors
        hit = next((i for i in range(len(fs) - 1)
                    if isinstance(fs[i], Bar) and isinstance(fs[i + 1], Atom)), None)
        if hit is None:
            return word
        start = hit
        while start > 0 and isinstance(fs[start - 1], Bar):
            start -= 1
        stop = hit + 1
        while stop < len(fs) and isinstance(fs[stop], Atom):
            stop += 1
        t, m = hit + 1 - start, stop - hit - 1
        word = _step(word, "R1" if t <= m else "R2", path, (start, stop), steps)


def _normalize(word: Word, path: tuple, steps: list) -> Word:
    node = _get(word, path)
    if isinstance(node, Atom):
        return word
    if isinstance(node, Bar):
        word = _normalize(word, path + (0,), steps)
        body = _get(word, path).body
        if isinstance(body, Atom):
            return word
        _, s, t = as_nf(body)
        if t == 0:
            rule = "bar-power"
        elif s > t:
            rule = "bar-gt"
        elif s == t:
            rule = "bar-eq"
        else:
            rule = "bar-lt"
        return _step(word, rule, path, None, steps)
    # right to left, so splicing a child in does not shift the ones still to do
    for i in reversed(range(len(node.factors))):
        word = _normalize(word, path + (i,), steps)
    return _combine(word, path, steps)


def normalize_one_letter(w: Word) -> tuple:
    """``(OneLetterNF, steps)`` with ``w = x^p x'^q`` in every epigroup."""
    letters = content(w)
    if len(letters) != 1:
        raise ValueError(f"expected a word in one letter, got {sorted(letters)}")
    steps = []
    out = _normalize(w, (), steps)
    letter, p, q = as_nf(out)
    return OneLetterNF(p, q, letter), steps


def nf_multiply(a: OneLetterNF, b: OneLetterNF) -> tuple:
    """Normal form of the product of two normal forms in the same letter."""
    if a.letter != b.letter:
        raise ValueError(f"letter mismatch: {a.letter} vs {b.letter}")
    steps = []
    out = _combine(mul(a.word(), b.word()), (), steps)
    letter, p, q = as_nf(out)
    return OneLetterNF(p, q, letter), steps


# -- tail factorization ------------------------------------------------------

def factor_tail(u: Word) -> tuple:
    """``(u_star, z, steps)`` with ``u = u_star z`` in every epigroup.

    ``u_star`` is None when ``u`` is a single letter.
    """
    steps = []
    word = u
    while True:
        if isinstance(word, Bar):
            path = ()
        elif isinstance(word, Product) and isinstance(word.factors[-1], Bar):
            path = (len(word.factors) - 1,)
        else:
            break
        word = _step(word, "bar-split", path, None, steps)
    fs = factors_of(word)
    u_star = mul(*fs[:-1]) if len(fs) > 1 else None
    return u_star, last_letter(word), steps


# -- semantic oracle ---------------------------------------------------------

@dataclass(frozen=True)
class OracleReport:
    models_checked: int
    separations: tuple   # (model, witness, (lhs value, rhs value)) per separating model

    @property
    def ok(self) -> bool:
        return not self.separations


def oracle_check(lhs: Word, rhs: Word, models, bound: int = DEFAULT_BOUND) -> OracleReport:
    """Evaluate both words under every assignment in every model."""
    models = list(models)
    bundle = ModelBundle(models, letters_in_order(lhs, rhs), bound)
    cache = {}
    seps = bundle.separations(bundle.evaluate(lhs, cache), bundle.evaluate(rhs, cache))
    return OracleReport(len(models), tuple(seps))
