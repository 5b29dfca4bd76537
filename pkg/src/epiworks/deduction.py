"""Checking equational deductions over a system plus the epigroup basis.

A deduction is a list of identities, each justified by one of

    axiom              member of the system or of the epigroup basis
    sym j              sides of step j swapped
    trans j k          u_j = u_i, v_j = u_k, v_k = v_i
    prod j k           u_i = u_j u_k and v_i = v_j v_k
    bar j              u_i = u_j' and v_i = v_j'
    subst j x:=w,...   the same substitution applied to both sides of step j
    refl               u_i = v_i

Only earlier steps may be cited.  Axioms match up to a bijective renaming
of letters unless ``strict`` is set.

Script format::

    axioms: system.eqs
    delta_bound: 3
    0. x = x x ; axiom
    1. x x = x x x x ; prod 0 0
    2. x = x x x x ; trans 0 1
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .terms import (
    Atom, Bar, Identity, IdentitySystem, ParseError, last_letter,
    letters_in_order, mul, parse_identity, parse_system, parse_word, render_identity,
    render_word,
)

__all__ = [
    "Axiom", "Symmetry", "Transitivity", "ProductOf", "BarOf", "SubstitutionOf",
    "Reflexive", "Justification", "Deduction", "VerificationReport", "TailCheck",
    "delta_basis", "verify_deduction", "check_tail_invariant", "parse_script",
    "load_script", "render_script", "render_justification", "ScriptError",
]


@dataclass(frozen=True)
class Axiom:
    pass


@dataclass(frozen=True)
class Symmetry:
    j: int


@dataclass(frozen=True)
class Transitivity:
    j: int
    k: int


@dataclass(frozen=True)
class ProductOf:
    j: int
    k: int


@dataclass(frozen=True)
class BarOf:
    j: int


@dataclass(frozen=True)
class SubstitutionOf:
    j: int
    sigma: tuple   # ((letter, Word), ...)

    def mapping(self) -> dict:
        return dict(self.sigma)


@dataclass(frozen=True)
class Reflexive:
    pass


Justification = Union[Axiom, Symmetry, Transitivity, ProductOf, BarOf, SubstitutionOf, Reflexive]


def _primes_upto(n: int) -> list:
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, int(p ** 0.5) + 1))]


def delta_basis(prime_bound: int) -> IdentitySystem:
    """The epigroup identity basis, with the power laws cut off at ``prime_bound``.

    Associativity is listed for completeness; it is trivial on flattened words.
    """
    if prime_bound < 2:
        raise ValueError("prime_bound must be at least 2")
    x, y, z = Atom("x"), Atom("y"), Atom("z")
    xb = Bar(x)
    idents = [
        Identity(mul(x, y, z), mul(x, y, z)),
        Identity(mul(Bar(mul(x, y)), x), mul(x, Bar(mul(y, x)))),
        Identity(mul(xb, xb, x), xb),
        Identity(mul(x, x, xb), Bar(xb)),
        Identity(Bar(mul(xb, x)), mul(xb, x)),
    ]
    for p in _primes_upto(prime_bound):
        idents.append(Identity(Bar(mul(*[x] * p)), mul(*[xb] * p)))
    return IdentitySystem(tuple(idents))


def _canonical(ident: Identity) -> Identity:
    names = letters_in_order(ident.lhs, ident.rhs)
    sigma = {a: Atom(f"v{i}") for i, a in enumerate(names)}
    return ident.substitute(sigma)


@dataclass(frozen=True)
class Deduction:
    axioms: IdentitySystem
    delta_bound: int
    steps: tuple        # ((Identity, Justification), ...)
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise ValueError("a deduction needs at least one step")

    @property
    def conclusion(self) -> Identity:
        return self.steps[-1][0]


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    delta_bound: int
    steps: int
    first_bad_step: Optional[int] = None
    reason: str = ""


class _Bad(Exception):
    pass


def _earlier(idx, i, steps):
    if not isinstance(idx, int) or not 0 <= idx < i:
        raise _Bad(f"step {idx} is not an earlier step")
    return steps[idx][0]


def _check_step(i, ident, just, d, axiom_keys):
    u, v = ident.lhs, ident.rhs
    steps = d.steps
    if isinstance(just, Axiom):
        key = ident if d.strict else _canonical(ident)
        if key not in axiom_keys:
            raise _Bad("not an axiom of the system or of the epigroup basis")
    elif isinstance(just, Reflexive):
        if u != v:
            raise _Bad("sides differ")
    elif isinstance(just, Symmetry):
        a = _earlier(just.j, i, steps)
        if not (u == a.rhs and v == a.lhs):
            raise _Bad(f"not step {just.j} with sides swapped")
    elif isinstance(just, Transitivity):
        a, b = _earlier(just.j, i, steps), _earlier(just.k, i, steps)
        if a.lhs != u:
            raise _Bad(f"left side differs from the left side of step {just.j}")
        if a.rhs != b.lhs:
            raise _Bad(f"steps {just.j} and {just.k} do not chain")
        if b.rhs != v:
            raise _Bad(f"right side differs from the right side of step {just.k}")
    elif isinstance(just, ProductOf):
        a, b = _earlier(just.j, i, steps), _earlier(just.k, i, steps)
        if not (u == mul(a.lhs, b.lhs) and v == mul(a.rhs, b.rhs)):
            raise _Bad(f"not the product of steps {just.j} and {just.k}")
    elif isinstance(just, BarOf):
        a = _earlier(just.j, i, steps)
        if not (u == Bar(a.lhs) and v == Bar(a.rhs)):
            raise _Bad(f"not the bar of step {just.j}")
    elif isinstance(just, SubstitutionOf):
        a = _earlier(just.j, i, steps)
        if a.substitute(just.mapping()) != ident:
            raise _Bad(f"not a substitution instance of step {just.j}")
    else:
        raise _Bad(f"unknown justification {just!r}")


def verify_deduction(d: Deduction) -> VerificationReport:
    pool = list(d.axioms) + list(delta_basis(d.delta_bound))
    axiom_keys = set(pool) if d.strict else {_canonical(a) for a in pool}
    for i, (ident, just) in enumerate(d.steps):
        try:
            _check_step(i, ident, just, d, axiom_keys)
        except _Bad as e:
            reason = f"no rule matches ({render_justification(just)}: {e})"
            return VerificationReport(False, d.delta_bound, len(d.steps), i, reason)
    return VerificationReport(True, d.delta_bound, len(d.steps))


@dataclass(frozen=True)
class TailCheck:
    holds: bool
    applicable: bool
    note: str = ""


def _has_tail_property(system) -> bool:
    return all(last_letter(a.lhs) == last_letter(a.rhs) for a in system)


def check_tail_invariant(system, d: Deduction) -> TailCheck:
    """If every axiom keeps its last letter, so must every step."""
    assert _has_tail_property(delta_basis(max(d.delta_bound, 2)))
    if not _has_tail_property(system):
        return TailCheck(True, False, "some axiom has different last letters on its two sides")
    bad = [i for i, (ident, _) in enumerate(d.steps)
           if last_letter(ident.lhs) != last_letter(ident.rhs)]
    if bad:
        return TailCheck(False, True, f"step {bad[0]} has different last letters")
    return TailCheck(True, True)


# -- scripts -----------------------------------------------------------------

class ScriptError(ValueError):
    pass


def render_justification(just) -> str:
    if isinstance(just, Axiom):
        return "axiom"
    if isinstance(just, Reflexive):
        return "refl"
    if isinstance(just, Symmetry):
        return f"sym {just.j}"
    if isinstance(just, Transitivity):
        return f"trans {just.j} {just.k}"
    if isinstance(just, ProductOf):
        return f"prod {just.j} {just.k}"
    if isinstance(just, BarOf):
        return f"bar {just.j}"
    if isinstance(just, SubstitutionOf):
        subs = ", ".join(f"{a}:={render_word(w)}" for a, w in just.sigma)
        return f"subst {just.j} {subs}"
    return repr(just)


_STEP_RE = re.compile(r"\s*(\d+)\s*\.\s*(.*?)\s*;\s*(.*?)\s*\Z")


def _parse_justification(text: str):
    parts = text.split(None, 2)
    if not parts:
        raise ScriptError("missing rule")
    head, args = parts[0], parts[1:]

    def ints(count):
        toks = " ".join(args).split()
        if len(toks) != count or not all(t.isdigit() for t in toks):
            raise ScriptError(f"'{head}' takes {count} step number(s)")
        return [int(t) for t in toks]

    if head == "axiom" and not args:
        return Axiom()
    if head == "refl" and not args:
        return Reflexive()
    if head == "sym":
        return Symmetry(*ints(1))
    if head == "trans":
        return Transitivity(*ints(2))
    if head == "prod":
        return ProductOf(*ints(2))
    if head == "bar":
        return BarOf(*ints(1))
    if head == "subst":
        if len(args) != 2 or not args[0].isdigit():
            raise ScriptError("usage: subst <j> <letter>:=<word>[, ...]")
        sigma = []
        for item in args[1].split(","):
            if ":=" not in item:
                raise ScriptError(f"bad substitution {item.strip()!r}")
            name, word = item.split(":=", 1)
            name = name.strip()
            if not re.fullmatch(r"[a-z][0-9]*", name):
                raise ScriptError(f"bad letter {name!r}")
            if name in dict(sigma):
                raise ScriptError(f"letter {name} substituted twice")
            sigma.append((name, parse_word(word)))
        return SubstitutionOf(int(args[0]), tuple(sigma))
    raise ScriptError(f"unknown rule {text!r}")


def parse_script(text: str, base_dir=None, strict: bool = False, delta_bound=None,
                 axioms: Optional[IdentitySystem] = None) -> Deduction:
    """Parse a proof script; ``axioms:`` paths resolve against ``base_dir``.

    An explicit ``axioms`` system overrides the header, whose file is then
    not read.
    """
    override = axioms
    axioms = IdentitySystem(())
    bound = 3
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("axioms:"):
                target = line[len("axioms:"):].strip()
                if target and target != "-" and override is None:
                    path = Path(target)
                    if base_dir is not None and not path.is_absolute():
                        path = Path(base_dir) / path
                    try:
                        axioms = parse_system(path.read_text())
                    except OSError as e:
                        raise ScriptError(f"cannot read axioms: {e}") from None
            elif line.startswith("delta_bound:"):
                bound = int(line[len("delta_bound:"):].strip())
            else:
                m = _STEP_RE.match(line)
                if not m:
                    raise ScriptError("expected '<n>. <word> = <word> ; <rule>'")
                if int(m.group(1)) != len(steps):
                    raise ScriptError(f"step numbered {m.group(1)}, expected {len(steps)}")
                steps.append((parse_identity(m.group(2)), _parse_justification(m.group(3))))
        except (ParseError, ValueError) as e:
            raise ScriptError(f"line {lineno}: {e}") from None
    if not steps:
        raise ScriptError("script has no steps")
    if delta_bound is not None:
        bound = delta_bound
    if override is not None:
        axioms = override
    return Deduction(axioms, bound, tuple(steps), strict)


def load_script(path, strict: bool = False, delta_bound=None) -> Deduction:
    path = Path(path)
    return parse_script(path.read_text(), path.parent, strict, delta_bound)


def render_script(d: Deduction, axioms_path: str = "-") -> str:
    out = [f"axioms: {axioms_path}", f"delta_bound: {d.delta_bound}"]
    for i, (ident, just) in enumerate(d.steps):
        out.append(f"{i}. {render_identity(ident)} ; {render_justification(just)}")
    return "\n".join(out) + "\n"
