import pytest
from hypothesis import given, settings

from epiworks import catalog as cat
from epiworks.model import eval_word
from epiworks.rewrite import (
    RULES, NoMatch, OneLetterNF, RewriteStep, apply_rule, factor_tail, nf_multiply,
    normalize_one_letter, oracle_check, render_trace, replay_step,
)
from epiworks.terms import Atom, Bar, enumerate_words, last_letter, mul, parse_word

from test_terms import words


@pytest.mark.parametrize("text,pq", [
    ("x", (1, 0)), ("x'", (0, 1)), ("x''", (2, 1)), ("(x x')'", (1, 1)),
    ("(x x x)'", (0, 3)), ("x' x", (1, 1)), ("x'' x'", (2, 2)), ("x'''", (0, 1)),
])
def test_pinned_forms(text, pq):
    nf, steps = normalize_one_letter(parse_word(text))
    assert (nf.p, nf.q) == pq
    assert all(replay_step(s) for s in steps)


def test_trace_is_a_chain():
    w = parse_word("(x' x)' x'' x")
    nf, steps = normalize_one_letter(w)
    assert steps[0].before == w
    assert steps[-1].after == nf.word()
    for a, b in zip(steps, steps[1:]):
        assert a.after == b.before
    assert render_trace(steps).splitlines()[0] == "(x' x)' x'' x  --[bar-lt]-->  (x' x)' x x x' x"


def test_nf_is_fixed_point():
    for p in range(4):
        for q in range(4):
            if p + q:
                nf, steps = normalize_one_letter(OneLetterNF(p, q).word())
                assert (nf.p, nf.q, steps) == (p, q, [])


def test_other_letters():
    nf, _ = normalize_one_letter(parse_word("(y y)'"))
    assert (nf.letter, nf.p, nf.q) == ("y", 0, 2)
    with pytest.raises(ValueError):
        normalize_one_letter(parse_word("x y"))


def test_multiply():
    cases = [((1, 1), (1, 1), (2, 2)), ((0, 2), (1, 0), (0, 1)), ((3, 0), (2, 0), (5, 0))]
    for a, b, want in cases:
        nf, _ = nf_multiply(OneLetterNF(*a), OneLetterNF(*b))
        assert (nf.p, nf.q) == want
    with pytest.raises(ValueError):
        nf_multiply(OneLetterNF(1, 0, "x"), OneLetterNF(1, 0, "y"))


def test_rules_refuse_bad_input():
    with pytest.raises(NoMatch):
        RULES["R1"](parse_word("x' x' x' x"))
    with pytest.raises(NoMatch):
        RULES["R2"](parse_word("x' x"))
    with pytest.raises(NoMatch):
        RULES["bar-gt"](parse_word("(x x')'"))
    with pytest.raises(NoMatch):
        apply_rule(parse_word("x y"), "R1", (), (0, 5))


def test_tampered_step_fails_replay():
    nf, steps = normalize_one_letter(parse_word("x'' x"))
    s = steps[0]
    assert replay_step(s)
    assert not replay_step(RewriteStep(s.before, mul(s.after, Atom("x")), s.rule, s.path, s.span))
    assert not replay_step(RewriteStep(s.before, s.after, "bar-eq", s.path, s.span))
    assert not replay_step(RewriteStep(s.before, s.after, "nope", s.path, s.span))


def test_every_rule_is_sound():
    models = cat.oracle_models()
    samples = {
        "R1": "x' x' x x x", "R2": "x' x' x' x", "bar-power": "(x x x x)'",
        "bar-gt": "(x x x x')'", "bar-eq": "(x x x' x')'", "bar-lt": "(x x' x' x')'",
        "bar-split": "(x y')'",
    }
    for rule, text in samples.items():
        w = parse_word(text)
        assert oracle_check(w, RULES[rule](w), models).ok, rule


def test_normalizer_exhaustive_weight_5():
    models = cat.oracle_models()
    for w in enumerate_words("x", 5):
        nf, steps = normalize_one_letter(w)
        assert oracle_check(w, nf.word(), models).ok
        assert all(replay_step(s) for s in steps)


@settings(max_examples=80, deadline=None)
@given(words("x", 10))
def test_normalizer_random(w):
    nf, _ = normalize_one_letter(w)
    P = cat.make_cyclic(3, 2)
    for a in range(len(P)):
        assert eval_word(P, w, {"x": a}) == eval_word(P, nf.word(), {"x": a})


def test_factor_tail():
    u = parse_word("x (y z)'")
    u_star, z, steps = factor_tail(u)
    assert u_star == parse_word("x (y z y z)' y")
    assert z == "z"
    assert [s.rule for s in steps] == ["bar-split"]
    assert factor_tail(Atom("x")) == (None, "x", [])
    assert factor_tail(parse_word("x y")) == (Atom("x"), "y", [])


@settings(max_examples=60, deadline=None)
@given(words("xyz", 6))
def test_factor_tail_random(u):
    u_star, z, steps = factor_tail(u)
    assert z == last_letter(u)
    factored = Atom(z) if u_star is None else mul(u_star, Atom(z))
    assert all(replay_step(s) for s in steps)
    assert oracle_check(u, factored, [cat.make_P(), cat.make_cyclic(2, 2)]).ok


def test_oracle_reports_separation():
    rep = oracle_check(Bar(Atom("x")), Atom("x"), [cat.make_Z(2), cat.make_C()])
    assert not rep.ok
    (S, witness, values), = rep.separations
    assert S.name == "C"
    assert witness == {"x": S.index_of("a")}
