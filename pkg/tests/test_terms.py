import pytest
from hypothesis import given, strategies as st

from epiworks.terms import (
    Atom, Bar, Identity, ParseError, Product, analyze_word, classify_identity,
    enumerate_words, expand_zero, fresh_letters, last_letter, letters_in_order,
    mul, parse_identities, parse_identity, parse_system, parse_word, power,
    render_word, reverse_word, substitute, weight,
)

x, y, z = Atom("x"), Atom("y"), Atom("z")


def words(letters="xyz", max_leaves=6):
    atoms = st.sampled_from([Atom(a) for a in letters])
    return st.recursive(
        atoms,
        lambda inner: st.one_of(
            st.builds(Bar, inner),
            st.lists(inner, min_size=2, max_size=3).map(lambda ws: mul(*ws)),
        ),
        max_leaves=max_leaves,
    )


def test_parse_basic():
    assert parse_word("x") == x
    assert parse_word("x y z") == Product((x, y, z))
    assert parse_word("xy") == parse_word("x y")
    assert parse_word("x'") == Bar(x)
    assert parse_word("x''") == Bar(Bar(x))
    assert parse_word("(x y)'") == Bar(Product((x, y)))
    assert parse_word("x^3") == Product((x, x, x))
    assert parse_word("x'^2") == Product((Bar(x), Bar(x)))
    assert parse_word("(x^2)'") == Bar(Product((x, x)))
    assert parse_word("x1 x2") == Product((Atom("x1"), Atom("x2")))


def test_products_flatten():
    assert parse_word("(x y) z") == parse_word("x (y z)") == Product((x, y, z))
    assert mul(mul(x, y), mul(z, x)) == Product((x, y, z, x))
    assert mul(x) == x


@pytest.mark.parametrize("text", ["", "x (", "x)", "x^0", "'x", "X", "x ^", "(x y"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_word(text)


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_identity("x y = x )")
    assert info.value.pos == 8


def test_render():
    for text in ["x", "x y", "x'", "(x y)'", "x''", "x (y z)'' x'", "((x y)' z)'"]:
        assert render_word(parse_word(text)) == text


@given(words())
def test_render_round_trip(w):
    assert parse_word(render_word(w)) == w


def test_weight_and_length():
    s = analyze_word(parse_word("x (y x)' y'"))
    assert s.weight == 3 + 2
    assert s.length == float("inf")
    assert s.content == frozenset("xy")
    assert s.last_letter == "y"
    s = analyze_word(parse_word("x y x"))
    assert (s.weight, s.length) == (2, 3)
    assert s.occurrences == {"x": 2, "y": 1}
    assert weight(parse_word("((x y)' z)'")) == 4


def test_last_letter_through_bars():
    assert last_letter(parse_word("x (y z)''")) == "z"
    assert last_letter(parse_word("(x y')'")) == "y"


def test_letters_in_order():
    assert letters_in_order(parse_word("y x'"), parse_word("z y")) == ["y", "x", "z"]


@given(words(), words(), words())
def test_substitution_composes(w, a, b):
    s1 = {"x": a}
    s2 = {"y": b}
    composed = {"x": substitute(a, s2), "y": b}
    assert substitute(substitute(w, s1), s2) == substitute(w, composed)


@given(words())
def test_reverse_is_involution(w):
    assert reverse_word(reverse_word(w)) == w
    assert weight(reverse_word(w)) == weight(w)


@given(words(), words())
def test_flag_implications(u, v):
    f = classify_identity(Identity(u, v))
    if f.is_balanced:
        assert f.is_semigroup and f.is_homotypical
    assert f.is_homotypical != f.is_heterotypical
    assert sum([f.is_semigroup, f.is_mixed, f.is_strictly_unary]) == 1
    if f.is_permutational:
        assert f.is_balanced


def test_classify_examples():
    f = classify_identity(parse_identity("x y = y x"))
    assert f.is_balanced and f.is_permutational
    f = classify_identity(parse_identity("x = x x"))
    assert f.is_semigroup and not f.is_balanced and f.is_homotypical
    f = classify_identity(parse_identity("x y = x"))
    assert f.is_heterotypical
    assert classify_identity(parse_identity("x' = x x")).is_mixed
    assert classify_identity(parse_identity("x' x = x x'")).is_strictly_unary


def test_zero_identity():
    ids = parse_identities("x y = 0")
    assert ids == [Identity(parse_word("x y z"), parse_word("x y")),
                   Identity(parse_word("z x y"), parse_word("x y"))]
    a, b = expand_zero(parse_word("x z"))
    assert a.lhs == parse_word("x z z1")
    with pytest.raises(ParseError):
        parse_identity("x = 0")


def test_fresh_letters_skip_used():
    it = fresh_letters({"z1", "z3"})
    assert [next(it) for _ in range(3)] == ["z2", "z4", "z5"]


def test_parse_system_comments():
    s = parse_system("# header\nx y = y x\n\nx = x x  # idempotent\n")
    assert len(s) == 2
    assert s.letters() == frozenset("xy")
    with pytest.raises(ParseError, match="line 2"):
        parse_system("x = x\nx = = y\n")


def _closure(letters, k):
    # independent generation: close the atoms under product and bar up to weight k
    found = {Atom(a) for a in letters}
    while True:
        new = set(found)
        for a in found:
            if weight(a) < k:
                new.add(Bar(a))
            for b in found:
                if weight(a) + weight(b) + 1 <= k:
                    new.add(mul(a, b))
        if new == found:
            return found
        found = new


@pytest.mark.parametrize("letters,k", [("x", 4), ("xy", 3)])
def test_enumeration_matches_closure(letters, k):
    got = enumerate_words(letters, k)
    assert len(got) == len(set(got))
    assert set(got) == _closure(letters, k)


def test_enumeration_counts():
    counts = [len(enumerate_words("x", k)) for k in range(7)]
    assert counts == [1, 3, 8, 22, 64, 196, 625]
    assert [len(enumerate_words("xyz", k)) for k in range(4)] == [3, 15, 72, 372]


def test_power():
    assert power(x, 1) == x
    assert power(mul(x, y), 2) == parse_word("x y x y")
    with pytest.raises(ValueError):
        power(x, 0)
