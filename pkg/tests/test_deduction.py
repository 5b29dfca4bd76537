import pytest

from epiworks import catalog as cat
from epiworks.acceptance import CORPUS, corpus, mutations
from epiworks.deduction import (
    Axiom, Deduction, ScriptError, SubstitutionOf, check_tail_invariant, delta_basis,
    load_script, parse_script, render_script, verify_deduction,
)
from epiworks.model import satisfies_system
from epiworks.terms import IdentitySystem, parse_system, render_identity

IDEM = """\
axioms: idem.eqs
delta_bound: 3
0. x = x x ; axiom
1. x x = x x x x ; prod 0 0
2. x = x x x x ; trans 0 1
"""


def test_delta_basis():
    basis = delta_basis(7)
    assert len(basis) == 5 + 4
    assert render_identity(basis[-1]) == "(x x x x x x x)' = x' x' x' x' x' x' x'"
    assert len(delta_basis(2)) == 6
    with pytest.raises(ValueError):
        delta_basis(1)


def test_basis_holds_in_every_epigroup():
    for S in cat.oracle_models():
        assert satisfies_system(S, delta_basis(5)).holds, S.name


def test_T_satisfies_basis_but_is_not_an_epigroup():
    assert satisfies_system(cat.make_T(), delta_basis(7)).holds


def test_load_script(tmp_path):
    (tmp_path / "idem.eqs").write_text("x = x x\n")
    (tmp_path / "p.prf").write_text(IDEM)
    d = load_script(tmp_path / "p.prf")
    assert len(d.axioms) == 1 and d.delta_bound == 3
    rep = verify_deduction(d)
    assert rep.valid and rep.steps == 3
    assert render_identity(d.conclusion) == "x = x x x x"
    assert render_script(d, "idem.eqs") == IDEM


def test_first_bad_step_and_reason():
    d = parse_script(IDEM.replace("trans 0 1", "trans 1 0"), axioms=parse_system("x = x x"))
    rep = verify_deduction(d)
    assert not rep.valid and rep.first_bad_step == 2
    assert rep.reason.startswith("no rule matches")


def test_axioms_up_to_renaming():
    sigma = parse_system("x = x x")
    d = parse_script("0. y = y y ; axiom\n", axioms=sigma)
    assert verify_deduction(d).valid
    d = parse_script("0. y = y y ; axiom\n", axioms=sigma, strict=True)
    assert not verify_deduction(d).valid
    # renaming must be a bijection
    d = parse_script("0. x y = y x ; axiom\n", axioms=parse_system("x y = y z"))
    assert not verify_deduction(d).valid


def test_delta_bound_matters():
    text = "0. (x x x)' = x' x' x' ; axiom\n"
    assert not verify_deduction(parse_script(text, delta_bound=2)).valid
    assert verify_deduction(parse_script(text, delta_bound=3)).valid


def test_forward_reference_rejected():
    d = parse_script("0. x = x ; refl\n1. x = x ; sym 1\n")
    rep = verify_deduction(d)
    assert rep.first_bad_step == 1


def test_substitution_parse():
    d = parse_script("0. x y = y x ; axiom\n1. x' y = y x' ; subst 0 x:=x'\n",
                     axioms=parse_system("x y = y x"))
    assert isinstance(d.steps[1][1], SubstitutionOf)
    assert verify_deduction(d).valid


@pytest.mark.parametrize("text", [
    "", "0. x = x\n", "0. x = x ; frob\n", "1. x = x ; refl\n", "0. x = x ; sym\n",
    "0. x = x ; subst 0 X:=y\n", "0. x = x ; subst 0 x:=y, x:=z\n", "0. x = ( ; refl\n",
    "axioms: /nonexistent/file.eqs\n0. x = x ; refl\n",
])
def test_script_errors(text):
    with pytest.raises(ScriptError):
        parse_script(text)


def test_corpus_valid_and_mutants_rejected():
    for d in corpus():
        assert verify_deduction(d).valid
        for i, m in mutations(d):
            rep = verify_deduction(m)
            assert not rep.valid and rep.first_bad_step == i


def test_corpus_shape():
    decks = corpus()
    assert len(decks) >= 5
    assert any(isinstance(j, Axiom) and not len(d.axioms) for d in decks for _, j in d.steps)
    assert len(CORPUS) == len(decks)


def test_tail_invariant():
    sigma = parse_system("x = x x")
    d = parse_script(IDEM, axioms=sigma)
    t = check_tail_invariant(sigma, d)
    assert t.holds and t.applicable
    comm = parse_system("x y = y x")
    d = parse_script("0. x y = y x ; axiom\n", axioms=comm)
    t = check_tail_invariant(comm, d)
    assert t.holds and not t.applicable


def test_tail_invariant_over_corpus():
    for d in corpus():
        t = check_tail_invariant(d.axioms, d)
        assert t.holds


def test_empty_deduction_rejected():
    with pytest.raises(ValueError):
        Deduction(IdentitySystem(()), 3, ())
