import itertools

import pytest

from epiworks import catalog as cat
from epiworks.model import FiniteEpigroup, nil_profile, render_table, satisfies, satisfies_system
from epiworks.terms import parse_identity, parse_system


def brute_count(n):
    count = 0
    for flat in itertools.product(range(n), repeat=n * n):
        m = [flat[i * n:(i + 1) * n] for i in range(n)]
        if all(m[m[a][b]][c] == m[a][m[b][c]] for a in range(n) for b in range(n) for c in range(n)):
            count += 1
    return count


@pytest.mark.parametrize("n", [1, 2, 3])
def test_labeled_counts_match_brute_force(n):
    assert sum(1 for _ in cat.enumerate_semigroups(n)) == brute_count(n)


def test_known_counts():
    assert [sum(1 for _ in cat.enumerate_semigroups(n)) for n in (1, 2, 3)] == [1, 8, 113]
    assert [sum(1 for _ in cat.enumerate_semigroups(n, up_to_iso=True)) for n in (1, 2, 3)] == [1, 5, 24]


def test_order4_needs_opt_in():
    with pytest.raises(ValueError):
        list(cat.enumerate_semigroups(4))


def test_iso_reps_are_distinct_up_to_renaming():
    reps = list(cat.enumerate_semigroups(3, up_to_iso=True))
    seen = set()
    for S in reps:
        forms = set()
        for perm in itertools.permutations(range(3)):
            inv = {p: i for i, p in enumerate(perm)}
            forms.add(tuple(tuple(perm[S.mult[inv[a]][inv[b]]] for b in range(3)) for a in range(3)))
        assert not forms & seen
        seen |= forms


def test_P_and_C():
    P, C = cat.make_P(), cat.make_C()
    assert isinstance(P, FiniteEpigroup)
    assert satisfies_system(P, parse_system(cat.P_SYSTEM)).holds
    assert satisfies_system(C, parse_system(cat.C_SYSTEM)).holds
    assert not satisfies(P, parse_identity("x y = y x")).holds


def test_named():
    assert render_table(cat.make_named("P")) == render_table(cat.make_P())
    assert cat.make_named("P-dual").name == "P-dual"
    assert len(cat.make_named("N(3)")) == 4
    assert len(cat.make_named("Z(5)")) == 5
    assert len(cat.make_named("cyclic(2,3)")) == 4
    with pytest.raises(ValueError):
        cat.make_named("Q")


@pytest.mark.parametrize("k,m", [(2, 1), (2, 2), (3, 2), (4, 2), (3, 3)])
def test_free_nil(k, m):
    F = cat.make_free_nil(k, m)
    assert satisfies_system(F, parse_system(cat.free_nil_system(k))).holds
    prof = nil_profile(F)
    assert prof.is_nil
    # squares vanish, so a nonzero product uses distinct generators, at most k-1 of them
    assert prof.nilpotency_degree == min(k, m + 1)


def test_default_catalog():
    names = list(cat.default_catalog())
    assert names == ["P", "P-dual", "C", "T", "N3", "Z3", "F3_2"]


def test_oracle_models_sizes():
    assert len(cat.oracle_models()) == 69
    assert len(cat.oracle_models(labeled=True)) == 161
