"""Acceptance criteria as runnable checks.

Every criterion returns a dict ``{id, title, passed, detail}``.  Nothing
time-dependent goes into the result, so two runs give identical JSON.
"""

from __future__ import annotations

import json
import os
import random
import subprocess
import sys
import tempfile
from pathlib import Path

from . import catalog as cat
from .deduction import (
    Axiom, BarOf, ProductOf, Reflexive, SubstitutionOf, Symmetry, Transitivity,
    Deduction, delta_basis, parse_script, verify_deduction,
)
from .identities import (
    degree_identity, equals_varE, find_degree_witness, is_variety_class, transform_mn,
)
from .model import (
    ModelBundle, cyclic_data, derive_epigroup, epigroup_law_violations,
    gr_right_ideal, satisfies, satisfies_system,
)
from .rewrite import factor_tail, normalize_one_letter, replay_step
from .terms import (
    Atom, Bar, Identity, IdentitySystem, enumerate_words, last_letter, mul,
    parse_identity, parse_system, parse_word, power,
)

RANDOM_SEED = 20150101


def _result(cid, title, failures, detail_ok):
    passed = not failures
    detail = detail_ok if passed else "; ".join(failures[:5]) + (f" (+{len(failures) - 5} more)" if len(failures) > 5 else "")
    return {"id": cid, "title": title, "passed": passed, "detail": detail}


def law_models() -> list:
    models = [cat.make_P(), cat.make_C()]
    models += [cat.make_N(k) for k in range(1, 6)]
    models += [cat.make_Z(n) for n in range(1, 7)]
    models += [cat.make_cyclic(i, p) for i in range(1, 5) for p in range(1, 5)]
    models += [cat.make_free_nil(k, m) for k in range(2, 5) for m in range(1, 4)]
    for order in (1, 2, 3):
        models += list(cat.enumerate_semigroups(order))
    return models


def criterion_1():
    failures = []
    models = law_models()
    for S in models:
        for law, x in epigroup_law_violations(S, max_n=5):
            failures.append(f"{S.name}: {law} fails at {S.elements[x]}")
    return _result(1, "epigroup law suite", failures, f"0 violations in {len(models)} models")


def criterion_2():
    failures = []
    models = law_models()
    for S in models:
        for x in range(len(S)):
            c = cyclic_data(S, x)
            xb = S.unary[x]
            if not (S.mult[x][xb] == S.mult[xb][x] == c.omega):
                failures.append(f"{S.name}: x x' = x' x = omega fails at {S.elements[x]}")
            if S.mult[xb][c.omega] != xb:
                failures.append(f"{S.name}: x' omega = x' fails at {S.elements[x]}")
            if S.unary[S.unary[xb]] != xb:
                failures.append(f"{S.name}: x''' = x' fails at {S.elements[x]}")
    x = Atom("x")
    periodic_checks = 0
    for order in (1, 2, 3):
        for S in cat.enumerate_semigroups(order):
            for p in range(1, 5):
                for q in range(1, 5):
                    if not satisfies(S, Identity(power(x, p), power(x, p + q))).holds:
                        continue
                    periodic_checks += 1
                    if not satisfies(S, Identity(Bar(x), power(x, (p + 1) * q - 1))).holds:
                        failures.append(f"{S.name}: x' = x^{(p + 1) * q - 1} fails under x^{p} = x^{p + q}")
    C = cat.make_C()
    if not satisfies(C, Identity(power(x, 2), power(x, 3))).holds:
        failures.append("C should satisfy x^2 = x^3")
    simpler = satisfies(C, Identity(Bar(x), x))     # p = 2, q = 1, pq - 1 = 1
    a = C.index_of("a")
    if simpler.holds or simpler.witness != {"x": a} or C.unary[a] != C.index_of("0"):
        failures.append("C should refute x' = x at x = a (a' = 0)")
    return _result(2, "pseudoinversion correctness", failures,
                   f"{len(models)} models pointwise; {periodic_checks} periodic instances; "
                   "C satisfies x^2 = x^3 but not x' = x (a' = 0)")


def one_letter_sample(count: int = 1000, max_weight: int = 9, seed: int = RANDOM_SEED) -> list:
    pool = [w for w in enumerate_words("x", max_weight)]
    return random.Random(seed).sample(pool, count)


def criterion_3():
    failures = []
    pinned = {"x'": (0, 1), "x''": (2, 1), "(x x')'": (1, 1), "(x x x)'": (0, 3)}
    for text, pq in pinned.items():
        nf, _ = normalize_one_letter(parse_word(text))
        if (nf.p, nf.q) != pq:
            failures.append(f"{text} -> ({nf.p},{nf.q}), expected {pq}")
    words = enumerate_words("x", 6) + one_letter_sample()
    bundle = ModelBundle(cat.oracle_models(), ["x"])
    for w in words:
        nf, steps = normalize_one_letter(w)
        if not all(replay_step(s) for s in steps):
            failures.append(f"trace of {w} does not replay")
        lv, rv = bundle.evaluate(w), bundle.evaluate(nf.word())
        for S, wit, _ in bundle.separations(lv, rv):
            failures.append(f"{w} != {nf} in {S.name} at x={S.elements[wit['x']]}")
    return _result(3, "normalizer soundness", failures,
                   f"{len(words)} words x {len(bundle.models)} models, pinned forms match")


def criterion_4():
    failures = []
    words = enumerate_words("xyz", 5)
    bundle = ModelBundle(cat.oracle_models(), ["x", "y", "z"])
    for u in words:
        u_star, z, _ = factor_tail(u)
        factored = Atom(z) if u_star is None else mul(u_star, Atom(z))
        if z != last_letter(u) or last_letter(factored) != last_letter(u):
            failures.append(f"{u}: tail letter not preserved")
        cache = {}
        for S, wit, _ in bundle.separations(bundle.evaluate(u, cache), bundle.evaluate(factored, cache)):
            failures.append(f"{u} != {factored} in {S.name}")
    return _result(4, "tail factorization", failures,
                   f"{len(words)} words x {len(bundle.models)} models")


def criterion_5():
    failures = []
    P, C = cat.make_P(), cat.make_C()
    e, a, z = (P.index_of(n) for n in ("e", "a", "0"))
    if not (P.unary[e] == e and P.unary[a] == z):
        failures.append("P: expected e' = e, a' = 0")
    for S in (P, C):
        if S.group_elements != {S.index_of("e"), S.index_of("0")}:
            failures.append(f"{S.name}: Gr S != {{e, 0}}")
        r = gr_right_ideal(S)
        if r.holds or r.witness != (S.index_of("e"), S.index_of("a")):
            failures.append(f"{S.name}: right-ideal check should fail with witness (e, a)")
    if not satisfies_system(P, parse_system(cat.P_SYSTEM)).holds:
        failures.append("P should satisfy x y = x x y, x x y y = y y x x")
    if not satisfies_system(C, parse_system(cat.C_SYSTEM)).holds:
        failures.append("C should satisfy x x = x x x, x y = y x")
    r = satisfies(P, parse_identity("x1 x2 = (x1 x2)''"))
    if r.holds or r.witness != {"x1": e, "x2": a}:
        failures.append("P should refute x1 x2 = (x1 x2)'' with witness (e, a)")
    return _result(5, "P/C structural facts", failures, "all facts confirmed")


def criterion_6():
    failures = []
    comm = parse_system("x y = y x")
    idem = parse_system("x = x x")
    if is_variety_class(comm).value:
        failures.append("{x y = y x} should not define a variety")
    if not is_variety_class(idem).value or equals_varE(idem).value:
        failures.append("{x = x x}: expected variety, not var_E-coincident")
    T = cat.make_T()
    theory = IdentitySystem(tuple(idem) + tuple(delta_basis(7)))
    if not satisfies_system(T, theory).holds:
        failures.append("T should satisfy x = x x and the epigroup basis (primes <= 7)")
    _, mismatches = derive_epigroup(T)
    if mismatches != [T.index_of("e")]:
        failures.append("T's declared unary should differ from pseudoinversion exactly at e")
    mixed = ["x' = x x x", "x' = x x", "x y' = x y", "x y = (x y)' y", "x x' = x"]
    for text in mixed:
        s = parse_system(text)
        if not (is_variety_class(s).value and equals_varE(s).value):
            failures.append(f"mixed system {{{text}}} should get both verdicts true")
        s2 = IdentitySystem(tuple(comm) + tuple(s))
        if not (is_variety_class(s2).value and equals_varE(s2).value):
            failures.append(f"commutativity plus {{{text}}} should get both verdicts true")
    return _result(6, "classification verdicts", failures, "verdicts and T counterexample confirmed")


def criterion_7():
    failures = []
    got = find_degree_witness(cat.make_P(), 3)
    if got is None or (got.n, got.i, got.j) != (2, 1, 1):
        failures.append(f"P: expected (2,1,1), got {got}")
    got = find_degree_witness(cat.make_Z(3), 1)
    if got is None or (got.n, got.i, got.j) != (1, 1, 1):
        failures.append(f"Z(3): expected (1,1,1), got {got}")
    F = cat.make_free_nil(3, 2)
    got = find_degree_witness(F, 3)
    if got is None or got.n != 3:
        failures.append(f"free F3 on 2 letters: expected n = 3, got {got}")
    if find_degree_witness(F, 2) is not None:
        failures.append("free F3 on 2 letters: expected none at n_max = 2")
    for n in (1, 2, 3):
        G = cat.make_free_nil(n + 1, n)
        for i in range(1, n + 1):
            for j in range(i, n + 1):
                if satisfies(G, degree_identity(n, i, j)).holds:
                    failures.append(f"free F{n + 1} on {n} letters satisfies the degree identity ({n},{i},{j})")
    return _result(7, "degree witnesses", failures, "all witnesses as expected")


def criterion_8():
    failures = []
    systems = {"commutativity": parse_system("x y = y x"), "x = x x": parse_system("x = x x"),
               "C-system": parse_system(cat.C_SYSTEM)}
    models = [S for order in (1, 2, 3) for S in cat.enumerate_semigroups(order)]
    implications = 0
    for S in models:
        for label, sigma in systems.items():
            if not satisfies_system(S, sigma).holds:
                continue
            for m in range(3):
                for n in range(3):
                    implications += 1
                    if not satisfies_system(S, transform_mn(sigma, m, n)).holds:
                        failures.append(f"{S.name} satisfies {label} but not its ({m},{n}) transform")
    return _result(8, "transformation shadow", failures,
                   f"{implications} implications checked over {len(models)} epigroups")


# -- deductions --------------------------------------------------------------

CORPUS = [
    ("x = x x", 3, """\
0. x = x x ; axiom
1. x x = x x x x ; prod 0 0
2. x = x x x x ; trans 0 1
"""),
    ("", 2, """\
0. (x x)' = x' x' ; axiom
"""),
    ("x y = y x", 3, """\
0. x y = y x ; axiom
1. x' y = y x' ; subst 0 x:=x'
2. (x' y)' = (y x')' ; bar 1
3. (y x')' = (x' y)' ; sym 2
"""),
    ("", 3, """\
0. x' x' x = x' ; axiom
1. x' = x' x' x ; sym 0
2. y = y ; refl
3. x' y = x' x' x y ; prod 1 2
4. (x x)' (x x)' x x = (x x)' ; subst 0 x:=x x
"""),
    ("x y = x x y", 3, """\
0. x y = x x y ; axiom
1. x x y = x y ; sym 0
2. x y z = x x y z ; subst 0 y:=y z
3. x x y = x x x y ; subst 0 x:=x, y:=x y
4. x y = x x x y ; trans 0 3
"""),
    ("x = x x", 5, """\
0. y = y y ; axiom
1. y' = (y y)' ; bar 0
2. (x x)' = x' x' ; axiom
3. (y y)' = y' y' ; subst 2 x:=y
4. y' = y' y' ; trans 1 3
5. (x^5)' = x'^5 ; axiom
"""),
    ("", 2, """\
0. (x x)' = x' x' ; axiom
1. x' x' x = x' ; axiom
2. (y y)' = y' y' ; subst 0 x:=y
3. y = y ; refl
4. (y y)' y = y' y' y ; prod 2 3
5. y' y' y = y' ; subst 1 x:=y
6. (y y)' y = y' ; trans 4 5
"""),
]


def corpus() -> list:
    return [parse_script(text, delta_bound=bound, axioms=parse_system(ax)) for ax, bound, text in CORPUS]


FRESH = Atom("q9")


def _mutated_justifications(i, just):
    out = []
    if isinstance(just, Axiom):
        out.append(Reflexive())
    elif isinstance(just, Reflexive):
        out.append(Axiom())
    elif isinstance(just, Symmetry):
        out += [Symmetry(i), BarOf(just.j)]
    elif isinstance(just, Transitivity):
        out += [Transitivity(just.j, i), Transitivity(just.k, just.j) if just.j != just.k else Symmetry(just.j)]
    elif isinstance(just, ProductOf):
        out += [ProductOf(just.j, i), Transitivity(just.j, just.k)]
    elif isinstance(just, BarOf):
        out += [BarOf(i), Symmetry(just.j)]
    elif isinstance(just, SubstitutionOf):
        sigma = tuple((a, mul(w, FRESH)) for a, w in just.sigma)
        out += [SubstitutionOf(i, just.sigma), SubstitutionOf(just.j, sigma)]
    return out


def mutations(d: Deduction):
    """Every single-step mutation: (step index, mutated deduction)."""
    for i, (ident, just) in enumerate(d.steps):
        variants = [(Identity(mul(ident.lhs, FRESH), ident.rhs), just),
                    (Identity(ident.lhs, mul(ident.rhs, FRESH)), just)]
        variants += [(ident, j) for j in _mutated_justifications(i, just)]
        for step in variants:
            steps = list(d.steps)
            steps[i] = step
            yield i, Deduction(d.axioms, d.delta_bound, tuple(steps), d.strict)


def criterion_9():
    failures = []
    decks = corpus()
    models = cat.oracle_models() + [cat.make_T()]
    n_mut = 0
    for num, d in enumerate(decks):
        rep = verify_deduction(d)
        if not rep.valid:
            failures.append(f"corpus script {num} rejected at step {rep.first_bad_step}: {rep.reason}")
            continue
        for i, mutant in mutations(d):
            n_mut += 1
            r = verify_deduction(mutant)
            if r.valid or r.first_bad_step != i:
                failures.append(f"script {num}: mutation at step {i} not rejected there")
        theory = IdentitySystem(tuple(d.axioms) + tuple(delta_basis(d.delta_bound)))
        for S in models:
            if satisfies_system(S, theory).holds and not satisfies(S, d.conclusion).holds:
                failures.append(f"script {num}: conclusion fails in {S.name}")
    uses_basis = any(isinstance(j, Axiom) and len(d.axioms) == 0 for d in decks for _, j in d.steps)
    uses_subst = any(isinstance(j, SubstitutionOf) for d in decks for _, j in d.steps)
    if len(decks) < 5 or not uses_basis or not uses_subst:
        failures.append("corpus must have >= 5 scripts incl. a basis axiom and a substitution")
    return _result(9, "deduction verifier", failures,
                   f"{len(decks)} scripts accepted, {n_mut} mutations rejected, conclusions sound")


# -- determinism -------------------------------------------------------------

def _write_inputs(workdir: Path) -> None:
    (workdir / "comm.eqs").write_text("x y = y x\n")
    (workdir / "idem.eqs").write_text("x = x x\n")
    (workdir / "proof.prf").write_text("axioms: idem.eqs\ndelta_bound: 3\n" + CORPUS[0][2])


def _cli_runs(workdir: Path) -> list:
    models = workdir / "models"
    return [
        ["catalog", "--write-dir", str(models)],
        ["check", str(models / "P.tbl"), "x1 x2 = (x1 x2)''"],
        ["pinv", str(models / "C.tbl")],
        ["profile", str(models / "P.tbl")],
        ["degree", str(models / "P.tbl"), "--max", "3"],
        ["normalize", "(x' x)' x'' x"],
        ["factor", "x (y z)''"],
        ["classify", str(workdir / "comm.eqs")],
        ["transform", str(workdir / "comm.eqs"), "-m", "1", "-n", "2"],
        ["deduce", str(workdir / "proof.prf"), "--check-models", str(models)],
        ["acceptance", "--only", "1,2,3,4,5,6,7,8,9"],
    ]


def criterion_10(hash_seeds=("0", "1")):
    failures = []
    outputs = []
    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        _write_inputs(tmp)
        for seed in hash_seeds:
            env = dict(os.environ, PYTHONHASHSEED=seed)
            run = []
            for argv in _cli_runs(tmp):
                proc = subprocess.run([sys.executable, "-m", "epiworks", *argv, "--json"],
                                      capture_output=True, env=env, cwd=tmp)
                text = proc.stdout.decode().replace(str(tmp), "<tmp>")
                try:
                    json.loads(text)
                except ValueError:
                    failures.append(f"{argv[0]}: output is not JSON")
                run.append(text)
            outputs.append(run)
    for argv, a, b in zip(_cli_runs(Path("<tmp>")), outputs[0], outputs[1]):
        if not a.strip():
            failures.append(f"{argv[0]}: empty output")
        elif a != b:
            failures.append(f"{argv[0]} output differs between runs")
    return _result(10, "determinism", failures,
                   f"{len(outputs[0])} JSON reports byte-identical across {len(hash_seeds)} runs")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_all(only=None) -> list:
    return [c() for i, c in enumerate(CRITERIA, 1) if only is None or i in only]
