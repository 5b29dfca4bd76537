"""Command-line interface.

Exit codes: 0 success, 1 a checked property failed (a witness was found,
a deduction was rejected, no certificate exists), 2 bad input,
3 resource guard tripped.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog as cat
from .deduction import check_tail_invariant, delta_basis, load_script, verify_deduction
from .identities import equals_varE, find_degree_witness, is_variety_class, transform_mn
from .model import (
    DEFAULT_BOUND, ResourceGuardError, TableError, derive_epigroup,
    epigroup_profile, gr_right_ideal, load_table, nil_profile, render_table,
    satisfies_system,
)
from .rewrite import factor_tail, normalize_one_letter
from .terms import (
    IdentitySystem, ParseError, classify_identity, parse_identities, parse_system,
    parse_word, render_identity, render_word,
)

SCHEMA = 1

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class InputError(Exception):
    pass


def _read_system(arg: str) -> IdentitySystem:
    """An identity given inline, or a path to a system file."""
    path = Path(arg)
    if "=" not in arg and path.is_file():
        return parse_system(path.read_text())
    if "=" not in arg:
        raise InputError(f"{arg!r} is neither an identity nor a readable file")
    return IdentitySystem(tuple(parse_identities(arg)))


def _names(S, assignment):
    return {k: S.elements[v] for k, v in assignment.items()}


def _epigroup(S):
    E, mismatches = derive_epigroup(S)
    return E, [S.elements[x] for x in mismatches]


# -- commands ----------------------------------------------------------------

def cmd_check(args):
    S = load_table(args.table)
    system = _read_system(args.identity)
    res = satisfies_system(S, system, args.bound)
    report = {"command": "check", "table": S.name, "holds": res.holds,
              "identities": [render_identity(i) for i in system]}
    if not res.holds:
        pos, ident, sat = res.first_failure
        report["failure"] = {
            "position": pos, "identity": render_identity(ident),
            "witness": _names(S, sat.witness),
            "lhs": S.elements[sat.values[0]], "rhs": S.elements[sat.values[1]],
        }
    return (EXIT_OK if res.holds else EXIT_FAIL), report


def cmd_pinv(args):
    S = load_table(args.table)
    E, mismatches = _epigroup(S)
    rows = []
    for x, c in enumerate(E.cyclic):
        rows.append({"element": E.elements[x], "omega": E.elements[c.omega],
                     "pinv": E.elements[c.pseudoinverse], "index": c.index,
                     "period": c.period})
    return EXIT_OK, {"command": "pinv", "table": S.name, "elements": rows,
                     "declared_unary_mismatch": mismatches}


def cmd_profile(args):
    S = load_table(args.table)
    E, mismatches = _epigroup(S)
    prof = epigroup_profile(E)
    nil = nil_profile(E)
    ideal = gr_right_ideal(E)
    return EXIT_OK, {
        "command": "profile", "table": S.name, "order": len(E),
        "group_elements": [E.elements[x] for x in sorted(prof.group_elements)],
        "index": prof.index, "completely_regular": prof.is_completely_regular,
        "nil": nil.is_nil, "nilpotency_degree": nil.nilpotency_degree,
        "gr_right_ideal": ideal.holds,
        "gr_right_ideal_witness": None if ideal.witness is None else [E.elements[v] for v in ideal.witness],
        "declared_unary_mismatch": mismatches,
    }


def cmd_degree(args):
    S = load_table(args.table)
    E, _ = _epigroup(S)
    w = find_degree_witness(E, args.max, args.bound)
    report = {"command": "degree", "table": S.name, "max": args.max,
              "witness": None if w is None else {"n": w.n, "i": w.i, "j": w.j}}
    return (EXIT_OK if w else EXIT_FAIL), report


def _trace(steps):
    return [{"before": render_word(s.before), "rule": s.rule, "after": render_word(s.after)}
            for s in steps]


def cmd_normalize(args):
    w = parse_word(args.word)
    try:
        nf, steps = normalize_one_letter(w)
    except ValueError as e:
        raise InputError(str(e)) from None
    return EXIT_OK, {"command": "normalize", "input": render_word(w), "letter": nf.letter,
                     "p": nf.p, "q": nf.q, "word": render_word(nf.word()), "trace": _trace(steps)}


def cmd_factor(args):
    w = parse_word(args.word)
    u_star, z, steps = factor_tail(w)
    return EXIT_OK, {"command": "factor", "input": render_word(w),
                     "u_star": None if u_star is None else render_word(u_star),
                     "z": z, "trace": _trace(steps)}


def cmd_classify(args):
    system = _read_system(args.identity)
    rows = []
    for ident in system:
        flags = classify_identity(ident)
        rows.append({"identity": render_identity(ident),
                     "flags": {k: getattr(flags, k) for k in flags.__dataclass_fields__}})
    var, vare = is_variety_class(system), equals_varE(system)

    def verdict(v):
        return {"value": v.value, "category": v.category,
                "witness": None if v.witness is None else render_identity(v.witness)}

    return EXIT_OK, {"command": "classify", "identities": rows,
                     "variety": verdict(var), "equals_varE": verdict(vare)}


def cmd_transform(args):
    system = _read_system(args.system)
    out = transform_mn(system, args.m, args.n)
    return EXIT_OK, {"command": "transform", "m": args.m, "n": args.n,
                     "identities": [render_identity(i) for i in out]}


def cmd_deduce(args):
    d = load_script(args.script, strict=args.strict, delta_bound=args.delta_bound)
    rep = verify_deduction(d)
    report = {"command": "deduce", "valid": rep.valid, "delta_bound": rep.delta_bound,
              "steps": rep.steps, "conclusion": render_identity(d.conclusion),
              "first_bad_step": rep.first_bad_step, "reason": rep.reason}
    code = EXIT_OK if rep.valid else EXIT_FAIL
    if rep.valid:
        tail = check_tail_invariant(d.axioms, d)
        report["tail_invariant"] = {"holds": tail.holds, "applicable": tail.applicable,
                                    "note": tail.note}
    if args.check_models and rep.valid:
        tables = sorted(Path(args.check_models).glob("*.tbl"))
        if not tables:
            raise InputError(f"no .tbl files in {args.check_models}")
        theory = IdentitySystem(tuple(d.axioms) + tuple(delta_basis(d.delta_bound)))
        checked, skipped, failures = [], [], []
        for path in tables:
            S = load_table(path)
            if S.unary is None:
                S = derive_epigroup(S)[0]
            if not satisfies_system(S, theory, args.bound).holds:
                skipped.append(S.name)
                continue
            checked.append(S.name)
            res = satisfies_system(S, [d.conclusion], args.bound)
            if not res.holds:
                _, _, sat = res.first_failure
                failures.append({"table": S.name, "witness": _names(S, sat.witness)})
        report["models"] = {"checked": checked, "skipped": skipped, "failures": failures}
        if failures:
            code = EXIT_FAIL
    return code, report


def cmd_catalog(args):
    if args.enumerate:
        models = list(cat.enumerate_semigroups(args.enumerate, args.iso, allow_order4=True))
        named = {S.name: S for S in models}
    elif args.names:
        try:
            named = {n: cat.make_named(n) for n in args.names}
        except ValueError as e:
            raise InputError(str(e)) from None
    else:
        named = cat.default_catalog()
    tables = {name: render_table(S) for name, S in named.items()}
    if args.write_dir:
        out = Path(args.write_dir)
        out.mkdir(parents=True, exist_ok=True)
        for name, text in tables.items():
            (out / f"{_file_stem(name)}.tbl").write_text(text)
    return EXIT_OK, {"command": "catalog", "tables": tables,
                     "written_to": args.write_dir or None}


def _file_stem(name):
    return name.replace("(", "").replace(")", "").replace(",", "_").replace("#", "_")


# -- text rendering ----------------------------------------------------------

def _yn(b):
    return "yes" if b else "no"


def _assign(w):
    return " ".join(f"{k}={v}" for k, v in w.items())


def render_text(r: dict) -> str:
    cmd = r["command"]
    out = []
    if cmd == "check":
        if r["holds"]:
            out.append("holds")
        else:
            f = r["failure"]
            out.append("fails" if len(r["identities"]) == 1 else f"fails at identity {f['position']}: {f['identity']}")
            out.append(f"witness: {_assign(f['witness'])}")
            out.append(f"lhs={f['lhs']} rhs={f['rhs']}")
    elif cmd == "pinv":
        for e in r["elements"]:
            out.append(f"{e['element']}: omega={e['omega']} pinv={e['pinv']} index={e['index']} period={e['period']}")
        if r["declared_unary_mismatch"]:
            out.append("declared unary differs from pseudoinversion at: " + " ".join(r["declared_unary_mismatch"]))
    elif cmd == "profile":
        out.append(f"order: {r['order']}")
        out.append("group elements: " + " ".join(r["group_elements"]))
        out.append(f"index: {r['index']}")
        out.append(f"completely regular: {_yn(r['completely_regular'])}")
        nil = _yn(r["nil"]) + (f" (degree {r['nilpotency_degree']})" if r["nil"] else "")
        out.append(f"nil: {nil}")
        ideal = _yn(r["gr_right_ideal"])
        if r["gr_right_ideal_witness"]:
            ideal += " (witness " + " ".join(r["gr_right_ideal_witness"]) + ")"
        out.append(f"Gr S right ideal: {ideal}")
        if r["declared_unary_mismatch"]:
            out.append("declared unary differs from pseudoinversion at: " + " ".join(r["declared_unary_mismatch"]))
    elif cmd == "degree":
        w = r["witness"]
        out.append("none" if w is None else f"n={w['n']} i={w['i']} j={w['j']}")
    elif cmd in ("normalize", "factor"):
        if cmd == "normalize":
            out.append(f"{r['letter']}^{r['p']} {r['letter']}'^{r['q']}")
            out.append(f"word: {r['word']}")
        else:
            out.append(f"u* = {r['u_star'] if r['u_star'] is not None else '(empty)'}")
            out.append(f"z = {r['z']}")
        for s in r["trace"]:
            out.append(f"{s['before']}  --[{s['rule']}]-->  {s['after']}")
    elif cmd == "classify":
        for row in r["identities"]:
            on = [k[3:] if k.startswith("is_") else k for k, v in sorted(row["flags"].items()) if v]
            out.append(f"{row['identity']}: " + (" ".join(on) or "-"))
        out.append(f"variety: {_yn(r['variety']['value'])}; equals varE: {_yn(r['equals_varE']['value'])}")
        for key in ("variety", "equals_varE"):
            v = r[key]
            out.append(f"  {key}: {v['category']}" + (f" [{v['witness']}]" if v["witness"] else ""))
    elif cmd == "transform":
        out.extend(r["identities"])
    elif cmd == "deduce":
        if r["valid"]:
            out.append("valid")
            out.append(f"conclusion: {r['conclusion']} (delta_bound {r['delta_bound']})")
            t = r["tail_invariant"]
            if not t["applicable"]:
                out.append(f"tail invariant: not applicable ({t['note']})")
            else:
                out.append(f"tail invariant: {'holds' if t['holds'] else 'violated: ' + t['note']}")
        else:
            out.append(f"invalid at step {r['first_bad_step']}: {r['reason']}")
        m = r.get("models")
        if m:
            if m["failures"]:
                for f in m["failures"]:
                    out.append(f"conclusion fails in {f['table']}: {_assign(f['witness'])}")
            elif m["skipped"]:
                out.append(f"conclusion holds in all {len(m['checked'])} models "
                           f"({len(m['skipped'])} skipped: axioms fail)")
            else:
                out.append(f"conclusion holds in all {len(m['checked'])} models")
    elif cmd == "catalog":
        for i, (name, text) in enumerate(r["tables"].items()):
            if i:
                out.append("")
            out.append(f"# {name}")
            out.append(text.rstrip("\n"))
    elif cmd == "acceptance":
        for c in r["criteria"]:
            out.append(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['id']}. {c['title']}: {c['detail']}")
    elif cmd == "error":
        out.append(f"error: {r['message']}")
    return "\n".join(out)


def cmd_acceptance(args):
    from .acceptance import run_all
    results = run_all(args.only)
    report = {"command": "acceptance", "criteria": results}
    return (EXIT_OK if all(c["passed"] for c in results) else EXIT_FAIL), report


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--bound", type=int, default=DEFAULT_BOUND,
                        help="maximum number of assignments per check")

    p = argparse.ArgumentParser(prog="epiworks", description="Finite epigroups and unary-semigroup identities.")
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("check", parents=[common], help="check an identity or system in a table")
    s.add_argument("table")
    s.add_argument("identity", help="identity text or path to a system file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("pinv", parents=[common], help="omega and pseudoinverse of each element")
    s.add_argument("table")
    s.set_defaults(func=cmd_pinv)

    s = sub.add_parser("profile", parents=[common], help="group elements, index, nil and ideal checks")
    s.add_argument("table")
    s.set_defaults(func=cmd_profile)

    s = sub.add_parser("degree", parents=[common], help="least double-bar degree identity satisfied")
    s.add_argument("table")
    s.add_argument("--max", type=int, required=True)
    s.set_defaults(func=cmd_degree)

    s = sub.add_parser("normalize", parents=[common], help="one-letter normal form x^p x'^q")
    s.add_argument("word")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("factor", parents=[common], help="rewrite u as u* z with z a letter")
    s.add_argument("word")
    s.set_defaults(func=cmd_factor)

    s = sub.add_parser("classify", parents=[common], help="identity flags and system verdicts")
    s.add_argument("identity", help="identity text or path to a system file")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("transform", parents=[common], help="wrap a system with m + n fresh letters")
    s.add_argument("system", help="system file or identity text")
    s.add_argument("-m", type=int, default=0)
    s.add_argument("-n", type=int, default=0)
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("deduce", parents=[common], help="verify a proof script")
    s.add_argument("script")
    s.add_argument("--delta-bound", type=int, default=None)
    s.add_argument("--check-models", metavar="DIR")
    s.add_argument("--strict", action="store_true", help="match axioms literally, without renaming")
    s.set_defaults(func=cmd_deduce)

    s = sub.add_parser("catalog", parents=[common], help="emit named or enumerated tables")
    s.add_argument("names", nargs="*", help="P, C, T, N(k), Z(n), cyclic(i,p), free(k,m), P-dual")
    s.add_argument("--enumerate", type=int, metavar="ORDER")
    s.add_argument("--iso", action="store_true", help="one table per isomorphism class")
    s.add_argument("--write-dir", metavar="DIR")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("acceptance", parents=[common], help="run the acceptance criteria")
    s.add_argument("--only", type=lambda t: [int(x) for x in t.split(",")], default=None,
                   metavar="IDS", help="comma-separated criterion numbers")
    s.set_defaults(func=cmd_acceptance)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, report = args.func(args)
    except ResourceGuardError as e:
        code, report = EXIT_GUARD, {"command": "error", "message": str(e)}
    except (InputError, ParseError, TableError, OSError, ValueError, KeyError) as e:
        code, report = EXIT_INPUT, {"command": "error", "message": str(e)}
    report = {"schema": SCHEMA, **report}
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
