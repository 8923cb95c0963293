"""Command-line interface.

Exit codes: 0 every requested check holds or completed, 1 a check failed (a
counterexample was found), 2 usage or input error, 3 inconclusive (budget
exhausted or verdict only holds on a sample).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .algebra import DEFAULT_BUDGET, AlgebraError, FiniteAlgebra, load_algebra
from .congruences import congruence_lattice, is_distributive, is_modular, permutability
from .harness import (corpus_names, dumps_report, load_corpus_algebra, regenerate_fixtures,
                      verify_algebra)
from .lemmas import (Counterexample, LemmaKind, check_lemma, class_spec, parse_classes,
                     verify_counterexample)
from .properties import (PROPERTIES, check_DD, check_PP, check_property,
                         verify_binary_witness, verify_ternary_witness, PropertyVerdict)
from .relations import BinRel, RelClass, RelationError, enumerate_relations
from .terms import FINDERS

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def resolve_algebra(ref: str | None) -> FiniteAlgebra:
    """A file path, or the name of a bundled algebra."""
    if not ref:
        raise UsageError("--algebra is required")
    path = Path(ref)
    if path.exists():
        return load_algebra(path)
    if ref in corpus_names():
        return load_corpus_algebra(ref)
    raise UsageError(f"{ref}: no such file or bundled algebra")


def _emit(args, obj: dict, text: str) -> None:
    if args.json:
        print(dumps_report(obj))
    else:
        print(text)


def _status_code(status: str) -> int:
    return {"holds": EXIT_OK, "found": EXIT_OK, "fails": EXIT_FAIL, "not-found": EXIT_FAIL,
            "holds-on-sample": EXIT_INCONCLUSIVE, "inconclusive": EXIT_INCONCLUSIVE}[status]


def cmd_info(args) -> int:
    alg = resolve_algebra(args.algebra)
    obj = {"name": alg.name, "size": alg.size,
           "operations": [{"name": n, "arity": a} for n, a in alg.signature],
           "constants": list(alg.constants)}
    sig = ", ".join(f"{n}/{a}" for n, a in alg.signature) or "(none)"
    _emit(args, obj, f"{alg.name}: {alg.size} elements; operations {sig}")
    return EXIT_OK


def cmd_congruences(args) -> int:
    alg = resolve_algebra(args.algebra)
    lat = congruence_lattice(alg)
    blocks = [c.blocks for c in lat.elements]
    _emit(args, {"algebra": alg.name, "congruences": blocks},
          "\n".join(json.dumps(b) for b in blocks))
    return EXIT_OK


def cmd_lattice(args) -> int:
    alg = resolve_algebra(args.algebra)
    lat = congruence_lattice(alg)
    perm = permutability(alg)
    mod, dist = is_modular(lat), is_distributive(lat)
    obj = {"algebra": alg.name, "elements": [c.blocks for c in lat.elements],
           "leq": lat.leq.astype(int).tolist(), "meet": lat.meet.tolist(), "join": lat.join.tolist(),
           "modular": mod, "distributive": dist, "perm2": perm.perm2, "perm3": perm.perm3}
    lines = [f"{i}: {json.dumps(c.blocks)}" for i, c in enumerate(lat.elements)]
    lines.append(f"modular={mod} distributive={dist} perm2={perm.perm2} perm3={perm.perm3}")
    _emit(args, obj, "\n".join(lines))
    return EXIT_OK


def cmd_check(args) -> int:
    chosen = [x for x in (args.lemma, args.property, args.replay) if x]
    if len(chosen) != 1:
        raise UsageError("check needs exactly one of --lemma, --property, --replay")
    if args.replay:
        return _replay(args)
    alg = resolve_algebra(args.algebra)
    if args.lemma:
        classes = parse_classes(args.classes)
        v = check_lemma(alg, args.lemma, *classes, budget=args.budget, strategy=args.strategy)
        text = f"{v.kind.value} over {class_spec(classes)}: {v.status}"
        if v.counterexample is not None:
            text += "\ncounterexample: " + json.dumps(v.counterexample.to_json(), sort_keys=True)
        _emit(args, {"algebra": alg.name, **v.to_json()}, text)
        return _status_code(v.status)
    if args.property in ("dd", "pp") and (args.x or args.a or args.u):
        X, A, U = (resolve_algebra(s) if s else None for s in (args.x, args.a, args.u))
        v = (check_DD if args.property == "dd" else check_PP)(alg, args.budget, X=X, A=A, U=U)
    else:
        v = check_property(alg, args.property, args.budget)
    text = f"{v.name}: {v.status}"
    if v.witness is not None:
        text += f"\nwitness: {json.dumps(v.witness.to_json())} at {json.dumps(v.assignment)}"
    _emit(args, {"algebra": alg.name, **v.to_json()}, text)
    return _status_code(v.status)


def _replay(args) -> int:
    try:
        with open(args.replay, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"{args.replay}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError(f"{args.replay}: expected a JSON object")
    # without --algebra, fall back to the bundled algebra named in the report
    alg = resolve_algebra(args.algebra or data.get("algebra"))
    try:
        if "counterexample" in data:
            kind = LemmaKind.parse(data["kind"])
            classes = parse_classes(data["classes"])
            cex = Counterexample.from_json(data["counterexample"])
            ok = verify_counterexample(alg, kind, classes, cex)
            label = f"{kind.value} over {class_spec(classes)}"
        elif "property" in data and "witness" in data:
            w = data["witness"]
            rel = BinRel.from_pairs(w["pairs"], w["dom_size"], w["cod_size"])
            v = PropertyVerdict(data["property"], False, True, rel, data.get("assignment"))
            label = data["property"]
            if label in ("dd", "pp"):
                xs, as_, us = w.get("sorts", (alg.size,) * 3)
                if (xs, as_, us) != (alg.size,) * 3:
                    raise UsageError("replay of ternary witnesses supports X = A = U only")
                ok = verify_ternary_witness(alg, alg, alg, label, v)
            else:
                ok = verify_binary_witness(alg, v)
        else:
            raise UsageError("replay file holds neither a lemma counterexample nor a property witness")
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{args.replay}: malformed counterexample ({exc})") from exc
    obj = {"algebra": alg.name, "replayed": label, "reverified": ok}
    _emit(args, obj, f"{label}: counterexample {'re-verified' if ok else 'does NOT re-verify'}")
    return EXIT_FAIL if ok else EXIT_USAGE


def cmd_find_term(args) -> int:
    alg = resolve_algebra(args.algebra)
    res = FINDERS[args.kind](alg, args.budget)
    text = f"{args.kind}: {res.status}"
    for u, w in sorted(res.witnesses.items()):
        text += f"\n  {u} = {w.term_text() or '(term too large to print)'}"
    if res.reason:
        text += f"\n  ({res.reason})"
    _emit(args, {"algebra": alg.name, **res.to_json()}, text)
    return _status_code(res.status)


def cmd_enumerate(args) -> int:
    alg = resolve_algebra(args.algebra)
    fam = enumerate_relations(alg, args.cls, args.budget)
    rels = list(fam)[: args.limit] if args.limit else list(fam)
    obj = {"algebra": alg.name, "class": fam.cls.value, "exhaustive": fam.exhaustive,
           "count": len(fam), "relations": [r.to_json() for r in rels]}
    text = "\n".join(json.dumps(r.to_json()) for r in rels)
    text += f"\n{len(fam)} relations ({'exhaustive' if fam.exhaustive else 'sample'})"
    _emit(args, obj, text.lstrip("\n"))
    return EXIT_OK if fam.exhaustive else EXIT_INCONCLUSIVE


def cmd_verify(args) -> int:
    algebras = [resolve_algebra(args.algebra)] if args.algebra else [load_corpus_algebra(n)
                                                                     for n in corpus_names()]
    reports = [verify_algebra(a, args.budget, fixture=not args.no_fixture) for a in algebras]
    objs = [r.to_json(args.timings) for r in reports]
    if args.json:
        print(dumps_report(objs[0] if args.algebra else {"reports": objs}))
    else:
        for r in reports:
            line = f"{r.facts.algebra.name}: {len(r.violations)} violations"
            if r.conditional:
                line += f", {len(r.conditional)} conditional"
            print(line)
            for v in r.violations:
                print(f"  {v.ledger_id}: {v.detail}")
    if any(r.violations for r in reports):
        return EXIT_FAIL
    if any(f.value is None for r in reports for f in r.facts.facts.values()):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_corpus(args) -> int:
    if args.regen:
        paths = regenerate_fixtures(args.budget)
        _emit(args, {"written": [p.name for p in paths]}, "\n".join(f"wrote {p}" for p in paths))
    else:
        names = corpus_names()
        _emit(args, {"algebras": names}, "\n".join(names))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS lets the flags appear before or after the subcommand
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help=f"closure budget in elements (default {DEFAULT_BUDGET})")
    common.add_argument("--algebra", default=argparse.SUPPRESS,
                        help="algebra JSON file or bundled algebra name")
    common.add_argument("--timings", action="store_true", default=argparse.SUPPRESS,
                        help="include runtimes in reports (makes them non-reproducible)")

    p = argparse.ArgumentParser(prog="ualab", parents=[common],
                                description="Finite algebra workbench: congruences, relational lemmas, term conditions.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("info", parents=[common], help="signature summary").set_defaults(func=cmd_info)
    sub.add_parser("congruences", parents=[common], help="list congruences as block lists"
                   ).set_defaults(func=cmd_congruences)
    sub.add_parser("lattice", parents=[common], help="congruence lattice and its properties"
                   ).set_defaults(func=cmd_lattice)

    c = sub.add_parser("check", parents=[common], help="check a lemma or property, or replay a counterexample")
    c.add_argument("--lemma", choices=[k.value for k in LemmaKind])
    c.add_argument("--classes", default="cong", help="e.g. cong, refl, or R=pos,S=refl,T=pos")
    c.add_argument("--strategy", choices=["auto", "enumerate"], default="auto")
    c.add_argument("--property", choices=list(PROPERTIES) + ["difunctional"])
    c.add_argument("--x", help="algebra for the X sort of dd/pp")
    c.add_argument("--a", help="algebra for the A sort of dd/pp")
    c.add_argument("--u", help="algebra for the U sort of dd/pp")
    c.add_argument("--replay", help="JSON output of a failed check to re-verify")
    c.set_defaults(func=cmd_check)

    f = sub.add_parser("find-term", parents=[common], help="search for a term condition")
    f.add_argument("--kind", required=True, choices=sorted(FINDERS))
    f.set_defaults(func=cmd_find_term)

    e = sub.add_parser("enumerate", parents=[common], help="list compatible relations of a class")
    e.add_argument("--class", dest="cls", default="cong", choices=[c.value for c in RelClass])
    e.add_argument("--limit", type=int, default=0)
    e.set_defaults(func=cmd_enumerate)

    v = sub.add_parser("verify", parents=[common], help="facts and ledger (whole corpus without --algebra)")
    v.add_argument("--no-fixture", action="store_true", help="skip comparison with bundled fixtures")
    v.set_defaults(func=cmd_verify)

    cp = sub.add_parser("corpus", parents=[common], help="list bundled algebras or regenerate fixtures")
    cp.add_argument("--regen", action="store_true", help="recompute and overwrite fixture files")
    cp.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    for name, default in (("json", False), ("budget", DEFAULT_BUDGET), ("algebra", None), ("timings", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.command == "check" and args.property == "difunctional":
        args.property = "difunctional-all"
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ualab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (AlgebraError, RelationError, OSError) as exc:
        print(f"ualab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
