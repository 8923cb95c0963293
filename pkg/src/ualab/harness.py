"""Per-algebra fact vectors, the implication ledger, fixtures and reports."""

from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

from .algebra import (DEFAULT_BUDGET, AlgebraError, FiniteAlgebra, load_algebra, parse_term,
                      trivial_like)
from .congruences import (congruence_lattice, distributivity_violation, is_congruence_partition,
                          modularity_violation, permutability)
from .lemmas import LemmaKind, check_lemma, check_majority_inequality
from .properties import (check_DD, check_EEo_commute, check_PP, check_PPoPPo,
                         check_difunctional_all, check_positive_reflexive_are_equivalences,
                         check_reflexive_symmetric)
from .relations import RelClass, compose
from .terms import (FINDERS, NAMED_SYSTEMS, TermSearchResult, TermWitness, majority_from_pixley,
                    maltsev_from_pixley, quaternary_from_maltsev, verify_witnesses)

C, RF, PS = RelClass.CONGRUENCE, RelClass.REFLEXIVE, RelClass.POSITIVE

# relation-class combinations the lemmas are checked over: (label, R, S, T)
LEMMA_COMBOS = (
    ("cong", C, C, C),
    ("refl", RF, RF, RF),
    ("refl,S=cong", RF, C, RF),
    ("pos,S=refl", PS, RF, PS),
)

TERM_FACTS = {"maltsev": "maltsev", "pixley": "pixley", "majority_term": "majority",
              "quaternary_pq": "quaternary-pq", "quaternary_pqx": "quaternary-pqx",
              "lipparini_rs": "lipparini-rs"}


def lemma_fact(kind: LemmaKind, label: str) -> str:
    return f"{kind.short}({label})"


class State(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    SAMPLED = "sampled"  # holds on a non-exhaustive sample
    UNKNOWN = "unknown"  # inconclusive


@dataclass
class Fact:
    value: bool | None
    exhaustive: bool
    witness: dict | None = None
    runtime_ms: float = 0.0
    detail: object = field(default=None, repr=False, compare=False)

    @property
    def state(self) -> State:
        if self.value is None:
            return State.UNKNOWN
        if not self.value:
            return State.FALSE  # failures carry a verified witness, so they are exact
        return State.TRUE if self.exhaustive else State.SAMPLED

    def to_json(self, timings: bool = False) -> dict:
        out = {"value": self.value, "exhaustive": self.exhaustive, "state": self.state.value}
        if self.witness is not None:
            out["witness"] = self.witness
        if timings:
            out["runtime_ms"] = round(self.runtime_ms, 3)
        return out


@dataclass
class FactVector:
    algebra: FiniteAlgebra
    facts: dict[str, Fact]

    def __getitem__(self, name: str) -> Fact:
        return self.facts[name]

    def detail(self, name: str):
        f = self.facts.get(name)
        return None if f is None else f.detail

    def state(self, name: str) -> State:
        f = self.facts.get(name)
        return State.UNKNOWN if f is None else f.state


def _timed(fn: Callable):
    t0 = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - t0) * 1000


def _term_fact(res: TermSearchResult, ms: float) -> Fact:
    wit = None
    if res.found:
        wit = {u: w.term_text() for u, w in sorted(res.witnesses.items())}
    elif res.found is False:
        # absence is certified by the completed closures (or by a clash between constraints)
        wit = {"closed_subpower_sizes": {str(k): v for k, v in sorted(res.subpower_sizes.items())}}
        if res.reason:
            wit["reason"] = res.reason
    elif res.reason:
        wit = {"reason": res.reason}
    return Fact(res.found, res.found is not None, wit, ms, res)


def compute_facts(alg: FiniteAlgebra, budget: int = DEFAULT_BUDGET) -> FactVector:
    """Run every checker on ``alg``. Deterministic apart from the recorded runtimes."""
    facts: dict[str, Fact] = {}

    for name, kind in TERM_FACTS.items():
        res, ms = _timed(lambda: FINDERS[kind](alg, budget))
        facts[name] = _term_fact(res, ms)

    try:
        lat, ms_lat = _timed(lambda: congruence_lattice(alg))
    except AlgebraError as exc:
        for name in ("perm2", "perm3", "modular", "distributive"):
            facts[name] = Fact(None, False, {"reason": str(exc)})
    else:
        perm, ms = _timed(lambda: permutability(alg))
        facts["perm2"] = Fact(perm.perm2, True, _perm_witness(lat, perm.witness2), ms, perm)
        facts["perm3"] = Fact(perm.perm3, True, _perm_witness(lat, perm.witness3), ms, perm)
        bad, ms = _timed(lambda: modularity_violation(lat))
        facts["modular"] = Fact(bad is None, True, _lattice_witness(lat, bad, "xyz"), ms + ms_lat, lat)
        bad, ms = _timed(lambda: distributivity_violation(lat))
        facts["distributive"] = Fact(bad is None, True, _lattice_witness(lat, bad, "abc"), ms + ms_lat, lat)

    for label, r, s, t in LEMMA_COMBOS:
        for kind in (LemmaKind.SHIFTING, LemmaKind.TRIANGULAR, LemmaKind.TRAPEZOID):
            v, ms = _timed(lambda: check_lemma(alg, kind, r, s, t, budget))
            wit = v.counterexample.to_json() if v.counterexample is not None else None
            facts[lemma_fact(kind, label)] = Fact(v.holds, v.exhaustive, wit, ms, v)
    v, ms = _timed(lambda: check_majority_inequality(alg, RF, budget))
    facts["majority_inequality"] = Fact(v.holds, v.exhaustive,
                                        v.counterexample.to_json() if v.counterexample else None, ms, v)

    one = trivial_like(alg)
    props = {
        "refl_symmetric": lambda: check_reflexive_symmetric(alg, budget),
        "difunctional_all": lambda: check_difunctional_all(alg, budget),
        "eeo_commute": lambda: check_EEo_commute(alg, budget),
        "ppoppo": lambda: check_PPoPPo(alg, budget),
        "dd": lambda: check_DD(alg, budget),
        "pp": lambda: check_PP(alg, budget),
        "dd_A1": lambda: check_DD(alg, budget, A=one),
        "pp_A1": lambda: check_PP(alg, budget, A=one),
        "positive_are_equiv": lambda: check_positive_reflexive_are_equivalences(alg, budget),
    }
    for name, fn in props.items():
        v, ms = _timed(fn)
        wit = None if v.holds else {k: val for k, val in v.to_json().items()
                                    if k in ("witness", "assignment")}
        facts[name] = Fact(v.holds, v.exhaustive, wit, ms, v)
    return FactVector(alg, facts)


def _lattice_witness(lat, triple, names):
    if triple is None:
        return None
    return {k: lat.elements[i].blocks for k, i in zip(names, triple)}


def _perm_witness(lat, w):
    if w is None:
        return None
    i, j, pair = w
    return {"alpha": lat.elements[i].blocks, "beta": lat.elements[j].blocks, "pair": list(pair)}


# -- the ledger --------------------------------------------------------------

@dataclass(frozen=True)
class Clause:
    hypotheses: tuple[str, ...]
    conclusions: tuple[str, ...]


@dataclass(frozen=True)
class LedgerEntry:
    id: str
    statement: str
    clauses: tuple[Clause, ...]
    soundness: str


def _c(hyps, concls) -> Clause:
    return Clause(tuple(hyps), tuple(concls))


def _lem(kind, label="cong"):
    return lemma_fact(kind, label)


SL, TL, TPL = LemmaKind.SHIFTING, LemmaKind.TRIANGULAR, LemmaKind.TRAPEZOID

LEDGER: tuple[LedgerEntry, ...] = (
    LedgerEntry("L1", "maltsev => refl_symmetric & difunctional_all & perm2",
                (_c(["maltsev"], ["refl_symmetric", "difunctional_all", "perm2"]),),
                "A Mal'tsev term applied to related pairs builds the missing pairs inside any compatible relation."),
    LedgerEntry("L2", "quaternary_pq => eeo_commute & ppoppo & perm3",
                (_c(["quaternary_pq"], ["eeo_commute", "ppoppo", "perm3"]),),
                "The two quaternary terms act on pairs of a compatible relation and produce the required connecting pairs."),
    LedgerEntry("L3", "TpL(c) => SL(c) & TL(c) for every class combination c",
                tuple(_c([_lem(TPL, lab)], [_lem(SL, lab), _lem(TL, lab)]) for lab, *_ in LEMMA_COMBOS),
                "Taking x=u gives the triangular diagram; the shifting premises contain the trapezoid ones."),
    LedgerEntry("L4", "perm2 => (TL(cong) <=> TpL(cong) <=> distributive)",
                (_c(["perm2", _lem(TL)], ["distributive"]), _c(["perm2", "distributive"], [_lem(TL)]),
                 _c(["perm2", _lem(TPL)], ["distributive"]), _c(["perm2", "distributive"], [_lem(TPL)])),
                "With permuting congruences the join is the relational product, so the inequalities become the distributive Horn law."),
    LedgerEntry("L5", "quaternary_pq & TL(cong) => TpL(cong)",
                (_c(["quaternary_pq", _lem(TL)], [_lem(TPL)]),),
                "Per algebra: the terms make congruences 3-permute, and the triangular inequality then yields the trapezoid one."),
    LedgerEntry("L6", "perm3 => (TpL(cong) <=> distributive)",
                (_c(["perm3", "distributive"], [_lem(TPL)]), _c(["perm3", _lem(TPL)], ["distributive"])),
                "Under 3-permutability the join of b and c is bcb, which turns the trapezoid inequality into the Horn law."),
    LedgerEntry("L7", "majority_term => majority_inequality & TpL(cong)",
                (_c(["majority_term"], ["majority_inequality", _lem(TPL)]),),
                "The majority term applied to (a,a), (a,b), (a,c) produces the middle element of the right-hand composite."),
    LedgerEntry("L8", "maltsev & distributive => TL(refl) & TpL(refl)",
                (_c(["maltsev", "distributive"], [_lem(TL, "refl"), _lem(TPL, "refl")]),),
                "Under a Mal'tsev term reflexive compatible relations are congruences, and then L4 applies."),
    LedgerEntry("L9", "pixley => dd",
                (_c(["pixley"], ["dd"]),),
                "The Pixley term applied coordinatewise to the three premise triples gives the conclusion triple."),
    LedgerEntry("L10", "dd => difunctional_all",
                (_c(["dd"], ["difunctional_all"]),),
                "A compatible binary D with a free middle coordinate is a compatible ternary relation; DD on it is difunctionality."),
    LedgerEntry("L11", "lipparini_rs => pp",
                (_c(["lipparini_rs"], ["pp"]),),
                "The r, s terms applied to the premise triples give a common image w for (x,a) and (z,a)."),
    LedgerEntry("L12", "pp => ppoppo",
                (_c(["pp"], ["ppoppo"]),),
                "Instances of PP with a constant middle coordinate are exactly PP°PP° = PP° for binary P."),
    LedgerEntry("L13", "quaternary_pq => positive_are_equiv",
                (_c(["quaternary_pq"], ["positive_are_equiv"]),),
                "A reflexive W°W is symmetric, and the quaternary terms supply transitivity through the witness W."),
    LedgerEntry("L14", "modular => SL(cong)",
                (_c(["modular"], [_lem(SL)]),),
                "Apply the modular law to R, S and T in the congruence lattice; the shifting inequality follows."),
    LedgerEntry("L15", "perm2 => perm3; distributive => modular; pixley => maltsev & majority_term; "
                       "maltsev => quaternary_pq",
                (_c(["perm2"], ["perm3"]), _c(["distributive"], ["modular"]),
                 _c(["pixley"], ["maltsev", "majority_term"]), _c(["maltsev"], ["quaternary_pq"])),
                "Order-theoretic facts plus explicit term constructions, which are rebuilt and re-verified."),
    LedgerEntry("L16", "quaternary_pqx <=> lipparini_rs",
                (_c(["quaternary_pqx"], ["lipparini_rs"]), _c(["lipparini_rs"], ["quaternary_pqx"])),
                "Checked on each algebra rather than assumed; any divergence is reported."),
)

# directions that need a whole variety (or category) and cannot be tested on one algebra
VARIETY_LEVEL_NOTES = (
    "TL(refl) => maltsev: the converse needs relations on derived objects, not on this algebra alone.",
    "TpL(refl,S=cong) or TpL(pos,S=refl) => a term condition: variety-level, not per-algebra checkable.",
    "dd => pixley and pp => lipparini_rs: variety-level, not per-algebra checkable.",
    "A relation is counted as positive only through a compatible witness on the same carrier.",
)


@dataclass
class Violation:
    ledger_id: str
    detail: str

    def to_json(self) -> dict:
        return {"ledger_id": self.ledger_id, "detail": self.detail}


def _clause_text(cl: Clause) -> str:
    return " & ".join(cl.hypotheses) + " => " + " & ".join(cl.conclusions)


def verify_ledger(facts: FactVector) -> tuple[list[Violation], list[Violation]]:
    """Evaluate every ledger clause. Returns (violations, conditional findings).

    A violation needs all hypotheses exact-true and a conclusion exact-false.
    A hypothesis that only holds on a sample can never produce a violation;
    such cases are returned as conditional findings instead.
    """
    violations, conditional = [], []
    for entry in LEDGER:
        for cl in entry.clauses:
            hyp = [facts.state(h) for h in cl.hypotheses]
            if any(s in (State.FALSE, State.UNKNOWN) for s in hyp):
                continue
            for concl in cl.conclusions:
                if facts.state(concl) is not State.FALSE:
                    continue
                wit = facts[concl].witness
                detail = f"{_clause_text(cl)}: {concl} is false"
                if wit is not None:
                    detail += f"; counterexample {json.dumps(wit, sort_keys=True)}"
                if all(s is State.TRUE for s in hyp):
                    violations.append(Violation(entry.id, detail))
                else:
                    conditional.append(Violation(entry.id, detail + " (hypothesis holds only on a sample)"))
    violations.extend(_constructive_checks(facts))
    violations.extend(_consistency_checks(facts))
    return violations, conditional


def _constructive_checks(facts: FactVector) -> list[Violation]:
    """L15 term constructions, rebuilt from the found witnesses and re-verified."""
    alg = facts.algebra
    out = []
    malt = facts.detail("maltsev")
    if isinstance(malt, TermSearchResult) and malt.found and malt.witnesses["p"].term is not None:
        if not quaternary_from_maltsev(alg, malt).found:
            out.append(Violation("L15", "p(x,y,z,w)=m(x,y,z), q=w does not verify"))
    pix = facts.detail("pixley")
    if isinstance(pix, TermSearchResult) and pix.found and pix.witnesses["p"].term is not None:
        if not maltsev_from_pixley(alg, pix).found:
            out.append(Violation("L15", "the Pixley term is not a Mal'tsev term"))
        if not majority_from_pixley(alg, pix).found:
            out.append(Violation("L15", "m(x,y,z)=p(x,p(x,y,z),z) is not a majority term"))
    return out


def _consistency_checks(facts: FactVector) -> list[Violation]:
    """Invariants that are not implications between facts."""
    out = []
    for restricted, full in (("dd_A1", "difunctional_all"), ("pp_A1", "ppoppo")):
        a, b = facts.state(restricted), facts.state(full)
        if State.UNKNOWN not in (a, b) and (a is State.FALSE) != (b is State.FALSE):
            out.append(Violation("K1", f"{restricted} and {full} disagree ({a.value} vs {b.value})"))
    lat = facts.detail("modular")
    perm = facts.detail("perm2")
    if lat is not None and perm is not None:
        rels = [c.rel for c in lat.elements]
        for i in range(len(rels)):
            for j in range(len(rels)):
                join = rels[lat.join[i, j]]
                if perm.perm2 and compose(rels[i], rels[j]) != join:
                    out.append(Violation("K2", f"perm2 but the join of #{i} and #{j} is not their product"))
                if perm.perm3 and compose(rels[i], compose(rels[j], rels[i])) != join:
                    out.append(Violation("K2", f"perm3 but the join of #{i} and #{j} is not the 3-fold product"))
    return out


# -- fixtures ----------------------------------------------------------------

def corpus_dir() -> Path:
    return Path(str(resources.files("ualab") / "corpus"))


def corpus_names() -> list[str]:
    return sorted(p.stem for p in corpus_dir().glob("*.json") if not p.name.endswith(".facts.json"))


def load_corpus_algebra(name: str) -> FiniteAlgebra:
    path = corpus_dir() / f"{name}.json"
    if not path.exists():
        raise FileNotFoundError(f"no bundled algebra named {name!r}")
    return load_algebra(path)


def fixture_path(name: str) -> Path:
    return corpus_dir() / f"{name}.facts.json"


def make_fixture(facts: FactVector) -> dict:
    alg = facts.algebra
    terms = {}
    for name in TERM_FACTS:
        res = facts[name].detail
        if res.found:
            terms[name] = {u: w.term_text() for u, w in sorted(res.witnesses.items())}
    return {
        "algebra": alg.name,
        "facts": {k: {"value": f.value, "exhaustive": f.exhaustive} for k, f in sorted(facts.facts.items())},
        "congruences": [c.blocks for c in congruence_lattice(alg).elements],
        "terms": terms,
    }


def load_fixture(name: str) -> dict | None:
    path = fixture_path(name)
    if not path.exists():
        return None
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def compare_fixture(facts: FactVector, fixture: dict) -> list[Violation]:
    """Recorded facts must match, recorded congruences must still be congruences of the
    current tables, and recorded terms must still satisfy their identities."""
    alg = facts.algebra
    out = []
    for name, rec in sorted(fixture.get("facts", {}).items()):
        f = facts.facts.get(name)
        if f is None:
            out.append(Violation("F1", f"fact {name} is recorded but was not computed"))
        elif (f.value, f.exhaustive) != (rec["value"], rec["exhaustive"]):
            out.append(Violation("F1", f"{name}: recorded {rec['value']} (exhaustive={rec['exhaustive']}), "
                                       f"computed {f.value} (exhaustive={f.exhaustive})"))
    recorded = fixture.get("congruences", [])
    for blocks in recorded:
        labels = [0] * alg.size
        try:
            for b, block in enumerate(blocks):
                for x in block:
                    labels[x] = b
        except IndexError:
            out.append(Violation("F2", f"recorded congruence {blocks} does not fit the carrier"))
            continue
        if not is_congruence_partition(alg, labels):
            out.append(Violation("F2", f"recorded congruence {blocks} is not compatible with the operations"))
    current = [c.blocks for c in congruence_lattice(alg).elements]
    if recorded and current != recorded:
        out.append(Violation("F2", f"congruence lattice changed: {len(recorded)} recorded, {len(current)} now"))
    for name, texts in sorted(fixture.get("terms", {}).items()):
        system = NAMED_SYSTEMS[TERM_FACTS[name]]
        wit = {}
        for u, text in texts.items():
            if text is None:
                break
            try:
                term = parse_term(text)
                wit[u] = TermWitness(u, system.arity(u), (), (), term)
            except AlgebraError as exc:
                out.append(Violation("F3", f"{name}.{u}: {exc}"))
                break
        else:
            try:
                ok = verify_witnesses(alg, system, wit)
            except AlgebraError as exc:
                ok, _ = False, exc
            if not ok:
                out.append(Violation("F3", f"recorded {name} terms no longer satisfy their identities"))
    return out


# -- reports -----------------------------------------------------------------

@dataclass
class Report:
    facts: FactVector
    violations: list[Violation]
    conditional: list[Violation]
    fixture_checked: bool

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "algebra": self.facts.algebra.name,
            "size": self.facts.algebra.size,
            "facts": {k: f.to_json(timings) for k, f in sorted(self.facts.facts.items())},
            "violations": [v.to_json() for v in self.violations],
            "conditional": [v.to_json() for v in self.conditional],
            "fixture_checked": self.fixture_checked,
            "variety_level_notes": list(VARIETY_LEVEL_NOTES),
        }
        if timings:
            out["total_runtime_ms"] = round(sum(f.runtime_ms for f in self.facts.facts.values()), 3)
        return out


def verify_algebra(alg: FiniteAlgebra, budget: int = DEFAULT_BUDGET, fixture: dict | None | bool = True) -> Report:
    """Facts, ledger and (by default) comparison with the bundled fixture of the same name."""
    facts = compute_facts(alg, budget)
    violations, conditional = verify_ledger(facts)
    if fixture is True:
        fixture = load_fixture(alg.name) if alg.name in corpus_names() else None
    if fixture:
        violations.extend(compare_fixture(facts, fixture))
    return Report(facts, violations, conditional, bool(fixture))


def regenerate_fixtures(budget: int = DEFAULT_BUDGET, names: list[str] | None = None) -> list[Path]:
    """Recompute and overwrite the fixture files of the bundled corpus."""
    written = []
    for name in names or corpus_names():
        facts = compute_facts(load_corpus_algebra(name), budget)
        path = fixture_path(name)
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(make_fixture(facts), fh, indent=1, sort_keys=True)
            fh.write("\n")
        written.append(path)
    return written


def dumps_report(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
