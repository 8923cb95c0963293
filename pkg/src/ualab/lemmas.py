"""Shifting, Triangular and Trapezoid lemmas and the majority inequality.

The default ("closure") strategy is exact for every class that is closed
under intersection. For a fixed element assignment the premises ask for
certain pairs to lie in R, S and T. Enlarging R or S only enlarges R∧S and
hence the least admissible T, so the smallest R and S containing their
required pairs give the least T, and a counterexample exists for that
assignment iff the conclusion pair is missing from this least T. Classes
that are not closure systems (positive relations) are searched through their
enumerated family instead.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import DEFAULT_BUDGET, BudgetExceeded, FiniteAlgebra
from .relations import (BinRel, RelClass, RelationError, class_closure, compose,
                        enumerate_relations, in_class)


class LemmaKind(enum.Enum):
    SHIFTING = "shifting"
    TRIANGULAR = "triangular"
    TRAPEZOID = "trapezoid"
    MAJORITY = "majority"

    @classmethod
    def parse(cls, text: str) -> "LemmaKind":
        aliases = {"sl": "shifting", "tl": "triangular", "tpl": "trapezoid",
                   "majority-inequality": "majority"}
        return cls(aliases.get(text.lower(), text.lower()))

    @property
    def short(self) -> str:
        return {"shifting": "SL", "triangular": "TL", "trapezoid": "TpL", "majority": "MI"}[self.value]


@dataclass(frozen=True)
class Schema:
    """Premise pairs per relation, over named element variables; conclusion pair in T."""

    variables: tuple[str, ...]
    R: tuple[tuple[str, str], ...]
    S: tuple[tuple[str, str], ...]
    T: tuple[tuple[str, str], ...]
    conclusion: tuple[str, str]


SCHEMAS = {
    LemmaKind.SHIFTING: Schema(("x", "y", "u", "v"), (("x", "y"), ("u", "v")),
                               (("x", "u"), ("y", "v")), (("x", "y"),), ("u", "v")),
    LemmaKind.TRIANGULAR: Schema(("u", "y", "v"), (("u", "v"),), (("y", "v"),),
                                 (("u", "y"),), ("u", "v")),
    LemmaKind.TRAPEZOID: Schema(("x", "y", "u", "v"), (("u", "v"),),
                                (("x", "u"), ("y", "v")), (("x", "y"),), ("u", "v")),
}


@dataclass
class Counterexample:
    R: BinRel
    S: BinRel
    T: BinRel
    assignment: dict[str, int]
    # compatible W with W°W = relation, for roles drawn from the positive class
    positivity: dict[str, BinRel] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"R": self.R.to_json(), "S": self.S.to_json(), "T": self.T.to_json(),
               "size": self.R.dom_size, "assignment": dict(self.assignment)}
        if self.positivity:
            out["positivity"] = {k: w.to_json() for k, w in sorted(self.positivity.items())}
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Counterexample":
        n = data["size"]
        rel = {k: BinRel.from_pairs(data[k], n) for k in "RST"}
        pos = {k: BinRel.from_pairs(v, n) for k, v in data.get("positivity", {}).items()}
        return cls(rel["R"], rel["S"], rel["T"], {k: int(v) for k, v in data["assignment"].items()}, pos)


@dataclass
class LemmaVerdict:
    kind: LemmaKind
    classes: tuple[RelClass, RelClass, RelClass]
    holds: bool | None
    exhaustive: bool
    counterexample: Counterexample | None = None
    reason: str = ""

    @property
    def status(self) -> str:
        if self.holds is None:
            return "inconclusive"
        if not self.holds:
            return "fails"
        return "holds" if self.exhaustive else "holds-on-sample"

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "classes": class_spec(self.classes), "status": self.status,
               "holds": self.holds, "exhaustive": self.exhaustive}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample.to_json()
        if self.reason:
            out["reason"] = self.reason
        return out


def class_spec(classes: Sequence[RelClass]) -> str:
    r, s, t = classes
    if r == s == t:
        return r.value
    return f"R={r.value},S={s.value},T={t.value}"


def parse_classes(text: str) -> tuple[RelClass, RelClass, RelClass]:
    """``"cong"``, ``"R=pos,S=refl,T=pos"`` or ``"refl,S=cong"``.

    A bare class name sets the default for roles not named explicitly; with no
    bare name the default is cong.
    """
    default = RelClass.CONGRUENCE
    roles: dict[str, RelClass] = {}
    for part in text.split(","):
        key, eq, val = part.partition("=")
        if not eq:
            default = RelClass.parse(key.strip())
            continue
        key = key.strip().upper()
        if key not in ("R", "S", "T"):
            raise RelationError(f"unknown relation role {key!r}")
        roles[key] = RelClass.parse(val.strip())
    return tuple(roles.get(k, default) for k in "RST")


def _pair_bit(n, a, b):
    return 1 << (a * n + b)


class _Role:
    """Least member (closure classes) or all members (otherwise) above a set of pairs."""

    def __init__(self, alg: FiniteAlgebra, cls: RelClass, budget: int):
        self.alg = alg
        self.cls = cls
        self.cache: dict[int, int] = {}
        self.family = None
        if not cls.is_closure_system:
            self.family = enumerate_relations(alg, cls, budget)
            self.codes = [r.code for r in self.family]
            self.arr = _as_words(self.codes, alg.size ** 2)

    @property
    def exhaustive(self) -> bool:
        return self.family is None or self.family.exhaustive

    def least(self, code: int) -> int:
        got = self.cache.get(code)
        if got is None:
            got = self.cache[code] = class_closure(self.alg, self.cls, code).code
        return got

    def above(self, code: int) -> list[int]:
        """Codes of the class containing ``code``, in increasing order."""
        if self.family is None:
            return [self.least(code)]
        need = _as_words([code], self.alg.size ** 2)[0]
        ok = ((self.arr & need) == need).all(axis=1)
        return [self.codes[i] for i in np.flatnonzero(ok)]

    def first_above_avoiding(self, code: int, avoid: int) -> int | None:
        """Least-coded member containing ``code`` but not the ``avoid`` bit, if any."""
        if self.family is None:
            c = self.least(code)
            return None if c & avoid else c
        need = _as_words([code], self.alg.size ** 2)[0]
        bad = _as_words([avoid], self.alg.size ** 2)[0]
        ok = ((self.arr & need) == need).all(axis=1) & ~((self.arr & bad) != 0).any(axis=1)
        hits = np.flatnonzero(ok)
        return self.codes[hits[0]] if len(hits) else None

    def witness(self, code: int) -> BinRel | None:
        if self.family is not None and self.family.witnesses:
            return self.family.witnesses.get(code)
        return None


def _as_words(codes: Sequence[int], nbits: int) -> np.ndarray:
    """Python-int bitmasks as rows of uint64 words."""
    words = max(1, (nbits + 63) // 64)
    out = np.zeros((len(codes), words), dtype=np.uint64)
    mask = (1 << 64) - 1
    for i, c in enumerate(codes):
        for w in range(words):
            out[i, w] = (c >> (64 * w)) & mask
    return out


def check_lemma(alg: FiniteAlgebra, kind: LemmaKind | str, cls_R: RelClass | str = RelClass.CONGRUENCE,
                cls_S: RelClass | str | None = None, cls_T: RelClass | str | None = None,
                budget: int = DEFAULT_BUDGET, strategy: str = "auto") -> LemmaVerdict:
    """Decide a lemma over relation classes for R, S and T.

    Quantifies over all (R, S, T) from the classes with R∧S ≤ T and all
    element assignments matching the premise diagram. ``strategy="enumerate"``
    walks every triple of the enumerated families instead; it is slower and
    serves as a cross-check.
    """
    kind = LemmaKind.parse(kind) if isinstance(kind, str) else kind
    cls_R = RelClass.parse(cls_R) if isinstance(cls_R, str) else cls_R
    cls_S = cls_R if cls_S is None else (RelClass.parse(cls_S) if isinstance(cls_S, str) else cls_S)
    cls_T = cls_R if cls_T is None else (RelClass.parse(cls_T) if isinstance(cls_T, str) else cls_T)
    classes = (cls_R, cls_S, cls_T)
    if kind is LemmaKind.MAJORITY:
        if not cls_R == cls_S == cls_T:
            raise RelationError("the majority inequality takes a single relation class")
        return check_majority_inequality(alg, cls_R, budget, strategy)
    try:
        if strategy == "enumerate":
            return _check_by_enumeration(alg, kind, classes, budget)
        if strategy != "auto":
            raise ValueError(f"unknown strategy {strategy!r}")
        return _check_by_closure(alg, kind, classes, budget)
    except BudgetExceeded as exc:
        return LemmaVerdict(kind, classes, None, False, reason=str(exc))


def _check_by_closure(alg, kind, classes, budget) -> LemmaVerdict:
    n = alg.size
    schema = SCHEMAS[kind]
    roles = [_Role(alg, c, budget) for c in classes]
    exhaustive = all(r.exhaustive for r in roles)
    role_r, role_s, role_t = roles
    for values in itertools.product(range(n), repeat=len(schema.variables)):
        env = dict(zip(schema.variables, values))
        need = [sum({_pair_bit(n, env[a], env[b]) for a, b in pairs})
                for pairs in (schema.R, schema.S, schema.T)]
        concl = _pair_bit(n, env[schema.conclusion[0]], env[schema.conclusion[1]])
        if need[2] & concl:
            continue
        for r in role_r.above(need[0]):
            for s in role_s.above(need[1]):
                t = role_t.first_above_avoiding(need[2] | (r & s), concl)
                if t is not None:
                    return LemmaVerdict(kind, classes, False, exhaustive,
                                        _counterexample(n, roles, (r, s, t), env))
    return LemmaVerdict(kind, classes, True, exhaustive)


def _counterexample(n, roles, codes, env) -> Counterexample:
    rels = [BinRel(n, n, c) for c in codes]
    pos = {}
    for name, role, c in zip("RST", roles, codes):
        w = role.witness(c)
        if w is not None:
            pos[name] = w
    return Counterexample(*rels, dict(env), pos)


def _check_by_enumeration(alg, kind, classes, budget) -> LemmaVerdict:
    n = alg.size
    fams = [enumerate_relations(alg, c, budget) for c in classes]
    exhaustive = all(f.exhaustive for f in fams)
    schema = SCHEMAS[kind]
    assignments = [dict(zip(schema.variables, v))
                   for v in itertools.product(range(n), repeat=len(schema.variables))]
    for R in fams[0]:
        for S in fams[1]:
            RS = R & S
            for T in fams[2]:
                if not RS <= T:
                    continue
                for env in assignments:
                    if _premises_hold(schema, env, R, S, T) and (env[schema.conclusion[0]],
                                                                 env[schema.conclusion[1]]) not in T:
                        pos = {name: f.witnesses[rel.code] for name, f, rel in zip("RST", fams, (R, S, T))
                               if f.witnesses}
                        return LemmaVerdict(kind, classes, False, exhaustive,
                                            Counterexample(R, S, T, dict(env), pos))
    return LemmaVerdict(kind, classes, True, exhaustive)


def _premises_hold(schema: Schema, env, R, S, T) -> bool:
    for rel, pairs in ((R, schema.R), (S, schema.S), (T, schema.T)):
        for a, b in pairs:
            if (env[a], env[b]) not in rel:
                return False
    return True


def verify_counterexample(alg: FiniteAlgebra, kind: LemmaKind | str, classes: Sequence[RelClass],
                          cex: Counterexample) -> bool:
    """Class membership, side condition, premises and failed conclusion, all rechecked."""
    kind = LemmaKind.parse(kind) if isinstance(kind, str) else kind
    rels = {"R": cex.R, "S": cex.S, "T": cex.T}
    for (name, rel), cls in zip(rels.items(), classes):
        if rel.dom_size != alg.size:
            return False
        if not in_class(alg, cls, rel, cex.positivity.get(name)):
            return False
        if cls is RelClass.POSITIVE and name not in cex.positivity:
            return False
    env = cex.assignment
    if kind is LemmaKind.MAJORITY:
        a, b, c = env["a"], env["b"], env["c"]
        return ((a, c) in cex.R and (a, b) in cex.T and (b, c) in cex.S
                and (a, c) not in compose(cex.R & cex.S, cex.R & cex.T))
    schema = SCHEMAS[kind]
    if set(env) != set(schema.variables) or not all(0 <= v < alg.size for v in env.values()):
        return False
    if not (cex.R & cex.S) <= cex.T:
        return False
    return (_premises_hold(schema, env, cex.R, cex.S, cex.T)
            and (env[schema.conclusion[0]], env[schema.conclusion[1]]) not in cex.T)


def check_majority_inequality(alg: FiniteAlgebra, cls: RelClass | str = RelClass.REFLEXIVE,
                              budget: int = DEFAULT_BUDGET, strategy: str = "auto") -> LemmaVerdict:
    """R ∧ ST ≤ (R∧S)(R∧T) for all R, S, T in one class.

    A failure is a triple a, b, c with (a,c) in R, (a,b) in T, (b,c) in S and
    no b' with (a,b') in R∧T and (b',c) in R∧S. The right side only grows with
    the relations, so for closure classes the least relations through the three
    pairs decide each (a, b, c).
    """
    cls = RelClass.parse(cls) if isinstance(cls, str) else cls
    classes = (cls, cls, cls)
    kind = LemmaKind.MAJORITY
    n = alg.size
    if strategy == "enumerate":
        fam = enumerate_relations(alg, cls, budget)
        for R in fam:
            for S in fam:
                for T in fam:
                    lhs = R & compose(S, T)
                    rhs = compose(R & S, R & T)
                    if not lhs <= rhs:
                        a, c = next(p for p in lhs.pairs() if p not in rhs)
                        b = next(b for b in range(n) if (a, b) in T and (b, c) in S)
                        pos = {k: fam.witnesses[r.code] for k, r in zip("RST", (R, S, T)) if fam.witnesses}
                        return LemmaVerdict(kind, classes, False, fam.exhaustive,
                                            Counterexample(R, S, T, {"a": a, "b": b, "c": c}, pos))
        return LemmaVerdict(kind, classes, True, fam.exhaustive)
    if strategy != "auto":
        raise ValueError(f"unknown strategy {strategy!r}")
    role = _Role(alg, cls, budget)
    for a, b, c in itertools.product(range(n), repeat=3):
        for r in role.above(_pair_bit(n, a, c)):
            for t in role.above(_pair_bit(n, a, b)):
                for s in role.above(_pair_bit(n, b, c)):
                    R, S, T = (BinRel(n, n, x) for x in (r, s, t))
                    if (a, c) not in compose(R & S, R & T):
                        cex = _counterexample(n, (role, role, role), (r, s, t), {"a": a, "b": b, "c": c})
                        return LemmaVerdict(kind, classes, False, role.exhaustive, cex)
    return LemmaVerdict(kind, classes, True, role.exhaustive)


class PreconditionError(RelationError):
    """R∧S ≤ T does not hold for the relations handed to an inequality check."""


def relational_inequality(alg: FiniteAlgebra | None, kind: LemmaKind | str,
                          R: BinRel, S: BinRel, T: BinRel) -> bool:
    """Evaluate the composed-relation form of a lemma on concrete relations.

    Shifting: R ∧ S(R∧T)S ≤ T; Triangular: R ∧ ST ≤ T; Trapezoid: R ∧ STS ≤ T,
    with composites read as "apply the rightmost relation first". These forms
    match the element diagrams when S is symmetric.
    """
    kind = LemmaKind.parse(kind) if isinstance(kind, str) else kind
    for rel in (R, S, T):
        if not rel.square or (alg is not None and rel.dom_size != alg.size):
            raise RelationError("relations must be square on the algebra's carrier")
    if kind is LemmaKind.MAJORITY:
        return (R & compose(S, T)) <= compose(R & S, R & T)
    if not (R & S) <= T:
        raise PreconditionError("R∧S ≤ T fails")
    if kind is LemmaKind.SHIFTING:
        mid = compose(S, compose(R & T, S))
    elif kind is LemmaKind.TRIANGULAR:
        mid = compose(S, T)
    else:
        mid = compose(S, compose(T, S))
    return (R & mid) <= T


def element_check(kind: LemmaKind | str, R: BinRel, S: BinRel, T: BinRel) -> bool:
    """The element-wise diagram implication for one concrete triple (side condition not checked)."""
    kind = LemmaKind.parse(kind) if isinstance(kind, str) else kind
    schema = SCHEMAS[kind]
    n = R.dom_size
    for values in itertools.product(range(n), repeat=len(schema.variables)):
        env = dict(zip(schema.variables, values))
        if _premises_hold(schema, env, R, S, T) and (env[schema.conclusion[0]],
                                                     env[schema.conclusion[1]]) not in T:
            return False
    return True
