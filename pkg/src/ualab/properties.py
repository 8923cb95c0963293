"""Relational characterizations quantified over compatible relations.

Every property here is a universally quantified implication whose conclusion
only gets easier as the relation grows. So the least compatible relation
through the premise pairs decides each element assignment, which makes the
"closure" method exact without enumerating any family. The positive class is
the exception; it is not closed under intersection and is walked as a family.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import DEFAULT_BUDGET, FiniteAlgebra, close_mask, product_algebra
from .relations import (BinRel, RelClass, class_closure, compose, converse, enumerate_relations,
                        enumerate_subuniverses, is_compatible, kernel_pair)

PROPERTIES = ("refl-symmetric", "difunctional-all", "eeo-commute", "ppoppo", "dd", "pp",
              "positive-are-equiv")


@dataclass
class PropertyVerdict:
    name: str
    holds: bool
    exhaustive: bool
    witness: BinRel | None = None
    assignment: dict | None = None
    # sizes of the sorts X, A, U for ternary witnesses
    sorts: tuple[int, ...] | None = None

    @property
    def status(self) -> str:
        if not self.holds:
            return "fails"
        return "holds" if self.exhaustive else "holds-on-sample"

    def to_json(self) -> dict:
        out = {"property": self.name, "status": self.status, "holds": self.holds,
               "exhaustive": self.exhaustive}
        if self.witness is not None:
            out["witness"] = {"dom_size": self.witness.dom_size, "cod_size": self.witness.cod_size,
                              "pairs": self.witness.to_json()}
            if self.sorts is not None:
                out["witness"]["sorts"] = list(self.sorts)
        if self.assignment is not None:
            out["assignment"] = self.assignment
        return out


def is_difunctional(d: BinRel) -> bool:
    """D D° D = D."""
    return compose(d, compose(converse(d), d)) == d


def _bit(n, a, b):
    return 1 << (a * n + b)


def _closure(alg: FiniteAlgebra, cls: RelClass, code: int) -> BinRel:
    return class_closure(alg, cls, code)


def check_reflexive_symmetric(alg: FiniteAlgebra, budget: int = DEFAULT_BUDGET,
                              method: str = "closure") -> PropertyVerdict:
    """Every reflexive compatible relation is symmetric."""
    name = "refl-symmetric"
    n = alg.size
    if method == "enumerate":
        fam = enumerate_relations(alg, RelClass.REFLEXIVE, budget)
        for e in fam:
            if not e.is_symmetric():
                x, y = next((x, y) for x, y in e.pairs() if (y, x) not in e)
                return PropertyVerdict(name, False, fam.exhaustive, e, {"x": x, "y": y})
        return PropertyVerdict(name, True, fam.exhaustive)
    for x, y in itertools.product(range(n), repeat=2):
        e = _closure(alg, RelClass.REFLEXIVE, _bit(n, x, y))
        if (y, x) not in e:
            return PropertyVerdict(name, False, True, e, {"x": x, "y": y})
    return PropertyVerdict(name, True, True)


def check_difunctional_all(alg: FiniteAlgebra, budget: int = DEFAULT_BUDGET,
                           method: str = "closure") -> PropertyVerdict:
    """Every compatible relation D satisfies D D° D = D.

    D ≤ DD°D always, so a failure is x D a, b D a, b D y with (x, y) not in D.
    """
    name = "difunctional-all"
    n = alg.size
    if method == "enumerate":
        fam = enumerate_relations(alg, RelClass.ALL, budget)
        for d in fam:
            if not is_difunctional(d):
                return PropertyVerdict(name, False, fam.exhaustive, d, _difunctional_failure(d))
        return PropertyVerdict(name, True, fam.exhaustive)
    for x, a, b, y in itertools.product(range(n), repeat=4):
        d = _closure(alg, RelClass.ALL, _bit(n, x, a) | _bit(n, b, a) | _bit(n, b, y))
        if (x, y) not in d:
            return PropertyVerdict(name, False, True, d, {"x": x, "a": a, "b": b, "y": y})
    return PropertyVerdict(name, True, True)


def _difunctional_failure(d: BinRel) -> dict:
    for x, a in d.pairs():
        for b, a2 in d.pairs():
            if a2 != a:
                continue
            for b2, y in d.pairs():
                if b2 == b and (x, y) not in d:
                    return {"x": x, "a": a, "b": b, "y": y}
    raise AssertionError("relation is difunctional")


def check_EEo_commute(alg: FiniteAlgebra, budget: int = DEFAULT_BUDGET,
                      method: str = "closure") -> PropertyVerdict:
    """Every reflexive compatible E has E E° = E° E."""
    name = "eeo-commute"
    n = alg.size

    def differs(e):
        return compose(e, converse(e)) != compose(converse(e), e)

    if method == "enumerate":
        fam = enumerate_relations(alg, RelClass.REFLEXIVE, budget)
        for e in fam:
            if differs(e):
                return PropertyVerdict(name, False, fam.exhaustive, e)
        return PropertyVerdict(name, True, fam.exhaustive)
    # (x, z) in EE° iff y E x and y E z; (x, z) in E°E iff x E y and z E y
    for y, x, z in itertools.product(range(n), repeat=3):
        for code, other in ((_bit(n, y, x) | _bit(n, y, z), lambda e: compose(converse(e), e)),
                            (_bit(n, x, y) | _bit(n, z, y), lambda e: compose(e, converse(e)))):
            e = _closure(alg, RelClass.REFLEXIVE, code)
            if (x, z) not in other(e):
                return PropertyVerdict(name, False, True, e, {"x": x, "y": y, "z": z})
    return PropertyVerdict(name, True, True)


def check_PPoPPo(alg: FiniteAlgebra, budget: int = DEFAULT_BUDGET,
                 method: str = "closure") -> PropertyVerdict:
    """Every compatible P has P P° P P° = P P°.

    PP° ≤ PP°PP° always; a failure is y1 P x, y1 P w, y2 P w, y2 P z with no
    common P-predecessor of x and z.
    """
    name = "ppoppo"
    n = alg.size
    if method == "enumerate":
        fam = enumerate_relations(alg, RelClass.ALL, budget)
        for p in fam:
            if not _ppoppo_holds(p):
                return PropertyVerdict(name, False, fam.exhaustive, p)
        return PropertyVerdict(name, True, fam.exhaustive)
    for y1, x, w, y2, z in itertools.product(range(n), repeat=5):
        if x == z:
            continue
        code = _bit(n, y1, x) | _bit(n, y1, w) | _bit(n, y2, w) | _bit(n, y2, z)
        p = _closure(alg, RelClass.ALL, code)
        if not any((c, x) in p and (c, z) in p for c in range(n)):
            return PropertyVerdict(name, False, True, p, {"y1": y1, "x": x, "w": w, "y2": y2, "z": z})
    return PropertyVerdict(name, True, True)


def _ppoppo_holds(p: BinRel) -> bool:
    ppo = compose(p, converse(p))
    return compose(ppo, ppo) == ppo


def check_positive_reflexive_are_equivalences(alg: FiniteAlgebra,
                                              budget: int = DEFAULT_BUDGET) -> PropertyVerdict:
    """Every reflexive positive compatible relation (as enumerated, with witness) is an equivalence."""
    fam = enumerate_relations(alg, RelClass.POSITIVE, budget)
    for e in fam:
        if not e.is_equivalence():
            x, y, z = next((x, y, z) for x, y in e.pairs() for y2, z in e.pairs()
                           if y2 == y and (x, z) not in e)
            return PropertyVerdict("positive-are-equiv", False, fam.exhaustive, e, {"x": x, "y": y, "z": z})
    return PropertyVerdict("positive-are-equiv", True, fam.exhaustive)


# -- ternary relations D ⊆ (X×A)×U ------------------------------------------

@dataclass(frozen=True)
class TernaryRelView:
    """A subset of X×A×U viewed as a binary relation from the paired carrier X×A to U."""

    rel: BinRel
    x_size: int
    a_size: int

    @property
    def u_size(self) -> int:
        return self.rel.cod_size

    def pair(self, x: int, a: int) -> int:
        return x * self.a_size + a

    def has(self, x: int, a: int, u: int) -> bool:
        return (self.pair(x, a), u) in self.rel

    def triples(self) -> list[tuple[int, int, int]]:
        return [(*divmod(e, self.a_size), u) for e, u in self.rel.pairs()]

    @classmethod
    def from_code(cls, code: int, xs: int, as_: int, us: int) -> "TernaryRelView":
        return cls(BinRel(xs * as_, us, code), xs, as_)

    @classmethod
    def from_triples(cls, triples, xs: int, as_: int, us: int) -> "TernaryRelView":
        return cls(BinRel.from_pairs([(x * as_ + a, u) for x, a, u in triples], xs * as_, us), xs, as_)


def _sorts(alg, X, A, U):
    return (X or alg), (A or alg), (U or alg)


@lru_cache(maxsize=64)
def _triple_algebra(X: FiniteAlgebra, A: FiniteAlgebra, U: FiniteAlgebra) -> FiniteAlgebra:
    # element ((x, a), u) is encoded (x*|A| + a)*|U| + u, the same bit as in the BinRel view
    return product_algebra(product_algebra(X, A), U)


def _tcode(sa, su, x, a, u):
    return 1 << ((x * sa + a) * su + u)


def _tclose(alg3: FiniteAlgebra, code: int) -> int:
    mask = np.zeros(alg3.size, dtype=bool)
    c = code
    while c:
        low = c & -c
        mask[low.bit_length() - 1] = True
        c ^= low
    out = close_mask(alg3, mask)
    return int(sum(1 << int(i) for i in np.flatnonzero(out)))


def dd_element_holds(d: TernaryRelView) -> bool:
    return _dd_failure(d) is None


def _dd_failure(d: TernaryRelView):
    trip = set(d.triples())
    by_u: dict[int, list] = {}
    for x, a, u in sorted(trip):
        by_u.setdefault(u, []).append((x, a))
    for x, a, u in sorted(trip):
        for y, b in by_u[u]:
            for v in range(d.u_size):
                if (y, a, v) in trip and (x, a, v) not in trip:
                    return {"x": x, "a": a, "u": u, "y": y, "b": b, "v": v}
    return None


def pp_element_holds(p: TernaryRelView) -> bool:
    return _pp_failure(p) is None


def _pp_failure(p: TernaryRelView):
    trip = set(p.triples())
    by_u: dict[int, list] = {}
    for x, a, u in sorted(trip):
        by_u.setdefault(u, []).append((x, a))
    images: dict[tuple, set] = {}
    for x, a, u in trip:
        images.setdefault((x, a), set()).add(u)
    for x, a, u in sorted(trip):
        for y, b in by_u[u]:
            for c in range(p.a_size):
                for v in sorted(images.get((y, c), ())):
                    for z, a2 in by_u[v]:
                        if a2 != a:
                            continue
                        if not images[(x, a)] & images[(z, a)]:
                            return {"x": x, "a": a, "u": u, "y": y, "b": b, "c": c, "v": v, "z": z}
    return None


def dd_relational_holds(d: TernaryRelView) -> bool:
    """(Eq(π_A) ∧ D D° Eq(π_X)) D ≤ D, composites read left to right (first factor applied first)."""
    eq_x = kernel_pair(d.x_size, d.a_size, 0)
    eq_a = kernel_pair(d.x_size, d.a_size, 1)
    D = d.rel
    inner = eq_a & compose(eq_x, compose(converse(D), D))
    return compose(D, inner) <= D


def pp_relational_holds(p: TernaryRelView) -> bool:
    """Eq(π_A) ∧ P P° Eq(π_X) P P° ≤ P P°, composites read left to right."""
    eq_x = kernel_pair(p.x_size, p.a_size, 0)
    eq_a = kernel_pair(p.x_size, p.a_size, 1)
    P = p.rel
    ppo = compose(converse(P), P)  # (e, f) iff e P w and f P w for some w
    return (eq_a & compose(ppo, compose(eq_x, ppo))) <= ppo


def enumerate_ternary(alg: FiniteAlgebra, X: FiniteAlgebra | None = None, A: FiniteAlgebra | None = None,
                      U: FiniteAlgebra | None = None) -> list[TernaryRelView]:
    """Every compatible ternary relation, by subset filtering (at most 20 triples in X×A×U)."""
    X, A, U = _sorts(alg, X, A, U)
    alg3 = _triple_algebra(X, A, U)
    return [TernaryRelView.from_code(c, X.size, A.size, U.size) for c in enumerate_subuniverses(alg3)]


def check_DD(alg: FiniteAlgebra, budget: int = DEFAULT_BUDGET, X: FiniteAlgebra | None = None,
             A: FiniteAlgebra | None = None, U: FiniteAlgebra | None = None,
             method: str = "closure") -> PropertyVerdict:
    """(x,a) D u, (y,b) D u, (y,a) D v ⇒ (x,a) D v for every compatible D ⊆ X×A×U."""
    X, A, U = _sorts(alg, X, A, U)
    return _ternary_check("dd", X, A, U, method,
                          lambda x, a, u, y, b, v: ((x, a, u), (y, b, u), (y, a, v)),
                          _dd_failure, lambda env, t: t.has(env["x"], env["a"], env["v"]),
                          ("x", "a", "u", "y", "b", "v"))


def check_PP(alg: FiniteAlgebra, budget: int = DEFAULT_BUDGET, X: FiniteAlgebra | None = None,
             A: FiniteAlgebra | None = None, U: FiniteAlgebra | None = None,
             method: str = "closure") -> PropertyVerdict:
    """(x,a)Pu, (y,b)Pu, (y,c)Pv, (z,a)Pv ⇒ (x,a)Pw and (z,a)Pw for some w."""
    X, A, U = _sorts(alg, X, A, U)

    def concl(env, t):
        return any(t.has(env["x"], env["a"], w) and t.has(env["z"], env["a"], w) for w in range(t.u_size))

    return _ternary_check("pp", X, A, U, method,
                          lambda x, a, u, y, b, c, v, z: ((x, a, u), (y, b, u), (y, c, v), (z, a, v)),
                          _pp_failure, concl, ("x", "a", "u", "y", "b", "c", "v", "z"))


def _ternary_check(name, X, A, U, method, premises, failure, conclusion, names) -> PropertyVerdict:
    sorts = (X.size, A.size, U.size)
    if method == "enumerate":
        for t in enumerate_ternary(X, X, A, U):
            env = failure(t)
            if env is not None:
                return PropertyVerdict(name, False, True, t.rel, env, sorts)
        return PropertyVerdict(name, True, True)
    if method != "closure":
        raise ValueError(f"unknown method {method!r}")
    alg3 = _triple_algebra(X, A, U)
    carriers = {"x": X.size, "y": X.size, "z": X.size, "a": A.size, "b": A.size, "c": A.size,
                "u": U.size, "v": U.size}
    seen: dict[int, TernaryRelView] = {}
    for values in itertools.product(*(range(carriers[k]) for k in names)):
        env = dict(zip(names, values))
        code = 0
        for x, a, u in premises(*values):
            code |= _tcode(A.size, U.size, x, a, u)
        t = seen.get(code)
        if t is None:
            t = seen[code] = TernaryRelView.from_code(_tclose(alg3, code), *sorts)
        if not conclusion(env, t):
            return PropertyVerdict(name, False, True, t.rel, env, sorts)
    return PropertyVerdict(name, True, True)


def verify_ternary_witness(X: FiniteAlgebra, A: FiniteAlgebra, U: FiniteAlgebra, name: str,
                           verdict: PropertyVerdict) -> bool:
    """Compatibility of the witness and failure of the element implication at its assignment."""
    if verdict.holds or verdict.witness is None:
        return False
    t = TernaryRelView(verdict.witness, X.size, A.size)
    alg3 = _triple_algebra(X, A, U)
    if not alg3.is_closed(_code_bits(t.rel.code)):
        return False
    env = verdict.assignment
    if name == "dd":
        return (t.has(env["x"], env["a"], env["u"]) and t.has(env["y"], env["b"], env["u"])
                and t.has(env["y"], env["a"], env["v"]) and not t.has(env["x"], env["a"], env["v"]))
    return (t.has(env["x"], env["a"], env["u"]) and t.has(env["y"], env["b"], env["u"])
            and t.has(env["y"], env["c"], env["v"]) and t.has(env["z"], env["a"], env["v"])
            and not any(t.has(env["x"], env["a"], w) and t.has(env["z"], env["a"], w)
                        for w in range(t.u_size)))


def _code_bits(code: int) -> list[int]:
    out = []
    while code:
        low = code & -code
        out.append(low.bit_length() - 1)
        code ^= low
    return out


def verify_binary_witness(alg: FiniteAlgebra, verdict: PropertyVerdict) -> bool:
    """A failing binary-property verdict: witness is compatible, in its class, and violates the property."""
    w = verdict.witness
    if verdict.holds or w is None or not is_compatible(alg, w):
        return False
    name = verdict.name
    if name == "refl-symmetric":
        return w.is_reflexive() and not w.is_symmetric()
    if name == "difunctional-all":
        return not is_difunctional(w)
    if name == "eeo-commute":
        return w.is_reflexive() and compose(w, converse(w)) != compose(converse(w), w)
    if name == "ppoppo":
        return not _ppoppo_holds(w)
    if name == "positive-are-equiv":
        fam = enumerate_relations(alg, RelClass.POSITIVE)
        wit = fam.witnesses.get(w.code)
        return (wit is not None and is_compatible(alg, wit) and compose(converse(wit), wit) == w
                and w.is_reflexive() and not w.is_equivalence())
    raise ValueError(f"unknown property {name!r}")


def check_property(alg: FiniteAlgebra, name: str, budget: int = DEFAULT_BUDGET) -> PropertyVerdict:
    fn = {"refl-symmetric": check_reflexive_symmetric, "difunctional-all": check_difunctional_all,
          "eeo-commute": check_EEo_commute, "ppoppo": check_PPoPPo, "dd": check_DD, "pp": check_PP,
          "positive-are-equiv": check_positive_reflexive_are_equivalences}.get(name)
    if fn is None:
        raise ValueError(f"unknown property {name!r}; choose from {', '.join(PROPERTIES)}")
    return fn(alg, budget)
