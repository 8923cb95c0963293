"""Existence of terms satisfying small systems of identities, by subpower membership.

A term operation of arity k restricted to finitely many argument tuples is a
vector in A^m (one coordinate per tuple). Those vectors are exactly the
subalgebra of A^m generated by the k projection vectors, so an identity
system is solvable iff that subalgebra contains vectors with the prescribed
values. The closure keeps provenance, which yields an explicit term for every
witness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import (DEFAULT_BUDGET, App, BudgetExceeded, FiniteAlgebra, Term, Var,
                      close_subpower, eval_term_vectors, term_size, term_str)

TERM_PRINT_LIMIT = 4000  # largest term (in tree nodes) rendered as text


@dataclass(frozen=True)
class Fixed:
    """``unknown(args) = value`` for every instantiation of the variables."""

    unknown: str
    args: tuple[str, ...]
    value: str


@dataclass(frozen=True)
class Linked:
    """``unknown1(args1) = unknown2(args2)`` for every instantiation."""

    unknown1: str
    args1: tuple[str, ...]
    unknown2: str
    args2: tuple[str, ...]


@dataclass(frozen=True)
class IdentitySystem:
    name: str
    unknowns: tuple[tuple[str, int], ...]
    constraints: tuple = ()

    def arity(self, unknown: str) -> int:
        return dict(self.unknowns)[unknown]

    @property
    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for c in self.constraints:
            names = (c.args + (c.value,)) if isinstance(c, Fixed) else (c.args1 + c.args2)
            for v in names:
                seen.setdefault(v)
        return tuple(seen)


def _sys(name, unknowns, *constraints):
    return IdentitySystem(name, tuple(unknowns), tuple(constraints))


def _f(u, args, value):
    return Fixed(u, tuple(args), value)


def _l(u1, a1, u2, a2):
    return Linked(u1, tuple(a1), u2, tuple(a2))


MALTSEV = _sys("maltsev", [("p", 3)],
               _f("p", "xyy", "x"), _f("p", "yyx", "x"))
PIXLEY = _sys("pixley", [("p", 3)],
              _f("p", "xyy", "x"), _f("p", "xxy", "y"), _f("p", "xyx", "x"))
MAJORITY = _sys("majority", [("m", 3)],
                _f("m", "xxy", "x"), _f("m", "xyx", "x"), _f("m", "yxx", "x"))
QUATERNARY_PQ = _sys("quaternary-pq", [("p", 4), ("q", 4)],
                     _f("p", "xyyz", "x"), _l("p", "uuvv", "q", "uuvv"), _f("q", "xyyz", "z"))
QUATERNARY_PQX = _sys("quaternary-pqx", [("p", 4), ("q", 4)],
                      _f("p", "xyyz", "x"), _l("p", "xxyy", "q", "xxyy"), _f("q", "xyyz", "z"),
                      _f("p", "xyzx", "x"), _f("q", "xyzx", "x"))
LIPPARINI_RS = _sys("lipparini-rs", [("r", 3), ("s", 3)],
                    _f("r", "xyy", "x"), _l("r", "xxy", "s", "xyy"), _f("s", "xxy", "y"),
                    _f("r", "xyx", "x"), _f("s", "xyx", "x"))

NAMED_SYSTEMS = {s.name: s for s in
                 (MALTSEV, PIXLEY, MAJORITY, QUATERNARY_PQ, QUATERNARY_PQX, LIPPARINI_RS)}


@dataclass
class TermWitness:
    """Values of a term operation on the constraint tuples, and the term itself when known."""

    unknown: str
    arity: int
    coords: tuple[tuple[int, ...], ...]
    values: tuple[int, ...]
    term: Term | None = None

    def term_text(self) -> str | None:
        if self.term is None or term_size(self.term) > TERM_PRINT_LIMIT:
            return None
        return term_str(self.term)

    def to_json(self) -> dict:
        return {"arity": self.arity,
                "table": [[list(c), v] for c, v in zip(self.coords, self.values)],
                "term": self.term_text()}


@dataclass
class TermSearchResult:
    system: str
    found: bool | None  # None: inconclusive (budget)
    witnesses: dict[str, TermWitness] = field(default_factory=dict)
    reason: str = ""
    subpower_sizes: dict[int, int] = field(default_factory=dict)

    @property
    def status(self) -> str:
        return {True: "found", False: "not-found", None: "inconclusive"}[self.found]

    def to_json(self) -> dict:
        out = {"system": self.system, "found": self.found, "status": self.status,
               "witness_tables": {u: w.to_json() for u, w in self.witnesses.items()}}
        if self.reason:
            out["reason"] = self.reason
        return out


def _instances(pattern_vars: Sequence[str], n: int):
    """Every assignment of carrier elements to the variables, lexicographically."""
    for values in itertools.product(range(n), repeat=len(pattern_vars)):
        yield dict(zip(pattern_vars, values))


def solve_identity_system(alg: FiniteAlgebra, system: IdentitySystem,
                          budget: int = DEFAULT_BUDGET) -> TermSearchResult:
    n = alg.size
    variables = system.variables
    arities = dict(system.unknowns)

    # coordinate tuples per arity, deduplicated and sorted
    coord_sets: dict[int, set] = {k: set() for k in set(arities.values())}
    required: dict[str, dict[tuple, int]] = {u: {} for u in arities}
    links = []  # (u1, u2, [(t1, t2), ...])
    for c in system.constraints:
        if isinstance(c, Fixed):
            for inst in _instances(variables, n):
                t = tuple(inst[v] for v in c.args)
                val = inst[c.value]
                coord_sets[arities[c.unknown]].add(t)
                prev = required[c.unknown].setdefault(t, val)
                if prev != val:
                    return TermSearchResult(system.name, False,
                                            reason=f"{c.unknown}{t} must equal both {prev} and {val}")
        else:
            pairs = []
            for inst in _instances(variables, n):
                t1 = tuple(inst[v] for v in c.args1)
                t2 = tuple(inst[v] for v in c.args2)
                coord_sets[arities[c.unknown1]].add(t1)
                coord_sets[arities[c.unknown2]].add(t2)
                pairs.append((t1, t2))
            links.append((c.unknown1, c.unknown2, pairs))

    coords = {k: sorted(s) for k, s in coord_sets.items()}
    pos = {k: {t: i for i, t in enumerate(cs)} for k, cs in coords.items()}

    def attempt(vecs_by_k):
        # candidate indices per unknown: vectors matching the fixed values
        candidates: dict[str, np.ndarray] = {}
        for u, k in arities.items():
            if k not in vecs_by_k:
                candidates[u] = np.zeros(0, dtype=np.int64)
                continue
            vecs = vecs_by_k[k]
            ok = np.ones(len(vecs), dtype=bool)
            for t, val in required[u].items():
                ok &= vecs[:, pos[k][t]] == val
            candidates[u] = _lex_order(vecs, np.flatnonzero(ok))
        return _choose(system, arities, vecs_by_k, pos, candidates, links)

    live = [k for k, cs in coords.items() if cs]
    early: dict = {}

    def stop(vecs, first_new):
        # geometric spacing keeps the total checking cost near linear
        if len(vecs) < early.get("next", 0):
            return False
        early["next"] = int(len(vecs) * 1.25) + 1
        got = attempt({live[0]: vecs})
        if got is not None:
            early["chosen"] = got
            return True
        return False

    subpowers = {}
    try:
        for k in live:
            cs = coords[k]
            gens = [[t[j] for t in cs] for j in range(k)]
            # stopping early is only sound when a single subpower decides everything
            hook = stop if len(live) == 1 else None
            subpowers[k] = close_subpower(alg, len(cs), gens, budget, stop=hook)
    except BudgetExceeded as exc:
        return TermSearchResult(system.name, None, reason=str(exc))
    sizes = {k: len(sp) for k, sp in subpowers.items() if sp.complete}

    if "chosen" in early:
        chosen = early["chosen"]
    else:
        chosen = attempt({k: sp.vectors for k, sp in subpowers.items()})
    if chosen is None:
        return TermSearchResult(system.name, False, reason="no vectors satisfy the constraints",
                                subpower_sizes=sizes)

    witnesses = {}
    for u, k in arities.items():
        if k not in subpowers:
            # unconstrained unknown: any projection
            witnesses[u] = TermWitness(u, k, (), (), Var(0) if k else None)
            continue
        idx = chosen[u]
        sp = subpowers[k]
        witnesses[u] = TermWitness(u, k, tuple(coords[k]), tuple(int(v) for v in sp.vectors[idx]),
                                   sp.term(idx))
    result = TermSearchResult(system.name, True, witnesses, subpower_sizes=sizes)
    if not verify_witnesses(alg, system, result.witnesses):
        raise AssertionError(f"{system.name}: witness failed re-verification")  # closure bug
    return result


def _lex_order(vecs: np.ndarray, idx: np.ndarray) -> np.ndarray:
    if len(idx) == 0:
        return idx
    sub = vecs[idx]
    order = np.lexsort(sub.T[::-1])
    return idx[order]


def _choose(system, arities, vecs_by_k, pos, candidates, links):
    """Pick one vector per unknown satisfying all links; lexicographically first."""
    unknowns = [u for u, _ in system.unknowns]
    if any(len(candidates[u]) == 0 for u in unknowns if arities[u] in vecs_by_k):
        return None
    # links within one unknown just filter its candidates
    for u1, u2, pairs in links:
        if u1 == u2:
            k = arities[u1]
            vecs = vecs_by_k[k]
            c = candidates[u1]
            ok = np.ones(len(c), dtype=bool)
            for t1, t2 in pairs:
                ok &= vecs[c, pos[k][t1]] == vecs[c, pos[k][t2]]
            candidates[u1] = c[ok]
            if not len(candidates[u1]):
                return None
    cross = [(u1, u2, p) for u1, u2, p in links if u1 != u2]
    linked = sorted({u for u1, u2, _ in cross for u in (u1, u2)}, key=unknowns.index)
    chosen = {u: int(candidates[u][0]) for u in unknowns
              if u not in linked and arities[u] in vecs_by_k}
    if not cross:
        return chosen
    if len(linked) != 2:
        raise NotImplementedError("linked constraints may connect at most two unknowns")
    a, b = linked
    ka, kb = arities[a], arities[b]
    cols_a, cols_b = [], []
    for u1, u2, pairs in cross:
        for t1, t2 in pairs:
            ta, tb = (t1, t2) if u1 == a else (t2, t1)
            cols_a.append(pos[ka][ta])
            cols_b.append(pos[kb][tb])
    va = vecs_by_k[ka]
    vb = vecs_by_k[kb]
    buckets: dict[bytes, int] = {}
    for j in candidates[b]:  # lexicographic, so the first kept is smallest
        buckets.setdefault(vb[j, cols_b].tobytes(), int(j))
    for i in candidates[a]:
        j = buckets.get(va[i, cols_a].tobytes())
        if j is not None:
            chosen[a], chosen[b] = int(i), j
            return chosen
    return None


def verify_witnesses(alg: FiniteAlgebra, system: IdentitySystem,
                     witnesses: dict[str, TermWitness]) -> bool:
    """Check every constraint instantiation, by evaluating the terms when present
    and otherwise by reading the value tables."""
    n = alg.size
    variables = system.variables

    def value_fn(u):
        w = witnesses[u]
        if w.term is not None:
            return lambda tuples: eval_term_vectors(
                alg, w.term, [np.array([t[j] for t in tuples]) for j in range(w.arity)]
                if w.arity else [np.zeros(len(tuples), dtype=np.int64)])
        table = dict(zip(w.coords, w.values))
        return lambda tuples: np.array([table[t] for t in tuples])

    insts = list(_instances(variables, n))
    for c in system.constraints:
        if isinstance(c, Fixed):
            tuples = [tuple(i[v] for v in c.args) for i in insts]
            want = np.array([i[c.value] for i in insts])
            if not np.array_equal(value_fn(c.unknown)(tuples), want):
                return False
        else:
            t1 = [tuple(i[v] for v in c.args1) for i in insts]
            t2 = [tuple(i[v] for v in c.args2) for i in insts]
            if not np.array_equal(value_fn(c.unknown1)(t1), value_fn(c.unknown2)(t2)):
                return False
    return True


def find_maltsev(alg, budget=DEFAULT_BUDGET):
    return solve_identity_system(alg, MALTSEV, budget)


def find_pixley(alg, budget=DEFAULT_BUDGET):
    return solve_identity_system(alg, PIXLEY, budget)


def find_majority(alg, budget=DEFAULT_BUDGET):
    return solve_identity_system(alg, MAJORITY, budget)


def find_quaternary_pq(alg, budget=DEFAULT_BUDGET):
    return solve_identity_system(alg, QUATERNARY_PQ, budget)


def find_quaternary_pqx(alg, budget=DEFAULT_BUDGET):
    """The quaternary system strengthened with p(x,y,z,x) = x = q(x,y,z,x)."""
    return solve_identity_system(alg, QUATERNARY_PQX, budget)


def find_lipparini_rs(alg, budget=DEFAULT_BUDGET):
    return solve_identity_system(alg, LIPPARINI_RS, budget)


FINDERS = {
    "maltsev": find_maltsev,
    "pixley": find_pixley,
    "majority": find_majority,
    "quaternary-pq": find_quaternary_pq,
    "quaternary-pqx": find_quaternary_pqx,
    "lipparini-rs": find_lipparini_rs,
}


# -- derived witnesses -----------------------------------------------------

def _witness_for(alg, system, unknown, term):
    """Tabulate ``term`` on the constraint tuples of ``unknown`` in ``system``."""
    k = system.arity(unknown)
    tuples = set()
    for c in system.constraints:
        for inst in _instances(system.variables, alg.size):
            if isinstance(c, Fixed) and c.unknown == unknown:
                tuples.add(tuple(inst[v] for v in c.args))
            elif isinstance(c, Linked):
                if c.unknown1 == unknown:
                    tuples.add(tuple(inst[v] for v in c.args1))
                if c.unknown2 == unknown:
                    tuples.add(tuple(inst[v] for v in c.args2))
    coords = tuple(sorted(tuples))
    vals = eval_term_vectors(alg, term, [np.array([t[j] for t in coords]) for j in range(k)])
    return TermWitness(unknown, k, coords, tuple(int(v) for v in vals), term)


def quaternary_from_maltsev(alg: FiniteAlgebra, maltsev: TermSearchResult) -> TermSearchResult:
    """p(x,y,z,w) = m(x,y,z), q = fourth projection; re-verified by evaluation."""
    m = maltsev.witnesses["p"].term
    p = _substitute(m, [Var(0), Var(1), Var(2)])
    wit = {"p": _witness_for(alg, QUATERNARY_PQ, "p", p),
           "q": _witness_for(alg, QUATERNARY_PQ, "q", Var(3))}
    ok = verify_witnesses(alg, QUATERNARY_PQ, wit)
    return TermSearchResult(QUATERNARY_PQ.name, ok, wit if ok else {},
                            reason="" if ok else "derived terms failed verification")


def maltsev_from_pixley(alg: FiniteAlgebra, pixley: TermSearchResult) -> TermSearchResult:
    p = pixley.witnesses["p"].term
    wit = {"p": _witness_for(alg, MALTSEV, "p", p)}
    ok = verify_witnesses(alg, MALTSEV, wit)
    return TermSearchResult(MALTSEV.name, ok, wit if ok else {})


def majority_from_pixley(alg: FiniteAlgebra, pixley: TermSearchResult) -> TermSearchResult:
    """m(x,y,z) = p(x, p(x,y,z), z)."""
    p = pixley.witnesses["p"].term
    inner = _substitute(p, [Var(0), Var(1), Var(2)])
    m = _substitute(p, [Var(0), inner, Var(2)])
    wit = {"m": _witness_for(alg, MAJORITY, "m", m)}
    ok = verify_witnesses(alg, MAJORITY, wit)
    return TermSearchResult(MAJORITY.name, ok, wit if ok else {})


def _substitute(t: Term, replacement: Sequence[Term]) -> Term:
    from .algebra import _postorder
    built: dict[int, Term] = {}
    for node in _postorder(t):
        if isinstance(node, Var):
            built[id(node)] = replacement[node.index]
        else:
            built[id(node)] = App(node.op, tuple(built[id(c)] for c in node.args))
    return built[id(t)]
