import itertools

import pytest
from hypothesis import given, strategies as st

from ualab.algebra import trivial_like
from ualab.properties import (PROPERTIES, PropertyVerdict, TernaryRelView, check_DD,
                              check_EEo_commute, check_PP, check_PPoPPo, check_difunctional_all,
                              check_positive_reflexive_are_equivalences, check_property,
                              check_reflexive_symmetric, dd_element_holds, dd_relational_holds,
                              enumerate_ternary, is_difunctional, pp_element_holds,
                              pp_relational_holds, verify_binary_witness, verify_ternary_witness)
from ualab.relations import BinRel

from oracles import brute_relations, compose_pairs, converse_pairs, op_apply
from strategies import relations

BINARY = {
    "refl-symmetric": check_reflexive_symmetric,
    "difunctional-all": check_difunctional_all,
    "eeo-commute": check_EEo_commute,
    "ppoppo": check_PPoPPo,
}


def _brute_binary(alg, name):
    if name == "refl-symmetric":
        return all(r == converse_pairs(r) for r in brute_relations(alg, "refl"))
    if name == "difunctional-all":
        return all(compose_pairs(r, compose_pairs(converse_pairs(r), r)) == r
                   for r in map(set, brute_relations(alg, "all")))
    if name == "eeo-commute":
        return all(compose_pairs(r, converse_pairs(r)) == compose_pairs(converse_pairs(r), r)
                   for r in map(set, brute_relations(alg, "refl")))
    if name == "ppoppo":
        def holds(p):
            ppo = compose_pairs(converse_pairs(p), p)
            return compose_pairs(ppo, ppo) == ppo
        return all(holds(set(r)) for r in brute_relations(alg, "all"))
    raise ValueError(name)


SMALL = ["bare-2", "bare-3", "bool2", "chain-2", "chain-3", "impl2", "z2", "trivial-1"]


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("prop", sorted(BINARY))
def test_binary_properties_match_brute_force(corpus, name, prop):
    alg = corpus[name]
    v = BINARY[prop](alg)
    assert v.exhaustive
    assert v.holds == _brute_binary(alg, prop)
    if not v.holds:
        assert verify_binary_witness(alg, v)


@pytest.mark.parametrize("prop", sorted(BINARY))
def test_closure_and_enumeration_agree(any_algebra, prop):
    a = BINARY[prop](any_algebra)
    b = BINARY[prop](any_algebra, method="enumerate")
    assert a.holds == b.holds
    for v in (a, b):
        if not v.holds:
            assert verify_binary_witness(any_algebra, v)


@pytest.mark.parametrize("name, holds", [("bool2", True), ("z2", True), ("bare-3", False),
                                         ("klein4", True), ("chain-3", False)])
def test_positive_reflexive_relations(corpus, name, holds):
    v = check_positive_reflexive_are_equivalences(corpus[name])
    assert v.holds is holds
    if not holds:
        assert verify_binary_witness(corpus[name], v)


@pytest.mark.parametrize("name, prop, holds", [
    ("chain-2", "refl-symmetric", False), ("z2", "refl-symmetric", True),
    ("bool2", "difunctional-all", True), ("chain-2", "difunctional-all", False),
    ("impl2", "eeo-commute", True), ("impl2", "ppoppo", True), ("bare-3", "ppoppo", False)])
def test_known_binary_outcomes(corpus, name, prop, holds):
    assert check_property(corpus[name], prop).holds is holds


def test_difunctional_examples():
    assert is_difunctional(BinRel.from_pairs([(0, 0), (1, 1)], 2))
    assert not is_difunctional(BinRel.from_pairs([(0, 0), (1, 0), (1, 1)], 2))


@given(st.integers(1, 4).flatmap(relations))
def test_difunctional_means_no_broken_zigzag(r):
    pairs = set(r.pairs())
    zigzag = all((x, y) in pairs for (x, a) in pairs for (b, a2) in pairs if a2 == a
                 for (b2, y) in pairs if b2 == b)
    assert is_difunctional(r) == zigzag


# -- ternary -----------------------------------------------------------------

def _dd_oracle(trips):
    return all((x, a, v) in trips
               for (x, a, u) in trips for (y, b, u2) in trips if u2 == u
               for (y2, a2, v) in trips if y2 == y and a2 == a)


def _pp_oracle(trips, u_size):
    for (x, a, u) in trips:
        for (y, b, u2) in trips:
            if u2 != u:
                continue
            for (y2, c, v) in trips:
                if y2 != y:
                    continue
                for (z, a2, v2) in trips:
                    if v2 != v or a2 != a:
                        continue
                    if not any((x, a, w) in trips and (z, a, w) in trips for w in range(u_size)):
                        return False
    return True


def _brute_ternary(X, A, U):
    """Compatible subsets of X×A×U, by checking every subset against every operation."""
    cells = list(itertools.product(range(X.size), range(A.size), range(U.size)))
    out = []
    for mask in range(1 << len(cells)):
        trips = {c for i, c in enumerate(cells) if mask >> i & 1}
        ok = True
        for opx in X.ops:
            k = opx.arity
            for combo in itertools.product(sorted(trips), repeat=k):
                img = tuple(op_apply(S, opx.name, [c[i] for c in combo]) for i, S in enumerate((X, A, U)))
                if img not in trips:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(trips)
    return out


TWO = ["bare-2", "bool2", "chain-2", "impl2", "z2", "trivial-1"]


@pytest.mark.parametrize("name", TWO)
def test_ternary_enumeration_matches_brute_force(corpus, name):
    alg = corpus[name]
    got = sorted(sorted(t.triples()) for t in enumerate_ternary(alg))
    assert got == sorted(sorted(t) for t in _brute_ternary(alg, alg, alg))


@pytest.mark.parametrize("name", TWO)
def test_dd_pp_match_brute_force(corpus, name):
    alg = corpus[name]
    fam = _brute_ternary(alg, alg, alg)
    for check, oracle in ((check_DD, _dd_oracle), (check_PP, lambda t: _pp_oracle(t, alg.size))):
        expected = all(oracle(t) for t in fam)
        for method in ("closure", "enumerate"):
            v = check(alg, method=method)
            assert v.holds == expected and v.exhaustive
            if not v.holds:
                assert verify_ternary_witness(alg, alg, alg, v.name, v)


@given(st.data())
def test_element_and_relational_forms_agree(data):
    xs, as_, us = (data.draw(st.integers(1, 3)) for _ in range(3))
    code = data.draw(st.integers(0, (1 << (xs * as_ * us)) - 1))
    t = TernaryRelView.from_code(code, xs, as_, us)
    trips = set(t.triples())
    assert dd_element_holds(t) == dd_relational_holds(t) == _dd_oracle(trips)
    assert pp_element_holds(t) == pp_relational_holds(t) == _pp_oracle(trips, us)


def test_ternary_view_round_trip():
    t = TernaryRelView.from_triples([(0, 1, 2), (1, 0, 0)], 2, 2, 3)
    assert sorted(t.triples()) == [(0, 1, 2), (1, 0, 0)]
    assert t.has(0, 1, 2) and not t.has(0, 1, 1)


def test_heterogeneous_sorts(corpus):
    z2 = corpus["z2"]
    one = trivial_like(z2)
    # with A trivial the ternary conditions reduce to the binary ones
    assert check_DD(z2, A=one).holds == check_difunctional_all(z2).holds
    assert check_PP(z2, A=one).holds == check_PPoPPo(z2).holds
    z4 = corpus["z4"]
    v = check_DD(z2, X=z2, A=z2, U=z4)
    assert not v.holds and v.sorts == (2, 2, 4)
    assert verify_ternary_witness(z2, z2, z4, "dd", v)


def test_dd_three_elements_is_exhaustive(corpus):
    v = check_DD(corpus["chain-3"])
    assert v.exhaustive
    assert check_DD(corpus["z4"]).holds is False


def test_tampered_ternary_witness(corpus):
    z2 = corpus["z2"]
    v = check_DD(z2)
    assert verify_ternary_witness(z2, z2, z2, "dd", v)
    full = TernaryRelView.from_code((1 << 8) - 1, 2, 2, 2).rel
    assert not verify_ternary_witness(z2, z2, z2, "dd", PropertyVerdict("dd", False, True, full, v.assignment))
    sub = BinRel(4, 2, 1)  # {((0,0),0)} is closed, but misses the premises
    assert not verify_ternary_witness(z2, z2, z2, "dd", PropertyVerdict("dd", False, True, sub, v.assignment))


def test_property_dispatch(corpus):
    for name in PROPERTIES:
        assert check_property(corpus["bool2"], name).holds
    with pytest.raises(ValueError):
        check_property(corpus["bool2"], "nonsense")
