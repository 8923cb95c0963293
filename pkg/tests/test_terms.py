import itertools

import pytest

from ualab.algebra import eval_term, parse_term, term_str
from ualab.terms import (FINDERS, MALTSEV, NAMED_SYSTEMS, TermWitness, find_maltsev,
                         find_pixley, majority_from_pixley, maltsev_from_pixley,
                         quaternary_from_maltsev, solve_identity_system, verify_witnesses)

from oracles import TERM_CONDITIONS, term_condition_brute

# Expected outcomes, checked against the clone-listing oracle in
# test_finders_match_clone_oracle (or, for the slow cases, once offline and
# frozen here).
EXPECTED = {
    "bare-2": set(), "bare-3": set(), "bare-4": set(),
    "bool2": {"maltsev", "pixley", "majority", "quaternary-pq", "quaternary-pqx", "lipparini-rs"},
    "chain-2": {"majority"}, "chain-3": {"majority"},
    "impl2": {"quaternary-pq", "quaternary-pqx", "lipparini-rs"},
    "klein4": {"maltsev", "quaternary-pq"},
    "trivial-1": {"maltsev", "pixley", "majority", "quaternary-pq", "quaternary-pqx", "lipparini-rs"},
    "z2": {"maltsev", "quaternary-pq"},
    "z4": {"maltsev", "quaternary-pq"},
}

# arity-4 clones too large to list quickly
SLOW_ORACLE = {("bool2", 4), ("impl2", 4), ("chain-3", 4), ("z4", 4)}


@pytest.mark.parametrize("kind", sorted(FINDERS))
def test_finders_match_frozen_outcomes(any_algebra, kind):
    res = FINDERS[kind](any_algebra)
    assert res.found is (kind in EXPECTED[any_algebra.name])
    if res.found:
        system = NAMED_SYSTEMS[kind]
        assert verify_witnesses(any_algebra, system, res.witnesses)
    else:
        assert res.subpower_sizes  # closure ran to completion


ORACLE_CASES = [(name, kind) for name in sorted(EXPECTED) for kind in sorted(TERM_CONDITIONS)
                if (name, TERM_CONDITIONS[kind][0]) not in SLOW_ORACLE]


@pytest.mark.parametrize("name, kind", ORACLE_CASES)
def test_finders_match_clone_oracle(corpus, name, kind):
    any_algebra = corpus[name]
    expected = term_condition_brute(any_algebra, kind)
    assert expected is not None
    assert FINDERS[kind](any_algebra).found is expected


def _check_identities_directly(alg, kind, witnesses):
    """Evaluate the found terms on every instantiation, without the package's verifier."""
    arity, first, second, link = TERM_CONDITIONS[kind]
    names = [u for u, _ in NAMED_SYSTEMS[kind].unknowns]
    fns = [lambda *xs, t=witnesses[u].term: eval_term(alg, t, xs) for u in names]
    n = alg.size
    for x, y, z in itertools.product(range(n), repeat=3):
        assert first(fns[0], x, y, z)
        if second is not None:
            assert second(fns[1], x, y, z)
    if link is not None:
        for u, v in itertools.product(range(n), repeat=2):
            assert link(fns[0], fns[1], u, v)


FOUND = sorted((name, kind) for name, kinds in EXPECTED.items() for kind in kinds)


@pytest.mark.parametrize("name, kind", FOUND)
def test_found_terms_satisfy_identities(corpus, name, kind):
    alg = corpus[name]
    res = FINDERS[kind](alg)
    _check_identities_directly(alg, kind, res.witnesses)
    for u, w in res.witnesses.items():
        text = w.term_text()
        assert text is not None
        assert term_str(parse_term(text)) == text


def test_pixley_bool_all_instances(corpus):
    b = corpus["bool2"]
    res = find_pixley(b)
    p = res.witnesses["p"].term
    checked = 0
    for x, y in itertools.product(range(2), repeat=2):
        assert eval_term(b, p, (x, y, y)) == x
        assert eval_term(b, p, (x, x, y)) == y
        assert eval_term(b, p, (x, y, x)) == x
        checked += 3
    assert checked == 12


def test_witness_is_deterministic(corpus):
    a = find_maltsev(corpus["z4"]).witnesses["p"].term_text()
    b = find_maltsev(corpus["z4"]).witnesses["p"].term_text()
    assert a == b


def test_tampered_witness_rejected(corpus):
    z2 = corpus["z2"]
    good = find_maltsev(z2).witnesses
    assert verify_witnesses(z2, MALTSEV, good)
    bad = {"p": TermWitness("p", 3, (), (), parse_term("x0"))}
    assert not verify_witnesses(z2, MALTSEV, bad)
    w = good["p"]
    flipped = {"p": TermWitness("p", 3, w.coords, tuple(1 - v for v in w.values))}
    assert not verify_witnesses(z2, MALTSEV, flipped)


def test_budget_gives_inconclusive(corpus):
    res = FINDERS["quaternary-pqx"](corpus["z4"], budget=20)
    assert res.found is None and res.status == "inconclusive"
    assert "budget" in res.reason


def test_contradictory_system_on_trivial_constraint(corpus):
    # p(x,y,y)=x and p(x,y,y)=y cannot both hold once the carrier has two elements
    from ualab.terms import _f, _sys
    system = _sys("clash", [("p", 3)], _f("p", "xyy", "x"), _f("p", "xyy", "y"))
    assert solve_identity_system(corpus["bool2"], system).found is False
    assert solve_identity_system(corpus["trivial-1"], system).found is True


def test_derived_constructions(corpus):
    b = corpus["bool2"]
    pix = find_pixley(b)
    assert maltsev_from_pixley(b, pix).found
    assert majority_from_pixley(b, pix).found
    z4 = corpus["z4"]
    assert quaternary_from_maltsev(z4, find_maltsev(z4)).found


def test_result_json(corpus):
    data = find_pixley(corpus["bool2"]).to_json()
    assert data["status"] == "found"
    table = data["witness_tables"]["p"]["table"]
    for args, value in table:
        assert len(args) == 3 and value in (0, 1)
