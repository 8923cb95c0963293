import copy
import json

import pytest

from ualab.algebra import FiniteAlgebra, OperationTable
from ualab.harness import (LEDGER, Fact, FactVector, State, compare_fixture, compute_facts,
                           corpus_names, dumps_report, load_fixture, make_fixture, verify_algebra,
                           verify_ledger)


@pytest.fixture(scope="module")
def reports(corpus):
    return {name: verify_algebra(alg) for name, alg in corpus.items()}


def test_corpus_has_eleven_algebras():
    assert len(corpus_names()) == 11


def test_every_corpus_algebra_is_clean(reports):
    for name, rep in reports.items():
        assert rep.fixture_checked, name
        assert rep.violations == [], (name, [v.to_json() for v in rep.violations])
        assert rep.conditional == [], name


def test_small_carriers_are_exhaustive(reports):
    for name, rep in reports.items():
        for fact, f in rep.facts.facts.items():
            assert f.value is not None, (name, fact)
            assert f.exhaustive, (name, fact)


def test_fixture_matches_fresh_computation(reports):
    for name, rep in reports.items():
        assert make_fixture(rep.facts) == load_fixture(name)


def test_failed_facts_carry_witnesses(reports):
    for rep in reports.values():
        for fact, f in rep.facts.facts.items():
            if f.value is False:
                assert f.witness is not None, fact


def _vector(alg, **states):
    facts = {}
    for name, st in states.items():
        value = {"T": True, "F": False, "S": True, "U": None}[st]
        facts[name] = Fact(value, st in "TF", {"w": 1} if st == "F" else None)
    return FactVector(alg, facts)


@pytest.fixture
def dummy():
    return FiniteAlgebra("dummy", 1, ())


def test_violation_needs_exact_hypotheses(dummy):
    v, c = verify_ledger(_vector(dummy, pixley="T", dd="F"))
    assert [x.ledger_id for x in v] == ["L9"] and not c
    v, c = verify_ledger(_vector(dummy, pixley="S", dd="F"))
    assert not v and [x.ledger_id for x in c] == ["L9"]
    v, c = verify_ledger(_vector(dummy, pixley="U", dd="F"))
    assert not v and not c
    v, c = verify_ledger(_vector(dummy, pixley="T", dd="U"))
    assert not v and not c


def test_multi_hypothesis_clause(dummy):
    v, _ = verify_ledger(_vector(dummy, perm2="T", **{"TL(cong)": "T"}, distributive="F"))
    assert "L4" in {x.ledger_id for x in v}
    v, _ = verify_ledger(_vector(dummy, perm2="F", **{"TL(cong)": "T"}, distributive="F"))
    assert "L4" not in {x.ledger_id for x in v}


def test_ledger_ids():
    assert [e.id for e in LEDGER] == [f"L{i}" for i in range(1, 17)]
    for e in LEDGER:
        assert e.clauses and e.soundness


def test_state_of_fact():
    assert Fact(True, True).state is State.TRUE
    assert Fact(True, False).state is State.SAMPLED
    assert Fact(False, False).state is State.FALSE
    assert Fact(None, False).state is State.UNKNOWN


def _mutated_klein(corpus):
    k = corpus["klein4"]
    table = list(k.op("mul").table)
    table[5] = 2  # 1*1 = 2 instead of 0
    return FiniteAlgebra("klein4", 4, (OperationTable("mul", 2, tuple(table)),))


def test_fixture_comparison_catches_mutation(corpus):
    bad = _mutated_klein(corpus)
    rep = verify_algebra(bad, budget=50_000)
    ids = {v.ledger_id for v in rep.violations}
    assert {"F1", "F2", "F3"} <= ids


def test_fixture_comparison_kinds(corpus, reports):
    facts = reports["z2"].facts
    fixture = copy.deepcopy(load_fixture("z2"))
    assert compare_fixture(facts, fixture) == []
    fixture["facts"]["maltsev"]["value"] = False
    assert [v.ledger_id for v in compare_fixture(facts, fixture)] == ["F1"]
    fixture = copy.deepcopy(load_fixture("z2"))
    fixture["congruences"] = [[[0], [1]]]
    assert [v.ledger_id for v in compare_fixture(facts, fixture)] == ["F2"]
    fixture = copy.deepcopy(load_fixture("z2"))
    fixture["terms"]["maltsev"]["p"] = "x0"
    assert [v.ledger_id for v in compare_fixture(facts, fixture)] == ["F3"]


def test_report_json_is_deterministic(corpus):
    a = dumps_report(verify_algebra(corpus["chain-3"]).to_json())
    b = dumps_report(verify_algebra(corpus["chain-3"]).to_json())
    assert a == b
    assert "runtime_ms" not in a
    timed = verify_algebra(corpus["chain-3"]).to_json(timings=True)
    assert "total_runtime_ms" in timed
    assert all("runtime_ms" in f for f in timed["facts"].values())
    json.loads(a)


def test_large_carrier_lattice_facts_unknown():
    c9 = FiniteAlgebra.from_function("c9", 9, {"s": (1, lambda x: (x + 1) % 9)})
    facts = compute_facts(c9, budget=20_000)
    for name in ("perm2", "perm3", "modular", "distributive"):
        assert facts.state(name) is State.UNKNOWN
    violations, _ = verify_ledger(facts)
    assert violations == []
