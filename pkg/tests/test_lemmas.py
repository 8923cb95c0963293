import itertools

import pytest
from hypothesis import given, strategies as st

from ualab.lemmas import (Counterexample, LemmaKind, PreconditionError, check_lemma,
                          check_majority_inequality, element_check, parse_classes,
                          relational_inequality, verify_counterexample)
from ualab.relations import BinRel, RelClass, RelationError, compose, converse, enumerate_relations

from oracles import brute_relations, compose_pairs, lemma_over_classes_brute, partition_pairs, partitions

KINDS = ["shifting", "triangular", "trapezoid"]
CLASSES = ["cong", "refl", "all", "pos"]


@pytest.mark.parametrize("name", ["bare-2", "chain-2", "z2", "bool2", "impl2"])
@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("cls", CLASSES)
def test_two_element_lemmas_match_brute_force(corpus, name, kind, cls):
    alg = corpus[name]
    v = check_lemma(alg, kind, cls)
    assert v.exhaustive
    assert v.holds == lemma_over_classes_brute(alg, kind, [cls] * 3)


# (algebra, class) pairs where walking every triple stays cheap
CROSS = [(n, c) for n in ["bare-3", "chain-3", "klein4", "z4"] for c in ["cong", "pos"]] + [
    ("chain-3", "refl"), ("klein4", "refl"), ("z4", "refl"), ("z4", "all")]


@pytest.mark.parametrize("name, cls", CROSS)
@pytest.mark.parametrize("kind", KINDS + ["majority"])
def test_closure_strategy_agrees_with_enumeration(corpus, name, cls, kind):
    alg = corpus[name]
    fast = check_lemma(alg, kind, cls)
    slow = check_lemma(alg, kind, cls, strategy="enumerate")
    assert fast.holds == slow.holds
    for v in (fast, slow):
        if not v.holds:
            assert verify_counterexample(alg, kind, v.classes, v.counterexample)


@pytest.mark.parametrize("classes", ["refl,S=cong", "R=refl,S=cong,T=refl", "R=pos,S=refl,T=pos",
                                     "R=all,S=cong,T=refl"])
@pytest.mark.parametrize("name", ["chain-3", "klein4", "z4", "bare-3"])
def test_mixed_classes_agree_with_enumeration(corpus, name, classes):
    alg = corpus[name]
    triple = parse_classes(classes)
    sizes = [len(enumerate_relations(alg, c)) for c in triple]
    if sizes[0] * sizes[1] * sizes[2] > 20000:
        pytest.skip("family product too large for the triple walk")
    for kind in KINDS:
        fast = check_lemma(alg, kind, *triple)
        slow = check_lemma(alg, kind, *triple, strategy="enumerate")
        assert fast.holds == slow.holds, kind


def _equivalences(n):
    return [BinRel.from_pairs(partition_pairs(p), n) for p in partitions(n)]


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(*[st.sampled_from(_equivalences(n))] * 3)))
def test_element_and_relational_forms_agree_on_equivalences(triple):
    R, S, T = triple
    if not (R & S) <= T:
        with pytest.raises(PreconditionError):
            relational_inequality(None, "shifting", R, S, T)
        return
    for kind in KINDS:
        assert element_check(kind, R, S, T) == relational_inequality(None, kind, R, S, T)


def test_corpus_congruence_triples_agree(any_algebra):
    cons = list(enumerate_relations(any_algebra, "cong"))
    for R, S, T in itertools.product(cons, repeat=3):
        if (R & S) <= T:
            for kind in KINDS:
                assert element_check(kind, R, S, T) == relational_inequality(any_algebra, kind, R, S, T)


def test_klein_counterexample_replays(corpus):
    alg = corpus["klein4"]
    v = check_lemma(alg, "triangular", "cong")
    assert v.status == "fails"
    cex = v.counterexample
    classes = (RelClass.CONGRUENCE,) * 3
    assert verify_counterexample(alg, "triangular", classes, cex)
    back = Counterexample.from_json(cex.to_json())
    assert verify_counterexample(alg, "triangular", classes, back)
    # any tampering breaks it
    bigger_T = Counterexample(cex.R, cex.S, BinRel.full(4), cex.assignment)
    assert not verify_counterexample(alg, "triangular", classes, bigger_T)
    moved = dict(cex.assignment, v=(cex.assignment["v"] + 1) % 4)
    assert not verify_counterexample(alg, "triangular", classes,
                                     Counterexample(cex.R, cex.S, cex.T, moved))
    not_cong = Counterexample(cex.R, BinRel.from_pairs([(0, 1)], 4), cex.T, cex.assignment)
    assert not verify_counterexample(alg, "triangular", classes, not_cong)


def test_positive_counterexample_carries_witnesses(corpus):
    alg = corpus["klein4"]
    v = check_lemma(alg, "triangular", "pos")
    assert not v.holds
    cex = v.counterexample
    assert set(cex.positivity) == {"R", "S", "T"}
    for name, rel in zip("RST", (cex.R, cex.S, cex.T)):
        w = cex.positivity[name]
        assert compose(converse(w), w) == rel
    data = cex.to_json()
    assert verify_counterexample(alg, "triangular", v.classes, Counterexample.from_json(data))
    del data["positivity"]
    assert not verify_counterexample(alg, "triangular", v.classes, Counterexample.from_json(data))


def _mi_brute(alg, kind):
    fam = [set(r) for r in brute_relations(alg, kind)]
    for R, S, T in itertools.product(fam, repeat=3):
        if not (R & compose_pairs(T, S)) <= compose_pairs(R & T, R & S):
            return False
    return True


@pytest.mark.parametrize("name", ["bare-2", "chain-2", "z2", "bool2", "impl2", "trivial-1"])
@pytest.mark.parametrize("cls", ["refl", "cong", "all"])
def test_majority_inequality_matches_brute_force(corpus, name, cls):
    alg = corpus[name]
    assert check_majority_inequality(alg, cls).holds == _mi_brute(alg, cls)


def test_majority_inequality_on_klein_fails_with_witness(corpus):
    alg = corpus["klein4"]
    v = check_majority_inequality(alg, "refl")
    assert v.status == "fails"
    assert verify_counterexample(alg, LemmaKind.MAJORITY, v.classes, v.counterexample)
    R, S, T = v.counterexample.R, v.counterexample.S, v.counterexample.T
    assert not relational_inequality(alg, "majority", R, S, T)


def test_majority_rejects_mixed_classes(corpus):
    with pytest.raises(RelationError):
        check_lemma(corpus["z2"], "majority", "refl", "cong")


def test_verdict_json(corpus):
    v = check_lemma(corpus["klein4"], "tl", "cong")
    data = v.to_json()
    assert data["status"] == "fails" and data["classes"] == "cong"
    assert set(data["counterexample"]) == {"R", "S", "T", "size", "assignment"}


def test_parse_classes():
    C, RF, PS = RelClass.CONGRUENCE, RelClass.REFLEXIVE, RelClass.POSITIVE
    assert parse_classes("refl") == (RF, RF, RF)
    assert parse_classes("R=pos,S=refl,T=pos") == (PS, RF, PS)
    assert parse_classes("S=refl") == (C, RF, C)
    assert parse_classes("refl,S=cong") == (RF, C, RF)
    with pytest.raises(RelationError):
        parse_classes("Q=refl")


def test_kind_aliases():
    assert LemmaKind.parse("TpL") is LemmaKind.TRAPEZOID
    assert LemmaKind.TRIANGULAR.short == "TL"


def test_unknown_strategy(corpus):
    with pytest.raises(ValueError):
        check_lemma(corpus["z2"], "shifting", "cong", strategy="magic")


def test_large_carrier_reflexive_is_exact_for_closure_classes():
    from ualab.algebra import FiniteAlgebra
    c5 = FiniteAlgebra.from_function("c5", 5, {"s": (1, lambda x: (x + 1) % 5)})
    v = check_lemma(c5, "shifting", "refl")
    assert v.exhaustive
    pos = check_lemma(c5, "shifting", "pos")
    assert pos.status in ("holds-on-sample", "fails")  # positive relations come from a sample
