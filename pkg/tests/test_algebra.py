import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ualab.algebra import (AlgebraError, AlgebraFormatError, App, BudgetExceeded, FiniteAlgebra,
                           Var, algebra_from_json, close_subpower, dump_algebra, eval_term,
                           eval_term_vectors, generate_subpower, load_algebra, parse_term,
                           power_algebra, product_algebra, term_size, term_str, trivial_like)

from oracles import op_apply
from strategies import algebras


def brute_subpower(alg, m, gens):
    """Plain set closure in A^m, one application at a time."""
    current = {tuple(g) for g in gens}
    for op in alg.ops:
        if op.arity == 0:
            current.add((op.table[0],) * m)
    while True:
        new = set(current)
        for op in alg.ops:
            if op.arity == 0:
                continue
            for combo in itertools.product(sorted(current), repeat=op.arity):
                new.add(tuple(op_apply(alg, op.name, [c[i] for c in combo]) for i in range(m)))
        if new == current:
            return sorted(current)
        current = new


def test_lookup_matches_table_order(corpus):
    z4 = corpus["z4"]
    assert z4("add", 3, 2) == 1
    assert z4.op("add").lookup((1, 1), 4) == 2


def test_from_tables_infers_arity():
    alg = FiniteAlgebra.from_tables("t", 2, {"c": [1], "neg": [1, 0], "and": [0, 0, 0, 1]})
    assert alg.signature == (("c", 0), ("neg", 1), ("and", 2))
    assert alg.constants == (1,)


def test_bad_table_length_rejected():
    with pytest.raises(AlgebraError):
        FiniteAlgebra.from_tables("t", 2, {"f": [0, 1, 0]})


def test_entry_outside_carrier_rejected():
    with pytest.raises(AlgebraError):
        FiniteAlgebra.from_tables("t", 2, {"f": [0, 2]})


def test_json_round_trip(tmp_path, any_algebra):
    path = tmp_path / "a.json"
    dump_algebra(any_algebra, path)
    assert load_algebra(path) == any_algebra


@pytest.mark.parametrize("doc, where", [
    ([], ""),
    ({"name": "a", "size": 0, "operations": []}, "size"),
    ({"name": "a", "size": 2}, ""),
    ({"name": "a", "size": 2, "operations": [{"name": "f", "arity": 1, "table": [0]}]},
     "operations[0].table"),
    ({"name": "a", "size": 2, "operations": [{"name": "f", "arity": 1, "table": [0, 2]}]},
     "operations[0].table[1]"),
    ({"name": "a", "size": 2, "operations": [{"name": "f", "arity": 1, "table": [0, 1]},
                                             {"name": "f", "arity": 0, "table": [0]}]},
     "operations[1].name"),
    ({"name": "a", "size": 2, "operations": [{"name": "f", "arity": True, "table": [0, 1]}]},
     "operations[0].arity"),
])
def test_malformed_json_locates_problem(doc, where):
    with pytest.raises(AlgebraFormatError) as info:
        algebra_from_json(doc, "doc")
    assert info.value.where == (f"doc:{where}" if where else "doc")


def test_unparseable_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    with pytest.raises(AlgebraFormatError, match="line 1"):
        load_algebra(path)


def test_product_encoding(corpus):
    z2, bool2 = corpus["z2"], corpus["bool2"]
    with pytest.raises(AlgebraError):
        product_algebra(z2, bool2)
    sq = product_algebra(z2, z2)
    for (a, b), (c, d) in itertools.product(itertools.product(range(2), repeat=2), repeat=2):
        assert sq("add", a * 2 + b, c * 2 + d) == z2("add", a, c) * 2 + z2("add", b, d)
    assert power_algebra(z2, 3).size == 8


def test_trivial_like_keeps_signature(corpus):
    one = trivial_like(corpus["bool2"])
    assert one.size == 1 and one.signature == corpus["bool2"].signature


def test_subuniverse(corpus):
    z4 = corpus["z4"]
    assert z4.subuniverse([2]) == frozenset({0, 2})
    assert z4.is_closed({0, 2}) and not z4.is_closed({1})


def test_term_parse_print_round_trip():
    text = "join(x0,meet(x1,x2))"
    t = parse_term(text)
    assert term_str(t) == text
    assert parse_term("f(a, b)", variables=["a", "b"]) == App("f", (Var(0), Var(1)))
    with pytest.raises(AlgebraError):
        parse_term("f(x0,")
    with pytest.raises(AlgebraError):
        parse_term("f(x0) g")


def test_eval_term(corpus):
    b = corpus["bool2"]
    t = parse_term("or(x0,and(x1,x2))")
    for args in itertools.product(range(2), repeat=3):
        assert eval_term(b, t, args) == args[0] | (args[1] & args[2])
    cols = [np.array(c) for c in zip(*itertools.product(range(2), repeat=3))]
    assert list(eval_term_vectors(b, t, cols)) == [a | (c & d) for a, c, d in itertools.product(range(2), repeat=3)]
    with pytest.raises(AlgebraError):
        eval_term(b, parse_term("nosuch(x0)"), [0])
    with pytest.raises(AlgebraError):
        eval_term(b, t, [0, 1])


def test_term_size_counts_tree_nodes():
    leaf = Var(0)
    shared = App("f", (leaf, leaf))
    assert term_size(App("f", (shared, shared))) == 7


@given(algebras(max_size=3, max_ops=2, max_arity=2), st.integers(1, 3), st.data())
def test_subpower_matches_brute_closure(alg, m, data):
    gens = data.draw(st.lists(st.tuples(*[st.integers(0, alg.size - 1)] * m), max_size=3))
    assert generate_subpower(alg, m, gens) == (brute_subpower(alg, m, gens) if gens or alg.constants else [])


@given(algebras(max_size=3, max_ops=2, max_arity=3), st.integers(1, 4), st.data())
def test_subpower_provenance_reproduces_vectors(alg, m, data):
    gens = data.draw(st.lists(st.tuples(*[st.integers(0, alg.size - 1)] * m), min_size=1, max_size=3))
    sp = close_subpower(alg, m, gens)
    assert sp.complete
    cols = [np.array(g) for g in gens]
    for i in range(len(sp)):
        t = sp.term(i)
        assert list(eval_term_vectors(alg, t, cols)) == list(sp.vectors[i])


def test_subpower_budget(corpus):
    z4 = corpus["z4"]
    gens = [(0, 1, 2), (1, 2, 3), (3, 3, 1)]
    with pytest.raises(BudgetExceeded):
        generate_subpower(z4, 3, gens, budget=5)
    assert len(generate_subpower(z4, 3, gens)) > 5


def test_subpower_stop_hook(corpus):
    z4 = corpus["z4"]
    calls = []

    def stop(vecs, first_new):
        calls.append(len(vecs))
        return len(vecs) >= 4

    sp = close_subpower(z4, 2, [(0, 1), (1, 3)], stop=stop)
    assert not sp.complete and calls[-1] >= 4


def test_generator_shape_checked(corpus):
    with pytest.raises(AlgebraError):
        close_subpower(corpus["z2"], 2, [(0, 1, 1)])
    with pytest.raises(AlgebraError):
        close_subpower(corpus["z2"], 2, [(0, 5)])
