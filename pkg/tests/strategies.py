"""Hypothesis strategies for small algebras and relations."""

from hypothesis import strategies as st

from ualab.algebra import FiniteAlgebra, OperationTable
from ualab.relations import BinRel


@st.composite
def algebras(draw, max_size=3, max_ops=2, max_arity=2):
    n = draw(st.integers(1, max_size))
    k = draw(st.integers(0, max_ops))
    ops = []
    for i in range(k):
        arity = draw(st.integers(0, max_arity))
        table = draw(st.lists(st.integers(0, n - 1), min_size=n ** arity, max_size=n ** arity))
        ops.append(OperationTable(f"f{i}", arity, tuple(table)))
    return FiniteAlgebra("rand", n, tuple(ops))


@st.composite
def relations(draw, n, m=None):
    m = n if m is None else m
    return BinRel(n, m, draw(st.integers(0, (1 << (n * m)) - 1)))
