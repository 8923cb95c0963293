"""Finite algebras as operation tables, terms, products and subpower closure."""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Callable, Iterable, Sequence, Union

import numpy as np

DEFAULT_BUDGET = 5_000_000


class AlgebraError(ValueError):
    """Structural problem with an algebra, a term, or a signature."""


class AlgebraFormatError(AlgebraError):
    """Malformed algebra file. ``where`` locates the offending item."""

    def __init__(self, message: str, where: str = ""):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


class BudgetExceeded(Exception):
    """A closure grew past its element budget; no partial result is returned."""

    def __init__(self, budget: int, reached: int):
        self.budget = budget
        self.reached = reached
        super().__init__(f"closure exceeded budget of {budget} elements (reached {reached})")


@dataclass(frozen=True)
class OperationTable:
    name: str
    arity: int
    table: tuple[int, ...]

    def lookup(self, args: Sequence[int], size: int) -> int:
        idx = 0
        for a in args:
            idx = idx * size + a
        return self.table[idx]


@dataclass(frozen=True)
class FiniteAlgebra:
    name: str
    size: int
    ops: tuple[OperationTable, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.size < 1:
            raise AlgebraError(f"algebra {self.name!r}: size must be positive")
        seen = set()
        for op in self.ops:
            if op.name in seen:
                raise AlgebraError(f"algebra {self.name!r}: duplicate operation {op.name!r}")
            seen.add(op.name)
            if op.arity < 0:
                raise AlgebraError(f"operation {op.name!r}: negative arity")
            if len(op.table) != self.size ** op.arity:
                raise AlgebraError(
                    f"operation {op.name!r}: expected {self.size ** op.arity} entries, got {len(op.table)}")
            for i, v in enumerate(op.table):
                if not 0 <= v < self.size:
                    raise AlgebraError(f"operation {op.name!r}: entry {i} = {v} outside carrier")

    @classmethod
    def from_tables(cls, name: str, size: int, tables: dict[str, Sequence[int]] | Iterable) -> "FiniteAlgebra":
        """Build from ``{name: flat_table}``; arity is inferred from the table length."""
        ops = []
        items = tables.items() if isinstance(tables, dict) else tables
        for opname, tab in items:
            tab = tuple(int(v) for v in np.asarray(tab).ravel())
            arity = _infer_arity(len(tab), size)
            if arity is None:
                raise AlgebraError(f"operation {opname!r}: table length {len(tab)} is not a power of {size}")
            ops.append(OperationTable(opname, arity, tab))
        return cls(name, size, tuple(ops))

    @classmethod
    def from_function(cls, name: str, size: int, funcs: dict) -> "FiniteAlgebra":
        """Build from ``{name: (arity, python_callable)}``."""
        ops = []
        for opname, (arity, fn) in funcs.items():
            tab = tuple(int(fn(*args)) for args in itertools.product(range(size), repeat=arity))
            ops.append(OperationTable(opname, arity, tab))
        return cls(name, size, tuple(ops))

    @property
    def signature(self) -> tuple[tuple[str, int], ...]:
        return tuple((op.name, op.arity) for op in self.ops)

    def op(self, name: str) -> OperationTable:
        for op in self.ops:
            if op.name == name:
                return op
        raise AlgebraError(f"algebra {self.name!r} has no operation {name!r}")

    @cached_property
    def arrays(self) -> dict[str, np.ndarray]:
        """Tables reshaped to ``(size,)*arity`` numpy arrays."""
        return {op.name: np.asarray(op.table, dtype=np.int64).reshape((self.size,) * op.arity)
                for op in self.ops}

    @cached_property
    def constants(self) -> tuple[int, ...]:
        return tuple(sorted({op.table[0] for op in self.ops if op.arity == 0}))

    def __call__(self, opname: str, *args: int) -> int:
        op = self.op(opname)
        if len(args) != op.arity:
            raise AlgebraError(f"{opname} takes {op.arity} arguments, got {len(args)}")
        return op.lookup(args, self.size)

    def is_closed(self, elements: Iterable[int]) -> bool:
        """True iff the element set is a subuniverse."""
        mask = np.zeros(self.size, dtype=bool)
        mask[list(elements)] = True
        return _is_closed_mask(self, mask)

    def subuniverse(self, generators: Iterable[int]) -> frozenset[int]:
        """Least subuniverse containing ``generators`` (constants included)."""
        mask = np.zeros(self.size, dtype=bool)
        gens = list(generators)
        if gens:
            mask[gens] = True
        return frozenset(np.flatnonzero(close_mask(self, mask)).tolist())

    def to_json(self) -> dict:
        return {"name": self.name, "size": self.size,
                "operations": [{"name": op.name, "arity": op.arity, "table": list(op.table)}
                               for op in self.ops]}

    def __repr__(self):
        sig = ", ".join(f"{n}/{a}" for n, a in self.signature)
        return f"FiniteAlgebra({self.name!r}, size={self.size}, ops=[{sig}])"


def _infer_arity(length: int, size: int):
    if size == 1:
        return 0 if length == 1 else None
    arity, k = 0, 1
    while k < length:
        k *= size
        arity += 1
    return arity if k == length else None


def _is_closed_mask(alg: FiniteAlgebra, mask: np.ndarray) -> bool:
    idx = np.flatnonzero(mask)
    for op in alg.ops:
        arr = alg.arrays[op.name]
        if op.arity == 0:
            if not mask[arr.item()]:
                return False
            continue
        if len(idx) == 0:
            continue
        if not mask[arr[np.ix_(*([idx] * op.arity))]].all():
            return False
    return True


def close_mask(alg: FiniteAlgebra, mask: np.ndarray) -> np.ndarray:
    """Fixpoint closure of a boolean membership mask under all operations."""
    mask = mask.copy()
    for c in alg.constants:
        mask[c] = True
    count = int(mask.sum())
    while True:
        idx = np.flatnonzero(mask)
        if len(idx):
            for op in alg.ops:
                if op.arity:
                    mask[alg.arrays[op.name][np.ix_(*([idx] * op.arity))].ravel()] = True
        new_count = int(mask.sum())
        if new_count == count:
            return mask
        count = new_count


def trivial_like(alg: FiniteAlgebra, name: str | None = None) -> FiniteAlgebra:
    """One-element algebra with the same signature."""
    return FiniteAlgebra(name or f"1[{alg.name}]", 1,
                         tuple(OperationTable(op.name, op.arity, (0,)) for op in alg.ops))


@lru_cache(maxsize=256)
def product_algebra(a: FiniteAlgebra, b: FiniteAlgebra) -> FiniteAlgebra:
    """Componentwise product; the pair (i, j) is encoded as ``i*|b| + j``."""
    if a.signature != b.signature:
        raise AlgebraError(f"signature mismatch: {a.signature} vs {b.signature}")
    na, nb = a.size, b.size
    n = na * nb
    ops = []
    for opa, opb in zip(a.ops, b.ops):
        k = opa.arity
        if k == 0:
            ops.append(OperationTable(opa.name, 0, (opa.table[0] * nb + opb.table[0],)))
            continue
        grid = np.indices((n,) * k).reshape(k, -1)
        ta = np.asarray(opa.table)[np.ravel_multi_index(tuple(grid // nb), (na,) * k)]
        tb = np.asarray(opb.table)[np.ravel_multi_index(tuple(grid % nb), (nb,) * k)]
        ops.append(OperationTable(opa.name, k, tuple((ta * nb + tb).tolist())))
    return FiniteAlgebra(f"{a.name}x{b.name}", n, tuple(ops))


def power_algebra(alg: FiniteAlgebra, k: int) -> FiniteAlgebra:
    """A^k with mixed-radix encoding (first coordinate most significant)."""
    if k < 1:
        raise AlgebraError("power must be at least 1")
    out = alg
    for _ in range(k - 1):
        out = product_algebra(out, alg)
    return out


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Var:
    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = ()

    def __str__(self):
        return term_str(self)


Term = Union[Var, App]


def term_size(t: Term) -> int:
    """Number of nodes in the tree unfolding of a (possibly shared) term DAG."""
    memo: dict[int, int] = {}
    for node in _postorder(t):
        if isinstance(node, Var):
            memo[id(node)] = 1
        else:
            memo[id(node)] = 1 + sum(memo[id(c)] for c in node.args)
    return memo[id(t)]


def term_str(t: Term, names: Sequence[str] | None = None) -> str:
    memo: dict[int, str] = {}
    for node in _postorder(t):
        if isinstance(node, Var):
            memo[id(node)] = names[node.index] if names else f"x{node.index}"
        else:
            memo[id(node)] = f"{node.op}({','.join(memo[id(c)] for c in node.args)})"
    return memo[id(t)]


def term_vars(t: Term) -> int:
    """One more than the largest variable index (0 for ground terms)."""
    return max((n.index + 1 for n in _postorder(t) if isinstance(n, Var)), default=0)


_TOKEN = re.compile(r"\s*(?:([A-Za-z_][A-Za-z0-9_]*)|(.))")


def parse_term(text: str, variables: Sequence[str] | None = None) -> Term:
    """Parse ``f(x0, g(x1))``-style terms. Variables are ``x<i>`` unless named."""
    tokens = [(m.group(1), m.group(2)) for m in _TOKEN.finditer(text) if m.group(0).strip()]
    pos = 0

    def parse():
        nonlocal pos
        if pos >= len(tokens) or tokens[pos][0] is None:
            raise AlgebraError(f"bad term {text!r} at token {pos}")
        name = tokens[pos][0]
        pos += 1
        if pos < len(tokens) and tokens[pos][1] == "(":
            pos += 1
            args = []
            if pos < len(tokens) and tokens[pos][1] == ")":
                pos += 1
                return App(name, ())
            while True:
                args.append(parse())
                if pos < len(tokens) and tokens[pos][1] == ",":
                    pos += 1
                    continue
                if pos < len(tokens) and tokens[pos][1] == ")":
                    pos += 1
                    return App(name, tuple(args))
                raise AlgebraError(f"bad term {text!r}: expected ',' or ')'")
        if variables is not None and name in variables:
            return Var(list(variables).index(name))
        if re.fullmatch(r"x\d+", name):
            return Var(int(name[1:]))
        return App(name, ())

    t = parse()
    if pos != len(tokens):
        raise AlgebraError(f"trailing input in term {text!r}")
    return t


def _postorder(t: Term):
    """Children before parents; shared nodes visited once."""
    seen: set[int] = set()
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        if isinstance(node, Var) or expanded:
            seen.add(id(node))
            yield node
            continue
        stack.append((node, True))
        for c in reversed(node.args):
            if id(c) not in seen:
                stack.append((c, False))


def check_term(alg: FiniteAlgebra, t: Term) -> None:
    sig = dict(alg.signature)
    for node in _postorder(t):
        if isinstance(node, App):
            if node.op not in sig:
                raise AlgebraError(f"unknown operation {node.op!r}")
            if sig[node.op] != len(node.args):
                raise AlgebraError(f"{node.op} has arity {sig[node.op]}, applied to {len(node.args)}")
        elif node.index < 0:
            raise AlgebraError("negative variable index")


def eval_term(alg: FiniteAlgebra, t: Term, args: Sequence[int]) -> int:
    """Value of ``t`` at ``args``; shared subterms are evaluated once."""
    check_term(alg, t)
    if term_vars(t) > len(args):
        raise AlgebraError(f"term uses {term_vars(t)} variables, {len(args)} arguments given")
    for a in args:
        if not 0 <= a < alg.size:
            raise AlgebraError(f"argument {a} outside carrier")
    memo: dict[int, int] = {}
    for node in _postorder(t):
        if isinstance(node, Var):
            memo[id(node)] = args[node.index]
        else:
            memo[id(node)] = alg.op(node.op).lookup([memo[id(c)] for c in node.args], alg.size)
    return memo[id(t)]


def eval_term_vectors(alg: FiniteAlgebra, t: Term, columns: Sequence[np.ndarray]) -> np.ndarray:
    """Evaluate ``t`` coordinatewise on equal-length argument vectors."""
    check_term(alg, t)
    length = len(columns[0]) if len(columns) else 1
    memo: dict[int, np.ndarray] = {}
    for node in _postorder(t):
        if isinstance(node, Var):
            memo[id(node)] = np.asarray(columns[node.index], dtype=np.int64)
        elif not node.args:
            memo[id(node)] = np.full(length, alg.arrays[node.op].item(), dtype=np.int64)
        else:
            memo[id(node)] = alg.arrays[node.op][tuple(memo[id(c)] for c in node.args)]
    return memo[id(t)]


# -- subpowers -------------------------------------------------------------

@dataclass
class Subpower:
    """Closed subset of A^m with provenance for every vector.

    Vector ``i`` is generator ``origin_args[i, 0]`` when ``origin_op[i] == -1``;
    otherwise it is ``alg.ops[origin_op[i]]`` applied to the vectors listed in
    ``origin_args[i]`` (a constant when that operation is nullary).
    """

    alg: FiniteAlgebra
    m: int
    vectors: np.ndarray
    origin_op: np.ndarray = field(repr=False)
    origin_args: np.ndarray = field(repr=False)
    complete: bool = True

    def __len__(self):
        return len(self.vectors)

    def term(self, i: int) -> Term:
        """Reconstruct a term (shared DAG) producing vector ``i`` from the generators."""
        built: dict[int, Term] = {}
        stack = [i]
        while stack:
            j = stack[-1]
            if j in built:
                stack.pop()
                continue
            code = int(self.origin_op[j])
            if code == -1:
                built[j] = Var(int(self.origin_args[j, 0]))
            else:
                op = self.alg.ops[code]
                data = [int(c) for c in self.origin_args[j, :op.arity]]
                missing = [c for c in data if c not in built]
                if missing:
                    stack.extend(missing)
                    continue
                built[j] = App(op.name, tuple(built[c] for c in data))
            stack.pop()
        return built[i]

    def sorted_tuples(self) -> list[tuple[int, ...]]:
        return sorted(tuple(v) for v in self.vectors.tolist())


def close_subpower(alg: FiniteAlgebra, m: int, generators: Sequence[Sequence[int]],
                   budget: int = DEFAULT_BUDGET, stop: Callable[[np.ndarray, int], bool] | None = None,
                   chunk: int | None = None) -> Subpower:
    """Worklist closure in A^m, applying operations coordinatewise.

    Vectors are kept in discovery (FIFO) order so provenance indices are
    stable. Raises :class:`BudgetExceeded` rather than returning a partial set.
    ``stop(vectors, first_new)`` is called after each batch of additions; if
    it returns True the closure is abandoned and ``complete`` is False.
    """
    n = alg.size
    dtype = np.uint8 if n <= 256 else np.int64
    if chunk is None:
        chunk = max(1024, (1 << 22) // max(m, 1))  # about 32 MB of int64 work space
    width = max([op.arity for op in alg.ops] + [1])
    store = _RowStore(m, dtype, budget, width)

    for j, g in enumerate(generators):
        g = np.asarray(g, dtype=np.int64)
        if g.shape != (m,):
            raise AlgebraError(f"generator {j} has shape {g.shape}, expected ({m},)")
        if len(g) and (g.min() < 0 or g.max() >= n):
            raise AlgebraError(f"generator {j} leaves the carrier")
        store.add(g[None, :].astype(dtype), np.array([-1]), np.array([[j] + [0] * (width - 1)]))
    for code, op in enumerate(alg.ops):
        if op.arity == 0:
            store.add(np.full((1, m), op.table[0], dtype=dtype), np.array([code]),
                      np.zeros((1, width), dtype=np.int64))
    if stop is not None and len(store) and stop(store.view(), 0):
        return store.result(alg, complete=False)

    tables = {op.name: np.asarray(op.table, dtype=np.int64) for op in alg.ops if op.arity}
    done = 0  # rows[:done] have been combined with each other
    while done < len(store):
        top = len(store)
        for code, op in enumerate(alg.ops):
            k = op.arity
            if k == 0:
                continue
            for combo in _new_index_tuples(done, top, k, chunk):
                flat = np.zeros((len(combo[0]), m), dtype=np.int64)
                for pos in range(k):
                    flat *= n
                    flat += store.rows[combo[pos]]
                res = tables[op.name][flat].astype(dtype)
                del flat
                args = np.zeros((len(combo[0]), width), dtype=np.int64)
                for pos in range(k):
                    args[:, pos] = combo[pos]
                first_new = len(store)
                added = store.add(res, np.full(len(res), code), args)
                if added and stop is not None and stop(store.view(), first_new):
                    return store.result(alg, complete=False)
        done = top
    return store.result(alg, complete=True)


class _RowStore:
    """Growing set of distinct rows indexed by a 64-bit row hash.

    Equal rows have equal hashes, so a hash miss is certainly new; hits are
    confirmed by comparing the rows themselves. The index is a list of sorted
    runs merged geometrically, which keeps insertion cost near N log N overall.
    """

    def __init__(self, m, dtype, budget, width):
        self.m = m
        self.budget = budget
        self.rows = np.zeros((16, m), dtype=dtype)
        self.org_op = np.zeros(16, dtype=np.int32)
        self.org_args = np.zeros((16, width), dtype=np.int32 if budget < 2**31 else np.int64)
        self.count = 0
        self.weights = (np.random.default_rng(0x5EED).integers(1, 2**63, size=m, dtype=np.uint64)
                        | np.uint64(1))
        self.runs: list[tuple[np.ndarray, np.ndarray]] = []  # (sorted keys, row indices)

    def __len__(self):
        return self.count

    def view(self):
        return self.rows[:self.count]

    def hash(self, rows):
        return (rows.astype(np.uint64) * self.weights).sum(axis=1)

    def _grow(self, need):
        size = len(self.rows)
        while size < need:
            size *= 2
        size = min(size, self.budget + 1) if need <= self.budget + 1 else need

        def grown(arr):
            out = np.zeros((size,) + arr.shape[1:], dtype=arr.dtype)
            out[:self.count] = arr[:self.count]
            return out

        self.rows, self.org_op, self.org_args = grown(self.rows), grown(self.org_op), grown(self.org_args)

    def _append(self, rows, keys, ops, args):
        if self.count + len(rows) > self.budget:
            raise BudgetExceeded(self.budget, self.count + len(rows))
        if self.count + len(rows) > len(self.rows):
            self._grow(self.count + len(rows))
        start, end = self.count, self.count + len(rows)
        self.rows[start:end] = rows
        self.org_op[start:end] = ops
        self.org_args[start:end] = args
        self.count = end
        order = np.argsort(keys, kind="stable")
        self.runs.append((keys[order], np.arange(start, end)[order]))
        while len(self.runs) > 1 and len(self.runs[-2][0]) <= 2 * len(self.runs[-1][0]):
            (k1, i1), (k2, i2) = self.runs.pop(), self.runs.pop()
            k, i = np.concatenate([k2, k1]), np.concatenate([i2, i1])
            order = np.argsort(k, kind="stable")
            self.runs.append((k[order], i[order]))

    def _known(self, cand, keys) -> np.ndarray:
        """Boolean mask: which candidate rows are already stored."""
        known = np.zeros(len(cand), dtype=bool)
        for rk, ri in self.runs:
            lo = np.searchsorted(rk, keys, side="left")
            hi = np.searchsorted(rk, keys, side="right")
            single = (hi - lo == 1) & ~known
            if single.any():
                idx = np.flatnonzero(single)
                same = (cand[idx] == self.rows[ri[lo[idx]]]).all(axis=1)
                known[idx[same]] = True
            for j in np.flatnonzero((hi - lo > 1) & ~known):  # hash collisions, rare
                if (self.rows[ri[lo[j]:hi[j]]] == cand[j]).all(axis=1).any():
                    known[j] = True
        return known

    def _distinct(self, res):
        """Indices of the first occurrence of each distinct row, in order, and all keys."""
        keys = self.hash(res)
        _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
        if not (res == res[first[inverse.ravel()]]).all():
            _, first = np.unique(res, axis=0, return_index=True)
        return np.sort(first), keys

    def add(self, res, ops, args) -> int:
        """Add the rows of ``res`` not seen before, with their provenance; return how many."""
        first, keys = self._distinct(res)
        fresh = first[~self._known(res[first], keys[first])]
        if len(fresh):
            self._append(res[fresh], keys[fresh], ops[fresh], args[fresh])
        return len(fresh)

    def result(self, alg, complete):
        c = self.count
        return Subpower(alg, self.m, self.rows[:c].copy(), self.org_op[:c].copy(),
                        self.org_args[:c].copy(), complete)


def _new_index_tuples(done: int, top: int, k: int, chunk: int):
    """Index k-tuples over range(top) using at least one index >= done, in chunks.

    Tuple family i: positions < i from the old block, position i from the new
    block, positions > i unrestricted. The families partition the new tuples.
    """
    old = np.arange(done)
    new = np.arange(done, top)
    everything = np.arange(top)
    for i in range(k):
        ranges = [old] * i + [new] + [everything] * (k - i - 1)
        sizes = [len(r) for r in ranges]
        total = int(np.prod(sizes)) if sizes else 0
        for start in range(0, total, chunk):
            flat = np.arange(start, min(total, start + chunk))
            idx = np.unravel_index(flat, sizes)
            yield tuple(ranges[p][idx[p]] for p in range(k))


def generate_subpower(alg: FiniteAlgebra, m: int, generators: Iterable[Sequence[int]],
                      budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """Closure of ``generators`` in A^m, lexicographically sorted.

    Raises :class:`BudgetExceeded` when more than ``budget`` vectors would be needed.
    """
    if m < 1:
        raise AlgebraError("subpower arity must be at least 1")
    gens = [tuple(g) for g in generators]
    if not gens and not alg.constants:
        return []
    return close_subpower(alg, m, gens, budget).sorted_tuples()


# -- JSON ------------------------------------------------------------------

def algebra_from_json(data, source: str = "<algebra>") -> FiniteAlgebra:
    """Validate and build an algebra from the decoded JSON document."""
    def fail(msg, where):
        raise AlgebraFormatError(msg, f"{source}:{where}" if where else source)

    if not isinstance(data, dict):
        fail("top level must be an object", "")
    for key in ("name", "size", "operations"):
        if key not in data:
            fail(f"missing key {key!r}", "")
    name, size, ops = data["name"], data["size"], data["operations"]
    if not isinstance(name, str):
        fail("must be a string", "name")
    if not isinstance(size, int) or isinstance(size, bool) or size < 1:
        fail("must be a positive integer", "size")
    if not isinstance(ops, list):
        fail("must be a list", "operations")
    tables = []
    names = set()
    for i, op in enumerate(ops):
        where = f"operations[{i}]"
        if not isinstance(op, dict):
            fail("must be an object", where)
        for key in ("name", "arity", "table"):
            if key not in op:
                fail(f"missing key {key!r}", where)
        if not isinstance(op["name"], str) or not op["name"]:
            fail("must be a non-empty string", where + ".name")
        if op["name"] in names:
            fail(f"duplicate operation name {op['name']!r}", where + ".name")
        names.add(op["name"])
        arity = op["arity"]
        if not isinstance(arity, int) or isinstance(arity, bool) or arity < 0:
            fail("must be a non-negative integer", where + ".arity")
        table = op["table"]
        if not isinstance(table, list):
            fail("must be a list", where + ".table")
        if len(table) != size ** arity:
            fail(f"expected {size ** arity} entries, got {len(table)}", where + ".table")
        for j, v in enumerate(table):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < size:
                fail(f"entry {v!r} is not an element of 0..{size - 1}", f"{where}.table[{j}]")
        tables.append(OperationTable(op["name"], arity, tuple(table)))
    return FiniteAlgebra(name, size, tuple(tables))


def load_algebra(path: str | Path) -> FiniteAlgebra:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise AlgebraFormatError(f"cannot read file: {exc.strerror}", str(path)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFormatError(exc.msg, f"{path}:line {exc.lineno} column {exc.colno}") from exc
    return algebra_from_json(data, str(path))


def dump_algebra(alg: FiniteAlgebra, path: str | Path) -> None:
    Path(path).write_text(json.dumps(alg.to_json()) + "\n", encoding="utf-8")
