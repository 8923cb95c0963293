"""Binary relations on finite carriers as bitsets, plus compatible-relation families.

A relation from an ``n``-set to an ``m``-set is stored as a Python int whose
bit ``x*m + y`` is set iff ``x`` is related to ``y``. That index is also the
element code of ``(x, y)`` in :func:`~ualab.algebra.product_algebra`, so a
relation between two algebras is literally a subset of their product.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

from .algebra import (DEFAULT_BUDGET, FiniteAlgebra, close_mask, power_algebra,
                      product_algebra)

# exhaustive subset filtering is used up to this many candidate bits
EXHAUSTIVE_BITS = 20


class RelationError(ValueError):
    pass


@dataclass(frozen=True, order=False)
class BinRel:
    dom_size: int
    cod_size: int
    code: int = 0

    def __post_init__(self):
        if self.code < 0 or self.code >> (self.dom_size * self.cod_size):
            raise RelationError("relation bits outside the declared sorts")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[int]], dom_size: int, cod_size: int | None = None) -> "BinRel":
        if cod_size is None:
            cod_size = dom_size
        code = 0
        for x, y in pairs:
            if not (0 <= x < dom_size and 0 <= y < cod_size):
                raise RelationError(f"pair ({x}, {y}) outside {dom_size}x{cod_size}")
            code |= 1 << (x * cod_size + y)
        return cls(dom_size, cod_size, code)

    @classmethod
    def from_rows(cls, rows: Sequence[int], cod_size: int) -> "BinRel":
        code = 0
        for x, row in enumerate(rows):
            code |= row << (x * cod_size)
        return cls(len(rows), cod_size, code)

    @classmethod
    def identity(cls, n: int) -> "BinRel":
        return cls(n, n, sum(1 << (x * n + x) for x in range(n)))

    @classmethod
    def full(cls, n: int, m: int | None = None) -> "BinRel":
        m = n if m is None else m
        return cls(n, m, (1 << (n * m)) - 1)

    @classmethod
    def empty(cls, n: int, m: int | None = None) -> "BinRel":
        return cls(n, n if m is None else m, 0)

    @classmethod
    def from_partition(cls, blocks: Sequence[Sequence[int]], n: int) -> "BinRel":
        return cls.from_pairs(((x, y) for b in blocks for x in b for y in b), n)

    @cached_property
    def rows(self) -> tuple[int, ...]:
        m = self.cod_size
        mask = (1 << m) - 1
        return tuple((self.code >> (x * m)) & mask for x in range(self.dom_size))

    @property
    def square(self) -> bool:
        return self.dom_size == self.cod_size

    def pairs(self) -> list[tuple[int, int]]:
        m = self.cod_size
        out = []
        code = self.code
        while code:
            low = code & -code
            i = low.bit_length() - 1
            out.append(divmod(i, m))
            code ^= low
        return out

    def __contains__(self, pair) -> bool:
        x, y = pair
        return bool(self.code >> (x * self.cod_size + y) & 1)

    def __len__(self):
        return self.code.bit_count() if hasattr(int, "bit_count") else bin(self.code).count("1")

    def __iter__(self):
        return iter(self.pairs())

    def _same_sorts(self, other: "BinRel"):
        if (self.dom_size, self.cod_size) != (other.dom_size, other.cod_size):
            raise RelationError(
                f"sort mismatch: {self.dom_size}x{self.cod_size} vs {other.dom_size}x{other.cod_size}")

    def __and__(self, other):
        self._same_sorts(other)
        return BinRel(self.dom_size, self.cod_size, self.code & other.code)

    def __or__(self, other):
        self._same_sorts(other)
        return BinRel(self.dom_size, self.cod_size, self.code | other.code)

    def __le__(self, other):
        self._same_sorts(other)
        return self.code & ~other.code == 0

    def __ge__(self, other):
        return other <= self

    def is_reflexive(self) -> bool:
        self._require_square()
        return all(row >> x & 1 for x, row in enumerate(self.rows))

    def is_symmetric(self) -> bool:
        self._require_square()
        return converse(self).code == self.code

    def is_transitive(self) -> bool:
        self._require_square()
        return compose(self, self) <= self

    def is_equivalence(self) -> bool:
        return self.is_reflexive() and self.is_symmetric() and self.is_transitive()

    def blocks(self) -> list[list[int]]:
        """Classes of an equivalence relation, ordered by least element."""
        if not self.is_equivalence():
            raise RelationError("not an equivalence relation")
        seen = 0
        out = []
        for x, row in enumerate(self.rows):
            if not seen >> x & 1:
                out.append([y for y in range(self.cod_size) if row >> y & 1])
                seen |= row
        return out

    def _require_square(self):
        if not self.square:
            raise RelationError("operation needs a relation on a single carrier")

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.pairs()]

    def __repr__(self):
        return f"BinRel({self.dom_size}x{self.cod_size}, {self.pairs()})"


def compose(s: BinRel, r: BinRel) -> BinRel:
    """``s r``: apply ``r`` first, then ``s``. (x, z) iff x r y s z for some y."""
    if r.cod_size != s.dom_size:
        raise RelationError(f"cannot compose: {r.cod_size} != {s.dom_size}")
    srows = s.rows
    rows = []
    for row in r.rows:
        acc = 0
        while row:
            low = row & -row
            acc |= srows[low.bit_length() - 1]
            row ^= low
        rows.append(acc)
    return BinRel.from_rows(rows, s.cod_size)


def converse(r: BinRel) -> BinRel:
    n, m = r.dom_size, r.cod_size
    code = 0
    for x, y in r.pairs():
        code |= 1 << (y * n + x)
    return BinRel(m, n, code)


def meet(r: BinRel, s: BinRel) -> BinRel:
    return r & s


def join_raw(r: BinRel, s: BinRel) -> BinRel:
    """Plain union (not the congruence join)."""
    return r | s


def refl_close(r: BinRel) -> BinRel:
    r._require_square()
    return r | BinRel.identity(r.dom_size)


def symm_close(r: BinRel) -> BinRel:
    r._require_square()
    return r | converse(r)


def trans_close(r: BinRel) -> BinRel:
    """Warshall over row bitsets."""
    r._require_square()
    rows = list(r.rows)
    for k in range(r.dom_size):
        bit = 1 << k
        rk = rows[k]
        for x in range(r.dom_size):
            if rows[x] & bit:
                rows[x] |= rk
    return BinRel.from_rows(rows, r.cod_size)


def equivalence_close(r: BinRel) -> BinRel:
    return trans_close(symm_close(refl_close(r)))


def kernel_pair(n_left: int, n_right: int, side: int) -> BinRel:
    """Eq(pi) on the product carrier ``n_left * n_right`` for projection ``side`` (0 or 1)."""
    n = n_left * n_right
    pairs = []
    for e in range(n):
        for f in range(n):
            if (divmod(e, n_right)[side] == divmod(f, n_right)[side]):
                pairs.append((e, f))
    return BinRel.from_pairs(pairs, n)


# -- compatibility ---------------------------------------------------------

def _pair_algebra(a: FiniteAlgebra, b: FiniteAlgebra | None) -> FiniteAlgebra:
    return product_algebra(a, a if b is None else b)


def is_compatible(alg: FiniteAlgebra, r: BinRel, other: FiniteAlgebra | None = None) -> bool:
    """True iff ``r`` is a subuniverse of ``alg x other`` (``other`` defaults to ``alg``)."""
    b = alg if other is None else other
    if (r.dom_size, r.cod_size) != (alg.size, b.size):
        raise RelationError("relation sorts do not match the algebras")
    prod = _pair_algebra(alg, other)
    return prod.is_closed(_bits(r.code))


def _bits(code: int) -> list[int]:
    out = []
    while code:
        low = code & -code
        out.append(low.bit_length() - 1)
        code ^= low
    return out


def code_to_mask(code: int, size: int) -> np.ndarray:
    raw = np.frombuffer(code.to_bytes((size + 7) // 8 or 1, "little"), dtype=np.uint8)
    return np.unpackbits(raw, bitorder="little")[:size].astype(bool)


def mask_to_code(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask.astype(np.uint8), bitorder="little").tobytes(), "little")


def close_code(alg: FiniteAlgebra, code: int) -> int:
    """Subuniverse generated by the element set ``code`` (a bitmask)."""
    return mask_to_code(close_mask(alg, code_to_mask(code, alg.size)))


def is_positive_setlevel(e: BinRel) -> bool:
    """Symmetric, and every edge (x, y) carries the loops (x, x) and (y, y).

    Exactly the relations of the form R°R for a set relation R (take one
    witness column per edge).
    """
    e._require_square()
    if not e.is_symmetric():
        return False
    loops = sum(1 << x for x, row in enumerate(e.rows) if row >> x & 1)
    for x, row in enumerate(e.rows):
        if row and not (loops >> x & 1 and row & ~loops == 0):
            return False
    return True


# -- relation classes --------------------------------------------------------

class RelClass(enum.Enum):
    CONGRUENCE = "cong"
    EQUIVALENCE = "equiv"  # same thing as CONGRUENCE on a single algebra
    REFLEXIVE = "refl"
    POSITIVE = "pos"
    ALL = "all"

    @classmethod
    def parse(cls, text: str) -> "RelClass":
        aliases = {"congruence": "cong", "eq": "equiv", "equivalence": "equiv",
                   "reflexive": "refl", "positive": "pos", "compatible": "all"}
        text = aliases.get(text.lower(), text.lower())
        return cls(text)

    @property
    def is_closure_system(self) -> bool:
        """Closed under intersections, so each set of pairs has a least member above it."""
        return self is not RelClass.POSITIVE

    @property
    def reflexive(self) -> bool:
        return self is not RelClass.ALL


def class_closure(alg: FiniteAlgebra, cls: RelClass, pairs_code: int) -> BinRel:
    """Least relation of a closure-system class containing the given pairs."""
    n = alg.size
    if cls in (RelClass.CONGRUENCE, RelClass.EQUIVALENCE):
        from .congruences import congruence_generated
        return congruence_generated(alg, BinRel(n, n, pairs_code).pairs()).rel
    if cls is RelClass.REFLEXIVE:
        pairs_code |= BinRel.identity(n).code
    elif cls is not RelClass.ALL:
        raise RelationError(f"class {cls.value} is not a closure system")
    return BinRel(n, n, _cached_close(alg, pairs_code))


@lru_cache(maxsize=1 << 16)
def _cached_close(alg: FiniteAlgebra, code: int) -> int:
    return close_code(power_algebra(alg, 2), code)


def in_class(alg: FiniteAlgebra, cls: RelClass, r: BinRel, witness: BinRel | None = None) -> bool:
    """Membership predicate. For POSITIVE a compatible witness W with W°W = r may be supplied."""
    if not r.square or r.dom_size != alg.size or not is_compatible(alg, r):
        return False
    if cls is RelClass.ALL:
        return True
    if not r.is_reflexive():
        return False
    if cls in (RelClass.CONGRUENCE, RelClass.EQUIVALENCE):
        return r.is_symmetric() and r.is_transitive()
    if cls is RelClass.POSITIVE:
        if not is_positive_setlevel(r):
            return False
        if witness is not None:
            return is_compatible(alg, witness) and compose(converse(witness), witness) == r
    return True


@dataclass
class RelationFamily:
    """A canonical (code-ordered) list of relations from one class.

    ``exhaustive`` is False when the family is a sample. For POSITIVE,
    ``witnesses[code]`` is a compatible W with W°W equal to that relation.
    """

    cls: RelClass
    size: int
    relations: tuple[BinRel, ...]
    exhaustive: bool
    witnesses: dict[int, BinRel] = field(default_factory=dict)

    def __iter__(self) -> Iterator[BinRel]:
        return iter(self.relations)

    def __len__(self):
        return len(self.relations)

    @cached_property
    def codes(self) -> np.ndarray:
        return np.array([r.code for r in self.relations], dtype=np.uint64)


def enumerate_subuniverses(alg: FiniteAlgebra, required: int = 0) -> list[int]:
    """All subuniverses containing the ``required`` elements, by filtering every subset.

    Only for carriers of at most ``EXHAUSTIVE_BITS`` elements. Vectorized over
    all candidate bitmasks at once: a subset is rejected when some operation
    maps members to a non-member.
    """
    N = alg.size
    if N > EXHAUSTIVE_BITS:
        raise RelationError(f"carrier of {N} elements is too large for subset filtering")
    free = [i for i in range(N) if not required >> i & 1]
    # candidates: required bits plus every subset of the free bits
    sub = np.arange(1 << len(free), dtype=np.int64)
    codes = np.full(len(sub), required, dtype=np.int64)
    for j, i in enumerate(free):
        codes |= ((sub >> j) & 1) << i
    bits = [((codes >> i) & 1).astype(bool) for i in range(N)]
    ok = np.ones(len(codes), dtype=bool)
    for op in alg.ops:
        tab = alg.arrays[op.name]
        if op.arity == 0:
            ok &= bits[tab.item()]
            continue
        for args in itertools.product(range(N), repeat=op.arity):
            out = tab[args]
            if out in args:
                continue
            present = bits[args[0]].copy()
            for a in args[1:]:
                present &= bits[a]
            ok &= ~present | bits[out]
    return sorted(int(c) for c in codes[ok])


def _sample_subuniverses(alg2: FiniteAlgebra, base: int) -> list[int]:
    """Closures of ``base`` plus each element and each pair of elements."""
    found = {close_code(alg2, base)}
    N = alg2.size
    singles = {}
    for i in range(N):
        singles[i] = close_code(alg2, base | 1 << i)
        found.add(singles[i])
    for i, j in itertools.combinations(range(N), 2):
        if singles[i] >> j & 1 or singles[j] >> i & 1:
            continue
        found.add(close_code(alg2, singles[i] | singles[j]))
    return sorted(found)


@lru_cache(maxsize=64)
def _family(alg: FiniteAlgebra, cls: RelClass, budget: int) -> RelationFamily:
    n = alg.size
    if cls in (RelClass.CONGRUENCE, RelClass.EQUIVALENCE):
        from .congruences import congruence_lattice
        lat = congruence_lattice(alg)
        rels = sorted((c.rel for c in lat.elements), key=lambda r: r.code)
        return RelationFamily(cls, n, tuple(rels), True)
    alg2 = power_algebra(alg, 2)
    diag = BinRel.identity(n).code
    exhaustive = n * n <= EXHAUSTIVE_BITS and (1 << (n * n)) <= budget
    if cls in (RelClass.REFLEXIVE, RelClass.ALL):
        base = diag if cls is RelClass.REFLEXIVE else 0
        if exhaustive:
            codes = enumerate_subuniverses(alg2, base)
        else:
            codes = _sample_subuniverses(alg2, base)
        return RelationFamily(cls, n, tuple(BinRel(n, n, c) for c in codes), exhaustive)
    if cls is RelClass.POSITIVE:
        source = _family(alg, RelClass.ALL, budget)
        witnesses: dict[int, BinRel] = {}
        for w in source:  # code order, so the first witness kept is canonical
            e = compose(converse(w), w)
            if e.code & diag == diag and e.code not in witnesses:
                witnesses[e.code] = w
        rels = tuple(BinRel(n, n, c) for c in sorted(witnesses))
        return RelationFamily(cls, n, rels, source.exhaustive, witnesses)
    raise RelationError(f"unknown class {cls}")


def enumerate_relations(alg: FiniteAlgebra, cls: RelClass | str, budget: int = DEFAULT_BUDGET) -> RelationFamily:
    """Compatible relations on ``alg`` of the given class, in increasing code order.

    Exhaustive when the carrier has at most 4 elements (every subset of A^2
    is filtered); otherwise a systematic sample of generated subalgebras,
    flagged ``exhaustive=False``. POSITIVE relations are the reflexive ones
    among W°W for compatible W on A^2.
    """
    if isinstance(cls, str):
        cls = RelClass.parse(cls)
    return _family(alg, cls, budget)
