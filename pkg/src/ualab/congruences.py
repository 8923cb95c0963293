"""Congruences, the congruence lattice, and permutability."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .algebra import AlgebraError, FiniteAlgebra
from .relations import BinRel, compose

MAX_LATTICE_SIZE = 8


@dataclass(frozen=True)
class Congruence:
    partition: tuple[int, ...]  # canonical block id per element (first occurrence order)
    rel: BinRel

    @classmethod
    def from_partition(cls, labels: Sequence[int]) -> "Congruence":
        labels = _canonical_labels(labels)
        n = len(labels)
        blocks: dict[int, list[int]] = {}
        for x, b in enumerate(labels):
            blocks.setdefault(b, []).append(x)
        return cls(labels, BinRel.from_partition(list(blocks.values()), n))

    @property
    def blocks(self) -> list[list[int]]:
        out: dict[int, list[int]] = {}
        for x, b in enumerate(self.partition):
            out.setdefault(b, []).append(x)
        return list(out.values())

    @property
    def num_blocks(self) -> int:
        return max(self.partition) + 1

    def __le__(self, other: "Congruence") -> bool:
        return self.rel <= other.rel

    def __repr__(self):
        return "Cg" + "|".join(",".join(map(str, b)) for b in self.blocks)


def _canonical_labels(labels: Sequence[int]) -> tuple[int, ...]:
    relabel: dict[int, int] = {}
    return tuple(relabel.setdefault(b, len(relabel)) for b in labels)


@lru_cache(maxsize=64)
def _translations(alg: FiniteAlgebra) -> np.ndarray:
    """All basic translations a -> f(c1, .., a, .., ck) as rows of an array."""
    n = alg.size
    rows = []
    for op in alg.ops:
        if op.arity == 0:
            continue
        arr = alg.arrays[op.name]
        for pos in range(op.arity):
            moved = np.moveaxis(arr, pos, 0).reshape(n, -1)
            rows.append(moved.T)
    if not rows:
        return np.zeros((0, n), dtype=np.int64)
    return np.unique(np.concatenate(rows), axis=0)


def congruence_generated(alg: FiniteAlgebra, pairs: Iterable[Sequence[int]]) -> Congruence:
    """Least congruence containing ``pairs``.

    Union-find over a worklist of merged pairs; each merge is pushed through
    every basic translation. An equivalence closed under basic translations is
    compatible, so the fixpoint is the generated congruence.
    """
    n = alg.size
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    trans = _translations(alg).tolist()
    work = []
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise AlgebraError(f"pair ({a}, {b}) outside carrier")
        work.append((a, b))
    while work:
        a, b = work.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[max(ra, rb)] = min(ra, rb)
        for t in trans:
            if find(t[a]) != find(t[b]):
                work.append((t[a], t[b]))
    return Congruence.from_partition([find(x) for x in range(n)])


def is_congruence_partition(alg: FiniteAlgebra, labels: Sequence[int]) -> bool:
    lab = np.asarray(labels)
    trans = _translations(alg)
    if len(trans) == 0:
        return True
    # same block before translation must stay in one block after it
    imgs = lab[trans]  # (num_translations, n)
    for block in set(labels):
        members = np.flatnonzero(lab == block)
        if len(members) > 1 and (imgs[:, members] != imgs[:, members[:1]]).any():
            return False
    return True


def restricted_growth_strings(n: int):
    """Set partitions of range(n) as block-label tuples, in lexicographic order."""
    if n == 0:
        yield ()
        return
    labels = [0] * n

    def rec(i, top):
        if i == n:
            yield tuple(labels)
            return
        for b in range(top + 2):
            labels[i] = b
            yield from rec(i + 1, max(top, b))

    yield from rec(1, 0)


@dataclass
class CongLattice:
    alg: FiniteAlgebra
    elements: tuple[Congruence, ...]

    @cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {c.partition: i for i, c in enumerate(self.elements)}

    @cached_property
    def leq(self) -> np.ndarray:
        k = len(self.elements)
        out = np.zeros((k, k), dtype=bool)
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                out[i, j] = a.rel <= b.rel
        return out

    @cached_property
    def meet(self) -> np.ndarray:
        k = len(self.elements)
        out = np.zeros((k, k), dtype=np.int64)
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                labels = [a.partition[x] * len(a.partition) + b.partition[x] for x in range(self.alg.size)]
                out[i, j] = self.index[_canonical_labels(labels)]
        return out

    @cached_property
    def join(self) -> np.ndarray:
        k = len(self.elements)
        out = np.zeros((k, k), dtype=np.int64)
        for i, a in enumerate(self.elements):
            for j, b in enumerate(self.elements):
                if j < i:
                    out[i, j] = out[j, i]
                    continue
                gens = _block_pairs(a) + _block_pairs(b)
                out[i, j] = self.index[congruence_generated(self.alg, gens).partition]
        return out

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.elements) - 1

    def __len__(self):
        return len(self.elements)


def _block_pairs(c: Congruence) -> list[tuple[int, int]]:
    return [(b[0], x) for b in c.blocks for x in b[1:]]


@lru_cache(maxsize=64)
def congruence_lattice(alg: FiniteAlgebra) -> CongLattice:
    """All congruences by filtering every set partition (carrier of at most 8 elements).

    Ordered by number of blocks (descending), then by block labels; the
    bottom is first and the top last.
    """
    if alg.size > MAX_LATTICE_SIZE:
        raise AlgebraError(
            f"carrier of {alg.size} elements is too large for exhaustive partition filtering "
            f"(limit {MAX_LATTICE_SIZE})")
    found = [Congruence.from_partition(p) for p in restricted_growth_strings(alg.size)
             if is_congruence_partition(alg, p)]
    found.sort(key=lambda c: (-c.num_blocks, c.partition))
    return CongLattice(alg, tuple(found))


def _leq(lat, a, b):
    return lat.leq[a, b]


def distributivity_violation(lat: CongLattice):
    """First (a, b, c) with a^b <= c but a^(b v c) not <= c, or None."""
    k = len(lat)
    for a, b, c in itertools.product(range(k), repeat=3):
        if lat.leq[lat.meet[a, b], c] and not lat.leq[lat.meet[a, lat.join[b, c]], c]:
            return a, b, c
    return None


def modularity_violation(lat: CongLattice):
    """First (x, y, z) with x <= z but x v (y ^ z) != (x v y) ^ z, or None."""
    k = len(lat)
    for x, y, z in itertools.product(range(k), repeat=3):
        if lat.leq[x, z] and lat.join[x, lat.meet[y, z]] != lat.meet[lat.join[x, y], z]:
            return x, y, z
    return None


def is_distributive(lat: CongLattice) -> bool:
    return distributivity_violation(lat) is None


def is_modular(lat: CongLattice) -> bool:
    return modularity_violation(lat) is None


@dataclass
class Permutability:
    perm2: bool
    perm3: bool
    # (alpha index, beta index, (u, v)) for the first failing pair, if any
    witness2: tuple | None = None
    witness3: tuple | None = None


def permutability(alg: FiniteAlgebra) -> Permutability:
    """2- and 3-permutability of all congruence pairs, with the first violation of each."""
    lat = congruence_lattice(alg)
    rels = [c.rel for c in lat.elements]
    w2 = w3 = None
    for i, j in itertools.combinations(range(len(rels)), 2):
        a, b = rels[i], rels[j]
        ab, ba = compose(a, b), compose(b, a)
        if w2 is None and ab != ba:
            w2 = (i, j, _first_pair(ab, ba) or _first_pair(ba, ab))
        aba, bab = compose(a, ba), compose(b, ab)
        if w3 is None and aba != bab:
            w3 = (i, j, _first_pair(aba, bab) or _first_pair(bab, aba))
        if w2 is not None and w3 is not None:
            break
    return Permutability(w2 is None, w3 is None, w2, w3)


def _first_pair(r: BinRel, s: BinRel):
    """Least pair in r but not in s, or None."""
    diff = r.code & ~s.code
    if not diff:
        return None
    i = (diff & -diff).bit_length() - 1
    return divmod(i, r.cod_size)
