"""Finite permutation groups by explicit enumeration.

Permutations are plain tuples in one-line notation over ``range(degree)``.
Products are functional: ``compose(p, q)`` applies ``q`` first, so
``compose(p, q)[x] == p[q[x]]``.  Groups are enumerated breadth-first from
their generators; the discovery order is canonical and every search in the
package breaks ties by it.
"""

from __future__ import annotations

import math
from collections import deque
from functools import reduce
from operator import itemgetter
from typing import Iterable, Sequence

from .errors import CapExceeded, RequiresEnumeration

Perm = tuple  # one-line notation, tuple[int, ...]

DEFAULT_CAP = 2_000_000


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def is_perm(images: Sequence[int]) -> bool:
    return sorted(images) == list(range(len(images)))


def compose(p: Perm, q: Perm) -> Perm:
    """Return ``p∘q`` (apply ``q``, then ``p``)."""
    return tuple([p[i] for i in q])


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def power(p: Perm, k: int) -> Perm:
    if k < 0:
        p, k = inverse(p), -k
    result = identity(len(p))
    base = p
    while k:
        if k & 1:
            result = compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


def conjugate(h: Perm, x: Perm) -> Perm:
    """Return ``h⁻¹·x·h``."""
    return compose(inverse(h), compose(x, h))


def commutator(x: Perm, y: Perm) -> Perm:
    """Return ``x·y·x⁻¹·y⁻¹``."""
    return compose(compose(x, y), compose(inverse(x), inverse(y)))


def cycles(p: Perm) -> list[tuple[int, ...]]:
    """Cycle decomposition including fixed points, each cycle led by its least point."""
    seen = [False] * len(p)
    out = []
    for start in range(len(p)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = p[start]
        while x != start:
            seen[x] = True
            cyc.append(x)
            x = p[x]
        out.append(tuple(cyc))
    return out


def cycle_type(p: Perm) -> tuple[int, ...]:
    return tuple(sorted(len(c) for c in cycles(p)))


def sign(p: Perm) -> int:
    return -1 if (len(p) - len(cycles(p))) % 2 else 1


def order(p: Perm) -> int:
    return reduce(math.lcm, cycle_type(p), 1)


def from_cycles(degree: int, *cycs: Sequence[int]) -> Perm:
    images = list(range(degree))
    for cyc in cycs:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            images[a] = b
    return tuple(images)


class UnionFind:
    """Disjoint sets over ``range(n)`` with union by size and path halving."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]

    def blocks(self) -> list[list[int]]:
        """Blocks as sorted index lists, ordered by their least member."""
        groups: dict[int, list[int]] = {}
        for x in range(len(self.parent)):
            groups.setdefault(self.find(x), []).append(x)
        return sorted(groups.values(), key=lambda b: b[0])


def _right_multipliers(gens: Sequence[Perm]):
    # x -> x∘g for each generator; itemgetter(*g) needs at least two points
    if gens and len(gens[0]) >= 2:
        return [itemgetter(*g) for g in gens]
    return [lambda x, g=g: compose(x, g) for g in gens]


class PermGroup:
    """An enumerated permutation group with BFS discovery data.

    ``elements[k]`` equals ``elements[parents[k][0]] ∘ generators[parents[k][1]]``
    for every ``k > 0``; ``elements[0]`` is the identity.
    """

    def __init__(self, degree: int, generators: Sequence[Perm],
                 elements: list[Perm], parents: list[tuple[int, int]]):
        self.degree = degree
        self.generators = [tuple(g) for g in generators]
        self.elements = elements
        self.parents = parents
        self.index = {x: k for k, x in enumerate(elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return tuple(x) in self.index

    def word_indices(self, k: int) -> list[int]:
        """Generator indices whose product (left to right) is ``elements[k]``."""
        word = []
        while k:
            k, g = self.parents[k]
            word.append(g)
        word.reverse()
        return word

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order}, ngens={len(self.generators)})"


def closure(gens: Iterable[Perm], cap: int = DEFAULT_CAP, degree: int | None = None) -> PermGroup:
    """Enumerate the group generated by ``gens`` breadth-first.

    Raises CapExceeded once more than ``cap`` elements have been discovered.
    """
    gens = [tuple(g) for g in gens]
    if degree is None:
        if not gens:
            raise ValueError("degree is required when there are no generators")
        degree = len(gens[0])
    if any(len(g) != degree for g in gens):
        raise ValueError("generators must share one degree")
    if cap < 1:
        raise ValueError("cap must be at least 1")
    e = identity(degree)
    elements = [e]
    parents = [(-1, -1)]
    seen = {e}
    mults = _right_multipliers(gens)
    queue = deque([0])
    while queue:
        k = queue.popleft()
        x = elements[k]
        for gi, mult in enumerate(mults):
            y = tuple(mult(x))
            if y in seen:
                continue
            seen.add(y)
            elements.append(y)
            parents.append((k, gi))
            if len(elements) > cap:
                raise CapExceeded(cap, len(elements))
            queue.append(len(elements) - 1)
    return PermGroup(degree, gens, elements, parents)


def generated_subgroup(candidates: Iterable[Perm], degree: int,
                       cap: int = DEFAULT_CAP) -> PermGroup:
    """Subgroup generated by ``candidates``, keeping only non-redundant generators."""
    gens: list[Perm] = []
    group = closure([], cap, degree)
    for c in candidates:
        c = tuple(c)
        if c not in group.index:
            gens.append(c)
            group = closure(gens, cap, degree)
    return group


def orbit(gens: Sequence[Perm], point: int) -> list[int]:
    seen = {point}
    out = [point]
    for x in out:
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                out.append(y)
    return out


def is_transitive(G: PermGroup, domain: Iterable[int] | None = None) -> bool:
    domain = set(range(G.degree)) if domain is None else set(domain)
    if not domain:
        return True
    return set(orbit(G.generators, min(domain))) == domain


def is_abelian(G: PermGroup) -> bool:
    gens = G.generators
    return all(compose(x, y) == compose(y, x)
               for i, x in enumerate(gens) for y in gens[i + 1:])


def _require_enumerated(G) -> None:
    if not isinstance(G, PermGroup):
        raise RequiresEnumeration("operation needs an enumerated PermGroup")


def derived_subgroup(G: PermGroup, cap: int = DEFAULT_CAP) -> PermGroup:
    # [x, g] over all x and generators g generate a normal subgroup with abelian quotient
    _require_enumerated(G)
    comms = (commutator(x, g) for x in G.elements for g in G.generators)
    return generated_subgroup(comms, G.degree, cap)


def derived_series(G: PermGroup, cap: int = DEFAULT_CAP) -> list[PermGroup]:
    series = [G]
    while True:
        D = derived_subgroup(series[-1], cap)
        if D.order == series[-1].order:
            return series
        series.append(D)


def is_solvable(G: PermGroup, cap: int = DEFAULT_CAP) -> bool:
    return derived_series(G, cap)[-1].order == 1


def conjugacy_classes(G: PermGroup) -> list[list[int]]:
    """Conjugacy classes as lists of element indices, ordered by least index."""
    _require_enumerated(G)
    uf = UnionFind(G.order)
    index = G.index
    for g in G.generators:
        g_inv = inverse(g)
        for k, x in enumerate(G.elements):
            uf.union(k, index[compose(g, compose(x, g_inv))])
    return uf.blocks()


def are_conjugate(G: PermGroup | None, x: Perm, y: Perm) -> Perm | None:
    """Return ``h`` in ``G`` with ``y == h⁻¹·x·h``, or None.

    Differing cycle types settle the question for the whole symmetric group
    without enumeration; otherwise ``G`` must be enumerated.
    """
    if cycle_type(x) != cycle_type(y):
        return None
    if G is None:
        raise RequiresEnumeration("cycle types agree; an enumerated group is needed")
    _require_enumerated(G)
    y = tuple(y)
    for h in G.elements:
        if conjugate(h, x) == y:
            return h
    return None


def centralizer_elements(G: PermGroup, x: Perm) -> list[int]:
    _require_enumerated(G)
    return [k for k, h in enumerate(G.elements) if compose(h, x) == compose(x, h)]
