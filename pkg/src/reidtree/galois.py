"""Transitive subgroups of S_p for small primes p, up to conjugacy.

Every transitive group of prime degree contains a p-cycle and all p-cycles
are conjugate, so it suffices to enumerate the subgroups containing the
fixed cycle (0 1 ... p-1).  Starting from that cyclic group, each class
representative H is extended by one element from every right coset of H;
every subgroup containing the cycle arises from such a chain, up to
conjugacy.

The table flags each solvable, transitive, non-abelian subgroup in which
every element is even: those break the "abelian or contains an odd
permutation" dichotomy.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field

from . import permgrp
from .errors import PreconditionError
from .permgrp import DEFAULT_CAP, PermGroup

DESK_PRIMES = (2, 3, 5, 7)


@dataclass
class SubgroupClass:
    name: str
    order: int
    transitive: bool
    solvable: bool
    abelian: bool
    contains_odd: bool
    generators: list[list[int]]

    @property
    def dichotomy_counterexample(self) -> bool:
        return self.transitive and self.solvable and not self.abelian and not self.contains_odd

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "transitive": self.transitive,
            "solvable": self.solvable,
            "abelian": self.abelian,
            "contains_odd": self.contains_odd,
            "dichotomy_counterexample": self.dichotomy_counterexample,
            "generators": self.generators,
        }


@dataclass
class GaloisTable:
    p: int
    classes: list[SubgroupClass] = field(default_factory=list)

    @property
    def discrepancies(self) -> list[SubgroupClass]:
        return [c for c in self.classes if c.dichotomy_counterexample]

    def names(self) -> list[str]:
        return [c.name for c in self.classes]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "classes": [c.to_json() for c in self.classes],
            "discrepancies": [
                {"name": c.name, "order": c.order,
                 "note": "solvable, transitive and non-abelian, yet every element is even: "
                         "the abelian-or-odd dichotomy fails for this subgroup"}
                for c in self.discrepancies
            ],
        }


def _cycle_histogram(G: PermGroup) -> Counter:
    return Counter(permgrp.cycle_type(x) for x in G.elements)


def _conjugate_in_sym(H: PermGroup, K: PermGroup, sym: list) -> bool:
    for s in sym:
        s_inv = permgrp.inverse(s)
        if all(permgrp.compose(s, permgrp.compose(g, s_inv)) in K.index for g in H.generators):
            return True
    return False


def _name(p: int, G: PermGroup, solvable: bool, all_even: bool) -> str:
    n = G.order
    if n == p:
        return f"Z_{p}"
    if n == math.factorial(p):
        return f"S_{p}"
    if n * 2 == math.factorial(p) and all_even:
        return f"A_{p}"
    if solvable and n % p == 0 and (p - 1) % (n // p) == 0:
        d = n // p
        return f"D_{p}" if d == 2 else f"Z_{p} ⋊ Z_{d}"
    return f"order {n}"


def solvable_transitive_analysis(p: int, cap: int = DEFAULT_CAP,
                                 allow_large: bool = False) -> GaloisTable:
    allowed = DESK_PRIMES + ((11,) if allow_large else ())
    if p not in allowed:
        raise PreconditionError(f"p must be one of {allowed}")
    sym = [tuple(x) for x in itertools.permutations(range(p))]
    cycle = tuple((x + 1) % p for x in range(p))
    base = permgrp.closure([cycle], cap)
    reps = [base]
    known = {frozenset(base.elements)}
    queue = [base]
    while queue:
        H = queue.pop(0)
        covered = set(H.elements)
        for x in sym:
            if x in covered:
                continue
            covered.update(permgrp.compose(h, x) for h in H.elements)
            K = permgrp.closure(H.generators + [x], cap)
            key = frozenset(K.elements)
            if key in known:
                continue
            known.add(key)
            hist = _cycle_histogram(K)
            if any(R.order == K.order and _cycle_histogram(R) == hist
                   and _conjugate_in_sym(K, R, sym) for R in reps):
                continue
            reps.append(K)
            queue.append(K)

    table = GaloisTable(p)
    for G in sorted(reps, key=lambda G: G.order):
        solvable = permgrp.is_solvable(G, cap)
        all_even = all(permgrp.sign(x) == 1 for x in G.elements)
        table.classes.append(SubgroupClass(
            name=_name(p, G, solvable, all_even),
            order=G.order,
            transitive=permgrp.is_transitive(G),
            solvable=solvable,
            abelian=permgrp.is_abelian(G),
            contains_odd=not all_even,
            generators=[list(g) for g in G.generators],
        ))
    return table
