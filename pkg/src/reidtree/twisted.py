"""Reidemeister (twisted conjugacy) classes on finite level quotients.

The automorphism is conjugation by the level action of a tree isometry t,
phi(q) = t·q·t⁻¹, and classes are orbits of the twisted action
h · g = h·g·phi(h)⁻¹.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import permgrp
from .errors import CapExceeded, InvalidNormalizer
from .permgrp import DEFAULT_CAP, Perm, UnionFind
from .quotients import LevelQuotient, level_quotient, validate_normalizer
from .selfsim import WreathRecursion, format_word
from .tree import Portrait, orbit_stats


class TwistedSetting:
    """A level quotient together with the automorphism induced by ``t_perm``."""

    def __init__(self, Q: LevelQuotient, t_perm: Perm, check: bool = True):
        t_perm = tuple(t_perm)
        if len(t_perm) != Q.group.degree:
            raise ValueError("t_perm has the wrong degree")
        self.Q = Q
        self.t_perm = t_perm
        self.t_inv = permgrp.inverse(t_perm)
        if check:
            t_inv = self.t_inv
            if not all(permgrp.compose(t_perm, permgrp.compose(g, t_inv)) in Q.group.index
                       for g in Q.group.generators):
                raise InvalidNormalizer(f"t does not normalize the level-{Q.level} quotient")
        self._phi_index: list[int] | None = None

    @classmethod
    def from_portrait(cls, Q: LevelQuotient, t: Portrait) -> TwistedSetting:
        if not validate_normalizer(Q, t):
            raise InvalidNormalizer(f"t does not normalize the level-{Q.level} quotient")
        return cls(Q, t.level_perm(Q.level), check=False)

    def phi(self, q: Perm) -> Perm:
        return permgrp.compose(self.t_perm, permgrp.compose(q, self.t_inv))

    @property
    def phi_index(self) -> list[int]:
        """phi as a permutation of element indices."""
        if self._phi_index is None:
            index = self.Q.group.index
            self._phi_index = [index[self.phi(q)] for q in self.Q.elements]
        return self._phi_index


@dataclass
class ReidemeisterPartition:
    class_of: list[int]  # element index -> class id
    count: int
    representatives: list[int]  # least element index of each class, by class id

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.count)]
        for k, c in enumerate(self.class_of):
            out[c].append(k)
        return out

    def sizes(self) -> list[int]:
        sizes = [0] * self.count
        for c in self.class_of:
            sizes[c] += 1
        return sizes


def reidemeister_classes(s: TwistedSetting) -> ReidemeisterPartition:
    Q = s.Q
    index = Q.group.index
    els = Q.elements
    uf = UnionFind(Q.order)
    for h in Q.group.generators:
        # g -> h·g·phi(h)⁻¹ = h·g·t·h⁻¹·t⁻¹
        right = permgrp.compose(s.t_perm, permgrp.compose(permgrp.inverse(h), s.t_inv))
        for k, g in enumerate(els):
            uf.union(k, index[permgrp.compose(h, permgrp.compose(g, right))])
    blocks = uf.blocks()
    class_of = [0] * Q.order
    for cid, block in enumerate(blocks):
        for k in block:
            class_of[k] = cid
    return ReidemeisterPartition(class_of, len(blocks), [b[0] for b in blocks])


def fixed_points(s: TwistedSetting) -> list[int]:
    return [k for k, pk in enumerate(s.phi_index) if pk == k]


def class_of(s: TwistedSetting, g: Perm, partition: ReidemeisterPartition | None = None) -> int:
    partition = partition or reidemeister_classes(s)
    return partition.class_of[s.Q.index_of(g)]


def shifted_setting(s: TwistedSetting, g: Perm) -> TwistedSetting:
    """The setting for tau_{g⁻¹}∘phi, i.e. conjugation by g⁻¹·t."""
    return TwistedSetting(s.Q, permgrp.compose(permgrp.inverse(g), s.t_perm), check=False)


def shift_check(s: TwistedSetting, g: Perm) -> bool:
    """Check that x -> x·g carries the classes of phi bijectively onto those of tau_{g⁻¹}∘phi."""
    Q = s.Q
    g = tuple(g)
    if g not in Q.group.index:
        raise ValueError("g is not an element of the quotient")
    before = reidemeister_classes(s)
    after = reidemeister_classes(shifted_setting(s, g))
    if before.count != after.count:
        return False
    index = Q.group.index
    image: dict[int, int] = {}
    for k, x in enumerate(Q.elements):
        c_new = after.class_of[index[permgrp.compose(x, g)]]
        if image.setdefault(before.class_of[k], c_new) != c_new:
            return False
    return len(set(image.values())) == after.count


@dataclass
class ReidRow:
    level: int
    group_order: int
    reid_count: int
    fixed_count: int
    orb_count: int
    representatives: list[str]

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "group_order": self.group_order,
            "reid_count": self.reid_count,
            "fixed_count": self.fixed_count,
            "orb_count": self.orb_count,
            "representatives": self.representatives,
        }


@dataclass
class ReidSeries:
    rows: list[ReidRow]
    truncated_at: int | None = None  # level whose quotient exceeded the cap

    def counts(self) -> list[int]:
        return [r.reid_count for r in self.rows]

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows], "truncated_at": self.truncated_at}


def reid_row(Q: LevelQuotient, t: Portrait) -> ReidRow:
    s = TwistedSetting.from_portrait(Q, t)
    part = reidemeister_classes(s)
    reps = [format_word(Q.discovery_word(k)) for k in part.representatives]
    return ReidRow(Q.level, Q.order, part.count, len(fixed_points(s)),
                   orbit_stats(t, Q.level).orbit_count, reps)


def reid_series(spec: WreathRecursion, t: Portrait, n_max: int,
                cap: int = DEFAULT_CAP) -> ReidSeries:
    """Reidemeister count, fixed-point count and Orb_n(t) for n = 1..n_max."""
    rows = []
    for n in range(1, n_max + 1):
        try:
            Q = level_quotient(spec, n, cap)
        except CapExceeded:
            return ReidSeries(rows, n)
        rows.append(reid_row(Q, t))
    return ReidSeries(rows)
