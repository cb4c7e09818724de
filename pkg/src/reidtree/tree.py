"""Spherically symmetric rooted trees and depth-truncated tree automorphisms.

Vertices are tuples of child symbols; the root is ``()``.  Every level is
ordered lexicographically, and a permutation of a level always refers to
that order.  A :class:`Portrait` stores one child permutation per internal
vertex above its depth, keyed by the *source* vertex, so that

    t(x1 x2 ... xn) = label(())[x1] label((x1,))[x2] ... label((x1..xn-1))[xn]
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterator, Sequence

from . import permgrp
from .errors import DepthExceeded, InvalidVertex, SpecParseError

Vertex = tuple  # tuple[int, ...]


@dataclass(frozen=True)
class BranchingSequence:
    """Branching index per level; ``indices[k]`` children for each vertex of level k.

    With ``repeat_tail`` the last index is used for every deeper level and the
    tree is infinite; otherwise its depth is ``len(indices)``.
    """

    indices: tuple[int, ...]
    repeat_tail: bool = True

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(b) for b in self.indices))
        if not self.indices:
            raise ValueError("branching sequence needs at least one index")
        if any(b < 2 for b in self.indices):
            raise ValueError(f"branching indices must be >= 2, got {self.indices}")

    @classmethod
    def regular(cls, b: int) -> BranchingSequence:
        return cls((b,), True)

    @property
    def depth_limit(self) -> int | None:
        return None if self.repeat_tail else len(self.indices)

    def arity(self, level: int) -> int:
        """Number of children of a vertex on ``level``."""
        if level < len(self.indices):
            return self.indices[level]
        if self.repeat_tail:
            return self.indices[-1]
        raise InvalidVertex(f"level {level} vertices are leaves of a depth-{len(self.indices)} tree")

    def level_size(self, n: int) -> int:
        return math.prod(self.arity(k) for k in range(n))

    def check_vertex(self, v: Vertex) -> Vertex:
        v = tuple(v)
        limit = self.depth_limit
        if limit is not None and len(v) > limit:
            raise InvalidVertex(f"vertex {v} is deeper than the tree ({limit})")
        for k, x in enumerate(v):
            if not 0 <= x < self.arity(k):
                raise InvalidVertex(f"symbol {x} at position {k} of {v} out of range")
        return v

    def vertices(self, n: int) -> Iterator[Vertex]:
        """Level ``n`` in lexicographic order."""
        return itertools.product(*(range(self.arity(k)) for k in range(n)))

    def index_of(self, v: Vertex) -> int:
        idx = 0
        for k, x in enumerate(v):
            idx = idx * self.arity(k) + x
        return idx

    def vertex_at(self, n: int, idx: int) -> Vertex:
        out = []
        for k in reversed(range(n)):
            idx, x = divmod(idx, self.arity(k))
            out.append(x)
        return tuple(reversed(out))

    def block_size(self, j: int, n: int) -> int:
        """Number of level-n descendants of one level-j vertex."""
        return math.prod(self.arity(k) for k in range(j, n))

    def to_json(self) -> dict:
        return {"branching": list(self.indices), "repeat_tail": self.repeat_tail}


BINARY = BranchingSequence.regular(2)


def children(tree: BranchingSequence, v: Vertex) -> list[Vertex]:
    v = tree.check_vertex(v)
    limit = tree.depth_limit
    if limit is not None and len(v) >= limit:
        raise InvalidVertex(f"vertex {v} is at the maximal depth {limit}")
    return [v + (x,) for x in range(tree.arity(len(v)))]


def path_to_str(v: Vertex) -> str:
    return ".".join(str(x) for x in v)


def path_from_str(s: str) -> Vertex:
    s = s.strip()
    if not s:
        return ()
    try:
        return tuple(int(x) for x in s.split("."))
    except ValueError:
        raise SpecParseError(f"bad vertex path {s!r}") from None


class Portrait:
    """A tree automorphism truncated to ``depth`` levels.

    Only non-identity labels are stored.  Instances are immutable values.
    """

    __slots__ = ("tree", "depth", "_labels")

    def __init__(self, tree: BranchingSequence, depth: int,
                 labels: dict[Vertex, Sequence[int]] | None = None):
        if depth < 0:
            raise ValueError("depth must be >= 0")
        limit = tree.depth_limit
        if limit is not None and depth > limit:
            raise DepthExceeded(f"portrait depth {depth} exceeds tree depth {limit}")
        clean = {}
        for v, lab in (labels or {}).items():
            v = tree.check_vertex(v)
            lab = tuple(int(x) for x in lab)
            if len(v) >= depth:
                raise DepthExceeded(f"label at {v} lies at or below depth {depth}")
            if len(lab) != tree.arity(len(v)) or not permgrp.is_perm(lab):
                raise ValueError(f"label {lab} at {v} is not a permutation of {tree.arity(len(v))} symbols")
            if lab != permgrp.identity(len(lab)):
                clean[v] = lab
        self.tree = tree
        self.depth = depth
        self._labels = clean

    def __setattr__(self, name, value):
        if hasattr(self, "_labels"):
            raise AttributeError("Portrait is immutable")
        object.__setattr__(self, name, value)

    @property
    def labels(self) -> dict[Vertex, tuple[int, ...]]:
        return dict(self._labels)

    def label(self, v: Vertex) -> tuple[int, ...]:
        lab = self._labels.get(v)
        return lab if lab is not None else permgrp.identity(self.tree.arity(len(v)))

    def __eq__(self, other):
        if not isinstance(other, Portrait):
            return NotImplemented
        return (self.tree == other.tree and self.depth == other.depth
                and self._labels == other._labels)

    def __hash__(self):
        return hash((self.tree, self.depth, frozenset(self._labels.items())))

    def __repr__(self):
        return f"Portrait(depth={self.depth}, nontrivial_labels={len(self._labels)})"

    def _check_level(self, n: int) -> None:
        if n > self.depth:
            raise DepthExceeded(f"level {n} is deeper than portrait depth {self.depth}")

    def apply(self, v: Vertex) -> Vertex:
        v = self.tree.check_vertex(v)
        self._check_level(len(v))
        return tuple(self.label(v[:k])[x] for k, x in enumerate(v))

    def truncate(self, depth: int) -> Portrait:
        self._check_level(depth)
        return Portrait(self.tree, depth, {v: lab for v, lab in self._labels.items() if len(v) < depth})

    def level_perm(self, n: int) -> permgrp.Perm:
        self._check_level(n)
        tree = self.tree
        paths: list[Vertex] = [()]
        images = [0]
        for k in range(n):
            b = tree.arity(k)
            new_paths = []
            new_images = []
            for v, img in zip(paths, images):
                lab = self._labels.get(v)
                for x in range(b):
                    new_paths.append(v + (x,))
                    new_images.append(img * b + (lab[x] if lab else x))
            paths, images = new_paths, new_images
        return tuple(images)

    def _walk(self) -> Iterator[tuple[Vertex, Vertex]]:
        """Yield (v, self(v)) for every vertex above the depth, parents first."""
        stack = [((), ())]
        while stack:
            v, img = stack.pop()
            yield v, img
            if len(v) + 1 < self.depth:
                lab = self.label(v)
                for x in range(self.tree.arity(len(v))):
                    stack.append((v + (x,), img + (lab[x],)))

    def compose(self, other: Portrait) -> Portrait:
        """Return ``self∘other``: apply ``other`` first."""
        if self.tree != other.tree:
            raise ValueError("portraits live on different trees")
        depth = min(self.depth, other.depth)
        labels = {}
        if depth:
            for v, img in other.truncate(depth)._walk():
                labels[v] = permgrp.compose(self.label(img), other.label(v))
        return Portrait(self.tree, depth, labels)

    def inverse(self) -> Portrait:
        labels = {}
        if self.depth:
            for v, img in self._walk():
                labels[img] = permgrp.inverse(self.label(v))
        return Portrait(self.tree, self.depth, labels)

    def to_json(self) -> dict:
        return {
            "depth": self.depth,
            "labels": {path_to_str(v): list(lab) for v, lab in sorted(self._labels.items())},
            **self.tree.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict, tree: BranchingSequence | None = None) -> Portrait:
        try:
            if "branching" in data:
                tree = BranchingSequence(tuple(data["branching"]), bool(data.get("repeat_tail", True)))
            elif tree is None:
                tree = BINARY
            depth = int(data["depth"])
            labels = {path_from_str(k): v for k, v in data.get("labels", {}).items()}
            return cls(tree, depth, labels)
        except (KeyError, TypeError, ValueError) as exc:
            raise SpecParseError(f"malformed portrait: {exc}") from None


def apply(p: Portrait, v: Vertex) -> Vertex:
    return p.apply(v)


def compose(p: Portrait, q: Portrait) -> Portrait:
    return p.compose(q)


def invert(p: Portrait) -> Portrait:
    return p.inverse()


def level_perm(p: Portrait, n: int) -> permgrp.Perm:
    return p.level_perm(n)


def identity_portrait(tree: BranchingSequence, depth: int) -> Portrait:
    return Portrait(tree, depth)


def root_rotation(tree: BranchingSequence, depth: int) -> Portrait:
    """Cyclic shift of the root's children, identity elsewhere (a swap on binary trees)."""
    b = tree.arity(0)
    return Portrait(tree, depth, {(): tuple((x + 1) % b for x in range(b))} if depth else {})


root_swap = root_rotation


def odometer(tree: BranchingSequence, depth: int) -> Portrait:
    """The adding machine: add one to the first symbol, carrying to the right."""
    labels = {}
    v: Vertex = ()
    for k in range(depth):
        b = tree.arity(k)
        labels[v] = tuple((x + 1) % b for x in range(b))
        v = v + (b - 1,)
    return Portrait(tree, depth, labels)


def random_portrait(tree: BranchingSequence, depth: int, rng: random.Random) -> Portrait:
    labels = {}
    for n in range(depth):
        b = tree.arity(n)
        for v in tree.vertices(n):
            lab = list(range(b))
            rng.shuffle(lab)
            labels[v] = lab
    return Portrait(tree, depth, labels)


@dataclass(frozen=True)
class OrbitStats:
    level: int
    orbit_count: int
    lengths: tuple[int, ...]
    fixed_vertices: tuple[Vertex, ...]

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "orbit_count": self.orbit_count,
            "lengths": list(self.lengths),
            "fixed_vertices": [path_to_str(v) for v in self.fixed_vertices],
        }


def orbit_stats(p: Portrait, n: int) -> OrbitStats:
    perm = p.level_perm(n)
    cycs = permgrp.cycles(perm)
    fixed = tuple(p.tree.vertex_at(n, c[0]) for c in cycs if len(c) == 1)
    lengths = tuple(sorted(len(c) for c in cycs))
    return OrbitStats(n, len(cycs), lengths, fixed)


def vertex_orbit(p: Portrait, v: Vertex) -> list[Vertex]:
    """The orbit of ``v`` under powers of ``p``, starting at ``v``."""
    out = [tuple(v)]
    w = p.apply(v)
    while w != out[0]:
        out.append(w)
        w = p.apply(w)
    return out


def level_order(p: Portrait, n: int) -> int:
    return permgrp.order(p.level_perm(n))


@dataclass(frozen=True)
class GrowthReport:
    counts: tuple[int, ...]  # Orb_1 .. Orb_up_to
    stabilized: bool
    bound: int | None = None  # M
    since: int | None = None  # j0
    window: int = 3
    note: str = field(default="finite-depth evidence, not a proof")

    @property
    def verdict(self) -> str:
        if self.stabilized:
            return f"stabilized at M={self.bound} since level {self.since}"
        return "growing"

    def to_json(self) -> dict:
        return {
            "counts": list(self.counts),
            "verdict": self.verdict,
            "stabilized": self.stabilized,
            "M": self.bound,
            "j0": self.since,
            "window": self.window,
            "note": self.note,
        }


def classify_orbit_growth(p: Portrait, up_to: int, window: int = 3) -> GrowthReport:
    """Orbit counts on levels 1..up_to and a bounded/growing verdict.

    Stabilized means the last ``window`` counts are equal and those levels
    have no fixed vertices; ``since`` is where the trailing constant run starts.
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    p._check_level(up_to)
    stats = [orbit_stats(p, n) for n in range(1, up_to + 1)]
    counts = tuple(s.orbit_count for s in stats)
    if len(counts) < window:
        return GrowthReport(counts, False, window=window)
    tail = stats[-window:]
    if len({s.orbit_count for s in tail}) != 1 or any(s.fixed_vertices for s in tail):
        return GrowthReport(counts, False, window=window)
    start = len(counts)
    while start > 1 and counts[start - 2] == counts[-1]:
        start -= 1
    return GrowthReport(counts, True, counts[-1], start, window)


def orbit_counts(p: Portrait, up_to: int) -> list[int]:
    return [orbit_stats(p, n).orbit_count for n in range(1, up_to + 1)]


def lcm_all(values) -> int:
    return reduce(math.lcm, values, 1)
