"""Level quotients p_n(G) ⊆ Sym(L_n) and the subgroups living inside them.

Everything here is a statement about the level-n image ("shadow") of a
subgroup, never about the infinite group itself.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass

from . import permgrp
from .errors import CapExceeded, CommutationViolation
from .permgrp import DEFAULT_CAP, Perm, PermGroup
from .selfsim import WreathRecursion, Word, word_level_perm
from .tree import BranchingSequence, Portrait, Vertex


class LevelQuotient:
    """The finite group p_n(G) with generator images and BFS discovery words."""

    def __init__(self, spec: WreathRecursion, level: int, group: PermGroup,
                 gen_names: tuple[str, ...]):
        self.spec = spec
        self.level = level
        self.group = group
        self.gen_names = gen_names
        self.word_images = dict(zip(gen_names, group.generators))

    @property
    def tree(self) -> BranchingSequence:
        return self.spec.tree

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def elements(self) -> list[Perm]:
        return self.group.elements

    def discovery_word(self, k: int) -> Word:
        return tuple((self.gen_names[g], 1) for g in self.group.word_indices(k))

    def index_of(self, perm: Perm) -> int:
        return self.group.index[tuple(perm)]

    def evaluate(self, w: Word) -> Perm:
        """Image of a word through the generator images (the homomorphism)."""
        result = permgrp.identity(self.group.degree)
        for g, k in w:
            img = self.word_images[g]
            result = permgrp.compose(result, img if k == 1 else permgrp.inverse(img))
        return result

    def project(self, perm: Perm, j: int) -> Perm:
        return project(perm, self.tree, self.level, j)

    def __repr__(self):
        return f"LevelQuotient(level={self.level}, order={self.order})"


def project(perm: Perm, tree: BranchingSequence, n: int, j: int) -> Perm:
    """Action on L_j induced by a permutation of L_n (j <= n)."""
    block = tree.block_size(j, n)
    return tuple(perm[x * block] // block for x in range(tree.level_size(j)))


@functools.lru_cache(maxsize=64)
def level_quotient(spec: WreathRecursion, n: int, cap: int = DEFAULT_CAP) -> LevelQuotient:
    if n < 1:
        raise ValueError("level must be >= 1")
    names = spec.all_generators
    images = [word_level_perm(spec, ((g, 1),), n) for g in names]
    group = permgrp.closure(images, cap, spec.tree.level_size(n))
    return LevelQuotient(spec, n, group, names)


def stabilizer_elements(Q: LevelQuotient, j: int) -> list[int]:
    """Indices of elements acting trivially on L_j."""
    if not 0 <= j <= Q.level:
        raise ValueError(f"level {j} outside 0..{Q.level}")
    e = permgrp.identity(Q.tree.level_size(j))
    return [k for k, x in enumerate(Q.elements) if Q.project(x, j) == e]


def _level_of(Q: LevelQuotient, v: Vertex, need_below: int) -> tuple[Vertex, int]:
    v = Q.tree.check_vertex(v)
    if len(v) + need_below > Q.level:
        raise ValueError(f"vertex {v} needs a quotient of level >= {len(v) + need_below}")
    return v, len(v)


def g_brace(Q: LevelQuotient, v: Vertex) -> list[int]:
    """Elements fixing ``v`` and every level-(j+1) vertex outside the children of ``v``."""
    v, j = _level_of(Q, v, 1)
    tree = Q.tree
    block = tree.arity(j)
    lo = tree.index_of(v) * block
    others = [x for x in range(tree.level_size(j + 1)) if not lo <= x < lo + block]
    vi = tree.index_of(v)
    out = []
    for k, x in enumerate(Q.elements):
        below = Q.project(x, j + 1)
        if all(below[y] == y for y in others) and Q.project(x, j)[vi] == vi:
            out.append(k)
    return out


def rist_probe(Q: LevelQuotient, v: Vertex) -> list[int]:
    """Elements trivial on the level-i leaves outside T_v and nontrivial inside."""
    v, _ = _level_of(Q, v, 1)
    tree = Q.tree
    block = tree.block_size(len(v), Q.level)
    lo = tree.index_of(v) * block
    hi = lo + block
    out = []
    for k, x in enumerate(Q.elements):
        moved = [y for y in range(len(x)) if x[y] != y]
        if moved and all(lo <= y < hi for y in moved):
            out.append(k)
    return out


def gamma_i(Q: LevelQuotient, i: int, cap: int = DEFAULT_CAP) -> PermGroup:
    """Product over v in L_{i-1} of the g_brace(v) factors, as a subgroup of Q."""
    if i != Q.level or i < 1:
        raise ValueError(f"gamma_i needs the level-{i} quotient, got level {Q.level}")
    factors = [g_brace(Q, v) for v in Q.tree.vertices(i - 1)]
    els = Q.elements
    for a in range(len(factors)):
        for b in range(a + 1, len(factors)):
            for x in factors[a]:
                for y in factors[b]:
                    if permgrp.compose(els[x], els[y]) != permgrp.compose(els[y], els[x]):
                        raise CommutationViolation(
                            f"g_brace factors {a} and {b} do not commute at level {i}")
    return permgrp.generated_subgroup((els[k] for f in factors for k in f),
                                      Q.group.degree, cap)


def is_level_transitive(spec: WreathRecursion, n: int) -> bool:
    """Whether the generators act transitively on L_n (orbit of one vertex)."""
    size = spec.tree.level_size(n)
    if size == 1:
        return True
    gens = [word_level_perm(spec, ((g, 1),), n) for g in spec.all_generators]
    return len(permgrp.orbit(gens, 0)) == size


def validate_normalizer(Q: LevelQuotient, t: Portrait) -> bool:
    """Whether t_n·Q·t_n⁻¹ = Q, with t_n the level action of ``t``."""
    t_n = t.level_perm(Q.level)
    t_inv = permgrp.inverse(t_n)
    # conjugation is injective, so generator images inside Q force equality
    return all(permgrp.compose(t_n, permgrp.compose(g, t_inv)) in Q.group.index
               for g in Q.group.generators)


@dataclass(frozen=True)
class WSTResult:
    status: str  # "found" | "not-found" | "cap-exceeded"
    v0: Vertex | None = None
    level: int | None = None  # quotient level where transitivity was seen
    orbit: tuple[Vertex, ...] = ()
    searched_to: int = 0

    @property
    def found(self) -> bool:
        return self.status == "found"


def wst_check(spec: WreathRecursion, v: Vertex, max_search_depth: int,
              cap: int = DEFAULT_CAP) -> WSTResult:
    """Breadth-first search of T_v for v0 whose g_brace is transitive on its children.

    Only vertices of level <= max_search_depth - 1 are examined; a negative
    outcome says nothing beyond that depth.
    """
    tree = spec.tree
    v = tree.check_vertex(v)
    queue = deque([v])
    while queue:
        u = queue.popleft()
        if len(u) > max_search_depth - 1:
            break
        i = len(u) + 1
        try:
            Q = level_quotient(spec, i, cap)
        except CapExceeded:
            return WSTResult("cap-exceeded", searched_to=i)
        brace = [Q.elements[k] for k in g_brace(Q, u)]
        lo = tree.index_of(u) * tree.arity(len(u))
        span = set(range(lo, lo + tree.arity(len(u))))
        orb = permgrp.orbit(brace, lo)
        if set(orb) == span:
            return WSTResult("found", u, i, tuple(tree.vertex_at(i, x) for x in sorted(orb)),
                             max_search_depth)
        queue.extend(u + (x,) for x in range(tree.arity(len(u))))
    return WSTResult("not-found", searched_to=max_search_depth)
