"""Independent reference computations used to freeze expected values.

Nothing here imports reidtree: recursions are hard-coded and every count is
obtained by brute force over explicit sets.
"""

from __future__ import annotations

import itertools

# state -> (root permutation, sections)
GRIGORCHUK = {
    "e": ((0, 1), ("e", "e")),
    "a": ((1, 0), ("e", "e")),
    "b": ((0, 1), ("a", "c")),
    "c": ((0, 1), ("a", "d")),
    "d": ((0, 1), ("e", "b")),
}
GUPTA_SIDKI = {
    "e": ((0, 1, 2), ("e", "e", "e")),
    "a": ((1, 2, 0), ("e", "e", "e")),
    "A": ((2, 0, 1), ("e", "e", "e")),
    "t": ((0, 1, 2), ("a", "A", "t")),
}


def act(machine: dict, state: str, vertex: tuple) -> tuple:
    """Image of a vertex under one automaton state, by direct recursion."""
    if not vertex or state == "e":
        return tuple(vertex)
    perm, sections = machine[state]
    x = vertex[0]
    return (perm[x],) + act(machine, sections[x], vertex[1:])


def act_word(machine: dict, letters: list[str], vertex: tuple) -> tuple:
    """Functional convention: the word "x y" acts as x after y."""
    for s in reversed(letters):
        vertex = act(machine, s, vertex)
    return vertex


def leaves(arity: int, n: int) -> list[tuple]:
    return list(itertools.product(range(arity), repeat=n))


def level_perm(machine: dict, letters: list[str], arity: int, n: int) -> tuple:
    verts = leaves(arity, n)
    pos = {v: k for k, v in enumerate(verts)}
    return tuple(pos[act_word(machine, letters, v)] for v in verts)


def mul(p, q):
    return tuple(p[x] for x in q)


def inv(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def closure(gens) -> set:
    gens = [tuple(g) for g in gens]
    ident = tuple(range(len(gens[0])))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(g, x)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def orbits_of_action(elements, act_fn) -> list[set]:
    """Orbits of a group action given as act_fn(h, x), h ranging over all elements."""
    left = set(elements)
    out = []
    while left:
        x = next(iter(left))
        orb = {act_fn(h, x) for h in elements}
        out.append(orb)
        left -= orb
    return out


def conjugacy_class_count(elements) -> int:
    els = list(elements)
    return len(orbits_of_action(els, lambda h, x: mul(h, mul(x, inv(h)))))


def reidemeister_count(elements, t) -> int:
    """Orbits of h: g -> h g phi(h)^-1 with phi(h) = t h t^-1, over every h."""
    els = list(elements)
    t_inv = inv(t)

    def twisted(h, g):
        return mul(h, mul(g, mul(t, mul(inv(h), t_inv))))

    return len(orbits_of_action(els, twisted))


def cycle_type(p) -> tuple:
    seen, lens = set(), []
    for x in range(len(p)):
        if x in seen:
            continue
        n, y = 0, x
        while y not in seen:
            seen.add(y)
            y = p[y]
            n += 1
        lens.append(n)
    return tuple(sorted(lens))


def sign(p) -> int:
    return -1 if (len(p) - len(cycle_type(p))) % 2 else 1
