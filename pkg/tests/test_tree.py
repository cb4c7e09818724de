from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import portraits
from reidtree import selfsim, tree
from reidtree.errors import DepthExceeded, InvalidVertex
from reidtree.tree import BINARY, BranchingSequence, Portrait

import oracles


def test_children_binary_root():
    assert tree.children(BINARY, ()) == [(0,), (1,)]


def test_children_ternary():
    assert tree.children(BranchingSequence((3,)), (2,)) == [(2, 0), (2, 1), (2, 2)]


def test_children_at_max_depth_rejected():
    finite = BranchingSequence((2, 3), repeat_tail=False)
    assert len(tree.children(finite, (1,))) == 3
    with pytest.raises(InvalidVertex):
        tree.children(finite, (1, 2))


def test_bad_symbol_rejected():
    with pytest.raises(InvalidVertex):
        tree.children(BINARY, (2,))
    with pytest.raises(ValueError):
        BranchingSequence((1,))


def test_index_roundtrip():
    t = BranchingSequence((2, 3, 2))
    verts = list(t.vertices(3))
    assert len(verts) == t.level_size(3) == 12
    for k, v in enumerate(verts):
        assert t.index_of(v) == k
        assert t.vertex_at(3, k) == v


def test_path_strings():
    assert tree.path_from_str("") == ()
    assert tree.path_from_str("0.1.2") == (0, 1, 2)
    assert tree.path_to_str((1, 0)) == "1.0"


def test_apply_identity_and_root_swap():
    ident = tree.identity_portrait(BINARY, 3)
    assert ident.apply((1, 0, 1)) == (1, 0, 1)
    swap = tree.root_swap(BINARY, 2)
    assert swap.apply((0, 1)) == (1, 1)


def test_grigorchuk_b_matches_recursion_oracle():
    b = selfsim.builtin("grigorchuk").generator_portrait("b", 3)
    for v in itertools.product(range(2), repeat=3):
        assert b.apply(v) == oracles.act(oracles.GRIGORCHUK, "b", v)
    assert b.apply((0, 0, 0)) == (0, 1, 0)


def test_compose_inverse_and_identity():
    rng = random.Random(7)
    p = tree.random_portrait(BINARY, 4, rng)
    q = tree.random_portrait(BINARY, 4, rng)
    ident = tree.identity_portrait(BINARY, 4)
    assert tree.compose(p, tree.invert(p)) == ident
    assert tree.compose(ident, q) == q
    pq = tree.compose(p, q)
    for leaf in itertools.product(range(2), repeat=4):
        assert pq.apply(leaf) == p.apply(q.apply(leaf))


def test_level_perm_examples():
    assert tree.level_perm(tree.identity_portrait(BINARY, 3), 2) == (0, 1, 2, 3)
    assert tree.level_perm(tree.root_swap(BINARY, 2), 2) == (2, 3, 0, 1)
    a = selfsim.builtin("grigorchuk").generator_portrait("a", 1)
    assert a.level_perm(1) == (1, 0)


def test_orbit_stats_examples():
    s = tree.orbit_stats(tree.identity_portrait(BINARY, 2), 2)
    assert (s.orbit_count, s.lengths) == (4, (1, 1, 1, 1))
    swap = tree.root_swap(BINARY, 2)
    assert tree.orbit_stats(swap, 1).lengths == (2,)
    s2 = tree.orbit_stats(swap, 2)
    assert (s2.orbit_count, s2.lengths) == (2, (2, 2))


def test_growth_identity_and_odometer():
    g = tree.classify_orbit_growth(tree.identity_portrait(BINARY, 5), 5)
    assert g.counts == (2, 4, 8, 16, 32) and g.verdict == "growing"
    odo = tree.classify_orbit_growth(tree.odometer(BINARY, 6), 6)
    assert odo.counts == (1,) * 6
    assert odo.verdict == "stabilized at M=1 since level 1"


def test_level_order_examples():
    assert tree.level_order(tree.identity_portrait(BINARY, 3), 3) == 1
    assert tree.level_order(tree.root_swap(BINARY, 1), 1) == 2
    assert tree.level_order(tree.odometer(BINARY, 3), 3) == 8


def test_portrait_json_roundtrip():
    p = tree.random_portrait(BranchingSequence((3, 2)), 3, random.Random(1))
    assert Portrait.from_json(p.to_json()) == p


def test_portrait_rejects_bad_label():
    with pytest.raises(ValueError):
        Portrait(BINARY, 2, {(): (0, 0)})


def test_level_beyond_depth_rejected():
    with pytest.raises(DepthExceeded):
        tree.root_swap(BINARY, 2).level_perm(3)


@settings(max_examples=60, deadline=None)
@given(portraits())
def test_orbit_facts(p):
    stats = [tree.orbit_stats(p, n) for n in range(1, p.depth + 1)]
    counts = [s.orbit_count for s in stats]
    assert counts == sorted(counts)
    for n in range(1, p.depth):
        fixed_here = set(stats[n - 1].fixed_vertices)
        # a fixed vertex has a fixed parent
        for v in stats[n].fixed_vertices:
            assert v[:-1] in fixed_here
        if stats[n].fixed_vertices:
            assert counts[n] > counts[n - 1]
        b = p.tree.arity(n)
        for v in p.tree.vertices(n + 1):
            here, parent = len(tree.vertex_orbit(p, v)), len(tree.vertex_orbit(p, v[:-1]))
            assert here % parent == 0
            if counts[n] == counts[n - 1]:
                assert here == b * parent


@settings(max_examples=40, deadline=None)
@given(portraits(), st.data())
def test_compose_matches_sequential_application(p, data):
    q = tree.random_portrait(p.tree, p.depth, random.Random(data.draw(st.integers(0, 10**6))))
    pq = tree.compose(p, q)
    for v in itertools.islice(p.tree.vertices(p.depth), 200):
        assert pq.apply(v) == p.apply(q.apply(v))
    assert tree.compose(pq, tree.invert(pq)) == tree.identity_portrait(p.tree, p.depth)
