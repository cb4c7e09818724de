from __future__ import annotations

import random

import pytest

from reidtree import permgrp, selfsim, tree
from reidtree.errors import CapExceeded
from reidtree.quotients import (
    g_brace, gamma_i, is_level_transitive, level_quotient, project, rist_probe,
    stabilizer_elements, validate_normalizer, wst_check,
)
from reidtree.selfsim import parse_word

import oracles

GRIG = selfsim.builtin("grigorchuk")
GS = selfsim.builtin("gupta-sidki-3")
FIN3 = selfsim.builtin("full-binary-finitary(3)")


@pytest.mark.parametrize("n, order", [(1, 2), (2, 8), (3, 128), (4, 4096)])
def test_grigorchuk_orders(n, order):
    Q = level_quotient(GRIG, n)
    assert Q.order == order
    gens = [oracles.level_perm(oracles.GRIGORCHUK, [s], 2, n) for s in "abcd"]
    assert len(oracles.closure(gens)) == order


@pytest.mark.parametrize("n, order", [(1, 3), (2, 27), (3, 2187)])
def test_gupta_sidki_orders(n, order):
    assert level_quotient(GS, n).order == order


def test_cap_exceeded():
    with pytest.raises(CapExceeded):
        level_quotient(GRIG, 4, cap=1000)


def test_discovery_words_evaluate_back():
    Q = level_quotient(GRIG, 3)
    for k in range(0, Q.order, 7):
        assert Q.evaluate(Q.discovery_word(k)) == Q.elements[k]


def test_project_is_homomorphism():
    Q = level_quotient(GRIG, 3)
    rng = random.Random(3)
    for _ in range(20):
        x, y = rng.choice(Q.elements), rng.choice(Q.elements)
        assert project(permgrp.compose(x, y), GRIG.tree, 3, 1) == \
            permgrp.compose(project(x, GRIG.tree, 3, 1), project(y, GRIG.tree, 3, 1))


def test_stabilizers():
    Q2 = level_quotient(GRIG, 2)
    assert stabilizer_elements(Q2, 2) == [0]
    st1 = stabilizer_elements(Q2, 1)
    assert len(st1) == 4 and 0 in st1
    assert len(stabilizer_elements(Q2, 0)) == Q2.order


def test_g_brace_root_is_whole_quotient():
    Q = level_quotient(GRIG, 2)
    assert g_brace(Q, ()) == list(range(Q.order))


def test_g_brace_sandwich():
    Q = level_quotient(GRIG, 3)
    brace = set(g_brace(Q, (0,)))
    assert len(brace) > 1 and 0 in brace
    assert set(rist_probe(Q, (0,))) <= brace
    assert brace <= set(stabilizer_elements(Q, 1))


def test_gamma_factors_commute():
    Q = level_quotient(GRIG, 3)
    gamma = gamma_i(Q, 3)
    factors = [g_brace(Q, v) for v in GRIG.tree.vertices(2)]
    assert all(Q.elements[k] in gamma for f in factors for k in f)
    assert set(gamma.elements) <= set(Q.elements)
    # commuting factors: the product has order dividing the product of factor orders
    prod = 1
    for f in factors:
        prod *= len(f)
    assert prod % gamma.order == 0
    with pytest.raises(ValueError):
        gamma_i(Q, 2)


def test_gamma_trivial_when_factors_trivial():
    Q = level_quotient(selfsim.builtin("adding-machine"), 2)
    assert gamma_i(Q, 2).order == 1


def test_rist_probe():
    Q = level_quotient(FIN3, 3)
    for v in [(), (0,), (1, 0)]:
        assert rist_probe(Q, v)
    assert rist_probe(level_quotient(GRIG, 4), (0,))
    # a level-i vertex has a single leaf below it, so it needs a deeper quotient
    with pytest.raises(ValueError):
        rist_probe(Q, (0, 1, 1))
    # two leaves below v: the only nontrivial candidate is the swap
    assert [Q.elements[k] for k in rist_probe(Q, (0, 1))] == [(0, 1, 3, 2, 4, 5, 6, 7)]


def test_wst():
    res = wst_check(FIN3, (1,), 3)
    assert res.found and res.v0 == (1,)
    grig = wst_check(GRIG, (), 4)
    assert grig.found and grig.v0 == ()
    assert wst_check(GRIG, (), 0).status == "not-found"


def test_level_transitivity():
    for n in range(1, 5):
        assert is_level_transitive(GRIG, n)
    bcd = selfsim.WreathRecursion(2, dict(GRIG.states), ("b", "c", "d"))
    assert not is_level_transitive(bcd, 1)
    assert is_level_transitive(GRIG, 0)


def test_normalizer():
    Q = level_quotient(GRIG, 3)
    assert validate_normalizer(Q, tree.identity_portrait(GRIG.tree, 3))
    assert validate_normalizer(Q, selfsim.portrait_of_word(GRIG, parse_word("a b c"), 3))
    # the level-3 quotient is the whole of Aut(T_3): every portrait normalizes it
    assert Q.order == 2 ** 7
    assert validate_normalizer(Q, tree.random_portrait(GRIG.tree, 3, random.Random(0)))
    Q4 = level_quotient(GRIG, 4)
    elements = set(Q4.elements)
    rng = random.Random(11)
    verdicts = []
    for _ in range(10):
        t = tree.random_portrait(GRIG.tree, 4, rng)
        t4 = t.level_perm(4)
        t_inv = permgrp.inverse(t4)
        conj = {permgrp.compose(t4, permgrp.compose(x, t_inv)) for x in Q4.elements}
        verdicts.append(validate_normalizer(Q4, t))
        assert verdicts[-1] == (conj == elements)
    assert not all(verdicts)
