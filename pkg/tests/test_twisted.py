from __future__ import annotations

import random

import pytest

from reidtree import permgrp, selfsim, tree
from reidtree.errors import InvalidNormalizer
from reidtree.quotients import level_quotient
from reidtree.selfsim import parse_word, portrait_of_word
from reidtree.twisted import (
    TwistedSetting, class_of, fixed_points, reid_series, reidemeister_classes,
    shift_check, shifted_setting,
)

import oracles

GRIG = selfsim.builtin("grigorchuk")


def setting(spec, n, word=""):
    Q = level_quotient(spec, n)
    return TwistedSetting.from_portrait(Q, portrait_of_word(spec, parse_word(word), n))


@pytest.mark.parametrize("n, count", [(1, 2), (2, 5), (3, 20)])
def test_identity_phi_gives_conjugacy_classes(n, count):
    s = setting(GRIG, n)
    part = reidemeister_classes(s)
    assert part.count == len(permgrp.conjugacy_classes(s.Q.group)) == count
    assert part.count == oracles.conjugacy_class_count(s.Q.elements)


def test_trivial_group():
    Q = level_quotient(selfsim.builtin("full-binary-finitary(1)"), 1)
    s = TwistedSetting(Q, (1, 0))
    assert Q.order == 2 and reidemeister_classes(s).count == 2
    triv = selfsim.WreathRecursion(2, {"z": selfsim.State((0, 1), ("e", "e"))}, ("z",))
    assert reidemeister_classes(setting(triv, 2)).count == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_counts_match_bruteforce_oracle(n):
    s = setting(GRIG, n, "a")
    assert reidemeister_classes(s).count == oracles.reidemeister_count(s.Q.elements, s.t_perm)


def test_partition_shape():
    part = reidemeister_classes(setting(GRIG, 3, "a"))
    assert sum(part.sizes()) == 128
    assert [c[0] for c in part.classes()] == part.representatives
    assert part.representatives[0] == 0


def test_fixed_points():
    assert len(fixed_points(setting(GRIG, 2))) == 8
    s = setting(GRIG, 3, "a")
    fixed = {s.Q.elements[k] for k in fixed_points(s)}
    assert fixed == {s.Q.elements[k] for k in permgrp.centralizer_elements(s.Q.group, s.t_perm)}
    assert 0 in fixed_points(s)


def test_non_normalizing_t_rejected():
    # level 3 is all of Aut(T_3), so only level 4 has non-normalizing portraits
    Q = level_quotient(GRIG, 4)
    rng = random.Random(5)
    for _ in range(50):
        t = tree.random_portrait(GRIG.tree, 4, rng)
        if not _normalizes(Q, t.level_perm(4)):
            break
    else:
        pytest.fail("no non-normalizing portrait among 50 samples")
    with pytest.raises(InvalidNormalizer):
        TwistedSetting.from_portrait(Q, t)


def _normalizes(Q, t):
    t_inv = permgrp.inverse(t)
    return {permgrp.compose(t, permgrp.compose(x, t_inv)) for x in Q.elements} == set(Q.elements)


def test_shift_identity_and_level2():
    s = setting(GRIG, 2, "a")
    assert shift_check(s, permgrp.identity(4))
    for g in s.Q.elements:
        assert shift_check(s, g)
        assert reidemeister_classes(shifted_setting(s, g)).count == reidemeister_classes(s).count


def test_phi_orbits_inside_classes():
    for word in ("", "a", "b", "a c"):
        s = setting(GRIG, 3, word)
        part = reidemeister_classes(s)
        for k, pk in enumerate(s.phi_index):
            assert part.class_of[k] == part.class_of[pk]


def test_class_of():
    s = setting(GRIG, 2)
    assert class_of(s, permgrp.identity(4)) == 0


def test_reid_series_grigorchuk():
    t = portrait_of_word(GRIG, parse_word("a"), 4)
    series = reid_series(GRIG, t, 4)
    rows = [(r.reid_count, r.fixed_count, r.orb_count) for r in series.rows]
    assert rows == [(2, 2, 1), (5, 4, 2), (20, 16, 4), (61, 64, 8)]
    assert series.truncated_at is None


def test_reid_series_identity_is_conjugacy_series():
    t = tree.identity_portrait(GRIG.tree, 3)
    counts = reid_series(GRIG, t, 3).counts()
    assert counts == [2, 5, 20] == sorted(counts)


def test_reid_series_truncates_at_cap():
    t = tree.identity_portrait(GRIG.tree, 4)
    series = reid_series(GRIG, t, 4, cap=1000)
    assert series.truncated_at == 4 and len(series.rows) == 3


def test_reid_series_monotone_for_odometer_on_finitary():
    spec = selfsim.builtin("full-binary-finitary(3)")
    counts = reid_series(spec, tree.odometer(spec.tree, 3), 3).counts()
    assert counts == sorted(counts)
