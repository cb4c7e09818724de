from __future__ import annotations

import random

from hypothesis import strategies as st

from reidtree.tree import BranchingSequence, random_portrait


@st.composite
def portraits(draw, max_depth: int = 6, max_branching: int = 3):
    """Random finite portraits on random spherically symmetric trees."""
    depth = draw(st.integers(1, max_depth))
    indices = draw(st.lists(st.integers(2, max_branching), min_size=1, max_size=depth))
    seed = draw(st.integers(0, 2**32 - 1))
    tree = BranchingSequence(tuple(indices))
    # keep level sizes small enough for a fast test
    while tree.level_size(depth) > 800:
        depth -= 1
    return random_portrait(tree, depth, random.Random(seed))
