"""Finite-state self-similar groups given by wreath recursions.

A state ``s`` acts on words by ``s(x w) = perm(s)[x] · section(s, x)(w)``.
Group words multiply functionally, matching :meth:`Portrait.compose`: the
word ``a b`` is the map ``a∘b`` (``b`` acts first).
"""

from __future__ import annotations

import functools
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Sequence

from . import permgrp
from .errors import SpecParseError, UndeclaredGenerator, UnknownGroup
from .tree import BranchingSequence, Portrait, Vertex, path_to_str

IDENTITY_STATE = "e"

Word = tuple  # tuple[tuple[str, int], ...]


class State(NamedTuple):
    perm: tuple[int, ...]
    sections: tuple[str, ...]


@dataclass(eq=False)
class WreathRecursion:
    alphabet: int
    states: dict[str, State]
    generators: tuple[str, ...]
    extra_portraits: dict[str, Portrait] = field(default_factory=dict)
    name: str | None = None  # builtin id, when built by ``builtin``
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.alphabet < 2:
            raise SpecParseError("alphabet must be >= 2")
        self.generators = tuple(self.generators)
        for s, st in self.states.items():
            if s == IDENTITY_STATE:
                raise SpecParseError(f"state name {IDENTITY_STATE!r} is reserved")
            if len(st.perm) != self.alphabet or not permgrp.is_perm(st.perm):
                raise SpecParseError(f"state {s!r}: perm must be a permutation of {self.alphabet} letters")
            if len(st.sections) != self.alphabet:
                raise SpecParseError(f"state {s!r}: needs {self.alphabet} sections")
            for sec in st.sections:
                if sec != IDENTITY_STATE and sec not in self.states:
                    raise SpecParseError(f"state {s!r}: section {sec!r} is not a state")
        for g in self.generators:
            if g not in self.states:
                raise SpecParseError(f"generator {g!r} is not a state")
        tree = self.tree
        for g, p in self.extra_portraits.items():
            if g in self.states or g == IDENTITY_STATE:
                raise SpecParseError(f"portrait generator {g!r} clashes with a state name")
            if p.tree != tree:
                raise SpecParseError(f"portrait generator {g!r} lives on another tree")

    @property
    def tree(self) -> BranchingSequence:
        return BranchingSequence.regular(self.alphabet)

    @property
    def all_generators(self) -> tuple[str, ...]:
        return self.generators + tuple(self.extra_portraits)

    def state_portrait(self, s: str, depth: int) -> Portrait:
        key = ("state", s, depth)
        if key not in self._cache:
            labels: dict[Vertex, tuple[int, ...]] = {}
            stack: list[tuple[Vertex, str]] = [((), s)]
            while stack:
                v, cur = stack.pop()
                if cur == IDENTITY_STATE or len(v) >= depth:
                    continue
                st = self.states[cur]
                labels[v] = st.perm
                for x, sec in enumerate(st.sections):
                    stack.append((v + (x,), sec))
            self._cache[key] = Portrait(self.tree, depth, labels)
        return self._cache[key]

    def generator_portrait(self, g: str, depth: int) -> Portrait:
        if g in self.states:
            return self.state_portrait(g, depth)
        if g in self.extra_portraits:
            return self.extra_portraits[g].truncate(depth)
        raise UndeclaredGenerator(f"{g!r} is not a generator")

    def to_json(self) -> dict:
        return {
            "alphabet": self.alphabet,
            "states": {s: {"perm": list(st.perm), "sections": list(st.sections)}
                       for s, st in self.states.items()},
            "generators": list(self.generators),
            "extra_portraits": {g: {"depth": p.depth,
                                    "labels": {path_to_str(v): list(lab)
                                               for v, lab in sorted(p.labels.items())}}
                                for g, p in self.extra_portraits.items()},
        }

    @classmethod
    def from_json(cls, data: dict) -> WreathRecursion:
        if not isinstance(data, dict):
            raise SpecParseError("group spec must be a JSON object")
        try:
            alphabet = int(data["alphabet"])
        except (KeyError, TypeError, ValueError):
            raise SpecParseError("field 'alphabet': missing or not an integer") from None
        states = {}
        for s, body in (data.get("states") or {}).items():
            try:
                states[s] = State(tuple(int(x) for x in body["perm"]), tuple(body["sections"]))
            except (KeyError, TypeError, ValueError):
                raise SpecParseError(f"field 'states.{s}': needs 'perm' and 'sections'") from None
        tree = BranchingSequence.regular(alphabet)
        extras = {}
        for g, body in (data.get("extra_portraits") or {}).items():
            try:
                extras[g] = Portrait.from_json({k: v for k, v in body.items()
                                                if k not in ("branching", "repeat_tail")}, tree)
            except (SpecParseError, AttributeError) as exc:
                raise SpecParseError(f"field 'extra_portraits.{g}': {exc}") from None
        gens = data.get("generators")
        if gens is None:
            gens = list(states)
        return cls(alphabet, states, tuple(gens), extras)


def load_spec(path: str | Path) -> WreathRecursion:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return WreathRecursion.from_json(data)


# -- words ---------------------------------------------------------------

_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def parse_word(text: str) -> Word:
    """Parse ``"a b^-1 c^2"`` (separators: whitespace, ``*`` or ``,``).

    ``""``, ``"1"`` and ``"e"`` denote the empty word.
    """
    letters = []
    for tok in re.split(r"[\s*,]+", text.strip()):
        if tok in ("", "1", IDENTITY_STATE):
            continue
        m = _TOKEN.match(tok)
        if not m:
            raise SpecParseError(f"bad word token {tok!r}")
        exp = int(m.group(2)) if m.group(2) is not None else 1
        sign = 1 if exp > 0 else -1
        letters.extend([(m.group(1), sign)] * abs(exp))
    return reduce_word(letters)


def format_word(w: Word) -> str:
    if not w:
        return "e"
    return " ".join(g if k == 1 else f"{g}^-1" for g, k in w)


def reduce_word(w: Sequence[tuple[str, int]]) -> Word:
    """Free cancellation of adjacent inverse pairs."""
    out: list[tuple[str, int]] = []
    for g, k in w:
        if out and out[-1] == (g, -k):
            out.pop()
        else:
            out.append((g, k))
    return tuple(out)


def word_inverse(w: Word) -> Word:
    return tuple((g, -k) for g, k in reversed(w))


def portrait_of_word(spec: WreathRecursion, w: Word, depth: int) -> Portrait:
    if depth < 0:
        raise ValueError("depth must be >= 0")
    result = Portrait(spec.tree, depth)
    for g, k in w:
        if g not in spec.all_generators:
            raise UndeclaredGenerator(f"{g!r} is not a declared generator")
        p = spec.generator_portrait(g, depth)
        result = result.compose(p if k == 1 else p.inverse())
    return result


def word_level_perm(spec: WreathRecursion, w: Word, n: int) -> permgrp.Perm:
    return portrait_of_word(spec, w, n).level_perm(n)


def equal_at_depth(spec: WreathRecursion, w1: Word, w2: Word, d: int) -> bool:
    """True when both words act identically on level ``d`` (equal at depth d, not proven equal)."""
    return word_level_perm(spec, w1, d) == word_level_perm(spec, w2, d)


# -- built-in groups -----------------------------------------------------

def _grigorchuk() -> WreathRecursion:
    return WreathRecursion(2, {
        "a": State((1, 0), ("e", "e")),
        "b": State((0, 1), ("a", "c")),
        "c": State((0, 1), ("a", "d")),
        "d": State((0, 1), ("e", "b")),
    }, ("a", "b", "c", "d"), name="grigorchuk")


def _gupta_sidki_3() -> WreathRecursion:
    return WreathRecursion(3, {
        "a": State((1, 2, 0), ("e", "e", "e")),
        "a_inv": State((2, 0, 1), ("e", "e", "e")),
        "t": State((0, 1, 2), ("a", "a_inv", "t")),
    }, ("a", "t"), name="gupta-sidki-3")


def _adding_machine() -> WreathRecursion:
    return WreathRecursion(2, {"a": State((1, 0), ("e", "a"))}, ("a",), name="adding-machine")


def full_binary_finitary(d: int) -> WreathRecursion:
    """All isometries of the binary tree acting trivially below level ``d``.

    Generators ``s<path>`` swap the two children of one vertex, e.g. ``s`` at
    the root and ``s01`` at vertex (0, 1).
    """
    if d < 1:
        raise UnknownGroup("full-binary-finitary needs depth >= 1")
    tree = BranchingSequence.regular(2)
    extras = {}
    for n in range(d):
        for v in tree.vertices(n):
            extras["s" + "".join(map(str, v))] = Portrait(tree, d, {v: (1, 0)})
    return WreathRecursion(2, {}, (), extras, name=f"full-binary-finitary({d})")


_FINITARY = re.compile(r"^full-binary-finitary(?:\((\d+)\)|:(\d+))$")


def builtin(name: str) -> WreathRecursion:
    """Named groups: grigorchuk, gupta-sidki-3, adding-machine, full-binary-finitary(d).

    Repeated calls return the same instance, so cached quotients are shared.
    """
    key = name.strip().lower()
    if key == "gupta-sidki":
        key = "gupta-sidki-3"
    m = _FINITARY.match(key)
    if m:
        key = f"full-binary-finitary({int(m.group(1) or m.group(2))})"
    return _builtin(key)


@functools.lru_cache(maxsize=None)
def _builtin(key: str) -> WreathRecursion:
    if key == "grigorchuk":
        return _grigorchuk()
    if key == "gupta-sidki-3":
        return _gupta_sidki_3()
    if key == "adding-machine":
        return _adding_machine()
    m = _FINITARY.match(key)
    if m:
        return full_binary_finitary(int(m.group(1) or m.group(2)))
    raise UnknownGroup(f"unknown group {key!r}")


def group_ref(spec: WreathRecursion) -> dict:
    """JSON reference that :func:`group_from_ref` turns back into the group."""
    if spec.name is not None:
        return {"builtin": spec.name}
    return {"spec": spec.to_json()}


def group_from_ref(ref: dict) -> WreathRecursion:
    if "builtin" in ref:
        return builtin(ref["builtin"])
    if "spec" in ref:
        return WreathRecursion.from_json(ref["spec"])
    raise SpecParseError("group reference needs 'builtin' or 'spec'")
