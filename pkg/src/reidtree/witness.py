"""Searches for elements in distinct Reidemeister classes, with certificates.

A separation certificate for (g, j, i) records that g acts trivially on L_j
and that, on L_i, the permutation g·t is not of the form h⁻¹·t·h.  That
excludes every element of St_i from the twisted class of g.  The obstruction
is a conjugation invariant (cycle type or sign) valid in all of Sym(L_i), or
an exhaustive search valid in the enumerated quotient only.

Every "not found" outcome below is bounded by a depth budget and says nothing
about the infinite group.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import permgrp
from .errors import CapExceeded, CommutationViolation, DepthExceeded, InvalidNormalizer, PreconditionError
from .permgrp import DEFAULT_CAP, Perm
from .quotients import (
    LevelQuotient, g_brace, gamma_i, level_quotient, rist_probe, stabilizer_elements,
    validate_normalizer, wst_check,
)
from .selfsim import WreathRecursion, Word, format_word, group_ref
from .tree import Portrait, classify_orbit_growth, level_order, orbit_stats, path_to_str
from .twisted import TwistedSetting, fixed_points, reidemeister_classes

CYCLE_TYPE = "CycleType"
PARITY = "Parity"
EXHAUSTIVE = "Exhaustive"
OBSTRUCTION_ORDER = (CYCLE_TYPE, PARITY, EXHAUSTIVE)

FINITE_DEPTH_CAVEAT = "all statements concern the level-i quotient (finite-depth shadow)"


@dataclass
class Obstruction:
    kind: str
    data: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, "data": self.data}


@dataclass
class SeparationCertificate:
    group: dict  # reference accepted by selfsim.group_from_ref
    t: Portrait
    g_word: Word
    j: int
    i: int
    obstruction: Obstruction
    context: dict = field(default_factory=dict)
    caveats: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "t": self.t.to_json(),
            "g_word": format_word(self.g_word),
            "j": self.j,
            "i": self.i,
            "obstruction": self.obstruction.to_json(),
            "context": self.context,
            "caveats": list(self.caveats),
        }


def _obstruction(kind: str, Q: LevelQuotient, gt: Perm, t_i: Perm) -> Obstruction | None:
    if kind == CYCLE_TYPE:
        a, b = permgrp.cycle_type(gt), permgrp.cycle_type(t_i)
        if a != b:
            return Obstruction(CYCLE_TYPE, {"g_t": list(a), "t": list(b)})
    elif kind == PARITY:
        a, b = permgrp.sign(gt), permgrp.sign(t_i)
        if a != b:
            return Obstruction(PARITY, {"g_t": a, "t": b})
    elif kind == EXHAUSTIVE:
        # gt = h⁻¹·t·h  <=>  t and gt are conjugate by h
        if permgrp.are_conjugate(Q.group, t_i, gt) is None:
            return Obstruction(EXHAUSTIVE, {"level": Q.level, "group_order": Q.order,
                                            "complete": True})
    else:
        raise ValueError(f"unknown obstruction kind {kind!r}")
    return None


def certify_separation(Q: LevelQuotient, t: Portrait, g: int | Perm, j: int, i: int,
                       kinds=OBSTRUCTION_ORDER, context: dict | None = None,
                       caveats=()) -> SeparationCertificate | None:
    """Certificate that g·t and t are not conjugate on L_i, or None if they are.

    ``g`` is an element (or element index) of the level-i quotient ``Q`` and
    must act trivially on L_j.
    """
    if i != Q.level or not 0 <= j < i:
        raise PreconditionError(f"need j < i = quotient level, got j={j}, i={i}, level={Q.level}")
    if t.depth < i:
        raise DepthExceeded(f"t has depth {t.depth} < {i}")
    if not validate_normalizer(Q, t):
        raise InvalidNormalizer(f"t does not normalize the level-{i} quotient")
    k = g if isinstance(g, int) else Q.index_of(g)
    g = Q.elements[k]
    if Q.project(g, j) != permgrp.identity(Q.tree.level_size(j)):
        raise PreconditionError(f"g does not act trivially on level {j}")
    t_i = t.level_perm(i)
    gt = permgrp.compose(g, t_i)
    for kind in kinds:
        obs = _obstruction(kind, Q, gt, t_i)
        if obs is not None:
            caveat_list = [FINITE_DEPTH_CAVEAT, *caveats]
            if kind == EXHAUSTIVE:
                caveat_list.append("exhaustive obstruction holds in the enumerated quotient only")
            return SeparationCertificate(group_ref(Q.spec), t, Q.discovery_word(k), j, i, obs,
                                         dict(context or {}), caveat_list)
    return None


def _first_orbit_level(t: Portrait, n: int, depth: int) -> int:
    for k in range(1, depth + 1):
        if n in orbit_stats(t, k).lengths:
            return k
    raise PreconditionError(f"t has no orbit of length {n} up to level {depth}")


def _check_budget(t: Portrait, j: int, depth_budget: int) -> None:
    if t.depth < depth_budget:
        raise DepthExceeded(f"t has depth {t.depth} < budget {depth_budget}")
    if j >= depth_budget:
        raise PreconditionError(f"no level i with {j} < i <= {depth_budget}")


def finite_order_witness(spec: WreathRecursion, t: Portrait, j: int, depth_budget: int,
                         cap: int = DEFAULT_CAP) -> SeparationCertificate | None:
    """Witness for a finite-order t: a rigid element under a longest t-orbit.

    If g is trivial outside T_{v0} and first moves some v on L_i, then
    (g·t)^n(v) = g(v) ≠ v, so g·t has a cycle whose length does not divide n
    while every cycle of t does.
    """
    _check_budget(t, j, depth_budget)
    n = level_order(t, depth_budget)
    if depth_budget >= 2 and level_order(t, depth_budget - 1) != n:
        raise PreconditionError("the order of t is not stable at the two deepest levels")
    j0 = _first_orbit_level(t, n, depth_budget)
    if j < j0:
        raise PreconditionError(f"j={j} is below j0={j0}, the first level with an orbit of length {n}")
    tree = t.tree
    t_j = t.level_perm(j)
    v0_idx = min(c[0] for c in permgrp.cycles(t_j) if len(c) == n)
    v0 = tree.vertex_at(j, v0_idx)
    for i in range(j + 1, depth_budget + 1):
        Q = level_quotient(spec, i, cap)
        t_i = t.level_perm(i)
        e_prev = permgrp.identity(tree.level_size(i - 1))
        for k in rist_probe(Q, v0):
            g = Q.elements[k]
            if Q.project(g, i - 1) != e_prev:
                continue
            v = next(x for x in range(len(g)) if g[x] != x)
            gt = permgrp.compose(g, t_i)
            w = v
            for _ in range(n):
                w = gt[w]
            t_orbit = len(next(c for c in permgrp.cycles(t_i) if v in c))
            if w != g[v] or w == v or t_orbit != n:
                continue
            context = {
                "strategy": "finite-order",
                "n": n,
                "j0": j0,
                "v0": path_to_str(v0),
                "v": path_to_str(tree.vertex_at(i, v)),
                "g_v": path_to_str(tree.vertex_at(i, g[v])),
                "orbit_lengths": {"t": list(permgrp.cycle_type(t_i)),
                                  "g_t": list(permgrp.cycle_type(gt))},
            }
            cert = certify_separation(
                Q, t, k, j, i, kinds=(CYCLE_TYPE,), context=context,
                caveats=[f"order {n} of t observed at levels {depth_budget - 1} and {depth_budget} only"])
            if cert is not None:
                return cert
    return None


def bounded_orbit_witness(spec: WreathRecursion, t: Portrait, j: int, depth_budget: int,
                          cap: int = DEFAULT_CAP, window: int = 3) -> SeparationCertificate | None:
    """Witness for t with a bounded number of orbits per level.

    Below a smallest t-orbit, find v0 whose g_brace is transitive on its b
    children, and g there with g(t^m(v1)) = v1.  Then g·t has a cycle of
    length m on L_i while every t-cycle there has length at least m·b.
    """
    _check_budget(t, j, depth_budget)
    growth = classify_orbit_growth(t, depth_budget, window)
    if not growth.stabilized:
        raise PreconditionError(f"orbit counts are not stabilized: {list(growth.counts)}")
    if j < growth.since:
        raise PreconditionError(f"j={j} is below the stabilization level {growth.since}")
    tree = t.tree
    cycs = permgrp.cycles(t.level_perm(j))
    shortest = min(len(c) for c in cycs)
    v = tree.vertex_at(j, min(c[0] for c in cycs if len(c) == shortest))
    wst = wst_check(spec, v, depth_budget, cap)
    if wst.status == "cap-exceeded":
        raise CapExceeded(cap, -1)
    if not wst.found:
        return None
    v0, i = wst.v0, wst.level
    Q = level_quotient(spec, i, cap)
    m = len(next(c for c in permgrp.cycles(t.level_perm(i - 1)) if tree.index_of(v0) in c))
    b = tree.arity(i - 1)
    t_i = t.level_perm(i)
    v1 = tree.index_of(v0 + (0,))
    target = permgrp.power(t_i, m)[v1]
    for k in g_brace(Q, v0):
        g = Q.elements[k]
        if g[target] != v1:
            continue
        gt = permgrp.compose(g, t_i)
        gt_type = permgrp.cycle_type(gt)
        t_type = permgrp.cycle_type(t_i)
        v1_len = len(next(c for c in permgrp.cycles(gt) if v1 in c))
        if not (m % v1_len == 0 and m % gt_type[0] == 0
                and gt_type[0] < m * b == t_type[0]):
            continue
        context = {
            "strategy": "bounded-orbit",
            "M": growth.bound,
            "j0": growth.since,
            "v": path_to_str(v),
            "v0": path_to_str(v0),
            "v1": path_to_str(tree.vertex_at(i, v1)),
            "m": m,
            "b": b,
            "smallest_g_t": gt_type[0],
            "smallest_t": t_type[0],
            "orbit_lengths": {"t": list(t_type), "g_t": list(gt_type)},
        }
        return certify_separation(
            Q, t, k, j, i, kinds=(CYCLE_TYPE,), context=context,
            caveats=["bounded orbit counts observed up to the depth budget only"])
    return None


@dataclass
class ParityWitness:
    """An element of St_j that is odd on some deeper level; separates for every t."""

    spec: WreathRecursion
    g_word: Word
    j: int
    level: int  # j0 in the search, the level where g is odd
    index: int  # element index in the level quotient
    cap: int = DEFAULT_CAP

    def certificate(self, t: Portrait) -> SeparationCertificate:
        Q = level_quotient(self.spec, self.level, self.cap)
        cert = certify_separation(Q, t, self.index, self.j, self.level, kinds=(PARITY,),
                                  context={"strategy": "parity"})
        if cert is None:  # sign is a homomorphism, so this cannot happen
            raise AssertionError("odd element failed to separate")
        return cert


def parity_witness(spec: WreathRecursion, j: int, depth_budget: int,
                   cap: int = DEFAULT_CAP) -> ParityWitness | None:
    for level in range(j + 1, depth_budget + 1):
        Q = level_quotient(spec, level, cap)
        for k in stabilizer_elements(Q, j):
            if permgrp.sign(Q.elements[k]) == -1:
                return ParityWitness(spec, Q.discovery_word(k), j, level, k, cap)
    return None


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p ** 0.5) + 1))


@dataclass
class PrimeCaseReport:
    level: int
    prime: int
    fixed_count: int
    prev_orbit_count: int  # Orb_{i-1}(t)
    classification: str  # abelian | odd | neither-hypothesis-met | no-avoiding-vertex
    v0: str | None = None
    orbit: list[str] = field(default_factory=list)
    gamma_order: int | None = None
    gamma_phi_stable: bool | None = None
    gamma_nontrivial_fixed: int | None = None
    gamma_solvable: bool | None = None
    brace_order: int | None = None
    brace_transitive: bool | None = None
    brace_abelian: bool | None = None
    gamma_i_abelian: bool | None = None
    certificate: SeparationCertificate | None = None

    @property
    def fixed_less_than_orbits(self) -> bool:
        return self.fixed_count < self.prev_orbit_count

    def to_json(self) -> dict:
        out = {k: getattr(self, k) for k in (
            "level", "prime", "fixed_count", "prev_orbit_count", "classification", "v0",
            "orbit", "gamma_order", "gamma_phi_stable", "gamma_nontrivial_fixed",
            "gamma_solvable", "brace_order", "brace_transitive", "brace_abelian",
            "gamma_i_abelian")}
        out["fixed_less_than_orbits"] = self.fixed_less_than_orbits
        out["certificate"] = self.certificate.to_json() if self.certificate else None
        return out


def prime_case_analysis(spec: WreathRecursion, t: Portrait, i: int,
                        cap: int = DEFAULT_CAP) -> PrimeCaseReport:
    """Level-i check of the prime-branching argument, testing each step directly.

    Solvability of the twisted product group is computed, not inferred.
    """
    tree = spec.tree
    if i < 1:
        raise PreconditionError("level must be >= 1")
    p = tree.arity(i - 1)
    if not _is_prime(p):
        raise PreconditionError(f"branching {p} at level {i - 1} is not prime")
    Q = level_quotient(spec, i, cap)
    s = TwistedSetting.from_portrait(Q, t)
    els = Q.elements
    fixed = set(fixed_points(s)) - {0}
    prev_orbits = orbit_stats(t, i - 1).orbit_count
    report = PrimeCaseReport(i, p, len(fixed) + 1, prev_orbits, "no-avoiding-vertex")
    try:
        report.gamma_i_abelian = permgrp.is_abelian(gamma_i(Q, i, cap))
    except CommutationViolation:
        report.gamma_i_abelian = None

    t_prev = t.level_perm(i - 1)
    braces = {}
    chosen = None
    for v0 in tree.vertices(i - 1):
        # orbit in t-order, starting at v0
        orbit_idx = [tree.index_of(v0)]
        while t_prev[orbit_idx[-1]] != orbit_idx[0]:
            orbit_idx.append(t_prev[orbit_idx[-1]])
        ok = True
        for x in orbit_idx:
            if x not in braces:
                braces[x] = g_brace(Q, tree.vertex_at(i - 1, x))
            if fixed.intersection(braces[x]):
                ok = False
                break
        if ok:
            chosen = (v0, orbit_idx)
            break
    if chosen is None:
        return report

    v0, orbit_idx = chosen
    report.v0 = path_to_str(v0)
    report.orbit = [path_to_str(tree.vertex_at(i - 1, x)) for x in orbit_idx]
    degree = Q.group.degree
    gamma = permgrp.generated_subgroup((els[k] for x in orbit_idx for k in braces[x]),
                                       degree, cap)
    report.gamma_order = gamma.order
    report.gamma_phi_stable = all(s.phi(g) in gamma.index for g in gamma.generators)
    report.gamma_nontrivial_fixed = sum(1 for g in gamma.elements[1:] if s.phi(g) == g)
    report.gamma_solvable = permgrp.is_solvable(gamma, cap)

    brace = permgrp.generated_subgroup((els[k] for k in braces[orbit_idx[0]]), degree, cap)
    lo = orbit_idx[0] * p
    report.brace_order = brace.order
    report.brace_transitive = permgrp.is_transitive(brace, range(lo, lo + p))
    report.brace_abelian = permgrp.is_abelian(brace)
    if report.brace_abelian:
        report.classification = "abelian"
        return report
    odd = next((k for k in braces[orbit_idx[0]] if permgrp.sign(els[k]) == -1), None)
    if odd is None:
        report.classification = "neither-hypothesis-met"
        return report
    report.classification = "odd"
    report.certificate = certify_separation(Q, t, odd, i - 1, i, kinds=(PARITY,),
                                            context={"strategy": "prime-case",
                                                     "v0": report.v0})
    return report


# -- chains --------------------------------------------------------------

STRATEGIES = ("auto", "finite-order", "bounded-orbit", "parity")


def choose_strategy(t: Portrait, depth_budget: int, window: int = 3) -> str:
    if depth_budget >= 2 and level_order(t, depth_budget) == level_order(t, depth_budget - 1):
        return "finite-order"
    if classify_orbit_growth(t, depth_budget, window).stabilized:
        return "bounded-orbit"
    return "parity"


@dataclass
class ChainReport:
    group: dict
    t: Portrait
    strategy: str
    requested: int
    certificates: list[SeparationCertificate]
    distinctness_check: dict

    @property
    def lower_bound(self) -> int:
        return len(self.certificates) + 1

    @property
    def deepest_level(self) -> int | None:
        return self.certificates[-1].i if self.certificates else None

    @property
    def complete(self) -> bool:
        return len(self.certificates) >= self.requested

    def proof_text(self) -> str:
        if not self.certificates:
            return "no certificates; the identity class alone gives R >= 1"
        d = self.deepest_level
        return (
            f"For k < l, g_l acts trivially on level j_l >= i_k, so g_l lies in St_(i_k); "
            f"certificate k excludes St_(i_k) from the class of g_k, so g_l is not equivalent "
            f"to g_k.  The identity lies in every St_(i_k), so no g_k is equivalent to it.  "
            f"Hence the level-{d} quotient has at least {self.lower_bound} Reidemeister classes "
            f"(finite-stage lower bound)."
        )

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "t": self.t.to_json(),
            "strategy": self.strategy,
            "requested": self.requested,
            "complete": self.complete,
            "certificates": [c.to_json() for c in self.certificates],
            "lower_bound": self.lower_bound,
            "deepest_level": self.deepest_level,
            "distinctness_check": self.distinctness_check,
            "proof": self.proof_text(),
        }


def distinctness_check(spec: WreathRecursion, t: Portrait, words: list[Word], level: int,
                       cap: int = DEFAULT_CAP) -> dict:
    """Classes of the identity and each word in the level-``level`` Reidemeister partition."""
    try:
        Q = level_quotient(spec, level, cap)
    except CapExceeded:
        return {"status": "skipped", "reason": f"level-{level} quotient exceeds cap {cap}"}
    s = TwistedSetting.from_portrait(Q, t)
    part = reidemeister_classes(s)
    ids = [part.class_of[0]] + [part.class_of[Q.index_of(Q.evaluate(w))] for w in words]
    return {"status": "checked", "level": level, "reid_count": part.count,
            "class_ids": ids, "distinct": len(set(ids)) == len(ids)}


def chain_builder(spec: WreathRecursion, t: Portrait, N: int, strategy: str = "auto",
                  depth_budget: int = 6, cap: int = DEFAULT_CAP) -> ChainReport:
    """Certificates c_1..c_N with j_(k+1) >= i_k; stops early when the budget runs out."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if N < 0:
        raise ValueError("N must be >= 0")
    if strategy == "auto":
        strategy = choose_strategy(t, depth_budget)
    certs: list[SeparationCertificate] = []
    if N:
        if strategy == "finite-order":
            j = _first_orbit_level(t, level_order(t, depth_budget), depth_budget)
        elif strategy == "bounded-orbit":
            j = max(1, classify_orbit_growth(t, depth_budget).since or 1)
        else:
            j = 1
        while len(certs) < N and j < depth_budget:
            try:
                if strategy == "finite-order":
                    cert = finite_order_witness(spec, t, j, depth_budget, cap)
                elif strategy == "bounded-orbit":
                    cert = bounded_orbit_witness(spec, t, j, depth_budget, cap)
                else:
                    pw = parity_witness(spec, j, depth_budget, cap)
                    cert = pw.certificate(t) if pw is not None else None
            except CapExceeded:
                cert = None
            if cert is None:
                break
            certs.append(cert)
            j = cert.i
    if certs:
        check = distinctness_check(spec, t, [c.g_word for c in certs], certs[-1].i, cap)
    else:
        check = {"status": "trivial"}
    return ChainReport(group_ref(spec), t, strategy, N, certs, check)
