"""Sealing and independent re-verification of certificates and chain reports.

The checker rebuilds every permutation it needs from the group reference,
the stored portrait of t and the word of g.  It does not reuse the search
that produced the certificate.  A sealed document carries a SHA-256 digest
of its canonical JSON body; the timestamp lives in ``envelope`` outside it.
"""

from __future__ import annotations

import datetime
import hashlib
import json

from . import __version__, permgrp
from .errors import CapExceeded, CertificateError, ReidTreeError
from .permgrp import DEFAULT_CAP
from .quotients import level_quotient, validate_normalizer
from .selfsim import group_from_ref, parse_word, word_level_perm
from .tree import Portrait, path_from_str
from .twisted import TwistedSetting, reidemeister_classes

UNSEALED_KEYS = ("digest", "envelope")


def canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def body_of(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k not in UNSEALED_KEYS}


def digest_of(doc: dict) -> str:
    return hashlib.sha256(canonical(body_of(doc)).encode()).hexdigest()


def seal(body: dict, created: str | None = None) -> dict:
    if created is None:
        created = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    doc = dict(body)
    doc["digest"] = digest_of(body)
    doc["envelope"] = {"created": created, "tool": f"reidtree {__version__}"}
    return doc


def _fail(invariant: str, detail: str = ""):
    raise CertificateError(invariant, detail)


def _require(cond: bool, invariant: str, detail: str = "") -> None:
    if not cond:
        _fail(invariant, detail)


def _check_digest(doc: dict) -> None:
    _require("digest" in doc, "digest", "document is not sealed")
    _require(doc["digest"] == digest_of(doc), "digest", "body does not match its digest")


def _cycle_len(perm, x: int) -> int:
    n, y = 1, perm[x]
    while y != x:
        y = perm[y]
        n += 1
    return n


def verify_certificate(doc: dict, cap: int = DEFAULT_CAP, check_digest: bool = True) -> list[str]:
    """Re-verify one separation certificate; returns the names of passed checks."""
    passed = []
    if check_digest:
        _check_digest(doc)
        passed.append("digest")
    try:
        spec = group_from_ref(doc["group"])
        tree = spec.tree
        t = Portrait.from_json(doc["t"], tree)
        g_word = parse_word(doc["g_word"])
        j, i = int(doc["j"]), int(doc["i"])
        kind = doc["obstruction"]["kind"]
        data = doc["obstruction"]["data"]
        context = doc.get("context") or {}
    except (KeyError, TypeError, ValueError, ReidTreeError) as exc:
        _fail("schema", str(exc))
    passed.append("schema")

    _require(0 <= j < i, "level-order", f"j={j}, i={i}")
    _require(t.depth >= i, "t-depth", f"t depth {t.depth} < i={i}")
    passed.append("level-order")

    try:
        g_j = word_level_perm(spec, g_word, j)
        g_i = word_level_perm(spec, g_word, i)
    except ReidTreeError as exc:
        _fail("g-word", str(exc))
    _require(g_j == permgrp.identity(len(g_j)), "stabilizer-membership",
             f"g acts nontrivially on level {j}")
    passed.append("stabilizer-membership")

    try:
        Q = level_quotient(spec, i, cap)
    except CapExceeded as exc:
        _fail("normalizer", str(exc))
    _require(validate_normalizer(Q, t), "normalizer", f"t does not normalize level {i}")
    passed.append("normalizer")

    t_i = t.level_perm(i)
    gt = permgrp.compose(g_i, t_i)
    if kind == "CycleType":
        a, b = list(permgrp.cycle_type(gt)), list(permgrp.cycle_type(t_i))
        _require(data.get("g_t") == a and data.get("t") == b, "obstruction",
                 "recorded cycle types differ from recomputed ones")
        _require(a != b, "obstruction", "cycle types coincide")
    elif kind == "Parity":
        a, b = permgrp.sign(gt), permgrp.sign(t_i)
        _require(data.get("g_t") == a and data.get("t") == b, "obstruction",
                 "recorded signs differ from recomputed ones")
        _require(a != b, "obstruction", "signs coincide")
    elif kind == "Exhaustive":
        _require(data.get("level") == i, "obstruction", "exhaustive level mismatch")
        _require(permgrp.are_conjugate(Q.group, t_i, gt) is None, "obstruction",
                 "g·t is conjugate to t in the quotient")
    else:
        _fail("obstruction", f"unknown kind {kind!r}")
    passed.append("obstruction")

    strategy = context.get("strategy")
    try:
        if strategy == "finite-order":
            _verify_finite_order(context, tree, g_i, t_i, gt, i)
            passed.append("context-finite-order")
        elif strategy == "bounded-orbit":
            _verify_bounded_orbit(context, tree, t, t_i, gt, i)
            passed.append("context-bounded-orbit")
    except (KeyError, TypeError, ValueError, ReidTreeError) as exc:
        _fail("context", str(exc))
    return passed


def _verify_finite_order(ctx: dict, tree, g_i, t_i, gt, i: int) -> None:
    n = int(ctx["n"])
    v = tree.index_of(tree.check_vertex(path_from_str(ctx["v"])))
    _require(len(path_from_str(ctx["v"])) == i, "context", "v is not on level i")
    _require(_cycle_len(t_i, v) == n, "context", "t-orbit of v does not have length n")
    w = v
    for _ in range(n):
        w = gt[w]
    _require(w == g_i[v] and w != v, "context", "(g·t)^n(v) = g(v) ≠ v fails")
    _require(tree.index_of(path_from_str(ctx["g_v"])) == g_i[v], "context", "g(v) mismatch")
    lengths = ctx.get("orbit_lengths")
    if lengths is not None:
        _require(lengths == {"t": list(permgrp.cycle_type(t_i)),
                             "g_t": list(permgrp.cycle_type(gt))},
                 "context", "orbit lengths mismatch")
    _require(permgrp.order(t_i) == n, "context", "t does not have order n on level i")


def _verify_bounded_orbit(ctx: dict, tree, t: Portrait, t_i, gt, i: int) -> None:
    m, b = int(ctx["m"]), int(ctx["b"])
    v0 = path_from_str(ctx["v0"])
    v1 = path_from_str(ctx["v1"])
    _require(len(v0) == i - 1 and v1[:-1] == v0, "context", "v1 is not a child of v0 on level i")
    _require(b == tree.arity(i - 1), "context", "branching mismatch")
    t_prev = t.level_perm(i - 1)
    _require(_cycle_len(t_prev, tree.index_of(v0)) == m, "context", "t-orbit of v0 is not of length m")
    small_gt = min(permgrp.cycle_type(gt))
    small_t = min(permgrp.cycle_type(t_i))
    _require(ctx["smallest_g_t"] == small_gt and ctx["smallest_t"] == small_t,
             "context", "recorded smallest orbit lengths mismatch")
    _require(small_t == m * b, "context", "smallest t-orbit is not m·b")
    _require(m % small_gt == 0 and small_gt < m * b, "context",
             "smallest (g·t)-orbit must divide m and be below m·b")
    _require(m % _cycle_len(gt, tree.index_of(v1)) == 0, "context", "(g·t)-orbit of v1 does not divide m")


def verify_chain(doc: dict, cap: int = DEFAULT_CAP, check_digest: bool = True) -> list[str]:
    passed = []
    if check_digest:
        _check_digest(doc)
        passed.append("digest")
    try:
        certs = doc["certificates"]
        lower = int(doc["lower_bound"])
        deepest = doc["deepest_level"]
    except (KeyError, TypeError, ValueError) as exc:
        _fail("schema", str(exc))
    for k, c in enumerate(certs):
        _require(c.get("group") == doc.get("group") and c.get("t") == doc.get("t"),
                 "chain-consistency", f"certificate {k} refers to another group or t")
        try:
            verify_certificate(c, cap, check_digest=False)
        except CertificateError as exc:
            raise CertificateError(f"certificate[{k}].{exc.invariant}", exc.detail) from None
    passed.append("certificates")
    for k in range(1, len(certs)):
        _require(int(certs[k]["j"]) >= int(certs[k - 1]["i"]), "chain-order",
                 f"j of certificate {k} is below i of certificate {k - 1}")
    passed.append("chain-order")
    _require(lower == len(certs) + 1, "lower-bound", f"{lower} != {len(certs) + 1}")
    _require(deepest == (certs[-1]["i"] if certs else None), "deepest-level")
    passed.append("lower-bound")
    check = doc.get("distinctness_check") or {}
    if check.get("status") == "checked":
        spec = group_from_ref(doc["group"])
        t = Portrait.from_json(doc["t"], spec.tree)
        Q = level_quotient(spec, deepest, cap)
        part = reidemeister_classes(TwistedSetting.from_portrait(Q, t))
        ids = [part.class_of[0]] + [
            part.class_of[Q.index_of(word_level_perm(spec, parse_word(c["g_word"]), deepest))]
            for c in certs]
        _require(len(set(ids)) == len(ids), "distinctness", "representatives share a class")
        _require(check.get("class_ids") == ids and check.get("distinct") is True
                 and check.get("reid_count") == part.count,
                 "distinctness", "recorded class data mismatch")
        passed.append("distinctness")
    return passed


def verify_document(doc: dict, cap: int = DEFAULT_CAP) -> list[str]:
    """Dispatch on document type: chain report or single certificate."""
    if not isinstance(doc, dict):
        _fail("schema", "document must be a JSON object")
    if "certificates" in doc:
        return verify_chain(doc, cap)
    if "obstruction" in doc:
        return verify_certificate(doc, cap)
    _fail("schema", "neither a certificate nor a chain report")
