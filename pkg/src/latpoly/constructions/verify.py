"""Exhaustive small-size verifiers for the injective maps.

Each verifier pushes a whole finite domain through a map, deduplicates the
image and checks the map's stated contract.  The first collision or
contract failure is kept as a witness.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import asdict, dataclass, field

from ..enumeration.ensembles import (
    BRIDGE,
    CONTAINS_ORIGIN,
    HALF_SPACE,
    LEX_STAR,
    TRANSLATION_CLASSES,
    WALK,
    EnsembleSpec,
    count,
    count_single_contact,
    enumerate_ensemble,
    span_threshold,
    supermultiplicativity_check,
    surface_profile,
)
from ..errors import NOT_IN_IMAGE, InvalidConfiguration
from ..lattice import TREE, contact_number, span
from .bridges import bridge_concat, build_zeta, in_d_class, is_bridge, split_zeta
from .concat import shift_to_star, tree_concat, tree_concat_inverse
from .marks import (
    attach_marks_tree,
    attach_marks_walk,
    detach_marks_tree,
    detach_marks_walk,
    marked_polymers,
    marked_walks,
    stars_and_bars_count,
)


@dataclass
class VerifierReport:
    map_name: str
    domain_size: int = 0
    image_size: int = 0
    injective: bool = True
    passed: bool = True
    witness: object = None
    checks: dict = field(default_factory=dict)

    def fail(self, why: str, witness=None) -> None:
        self.passed = False
        if self.witness is None:
            self.witness = {"reason": why, "data": plain(witness)}

    def to_json(self) -> str:
        return json.dumps(plain(asdict(self)), sort_keys=True)


def plain(obj):
    """Make configurations JSON-friendly (tuples/sets/dataclasses -> lists)."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (frozenset, set)):
        return sorted(plain(x) for x in obj)
    if isinstance(obj, (list, tuple)):
        return [plain(x) for x in obj]
    if hasattr(obj, "__dataclass_fields__"):
        return {k: plain(getattr(obj, k)) for k in obj.__dataclass_fields__}
    return repr(obj)


def _record(report: VerifierReport, image: dict, key, source) -> None:
    report.domain_size += 1
    if key in image and image[key] != source:
        report.injective = False
        report.fail("collision", [image[key], source])
    else:
        image[key] = source


# --------------------------------------------------------------------------


def verify_marks_tree(d: int = 2, max_n: int = 5, max_j: int = 3) -> VerifierReport:
    """attach/detach on all marked half-space trees with N <= max_n, j <= max_j."""
    rep = VerifierReport("attach_marks_tree")
    rows = []
    for n in range(1, max_n + 1):
        bases = list(enumerate_ensemble(EnsembleSpec(TREE, d, n, HALF_SPACE)))
        profile = surface_profile(EnsembleSpec(TREE, d, n, HALF_SPACE))
        for j in range(max_j + 1):
            image: dict = {}
            before = rep.domain_size
            for base in bases:
                for m in marked_polymers(base, j):
                    t = attach_marks_tree(m)
                    if len(t) != n + j or (0,) * d not in t.sites:
                        rep.fail("image not in T_{N+j}", m)
                    if detach_marks_tree(t) != m:
                        rep.fail("detach(attach(m)) != m", m)
                    _record(rep, image, t, m)
            size = rep.domain_size - before
            formula = stars_and_bars_count(n, j, profile)
            bound = (n + j) * count(EnsembleSpec(TREE, d, n + j, TRANSLATION_CLASSES))
            rep.image_size += len(image)
            ok = size == formula == len(image) and len(image) <= bound
            if not ok:
                rep.fail("count mismatch", {"N": n, "j": j, "domain": size, "formula": formula,
                                            "image": len(image), "bound": bound})
            rows.append({"N": n, "j": j, "marked": size, "stars_and_bars": formula,
                         "image": len(image), "bound": bound})
    rep.checks["rows"] = rows
    return rep


def verify_marks_walk(d: int = 2, max_n: int = 5, max_j: int = 2) -> VerifierReport:
    """The walk marking map on S_N^(j): injective, length <= N + 2j."""
    rep = VerifierReport("attach_marks_walk")
    rows = []
    collisions = 0
    for n in range(1, max_n + 1):
        bases = list(enumerate_ensemble(EnsembleSpec(WALK, d, n, HALF_SPACE)))
        eprof = surface_profile(EnsembleSpec(WALK, d, n, HALF_SPACE), weighting="edges")
        for j in range(max_j + 1):
            image: dict = {}
            before = rep.domain_size
            for base in bases:
                for m in marked_walks(base, j):
                    try:
                        w = attach_marks_walk(m)
                    except InvalidConfiguration:
                        collisions += 1
                        rep.fail("connector self-intersects", m)
                        continue
                    if not (n <= w.n_steps <= n + 2 * j):
                        rep.fail("length out of range", m)
                    if detach_marks_walk(w) != m:
                        rep.fail("detach(attach(m)) != m", m)
                    _record(rep, image, w.points, m)
            size = rep.domain_size - before
            formula = stars_and_bars_count(n, j, eprof)
            bound = sum(count(EnsembleSpec(WALK, d, k)) for k in range(n, n + 2 * j + 1))
            rep.image_size += len(image)
            if not (size == formula and len(image) <= bound):
                rep.fail("count mismatch", {"N": n, "j": j, "domain": size, "formula": formula})
            rows.append({"N": n, "j": j, "marked": size, "stars_and_bars": formula,
                         "image": len(image), "bound": bound})
    rep.checks["rows"] = rows
    rep.checks["connector_collisions"] = collisions
    return rep


def verify_concat(d: int = 2, sizes=((3, 3), (2, 4))) -> VerifierReport:
    """Tree concatenation on T*_N x T*_M: additivity, injectivity, inverse."""
    rep = VerifierReport("tree_concat")
    for n, m in sizes:
        left = list(enumerate_ensemble(EnsembleSpec(TREE, d, n, LEX_STAR)))
        right = list(enumerate_ensemble(EnsembleSpec(TREE, d, m, LEX_STAR)))
        image: dict = {}
        for tau, psi in itertools.product(left, right):
            theta = tree_concat(tau, psi)
            if contact_number(theta) != contact_number(tau) + contact_number(psi):
                rep.fail("surface count not additive", [tau, psi])
            if tree_concat_inverse(theta, n, m) != (tau, psi):
                rep.fail("inverse did not recover factors", [tau, psi])
            _record(rep, image, theta, (tau, psi))
        rep.image_size += len(image)
        rep.checks[f"{n}x{m}"] = {"pairs": len(left) * len(right), "image": len(image)}
    return rep


def verify_shift(d: int = 2, max_n: int = 7) -> VerifierReport:
    """shift_to_star on every class that has a crowded plane; injective, lands in D_N."""
    rep = VerifierReport("shift_to_star")
    for n in range(2, max_n + 1):
        thr = span_threshold(n)
        need = math.log(n) ** 2
        image: dict = {}
        in_b = 0
        for tau in enumerate_ensemble(EnsembleSpec(TREE, d, n, TRANSLATION_CLASSES)):
            small = span(tau) <= thr
            try:
                hat, _ = shift_to_star(tau)
            except InvalidConfiguration:
                if small:
                    rep.fail("no crowded plane for a small-span tree", tau)
                continue
            in_b += small
            if contact_number(hat) < need or min(x for x in hat.sites if x[0] == 0) != (0,) * d:
                rep.fail("result not in D_N", tau)
            _record(rep, image, hat, tau)
        rep.image_size += len(image)
        rep.checks[str(n)] = {"B_N": in_b, "mapped": len(image)}
    return rep


def verify_bridge_concat(d: int = 2, n: int = 3, m: int = 3) -> VerifierReport:
    rep = VerifierReport("bridge_concat")
    left = list(enumerate_ensemble(EnsembleSpec(WALK, d, n, BRIDGE)))
    right = list(enumerate_ensemble(EnsembleSpec(WALK, d, m, BRIDGE)))
    image: dict = {}
    for a, b in itertools.product(left, right):
        theta = bridge_concat(a, b)
        if not is_bridge(theta) or theta.n_steps != n + m:
            rep.fail("output is not an (N+M)-step bridge", [a, b])
        _record(rep, image, theta.points, (a.points, b.points))
    rep.image_size = len(image)
    rep.checks["b_N*b_M"] = len(left) * len(right)
    rep.checks["b_{N+M}"] = count(EnsembleSpec(WALK, d, n + m, BRIDGE))
    return rep


def d_classes(d: int, n: int) -> dict:
    """Map (j, m) -> list of n-step bridges in D_{n,j,m}."""
    out: dict = {}
    for w in enumerate_ensemble(EnsembleSpec(WALK, d, n, BRIDGE)):
        xs = {p[0] for p in w.points}
        for j in xs:
            m = w.points[-1][0]
            if in_d_class(w, n, j, m):
                out.setdefault((j, m), []).append(w)
    return out


def verify_zeta(d: int = 2, n: int = 4, max_k: int = 2) -> VerifierReport:
    """Build every zeta from D_{n,J,M} x D_{n,-J,-M} blocks (J >= 0), k <= max_k."""
    rep = VerifierReport("build_zeta")
    classes = d_classes(d, n)
    need = math.log(n) ** 2
    for (j, m), omegas in sorted(classes.items()):
        if j < 0 or (-j, -m) not in classes:
            continue
        psis = classes[(-j, -m)]
        for k in range(1, max_k + 1):
            image: dict = {}
            fewest = None
            for ws in itertools.product(omegas, repeat=k):
                for ps in itertools.product(psis, repeat=k):
                    z = build_zeta(list(ws), list(ps), n, j, m)
                    if not is_bridge(z) or z.n_steps != j + 1 + 2 * k * n:
                        rep.fail("zeta is not a bridge of length J+1+2kn", [j, m, k])
                    c = contact_number(z)
                    fewest = c if fewest is None else min(fewest, c)
                    if c < k * need:
                        rep.fail("too few surface sites", [j, m, k])
                    back = split_zeta(z, n, j, k)
                    if [w.points for w in back[0]] != [w.points for w in ws] or \
                            [p.points for p in back[1]] != [p.points for p in ps]:
                        rep.fail("factors not recovered", [j, m, k])
                    _record(rep, image, z.points, (tuple(w.points for w in ws), tuple(p.points for p in ps)))
            rep.image_size += len(image)
            rep.checks[f"J={j},M={m},k={k}"] = {
                "D_JM": len(omegas), "D_-J-M": len(psis), "zetas": len(image),
                "min_contacts": fewest, "k_log2n": k * need,
            }
    return rep


def verify_single_contact(d: int = 2, max_n: int = 8) -> VerifierReport:
    rep = VerifierReport("single_contact")
    for n in range(2, max_n + 1):
        lhs = count_single_contact(n, d)
        rhs = count(EnsembleSpec(TREE, d, n - 1, HALF_SPACE))
        rep.domain_size += 1
        rep.checks[str(n)] = {"single_contact": lhs, "T+_{N-1}": rhs}
        if lhs != rhs:
            rep.fail("identity fails", {"N": n, "lhs": lhs, "rhs": rhs})
    return rep


def verify_supermult(d: int = 2, limit: int = 10) -> VerifierReport:
    rep = VerifierReport("supermultiplicativity")
    for model in (TREE, WALK):
        r = supermultiplicativity_check(model, d, limit)
        rep.domain_size += len(r.rows)
        rep.checks[model] = {str(k): v for k, v in r.counts.items()}
        for a, b, lhs, rhs, ok in r.rows:
            if not ok:
                rep.fail(f"{model} inequality fails", {"N": a, "M": b, "lhs": lhs, "rhs": rhs})
    return rep


def verify_ensemble_inclusions(d: int = 2, max_n: int = 8) -> VerifierReport:
    rep = VerifierReport("ensemble_inclusions")
    for n in range(1, max_n + 1):
        tbar = count(EnsembleSpec(TREE, d, n, TRANSLATION_CLASSES))
        tplus = count(EnsembleSpec(TREE, d, n, HALF_SPACE))
        tall = count(EnsembleSpec(TREE, d, n, CONTAINS_ORIGIN))
        rep.domain_size += 1
        if not (tbar <= tplus <= tall and tall == n * tbar):
            rep.fail("inclusion chain fails", {"N": n})
    return rep
