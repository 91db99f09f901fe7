"""Surface-preserving concatenation of trees and the small-span shift.

``T*_N`` is the set of N-site trees containing the origin in which the
origin is the lex-smallest surface site.  Two such trees are joined by
pushing the second along ``u^(2)`` just past the last overlap with the
first and adding one ``u^(2)`` edge; surface sites add up exactly.
"""

from __future__ import annotations

import math

from ..errors import NOT_IN_IMAGE, InvalidConfiguration
from ..lattice import (
    TREE,
    Polymer,
    add,
    components_without,
    make_edge,
    origin,
    span,
    sub,
    surface_sites,
    translate,
    tree_path,
    unit,
)


def is_lex_star(t: Polymer) -> bool:
    h = surface_sites(t)
    return bool(h) and min(h) == origin(t.d)


def _require_star(t: Polymer, name: str) -> None:
    if t.kind != TREE:
        raise InvalidConfiguration(f"{name} must be a tree")
    if t.d < 2:
        raise InvalidConfiguration("concatenation needs d >= 2")
    if not is_lex_star(t):
        raise InvalidConfiguration(f"{name}: origin is not the lex-smallest surface site")


def overlap_shift(tau: Polymer, psi: Polymer) -> int:
    """Largest k with (psi + k u^(2)) meeting tau."""
    best = None
    by_rest: dict = {}
    for x in tau.sites:
        by_rest.setdefault(x[:1] + x[2:], []).append(x[1])
    for y in psi.sites:
        for x2 in by_rest.get(y[:1] + y[2:], ()):
            k = x2 - y[1]
            if best is None or k > best:
                best = k
    if best is None:
        raise InvalidConfiguration("psi never meets tau under u^(2) shifts")
    return best


def tree_concat(tau: Polymer, psi: Polymer) -> Polymer:
    """tau (+) psi: an (N+M)-site tree in T* whose surface is the disjoint union."""
    _require_star(tau, "tau")
    _require_star(psi, "psi")
    if tau.d != psi.d:
        raise InvalidConfiguration("dimension mismatch")
    d = tau.d
    k = overlap_shift(tau, psi)
    u2 = unit(d, 1)
    meet = [x for x in tau.sites if sub(x, unit(d, 1, k)) in psi.sites]
    v = min(meet)
    moved = translate(psi, unit(d, 1, k + 1))
    return Polymer(
        TREE,
        d,
        tau.sites | moved.sites,
        tau.edges | moved.edges | {make_edge(v, add(v, u2))},
    )


def tree_concat_inverse(theta: Polymer, n: int, m: int):
    """Recover (tau, psi) from tau (+) psi with |tau| = n, |psi| = m.

    Returns ``NOT_IN_IMAGE`` when ``theta`` is a valid T* tree that no pair
    maps to.
    """
    if theta.kind != TREE or len(theta) != n + m:
        raise InvalidConfiguration("theta must be a tree with n + m sites")
    if not is_lex_star(theta):
        raise InvalidConfiguration("theta must lie in T*")
    d = theta.d
    zero = origin(d)
    top = max(x[1] for x in theta.sites if x[:1] + x[2:] == zero[:1] + zero[2:])
    if top <= 0:
        return NOT_IN_IMAGE
    path = tree_path(theta, zero, unit(d, 1, top))
    cut = []
    for a, b in zip(path, path[1:]):
        e = make_edge(a, b)
        left, right = components_without(theta, e)
        if zero not in left:
            left, right = right, left
        if len(left) == n:
            cut.append((e, left, right))
    if len(cut) != 1:
        return NOT_IN_IMAGE
    e, left, right = cut[0]
    tau = _sub_tree(theta, left)
    moved = _sub_tree(theta, right)
    h = surface_sites(moved)
    if not h:
        return NOT_IN_IMAGE
    shift = min(h)
    psi = translate(moved, sub(zero, shift))
    try:
        if tree_concat(tau, psi) != theta:
            return NOT_IN_IMAGE
    except InvalidConfiguration:
        return NOT_IN_IMAGE
    return tau, psi


def _sub_tree(t: Polymer, keep) -> Polymer:
    return Polymer(
        TREE,
        t.d,
        frozenset(keep),
        frozenset(e for e in t.edges if e[0] in keep and e[1] in keep),
    )


def shift_to_star(tau: Polymer) -> tuple:
    """Move a small-span tree so a crowded hyperplane becomes the surface.

    Picks the smallest plane offset j (from the lowest occupied plane) holding
    at least ln^2 N sites and translates the lex-smallest site there to the
    origin.  Returns ``(shifted_tree, j)``; the result is in T*_N with at
    least ln^2 N surface sites.
    """
    n = len(tau)
    need = math.log(n) ** 2 if n > 1 else 0.0
    lo = min(x[0] for x in tau.sites)
    for j in range(span(tau)):
        plane = [x for x in tau.sites if x[0] == lo + j]
        if len(plane) >= need:
            return translate(tau, sub(origin(tau.d), min(plane))), j
    raise InvalidConfiguration(f"no hyperplane of the tree holds ln^2 N = {need:.3f} sites")
