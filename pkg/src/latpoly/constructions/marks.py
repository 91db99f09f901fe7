"""Marked trees and marked walks, and the maps that unfold marks into hairs.

A marked tree is a half-space tree containing the origin with a
nonnegative integer on each surface site.  Attaching a straight segment of
that length in the ``-x_1`` direction at every surface site gives a tree
with ``j`` more sites that still contains the origin; the half-space part
of the result is the original tree and the segment lengths are the marks.

Marked walks carry marks on surface edges instead.  The walk map shifts
each marked edge ``m`` units into ``x_1 < 0`` and joins the pieces with
runs parallel to ``u^(1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator

from ..errors import NOT_IN_IMAGE, InvalidConfiguration
from ..lattice import (
    TREE,
    Polymer,
    Walk,
    in_half_space,
    make_edge,
    origin,
    restrict,
    surface_edges,
    surface_sites,
)


def ways(k: int, j: int) -> int:
    """Number of ways to put j identical balls in k boxes."""
    if j == 0:
        return 1
    if k == 0:
        return 0
    return comb(k + j - 1, j)


def stars_and_bars_count(n: int, j: int, profile) -> int:
    """|T_N^(j)| from a contact profile: sum_k C(k+j-1, j) * left_N(k)."""
    if profile.n != n:
        raise InvalidConfiguration(f"profile is for N={profile.n}, not N={n}")
    return sum(ways(k, j) * c for k, c in enumerate(profile.counts))


def weak_compositions(j: int, k: int) -> Iterator[tuple]:
    """All k-tuples of nonnegative integers summing to j, lexicographic."""
    if k == 0:
        if j == 0:
            yield ()
        return
    if k == 1:
        yield (j,)
        return
    for first in range(j, -1, -1):
        for rest in weak_compositions(j - first, k - 1):
            yield (first,) + rest


def _check_marks(marks: dict, allowed, what: str) -> tuple:
    items = []
    for key, w in marks.items():
        if key not in allowed:
            raise InvalidConfiguration(f"mark on {key}, which is not a surface {what}")
        if not isinstance(w, int) or w < 0:
            raise InvalidConfiguration(f"marks must be nonnegative integers, got {w!r}")
        if w:
            items.append((key, w))
    return tuple(sorted(items))


@dataclass(frozen=True)
class MarkedPolymer:
    base: Polymer
    marks: tuple  # sorted ((site, w), ...) with w > 0

    @classmethod
    def make(cls, base: Polymer, marks: dict) -> "MarkedPolymer":
        return cls(base, _check_marks(marks, surface_sites(base), "site"))

    @property
    def total_marks(self) -> int:
        return sum(w for _, w in self.marks)

    def mark(self, v) -> int:
        return dict(self.marks).get(v, 0)


@dataclass(frozen=True)
class MarkedWalk:
    base: Walk
    marks: tuple  # sorted ((edge, m), ...) with m > 0

    @classmethod
    def make(cls, base: Walk, marks: dict) -> "MarkedWalk":
        norm = {make_edge(*e): w for e, w in marks.items()}
        return cls(base, _check_marks(norm, surface_edges(base), "edge"))

    @property
    def total_marks(self) -> int:
        return sum(w for _, w in self.marks)


def marked_polymers(base: Polymer, j: int) -> Iterator[MarkedPolymer]:
    """Every way of putting j marks on the surface sites of ``base``."""
    keys = sorted(surface_sites(base))
    for ws in weak_compositions(j, len(keys)):
        yield MarkedPolymer(base, tuple((v, w) for v, w in zip(keys, ws) if w))


def marked_walks(base: Walk, j: int) -> Iterator[MarkedWalk]:
    keys = sorted(surface_edges(base))
    for ws in weak_compositions(j, len(keys)):
        yield MarkedWalk(base, tuple((e, w) for e, w in zip(keys, ws) if w))


# --------------------------------------------------------------------------
# trees


def _check_tree_base(t: Polymer) -> None:
    if t.kind != TREE:
        raise InvalidConfiguration("base must be a lattice tree")
    if not in_half_space(t):
        raise InvalidConfiguration("base must lie in the half-space x_1 >= 0")
    if origin(t.d) not in t.sites:
        raise InvalidConfiguration("base must contain the origin")


def attach_marks_tree(m: MarkedPolymer) -> Polymer:
    """Hang a straight ``-x_1`` segment of length w(v) from each surface site v."""
    base = m.base
    _check_tree_base(base)
    sites = set(base.sites)
    edges = set(base.edges)
    for v, w in m.marks:
        prev = v
        for i in range(1, w + 1):
            x = (v[0] - i,) + v[1:]
            sites.add(x)
            edges.add((x, prev))
            prev = x
    return Polymer(TREE, base.d, frozenset(sites), frozenset(edges))


def detach_marks_tree(t: Polymer):
    """Inverse of :func:`attach_marks_tree`; ``NOT_IN_IMAGE`` off its image."""
    if t.kind != TREE:
        raise InvalidConfiguration("detach_marks_tree expects a tree")
    if origin(t.d) not in t.sites:
        raise InvalidConfiguration("tree must contain the origin")
    base = restrict(t, lambda x: x[0] >= 0)
    if base is None or origin(t.d) not in base.sites:
        return NOT_IN_IMAGE
    marks = {}
    for v in surface_sites(base):
        w = 0
        while (v[0] - w - 1,) + v[1:] in t.sites:
            w += 1
        if w:
            marks[v] = w
    candidate = MarkedPolymer.make(base, marks)
    if attach_marks_tree(candidate) != t:
        return NOT_IN_IMAGE
    return candidate


# --------------------------------------------------------------------------
# walks


def _shift(x, depth):
    return (x[0] - depth,) + x[1:]


def attach_marks_walk(m: MarkedWalk) -> Walk:
    """Displace each marked surface edge by its mark along ``-u^(1)`` and splice.

    The base edges are traversed in walk order.  Before each edge the
    connector moves along ``u^(1)`` from the depth of the previous edge to
    the depth of this one; after the last edge it climbs back to the base
    endpoint.  At most ``2j`` steps are added.
    """
    base = m.base
    if origin(base.d) != base.points[0]:
        raise InvalidConfiguration("base walk must start at the origin")
    if not in_half_space(base):
        raise InvalidConfiguration("base walk must lie in the half-space")
    depth_of = dict(m.marks)
    pts = base.points
    out = [pts[0]]
    prev_depth = 0
    for a, b in zip(pts, pts[1:]):
        depth = depth_of.get(make_edge(a, b), 0)
        _run(out, a, prev_depth, depth)
        out.append(_shift(b, depth))
        prev_depth = depth
    _run(out, pts[-1], prev_depth, 0)
    if len(set(out)) != len(out):
        raise InvalidConfiguration("canonical connector self-intersects")
    return Walk(tuple(out))


def _run(out, column, d_from, d_to):
    step = 1 if d_to > d_from else -1
    for depth in range(d_from + step, d_to + step, step):
        out.append(_shift(column, depth))


def detach_marks_walk(w: Walk):
    """Inverse of :func:`attach_marks_walk`; ``NOT_IN_IMAGE`` off its image."""
    pts = w.points
    if pts[0] != origin(w.d):
        raise InvalidConfiguration("walk must start at the origin")
    kept = []
    for a, b in zip(pts, pts[1:]):
        along_x1 = a[1:] == b[1:]
        if along_x1 and a[0] <= 0 and b[0] <= 0:
            continue  # connector step
        kept.append((a, b))
    base_pts = [pts[0]]
    marks = {}
    for a, b in kept:
        if a[0] <= 0 and b[0] <= 0:
            depth = -a[0]
            a0, b0 = _shift(a, -depth), _shift(b, -depth)
            if depth:
                marks[make_edge(a0, b0)] = depth
        else:
            a0, b0 = a, b
        if a0 != base_pts[-1]:
            return NOT_IN_IMAGE
        base_pts.append(b0)
    if len(set(base_pts)) != len(base_pts) or any(x[0] < 0 for x in base_pts):
        return NOT_IN_IMAGE
    candidate = MarkedWalk.make(Walk(tuple(base_pts)), marks)
    if attach_marks_walk(candidate) != w:
        return NOT_IN_IMAGE
    return candidate
