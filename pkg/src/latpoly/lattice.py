"""Geometry of the hypercubic lattice Z^d.

Sites are plain tuples of ints.  The surface is the hyperplane ``x_1 = 0``
(index 0 of the tuple); the impenetrable ensembles live in ``x_1 >= 0``.
Lexicographic order is Python's tuple order, which compares ``x_1`` first.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import InvalidConfiguration

Site = tuple
Edge = tuple  # (a, b) with a < b lexicographically

SUPPORTED_DIMS = (2, 3, 4)
TREE = "tree"
ANIMAL = "animal"


def origin(d: int) -> Site:
    return (0,) * d


def unit(d: int, i: int, sign: int = 1) -> Site:
    """Unit vector along axis ``i`` (0-based; axis 0 is x_1)."""
    v = [0] * d
    v[i] = sign
    return tuple(v)


def add(x: Site, y: Site) -> Site:
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Site, y: Site) -> Site:
    return tuple(a - b for a, b in zip(x, y))


def neighbours(x: Site) -> Iterator[Site]:
    for i in range(len(x)):
        for s in (1, -1):
            y = list(x)
            y[i] += s
            yield tuple(y)


def is_adjacent(x: Site, y: Site) -> bool:
    return sum(abs(a - b) for a, b in zip(x, y)) == 1


def make_edge(x: Site, y: Site) -> Edge:
    if not is_adjacent(x, y):
        raise InvalidConfiguration(f"{x} and {y} are not nearest neighbours")
    return (x, y) if x < y else (y, x)


def check_dim(d: int) -> None:
    if d not in SUPPORTED_DIMS:
        raise InvalidConfiguration(f"dimension {d} not supported (use one of {SUPPORTED_DIMS})")


@dataclass(frozen=True)
class Polymer:
    """A lattice tree or lattice animal: a finite connected subgraph of L^d.

    ``edges`` is explicit for both kinds, so a site-animal carries its full
    induced edge set and a subgraph-animal any connected spanning subset.
    """

    kind: str
    d: int
    sites: frozenset
    edges: frozenset

    def __post_init__(self):
        check_dim(self.d)
        if self.kind not in (TREE, ANIMAL):
            raise InvalidConfiguration(f"unknown polymer kind {self.kind!r}")
        if not self.sites:
            raise InvalidConfiguration("polymer must contain at least one site")
        for x in self.sites:
            if len(x) != self.d:
                raise InvalidConfiguration(f"site {x} has wrong dimension")
        for a, b in self.edges:
            if a not in self.sites or b not in self.sites:
                raise InvalidConfiguration(f"edge {(a, b)} has an endpoint outside the site set")
            if not (a < b and is_adjacent(a, b)):
                raise InvalidConfiguration(f"malformed edge {(a, b)}")
        if not _connected(self.sites, self.edges):
            raise InvalidConfiguration("polymer is not connected")
        if self.kind == TREE and len(self.edges) != len(self.sites) - 1:
            raise InvalidConfiguration("tree must have exactly |sites| - 1 edges")

    @classmethod
    def tree(cls, edges: Iterable, d: int | None = None, sites: Iterable | None = None) -> "Polymer":
        """Tree from a list of site pairs; a lone site needs ``sites=[x]``."""
        es = frozenset(make_edge(a, b) for a, b in edges)
        ss = set(sites or ())
        for a, b in es:
            ss.update((a, b))
        if d is None:
            d = len(next(iter(ss)))
        return cls(TREE, d, frozenset(ss), es)

    @classmethod
    def site_animal(cls, sites: Iterable, d: int | None = None) -> "Polymer":
        ss = frozenset(sites)
        if d is None:
            d = len(next(iter(ss)))
        return cls(ANIMAL, d, ss, induced_edges(ss))

    @classmethod
    def subgraph_animal(cls, edges: Iterable, d: int | None = None, sites: Iterable | None = None) -> "Polymer":
        es = frozenset(make_edge(a, b) for a, b in edges)
        ss = set(sites or ())
        for a, b in es:
            ss.update((a, b))
        if d is None:
            d = len(next(iter(ss)))
        return cls(ANIMAL, d, frozenset(ss), es)

    def __len__(self) -> int:
        return len(self.sites)

    def __contains__(self, x) -> bool:
        return x in self.sites


@dataclass(frozen=True)
class Walk:
    """A self-avoiding walk ``omega(0), ..., omega(N)``."""

    points: tuple

    def __post_init__(self):
        pts = self.points
        if not pts:
            raise InvalidConfiguration("walk needs at least one point")
        d = len(pts[0])
        check_dim(d)
        if len(set(pts)) != len(pts):
            raise InvalidConfiguration("walk is not self-avoiding")
        for a, b in zip(pts, pts[1:]):
            if len(b) != d or not is_adjacent(a, b):
                raise InvalidConfiguration(f"consecutive points {a}, {b} are not adjacent")

    @classmethod
    def from_steps(cls, steps: Iterable[Site], start: Site | None = None, d: int | None = None) -> "Walk":
        steps = list(steps)
        if start is None:
            if d is None:
                d = len(steps[0])
            start = origin(d)
        pts = [start]
        for s in steps:
            pts.append(add(pts[-1], s))
        return cls(tuple(pts))

    @property
    def d(self) -> int:
        return len(self.points[0])

    @property
    def n_steps(self) -> int:
        return len(self.points) - 1

    @property
    def sites(self) -> frozenset:
        return frozenset(self.points)

    @property
    def edges(self) -> list:
        return [make_edge(a, b) for a, b in zip(self.points, self.points[1:])]

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]


Config = Union[Polymer, Walk]


def induced_edges(sites: Iterable[Site]) -> frozenset:
    ss = set(sites)
    out = set()
    for x in ss:
        for i in range(len(x)):
            y = list(x)
            y[i] += 1
            y = tuple(y)
            if y in ss:
                out.add((x, y))
    return frozenset(out)


def _connected(sites, edges) -> bool:
    adj = {x: [] for x in sites}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    start = next(iter(sites))
    seen = {start}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == len(sites)


def _sites(rho: Config):
    return rho.points if isinstance(rho, Walk) else rho.sites


def surface_sites(rho: Config) -> frozenset:
    """Sites of ``rho`` lying in the surface ``x_1 = 0``."""
    return frozenset(x for x in _sites(rho) if x[0] == 0)


def contact_number(rho: Config) -> int:
    return sum(1 for x in _sites(rho) if x[0] == 0)


def surface_edges(w: Walk) -> frozenset:
    """Edges of the walk with both endpoints in the surface."""
    return frozenset(e for e in w.edges if e[0][0] == 0 and e[1][0] == 0)


def span(rho: Config) -> int:
    xs = [x[0] for x in _sites(rho)]
    return 1 + max(xs) - min(xs)


def translate(rho, x: Site):
    """Shift every site of a polymer, walk or site set by the vector ``x``."""
    if isinstance(rho, Walk):
        return Walk(tuple(add(p, x) for p in rho.points))
    if isinstance(rho, Polymer):
        return Polymer(
            rho.kind,
            rho.d,
            frozenset(add(p, x) for p in rho.sites),
            frozenset((add(a, x), add(b, x)) for a, b in rho.edges),
        )
    return frozenset(add(p, x) for p in rho)


def lex_smallest_site(sites: Iterable[Site]) -> Site:
    ss = list(sites)
    if not ss:
        raise InvalidConfiguration("lex_smallest_site of an empty set")
    return min(ss)


def in_half_space(rho: Config) -> bool:
    return all(x[0] >= 0 for x in _sites(rho))


def normalize(rho: Polymer) -> Polymer:
    """Representative of the translation class: lex-smallest site at the origin."""
    return translate(rho, sub(origin(rho.d), min(rho.sites)))


def plane_counts(rho: Config) -> dict:
    """Number of sites on each occupied hyperplane ``x_1 = j``."""
    out: dict = {}
    for x in _sites(rho):
        out[x[0]] = out.get(x[0], 0) + 1
    return out


def restrict(rho: Polymer, keep) -> Polymer | None:
    """Subgraph induced on the sites satisfying ``keep`` (None if empty or disconnected)."""
    ss = frozenset(x for x in rho.sites if keep(x))
    if not ss:
        return None
    es = frozenset(e for e in rho.edges if e[0] in ss and e[1] in ss)
    if not _connected(ss, es):
        return None
    kind = rho.kind
    if kind == TREE and len(es) != len(ss) - 1:
        return None
    return Polymer(kind, rho.d, ss, es)


def components_without(rho: Polymer, edge: Edge) -> tuple:
    """Site sets of the two components left after deleting ``edge`` from a tree."""
    adj = {x: [] for x in rho.sites}
    for a, b in rho.edges:
        if (a, b) == edge:
            continue
        adj[a].append(b)
        adj[b].append(a)
    a = edge[0]
    seen = {a}
    todo = [a]
    while todo:
        x = todo.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return frozenset(seen), rho.sites - seen


def tree_path(rho: Polymer, start: Site, end: Site) -> list:
    """Unique site path between two sites of a tree."""
    adj = {x: [] for x in rho.sites}
    for a, b in rho.edges:
        adj[a].append(b)
        adj[b].append(a)
    parent = {start: None}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        if x == end:
            break
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                todo.append(y)
    if end not in parent:
        raise InvalidConfiguration(f"{end} not reachable from {start}")
    path = [end]
    while path[-1] != start:
        path.append(parent[path[-1]])
    return path[::-1]
