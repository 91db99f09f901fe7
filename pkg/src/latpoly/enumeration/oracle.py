"""Deliberately naive generate-and-filter enumerators.

Nothing here shares code with the search engines; these exist only to be
compared against them at small sizes.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..lattice import induced_edges, neighbours


def _normalize_sites(sites):
    m = min(sites)
    return frozenset(tuple(a - b for a, b in zip(x, m)) for x in sites)


def _normalize_graph(sites, edges):
    m = min(sites)

    def sh(x):
        return tuple(a - b for a, b in zip(x, m))

    return frozenset(sh(x) for x in sites), frozenset((sh(a), sh(b)) for a, b in edges)


def walk_count(d: int, n: int) -> int:
    """All (2d)^n step sequences in a box, filtered for self-avoidance."""
    if n == 0:
        return 1
    steps = []
    for i in range(d):
        for s in (1, -1):
            v = [0] * d
            v[i] = s
            steps.append(v)
    steps = np.array(steps, dtype=np.int64)
    total = 0
    # split on the first two steps to bound memory
    head = min(n, 2)
    tail = n - head
    width = 2 * n + 1
    mult = width ** np.arange(d, dtype=np.int64)
    for prefix in itertools.product(range(2 * d), repeat=head):
        if tail:
            idx = np.array(list(itertools.product(range(2 * d), repeat=tail)), dtype=np.int64)
            idx = np.hstack([np.tile(np.array(prefix), (len(idx), 1)), idx])
        else:
            idx = np.array([prefix], dtype=np.int64)
        pos = np.cumsum(steps[idx], axis=1) + n
        keys = pos @ mult
        keys = np.hstack([np.full((len(keys), 1), n * mult.sum()), keys])
        keys.sort(axis=1)
        ok = np.all(keys[:, 1:] != keys[:, :-1], axis=1)
        total += int(ok.sum())
    return total


def tree_classes(d: int, n: int) -> set:
    """Translation classes of n-site trees grown by attaching leaves, deduplicated."""
    level = {(frozenset([(0,) * d]), frozenset())}
    for _ in range(n - 1):
        nxt = set()
        for sites, edges in level:
            for x in sites:
                for y in neighbours(x):
                    if y in sites:
                        continue
                    e = (x, y) if x < y else (y, x)
                    nxt.add(_normalize_graph(sites | {y}, edges | {e}))
        level = nxt
    return level


def site_animal_classes(d: int, n: int) -> set:
    level = {frozenset([(0,) * d])}
    for _ in range(n - 1):
        nxt = set()
        for sites in level:
            for x in sites:
                for y in neighbours(x):
                    if y not in sites:
                        nxt.add(_normalize_sites(sites | {y}))
        level = nxt
    return level


def _spans_connected(sites, edges) -> bool:
    adj = {x: [] for x in sites}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    start = next(iter(sites))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(sites)


def subgraph_animal_classes(d: int, n: int) -> set:
    """Every connected spanning edge subset of every polyomino's induced graph."""
    out = set()
    for sites in site_animal_classes(d, n):
        ind = sorted(induced_edges(sites))
        for r in range(n - 1, len(ind) + 1):
            for sub in itertools.combinations(ind, r):
                if _spans_connected(sites, sub):
                    out.add((sites, frozenset(sub)))
    return out


def is_bridge(points) -> bool:
    xd0 = points[0][-1]
    top = points[-1][-1]
    return all(xd0 < p[-1] <= top for p in points[1:])


def walk_points(d: int, n: int):
    """All n-step SAWs from the origin by brute-force product over step choices."""
    steps = []
    for i in range(d):
        for s in (1, -1):
            v = [0] * d
            v[i] = s
            steps.append(tuple(v))
    for seq in itertools.product(steps, repeat=n):
        pts = [(0,) * d]
        for s in seq:
            pts.append(tuple(a + b for a, b in zip(pts[-1], s)))
        if len(set(pts)) == len(pts):
            yield tuple(pts)
