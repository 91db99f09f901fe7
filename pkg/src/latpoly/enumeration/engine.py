"""Exhaustive search engines for lattice trees, animals and self-avoiding walks.

Sites are packed into integers, ``key = sum((x_i + B) * W**(d-1-i))`` with
bias ``B = N + 1`` and width ``W = 2B + 1``.  Because ``x_1`` is the most
significant digit, integer order on keys is lexicographic order on sites,
so "lex-greater than the origin" is a single comparison.

Trees and subgraph-animals are grown edge by edge with Redelmeier's
untried-set recursion on the line graph of the lattice, restricted to edges
whose endpoints are both lex >= origin, and rooted at a virtual cell that is
adjacent to every such edge at the origin.  Each connected edge set whose
lex-smallest site is the origin is therefore generated exactly once.
Acyclicity and "at most N sites" are both inherited by subsets, so a
rejected edge can stay in the reached set without losing anything.

Site-animals use the classic site version of the same recursion.

Every engine can stop at a fixed search depth and hand the remaining
subtrees out as independent tasks; results are merged in serial DFS order,
so output never depends on the number of workers.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from ..errors import ResourceLimitExceeded
from ..lattice import TREE, Polymer, Walk

SPLIT_DEPTH = 3
# below this many sites the process pool costs more than it saves
PARALLEL_MIN_SIZE = 7


@dataclass(frozen=True)
class Codec:
    d: int
    bias: int

    @property
    def width(self) -> int:
        return 2 * self.bias + 1

    def strides(self) -> tuple:
        w = self.width
        return tuple(w ** (self.d - 1 - i) for i in range(self.d))

    def encode(self, x) -> int:
        w, b = self.width, self.bias
        k = 0
        for c in x:
            k = k * w + (c + b)
        return k

    def decode(self, k: int) -> tuple:
        w, b = self.width, self.bias
        out = []
        for _ in range(self.d):
            k, r = divmod(k, w)
            out.append(r - b)
        return tuple(reversed(out))

    def x1(self, k: int) -> int:
        return k // self.strides()[0] - self.bias

    @property
    def origin(self) -> int:
        return self.encode((0,) * self.d)


def _budget_check(state, limit):
    state[0] += 1
    if limit is not None and state[0] > limit:
        raise ResourceLimitExceeded("enumeration object budget exhausted", state[0] - 1)


# --------------------------------------------------------------------------
# polymer search (trees, subgraph animals, site animals)


@dataclass(frozen=True)
class PolymerJob:
    kind: str  # "tree" | "bond" | "site"
    d: int
    n: int
    want: str  # "summary" | "objects"
    limit: int | None = None


def _plane_signature(site_keys, first_stride, bias) -> tuple:
    counts: dict = {}
    for k in site_keys:
        j = k // first_stride
        counts[j] = counts.get(j, 0) + 1
    lo = min(counts)
    hi = max(counts)
    return tuple(counts.get(j, 0) for j in range(lo, hi + 1))


class _PolymerSearch:
    """One Redelmeier run; ``split`` > 0 makes it stop at that depth and
    record resumable snapshots instead of descending."""

    def __init__(self, job: PolymerJob, split: int = 0):
        self.job = job
        self.codec = Codec(job.d, job.n + 1)
        self.strides = self.codec.strides()
        self.org = self.codec.origin
        self.split = split
        self.events: list = []
        self.summary: Counter = Counter()
        self.objects: list = []
        self.seen = [0]

    # -- helpers
    def _edge_ends(self, e):
        a, i = divmod(e, self.job.d)
        return a, a + self.strides[i]

    def _edge_nbrs(self, e):
        d = self.job.d
        org = self.org
        a, b = self._edge_ends(e)
        out = []
        for p in (a, b):
            for i, s in enumerate(self.strides):
                q = p + s
                if p >= org and q >= org:
                    out.append(p * d + i)
                q = p - s
                if q >= org:
                    out.append(q * d + i)
        return [f for f in out if f != e]

    def _site_nbrs(self, x):
        org = self.org
        out = []
        for s in self.strides:
            if x + s >= org:
                out.append(x + s)
            if x - s >= org:
                out.append(x - s)
        return out

    def _emit(self, site_keys, edge_ids):
        _budget_check(self.seen, self.job.limit)
        if self.job.want == "summary":
            sig = _plane_signature(site_keys, self.strides[0], self.codec.bias)
            if self.split:
                self.events.append(("sig", sig))
            else:
                self.summary[sig] += 1
        else:
            obj = (tuple(sorted(site_keys)), tuple(sorted(edge_ids)))
            if self.split:
                self.events.append(("obj", obj))
            else:
                self.objects.append(obj)

    # -- edge recursion
    def start_edges(self):
        n = self.job.n
        if n == 1:
            self._emit([self.org], [])
            return
        d = self.job.d
        first = [self.org * d + i for i in range(d)]
        sites = {self.org: 1}
        self._rec_edges(list(first), set(first), [], sites, 1)

    def resume_edges(self, snap):
        untried, reached, stack, sites, nsites = snap
        self._rec_edges(untried, reached, stack, sites, nsites)

    def _rec_edges(self, untried, reached, stack, sites, nsites):
        n = self.job.n
        tree = self.job.kind == "tree"
        while untried:
            e = untried.pop()
            a, b = self._edge_ends(e)
            ina = a in sites
            inb = b in sites
            if tree and ina and inb:
                continue
            grown = nsites + (not ina) + (not inb)
            if grown > n:
                continue
            stack.append(e)
            sites[a] = sites.get(a, 0) + 1
            sites[b] = sites.get(b, 0) + 1
            if grown == n:
                self._emit(sites.keys(), stack)
            if not (tree and grown == n):
                new = [f for f in self._edge_nbrs(e) if f not in reached]
                if self.split and len(stack) == self.split:
                    self.events.append(
                        ("task", (untried + new, reached | set(new), list(stack), dict(sites), grown))
                    )
                else:
                    reached.update(new)
                    self._rec_edges(untried + new, reached, stack, sites, grown)
                    reached.difference_update(new)
            for p in (a, b):
                sites[p] -= 1
                if not sites[p]:
                    del sites[p]
            stack.pop()

    # -- site recursion
    def start_sites(self):
        org = self.org
        self._rec_sites([org], {org}, [])

    def resume_sites(self, snap):
        untried, reached, cells = snap
        self._rec_sites(untried, reached, cells)

    def _rec_sites(self, untried, reached, cells):
        n = self.job.n
        while untried:
            x = untried.pop()
            cells.append(x)
            if len(cells) == n:
                self._emit(cells, ())
            else:
                new = [y for y in self._site_nbrs(x) if y not in reached]
                if self.split and len(cells) == self.split:
                    self.events.append(("task", (untried + new, reached | set(new), list(cells))))
                else:
                    reached.update(new)
                    self._rec_sites(untried + new, reached, cells)
                    reached.difference_update(new)
            cells.pop()

    def run(self):
        if self.job.kind == "site":
            self.start_sites()
        else:
            self.start_edges()

    def resume(self, snap):
        if self.job.kind == "site":
            self.resume_sites(snap)
        else:
            self.resume_edges(snap)


def _polymer_task(job: PolymerJob, snap):
    s = _PolymerSearch(job)
    s.resume(snap)
    return s.summary if job.want == "summary" else s.objects


def _run_polymer(job: PolymerJob, workers: int):
    if workers <= 1 or job.n < PARALLEL_MIN_SIZE:
        s = _PolymerSearch(job)
        s.run()
        return s.summary if job.want == "summary" else s.objects
    head = _PolymerSearch(job, split=SPLIT_DEPTH)
    head.run()
    tasks = [ev[1] for ev in head.events if ev[0] == "task"]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = iter(list(pool.map(_polymer_task, [job] * len(tasks), tasks)))
    if job.want == "summary":
        total: Counter = Counter()
        for kind, payload in head.events:
            if kind == "sig":
                total[payload] += 1
            else:
                total.update(next(results))
        return total
    out = []
    for kind, payload in head.events:
        if kind == "obj":
            out.append(payload)
        else:
            out.extend(next(results))
    return out


def _engine_kind(kind: str, convention: str) -> str:
    if kind == TREE:
        return "tree"
    if convention == "site":
        return "site"
    if convention == "subgraph":
        return "bond"
    raise ValueError(f"unknown animal convention {convention!r}")


def polymer_class_summary(kind: str, d: int, n: int, convention: str = "site",
                          workers: int = 1, limit: int | None = None) -> Counter:
    """Histogram of plane signatures over translation classes.

    A signature is the tuple ``(n_0, n_1, ..., n_{s-1})`` of site counts on
    the consecutive hyperplanes ``x_1 = min, ..., max`` of one class.
    """
    job = PolymerJob(_engine_kind(kind, convention), d, n, "summary", limit)
    return _run_polymer(job, workers)


def polymer_classes(kind: str, d: int, n: int, convention: str = "site",
                    workers: int = 1, limit: int | None = None) -> list:
    """All translation classes (lex-smallest site at the origin), DFS order."""
    job = PolymerJob(_engine_kind(kind, convention), d, n, "objects", limit)
    raw = _run_polymer(job, workers)
    codec = Codec(d, n + 1)
    strides = codec.strides()
    out = []
    for site_keys, edge_ids in raw:
        sites = frozenset(codec.decode(k) for k in site_keys)
        if job.kind == "site":
            out.append(Polymer.site_animal(sites, d))
            continue
        edges = []
        for e in edge_ids:
            a, i = divmod(e, d)
            edges.append((codec.decode(a), codec.decode(a + strides[i])))
        out.append(Polymer(kind, d, sites, frozenset(edges)))
    return out


# --------------------------------------------------------------------------
# self-avoiding walks


@dataclass(frozen=True)
class WalkJob:
    d: int
    n: int
    want: str  # "summary" | "objects"
    half: bool = False
    bridge: bool = False
    limit: int | None = None


class _WalkSearch:
    """Depth-first SAW search from the origin.

    Each leaf is summarised as ``(in_half_space, is_bridge, surface_sites,
    surface_edges, span)``.  ``half`` and ``bridge`` prune the search to
    S_N^+ or to walks whose last coordinate stays strictly above 0 (the
    bridge end-maximum test is applied at the leaf).
    """

    def __init__(self, job: WalkJob, split: int = 0):
        self.job = job
        self.codec = Codec(job.d, job.n + 1)
        self.strides = self.codec.strides()
        self.steps = [s for st in self.strides for s in (st, -st)]
        self.s1 = self.strides[0]
        self.org = self.codec.origin
        self.split = split
        self.events: list = []
        self.summary: Counter = Counter()
        self.objects: list = []
        self.seen = [0]

    def run(self):
        self._rec([self.org], {self.org}, 0, 0, 1, 0, 0)

    def resume(self, snap):
        path, x1lo, x1hi, ks, ke, xdmax = snap
        self._rec(list(path), set(path), x1lo, x1hi, ks, ke, xdmax)

    def _leaf(self, path, x1lo, x1hi, ks, ke, xdmax):
        _budget_check(self.seen, self.job.limit)
        bridge = self._is_bridge(path, xdmax)
        if self.job.bridge and not bridge:
            return
        rec = (x1lo >= 0, bridge, ks, ke, x1hi - x1lo + 1)
        if self.split:
            self.events.append(("leaf", rec if self.job.want == "summary" else tuple(path)))
        elif self.job.want == "summary":
            self.summary[rec] += 1
        else:
            self.objects.append(tuple(path))

    def _xd(self, k):
        w = self.codec.width
        return k % w - self.codec.bias

    def _is_bridge(self, path, xdmax):
        if len(path) < 2:
            return False
        xd0 = self._xd(path[0])
        if xdmax <= xd0:
            return False
        # strictly above start after step 0, and maximal at the end
        if self._xd(path[-1]) != xdmax:
            return False
        return all(self._xd(p) > xd0 for p in path[1:])

    def _rec(self, path, occupied, x1lo, x1hi, ks, ke, xdmax):
        n = self.job.n
        if len(path) - 1 == n:
            self._leaf(path, x1lo, x1hi, ks, ke, xdmax)
            return
        if self.split and len(path) - 1 == self.split:
            self.events.append(("task", (tuple(path), x1lo, x1hi, ks, ke, xdmax)))
            return
        here = path[-1]
        s1 = self.s1
        bias = self.codec.bias
        here_x1 = here // s1 - bias
        for step in self.steps:
            nxt = here + step
            if nxt in occupied:
                continue
            x1 = nxt // s1 - bias
            if self.job.half and x1 < 0:
                continue
            xd = self._xd(nxt)
            if self.job.bridge and xd <= 0:
                continue
            on = x1 == 0
            path.append(nxt)
            occupied.add(nxt)
            self._rec(
                path, occupied,
                min(x1lo, x1), max(x1hi, x1),
                ks + on, ke + (on and here_x1 == 0),
                max(xdmax, xd),
            )
            occupied.discard(nxt)
            path.pop()


def _walk_task(job: WalkJob, snap):
    s = _WalkSearch(job)
    s.resume(snap)
    return s.summary if job.want == "summary" else s.objects


def _run_walks(job: WalkJob, workers: int):
    if workers <= 1 or job.n < PARALLEL_MIN_SIZE:
        s = _WalkSearch(job)
        s.run()
        return s.summary if job.want == "summary" else s.objects
    head = _WalkSearch(job, split=SPLIT_DEPTH)
    head.run()
    tasks = [ev[1] for ev in head.events if ev[0] == "task"]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        results = iter(list(pool.map(_walk_task, [job] * len(tasks), tasks)))
    if job.want == "summary":
        total: Counter = Counter()
        for kind, payload in head.events:
            if kind == "leaf":
                total[payload] += 1
            else:
                total.update(next(results))
        return total
    out = []
    for kind, payload in head.events:
        if kind == "leaf":
            out.append(payload)
        else:
            out.extend(next(results))
    return out


def walk_summary(d: int, n: int, half: bool = False, bridge: bool = False,
                 workers: int = 1, limit: int | None = None) -> Counter:
    """Counter of ``(in_half, is_bridge, surface_sites, surface_edges, span)``."""
    return _run_walks(WalkJob(d, n, "summary", half, bridge, limit), workers)


def walks(d: int, n: int, half: bool = False, bridge: bool = False,
          workers: int = 1, limit: int | None = None) -> list:
    codec = Codec(d, n + 1)
    raw = _run_walks(WalkJob(d, n, "objects", half, bridge, limit), workers)
    return [Walk(tuple(codec.decode(k) for k in path)) for path in raw]
