"""Regrafting Markov chain on translation classes of lattice trees.

One move: pick a tree edge uniformly, cut it, pick one of the two pieces
with probability 1/2 as the moving piece S (the other is R), and reattach S
by a new edge ``x -> x + e`` with ``x`` in R, ``e`` a unit vector and some
site ``y`` of S landing on ``x + e``.  The triple ``(x, e, y)`` is uniform
over the feasible set F(R, S), those for which the shifted S misses R.

|F(R, S)| does not change when S is translated, so the reverse move has the
same probability and the Metropolis ratio is identically 1: the chain is
symmetric and the uniform distribution on classes is stationary.
"""

from __future__ import annotations

import math
from collections import Counter
from fractions import Fraction

import numpy as np

from ..enumeration.engine import polymer_classes
from ..enumeration.ensembles import span_threshold
from ..errors import InvalidConfiguration
from ..lattice import TREE, Polymer, check_dim, make_edge
from .rng import Uniforms, check_seed, stream
from .walks import TREE_MCMC, Estimate, SampleRun, _mean_estimate

EXACT_CLASS_LIMIT = 8  # reducibility check compares against t_N up to here


def _dirs(d: int) -> list:
    out = []
    for i in range(d):
        for s in (1, -1):
            out.append(tuple(s if j == i else 0 for j in range(d)))
    return out


def class_key(edges) -> tuple:
    """Translation-invariant key: edges shifted so the lex-smallest site is the origin."""
    lo = min(min(e) for e in edges)
    return tuple(sorted(
        (tuple(a - b for a, b in zip(e[0], lo)), tuple(a - b for a, b in zip(e[1], lo)))
        for e in edges))


def _split(edges: list, cut) -> tuple:
    adj: dict = {}
    for e in edges:
        if e == cut:
            continue
        a, b = e
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    seen = {cut[1]}
    todo = [cut[1]]
    while todo:
        x = todo.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                todo.append(y)
    rest = {x for e in edges for x in e} - seen
    rest.add(cut[0])
    return rest, seen


def feasible_moves(r_sites, s_sites, dirs) -> list:
    """All (x, e, y) reattaching S to R without overlap."""
    r_set = set(r_sites)
    out = []
    for x in sorted(r_sites):
        for e in dirs:
            tgt = tuple(a + b for a, b in zip(x, e))
            if tgt in r_set:
                continue
            for y in sorted(s_sites):
                shift = tuple(a - b for a, b in zip(tgt, y))
                if all(tuple(a + b for a, b in zip(s, shift)) not in r_set for s in s_sites):
                    out.append((x, e, y))
    return out


def _apply(edges, cut, r_sites, s_sites, move) -> list:
    x, e, y = move
    tgt = tuple(a + b for a, b in zip(x, e))
    shift = tuple(a - b for a, b in zip(tgt, y))

    def mv(p):
        return tuple(a + b for a, b in zip(p, shift))

    new = []
    for ed in edges:
        if ed == cut:
            continue
        if ed[0] in s_sites:
            new.append(make_edge(mv(ed[0]), mv(ed[1])))
        else:
            new.append(ed)
    new.append(make_edge(x, tgt))
    return new


class RegraftChain:
    def __init__(self, d: int, n: int, gen: np.random.Generator):
        check_dim(d)
        if n < 2:
            raise InvalidConfiguration("the regrafting chain needs N >= 2")
        self.d, self.n = d, n
        self.dirs = _dirs(d)
        self.u = Uniforms(gen)
        line = [tuple(i if j == 0 else 0 for j in range(d)) for i in range(n)]
        self.edges = [make_edge(a, b) for a, b in zip(line, line[1:])]
        self.attempts = 0
        self.moves = 0

    def step(self) -> None:
        u = self.u
        cut = self.edges[u.index(len(self.edges))]
        left, right = _split(self.edges, cut)
        if u() < 0.5:
            r_sites, s_sites = left, right
        else:
            r_sites, s_sites = right, left
        r_list, s_list = sorted(r_sites), sorted(s_sites)
        nd = len(self.dirs)
        while True:
            self.attempts += 1
            x = r_list[u.index(len(r_list))]
            e = self.dirs[u.index(nd)]
            y = s_list[u.index(len(s_list))]
            tgt = tuple(a + b for a, b in zip(x, e))
            shift = tuple(a - b for a, b in zip(tgt, y))
            if all(tuple(a + b for a, b in zip(s, shift)) not in r_sites for s in s_list):
                break
        edges = _apply(self.edges, cut, r_sites, s_sites, (x, e, y))
        lo = min(min(ed) for ed in edges)
        if any(lo):
            edges = [(tuple(a - b for a, b in zip(p, lo)), tuple(a - b for a, b in zip(q, lo)))
                     for p, q in edges]
        self.edges = edges
        self.moves += 1

    def key(self) -> frozenset:
        """Class key; edges are kept translated so the lex-smallest site is the origin."""
        return frozenset(self.edges)

    def tree(self) -> Polymer:
        return Polymer.tree(self.edges, d=self.d)

    def span(self) -> int:
        xs = [x[0] for e in self.edges for x in e]
        return max(xs) - min(xs) + 1


def sample_trees_mcmc(d: int, n: int, seed: int = 0, length: int = 100_000,
                      burn_in: int | None = None, batches: int = 40) -> SampleRun:
    """Run the regrafting chain and estimate the span fraction of T̄_N.

    The run also records the visit histogram over classes.  For N up to
    ``EXACT_CLASS_LIMIT`` the number of visited classes is compared with the
    exact class count and a reducibility flag is raised if some were missed.
    """
    check_seed(seed)
    if length < batches:
        raise InvalidConfiguration("chain length must be at least the number of batches")
    chain = RegraftChain(d, n, stream(seed, 0))
    burn = length // 100 if burn_in is None else burn_in
    for _ in range(burn):
        chain.step()
    thr = span_threshold(n)
    hist: Counter = Counter()
    small = np.empty(length, dtype=bool)
    for t in range(length):
        chain.step()
        hist[chain.key()] += 1
        small[t] = thr is None or chain.span() <= thr
    per = length // batches
    batch_means = small[: per * batches].reshape(batches, per).mean(axis=1)
    frac = _mean_estimate(batch_means, 0.0)
    var1 = small.var()
    n_eff = var1 / frac.stderr ** 2 if frac.stderr > 0 else float(length)
    frac = Estimate(frac.value, frac.stderr, float(n_eff))
    diag = {
        "burn_in": burn,
        "acceptance_rate": 1.0,
        "mean_attempts": chain.attempts / chain.moves,
        "visited_classes": len(hist),
    }
    if n <= EXACT_CLASS_LIMIT:
        t_n = len(polymer_classes(TREE, d, n))
        diag["class_count"] = t_n
        diag["reducibility_suspected"] = len(hist) < t_n
    histogram = {class_key(k): c for k, c in hist.items()}
    return SampleRun("tree", d, n, TREE_MCMC, int(seed), length, {"span_fraction": frac}, {}, diag,
                     histogram=dict(sorted(histogram.items())))


def total_variation_from_uniform(hist: dict, n_classes: int) -> float:
    total = sum(hist.values())
    seen = sum(abs(c / total - 1 / n_classes) for c in hist.values())
    missing = (n_classes - len(hist)) / n_classes
    return 0.5 * (seen + missing)


def exact_transition_matrix(d: int, n: int) -> tuple:
    """Transition probabilities between all tree classes as exact fractions.

    Returns ``(keys, P)`` where ``P[i][j]`` is the probability of moving from
    class ``keys[i]`` to class ``keys[j]`` in one step.
    """
    classes = polymer_classes(TREE, d, n)
    keys = [class_key(sorted(t.edges)) for t in classes]
    index = {k: i for i, k in enumerate(keys)}
    dirs = _dirs(d)
    size = len(keys)
    P = [[Fraction(0)] * size for _ in range(size)]
    for i, t in enumerate(classes):
        edges = sorted(t.edges)
        for cut in edges:
            left, right = _split(edges, cut)
            for r_sites, s_sites in ((left, right), (right, left)):
                moves = feasible_moves(r_sites, s_sites, dirs)
                p = Fraction(1, (n - 1) * 2 * len(moves))
                for mv in moves:
                    j = index[class_key(_apply(edges, cut, r_sites, s_sites, mv))]
                    P[i][j] += p
    return keys, P


def stationary_vector(P) -> np.ndarray:
    """Left eigenvector of P for eigenvalue 1, normalised to sum 1."""
    A = np.array([[float(x) for x in row] for row in P])
    size = len(A)
    M = np.vstack([A.T - np.eye(size), np.ones(size)])
    rhs = np.zeros(size + 1)
    rhs[-1] = 1.0
    pi, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    return pi


def chain_diagnostics(d: int, n: int) -> dict:
    keys, P = exact_transition_matrix(d, n)
    rows_ok = all(sum(row) == 1 for row in P)
    symmetric = all(P[i][j] == P[j][i] for i in range(len(P)) for j in range(i))
    pi = stationary_vector(P)
    dev = float(np.abs(pi - 1 / len(P)).max())
    return {
        "classes": len(keys),
        "rows_sum_to_one": rows_ok,
        "symmetric": symmetric,
        "max_stationary_deviation": dev,
        "uniform_stationary": dev < 1e-10,
        "log10_min_positive": math.log10(min(float(x) for row in P for x in row if x)),
    }
