"""Rosenbluth and PERM sampling of self-avoiding walks and bridges.

Walks grow one step at a time onto a uniformly chosen free neighbour and
carry the Rosenbluth weight (product of free-neighbour counts), so the mean
weight at length n is an unbiased estimate of the number of n-step walks.

PERM runs the same growth on a population.  After the weight at length n has
been recorded, heavy walks are split into two copies of half the weight and
light walks are killed with probability ``1 - prune_keep`` (survivors get
their weight divided by ``prune_keep``).  Both moves keep the expected total
weight unchanged.

Independent batches of ``size / batches`` starting walks each have their own
random stream; standard errors are batch means.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from ..enumeration.ensembles import span_threshold
from ..errors import InvalidConfiguration, ResourceLimitExceeded
from ..lattice import check_dim
from .rng import check_seed, stream

ROSENBLUTH = "rosenbluth"
PERM = "perm"
TREE_MCMC = "tree-regraft-mcmc"
METHODS = (ROSENBLUTH, PERM)


@dataclass(frozen=True)
class PermConfig:
    enrich: float = 2.0  # split when W > enrich * mean
    prune: float = 0.5  # prune when W < prune * mean
    prune_keep: float = 0.5
    batches: int = 40
    max_population: int = 5_000_000


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float
    n_eff: float

    def __post_init__(self):
        for name in ("value", "stderr", "n_eff"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def within(self, exact: float, k: float = 3.0) -> bool:
        return abs(self.value - exact) <= k * self.stderr + 1e-12 * max(1.0, abs(exact))


@dataclass
class SampleRun:
    model: str
    d: int
    n: int
    method: str
    seed: int
    size: int
    estimates: dict  # name -> Estimate at length n
    by_length: dict = field(default_factory=dict)  # name -> tuple of Estimate for lengths 1..n
    diagnostics: dict = field(default_factory=dict)
    histogram: dict | None = None  # class visit counts (tree chain only)

    def rows(self) -> list:
        out = []
        for name, est in self.estimates.items():
            out.append({
                "model": self.model, "d": self.d, "N": self.n, "method": self.method,
                "seed": self.seed, "quantity": name, "estimate": est.value,
                "stderr": est.stderr, "n_eff": est.n_eff,
            })
        return out

    def to_json(self) -> dict:
        d = asdict(self)
        d["estimates"] = {k: asdict(v) for k, v in self.estimates.items()}
        d["by_length"] = {k: [asdict(e) for e in v] for k, v in self.by_length.items()}
        if self.histogram is not None:
            d["histogram"] = [[[list(a), list(b)] for a, b in k] + [c] for k, c in sorted(self.histogram.items())]
        return d


def _mean_estimate(per_batch: np.ndarray, n_eff: float) -> Estimate:
    b = len(per_batch)
    value = float(per_batch.mean())
    se = float(per_batch.std(ddof=1) / math.sqrt(b)) if b > 1 else math.nan
    return Estimate(value, se, n_eff)


def _ratio_estimate(num: np.ndarray, den: np.ndarray, n_eff: float) -> Estimate:
    """Ratio of batch sums with a delta-method batch-means error."""
    b = len(num)
    if den.sum() == 0:
        return Estimate(math.nan, math.nan, 0.0)
    r = float(num.sum() / den.sum())
    resid = num - r * den
    se = float(math.sqrt((resid ** 2).sum() / (b * (b - 1))) / den.mean()) if b > 1 else math.nan
    return Estimate(r, se, n_eff)


def _kish(s1: float, s2: float) -> float:
    return s1 * s1 / s2 if s2 > 0 else 0.0


class _Grower:
    def __init__(self, d: int, n: int, bridge: bool, perm: bool, cfg: PermConfig):
        self.d, self.n, self.bridge, self.perm, self.cfg = d, n, bridge, perm, cfg
        base = n + 1
        width = 2 * base + 1
        strides = [width ** (d - 1 - i) for i in range(d)]
        self.origin_key = sum(base * s for s in strides)
        self.steps = np.array([sgn * s for s in strides for sgn in (1, -1)], dtype=np.int64)
        self.dx1 = np.array([sgn if i == 0 else 0 for i in range(d) for sgn in (1, -1)])
        self.dxd = np.array([sgn if i == d - 1 else 0 for i in range(d) for sgn in (1, -1)])
        self.thr = [None] + [span_threshold(m) for m in range(1, n + 1)]

    def run(self, m0: int, gen: np.random.Generator) -> dict:
        n = self.n
        path = np.empty((m0, n + 1), dtype=np.int64)
        path[:, 0] = self.origin_key
        w = np.ones(m0)
        x1 = np.zeros(m0, dtype=np.int64)
        x1lo = np.zeros(m0, dtype=np.int64)
        x1hi = np.zeros(m0, dtype=np.int64)
        xd = np.zeros(m0, dtype=np.int64)
        xdhi = np.zeros(m0, dtype=np.int64)
        sums = {k: np.zeros(n + 1) for k in ("w", "w2", "small", "bridge", "bridge2", "bridge_small")}
        peak = m0
        for i in range(1, n + 1):
            end = path[:, i - 1]
            cand = end[:, None] + self.steps[None, :]
            free = ~(cand[:, :, None] == path[:, None, :i]).any(axis=2)
            if self.bridge:
                free &= (xd[:, None] + self.dxd[None, :]) > 0
            a = free.sum(axis=1)
            live = a > 0
            if not live.all():
                path, w, x1, x1lo, x1hi, xd, xdhi, free, a = (
                    v[live] for v in (path, w, x1, x1lo, x1hi, xd, xdhi, free, a))
            if len(w) == 0:
                break
            k = np.minimum((gen.random(len(w)) * a).astype(np.int64), a - 1)
            pick = (np.cumsum(free, axis=1) > k[:, None]).argmax(axis=1)
            path[:, i] = path[:, i - 1] + self.steps[pick]
            w = w * a
            x1 = x1 + self.dx1[pick]
            x1lo = np.minimum(x1lo, x1)
            x1hi = np.maximum(x1hi, x1)
            xd = xd + self.dxd[pick]
            xdhi = np.maximum(xdhi, xd)

            thr = self.thr[i]
            small = np.ones(len(w), dtype=bool) if thr is None else (x1hi - x1lo + 1) <= thr
            is_bridge = (xd == xdhi) & (xd > 0)
            if not self.bridge:
                is_bridge &= _strict_above(path[:, : i + 1], self.d, self.n)
            wb = w * is_bridge
            sums["w"][i] = w.sum()
            sums["w2"][i] = (w * w).sum()
            sums["small"][i] = (w * small).sum()
            sums["bridge"][i] = wb.sum()
            sums["bridge2"][i] = (wb * wb).sum()
            sums["bridge_small"][i] = (wb * small).sum()

            if self.perm and i < n:
                mean = w.mean()
                heavy = w > self.cfg.enrich * mean
                light = w < self.cfg.prune * mean
                keep = ~light | (gen.random(len(w)) < self.cfg.prune_keep)
                w = np.where(light, w / self.cfg.prune_keep, w)
                w = np.where(heavy, w / 2, w)
                reps = np.where(keep, 1 + heavy, 0)
                path, w, x1, x1lo, x1hi, xd, xdhi = (
                    np.repeat(v, reps, axis=0) for v in (path, w, x1, x1lo, x1hi, xd, xdhi))
                peak = max(peak, len(w))
                if len(w) > self.cfg.max_population:
                    raise ResourceLimitExceeded(
                        f"PERM population {len(w)} exceeds {self.cfg.max_population}",
                        partial=i)
        sums["peak"] = peak
        return sums


def _strict_above(path_keys: np.ndarray, d: int, n: int) -> np.ndarray:
    """x_d(i) > x_d(0) for all i >= 1, from packed keys (unconstrained growth only)."""
    base = n + 1
    width = 2 * base + 1
    xd = path_keys % width - base
    return (xd[:, 1:] > 0).all(axis=1)


def sample_walks(d: int, n: int, method: str = PERM, seed: int = 0, size: int = 100_000,
                 bridge: bool = False, config: PermConfig | None = None,
                 threads: int = 1) -> SampleRun:
    """Estimate walk (or bridge) counts and span fractions for lengths 1..n.

    With ``bridge=True`` growth is confined to ``x_d > 0`` after the first
    step and the end-at-maximum condition is applied at each length; the
    estimates are then ``b_n`` and the fraction of bridges with span at most
    ``floor(n / ln^2 n)``.  Otherwise ``c_n`` and the same fraction over all
    walks are estimated.
    """
    check_dim(d)
    check_seed(seed)
    if n < 1:
        raise InvalidConfiguration("N must be >= 1")
    if method not in METHODS:
        raise InvalidConfiguration(f"unknown method {method!r}")
    cfg = config or PermConfig()
    if size < 2 * cfg.batches:
        raise InvalidConfiguration(f"size must be at least {2 * cfg.batches}")
    m0 = size // cfg.batches
    grower = _Grower(d, n, bridge, method == PERM, cfg)

    def one(b):
        return grower.run(m0, stream(seed, b))

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(one, range(cfg.batches)))
    else:
        results = [one(b) for b in range(cfg.batches)]

    def stack(key):
        return np.array([r[key] for r in results])  # (batches, n+1)

    w, w2 = stack("w"), stack("w2")
    small = stack("small")
    br, br2, br_small = stack("bridge"), stack("bridge2"), stack("bridge_small")
    counts, fracs, bcounts = [], [], []
    for i in range(1, n + 1):
        ne = _kish(w[:, i].sum(), w2[:, i].sum())
        nb = _kish(br[:, i].sum(), br2[:, i].sum())
        counts.append(_mean_estimate(w[:, i] / m0, ne))
        bcounts.append(_mean_estimate(br[:, i] / m0, nb))
        if bridge:
            fracs.append(_ratio_estimate(br_small[:, i], br[:, i], nb))
        else:
            fracs.append(_ratio_estimate(small[:, i], w[:, i], ne))
    total_name = "b" if bridge else "c"
    by_length = {total_name: tuple(bcounts if bridge else counts), "span_fraction": tuple(fracs)}
    if not bridge:
        by_length["b"] = tuple(bcounts)
    estimates = {k: v[-1] for k, v in by_length.items()}
    diag = {
        "batches": cfg.batches,
        "walks_per_batch": m0,
        "peak_population": int(max(r["peak"] for r in results)),
        "zero_weight": bool(w[:, n].sum() == 0),
        "config": asdict(cfg),
    }
    if bridge:
        grown = w[:, n].sum()
        diag["bridge_acceptance"] = float(br[:, n].sum() / grown) if grown else 0.0
    return SampleRun("bridge" if bridge else "walk", d, n, method, int(seed), size,
                     estimates, by_length, diag)
