"""Ensemble descriptions and exact counts, profiles and span statistics.

All tree/animal quantities are derived from one histogram of plane
signatures over translation classes (see ``engine.polymer_class_summary``):
a class whose hyperplanes ``x_1 = 0, 1, ...`` hold ``(n_0, n_1, ...)``
sites has N translates containing the origin, ``n_0`` translates in the
half-space containing the origin (each with ``n_0`` surface sites), and
one translate in the lex-star set per occupied hyperplane.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from ..errors import InvalidConfiguration
from ..lattice import ANIMAL, TREE, Polymer, check_dim, sub, translate
from . import engine

WALK = "walk"
MODELS = (TREE, ANIMAL, WALK)

TRANSLATION_CLASSES = "translation-classes"
CONTAINS_ORIGIN = "contains-origin"
HALF_SPACE = "half-space"
LEX_STAR = "lex-star"
BRIDGE = "bridge"
CONSTRAINTS = (TRANSLATION_CLASSES, CONTAINS_ORIGIN, HALF_SPACE, LEX_STAR, BRIDGE)
CONVENTIONS = ("site", "subgraph")


@dataclass(frozen=True)
class EnsembleSpec:
    model: str
    d: int
    n: int
    constraint: str = CONTAINS_ORIGIN
    convention: str = "site"

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidConfiguration(f"unknown model {self.model!r}")
        check_dim(self.d)
        if self.n < 1:
            raise InvalidConfiguration("ensemble size must be >= 1")
        if self.constraint not in CONSTRAINTS:
            raise InvalidConfiguration(f"unknown constraint {self.constraint!r}")
        if self.constraint == BRIDGE and self.model != WALK:
            raise InvalidConfiguration("bridge constraint applies to walks only")
        if self.constraint == LEX_STAR and self.model == WALK:
            raise InvalidConfiguration("lex-star constraint applies to trees and animals only")
        if self.convention not in CONVENTIONS:
            raise InvalidConfiguration(f"unknown animal convention {self.convention!r}")

    @property
    def is_walk(self) -> bool:
        return self.model == WALK


@dataclass(frozen=True)
class SurfaceProfile:
    """``counts[k]`` = number of ensemble members with exactly k contacts."""

    n: int
    counts: tuple
    weighting: str = "sites"

    def __getitem__(self, k: int) -> int:
        return self.counts[k] if 0 <= k < len(self.counts) else 0

    @property
    def total(self) -> int:
        return sum(self.counts)

    def items(self):
        return [(k, c) for k, c in enumerate(self.counts) if c]


@dataclass(frozen=True)
class SpanStats:
    n: int
    histogram: dict
    threshold: int | None  # None: no finite threshold (n = 1)
    fraction: Fraction = field(compare=True)

    @property
    def total(self) -> int:
        return sum(self.histogram.values())


def span_threshold(n: int) -> int | None:
    """floor(N / ln^2 N); None for N = 1 where ln N = 0 and every span qualifies."""
    if n < 2:
        return None
    return math.floor(n / math.log(n) ** 2)


def log2_contacts(n: int) -> float:
    """ln^2 n, the contact target used by the small-span constructions."""
    return math.log(n) ** 2 if n >= 1 else 0.0


# --------------------------------------------------------------------------
# raw summaries, memoised per process; results do not depend on ``workers``

_cache: dict = {}


def class_summary(model: str, d: int, n: int, convention: str = "site", workers: int = 1) -> Counter:
    key = (model, d, n, convention if model == ANIMAL else "site")
    if key not in _cache:
        _cache[key] = engine.polymer_class_summary(model, d, n, key[3], workers=workers)
    return _cache[key]


def walk_summary(d: int, n: int, workers: int = 1) -> Counter:
    key = (WALK, d, n)
    if key not in _cache:
        _cache[key] = engine.walk_summary(d, n, workers=workers)
    return _cache[key]


def clear_cache() -> None:
    _cache.clear()


def _polymer_summary(spec: EnsembleSpec, workers: int) -> Counter:
    return class_summary(spec.model, spec.d, spec.n, spec.convention, workers)


def _walk_filter(constraint: str):
    if constraint == HALF_SPACE:
        return lambda rec: rec[0]
    if constraint == BRIDGE:
        return lambda rec: rec[1]
    return lambda rec: True


def _class_weight(constraint: str, n: int):
    """Number of ensemble members contributed by one class with signature ``sig``."""
    if constraint == TRANSLATION_CLASSES:
        return lambda sig: 1
    if constraint == CONTAINS_ORIGIN:
        return lambda sig: n
    if constraint == HALF_SPACE:
        return lambda sig: sig[0]
    if constraint == LEX_STAR:
        return lambda sig: len(sig)
    raise InvalidConfiguration(constraint)


# --------------------------------------------------------------------------
# public operations


def count(spec: EnsembleSpec, workers: int = 1) -> int:
    """Exact cardinality of the ensemble."""
    if spec.is_walk:
        keep = _walk_filter(spec.constraint)
        return sum(c for rec, c in walk_summary(spec.d, spec.n, workers).items() if keep(rec))
    w = _class_weight(spec.constraint, spec.n)
    return sum(w(sig) * c for sig, c in _polymer_summary(spec, workers).items())


def enumerate_ensemble(spec: EnsembleSpec, workers: int = 1, limit: int | None = None) -> Iterator:
    """Yield every member of the ensemble once, in a fixed canonical order."""
    if spec.is_walk:
        half = spec.constraint == HALF_SPACE
        bridge = spec.constraint == BRIDGE
        yield from engine.walks(spec.d, spec.n, half=half, bridge=bridge, workers=workers, limit=limit)
        return
    classes = engine.polymer_classes(spec.model, spec.d, spec.n, spec.convention, workers=workers, limit=limit)
    for cls in classes:
        yield from _members(cls, spec.constraint)


def _members(cls: Polymer, constraint: str) -> Iterator[Polymer]:
    zero = (0,) * cls.d
    if constraint == TRANSLATION_CLASSES:
        yield cls
        return
    if constraint == CONTAINS_ORIGIN:
        anchors = sorted(cls.sites)
    elif constraint == HALF_SPACE:
        lo = min(x[0] for x in cls.sites)
        anchors = sorted(x for x in cls.sites if x[0] == lo)
    else:  # lex-star: lex-smallest site of each occupied hyperplane
        planes: dict = {}
        for x in cls.sites:
            if x[0] not in planes or x < planes[x[0]]:
                planes[x[0]] = x
        anchors = [planes[j] for j in sorted(planes)]
    for a in anchors:
        yield translate(cls, sub(zero, a))


def surface_profile(spec: EnsembleSpec, weighting: str = "sites", workers: int = 1) -> SurfaceProfile:
    """Contact histogram over a half-space or contains-origin ensemble.

    ``weighting="edges"`` (walks only) counts surface edges instead of sites.
    """
    if spec.constraint not in (HALF_SPACE, CONTAINS_ORIGIN):
        raise InvalidConfiguration("surface profiles need the half-space or contains-origin ensemble")
    if weighting not in ("sites", "edges"):
        raise InvalidConfiguration(f"unknown weighting {weighting!r}")
    hist: Counter = Counter()
    if spec.is_walk:
        keep = _walk_filter(spec.constraint)
        idx = 2 if weighting == "sites" else 3
        for rec, c in walk_summary(spec.d, spec.n, workers).items():
            if keep(rec):
                hist[rec[idx]] += c
        top = spec.n + 1
    else:
        if weighting != "sites":
            raise InvalidConfiguration("edge weighting is defined for walks only")
        for sig, c in _polymer_summary(spec, workers).items():
            if spec.constraint == HALF_SPACE:
                hist[sig[0]] += sig[0] * c
            else:
                for nj in sig:
                    hist[nj] += nj * c
        top = spec.n
    return SurfaceProfile(spec.n, tuple(hist.get(k, 0) for k in range(top + 1)), weighting)


def span_stats(spec: EnsembleSpec, workers: int = 1) -> SpanStats:
    hist: Counter = Counter()
    if spec.is_walk:
        keep = _walk_filter(spec.constraint)
        for rec, c in walk_summary(spec.d, spec.n, workers).items():
            if keep(rec):
                hist[rec[4]] += c
    else:
        w = _class_weight(spec.constraint, spec.n)
        for sig, c in _polymer_summary(spec, workers).items():
            hist[len(sig)] += w(sig) * c
    thr = span_threshold(spec.n)
    total = sum(hist.values())
    small = total if thr is None else sum(c for s, c in hist.items() if s <= thr)
    return SpanStats(spec.n, dict(sorted(hist.items())), thr, Fraction(small, total))


def count_single_contact(n: int, d: int, model: str = TREE, convention: str = "site") -> int:
    """Number of half-space configurations touching the surface only at the origin."""
    if n < 2:
        raise InvalidConfiguration("single-contact count needs N >= 2")
    return surface_profile(EnsembleSpec(model, d, n, HALF_SPACE, convention))[1]


@dataclass
class SupermultReport:
    model: str
    d: int
    limit: int
    counts: dict
    rows: list  # (N, M, lhs, rhs, ok)

    @property
    def passed(self) -> bool:
        return all(r[-1] for r in self.rows)


def supermultiplicativity_check(model: str, d: int, limit: int, convention: str = "site",
                                workers: int = 1) -> SupermultReport:
    """t_N t_M <= t_{N+M} for trees/animals; c_{N+M} <= c_N c_M for walks."""
    if model == WALK:
        counts = {n: count(EnsembleSpec(WALK, d, n), workers) for n in range(1, limit + 1)}
    else:
        counts = {
            n: count(EnsembleSpec(model, d, n, TRANSLATION_CLASSES, convention), workers)
            for n in range(1, limit + 1)
        }
    rows = []
    for total in range(2, limit + 1):
        for a in range(1, total):
            b = total - a
            if model == WALK:
                lhs, rhs = counts[total], counts[a] * counts[b]
            else:
                lhs, rhs = counts[a] * counts[b], counts[total]
            rows.append((a, b, lhs, rhs, lhs <= rhs))
    return SupermultReport(model, d, limit, counts, rows)


def ensemble_cardinalities(model: str, d: int, n: int, convention: str = "site") -> dict:
    """Counts of every applicable ensemble at one size, for inclusion checks."""
    cons = (CONTAINS_ORIGIN, HALF_SPACE, BRIDGE) if model == WALK else (
        TRANSLATION_CLASSES, HALF_SPACE, CONTAINS_ORIGIN, LEX_STAR)
    return {c: count(EnsembleSpec(model, d, n, c, convention)) for c in cons}
