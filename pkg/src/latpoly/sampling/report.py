"""Evidence tables for the small-span fraction f_N against N^{-delta}."""

from __future__ import annotations

import math

from ..enumeration.ensembles import BRIDGE, TRANSLATION_CLASSES, WALK, EnsembleSpec, span_stats
from ..errors import InvalidConfiguration
from ..lattice import ANIMAL, TREE
from .trees import sample_trees_mcmc
from .walks import PERM, sample_walks

EXACT_LIMITS = {TREE: 9, ANIMAL: 8, WALK: 12}  # d = 2 defaults


def wilson_interval(p: float, n: float, z: float = 1.96) -> tuple:
    """Wilson score interval for a proportion from n (effective) trials."""
    if n <= 0 or math.isnan(p):
        return (0.0, 1.0)
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, centre - half), min(1.0, centre + half))


def span_condition_report(model: str, d: int, n_list, delta_grid, exact_max: int | None = None,
                          seed: int = 0, size: int = 200_000, convention: str = "site",
                          workers: int = 1) -> dict:
    """Table of f_N (fraction with span <= floor(N / ln^2 N)) next to N^{-delta}.

    Trees and animals use translation classes, walks use bridges.  Rows with
    N up to ``exact_max`` come from enumeration (source ``exact``); larger N
    are sampled (trees by the regrafting chain, bridges by PERM) and carry a
    Wilson interval built on the effective sample size.
    """
    if model not in EXACT_LIMITS:
        raise InvalidConfiguration(f"unknown model {model!r}")
    if exact_max is None:
        exact_max = EXACT_LIMITS[model] if d == 2 else 5
    rows = []
    for n in sorted(n_list):
        if n <= exact_max:
            cons = BRIDGE if model == WALK else TRANSLATION_CLASSES
            st = span_stats(EnsembleSpec(model, d, n, cons, convention), workers=workers)
            f = float(st.fraction)
            row = {"N": n, "f_N": f, "exact_fraction": str(st.fraction), "lower": f, "upper": f,
                   "stderr": 0.0, "source": "exact", "rigor": "exact"}
        else:
            if model == ANIMAL:
                raise InvalidConfiguration("no sampler for animals; lower N or raise exact_max")
            if model == TREE:
                run = sample_trees_mcmc(d, n, seed, size)
            else:
                run = sample_walks(d, n, PERM, seed, size, bridge=True, threads=workers)
            est = run.estimates["span_fraction"]
            lo, hi = (float(v) for v in wilson_interval(est.value, est.n_eff))
            row = {"N": n, "f_N": est.value, "exact_fraction": None, "lower": lo, "upper": hi,
                   "stderr": est.stderr, "source": run.method, "rigor": "estimate"}
        for delta in delta_grid:
            bound = n ** (-float(delta))
            row[f"N^-{delta}"] = bound
            row[f"holds[{delta}]"] = row["f_N"] >= bound
        rows.append(row)
    return {"model": model, "d": d, "deltas": [float(x) for x in delta_grid], "rows": rows}
