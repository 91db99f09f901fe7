from fractions import Fraction

import numpy as np
import pytest

from latpoly.enumeration import BRIDGE, TRANSLATION_CLASSES, EnsembleSpec, span_stats
from latpoly.errors import InvalidConfiguration, ResourceLimitExceeded
from latpoly.sampling import (
    PERM,
    ROSENBLUTH,
    PermConfig,
    chain_diagnostics,
    exact_transition_matrix,
    sample_trees_mcmc,
    sample_walks,
    span_condition_report,
    stream,
    total_variation_from_uniform,
    wilson_interval,
)
from latpoly.sampling.trees import RegraftChain, class_key

WALKS_2D = [4, 12, 36, 100, 284, 780, 2172, 5916]


def test_streams_are_keyed():
    a = stream(5, 0).random(4)
    assert np.array_equal(a, stream(5, 0).random(4))
    assert not np.array_equal(a, stream(5, 1).random(4))
    with pytest.raises(InvalidConfiguration):
        stream(-1, 0)


@pytest.mark.parametrize("method", [ROSENBLUTH, PERM])
def test_one_step_is_exact(method):
    run = sample_walks(2, 1, method, seed=3, size=400)
    est = run.estimates["c"]
    assert est.value == 4.0 and est.stderr == 0.0


def test_one_step_bridge():
    run = sample_walks(2, 1, PERM, seed=3, size=400, bridge=True)
    assert run.estimates["b"].value == 1.0
    assert run.estimates["span_fraction"].value == 1.0


@pytest.mark.parametrize("method", [ROSENBLUTH, PERM])
def test_counts_within_error(method):
    run = sample_walks(2, 8, method, seed=11, size=40_000)
    for exact, est in zip(WALKS_2D, run.by_length["c"]):
        assert est.within(exact, 4.0), (exact, est)


def test_bridge_fraction_within_error():
    run = sample_walks(2, 6, PERM, seed=2, size=80_000, bridge=True)
    for n in range(2, 7):
        f = span_stats(EnsembleSpec("walk", 2, n, BRIDGE)).fraction
        assert run.by_length["span_fraction"][n - 1].within(float(f), 4.0)
    assert 0 < run.diagnostics["bridge_acceptance"] <= 1


def test_reproducible_and_thread_independent():
    a = sample_walks(2, 7, PERM, seed=9, size=8_000)
    b = sample_walks(2, 7, PERM, seed=9, size=8_000, threads=3)
    assert a.to_json() == b.to_json()
    c = sample_walks(2, 7, PERM, seed=10, size=8_000)
    assert c.estimates["c"].value != a.estimates["c"].value


def test_population_limit():
    cfg = PermConfig(max_population=10, batches=2)
    with pytest.raises(ResourceLimitExceeded):
        sample_walks(2, 8, PERM, seed=1, size=100, config=cfg)


def test_sampler_validation():
    with pytest.raises(InvalidConfiguration):
        sample_walks(2, 0, PERM)
    with pytest.raises(InvalidConfiguration):
        sample_walks(2, 4, "metropolis")
    with pytest.raises(InvalidConfiguration):
        sample_trees_mcmc(2, 1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_detailed_balance_exact(n):
    keys, P = exact_transition_matrix(2, n)
    assert all(sum(row) == 1 for row in P)
    for i in range(len(P)):
        for j in range(len(P)):
            assert P[i][j] == P[j][i]
    assert isinstance(P[0][0], Fraction)


def test_chain_diagnostics_n4():
    diag = chain_diagnostics(2, 4)
    assert diag["classes"] == 22 and diag["uniform_stationary"] and diag["rows_sum_to_one"]


def test_chain_stays_a_tree():
    chain = RegraftChain(2, 6, stream(1, 0))
    for _ in range(500):
        chain.step()
        t = chain.tree()
        assert len(t) == 6 and min(t.sites) == (0, 0)


def test_tree_chain_n2():
    run = sample_trees_mcmc(2, 2, seed=1, length=4000)
    assert run.diagnostics["visited_classes"] == 2 == run.diagnostics["class_count"]
    assert run.estimates["span_fraction"].value == 1.0


def test_tree_chain_uniform_small():
    run = sample_trees_mcmc(2, 3, seed=4, length=30_000)
    assert not run.diagnostics["reducibility_suspected"]
    assert total_variation_from_uniform(run.histogram, 6) < 0.03


def test_tree_chain_span_fraction():
    run = sample_trees_mcmc(2, 5, seed=8, length=60_000)
    exact = float(span_stats(EnsembleSpec("tree", 2, 5, TRANSLATION_CLASSES)).fraction)
    assert run.estimates["span_fraction"].within(exact, 4.0)


def test_class_key_translation_invariant():
    e1 = [((0, 0), (0, 1)), ((0, 1), (1, 1))]
    e2 = [((5, 3), (5, 4)), ((5, 4), (6, 4))]
    assert class_key(e1) == class_key(e2)


def test_wilson():
    lo, hi = wilson_interval(0.5, 100)
    assert lo < 0.5 < hi and hi - lo < 0.2
    assert wilson_interval(0.0, 0) == (0.0, 1.0)
    lo, hi = wilson_interval(1.0, 50)
    assert hi == 1.0 and lo < 1.0


def test_span_report_exact_rows():
    rep = span_condition_report("tree", 2, [1, 2, 5, 7], [0.0, 1.0])
    rows = {r["N"]: r for r in rep["rows"]}
    assert all(r["source"] == "exact" for r in rows.values())
    assert rows[5]["exact_fraction"] == "1/87"
    assert rows[1]["holds[0.0]"] and rows[2]["holds[0.0]"]
    assert not rows[5]["holds[0.0]"]  # f_N >= 1 needs every span under the threshold


def test_span_report_sampled_row():
    rep = span_condition_report("walk", 2, [9], [0.5], exact_max=8, size=20_000, seed=1)
    row = rep["rows"][0]
    assert row["source"] == PERM and row["lower"] <= row["f_N"] <= row["upper"]
