import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latpoly import adsorption as ads
from latpoly.adsorption import PartitionQuery
from latpoly.enumeration import (
    CONTAINS_ORIGIN,
    HALF_SPACE,
    TRANSLATION_CLASSES,
    EnsembleSpec,
    count,
    enumerate_ensemble,
)
from latpoly.errors import InvalidConfiguration
from latpoly.lattice import Walk, contact_number, surface_edges

COMBOS = [(m, s) for m in ("tree", "animal", "walk") for s in (ads.IMPENETRABLE, ads.PENETRABLE)]


def test_query_validation():
    with pytest.raises(InvalidConfiguration):
        PartitionQuery("tree", ads.IMPENETRABLE, 3, weighting=ads.EDGE_CONTACTS)
    with pytest.raises(InvalidConfiguration):
        PartitionQuery("tree", "sticky", 3)
    assert PartitionQuery("tree", ads.IMPENETRABLE, 3).ensemble().constraint == HALF_SPACE
    assert PartitionQuery("walk", ads.PENETRABLE, 3).ensemble().constraint == CONTAINS_ORIGIN


@pytest.mark.parametrize("beta", [-2.0, 0.0, 0.7, 3.0])
def test_single_site_tree(beta):
    v = ads.partition_function(PartitionQuery("tree", ads.IMPENETRABLE, 1, beta))
    assert v.z == pytest.approx(math.exp(beta), rel=1e-14)
    assert ads.finite_free_energy(PartitionQuery("tree", ads.IMPENETRABLE, 1, beta)) == pytest.approx(beta)


def test_two_site_tree_polynomial():
    v = ads.partition_function(PartitionQuery("tree", ads.IMPENETRABLE, 2, 0.3))
    assert v.coefficients == (0, 1, 2)
    assert v.z == pytest.approx(math.exp(0.3) + 2 * math.exp(0.6), rel=1e-14)


@pytest.mark.parametrize("model,surface", COMBOS)
def test_beta_zero_is_cardinality(model, surface):
    q = PartitionQuery(model, surface, 5, 0.0)
    n = count(q.ensemble())
    assert ads.partition_function(q).z == n
    assert ads.finite_free_energy(q) == pytest.approx(math.log(n) / 5, rel=1e-14)


def test_large_beta_is_stable():
    c = ads.coefficients(PartitionQuery("walk", ads.IMPENETRABLE, 8))
    lz = float(ads.log_partition(c, 500.0))
    assert math.isfinite(lz)
    assert lz == pytest.approx(500.0 * 9 + math.log(c[9]), rel=1e-12)


@pytest.mark.parametrize("model,surface", COMBOS)
def test_polynomial_matches_stream(model, surface):
    q = PartitionQuery(model, surface, 5)
    direct = [0] * 7
    for rho in enumerate_ensemble(q.ensemble()):
        direct[contact_number(rho)] += 1
    coeffs = ads.coefficients(q)
    assert tuple(direct[: len(coeffs)]) == coeffs and not any(direct[len(coeffs):])


def test_edge_weighting_matches_stream():
    q = PartitionQuery("walk", ads.IMPENETRABLE, 5, weighting=ads.EDGE_CONTACTS)
    direct = [0] * 7
    for w in enumerate_ensemble(q.ensemble()):
        direct[len(surface_edges(w))] += 1
    coeffs = ads.coefficients(q)
    assert tuple(direct[: len(coeffs)]) == coeffs


@pytest.mark.parametrize("model,surface", COMBOS)
def test_monotone_and_convex(model, surface):
    c = ads.coefficients(PartitionQuery(model, surface, 6))
    grid = np.linspace(-1, 1, 21)
    lz = ads.log_partition(c, grid)
    assert (np.diff(lz) >= -1e-12).all()
    assert (np.diff(lz, 2) >= -1e-12).all()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 10**6), min_size=2, max_size=9).filter(any),
       st.floats(-3, 3), st.floats(1e-3, 1.0))
def test_convexity_any_profile(coeffs, b, h):
    f = [float(ads.log_partition(coeffs, x)) for x in (b - h, b, b + h)]
    assert f[0] + f[2] - 2 * f[1] >= -1e-9


@pytest.mark.parametrize("model,surface", COMBOS)
def test_derivative_is_mean_contacts(model, surface):
    q = PartitionQuery(model, surface, 6)
    c = ads.coefficients(q)
    mean = sum(k * v for k, v in enumerate(c)) / sum(c)
    h = 1e-20
    # complex step on the polynomial gives the derivative to machine precision
    z = sum(v * np.exp(1j * h * k) for k, v in enumerate(c))
    cs = float(np.log(z).imag / h)
    assert float(ads.mean_contacts(c, 0.0)) == pytest.approx(mean, rel=1e-12)
    assert cs == pytest.approx(mean, rel=1e-10)


@pytest.mark.parametrize("n", range(1, 8))
def test_negative_beta_bound(n):
    tn = count(EnsembleSpec("tree", 2, n, TRANSLATION_CLASSES))
    c = ads.coefficients(PartitionQuery("tree", ads.IMPENETRABLE, n))
    for beta in (-3.0, -1.0, -0.1, 0.0):
        assert math.exp(float(ads.log_partition(c, beta))) <= n * tn * (1 + 1e-12)


def test_growth_examples():
    g = ads.growth_bracket("tree", 2, 2)
    assert g.lower == pytest.approx(math.sqrt(2)) and g.upper is None
    w = ads.growth_bracket("walk", 2, 2)
    assert w.upper == pytest.approx(math.sqrt(12)) and w.lower is None
    assert w.labels["ratio_estimate"] == ads.ESTIMATE


def test_marked_series_closed_form():
    c = (0, 3, 5, 2)
    beta = 0.3
    partial = sum(beta ** j * sum(ads.ways(k, j) * v for k, v in enumerate(c)) for j in range(80))
    assert ads.marked_series_total(c, beta) == pytest.approx(partial, rel=1e-12)
    assert ads.marked_series_total(c, 1.0) == math.inf


def test_theorem1_report():
    rep = ads.theorem1_bound_report(2, 9, [-0.5, 0.0, 0.2], max_j=3)
    assert rep["passed"]
    zero = [r for r in rep["rows"] if r["beta"] == 0.0]
    for r in zero:
        assert r["Z"] == count(EnsembleSpec("tree", 2, r["N"], HALF_SPACE))
    assert {r["N"] for r in rep["marked_counts"]} == set(range(1, 7))
    assert rep["lambda_hat_rigor"] == ads.ESTIMATE and rep["lambda_lower_rigor"] == ads.RIGOROUS


def test_theorem3_bound_counts_and_zero_row():
    rep = ads.theorem3_bound_report(2, 6, [0.0, 0.1], max_j=2)
    assert all(r["ok"] for r in rep["marked_counts"])
    for r in rep["rows"]:
        if r["beta"] == 0.0:
            assert r["Z_W+"] == r["Z_WW+(2beta)"] == count(EnsembleSpec("walk", 2, r["N"], HALF_SPACE))


def test_site_vs_edge_counterexample():
    # one step off the surface: one surface site, no surface edge
    w = Walk(((0, 0), (1, 0)))
    assert contact_number(w) == 1 and len(surface_edges(w)) == 0
    rep = ads.theorem3_bound_report(2, 1, [0.1])
    assert not rep["passed"] and rep["site_vs_edge_witness"]["surface_edges"] == 0


def test_all_surface_walk():
    w = Walk.from_steps([(0, 1)] * 4)
    assert contact_number(w) == 5 and len(surface_edges(w)) == 4


def test_choose_epsilon():
    assert ads.choose_epsilon(0.01, 2.7, (0.5, 0.1, 0.01)) == 0.01
    assert ads.choose_epsilon(0.2, 2.7, (0.1,)) is None
