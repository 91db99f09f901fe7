from math import comb, factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latpoly.constructions import (
    MarkedPolymer,
    MarkedWalk,
    attach_marks_tree,
    attach_marks_walk,
    bridge_concat,
    build_zeta,
    detach_marks_tree,
    detach_marks_walk,
    is_bridge,
    shift_to_star,
    split_zeta,
    stars_and_bars_count,
    tree_concat,
    tree_concat_inverse,
    xi_bridge,
)
from latpoly.constructions import verify as ver
from latpoly.constructions.marks import marked_polymers, ways
from latpoly.enumeration import HALF_SPACE, EnsembleSpec, enumerate_ensemble, surface_profile
from latpoly.errors import NOT_IN_IMAGE, InvalidConfiguration
from latpoly.lattice import (
    Polymer,
    Walk,
    contact_number,
    restrict,
    surface_edges,
    surface_sites,
    translate,
)

from .strategies import random_walks, star_trees

O = (0, 0)


def path(*pts):
    return Polymer.tree(list(zip(pts, pts[1:])), sites=pts)


# -- stars and bars ---------------------------------------------------------


def test_single_site_any_j():
    prof = surface_profile(EnsembleSpec("tree", 2, 1, HALF_SPACE))
    assert [stars_and_bars_count(1, j, prof) for j in range(6)] == [1] * 6


def test_n2_j1_is_five():
    prof = surface_profile(EnsembleSpec("tree", 2, 2, HALF_SPACE))
    assert stars_and_bars_count(2, 1, prof) == 5


def test_combinatorial_lower_bound():
    for k in range(1, 11):
        for j in range(11):
            assert k ** j <= factorial(j) * comb(k + j - 1, j)
    assert ways(0, 0) == 1 and ways(0, 2) == 0


def test_profile_size_mismatch():
    prof = surface_profile(EnsembleSpec("tree", 2, 2, HALF_SPACE))
    with pytest.raises(InvalidConfiguration):
        stars_and_bars_count(3, 1, prof)


def test_marked_enumeration_matches_formula():
    for n in range(1, 5):
        prof = surface_profile(EnsembleSpec("tree", 2, n, HALF_SPACE))
        bases = list(enumerate_ensemble(EnsembleSpec("tree", 2, n, HALF_SPACE)))
        for j in range(3):
            assert sum(1 for b in bases for _ in marked_polymers(b, j)) == stars_and_bars_count(n, j, prof)


# -- marked trees -----------------------------------------------------------


def test_attach_single_site():
    single = Polymer.tree([], d=2, sites=[O])
    t = attach_marks_tree(MarkedPolymer.make(single, {O: 4}))
    assert t == path(O, (-1, 0), (-2, 0), (-3, 0), (-4, 0))


def test_detach_path():
    back = detach_marks_tree(path(O, (-1, 0), (-2, 0), (-3, 0)))
    assert back.base.sites == {O} and back.marks == ((O, 3),)


def test_detach_rejects_bent_hair():
    t = path(O, (0, 1), (0, 2), (0, 3), (0, 4), (-1, 4), (-1, 5))
    assert detach_marks_tree(t) is NOT_IN_IMAGE
    assert detach_marks_tree(path(O, (-1, 0), (-1, 1), (0, 1))) is NOT_IN_IMAGE


def test_attach_validation():
    with pytest.raises(InvalidConfiguration):
        attach_marks_tree(MarkedPolymer(path((-1, 0), O), ()))
    with pytest.raises(InvalidConfiguration):
        MarkedPolymer.make(path(O, (1, 0)), {(1, 0): 1})
    with pytest.raises(InvalidConfiguration):
        MarkedPolymer.make(path(O, (0, 1)), {O: -1})


@settings(max_examples=60, deadline=None)
@given(star_trees(), st.data())
def test_marks_tree_roundtrip(tau, data):
    h = sorted(surface_sites(tau))
    marks = {v: data.draw(st.integers(0, 3)) for v in h}
    m = MarkedPolymer.make(tau, marks)
    f = attach_marks_tree(m)
    assert len(f) == len(tau) + m.total_marks
    assert restrict(f, lambda x: x[0] >= 0) == tau
    assert detach_marks_tree(f) == m


# -- concatenation ----------------------------------------------------------


def test_concat_edges_example():
    e = path(O, (0, 1))
    theta = tree_concat(e, e)
    assert theta == path(O, (0, 1), (0, 2), (0, 3))
    assert contact_number(theta) == 4
    assert tree_concat_inverse(theta, 2, 2) == (e, e)


def test_concat_single_sites():
    s = Polymer.tree([], d=2, sites=[O])
    theta = tree_concat(s, s)
    assert theta == path(O, (0, 1)) and contact_number(theta) == 2
    assert tree_concat_inverse(theta, 1, 1) == (s, s)


def test_concat_inverse_rejects():
    assert tree_concat_inverse(path(O, (1, 0), (1, 1)), 1, 2) is NOT_IN_IMAGE
    t = Polymer.tree([(O, (0, 1)), ((0, 1), (0, 2)), (O, (1, 0))])
    assert tree_concat_inverse(t, 1, 3) is NOT_IN_IMAGE


def test_concat_requires_star():
    bad = path((0, -1), O)
    with pytest.raises(InvalidConfiguration):
        tree_concat(bad, path(O, (0, 1)))


@settings(max_examples=60, deadline=None)
@given(star_trees(max_sites=6), star_trees(max_sites=6))
def test_concat_properties(tau, psi):
    theta = tree_concat(tau, psi)
    assert len(theta) == len(tau) + len(psi)
    assert contact_number(theta) == contact_number(tau) + contact_number(psi)
    assert min(surface_sites(theta)) == O
    assert tree_concat_inverse(theta, len(tau), len(psi)) == (tau, psi)


def test_shift_span_one():
    t = path((3, 2), (3, 3), (3, 4))
    hat, j = shift_to_star(t)
    assert j == 0 and contact_number(hat) == 3 and min(hat.sites) == O


# -- marked walks -----------------------------------------------------------


def test_walk_marks_zero():
    w = Walk.from_steps([(0, 1), (1, 0)])
    assert attach_marks_walk(MarkedWalk.make(w, {})) == w


def test_walk_marks_example():
    w = Walk((O, (0, 1)))
    out = attach_marks_walk(MarkedWalk.make(w, {(O, (0, 1)): 1}))
    assert out.points == (O, (-1, 0), (-1, 1), (0, 1))
    assert detach_marks_walk(out) == MarkedWalk.make(w, {(O, (0, 1)): 1})


@settings(max_examples=80, deadline=None)
@given(random_walks(max_steps=8, half=True), st.data())
def test_marks_walk_roundtrip(w, data):
    marks = {e: data.draw(st.integers(0, 2)) for e in sorted(surface_edges(w))}
    m = MarkedWalk.make(w, marks)
    f = attach_marks_walk(m)
    assert f.n_steps <= w.n_steps + 2 * m.total_marks
    assert f.points[-1] == w.points[-1]
    assert detach_marks_walk(f) == m


# -- bridges ----------------------------------------------------------------


def test_bridge_concat_unit():
    up = Walk((O, (0, 1)))
    assert bridge_concat(up, up).points == (O, (0, 1), (0, 2))
    with pytest.raises(InvalidConfiguration):
        bridge_concat(Walk((O, (1, 0))), up)


def test_xi_bridge():
    assert xi_bridge(2, 2).points == (O, (0, 1), (-1, 1), (-2, 1))
    assert is_bridge(xi_bridge(0, 3))


def test_zeta_degenerate():
    up = Walk((O, (0, 1)))
    z = build_zeta([up], [up], 1, 0, 0)
    assert z.n_steps == 3 and is_bridge(z)
    assert split_zeta(z, 1, 0, 1) == ([up], [up])
    with pytest.raises(InvalidConfiguration):
        build_zeta([up], [up], 1, 0, 1)


@settings(max_examples=40, deadline=None)
@given(random_walks(max_steps=7), random_walks(max_steps=7))
def test_bridge_concat_closed(a, b):
    if is_bridge(a) and is_bridge(b):
        assert is_bridge(bridge_concat(a, b))


# -- verifiers at reduced sizes --------------------------------------------


@pytest.mark.parametrize("rep", [
    lambda: ver.verify_marks_tree(2, 4, 2),
    lambda: ver.verify_marks_walk(2, 4, 2),
    lambda: ver.verify_concat(2, ((2, 2), (1, 3))),
    lambda: ver.verify_shift(2, 6),
    lambda: ver.verify_bridge_concat(2, 2, 3),
    lambda: ver.verify_zeta(2, 4, 1),
    lambda: ver.verify_single_contact(3, 4),
    lambda: ver.verify_supermult(2, 7),
    lambda: ver.verify_ensemble_inclusions(3, 5),
])
def test_verifiers_pass(rep):
    r = rep()
    assert r.passed and r.injective, r.witness


def test_report_json_roundtrip():
    import json
    r = ver.verify_bridge_concat(2, 2, 2)
    d = json.loads(r.to_json())
    assert d["map_name"] == "bridge_concat" and d["passed"] is True
