from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import naive
from strategies import dual_graphs
from nodaltails import build_graph, complement
from nodaltails.abel_neron import (
    abel_neron_multidegree,
    is_family_normalized,
    reduced_quasistability,
    reduction_agreement,
    terminal_tallies,
    twisted_multidegree,
)
from nodaltails.errors import QuasistabilityViolation
from nodaltails.stability import HalfInt, Multidegree, base_multidegree, beta, deg_on, is_quasistable
from nodaltails.tails import nested_tails


def test_pipeline_examples(g1, g0):
    r = abel_neron_multidegree(g1, 4, 4)
    assert r.multidegree.values == (2, -1, -1, 0)
    assert r.coefficients == (0, 0, 0, 1)
    assert r.quasistable and r.witness is None
    r = abel_neron_multidegree(g0, 2, 2)
    assert r.multidegree.values == (0, 0)
    assert r.coefficients == (0, 2)
    assert r.quasistable


@pytest.mark.parametrize("name", ["g0", "gban", "g1", "g6"])
def test_pair_one_one_is_zero(request, name):
    g = request.getfixturevalue(name)
    r = abel_neron_multidegree(g, 1, 1)
    assert r.multidegree == Multidegree.zero(g) and r.quasistable
    assert len(r.tails) == 0


def test_six_component_example(g6):
    r = abel_neron_multidegree(g6, 4, 4)
    assert r.coefficients == (0, 0, 1, 3, 2, 1)
    assert r.multidegree.values == (1, -2, 1, 0, 0, 0)
    assert r.quasistable
    for w in r.tails.t3:
        assert beta(r.multidegree, complement(w)) == HalfInt(1)


def test_to_dict_shape(g1):
    d = abel_neron_multidegree(g1, 4, 4).to_dict()
    assert d["pair"] == [4, 4] and d["multidegree"] == [2, -1, -1, 0]
    assert d["tails"]["t1_i"] == [] and d["tails"]["t2"] == [[4]]
    assert d["witness"] is None


def test_terminal_tallies_examples(g1):
    tails = nested_tails(g1, 4, 4)
    assert terminal_tallies(g1, g1.subcurve([2, 4]), tails) == (1, 0)
    assert terminal_tallies(g1, g1.subcurve([1]), tails) == (0, 0)
    empty = nested_tails(g1, 1, 1)
    assert terminal_tallies(g1, g1.subcurve([2, 3]), empty) == (0, 0)


def test_terminal_tallies_six_component(g6):
    tails = nested_tails(g6, 4, 4)
    z = g6.subcurve([4])
    plus, minus = terminal_tallies(g6, z, tails)
    L = abel_neron_multidegree(g6, 4, 4).multidegree
    assert deg_on(L, z) == deg_on(base_multidegree(g6, 4, 4), z) + plus - minus


@pytest.mark.parametrize("name, pair", [("g1", (4, 4)), ("g0", (2, 2)), ("gban", (2, 2)), ("g6", (4, 4))])
def test_reduced_examples(request, name, pair):
    g = request.getfixturevalue(name)
    assert reduced_quasistability(g, *pair)
    assert reduction_agreement(g, *pair) == (True, True)
    reduced, full = reduction_agreement(g, *pair, literal=True)
    assert reduced or not full


def test_strict_raises_on_violation(g1, monkeypatch):
    import nodaltails.abel_neron as an

    monkeypatch.setattr(an, "twisted_multidegree", lambda tails, members=None: base_multidegree(g1, 4, 4))
    with pytest.raises(QuasistabilityViolation) as info:
        abel_neron_multidegree(g1, 4, 4, strict=True)
    assert info.value.witness is not None
    assert not abel_neron_multidegree(g1, 4, 4).quasistable


def test_twist_matches_laplacian(g6):
    for i in range(1, 7):
        for j in range(1, 7):
            r = abel_neron_multidegree(g6, i, j)
            base = np.array(base_multidegree(g6, i, j).values)
            assert list(base + g6.laplacian @ np.array(r.coefficients)) == list(r.multidegree.values)


@settings(max_examples=80, deadline=None)
@given(dual_graphs(max_p=6), st.data())
def test_twisted_multidegree_quasistable_and_reduced(g, data):
    i = data.draw(st.integers(1, g.p))
    j = data.draw(st.integers(1, g.p))
    r = abel_neron_multidegree(g, i, j)
    assert r.multidegree.total == 0
    assert r.quasistable
    assert naive.quasistable(g.edges, g.p, r.multidegree.values)
    reduced, full = reduction_agreement(g, i, j)
    assert reduced == full == True  # noqa: E712


@settings(max_examples=60, deadline=None)
@given(dual_graphs(max_p=6), st.data())
def test_degree_identity_on_normalized_tails(g, data):
    i = data.draw(st.integers(1, g.p))
    j = data.draw(st.integers(1, g.p))
    tails = nested_tails(g, i, j)
    L = twisted_multidegree(tails)
    base = base_multidegree(g, i, j)
    for z in naive.proper_subsets(g.p):
        sub = g.subcurve(z)
        if not naive.is_tail(g.edges, g.p, z) or sub.k < 2 or not is_family_normalized(sub, tails):
            continue
        plus, minus = terminal_tallies(g, sub, tails)
        assert deg_on(L, sub) == deg_on(base, sub) + plus - minus


@settings(max_examples=40, deadline=None)
@given(dual_graphs(max_p=5, loops=False), st.data())
def test_loops_change_nothing(g, data):
    where = data.draw(st.lists(st.integers(1, g.p), min_size=1, max_size=3))
    h = build_graph(g.p, list(g.edges) + [(v, v) for v in where])
    for i in range(1, g.p + 1):
        for j in range(i, g.p + 1):
            a, b = abel_neron_multidegree(g, i, j), abel_neron_multidegree(h, i, j)
            assert a.multidegree.values == b.multidegree.values
            assert a.coefficients == b.coefficients
            assert [w.members for w in a.tails] == [w.members for w in b.tails]


