from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import naive
from strategies import dual_graphs
from nodaltails import build_graph, complement
from nodaltails.errors import GraphError, OutOfRangeError
from nodaltails.stability import (
    HalfInt,
    Multidegree,
    base_multidegree,
    beta,
    deg_on,
    enumerate_quasistable_deg0,
    is_quasistable,
    is_quasistable_at,
    is_quasistable_fast,
    is_semistable_at,
    twist_multidegree,
)


def D(g, *values):
    return Multidegree.of(g, values)


def test_half_int():
    h = HalfInt(1)
    assert h.as_fraction() == Fraction(1, 2) and float(h) == 0.5 and str(h) == "1/2"
    assert str(HalfInt(8)) == "4"
    assert HalfInt.of(Fraction(3, 2)) == HalfInt(3)
    with pytest.raises(ValueError):
        HalfInt.of(Fraction(1, 3))
    assert HalfInt(-1) < HalfInt(0) < HalfInt(1)
    assert HalfInt(1).is_positive() and not HalfInt(0).is_positive()


def test_multidegree_arithmetic(g1, g0):
    a = D(g1, 1, 2, 3, -6)
    assert a.total == 0 and a.at(4) == -6
    assert (a + a).values == (2, 4, 6, -12)
    assert (a - a) == Multidegree.zero(g1)
    assert (-a).values == (-1, -2, -3, 6)
    assert a.scaled(3).values == (3, 6, 9, -18)
    with pytest.raises(GraphError):
        Multidegree.of(g1, [1, 2])
    with pytest.raises(GraphError):
        a + Multidegree.zero(build_graph(4, [(1, 2), (2, 3), (3, 4)]))


def test_deg_on_examples(g0, g1):
    assert deg_on(D(g1, 2, -1, -1, 0), g1.subcurve([2, 4])) == -1
    assert deg_on(D(g0, 0, 0), g0.subcurve([1])) == 0


@pytest.mark.parametrize(
    "name, w, expected",
    [("g1", (4,), (0, -1, -1, 2)), ("g0", (2,), (-1, 1)), ("gban", (2,), (-2, 2))],
)
def test_twist_multidegree_examples(request, name, w, expected):
    g = request.getfixturevalue(name)
    assert twist_multidegree(g.subcurve(w)).values == expected


def test_base_multidegree_examples(g1, g0):
    assert base_multidegree(g1, 4, 4).values == (2, 0, 0, -2)
    assert base_multidegree(g1, 1, 1) == Multidegree.zero(g1)
    assert base_multidegree(g0, 2, 2).values == (2, -2)
    with pytest.raises(OutOfRangeError):
        base_multidegree(g1, 0, 2)


def test_beta_examples(g0, g1):
    assert beta(D(g0, 0, 0), g0.subcurve([1])) == HalfInt(1)
    assert beta(D(g1, 2, -1, -1, 0), g1.subcurve([1])) == HalfInt(8)
    for z in naive.proper_subsets(4):
        sub = g1.subcurve(z)
        assert beta(Multidegree.zero(g1), sub).doubled == sub.k


def test_semistable_examples(g0, g1):
    assert is_semistable_at(D(g1, 2, -1, -1, 0), g1.subcurve([1]))
    assert not is_semistable_at(D(g0, 1, -1), g0.subcurve([2]))


def test_quasistable_at_examples(g0, gban):
    assert is_quasistable_at(D(g0, 0, 0), g0.subcurve([1]))
    assert not is_quasistable_at(D(gban, -1, 1), gban.subcurve([1]))
    assert is_quasistable_at(D(gban, -1, 1), gban.subcurve([2]))


def test_quasistable_examples(g0, g1, gban):
    assert is_quasistable(D(g1, 2, -1, -1, 0)) == (True, None)
    ok, w = is_quasistable(D(g0, 1, -1))
    # both {1} and {2} violate; the least mask is reported
    assert not ok and w.members == (1,)
    assert not is_quasistable_at(D(g0, 1, -1), g0.subcurve([2]))
    assert is_quasistable(D(g0, 0, 0))[0]
    assert is_quasistable_fast(D(g1, 2, -1, -1, 0))
    assert is_quasistable_fast(Multidegree.zero(gban))
    with pytest.raises(OutOfRangeError):
        is_quasistable(D(g0, 0, 0), base=3)


def test_witness_is_least(g1):
    d = D(g1, 3, -3, 0, 0)
    ok, w = is_quasistable(d)
    bad = [
        sum(1 << (l - 1) for l in z)
        for z in naive.proper_subsets(4)
        if not is_quasistable_at(d, g1.subcurve(z))
    ]
    assert not ok and w.mask == min(bad)


def test_enumerate_examples(g0, gban, g1):
    assert [d.values for d in enumerate_quasistable_deg0(gban)] == [(0, 0), (1, -1)]
    assert [d.values for d in enumerate_quasistable_deg0(g0)] == [(0, 0)]
    assert len(enumerate_quasistable_deg0(g1)) == 12
    assert enumerate_quasistable_deg0(build_graph(1, [])) == [Multidegree.zero(build_graph(1, []))]


@pytest.mark.parametrize("name", ["g0", "gban", "g1", "g6"])
def test_enumerate_prune_matches_wide_window(request, name):
    g = request.getfixturevalue(name)
    wide = max(int(g.tables().cut[1 << l]) for l in range(g.p))
    pruned = [d.values for d in enumerate_quasistable_deg0(g)]
    assert pruned == [d.values for d in enumerate_quasistable_deg0(g, window=wide)]
    assert pruned == sorted(pruned)


def test_enumerate_other_base(g1):
    found = enumerate_quasistable_deg0(g1, base=4)
    assert len(found) == 12
    assert all(is_quasistable(d, 4)[0] for d in found)


@settings(max_examples=60, deadline=None)
@given(dual_graphs(max_p=5), st.data())
def test_quasistable_matches_naive(g, data):
    d = data.draw(st.lists(st.integers(-3, 3), min_size=g.p, max_size=g.p))
    base = data.draw(st.integers(1, g.p))
    want = naive.quasistable(g.edges, g.p, d, base)
    md = Multidegree.of(g, d)
    assert is_quasistable(md, base)[0] == want
    assert is_quasistable_fast(md, base) == want


@settings(max_examples=60, deadline=None)
@given(dual_graphs(max_p=6))
def test_twist_properties(g):
    for z in naive.proper_subsets(g.p):
        w = g.subcurve(z)
        t = twist_multidegree(w)
        assert t.total == 0
        assert t == -twist_multidegree(complement(w))
        assert list(t.values) == naive.twist(g.edges, g.p, z)
        indicator = np.array([1 if l in z else 0 for l in range(1, g.p + 1)])
        assert list(g.laplacian @ indicator) == list(t.values)


@settings(max_examples=40, deadline=None)
@given(dual_graphs(max_p=5), st.data())
def test_semistability_symmetric(g, data):
    head = data.draw(st.lists(st.integers(-3, 3), min_size=g.p - 1, max_size=g.p - 1))
    d = Multidegree.of(g, head + [-sum(head)])
    for z in naive.proper_subsets(g.p):
        sub = g.subcurve(z)
        assert is_semistable_at(d, sub) == is_semistable_at(d, complement(sub))


@settings(max_examples=40, deadline=None)
@given(dual_graphs(max_p=6))
def test_twist_degree_by_pair_relation(g):
    full = frozenset(range(1, g.p + 1))
    for a in naive.proper_subsets(g.p):
        for b in naive.proper_subsets(g.p):
            z, w = g.subcurve(a), g.subcurve(b)
            shared = len(naive.cut(g.edges, a) & naive.cut(g.edges, b))
            deg = deg_on(twist_multidegree(w), z)
            zc = full - a
            if b <= a or a <= b:
                assert deg == shared
            elif b <= zc or zc <= b:
                assert deg == -shared
            elif shared == 0:
                assert deg == 0
