"""Twisting ``O(2P - Q - Q')`` by the nested tails of ``(i, j)``.

``P`` sits on ``C_1``, ``Q`` on ``C_i`` and ``Q'`` on ``C_j``.  The twisted
multidegree is

    L = (2 e_1 - e_i - e_j) + sum over W in T_{i,j} of twist(O(-W))

and it is expected to be ``C_1``-quasistable for every dual graph and every
pair.  Besides the exhaustive verdict, this module exposes the reduced check
over normalized tails and the ``t+ / t-`` tallies used to predict the degree
of ``L`` on a normalized tail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve_graph import DualGraph, Subcurve, complement, normalized_flags, perfect_masks
from .errors import GraphError, QuasistabilityViolation, SelfTestError
from .stability import (
    HalfInt,
    Multidegree,
    base_multidegree,
    beta,
    is_quasistable,
    twist_multidegree,
    violation_flags,
)
from .tails import NestedTails, nested_tails, twist_coefficients


@dataclass(frozen=True)
class AbelNeronResult:
    pair: tuple[int, int]
    tails: NestedTails
    coefficients: tuple[int, ...]
    multidegree: Multidegree
    quasistable: bool
    witness: Subcurve | None

    def to_dict(self) -> dict:
        t = self.tails
        return {
            "pair": list(self.pair),
            "tails": {
                "t1_i": [list(w.members) for w in t.t1_i],
                "t1_j": [list(w.members) for w in t.t1_j],
                "t2": [list(w.members) for w in t.t2],
                "t3": [list(w.members) for w in t.t3],
            },
            "coefficients": list(self.coefficients),
            "multidegree": list(self.multidegree.values),
            "quasistable": self.quasistable,
            "witness": None if self.witness is None else list(self.witness.members),
        }


def twisted_multidegree(tails: NestedTails, members=None) -> Multidegree:
    """Base multidegree plus the twists by ``O(-W)`` over ``members`` (default: all)."""
    graph = tails.graph
    i, j = tails.pair
    total = base_multidegree(graph, i, j)
    for w in tails.members if members is None else members:
        total = total + twist_multidegree(w)
    return total


def abel_neron_multidegree(
    graph: DualGraph, i: int, j: int, *, strict: bool = False, allow_large: bool = False
) -> AbelNeronResult:
    """Run the whole pipeline for one pair and test the result exhaustively.

    With ``strict=True`` a non-quasistable result raises
    :class:`QuasistabilityViolation` instead of being reported.
    """
    tails = nested_tails(graph, i, j)
    L = twisted_multidegree(tails)
    if L.total != 0:
        raise SelfTestError(f"twisted multidegree {L.values} has total {L.total}")
    half = HalfInt(1)
    for w in tails.t3:
        got = beta(L, complement(w))
        if got != half:
            raise SelfTestError(f"beta of the complement of {w} is {got}, expected 1/2")
    ok, witness = is_quasistable(L, 1, allow_large)
    if strict and not ok:
        raise QuasistabilityViolation(
            f"multidegree {L.values} for pair {(i, j)} fails at {witness}", witness
        )
    return AbelNeronResult((i, j), tails, twist_coefficients(tails), L, ok, witness)


def terminal_tallies(graph: DualGraph, z: Subcurve, tails: NestedTails) -> tuple[int, int]:
    """``(t+, t-)``: shared terminal points with the 2- and 3-tails around ``z``.

    ``t+`` sums over tails ``W`` with ``W`` inside ``z`` or ``z`` inside ``W``;
    ``t-`` over those inside ``z^c`` or containing ``z^c``.
    """
    if z.graph != graph or tails.graph != graph:
        raise GraphError("subcurve and tails must live on the given graph")
    full = graph.full_mask
    zc = full ^ z.mask
    tz = graph.term_mask(z.mask)
    plus = minus = 0
    for w in tails.t2.entries + tails.t3.entries:
        shared = (tz & graph.term_mask(w.mask)).bit_count()
        m = w.mask
        if m & ~z.mask == 0 or z.mask & ~m == 0:
            plus += shared
        if m & ~zc == 0 or zc & ~m == 0:
            minus += shared
    return plus, minus


def reduced_flags(graph: DualGraph, family: list[int], allow_large: bool = False) -> np.ndarray:
    """Tails normalized with respect to ``family`` (vertex-mask flags)."""
    tab = graph.tables(allow_large)
    return tab.tail & normalized_flags(tab, family)


def reduced_quasistability(
    graph: DualGraph, i: int, j: int, *, literal: bool = False, allow_large: bool = False
) -> bool:
    """Quasistability checked only at the normalized tails.

    By default the multidegree is the full twist and the tails are those
    normalized against every member of ``T_{i,j}``.  With ``literal=True``
    only the 3-tail chain is used, both for the twist and for normalization.
    """
    return reduction_agreement(graph, i, j, literal=literal, allow_large=allow_large)[0]


def reduction_agreement(
    graph: DualGraph, i: int, j: int, *, literal: bool = False, allow_large: bool = False
) -> tuple[bool, bool]:
    """Return ``(reduced verdict, exhaustive verdict)`` for the same multidegree."""
    tails = nested_tails(graph, i, j)
    members = tails.t3.entries if literal else tails.members
    L = twisted_multidegree(tails, members)
    bad = violation_flags(graph, L.values, 1, allow_large)
    keep = reduced_flags(graph, [w.mask for w in members], allow_large)
    return not bool(np.any(bad & keep)), not bool(np.any(bad))


def is_family_normalized(z: Subcurve, tails: NestedTails) -> bool:
    full = z.graph.full_mask
    tz = z.graph.term_mask(z.mask)
    for w in tails.members:
        if tz & z.graph.term_mask(w.mask) and not perfect_masks(z.mask, w.mask, full):
            return False
    return True
