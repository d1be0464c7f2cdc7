"""Tails and the nested tail sets attached to a pair of components.

A tail is a subcurve ``Z`` with ``Z`` and ``Z^c`` connected; it is an
``s``-tail when it has ``s`` terminal points.  For a pair ``(i, j)`` the
construction collects

* the 1-tails containing ``C_i`` (resp. ``C_j``) and missing ``C_1``;
* a chain of 2-tails built from the separating 2-tails by repeated wedges;
* a chain of 3-tails built the same way from the separating 3-tails that
  share no terminal point with the 2-tail chain.

The multiset union of these is what the Abel-Neron twist sums over.
Every list and chain is reported in ascending bitmask order (chains are
also ordered by inclusion, the two orders agree).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

from .curve_graph import DualGraph, Subcurve, check_guard, max_components, popcount
from .errors import ChainViolationError, ClosureViolationError, GraphError, OutOfRangeError


@dataclass(frozen=True)
class TailChain:
    """Chain ``W_0 < W_1 < ... < W_m`` of tails, consecutive entries nested and free."""

    entries: tuple[Subcurve, ...]
    arity: int | None
    anchor: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Subcurve]:
        return iter(self.entries)

    @property
    def masks(self) -> tuple[int, ...]:
        return tuple(w.mask for w in self.entries)


@dataclass(frozen=True)
class NestedTails:
    """The four chains attached to ``(i, j)`` and their multiset union."""

    graph: DualGraph = field(repr=False)
    pair: tuple[int, int]
    t1_i: TailChain
    t1_j: TailChain
    t2: TailChain
    t3: TailChain

    @property
    def members(self) -> tuple[Subcurve, ...]:
        """Multiset view; a 1-tail appears twice when ``i == j``."""
        return self.t1_i.entries + self.t1_j.entries + self.t2.entries + self.t3.entries

    def __len__(self) -> int:
        return len(self.t1_i) + len(self.t1_j) + len(self.t2) + len(self.t3)

    def __iter__(self) -> Iterator[Subcurve]:
        return iter(self.members)


def _check_index(graph: DualGraph, *idx: int) -> None:
    for l in idx:
        if not 1 <= l <= graph.p:
            raise OutOfRangeError(f"component {l} outside 1..{graph.p}")


# ---------------------------------------------------------------------------
# bitmask core
# ---------------------------------------------------------------------------

def _term_lookup(graph: DualGraph):
    if graph.p > max_components():
        return graph.term_mask
    table = graph.tables().term
    return lambda m: int(table[m])


def tail_masks(graph: DualGraph, k: int | None = None, allow_large: bool = False) -> list[int]:
    tab = graph.tables(allow_large)
    sel = tab.tail if k is None else tab.tail & (tab.cut == k)
    return [int(m) for m in np.flatnonzero(sel)]


def separating(masks: Iterable[int], i: int, j: int) -> list[int]:
    """Keep the masks containing ``C_i`` and ``C_j`` but not ``C_1``."""
    need = (1 << (i - 1)) | (1 << (j - 1))
    return [m for m in masks if m & need == need and not m & 1]


def chain_masks(graph: DualGraph, candidates: Sequence[int]) -> list[int]:
    """Iterated-wedge chain over a candidate family of vertex masks."""
    if not candidates:
        return []
    pool_all = sorted(set(candidates))
    members = set(pool_all)
    term = _term_lookup(graph)
    chain: list[int] = []
    pool = pool_all
    while pool:
        w = reduce(lambda a, b: a & b, pool)
        if w not in members:
            raise ClosureViolationError(
                f"wedge {_fmt(w)} of {[_fmt(m) for m in pool]} is not a candidate"
            )
        chain.append(w)
        tw = term(w)
        pool = [z for z in pool_all if z != w and z & w == w and term(z) & tw == 0]
    return chain


def one_tail_masks(graph: DualGraph, i: int) -> list[int]:
    found = separating(tail_masks(graph, 1), i, i)
    found.sort(key=popcount)
    term = _term_lookup(graph)
    for a, b in zip(found, found[1:]):
        if not (a != b and a & b == a and term(a) & term(b) == 0):
            raise ChainViolationError(
                f"1-tails {_fmt(a)} and {_fmt(b)} containing C{i} are not nested"
            )
    return found


def three_tail_candidate_masks(graph: DualGraph, i: int, j: int, t2: Sequence[int]) -> list[int]:
    term = _term_lookup(graph)
    cut2 = 0
    for w in t2:
        cut2 |= term(w)
    return [z for z in separating(tail_masks(graph, 3), i, j) if term(z) & cut2 == 0]


def nested_masks(graph: DualGraph, i: int, j: int) -> tuple[tuple[int, ...], ...]:
    """``(T1_i, T1_j, T2, T3)`` as mask tuples, memoised on the graph."""
    key = ("nested", i, j)
    hit = graph.memo.get(key)
    if hit is not None:
        return hit
    t1i = one_tail_masks(graph, i)
    t1j = t1i if j == i else one_tail_masks(graph, j)
    t2 = chain_masks(graph, separating(tail_masks(graph, 2), i, j))
    t3 = chain_masks(graph, three_tail_candidate_masks(graph, i, j, t2))
    out = (tuple(t1i), tuple(t1j), tuple(t2), tuple(t3))
    graph.memo[key] = out
    return out


def _fmt(mask: int) -> str:
    bits = []
    l = 1
    while mask:
        if mask & 1:
            bits.append(str(l))
        mask >>= 1
        l += 1
    return "{" + ",".join(bits) + "}"


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def enumerate_subcurves(graph: DualGraph, allow_large: bool = False) -> Iterator[Subcurve]:
    """All ``2**p - 2`` subcurves in ascending bitmask order."""
    check_guard(graph.p, allow_large)
    for m in range(1, graph.full_mask):
        yield Subcurve(graph, m)


def enumerate_tails(graph: DualGraph, k: int | None = None, allow_large: bool = False) -> list[Subcurve]:
    return [Subcurve(graph, m) for m in tail_masks(graph, k, allow_large)]


def _wrap(graph: DualGraph, masks: Iterable[int], arity: int | None, anchor: tuple[int, ...]) -> TailChain:
    return TailChain(tuple(Subcurve(graph, m) for m in masks), arity, anchor)


def one_tails(graph: DualGraph, i: int) -> TailChain:
    """1-tails containing ``C_i`` and missing ``C_1``, innermost first."""
    _check_index(graph, i)
    return _wrap(graph, one_tail_masks(graph, i), 1, (i,))


def two_tail_candidates(graph: DualGraph, i: int, j: int) -> list[Subcurve]:
    _check_index(graph, i, j)
    return [Subcurve(graph, m) for m in separating(tail_masks(graph, 2), i, j)]


def nested_chain(
    candidates: Sequence[Subcurve], *, arity: int | None = None, anchor: tuple[int, ...] = ()
) -> TailChain:
    """Build ``W_0 = wedge(all)``, then ``W_m = wedge{Z : W_{m-1} nested-free in Z}``.

    Every ``W_m`` must itself be a candidate, otherwise
    :class:`ClosureViolationError` is raised.  The result does not depend on
    the order of ``candidates``.
    """
    if not candidates:
        return TailChain((), arity, anchor)
    graph = candidates[0].graph
    if any(z.graph != graph for z in candidates):
        raise GraphError("candidates belong to different graphs")
    if arity is None:
        ks = {z.k for z in candidates}
        arity = ks.pop() if len(ks) == 1 else None
    return _wrap(graph, chain_masks(graph, [z.mask for z in candidates]), arity, anchor)


def three_tail_candidates(graph: DualGraph, i: int, j: int, t2: TailChain) -> list[Subcurve]:
    """Separating 3-tails sharing no terminal point with any member of ``t2``."""
    _check_index(graph, i, j)
    return [Subcurve(graph, m) for m in three_tail_candidate_masks(graph, i, j, t2.masks)]


def nested_tails(graph: DualGraph, i: int, j: int) -> NestedTails:
    _check_index(graph, i, j)
    t1i, t1j, t2, t3 = nested_masks(graph, i, j)
    return NestedTails(
        graph=graph,
        pair=(i, j),
        t1_i=_wrap(graph, t1i, 1, (i,)),
        t1_j=_wrap(graph, t1j, 1, (j,)),
        t2=_wrap(graph, t2, 2, (i, j)),
        t3=_wrap(graph, t3, 3, (i, j)),
    )


def twist_coefficients(tails: NestedTails) -> tuple[int, ...]:
    """Multiplicity of each component in the multiset of nested tails."""
    coeff = [0] * tails.graph.p
    for w in tails.members:
        for l in w.members:
            coeff[l - 1] += 1
    return tuple(coeff)
