"""Multidegrees and canonical (quasi)stability on a dual graph.

A multidegree assigns an integer to each component.  For a subcurve ``Z``
with ``k_Z`` terminal points and degree ``d_Z`` on ``Z``:

* semistable at ``Z``      iff ``|d_Z| <= k_Z / 2``;
* ``beta(Z)``              is ``d_Z + k_Z / 2``;
* ``C_b``-quasistable at Z iff semistable and, when ``C_b`` lies in ``Z``,
  ``beta(Z) > 0``.

Half-integers are kept doubled so every comparison is an integer one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .curve_graph import DualGraph, Subcurve
from .errors import GraphError, OutOfRangeError


@dataclass(frozen=True, order=True)
class HalfInt:
    """Exact element of ``Z + Z/2`` stored as twice its value."""

    doubled: int

    @classmethod
    def of(cls, value: int | Fraction) -> "HalfInt":
        twice = Fraction(value) * 2
        if twice.denominator != 1:
            raise ValueError(f"{value} is not a half-integer")
        return cls(int(twice))

    def as_fraction(self) -> Fraction:
        return Fraction(self.doubled, 2)

    def __float__(self) -> float:
        return self.doubled / 2

    def __str__(self) -> str:
        return str(self.doubled // 2) if self.doubled % 2 == 0 else f"{self.doubled}/2"

    def is_positive(self) -> bool:
        return self.doubled > 0


@dataclass(frozen=True)
class Multidegree:
    graph: DualGraph = field(repr=False)
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != self.graph.p:
            raise GraphError(f"multidegree has {len(self.values)} entries, graph has {self.graph.p}")

    @classmethod
    def of(cls, graph: DualGraph, values: Iterable[int]) -> "Multidegree":
        return cls(graph, tuple(int(v) for v in values))

    @classmethod
    def zero(cls, graph: DualGraph) -> "Multidegree":
        return cls(graph, (0,) * graph.p)

    @property
    def total(self) -> int:
        return sum(self.values)

    def at(self, component: int) -> int:
        return self.values[component - 1]

    def _check(self, other: "Multidegree") -> None:
        if other.graph != self.graph:
            raise GraphError("multidegrees live on different graphs")

    def __add__(self, other: "Multidegree") -> "Multidegree":
        self._check(other)
        return Multidegree(self.graph, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "Multidegree") -> "Multidegree":
        self._check(other)
        return Multidegree(self.graph, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "Multidegree":
        return Multidegree(self.graph, tuple(-a for a in self.values))

    def scaled(self, factor: int) -> "Multidegree":
        return Multidegree(self.graph, tuple(factor * a for a in self.values))


def _bound(d: Multidegree, z: Subcurve) -> None:
    if d.graph != z.graph:
        raise GraphError("multidegree and subcurve live on different graphs")


def deg_on(d: Multidegree, z: Subcurve) -> int:
    _bound(d, z)
    return sum(d.values[l - 1] for l in z.members)


def twist_multidegree(w: Subcurve) -> Multidegree:
    """Multidegree on the special fibre of the twist by ``O(-W)``.

    Each terminal point of ``W`` adds +1 on its branch in ``W`` and -1 on
    its branch in ``W^c``.
    """
    g = w.graph
    out = [0] * g.p
    for a, b in g.edges:
        ina = w.mask >> (a - 1) & 1
        inb = w.mask >> (b - 1) & 1
        if ina == inb:
            continue
        inside, outside = (a, b) if ina else (b, a)
        out[inside - 1] += 1
        out[outside - 1] -= 1
    return Multidegree(g, tuple(out))


def base_multidegree(graph: DualGraph, i: int, j: int) -> Multidegree:
    """Multidegree of ``O(2P - Q - Q')`` with ``P`` on ``C_1``, ``Q`` on ``C_i``, ``Q'`` on ``C_j``."""
    for l in (i, j):
        if not 1 <= l <= graph.p:
            raise OutOfRangeError(f"component {l} outside 1..{graph.p}")
    out = [0] * graph.p
    out[0] += 2
    out[i - 1] -= 1
    out[j - 1] -= 1
    return Multidegree(graph, tuple(out))


def beta(d: Multidegree, z: Subcurve) -> HalfInt:
    return HalfInt(2 * deg_on(d, z) + z.k)


def is_semistable_at(d: Multidegree, z: Subcurve) -> bool:
    return 2 * abs(deg_on(d, z)) <= z.k


def is_quasistable_at(d: Multidegree, z: Subcurve, base: int = 1) -> bool:
    _bound(d, z)
    deg, k = deg_on(d, z), z.k
    if 2 * abs(deg) > k:
        return False
    return base not in z or 2 * deg + k > 0


# ---------------------------------------------------------------------------
# exhaustive scans
# ---------------------------------------------------------------------------

def violation_flags(
    graph: DualGraph, values: Sequence[int], base: int = 1, allow_large: bool = False
) -> np.ndarray:
    """Boolean array over all vertex masks: True where quasistability fails."""
    if not 1 <= base <= graph.p:
        raise OutOfRangeError(f"base component {base} outside 1..{graph.p}")
    tab = graph.tables(allow_large)
    deg = tab.member @ np.asarray(values, dtype=np.int64)
    twice = 2 * deg
    ok = np.abs(twice) <= tab.cut
    has_base = tab.member[:, base - 1].astype(bool)
    ok &= ~has_base | (twice + tab.cut > 0)
    ok[0] = ok[-1] = True
    return ~ok


def _first(graph: DualGraph, flags: np.ndarray) -> Subcurve | None:
    hits = np.flatnonzero(flags)
    return Subcurve(graph, int(hits[0])) if hits.size else None


def is_quasistable(d: Multidegree, base: int = 1, allow_large: bool = False) -> tuple[bool, Subcurve | None]:
    """Check every subcurve; on failure return the least violating one."""
    bad = _first(d.graph, violation_flags(d.graph, d.values, base, allow_large))
    return bad is None, bad


def is_quasistable_fast(d: Multidegree, base: int = 1, allow_large: bool = False) -> bool:
    """Same verdict as :func:`is_quasistable`, looking at connected subcurves only."""
    tab = d.graph.tables(allow_large)
    flags = violation_flags(d.graph, d.values, base, allow_large)
    return not bool(np.any(flags & tab.connected))


def enumerate_quasistable_deg0(
    graph: DualGraph, base: int = 1, window: int | None = None, allow_large: bool = False
) -> list[Multidegree]:
    """All total-degree-0 ``C_base``-quasistable multidegrees, lexicographically.

    By default the search box is ``|d_l| <= k_{C_l} // 2`` (semistability at
    each single component); ``window`` replaces it by ``|d_l| <= window``.
    """
    tab = graph.tables(allow_large)
    p = graph.p
    if not 1 <= base <= p:
        raise OutOfRangeError(f"base component {base} outside 1..{p}")
    if p == 1:
        return [Multidegree.zero(graph)]
    if window is None:
        bounds = [int(tab.cut[1 << l]) // 2 for l in range(p)]
    else:
        bounds = [int(window)] * p
    found: list[Multidegree] = []
    head_ranges = [range(-b, b + 1) for b in bounds[:-1]]
    last = bounds[-1]
    chunk: list[tuple[int, ...]] = []
    has_base = tab.member[:, base - 1].astype(bool)
    improper = ~_proper(tab.size)

    def flush() -> None:
        if not chunk:
            return
        twice = 2 * (np.array(chunk, dtype=np.int64) @ tab.member.T)
        ok = (np.abs(twice) <= tab.cut) & (~has_base | (twice + tab.cut > 0))
        good = (ok | improper).all(axis=1)
        for row, keep in zip(chunk, good):
            if keep:
                found.append(Multidegree(graph, row))
        chunk.clear()

    for head in itertools.product(*head_ranges):
        tail = -sum(head)
        if -last <= tail <= last:
            chunk.append(head + (tail,))
            if len(chunk) >= 4096:
                flush()
    flush()
    return found


def _proper(size: int) -> np.ndarray:
    mask = np.ones(size, dtype=bool)
    mask[0] = mask[-1] = False
    return mask
