"""Dual graphs of nodal curves and the subcurve calculus.

Components are numbered ``1..p`` and are the vertices of the dual graph.
Nodes are edges with a stable index ``0..E-1``; parallel edges and loops
are allowed.  A subcurve is a nonempty proper set of components, stored as
a vertex bitmask (bit ``l - 1`` stands for component ``l``), and a set of
nodes is stored as an edge bitmask.

All objects are immutable.  The exhaustive routines in the rest of the
package go through :meth:`DualGraph.tables`, which precomputes the cut,
connectivity and tail data of every vertex subset once per graph.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import (
    DisconnectedError,
    EmptyGraphError,
    GraphError,
    GuardExceededError,
    OutOfRangeError,
)

GUARD_ENV = "NODALTAILS_MAX_COMPONENTS"
DEFAULT_MAX_COMPONENTS = 20


def max_components() -> int:
    """Largest ``p`` accepted by exhaustive scans (env override allowed)."""
    raw = os.environ.get(GUARD_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_COMPONENTS
    try:
        return int(raw)
    except ValueError as exc:
        raise GuardExceededError(f"{GUARD_ENV}={raw!r} is not an integer") from exc


def check_guard(p: int, allow_large: bool = False) -> None:
    if allow_large:
        return
    limit = max_components()
    if p > limit:
        raise GuardExceededError(
            f"exhaustive scan over 2**{p} subcurves refused (limit p <= {limit}); "
            f"pass allow_large=True or set {GUARD_ENV}"
        )


class Boundary(enum.Enum):
    """Sentinels for a wedge with no components and a union equal to ``C``."""

    EMPTY = "empty"
    FULL = "full"

    def __repr__(self) -> str:
        return f"Boundary.{self.name}"


EMPTY = Boundary.EMPTY
FULL = Boundary.FULL


def popcount(x: int) -> int:
    return int(x).bit_count()


def iter_bits(x: int) -> Iterator[int]:
    """Yield the positions of the set bits of ``x`` in ascending order."""
    x = int(x)
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class SubsetTables:
    """Per-subset lookup arrays, indexed by vertex bitmask ``0 .. 2**p - 1``.

    ``term[m]`` is the edge mask of the cut of ``m`` and ``cut[m]`` its size;
    ``touch[m]`` holds the edges with at least one endpoint in ``m``;
    ``connected[m]`` tells whether the induced multigraph on ``m`` is
    connected (false for ``m = 0``); ``tail[m]`` is true for proper ``m``
    with both ``m`` and its complement connected.
    """

    p: int
    full: int
    member: np.ndarray
    cut: np.ndarray
    term: np.ndarray
    touch: np.ndarray
    connected: np.ndarray
    tail: np.ndarray

    @property
    def size(self) -> int:
        return self.full + 1

    def term_popcount(self, masks: np.ndarray) -> np.ndarray:
        return _bitcount(masks)


def _bitcount(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object:
        return np.array([int(v).bit_count() for v in arr.ravel()], dtype=np.int64).reshape(
            arr.shape
        )
    return np.bitwise_count(arr).astype(np.int64)


@dataclass(frozen=True)
class DualGraph:
    """Connected multigraph: one vertex per component, one edge per node."""

    p: int
    edges: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.p, (int, np.integer)) or self.p < 1:
            raise EmptyGraphError(f"a curve needs at least one component, got p={self.p!r}")
        for idx, edge in enumerate(self.edges):
            if len(edge) != 2:
                raise GraphError(f"edge {idx} must have two endpoints, got {edge!r}")
            for end in edge:
                if not 1 <= end <= self.p:
                    raise OutOfRangeError(
                        f"edge {idx} endpoint {end} outside components 1..{self.p}"
                    )
        if self.labels is not None and len(self.labels) != self.p:
            raise GraphError(f"expected {self.p} labels, got {len(self.labels)}")
        reach = _reach_from_lowest(self.full_mask, self.adjacency_masks)
        if reach != self.full_mask:
            missing = [l + 1 for l in iter_bits(self.full_mask & ~reach)]
            raise DisconnectedError(
                f"dual graph is not connected; components {missing} unreachable from 1"
            )

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def full_mask(self) -> int:
        return (1 << self.p) - 1

    @cached_property
    def adjacency_masks(self) -> tuple[int, ...]:
        """Vertex mask of neighbours of each component (0-based), loops skipped."""
        adj = [0] * self.p
        for a, b in self.edges:
            if a != b:
                adj[a - 1] |= 1 << (b - 1)
                adj[b - 1] |= 1 << (a - 1)
        return tuple(adj)

    @cached_property
    def loop_indices(self) -> tuple[int, ...]:
        return tuple(idx for idx, (a, b) in enumerate(self.edges) if a == b)

    @cached_property
    def laplacian(self) -> np.ndarray:
        """Integer Laplacian ``D - A`` of the loopless multigraph."""
        lap = np.zeros((self.p, self.p), dtype=np.int64)
        for a, b in self.edges:
            if a == b:
                continue
            lap[a - 1, a - 1] += 1
            lap[b - 1, b - 1] += 1
            lap[a - 1, b - 1] -= 1
            lap[b - 1, a - 1] -= 1
        return lap

    def term_mask(self, mask: int) -> int:
        """Edge mask of the nodes joining ``mask`` to its complement."""
        out = 0
        for idx, (a, b) in enumerate(self.edges):
            if ((mask >> (a - 1)) ^ (mask >> (b - 1))) & 1:
                out |= 1 << idx
        return out

    def touch_mask(self, mask: int) -> int:
        """Edge mask of the nodes lying on the subcurve ``mask``."""
        out = 0
        for idx, (a, b) in enumerate(self.edges):
            if ((mask >> (a - 1)) | (mask >> (b - 1))) & 1:
                out |= 1 << idx
        return out

    def is_connected_mask(self, mask: int) -> bool:
        if mask == 0:
            return False
        return _reach_from_lowest(mask, self.adjacency_masks) == mask

    def is_tail_mask(self, mask: int) -> bool:
        full = self.full_mask
        return 0 < mask < full and self.is_connected_mask(mask) and self.is_connected_mask(full ^ mask)

    def tables(self, allow_large: bool = False) -> SubsetTables:
        """Exhaustive lookup tables; refuses ``p`` beyond the enumeration guard."""
        check_guard(self.p, allow_large)
        return self._tables

    @cached_property
    def _tables(self) -> SubsetTables:
        return _build_tables(self)

    @cached_property
    def memo(self) -> dict:
        """Scratch cache for derived per-graph data (nested tails, ...)."""
        return {}

    def subcurve(self, components: Iterable[int]) -> "Subcurve":
        return Subcurve.of(self, components)

    def graph_repr(self) -> str:
        return f"DualGraph(p={self.p}, edges={list(self.edges)})"


def _reach_from_lowest(mask: int, adj: Sequence[int]) -> int:
    if mask == 0:
        return 0
    reach = mask & -mask
    frontier = reach
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= adj[v]
        nxt &= mask & ~reach
        reach |= nxt
        frontier = nxt
    return reach


def _build_tables(graph: DualGraph) -> SubsetTables:
    p = graph.p
    full = graph.full_mask
    masks = np.arange(full + 1, dtype=np.int64)
    member = ((masks[:, None] >> np.arange(p)) & 1).astype(np.int64)

    wide = graph.num_edges > 64
    dtype = object if wide else np.uint64
    term = np.zeros(full + 1, dtype=dtype)
    touch = np.zeros(full + 1, dtype=dtype)
    cut = np.zeros(full + 1, dtype=np.int64)
    for idx, (a, b) in enumerate(graph.edges):
        ia = member[:, a - 1]
        ib = member[:, b - 1]
        bit = (1 << idx) if wide else np.uint64(1 << idx)
        on = (ia | ib).astype(bool)
        touch[on] = touch[on] | bit
        if a == b:
            continue
        crossing = (ia ^ ib).astype(bool)
        term[crossing] = term[crossing] | bit
        cut += crossing

    # breadth-first closure for every subset at once
    adj = np.array(graph.adjacency_masks, dtype=np.int64)
    reach = masks & -masks
    for _ in range(p):
        nbr = np.zeros_like(reach)
        for v in range(p):
            has_v = ((reach >> v) & 1).astype(bool)
            nbr[has_v] |= adj[v]
        reach = reach | (nbr & masks)
    connected = (reach == masks) & (masks != 0)
    proper = (masks != 0) & (masks != full)
    tail = proper & connected & connected[full ^ masks]
    for arr in (member, cut, term, touch, connected, tail):
        arr.setflags(write=False)
    return SubsetTables(p, full, member, cut, term, touch, connected, tail)


def build_graph(p: int, edges: Iterable[Sequence[int]], labels: Sequence[str] | None = None) -> DualGraph:
    """Validate ``p`` and an endpoint list and return the dual graph.

    Raises :class:`EmptyGraphError`, :class:`OutOfRangeError` or
    :class:`DisconnectedError`.
    """
    if not isinstance(p, (int, np.integer)) or isinstance(p, bool):
        raise GraphError(f"component count must be an integer, got {p!r}")
    norm = []
    for idx, edge in enumerate(edges):
        pair = tuple(int(x) for x in edge)
        if len(pair) != 2:
            raise GraphError(f"edge {idx} must have two endpoints, got {edge!r}")
        norm.append(pair)
    return DualGraph(int(p), tuple(norm), None if labels is None else tuple(labels))


@dataclass(frozen=True)
class Subcurve:
    """Nonempty proper union of components of one dual graph."""

    graph: DualGraph = field(repr=False)
    mask: int

    def __post_init__(self) -> None:
        if not 0 < self.mask < self.graph.full_mask:
            raise GraphError(
                f"subcurve mask {self.mask:#x} must be a nonempty proper subset of "
                f"{self.graph.p} components"
            )

    @classmethod
    def of(cls, graph: DualGraph, components: Iterable[int]) -> "Subcurve":
        mask = 0
        for l in components:
            if not 1 <= l <= graph.p:
                raise OutOfRangeError(f"component {l} outside 1..{graph.p}")
            mask |= 1 << (l - 1)
        return cls(graph, mask)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(l + 1 for l in iter_bits(self.mask))

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __contains__(self, component: object) -> bool:
        return isinstance(component, int) and 1 <= component <= self.graph.p and bool(
            self.mask >> (component - 1) & 1
        )

    def issubset(self, other: "Subcurve") -> bool:
        return self.mask & ~other.mask == 0

    @property
    def k(self) -> int:
        """Number of terminal points."""
        return popcount(self.graph.term_mask(self.mask))

    def __repr__(self) -> str:
        return "Subcurve({" + ",".join(map(str, self.members)) + "})"


@dataclass(frozen=True)
class EdgeSet:
    """Set of node indices of one dual graph."""

    graph: DualGraph = field(repr=False)
    mask: int = 0

    @classmethod
    def of(cls, graph: DualGraph, indices: Iterable[int]) -> "EdgeSet":
        mask = 0
        for idx in indices:
            if not 0 <= idx < graph.num_edges:
                raise OutOfRangeError(f"edge index {idx} outside 0..{graph.num_edges - 1}")
            mask |= 1 << idx
        return cls(graph, mask)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __len__(self) -> int:
        return popcount(self.mask)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, idx: object) -> bool:
        return isinstance(idx, int) and idx >= 0 and bool(self.mask >> idx & 1)

    def _same(self, other: "EdgeSet") -> None:
        if other.graph != self.graph:
            raise GraphError("edge sets belong to different graphs")

    def __and__(self, other: "EdgeSet") -> "EdgeSet":
        self._same(other)
        return EdgeSet(self.graph, self.mask & other.mask)

    def __or__(self, other: "EdgeSet") -> "EdgeSet":
        self._same(other)
        return EdgeSet(self.graph, self.mask | other.mask)

    def __xor__(self, other: "EdgeSet") -> "EdgeSet":
        self._same(other)
        return EdgeSet(self.graph, self.mask ^ other.mask)

    def __sub__(self, other: "EdgeSet") -> "EdgeSet":
        self._same(other)
        return EdgeSet(self.graph, self.mask & ~other.mask)

    def issubset(self, other: "EdgeSet") -> bool:
        return self.mask & ~other.mask == 0

    def __repr__(self) -> str:
        return "EdgeSet({" + ",".join(f"e{i}" for i in self.indices) + "})"


@dataclass(frozen=True)
class PairClass:
    nested_strict: bool
    free: bool
    perfect: bool

    @property
    def terminal(self) -> bool:
        return not self.free


def _same_graph(z: Subcurve, w: Subcurve) -> None:
    if z.graph != w.graph:
        raise GraphError("subcurves belong to different graphs")


def complement(z: Subcurve) -> Subcurve:
    return Subcurve(z.graph, z.graph.full_mask ^ z.mask)


def terminal_points(z: Subcurve | Boundary, graph: DualGraph | None = None) -> EdgeSet:
    """Nodes with one branch on ``z`` and the other on its complement.

    The sentinels ``EMPTY`` and ``FULL`` have no terminal points; pass the
    graph explicitly for them.
    """
    if isinstance(z, Boundary):
        if graph is None:
            raise GraphError("terminal_points of a sentinel needs the graph")
        return EdgeSet(graph, 0)
    return EdgeSet(z.graph, z.graph.term_mask(z.mask))


def is_connected_subcurve(z: Subcurve) -> bool:
    return z.graph.is_connected_mask(z.mask)


def is_tail(z: Subcurve) -> bool:
    """True when ``z`` and its complement are both connected."""
    return z.graph.is_tail_mask(z.mask)


def wedge(z: Subcurve, w: Subcurve) -> Subcurve | Boundary:
    """Union of the components common to ``z`` and ``w``, or ``EMPTY``."""
    _same_graph(z, w)
    m = z.mask & w.mask
    return Subcurve(z.graph, m) if m else EMPTY


def union_sub(z: Subcurve, w: Subcurve) -> Subcurve | Boundary:
    _same_graph(z, w)
    m = z.mask | w.mask
    return FULL if m == z.graph.full_mask else Subcurve(z.graph, m)


def sym_diff(a: EdgeSet, b: EdgeSet) -> EdgeSet:
    return a ^ b


def is_disconnecting(delta: EdgeSet) -> bool:
    """True when deleting the nodes in ``delta`` disconnects the graph."""
    g = delta.graph
    adj = [0] * g.p
    for idx, (a, b) in enumerate(g.edges):
        if a == b or delta.mask >> idx & 1:
            continue
        adj[a - 1] |= 1 << (b - 1)
        adj[b - 1] |= 1 << (a - 1)
    return _reach_from_lowest(g.full_mask, adj) != g.full_mask


def perfect_masks(z: int, w: int, full: int) -> bool:
    return (z & ~w) == 0 or (w & ~z) == 0 or (z | w) == full or (z & w) == 0


def classify_pair(z: Subcurve, w: Subcurve) -> PairClass:
    _same_graph(z, w)
    g = z.graph
    free = g.term_mask(z.mask) & g.term_mask(w.mask) == 0
    strict = z.mask != w.mask and z.mask & ~w.mask == 0
    return PairClass(
        nested_strict=strict and free,
        free=free,
        perfect=perfect_masks(z.mask, w.mask, g.full_mask),
    )


def set_relation(z: Subcurve, family: Iterable[Subcurve]) -> tuple[bool, bool]:
    """Return ``(is_free, is_normalized)`` of ``z`` against ``family``."""
    free = normalized = True
    for w in family:
        cls = classify_pair(z, w)
        if cls.terminal:
            free = False
            if not cls.perfect:
                normalized = False
    return free, normalized


def relabel_swap(graph: DualGraph, b: int) -> DualGraph:
    """Copy of ``graph`` with components ``1`` and ``b`` exchanged."""
    if not 1 <= b <= graph.p:
        raise OutOfRangeError(f"component {b} outside 1..{graph.p}")
    swap = {1: b, b: 1}
    edges = tuple((swap.get(x, x), swap.get(y, y)) for x, y in graph.edges)
    labels = None
    if graph.labels is not None:
        labs = list(graph.labels)
        labs[0], labs[b - 1] = labs[b - 1], labs[0]
        labels = tuple(labs)
    return DualGraph(graph.p, edges, labels)


def normalized_flags(tables: SubsetTables, family: Iterable[int]) -> np.ndarray:
    """Per vertex mask: every ``family`` member terminal with it forms a perfect pair."""
    masks = np.arange(tables.size, dtype=np.int64)
    full = tables.full
    bad = np.zeros(tables.size, dtype=bool)
    for w in set(family):
        terminal = (tables.term & tables.term[w]) != 0
        perfect = ((masks & ~w) == 0) | ((w & ~masks) == 0) | ((masks | w) == full) | ((masks & w) == 0)
        bad |= terminal & ~perfect
    return ~bad


def free_flags(tables: SubsetTables, family: Iterable[int]) -> np.ndarray:
    """Per vertex mask: no terminal point shared with any ``family`` member."""
    cut = 0
    for w in family:
        cut |= int(tables.term[w])
    if tables.term.dtype == object:
        return np.array([int(t) & cut == 0 for t in tables.term], dtype=bool)
    return (tables.term & np.uint64(cut)) == 0
