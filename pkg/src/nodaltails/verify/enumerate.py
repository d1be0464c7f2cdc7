"""Full labelled enumeration of small connected loopless multigraphs."""

from __future__ import annotations

import itertools
from typing import Iterator

from ..curve_graph import DualGraph, _reach_from_lowest, build_graph


def _connected(p: int, edges: tuple[tuple[int, int], ...]) -> bool:
    adj = [0] * p
    for a, b in edges:
        adj[a - 1] |= 1 << (b - 1)
        adj[b - 1] |= 1 << (a - 1)
    full = (1 << p) - 1
    return _reach_from_lowest(full, adj) == full


def small_multigraphs(max_p: int = 5, max_edges: int = 7, min_p: int = 1) -> Iterator[DualGraph]:
    """Every connected loopless multigraph on ``1..p`` with at most ``max_edges`` edges.

    Graphs are labelled: two isomorphic graphs with different vertex labels
    are both produced.  Order: by ``p``, then edge count, then edge multiset.
    """
    for p in range(min_p, max_p + 1):
        pairs = list(itertools.combinations(range(1, p + 1), 2))
        for n in range(p - 1, max_edges + 1):
            if p == 1 and n > 0:
                break
            for edges in itertools.combinations_with_replacement(pairs, n):
                if _connected(p, edges):
                    yield build_graph(p, edges)
