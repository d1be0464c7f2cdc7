"""Independent oracles: Kirchhoff's matrix-tree count and the Neron component check."""

from __future__ import annotations

import sympy

from ..curve_graph import DualGraph
from ..stability import enumerate_quasistable_deg0


def spanning_tree_count(graph: DualGraph) -> int:
    """Exact determinant of the Laplacian with the first row and column removed."""
    p = graph.p
    if p == 1:
        return 1
    lap = [[0] * p for _ in range(p)]
    for a, b in graph.edges:
        if a == b:
            continue
        a, b = a - 1, b - 1
        lap[a][a] += 1
        lap[b][b] += 1
        lap[a][b] -= 1
        lap[b][a] -= 1
    minor = sympy.Matrix([row[1:] for row in lap[1:]])
    return int(minor.det(method="bareiss"))


def neron_component_check(graph: DualGraph, base: int = 1, allow_large: bool = False) -> tuple[bool, int, int]:
    """Compare the number of degree-0 ``C_base``-quasistable multidegrees with the tree count.

    Returns ``(agree, quasistable_count, tree_count)``.
    """
    found = len(enumerate_quasistable_deg0(graph, base, allow_large=allow_large))
    trees = spanning_tree_count(graph)
    return found == trees, found, trees
