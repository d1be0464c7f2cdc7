"""Canonical small curves used throughout the tests and the CLI docs.

``G0``   two components meeting in one node.
``GBAN`` two components meeting in two nodes (the banana curve).
``G1``   four components; ``C1`` meets ``C2`` and ``C3`` twice each, and
         ``C2``, ``C3`` each meet ``C4`` once.  Edge indices 0..5 are, in
         order, (1,2), (1,2), (1,3), (1,3), (2,4), (3,4).
``G6``   six components, no 1-tails; for ``(4, 4)`` the nested 2-tails are
         ``{4}, {4,5}``, the nested 3-tail is ``{3,4,5,6}`` and the twisted
         multidegree is ``(1,-2,1,0,0,0)``.  Several graphs share these
         data; this is one with the fewest nodes.
"""

from .curve_graph import build_graph

G0 = build_graph(2, [(1, 2)])
GBAN = build_graph(2, [(1, 2), (1, 2)])
G1 = build_graph(4, [(1, 2), (1, 2), (1, 3), (1, 3), (2, 4), (3, 4)])

G6 = build_graph(
    6, [(1, 2), (1, 2), (1, 6), (2, 3), (2, 3), (3, 5), (4, 5), (4, 5), (5, 6)]
)

FIXTURES = {"G0": G0, "GBAN": GBAN, "G1": G1, "G6": G6}
