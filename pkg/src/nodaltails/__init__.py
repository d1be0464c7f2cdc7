"""Combinatorics of nested tails and the degree-2 Abel-Neron twist on nodal curves."""

from __future__ import annotations

from .abel_neron import (
    AbelNeronResult,
    abel_neron_multidegree,
    reduced_quasistability,
    reduction_agreement,
    terminal_tallies,
)
from .curve_graph import (
    EMPTY,
    FULL,
    DualGraph,
    EdgeSet,
    Subcurve,
    build_graph,
    classify_pair,
    complement,
    is_tail,
    terminal_points,
    union_sub,
    wedge,
)
from .errors import (
    ChainViolationError,
    ClosureViolationError,
    DisconnectedError,
    GraphError,
    GuardExceededError,
    NodalTailsError,
    QuasistabilityViolation,
)
from .stability import (
    HalfInt,
    Multidegree,
    base_multidegree,
    beta,
    enumerate_quasistable_deg0,
    is_quasistable,
    is_quasistable_fast,
    twist_multidegree,
)
from .tails import NestedTails, TailChain, enumerate_tails, nested_chain, nested_tails, one_tails

__version__ = "0.1.0"
