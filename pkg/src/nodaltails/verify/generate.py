"""Seeded random dual graphs: a uniform spanning tree plus extra edges and loops."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from ..curve_graph import DualGraph, build_graph, max_components

DEFAULT_SEED = 20240611


@dataclass(frozen=True)
class GenParams:
    p_range: tuple[int, int] = (2, 8)
    extra_edges: tuple[int, int] = (0, 6)
    loop_probability: Fraction = field(default=Fraction(1, 10))
    master_seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        lo, hi = self.p_range
        if not 1 <= lo <= hi <= max_components():
            raise ValueError(f"p_range {self.p_range} must satisfy 1 <= lo <= hi <= {max_components()}")
        elo, ehi = self.extra_edges
        if not 0 <= elo <= ehi:
            raise ValueError(f"extra_edges {self.extra_edges} must satisfy 0 <= lo <= hi")
        prob = Fraction(self.loop_probability)
        if not 0 <= prob <= 1:
            raise ValueError("loop_probability must lie in [0, 1]")
        object.__setattr__(self, "loop_probability", prob)
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict:
        d = asdict(self)
        d["p_range"] = list(self.p_range)
        d["extra_edges"] = list(self.extra_edges)
        d["loop_probability"] = str(self.loop_probability)
        return d


def trial_rng(params: GenParams, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([params.master_seed, trial]))


def random_tree_edges(rng: np.random.Generator, p: int) -> list[tuple[int, int]]:
    """Uniform labelled tree on ``1..p`` decoded from a random Pruefer sequence."""
    if p == 1:
        return []
    if p == 2:
        return [(1, 2)]
    seq = [int(x) for x in rng.integers(1, p + 1, size=p - 2)]
    degree = [1] * (p + 1)
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = next(u for u in range(1, p + 1) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (x for x in range(1, p + 1) if degree[x] == 1)
    edges.append((u, w))
    return edges


def random_graph(params: GenParams, trial: int) -> DualGraph:
    """Graph number ``trial`` of the corpus described by ``params``.

    Extra edges join uniformly drawn pairs of distinct components; each extra
    edge slot becomes a loop instead with ``loop_probability``.
    """
    rng = trial_rng(params, trial)
    p = int(rng.integers(params.p_range[0], params.p_range[1] + 1))
    edges = random_tree_edges(rng, p)
    n_extra = int(rng.integers(params.extra_edges[0], params.extra_edges[1] + 1))
    prob = params.loop_probability
    for _ in range(n_extra):
        loop = int(rng.integers(0, prob.denominator)) < prob.numerator
        if loop or p == 1:
            v = int(rng.integers(1, p + 1))
            edges.append((v, v))
        else:
            a, b = (int(x) + 1 for x in rng.choice(p, size=2, replace=False))
            edges.append((min(a, b), max(a, b)))
    return build_graph(p, edges)
