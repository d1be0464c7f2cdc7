"""Drive the lemma suite over a seeded random corpus."""

from __future__ import annotations

from typing import Callable

from .generate import GenParams, random_graph
from .lemmas import SuiteReport, lemma_suite


def run_suite(
    params: GenParams,
    trials: int,
    start: int = 0,
    progress: Callable[[int], None] | None = None,
) -> SuiteReport:
    """Suite tallies over graphs ``start .. start + trials - 1`` of the corpus.

    Reports over disjoint trial ranges merge into the report of their union.
    """
    report = SuiteReport()
    for t in range(start, start + trials):
        lemma_suite(random_graph(params, t), trial=t, report=report)
        if progress is not None:
            progress(t)
    return report
