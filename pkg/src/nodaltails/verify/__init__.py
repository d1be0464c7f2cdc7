"""Random corpora, independent oracles and the lemma falsification suite."""

from __future__ import annotations

from .generate import GenParams, random_graph
from .lemmas import CATALOG, SuiteReport, lemma_suite
from .oracles import neron_component_check, spanning_tree_count
from .runner import run_suite
