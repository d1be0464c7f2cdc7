from __future__ import annotations

import pytest

from nodaltails.fixtures import G0, G1, G6, GBAN


@pytest.fixture
def g0():
    return G0


@pytest.fixture
def gban():
    return GBAN


@pytest.fixture
def g1():
    return G1


@pytest.fixture
def g6():
    return G6
