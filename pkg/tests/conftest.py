import numpy as np
import pytest

from percolab import generators
from percolab.graph import build
from percolab.percolation import from_mask


@pytest.fixture
def triangle():
    return generators.complete(3)


@pytest.fixture
def k4():
    return generators.complete(4)


@pytest.fixture
def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build(10, outer + spokes + inner)


@pytest.fixture
def heawood():
    return generators.pp_incidence(2)


@pytest.fixture
def full():
    """The subgraph keeping every edge of G."""
    return lambda G: from_mask(G, np.ones(G.m, dtype=bool))


@pytest.fixture
def none():
    """The edgeless spanning subgraph of G."""
    return lambda G: from_mask(G, np.zeros(G.m, dtype=bool))
