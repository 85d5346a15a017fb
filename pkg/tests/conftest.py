from __future__ import annotations

import numpy as np
import pytest

from imlab.diffusion import SeedSet
from imlab.graphs import Graph, ProbabilityModel, assign_probabilities


@pytest.fixture
def path3():
    """Directed path 0 -> 1 -> 2."""
    return Graph.from_arcs(3, [(0, 1), (1, 2)])


@pytest.fixture
def path3_half(path3):
    return assign_probabilities(path3, ProbabilityModel.constant(0.5))


@pytest.fixture
def seed0():
    return SeedSet.of([0])


def random_graph(rng: np.random.Generator, n: int, density: float) -> Graph:
    """Random directed graph with at least one arc."""
    mask = rng.random((n, n)) < density
    np.fill_diagonal(mask, False)
    src, dst = np.nonzero(mask)
    if src.size == 0:
        u = int(rng.integers(n))
        v = (u + 1) % n
        return Graph.from_arcs(n, [(u, v)])
    return Graph.from_arcs(n, list(zip(src.tolist(), dst.tolist())))


def bfs_levels(graph: Graph, sources) -> dict[int, int]:
    """Independent breadth-first oracle: vertex -> distance from sources."""
    level = {int(s): 0 for s in sources}
    frontier = sorted(level)
    d = 0
    while frontier:
        d += 1
        nxt = []
        for u in frontier:
            for v in graph.out_neighbors(u):
                v = int(v)
                if v not in level:
                    level[v] = d
                    nxt.append(v)
        frontier = sorted(nxt)
    return level


def scale_free_graph(rng: np.random.Generator, n: int, m_attach: int) -> Graph:
    """Preferential-attachment graph, symmetrized to arcs both ways."""
    targets = list(range(m_attach))
    repeated: list[int] = []
    edges = []
    for v in range(m_attach, n):
        for t in set(targets):
            edges.append((v, t))
            repeated.extend([v, t])
        targets = [repeated[i] for i in rng.integers(0, len(repeated), size=m_attach)]
    arcs = edges + [(b, a) for a, b in edges]
    return Graph.from_arcs(n, arcs)
