"""Seed-selection algorithms behind a name-keyed registry.

HIGHDEG picks the k highest total-degree vertices; SDISC applies the
single-discount rule (each chosen seed lowers the effective degree of
its neighbors by one); RANDOM is a reproducible uniform baseline. Ties
always break toward the smaller vertex id so results are independent of
input arc order.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .diffusion import SeedSet
from .graphs import Graph


class SelectionError(ValueError):
    pass


def _check_k(graph: Graph, k: int) -> None:
    if not (0 < k <= graph.n):
        raise SelectionError(f"k={k} out of range for {graph.n} vertices")


def highdeg(graph: Graph, k: int, rng_seed: int | None = None) -> SeedSet:
    """The k vertices of largest total degree, ties toward smaller id."""
    _check_k(graph, k)
    deg = graph.total_degrees()
    order = np.lexsort((np.arange(graph.n), -deg))
    return SeedSet.of(order[:k], origin="HIGHDEG", k=k)


def _unique_neighbors(graph: Graph, v: int) -> np.ndarray:
    return np.union1d(graph.out_neighbors(v), graph.in_neighbors(v))


def sdisc(graph: Graph, k: int, rng_seed: int | None = None) -> SeedSet:
    """Single-discount heuristic on total degree.

    Repeats k times: take the unselected vertex with the largest current
    discounted degree (ties toward smaller id), then decrement each of
    its neighbors' discounted degree by one.
    """
    _check_k(graph, k)
    disc = graph.total_degrees().astype(np.int64)
    chosen: list[int] = []
    taken = np.zeros(graph.n, dtype=bool)
    for _ in range(k):
        masked = np.where(taken, np.int64(-1), disc)
        s = int(masked.argmax())  # argmax returns the first (smallest) id on ties
        chosen.append(s)
        taken[s] = True
        disc[_unique_neighbors(graph, s)] -= 1
    return SeedSet.of(chosen, origin="SDISC", k=k)


def random_seeds(graph: Graph, k: int, rng_seed: int = 0) -> SeedSet:
    """k distinct uniform vertices, reproducible from rng_seed."""
    _check_k(graph, k)
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng_seed)))
    picks = rng.choice(graph.n, size=k, replace=False)
    return SeedSet.of(picks, origin="RANDOM", k=k)


ALGORITHMS: dict[str, Callable[..., SeedSet]] = {
    "HIGHDEG": highdeg,
    "SDISC": sdisc,
    "RANDOM": random_seeds,
}


def select(name: str, graph: Graph, k: int, rng_seed: int | None = None) -> SeedSet:
    """Invoke a registered algorithm by name."""
    try:
        algo = ALGORITHMS[name]
    except KeyError:
        raise SelectionError(f"unknown algorithm {name!r}; known: {sorted(ALGORITHMS)}") from None
    if name == "RANDOM":
        return algo(graph, k, rng_seed=0 if rng_seed is None else rng_seed)
    return algo(graph, k)
