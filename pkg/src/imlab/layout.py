"""Deterministic force-directed layout for whole-network overviews.

Spring-electrical scheme with linear cooling: arcs pull their endpoints
together, all vertex pairs repel. Small graphs use exact pairwise
repulsion; larger ones approximate it with a uniform spatial grid of
aggregated charges (cell mass at cell centroid). Disconnected components
are packed onto non-overlapping shelves afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph

EXACT_REPULSION_MAX_N = 1500
GRID_CELLS_PER_SIDE = 32


@dataclass(frozen=True)
class Layout:
    positions: np.ndarray  # [n, 2]
    algorithm: str
    iterations: int
    rng_seed: int

    def bbox(self) -> tuple[float, float, float, float]:
        mins = self.positions.min(axis=0)
        maxs = self.positions.max(axis=0)
        return float(mins[0]), float(mins[1]), float(maxs[0]), float(maxs[1])


def _components(graph: Graph) -> np.ndarray:
    """Weakly-connected component label per vertex."""
    label = np.full(graph.n, -1, dtype=np.int64)
    nxt = 0
    for start in range(graph.n):
        if label[start] >= 0:
            continue
        label[start] = nxt
        stack = [start]
        while stack:
            u = stack.pop()
            for v in np.concatenate([graph.out_neighbors(u), graph.in_neighbors(u)]):
                if label[v] < 0:
                    label[v] = nxt
                    stack.append(int(v))
        nxt += 1
    return label


def _exact_repulsion(pos: np.ndarray, k: float) -> np.ndarray:
    delta = pos[:, None, :] - pos[None, :, :]
    dist2 = (delta**2).sum(axis=2)
    np.fill_diagonal(dist2, 1.0)
    dist2 = np.maximum(dist2, 1e-12)
    force = k * k / dist2
    np.fill_diagonal(force, 0.0)
    return (delta * force[:, :, None] / np.sqrt(dist2)[:, :, None]).sum(axis=1)


def _grid_repulsion(pos: np.ndarray, k: float) -> np.ndarray:
    """Far-field repulsion from per-cell aggregated charges."""
    g = GRID_CELLS_PER_SIDE
    mins = pos.min(axis=0)
    span = np.maximum(pos.max(axis=0) - mins, 1e-9)
    cell = np.minimum((pos - mins) / span * g, g - 1).astype(np.int64)
    cid = cell[:, 0] * g + cell[:, 1]
    mass = np.bincount(cid, minlength=g * g).astype(float)
    cx = np.bincount(cid, weights=pos[:, 0], minlength=g * g)
    cy = np.bincount(cid, weights=pos[:, 1], minlength=g * g)
    occupied = mass > 0
    centroid = np.stack(
        [cx[occupied] / mass[occupied], cy[occupied] / mass[occupied]], axis=1
    )
    cmass = mass[occupied]
    delta = pos[:, None, :] - centroid[None, :, :]  # [n, cells, 2]
    dist2 = np.maximum((delta**2).sum(axis=2), (0.25 * k) ** 2)
    force = k * k * cmass[None, :] / dist2
    disp = (delta * (force / np.sqrt(dist2))[:, :, None]).sum(axis=1)
    # a vertex's own charge is inside its cell centroid; with dist2 floored
    # the self-term is bounded and vanishes for points at their centroid
    return disp


def _attraction(graph: Graph, pos: np.ndarray, k: float) -> np.ndarray:
    delta = pos[graph.src] - pos[graph.dst]
    dist = np.maximum(np.sqrt((delta**2).sum(axis=1)), 1e-12)
    pull = dist / k  # spring force dist^2/k, normalized direction
    vec = delta * pull[:, None]
    disp = np.zeros_like(pos)
    np.add.at(disp, graph.src, -vec)
    np.add.at(disp, graph.dst, vec)
    return disp


def _pack_components(pos: np.ndarray, label: np.ndarray, pad: float) -> np.ndarray:
    """Shift component bounding boxes onto non-overlapping shelves."""
    ncomp = int(label.max()) + 1
    if ncomp == 1:
        return pos
    boxes = []
    for c in range(ncomp):
        mask = label == c
        mins = pos[mask].min(axis=0)
        maxs = pos[mask].max(axis=0)
        boxes.append((c, mins, maxs - mins))
    # widest first, fill shelves left to right
    boxes.sort(key=lambda b: (-b[2][0], b[0]))
    total_w = sum(b[2][0] + pad for b in boxes)
    shelf_w = max(total_w / np.sqrt(ncomp), max(b[2][0] for b in boxes) + pad)
    out = pos.copy()
    x = y = shelf_h = 0.0
    for c, mins, size in boxes:
        if x > 0 and x + size[0] > shelf_w:
            x = 0.0
            y += shelf_h + pad
            shelf_h = 0.0
        mask = label == c
        out[mask] = pos[mask] - mins + np.array([x, y])
        x += size[0] + pad
        shelf_h = max(shelf_h, float(size[1]))
    return out


def compute_layout(graph: Graph, iterations: int = 500, rng_seed: int = 0) -> Layout:
    """Force-directed positions, deterministic for a given rng_seed."""
    if graph.n == 0:
        raise ValueError("cannot lay out an empty graph")
    n = graph.n
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(rng_seed)))
    side = float(np.sqrt(n))
    pos = rng.random((n, 2)) * side
    k = side / np.sqrt(n)  # ideal spring length; area side^2 over n vertices
    temp0 = side / 10.0
    for it in range(iterations):
        if n <= EXACT_REPULSION_MAX_N:
            disp = _exact_repulsion(pos, k)
        else:
            disp = _grid_repulsion(pos, k)
        disp += _attraction(graph, pos, k)
        length = np.maximum(np.sqrt((disp**2).sum(axis=1)), 1e-12)
        temp = temp0 * (1.0 - it / iterations)
        pos = pos + disp / length[:, None] * np.minimum(length, temp)[:, None]
    label = _components(graph)
    pos = _pack_components(pos, label, pad=2.0 * k)
    return Layout(
        positions=pos,
        algorithm="spring-electrical",
        iterations=iterations,
        rng_seed=rng_seed,
    )
