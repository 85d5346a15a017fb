"""Directed graphs with per-arc activation probabilities.

Graphs are loaded from SNAP-style whitespace edge lists ('#' lines are
comments). External vertex labels are remapped to dense 0-based ids;
adjacency is stored in CSR form so neighbor queries are O(1) slices.
Graph and WeightedGraph are immutable after construction and safe to
share across parallel workers.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np


class GraphError(ValueError):
    """Invalid graph input (malformed file, bad parameters, empty edge set)."""


def _build_csr(n: int, src: np.ndarray, dst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """CSR arrays (ptr, adj) with adj sorted per source vertex."""
    order = np.lexsort((dst, src))
    ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(ptr, src + 1, 1)
    np.cumsum(ptr, out=ptr)
    return ptr, dst[order].copy()


@dataclass(frozen=True)
class Graph:
    """Immutable directed graph with dense 0-based vertex ids.

    Arcs are stored sorted by (source, target) with duplicates collapsed
    and self-loops dropped; `labels[v]` maps a dense id back to the
    external label it was read from.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    out_ptr: np.ndarray
    out_adj: np.ndarray
    in_ptr: np.ndarray
    in_adj: np.ndarray
    labels: np.ndarray
    duplicates_collapsed: int = 0
    self_loops_dropped: int = 0

    @classmethod
    def from_arcs(
        cls,
        n: int,
        arcs: Iterable[tuple[int, int]],
        labels: Sequence[int] | None = None,
    ) -> "Graph":
        pairs = np.asarray(list(arcs), dtype=np.int64)
        if pairs.size == 0:
            raise GraphError("graph has no arcs; a diffusion needs at least one arc")
        src, dst = pairs[:, 0], pairs[:, 1]
        if src.min() < 0 or max(src.max(), dst.max()) >= n:
            raise GraphError("arc endpoint outside vertex range")

        loop_mask = src == dst
        n_loops = int(loop_mask.sum())
        if n_loops:
            src, dst = src[~loop_mask], dst[~loop_mask]
        if src.size == 0:
            raise GraphError("graph has no arcs after dropping self-loops")

        keys = src * np.int64(n) + dst
        uniq, idx = np.unique(keys, return_index=True)
        n_dup = src.size - uniq.size
        order = np.sort(idx)
        src, dst = src[order], dst[order]
        # unique-by-key then re-sort lexicographically by (src, dst)
        order = np.lexsort((dst, src))
        src, dst = src[order].copy(), dst[order].copy()

        out_ptr, out_adj = _build_csr(n, src, dst)
        in_ptr, in_adj = _build_csr(n, dst, src)
        lab = np.arange(n, dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
        if lab.shape != (n,):
            raise GraphError("labels must have exactly one entry per vertex")
        return cls(
            n=n,
            src=src,
            dst=dst,
            out_ptr=out_ptr,
            out_adj=out_adj,
            in_ptr=in_ptr,
            in_adj=in_adj,
            labels=lab,
            duplicates_collapsed=n_dup,
            self_loops_dropped=n_loops,
        )

    @property
    def arc_count(self) -> int:
        return int(self.src.size)

    def out_neighbors(self, v: int) -> np.ndarray:
        return self.out_adj[self.out_ptr[v] : self.out_ptr[v + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        return self.in_adj[self.in_ptr[v] : self.in_ptr[v + 1]]

    def out_degree(self, v: int) -> int:
        return int(self.out_ptr[v + 1] - self.out_ptr[v])

    def in_degree(self, v: int) -> int:
        return int(self.in_ptr[v + 1] - self.in_ptr[v])

    def out_degrees(self) -> np.ndarray:
        return np.diff(self.out_ptr)

    def in_degrees(self) -> np.ndarray:
        return np.diff(self.in_ptr)

    def total_degrees(self) -> np.ndarray:
        return self.out_degrees() + self.in_degrees()

    def content_hash(self) -> str:
        h = hashlib.sha256()
        h.update(str(self.n).encode())
        h.update(self.src.tobytes())
        h.update(self.dst.tobytes())
        return h.hexdigest()


def load_graph(path: str | Path, directedness: str = "directed") -> Graph:
    """Load a whitespace edge list; '#' lines are comments.

    `directedness` is "directed" or "undirected-as-bidirectional"; the
    latter emits both arc directions per input line. External ids are
    remapped to dense 0-based ids in ascending label order.
    """
    if directedness not in ("directed", "undirected-as-bidirectional"):
        raise GraphError(f"unknown directedness {directedness!r}")
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"edge list not found: {path}")

    raw: list[tuple[int, int]] = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split()
            if len(parts) != 2:
                raise GraphError(f"{path}:{lineno}: expected two integers, got {stripped!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphError(f"{path}:{lineno}: expected two integers, got {stripped!r}") from None
            raw.append((u, v))
    if not raw:
        raise GraphError(f"{path}: empty edge set")

    arr = np.asarray(raw, dtype=np.int64)
    labels = np.unique(arr)
    remap = {int(lab): i for i, lab in enumerate(labels)}
    dense = np.vectorize(remap.__getitem__, otypes=[np.int64])(arr)
    arcs = [(int(u), int(v)) for u, v in dense]
    if directedness == "undirected-as-bidirectional":
        arcs += [(v, u) for u, v in arcs]
    return Graph.from_arcs(len(labels), arcs, labels=labels)


def write_edge_list(graph: Graph, path: str | Path) -> None:
    """Serialize arcs as external-label pairs, one per line."""
    path = Path(path)
    with path.open("w") as fh:
        for u, v in zip(graph.src, graph.dst):
            fh.write(f"{graph.labels[u]} {graph.labels[v]}\n")


def write_manifest(graph: Graph, name: str, path: str | Path, idmap_location: str = "") -> None:
    manifest = {
        "schema": "imlab/manifest@1",
        "dataset": name,
        "nodes": graph.n,
        "arcs": graph.arc_count,
        "duplicates_collapsed": graph.duplicates_collapsed,
        "self_loops_dropped": graph.self_loops_dropped,
        "id_map": idmap_location,
    }
    Path(path).write_text(json.dumps(manifest, sort_keys=True, indent=2) + "\n")


@dataclass(frozen=True)
class ProbabilityModel:
    """Per-arc activation probability assignment.

    kind: "constant" (needs p), "weighted-cascade" (p(u,v) = 1/in_degree(v)),
    or "trivalency" (per-arc uniform choice from `choices`, seeded).
    """

    kind: str
    p: float | None = None
    choices: tuple[float, ...] = (0.1, 0.01, 0.001)
    rng_seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind == "constant":
            if self.p is None or not (0.0 <= self.p <= 1.0):
                raise GraphError(f"constant probability must lie in [0,1], got {self.p}")
        elif self.kind == "weighted-cascade":
            pass
        elif self.kind == "trivalency":
            if not self.choices or any(not (0.0 <= c <= 1.0) for c in self.choices):
                raise GraphError("trivalency choices must lie in [0,1]")
            if self.rng_seed is None:
                raise GraphError("trivalency requires an rng seed")
        else:
            raise GraphError(f"unknown probability model {self.kind!r}")

    @classmethod
    def constant(cls, p: float) -> "ProbabilityModel":
        return cls(kind="constant", p=p)

    @classmethod
    def weighted_cascade(cls) -> "ProbabilityModel":
        return cls(kind="weighted-cascade")

    @classmethod
    def trivalency(cls, choices: Sequence[float] = (0.1, 0.01, 0.001), rng_seed: int = 0) -> "ProbabilityModel":
        return cls(kind="trivalency", choices=tuple(choices), rng_seed=rng_seed)

    def describe(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.kind == "constant":
            d["p"] = self.p
        elif self.kind == "trivalency":
            d["choices"] = list(self.choices)
            d["rng_seed"] = self.rng_seed
        return d

    @classmethod
    def from_description(cls, d: dict) -> "ProbabilityModel":
        kind = d.get("kind")
        if kind == "constant":
            return cls.constant(float(d["p"]))
        if kind == "weighted-cascade":
            return cls.weighted_cascade()
        if kind == "trivalency":
            return cls.trivalency(d.get("choices", (0.1, 0.01, 0.001)), int(d["rng_seed"]))
        raise GraphError(f"unknown probability model {kind!r}")


@dataclass(frozen=True)
class WeightedGraph:
    """Graph plus per-arc probabilities aligned with arc order."""

    graph: Graph
    prob: np.ndarray
    model: ProbabilityModel

    def __post_init__(self) -> None:
        if self.prob.shape != self.graph.src.shape:
            raise GraphError("probability array must have one entry per arc")
        if self.prob.size and (self.prob.min() < 0.0 or self.prob.max() > 1.0):
            raise GraphError("arc probabilities must lie in [0,1]")

    def out_probs(self, v: int) -> np.ndarray:
        """Probabilities aligned with out_neighbors(v)."""
        return self._out_prob[self.graph.out_ptr[v] : self.graph.out_ptr[v + 1]]

    @property
    def _out_prob(self) -> np.ndarray:
        # prob is stored in (src, dst) arc order, which is exactly CSR order
        return self.prob


def assign_probabilities(graph: Graph, model: ProbabilityModel) -> WeightedGraph:
    """Attach one probability per arc according to `model`.

    Deterministic for constant and weighted-cascade; trivalency is
    deterministic given its rng seed (arc order is canonical).
    """
    if model.kind == "constant":
        prob = np.full(graph.arc_count, float(model.p))
    elif model.kind == "weighted-cascade":
        indeg = graph.in_degrees().astype(float)
        prob = 1.0 / indeg[graph.dst]
    elif model.kind == "trivalency":
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(model.rng_seed)))
        prob = rng.choice(np.asarray(model.choices, dtype=float), size=graph.arc_count)
    else:  # pragma: no cover - rejected in ProbabilityModel
        raise GraphError(f"unknown probability model {model.kind!r}")
    return WeightedGraph(graph=graph, prob=prob, model=model)


def degree_stats(graph: Graph) -> np.ndarray:
    """Per-vertex (in_degree, out_degree, total_degree), shape (n, 3)."""
    ind = graph.in_degrees()
    outd = graph.out_degrees()
    return np.stack([ind, outd, ind + outd], axis=1)
