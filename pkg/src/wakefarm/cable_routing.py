"""Euclidean minimum spanning tree over turbine and substation positions."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class CableTree:
    """Spanning tree of cable runs; node 0..n-1, substation tagged by index."""

    nodes: tuple[tuple[float, float], ...]
    edges: tuple[tuple[int, int], ...]  # index pairs, i < j
    total_length: float  # m
    substation_index: int | None = None

    def __post_init__(self):
        if len(self.edges) != len(self.nodes) - 1:
            raise ValueError("a spanning tree has node count - 1 edges")
        recomputed = sum(
            math.dist(self.nodes[i], self.nodes[j]) for i, j in self.edges
        )
        if abs(recomputed - self.total_length) > 1e-9 * max(1.0, recomputed):
            raise ValueError("total_length does not match edge lengths")

    def to_json(self) -> str:
        return json.dumps(
            {
                "nodes": [list(p) for p in self.nodes],
                "edges": [list(e) for e in self.edges],
                "total_length_m": self.total_length,
                "substation_index": self.substation_index,
            },
            indent=2,
        )


def minimum_spanning_tree(
    points: Sequence[tuple[float, float]], substation_index: int | None = None
) -> CableTree:
    """Exact Euclidean MST via Prim's algorithm on the complete graph.

    Deterministic: ties resolve to the lowest-index candidate node, so equal
    inputs always yield the same edge list.  Coincident points are allowed
    and join through zero-length edges.
    """
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise ValueError("need at least one point")
    n = len(pts)
    if n == 1:
        return CableTree(nodes=(tuple(map(float, pts[0])),), edges=(), total_length=0.0,
                         substation_index=substation_index)

    in_tree = np.zeros(n, dtype=bool)
    best_dist = np.full(n, np.inf)
    best_parent = np.full(n, -1, dtype=np.int64)
    in_tree[0] = True
    d0 = np.hypot(pts[:, 0] - pts[0, 0], pts[:, 1] - pts[0, 1])
    best_dist = d0
    best_parent[:] = 0
    best_dist[0] = np.inf

    edges: list[tuple[int, int]] = []
    total = 0.0
    for _ in range(n - 1):
        masked = np.where(in_tree, np.inf, best_dist)
        j = int(np.argmin(masked))  # argmin takes the smallest index on ties
        total += float(masked[j])
        i = int(best_parent[j])
        edges.append((min(i, j), max(i, j)))
        in_tree[j] = True
        dj = np.hypot(pts[:, 0] - pts[j, 0], pts[:, 1] - pts[j, 1])
        closer = ~in_tree & (dj < best_dist)
        best_dist[closer] = dj[closer]
        best_parent[closer] = j

    edges.sort()
    return CableTree(
        nodes=tuple(tuple(map(float, p)) for p in pts),
        edges=tuple(edges),
        total_length=total,
        substation_index=substation_index,
    )


def tree_length(tree: CableTree) -> float:
    """Total cable length (m), recomputed from the edge list."""
    return sum(math.dist(tree.nodes[i], tree.nodes[j]) for i, j in tree.edges)
