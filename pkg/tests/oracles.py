"""Independent reference implementations used to cross-check the package.

These deliberately avoid the code paths they validate: circle overlap is
estimated by Monte Carlo point sampling, and spanning trees are minimized
by exhaustive enumeration of every labeled tree.
"""

import itertools
import math
from functools import lru_cache

import numpy as np
from numba import njit

_POOL_SIZE = 10_000_000
_pool = None


def _point_pool() -> tuple[np.ndarray, np.ndarray]:
    """Shared uniform [0,1)^2 pool; one allocation for the whole session."""
    global _pool
    if _pool is None:
        rng = np.random.default_rng(20240817)
        _pool = (
            rng.random(_POOL_SIZE, dtype=np.float32),
            rng.random(_POOL_SIZE, dtype=np.float32),
        )
    return _pool


@njit(cache=True, fastmath=True)
def _count_in_both(u, v, x0, sx, y0, sy, d, r1sq, r2sq):
    # float64 arithmetic: boxes can be slivers ~1e-6 m wide at |x| ~ 100 m
    count = 0
    for i in range(u.shape[0]):
        x = x0 + sx * np.float64(u[i])
        y = y0 + sy * np.float64(v[i])
        if x * x + y * y <= r1sq and (x - d) * (x - d) + y * y <= r2sq:
            count += 1
    return count


def mc_overlap_area(r_rotor: float, r_wake: float, d: float, n: int = _POOL_SIZE):
    """Monte Carlo estimate of the two-disk intersection area.

    Samples uniformly over a region guaranteed to contain the intersection:
    the tight bounding box of the lens in the partial-overlap regime (which
    keeps the hit rate near 2/3 even for slivers), else the bounding square
    of the smaller disk.  Returns (estimate_m2, standard_error_m2).
    """
    u, v = _point_pool()
    u, v = u[:n], v[:n]
    r1, r2 = float(r_wake), float(r_rotor)  # circle 1 at origin, circle 2 at (d, 0)
    d = float(d)

    if d >= r1 + r2:
        return 0.0, 0.0
    if d <= abs(r1 - r2):  # bounding square of the contained (smaller) disk
        r_small = min(r1, r2)
        cx = 0.0 if r1 <= r2 else d
        x0, sx = cx - r_small, 2.0 * r_small
        y0, sy = -r_small, 2.0 * r_small
    else:  # tight bounding box of the lens
        x_lo = max(-r1, d - r2)
        x_hi = min(r1, d + r2)
        # vertical extent: the smaller disk's top when it lies inside the
        # other circle, else the circle crossing point
        r_small = min(r1, r2)
        top_x = 0.0 if r1 <= r2 else d
        other_x, other_r = (d, r2) if r1 <= r2 else (0.0, r1)
        if (top_x - other_x) ** 2 + r_small * r_small <= other_r * other_r:
            y_half = r_small
        else:
            x_cross = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
            y_half = math.sqrt(max(r1 * r1 - x_cross * x_cross, 0.0))
        x0, sx = x_lo, x_hi - x_lo
        y0, sy = -y_half, 2.0 * y_half
        if sx <= 0.0 or sy <= 0.0:
            return 0.0, 0.0

    count = _count_in_both(u, v, x0, sx, y0, sy, d, r1 * r1, r2 * r2)
    box = sx * sy
    p = count / n
    estimate = p * box
    stderr = box * math.sqrt(max(p * (1.0 - p), 0.0) / n)
    return estimate, stderr


@lru_cache(maxsize=8)
def _all_labeled_trees(n: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Every labeled spanning tree on n nodes, via Pruefer decoding."""
    if n == 1:
        return ((),)
    if n == 2:
        return (((0, 1),),)
    trees = []
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        edges = []
        leaves = sorted(i for i in range(n) if degree[i] == 1)
        for x in seq:
            leaf = leaves.pop(0)
            edges.append((min(leaf, x), max(leaf, x)))
            degree[leaf] -= 1
            degree[x] -= 1
            if degree[x] == 1:
                # keep the leaf list ordered; insertion point by scan (n <= 7)
                k = 0
                while k < len(leaves) and leaves[k] < x:
                    k += 1
                leaves.insert(k, x)
        u, w = [i for i in range(n) if degree[i] == 1]
        edges.append((u, w))
        trees.append(tuple(sorted(edges)))
    return tuple(trees)


def brute_force_mst(points) -> tuple[float, tuple[tuple[int, int], ...]]:
    """Minimum spanning tree by exhaustive enumeration (n <= 7)."""
    pts = [tuple(map(float, p)) for p in points]
    n = len(pts)
    if n > 7:
        raise ValueError("exhaustive enumeration is limited to n <= 7")
    dist = [[math.dist(a, b) for b in pts] for a in pts]
    best_len = math.inf
    best_edges: tuple[tuple[int, int], ...] = ()
    for edges in _all_labeled_trees(n):
        total = 0.0
        for i, j in edges:
            total += dist[i][j]
        if total < best_len:
            best_len = total
            best_edges = edges
    return best_len, best_edges
