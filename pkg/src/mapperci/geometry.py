"""Point clouds, distance matrices, neighborhood graphs and union-find."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .errors import InputError

__all__ = [
    "PointCloud",
    "DistanceMatrix",
    "NeighborhoodGraph",
    "UnionFind",
    "pairwise_distances",
    "hausdorff",
    "rips_graph",
    "connected_components",
    "subsample",
    "as_rng",
]


def as_rng(rng=None) -> np.random.Generator:
    """Coerce ``None``/int/Generator into a PCG64-backed ``Generator``."""
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


@dataclass(frozen=True)
class PointCloud:
    """``n`` points in ``R^D`` stored as a read-only ``(n, D)`` float array."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.array(self.points, dtype=np.float64)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise InputError(f"point cloud must be a non-empty (n, D) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            bad = int(np.argwhere(~np.isfinite(pts))[0, 0])
            raise InputError(f"non-finite coordinate in point {bad}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def take(self, idx) -> "PointCloud":
        return PointCloud(self.points[np.asarray(idx, dtype=np.intp)])


@dataclass(frozen=True)
class DistanceMatrix:
    """Dense symmetric ``n x n`` matrix of pairwise distances."""

    d: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=np.float64)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] < 1:
            raise InputError(f"distance matrix must be square and non-empty, got shape {d.shape}")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise InputError("distances must be finite and nonnegative")
        if np.any(np.diag(d) != 0):
            raise InputError("distance matrix must have a zero diagonal")
        if not np.array_equal(d, d.T):
            raise InputError("distance matrix must be symmetric")
        d.setflags(write=False)
        object.__setattr__(self, "d", d)

    @classmethod
    def _trusted(cls, d: np.ndarray) -> "DistanceMatrix":
        # skip O(n^2) validation for matrices derived from a validated one
        obj = object.__new__(cls)
        d.setflags(write=False)
        object.__setattr__(obj, "d", d)
        return obj

    @property
    def n(self) -> int:
        return self.d.shape[0]

    def take(self, idx) -> "DistanceMatrix":
        idx = np.asarray(idx, dtype=np.intp)
        return DistanceMatrix._trusted(self.d[np.ix_(idx, idx)])

    def diameter(self) -> float:
        return float(self.d.max())


@dataclass(frozen=True)
class NeighborhoodGraph:
    """1-skeleton of the Rips complex at scale ``delta``.

    ``edges`` is an ``(m, 2)`` integer array with ``i < j`` on every row,
    sorted lexicographically.
    """

    n: int
    edges: np.ndarray
    delta: float

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.edges}


class UnionFind:
    """Disjoint sets over ``0..n-1`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def pairwise_distances(pc: PointCloud) -> DistanceMatrix:
    if not isinstance(pc, PointCloud):
        pc = PointCloud(pc)
    if pc.n == 1:
        return DistanceMatrix._trusted(np.zeros((1, 1)))
    return DistanceMatrix._trusted(squareform(pdist(pc.points)))


def _index_array(idx, n: int, name: str) -> np.ndarray:
    arr = np.unique(np.asarray(list(idx) if not isinstance(idx, np.ndarray) else idx, dtype=np.intp))
    if arr.size == 0:
        raise InputError(f"index set {name} is empty")
    if arr[0] < 0 or arr[-1] >= n:
        raise InputError(f"index set {name} out of range for {n} points")
    return arr


def hausdorff(A: Iterable[int], B: Iterable[int], dm: DistanceMatrix) -> float:
    """Hausdorff distance between two subsets of the cloud, given by indices."""
    a = _index_array(A, dm.n, "A")
    b = _index_array(B, dm.n, "B")
    block = dm.d[np.ix_(a, b)]
    return float(max(block.min(axis=1).max(), block.min(axis=0).max()))


def hausdorff_to_full(sub: np.ndarray, dm: DistanceMatrix) -> float:
    """Hausdorff distance from a subset to the whole cloud (one-sided suffices)."""
    return float(dm.d[:, sub].min(axis=1).max())


def rips_graph(dm: DistanceMatrix, delta: float) -> NeighborhoodGraph:
    """Edges between distinct points at distance ``<= delta``."""
    delta = float(delta)
    if not np.isfinite(delta) or delta < 0:
        raise InputError(f"delta must be a finite nonnegative number, got {delta}")
    i, j = np.nonzero(np.triu(dm.d <= delta, k=1))
    edges = np.column_stack([i, j]).astype(np.intp)
    return NeighborhoodGraph(n=dm.n, edges=edges, delta=delta)


def connected_components(g: NeighborhoodGraph, subset: Sequence[int] | np.ndarray) -> list[list[int]]:
    """Partition ``subset`` into connected pieces of the induced subgraph.

    Blocks are sorted internally and ordered by their smallest member.
    """
    sub = np.unique(np.asarray(subset, dtype=np.intp))
    if sub.size == 0:
        return []
    if sub[0] < 0 or sub[-1] >= g.n:
        raise InputError("subset contains vertices outside the graph")
    local = np.full(g.n, -1, dtype=np.intp)
    local[sub] = np.arange(sub.size)
    if len(g.edges):
        lu, lv = local[g.edges[:, 0]], local[g.edges[:, 1]]
        keep = (lu >= 0) & (lv >= 0)
        pairs = zip(lu[keep].tolist(), lv[keep].tolist())
    else:
        pairs = ()
    uf = UnionFind(sub.size)
    for u, v in pairs:
        uf.union(u, v)
    blocks: dict[int, list[int]] = {}
    for k, vertex in enumerate(sub.tolist()):
        blocks.setdefault(uf.find(k), []).append(vertex)
    return sorted(blocks.values(), key=lambda b: b[0])


def subsample(pc_or_n, m: int, rng=None) -> np.ndarray:
    """``m`` distinct indices drawn uniformly without replacement, sorted."""
    n = pc_or_n if isinstance(pc_or_n, (int, np.integer)) else pc_or_n.n
    m = int(m)
    if not 1 <= m <= n:
        raise InputError(f"subsample size must lie in [1, {n}], got {m}")
    return np.sort(as_rng(rng).choice(n, size=m, replace=False))
