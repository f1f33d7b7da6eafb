"""Regular interval covers and the Mapper graph built on a Rips 1-skeleton."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, InternalError
from .filters import FilterValues
from .geometry import NeighborhoodGraph, UnionFind, connected_components

__all__ = [
    "IntervalCover",
    "MapperNode",
    "MapperGraph",
    "VARIANTS",
    "build_cover",
    "reduced_midpoints",
    "intersection_crossing_edges",
    "build_mapper",
]

VARIANTS = ("nerve", "edge_multinerve")
PAD_REL = 1e-9


def normalize_variant(variant: str) -> str:
    if variant == "multinerve":
        return "edge_multinerve"
    if variant not in VARIANTS:
        raise InputError(f"unknown Mapper variant {variant!r}; expected one of {VARIANTS}")
    return variant


@dataclass(frozen=True)
class IntervalCover:
    """Consecutive open intervals of common length ``r`` and overlap ``g * r``."""

    intervals: tuple[tuple[float, float], ...]
    r: float
    g: float
    pad: float = 0.0

    @property
    def S(self) -> int:
        return len(self.intervals)

    def overlaps(self) -> list[tuple[float, float]]:
        """Open zones ``I_s ∩ I_{s+1}`` for ``s = 1..S-1``."""
        return [(self.intervals[s + 1][0], self.intervals[s][1]) for s in range(self.S - 1)]

    def locate(self, values: np.ndarray) -> list[np.ndarray]:
        """Indices of ``values`` falling in each interval."""
        values = np.asarray(values)
        return [np.flatnonzero((values > lo) & (values < hi)) for lo, hi in self.intervals]


def build_cover(fmin: float, fmax: float, r: float, g: float) -> IntervalCover:
    """Cover ``[fmin, fmax]`` by intervals anchored at ``fmin`` with step ``(1-g) r``.

    Every interval is widened by ``1e-9 r`` on both sides so that the open
    intervals cover the closed range, endpoints included.
    """
    fmin, fmax, r, g = float(fmin), float(fmax), float(r), float(g)
    if not (math.isfinite(fmin) and math.isfinite(fmax)) or fmax < fmin:
        raise InputError(f"invalid filter range [{fmin}, {fmax}]")
    if not (math.isfinite(r) and r > 0):
        raise InputError(f"resolution must be positive, got {r}")
    if not 0 < g < 0.5:
        raise InputError(f"gain must lie in (0, 1/2), got {g}")
    step = (1.0 - g) * r
    # never below a few ulps of the range, so tiny r still yields open covers
    pad = max(PAD_REL * r, 8 * float(np.spacing(max(abs(fmin), abs(fmax), 1.0))))
    S = 1 + max(0, math.ceil((fmax - fmin - r - pad) / step))
    # correct the closed form against rounding in either direction
    while S > 1 and fmin + (S - 2) * step + r + pad >= fmax:
        S -= 1
    while fmin + (S - 1) * step + r + pad < fmax:
        S += 1
    starts = [fmin + s * step for s in range(S)]
    return IntervalCover(tuple((a - pad, a + r + pad) for a in starts), r, g, pad)


def reduced_midpoints(cover: IntervalCover) -> list[float]:
    """Midpoints of each interval with its overlap zones removed."""
    S, pad = cover.S, cover.pad
    out = []
    for s, (lo, hi) in enumerate(cover.intervals):
        a, b = lo + pad, hi - pad
        if S == 1:
            out.append((a + b) / 2)
            continue
        left = cover.intervals[s - 1][1] - pad if s > 0 else a
        right = cover.intervals[s + 1][0] + pad if s < S - 1 else b
        out.append((left + right) / 2)
    return out


def intersection_crossing_edges(g: NeighborhoodGraph, fv: FilterValues, cover: IntervalCover) -> list[tuple[int, int]]:
    """Rips edges whose open value span contains a whole overlap zone."""
    if g.n != fv.n:
        raise InputError("graph and filter refer to point clouds of different sizes")
    if len(g.edges) == 0 or cover.S < 2:
        return []
    f = fv.values
    lo = np.minimum(f[g.edges[:, 0]], f[g.edges[:, 1]])
    hi = np.maximum(f[g.edges[:, 0]], f[g.edges[:, 1]])
    crossing = np.zeros(len(g.edges), dtype=bool)
    for a, b in cover.overlaps():
        crossing |= (lo <= a) & (hi >= b)
    return [(int(i), int(j)) for i, j in g.edges[crossing]]


@dataclass(frozen=True)
class MapperNode:
    id: int
    interval: int
    members: tuple[int, ...]
    fvalue: float

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class MapperGraph:
    """Nerve of the connected pullback cover.

    ``edges`` may repeat a pair in the ``edge_multinerve`` variant.
    """

    nodes: tuple[MapperNode, ...]
    edges: tuple[tuple[int, int], ...]
    variant: str
    cover: IntervalCover | None = field(default=None, compare=False)

    @property
    def fvalues(self) -> list[float]:
        return [v.fvalue for v in self.nodes]

    def n_components(self) -> int:
        uf = UnionFind(len(self.nodes))
        comps = len(self.nodes)
        for u, v in self.edges:
            comps -= uf.union(u, v)
        return comps

    def betti1(self) -> int:
        return len(self.edges) - len(self.nodes) + self.n_components()


def _components_in(edges: np.ndarray, members: np.ndarray, n: int) -> list[list[int]]:
    sub = NeighborhoodGraph(n=n, edges=edges, delta=0.0)
    return connected_components(sub, members)


def build_mapper(g: NeighborhoodGraph, fv: FilterValues, cover: IntervalCover, variant: str = "nerve") -> MapperGraph:
    """Mapper graph: Rips components of each pre-image, glued along shared points."""
    variant = normalize_variant(variant)
    if g.n != fv.n:
        raise InputError("graph and filter refer to point clouds of different sizes")
    f = fv.values
    pre = cover.locate(f)
    counts = np.zeros(g.n, dtype=np.intp)
    for idx in pre:
        counts[idx] += 1
    if np.any(counts == 0):
        raise InternalError(f"filter value {f[np.argmax(counts == 0)]!r} is not covered")
    if np.any(counts > 2):
        raise InternalError("more than two intervals intersect")

    mids = reduced_midpoints(cover)
    edges = g.edges
    in_interval = np.zeros((cover.S, g.n), dtype=bool)
    for s, idx in enumerate(pre):
        in_interval[s, idx] = True

    nodes: list[MapperNode] = []
    # node id of each point per interval; -1 when outside
    label = np.full((cover.S, g.n), -1, dtype=np.intp)
    for s, idx in enumerate(pre):
        if idx.size == 0:
            continue
        if len(edges):
            keep = in_interval[s, edges[:, 0]] & in_interval[s, edges[:, 1]]
            sub_edges = edges[keep]
        else:
            sub_edges = edges
        for block in _components_in(sub_edges, idx, g.n):
            node = MapperNode(len(nodes), s, tuple(block), mids[s])
            label[s, list(block)] = node.id
            nodes.append(node)

    mnerve_edges: list[tuple[int, int]] = []
    for s in range(cover.S - 1):
        shared = np.flatnonzero(in_interval[s] & in_interval[s + 1])
        if shared.size == 0:
            continue
        if variant == "nerve":
            pairs = sorted(set(zip(label[s, shared].tolist(), label[s + 1, shared].tolist())))
            mnerve_edges.extend(pairs)
        else:
            keep = in_interval[s, edges[:, 0]] & in_interval[s, edges[:, 1]] & \
                in_interval[s + 1, edges[:, 0]] & in_interval[s + 1, edges[:, 1]] if len(edges) else None
            sub_edges = edges[keep] if keep is not None else edges
            pieces = _components_in(sub_edges, shared, g.n)
            pairs = sorted((int(label[s, p[0]]), int(label[s + 1, p[0]])) for p in pieces)
            mnerve_edges.extend(pairs)
    return MapperGraph(tuple(nodes), tuple(mnerve_edges), variant, cover)
