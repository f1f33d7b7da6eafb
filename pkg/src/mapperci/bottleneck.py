"""Bottleneck distance between extended persistence diagrams."""
from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .errors import InputError
from .persistence import PTYPES, DiagramPoint, ExtendedDiagram

__all__ = ["matching_cost", "bottleneck", "bottleneck_oracle", "class_bottleneck"]

ORACLE_MAX_PER_CLASS = 6


def _points(d) -> tuple[DiagramPoint, ...]:
    return tuple(d.points) if isinstance(d, ExtendedDiagram) else tuple(d)


def _linf(p: DiagramPoint, q: DiagramPoint) -> float:
    return max(abs(p.birth - q.birth), abs(p.death - q.death))


def _gap(p: DiagramPoint) -> float:
    return abs(p.birth - p.death) / 2


def matching_cost(D, Dp, matching: Iterable[tuple[int, int]]) -> float:
    """Cost of a partial matching given as ``(index in D, index in D')`` pairs."""
    A, B = _points(D), _points(Dp)
    used_a, used_b = {}, {}
    for i, j in matching:
        if i in used_a or j in used_b:
            raise InputError("a diagram point is matched twice")
        if A[i].ptype != B[j].ptype:
            raise InputError(f"cannot match {A[i].ptype} with {B[j].ptype}")
        used_a[i], used_b[j] = j, i
    cost = 0.0
    for i, p in enumerate(A):
        cost = max(cost, _linf(p, B[used_a[i]]) if i in used_a else _gap(p))
    for j, q in enumerate(B):
        if j not in used_b:
            cost = max(cost, _gap(q))
    return cost


def _max_matching(adj: list[list[int]], n_right: int) -> int:
    """Size of a maximum bipartite matching by augmenting paths (iterative DFS)."""
    match_right = [-1] * n_right
    match_left = [-1] * len(adj)
    size = 0
    for root in range(len(adj)):
        seen = [False] * n_right
        via: dict[int, int] = {}
        stack = [[root, 0]]
        found = -1
        while stack:
            frame = stack[-1]
            u, k = frame
            if k == len(adj[u]):
                stack.pop()
                continue
            frame[1] += 1
            v = adj[u][k]
            if seen[v]:
                continue
            seen[v] = True
            via[v] = u
            if match_right[v] < 0:
                found = v
                break
            stack.append([match_right[v], 0])
        v = found
        while v >= 0:
            u = via[v]
            nxt = match_left[u]
            match_left[u], match_right[v] = v, u
            v = nxt
        size += found >= 0
    return size


def _feasible(A: Sequence[DiagramPoint], B: Sequence[DiagramPoint], t: float) -> bool:
    # left: A then diagonal copies of B; right: B then diagonal copies of A
    na, nb = len(A), len(B)
    adj: list[list[int]] = []
    for i, p in enumerate(A):
        row = [j for j, q in enumerate(B) if _linf(p, q) <= t]
        if _gap(p) <= t:
            row.append(nb + i)
        adj.append(row)
    for j, q in enumerate(B):
        row = [j] if _gap(q) <= t else []
        row.extend(nb + i for i in range(na))
        adj.append(row)
    return _max_matching(adj, nb + na) == na + nb


def class_bottleneck(A: Sequence[DiagramPoint], B: Sequence[DiagramPoint]) -> float:
    """Exact bottleneck distance within one point type."""
    if not A and not B:
        return 0.0
    candidates = {0.0}
    candidates.update(_gap(p) for p in A)
    candidates.update(_gap(q) for q in B)
    candidates.update(_linf(p, q) for p in A for q in B)
    values = sorted(candidates)
    lo, hi = 0, len(values) - 1  # values[hi] is always feasible
    while lo < hi:
        mid = (lo + hi) // 2
        if _feasible(A, B, values[mid]):
            hi = mid
        else:
            lo = mid + 1
    return values[lo]


def bottleneck(D, Dp) -> float:
    """Bottleneck distance; points only match points of the same type."""
    A, B = _points(D), _points(Dp)
    return max(class_bottleneck([p for p in A if p.ptype == t], [q for q in B if q.ptype == t])
               for t in PTYPES)


def bottleneck_oracle(D, Dp) -> float:
    """Minimum cost over every type-respecting partial matching (tiny inputs only)."""
    A, B = _points(D), _points(Dp)
    best_overall = 0.0
    for t in PTYPES:
        ai = [i for i, p in enumerate(A) if p.ptype == t]
        bi = [j for j, q in enumerate(B) if q.ptype == t]
        if len(ai) > ORACLE_MAX_PER_CLASS or len(bi) > ORACLE_MAX_PER_CLASS:
            raise InputError(f"oracle limited to {ORACLE_MAX_PER_CLASS} points per type")
        sub_a, sub_b = [A[i] for i in ai], [B[j] for j in bi]
        best = float("inf")
        for k in range(min(len(ai), len(bi)) + 1):
            for left in itertools.combinations(range(len(ai)), k):
                for right in itertools.permutations(range(len(bi)), k):
                    best = min(best, matching_cost(sub_a, sub_b, zip(left, right)))
        best_overall = max(best_overall, best)
    return best_overall
