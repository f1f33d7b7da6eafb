"""Extended persistence of node-weighted graphs.

The extended filtration is realized with a cone vertex ``w`` entered first:
the ascending lower-star filtration of ``K`` is followed by the cones
``w * s`` over simplices taken in descending upper-star order. A single
GF(2) column reduction of that boundary matrix yields all four kinds of
points; the cone vertex carries the one essential class.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, InternalError

__all__ = [
    "PTYPES",
    "WeightedGraph",
    "DiagramPoint",
    "ExtendedDiagram",
    "extended_diagram",
    "diagram_oracle",
    "dictionary",
    "mapper_diagram",
]

PTYPES = ("Ord0", "Rel1", "Ext0", "Ext1")
ORACLE_MAX_SIZE = 24


@dataclass(frozen=True)
class WeightedGraph:
    n: int
    f: tuple[float, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        f = tuple(float(x) for x in self.f)
        if len(f) != self.n or not all(np.isfinite(f)):
            raise InputError("need one finite value per vertex")
        edges = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise InputError(f"edge ({u}, {v}) out of range")
            edges.append((u, v))
        object.__setattr__(self, "f", f)
        object.__setattr__(self, "edges", tuple(edges))


@dataclass(frozen=True, order=True)
class DiagramPoint:
    ptype: str
    birth: float
    death: float

    def __post_init__(self):
        if self.ptype not in PTYPES:
            raise InputError(f"unknown point type {self.ptype!r}")

    @property
    def persistence(self) -> float:
        return abs(self.death - self.birth)


@dataclass(frozen=True)
class ExtendedDiagram:
    points: tuple[DiagramPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(sorted(self.points)))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def of_type(self, ptype: str) -> list[DiagramPoint]:
        return [p for p in self.points if p.ptype == ptype]

    def count(self, ptype: str) -> int:
        return sum(p.ptype == ptype for p in self.points)

    @classmethod
    def from_tuples(cls, rows: Iterable[tuple[str, float, float]]) -> "ExtendedDiagram":
        return cls(tuple(DiagramPoint(t, float(b), float(d)) for t, b, d in rows))


# --- filtration -----------------------------------------------------------

# part codes
CONE, ASC, DESC = 0, 1, 2


@dataclass(frozen=True)
class _Simplex:
    part: int          # CONE, ASC or DESC
    kdim: int          # dimension of the underlying simplex of K (-1 for the cone vertex)
    value: float
    faces: tuple[int, ...]

    @property
    def dim(self) -> int:
        return self.kdim + (self.part != ASC)


def extended_filtration(g: WeightedGraph) -> list[_Simplex]:
    """Ordered simplices of ``K ∪ w*K``; ties in ``f`` broken by vertex index."""
    f = g.f
    order = sorted(range(g.n), key=lambda v: (f[v], v))
    rank = [0] * g.n
    for pos, v in enumerate(order):
        rank[v] = pos

    asc = [((rank[v], 0, 0, 0), ("v", v)) for v in range(g.n)]
    desc = [((-rank[v], 0, 0, 0), ("v", v)) for v in range(g.n)]
    for k, (u, v) in enumerate(g.edges):
        lo, hi = sorted((rank[u], rank[v]))
        asc.append(((hi, 1, lo, k), ("e", k)))
        desc.append(((-lo, 1, -hi, k), ("e", k)))
    asc.sort()
    desc.sort()

    out = [_Simplex(CONE, -1, float("nan"), ())]
    pos_v, pos_e, pos_cv = {}, {}, {}
    for _, (kind, x) in asc:
        if kind == "v":
            pos_v[x] = len(out)
            out.append(_Simplex(ASC, 0, f[x], ()))
        else:
            u, v = g.edges[x]
            pos_e[x] = len(out)
            out.append(_Simplex(ASC, 1, max(f[u], f[v]), (pos_v[u], pos_v[v])))
    for _, (kind, x) in desc:
        if kind == "v":
            pos_cv[x] = len(out)
            out.append(_Simplex(DESC, 0, f[x], (0, pos_v[x])))
        else:
            u, v = g.edges[x]
            out.append(_Simplex(DESC, 1, min(f[u], f[v]), (pos_e[x], pos_cv[u], pos_cv[v])))
    return out


def _classify(birth: _Simplex, death: _Simplex) -> str:
    if birth.part == ASC and birth.kdim == 0:
        return "Ord0" if death.part == ASC else "Ext0"
    if birth.part == ASC and birth.kdim == 1:
        return "Ext1"
    if birth.part == DESC and birth.kdim == 0:
        return "Rel1"
    raise InternalError("unexpected persistence pair in the extended filtration")


def _keep(ptype: str, b: float, d: float, keep_zero: bool) -> bool:
    return keep_zero or ptype == "Ext0" or b != d


def _column(faces: Sequence[int]) -> int:
    col = 0
    for i in faces:
        col ^= 1 << i
    return col


def extended_diagram(g: WeightedGraph, keep_zero_persistence: bool = False) -> ExtendedDiagram:
    """Extended persistence diagram of ``(g, f)`` by boundary-matrix reduction.

    Zero-persistence Ord0/Rel1/Ext1 points are dropped unless
    ``keep_zero_persistence``; Ext0 points on the diagonal are always kept.
    """
    simplices = extended_filtration(g)
    pivot_of: dict[int, int] = {}
    pairs = []
    for j, s in enumerate(simplices):
        col = _column(s.faces)
        while col:
            low = col.bit_length() - 1
            other = pivot_of.get(low)
            if other is None:
                pivot_of[low] = col
                pairs.append((low, j))
                break
            col ^= other
    paired = {i for i, _ in pairs} | {j for _, j in pairs}
    unpaired = [k for k in range(len(simplices)) if k not in paired]
    if unpaired != [0]:
        raise InternalError(f"cone complex should have one essential class, found {unpaired}")

    points = []
    for i, j in pairs:
        birth, death = simplices[i], simplices[j]
        ptype = _classify(birth, death)
        if _keep(ptype, birth.value, death.value, keep_zero_persistence):
            points.append(DiagramPoint(ptype, birth.value, death.value))
    return ExtendedDiagram(tuple(points))


# --- oracle ---------------------------------------------------------------

class _XorBasis:
    """Incremental GF(2) row-echelon basis over bitmask vectors."""

    def __init__(self, other: "_XorBasis | None" = None):
        self.rows: dict[int, int] = dict(other.rows) if other else {}

    def insert(self, vec: int) -> bool:
        while vec:
            top = vec.bit_length() - 1
            row = self.rows.get(top)
            if row is None:
                self.rows[top] = vec
                return True
            vec ^= row
        return False

    @property
    def rank(self) -> int:
        return len(self.rows)


def _cycle_births(columns: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Nullspace basis of a column set, as (entry index, cycle) in entry order.

    ``columns`` holds ``(filtration index, boundary bitmask)``; a cycle is a
    bitmask over filtration indices.
    """
    reduced: dict[int, tuple[int, int]] = {}
    cycles = []
    for idx, col in columns:
        tag = 1 << idx
        while col:
            top = col.bit_length() - 1
            if top not in reduced:
                reduced[top] = (col, tag)
                break
            rcol, rtag = reduced[top]
            col ^= rcol
            tag ^= rtag
        if not col:
            cycles.append((idx, tag))
    return cycles


def diagram_oracle(g: WeightedGraph, keep_zero_persistence: bool = False) -> ExtendedDiagram:
    """Multiplicities from ranks of persistent homology maps, by inclusion-exclusion.

    Exponential-free but cubic in the filtration length; guarded to tiny graphs.
    """
    if g.n + len(g.edges) > ORACLE_MAX_SIZE:
        raise InputError(f"oracle limited to n + |E| <= {ORACLE_MAX_SIZE}")
    simplices = extended_filtration(g)
    m = len(simplices)
    points = []
    for p in (0, 1):
        cycles = _cycle_births([(k, _column(s.faces)) for k, s in enumerate(simplices) if s.dim == p])
        boundaries = [(k, _column(s.faces)) for k, s in enumerate(simplices) if s.dim == p + 1]
        # beta[i][j] = rank of H_p(K_i) -> H_p(K_j) for i <= j, K_i = first i+1 simplices
        beta = np.zeros((m + 1, m + 1), dtype=np.int64)
        bbasis = _XorBasis()
        bptr = 0
        for j in range(m):
            while bptr < len(boundaries) and boundaries[bptr][0] <= j:
                bbasis.insert(boundaries[bptr][1])
                bptr += 1
            combo = _XorBasis(bbasis)
            cptr = 0
            for i in range(j + 1):
                while cptr < len(cycles) and cycles[cptr][0] <= i:
                    combo.insert(cycles[cptr][1])
                    cptr += 1
                beta[i + 1, j + 1] = combo.rank - bbasis.rank

        def b(i, j):
            # shifted indices: 0 means the empty complex; m + 1 means "infinity"
            if i == 0 or j == m + 1:
                return 0
            return int(beta[i, j])

        for i in range(1, m + 1):
            for j in range(i + 1, m + 2):
                mult = (b(i, j - 1) - b(i, j)) - (b(i - 1, j - 1) - b(i - 1, j))
                if mult < 0:
                    raise InternalError("negative multiplicity in the oracle")
                if mult == 0:
                    continue
                birth = simplices[i - 1]
                if j == m + 1:
                    if birth.part != CONE:
                        raise InternalError("unexpected essential class")
                    continue
                death = simplices[j - 1]
                ptype = _classify(birth, death)
                if _keep(ptype, birth.value, death.value, keep_zero_persistence):
                    points.extend([DiagramPoint(ptype, birth.value, death.value)] * mult)
    return ExtendedDiagram(tuple(points))


# --- reading the diagram --------------------------------------------------

def dictionary(d: ExtendedDiagram) -> dict:
    """Trunks, branches and holes with their vertical spans."""
    def spans(t):
        return [(min(p.birth, p.death), max(p.birth, p.death)) for p in d.of_type(t)]

    return {
        "trunks": d.count("Ext0"),
        "downward_branches": d.count("Ord0"),
        "upward_branches": d.count("Rel1"),
        "holes": d.count("Ext1"),
        "branches": d.count("Ord0") + d.count("Rel1"),
        "spans": {
            "trunks": spans("Ext0"),
            "downward_branches": spans("Ord0"),
            "upward_branches": spans("Rel1"),
            "holes": spans("Ext1"),
        },
    }


def mapper_diagram(mapper, keep_zero_persistence: bool = False) -> ExtendedDiagram:
    """Diagram of a Mapper graph with its node function."""
    g = WeightedGraph(len(mapper.nodes), tuple(mapper.fvalues), tuple(mapper.edges))
    return extended_diagram(g, keep_zero_persistence)
