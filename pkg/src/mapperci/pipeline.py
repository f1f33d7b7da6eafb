"""End-to-end helpers tying tuning, Mapper construction and persistence together."""
from __future__ import annotations

from dataclasses import dataclass

from .filters import FilterValues
from .geometry import DistanceMatrix, rips_graph
from .mapper import IntervalCover, MapperGraph, build_mapper
from .persistence import ExtendedDiagram, mapper_diagram
from .tuning import MapperParams, cover_for

__all__ = ["MapperResult", "compute_mapper"]


@dataclass(frozen=True)
class MapperResult:
    params: MapperParams
    cover: IntervalCover
    mapper: MapperGraph
    diagram: ExtendedDiagram


def compute_mapper(dm: DistanceMatrix, fv: FilterValues, params: MapperParams,
                   cover: IntervalCover | None = None) -> MapperResult:
    """Mapper and its diagram for fixed parameters; the cover defaults to the data range."""
    cover = cover if cover is not None else cover_for(fv, params)
    graph = rips_graph(dm, params.delta)
    mapper = build_mapper(graph, fv, cover, params.variant)
    return MapperResult(params, cover, mapper, mapper_diagram(mapper))
