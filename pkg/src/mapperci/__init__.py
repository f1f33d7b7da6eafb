"""Mapper graphs with automatically tuned parameters and confidence regions."""
from .bottleneck import bottleneck, matching_cost
from .confidence import ConfidenceRegion, bootstrap_eta, significant_features
from .errors import DegenerateDataError, InputError, InternalError, MapperError
from .filters import FilterValues, coordinate_filter, dtm, eccentricity_filter, modulus_V, pca_filter
from .geometry import DistanceMatrix, NeighborhoodGraph, PointCloud, pairwise_distances, rips_graph
from .mapper import IntervalCover, MapperGraph, build_cover, build_mapper
from .persistence import DiagramPoint, ExtendedDiagram, WeightedGraph, extended_diagram
from .pipeline import compute_mapper
from .tuning import MapperParams, tune

__all__ = [
    "bottleneck",
    "matching_cost",
    "ConfidenceRegion",
    "bootstrap_eta",
    "significant_features",
    "DegenerateDataError",
    "InputError",
    "InternalError",
    "MapperError",
    "FilterValues",
    "coordinate_filter",
    "dtm",
    "eccentricity_filter",
    "modulus_V",
    "pca_filter",
    "DistanceMatrix",
    "NeighborhoodGraph",
    "PointCloud",
    "pairwise_distances",
    "rips_graph",
    "IntervalCover",
    "MapperGraph",
    "build_cover",
    "build_mapper",
    "DiagramPoint",
    "ExtendedDiagram",
    "WeightedGraph",
    "extended_diagram",
    "compute_mapper",
    "MapperParams",
    "tune",
]

__version__ = "0.1.0"
