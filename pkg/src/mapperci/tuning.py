"""Automatic choice of the Rips scale, resolution and gain, and hypothesis checks."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .filters import FilterValues, modulus_V
from .geometry import DistanceMatrix, as_rng, hausdorff_to_full, rips_graph, subsample
from .mapper import IntervalCover, build_cover, intersection_crossing_edges, normalize_variant

__all__ = [
    "MapperParams",
    "HypothesisReport",
    "subsample_size",
    "tune_delta_known",
    "tune_delta_subsample",
    "tune_resolution",
    "tune_resolution_inferred",
    "tune",
    "check_hypotheses",
    "cover_for",
]

BUMP = 1e-9
DEFAULT_GAIN = 0.4
DEFAULT_BETA = 0.001
DEFAULT_SUBSAMPLES = 100


@dataclass(frozen=True)
class MapperParams:
    delta: float
    r: float
    g: float
    variant: str = "nerve"
    provenance: str = "manual"
    V: float | None = None

    def __post_init__(self):
        if not self.delta >= 0:
            raise InputError(f"delta must be nonnegative, got {self.delta}")
        if not self.r > 0:
            raise InputError(f"resolution must be positive, got {self.r}")
        if not 0 < self.g < 0.5:
            raise InputError(f"gain must lie in (0, 1/2), got {self.g}")
        object.__setattr__(self, "variant", normalize_variant(self.variant))


def subsample_size(n: int, beta: float) -> int:
    """``s_n = max(1, floor(n / log(n)^(1 + beta)))`` with the natural log."""
    if n < 2:
        return 1
    return max(1, min(n, math.floor(n / math.log(n) ** (1.0 + beta))))


def tune_delta_known(n: int, a: float, b: float) -> float:
    """Rips scale for an (a, b)-standard sampling model: ``8 (2 log n / (a n))^(1/b)``."""
    if n < 2:
        raise InputError(f"need n >= 2, got {n}")
    if not a > 0:
        raise InputError(f"a must be positive, got {a}")
    if not b >= 1:
        raise InputError(f"b must be >= 1, got {b}")
    return 8.0 * (2.0 * math.log(n) / (a * n)) ** (1.0 / b)


def subsample_hausdorff(dm: DistanceMatrix, m: int, N: int, rng=None) -> np.ndarray:
    """Hausdorff distances between ``N`` random size-``m`` subsets and the cloud."""
    rng = as_rng(rng)
    return np.array([hausdorff_to_full(subsample(dm.n, m, rng), dm) for _ in range(N)])


def tune_delta_subsample(dm: DistanceMatrix, beta: float = DEFAULT_BETA, N: int = DEFAULT_SUBSAMPLES,
                         rng=None) -> float:
    """Mean Hausdorff distance between ``N`` subsamples of size ``s_n`` and the cloud."""
    if dm.n < 3:
        raise InputError(f"subsampling rule needs at least 3 points, got {dm.n}")
    if not beta > 0:
        raise InputError(f"beta must be positive, got {beta}")
    if N < 1:
        raise InputError(f"need at least one subsample, got {N}")
    s = subsample_size(dm.n, beta)
    if s == dm.n:
        return 0.0
    return float(np.mean(subsample_hausdorff(dm, s, N, rng)))


def _fallback_r(fmin: float, fmax: float, n: int) -> float:
    return max(1e-9, (fmax - fmin) / max(n, 2))


def _check_gain(g: float) -> None:
    if not 0 < g < 0.5:
        raise InputError(f"gain must lie in (0, 1/2), got {g}")


def tune_resolution(V: float, g: float, fmin: float, fmax: float, n: int = 2,
                    variant: str = "nerve") -> float:
    """Resolution just above ``V / g`` (or ``V`` for the edge-based multinerve)."""
    _check_gain(g)
    if V < 0 or fmax < fmin:
        raise InputError("need V >= 0 and fmax >= fmin")
    if V == 0:
        return _fallback_r(fmin, fmax, n)
    scale = 1.0 if normalize_variant(variant) == "edge_multinerve" else g
    return V * (1.0 + BUMP) / scale


def tune_resolution_inferred(omega1_at_delta: float | None, Vhat: float, g: float, fmin: float, fmax: float,
                             n: int = 2, variant: str = "nerve") -> float:
    """Resolution for an estimated filter: uses ``max(w1(delta), Vhat)``."""
    if omega1_at_delta is None:
        raise InputError("an estimated filter needs a declared modulus of continuity")
    if omega1_at_delta < 0:
        raise InputError("modulus value must be nonnegative")
    return tune_resolution(max(omega1_at_delta, Vhat), g, fmin, fmax, n, variant)


def tune(dm: DistanceMatrix, fv: FilterValues, g: float = DEFAULT_GAIN, beta: float = DEFAULT_BETA,
         N: int = DEFAULT_SUBSAMPLES, variant: str = "nerve", rng=None,
         a: float | None = None, b: float | None = None) -> MapperParams:
    """Pick ``(delta, r, g)``.

    ``delta`` comes from the known-model formula when both ``a`` and ``b``
    are given, else from subsampling. Estimated filters with a declared
    Lipschitz constant use the inferred-filter resolution rule.
    """
    _check_gain(g)
    if dm.n != fv.n:
        raise InputError("distance matrix and filter sizes differ")
    if (a is None) != (b is None):
        raise InputError("supply both a and b for the known-model rule, or neither")
    if a is not None:
        delta, provenance = tune_delta_known(dm.n, a, b), "known_model"
    elif dm.n < 3:
        delta, provenance = 0.0, "subsampling"
    else:
        delta, provenance = tune_delta_subsample(dm, beta, N, rng), "subsampling"
    V = modulus_V(dm, fv, delta)
    fmin, fmax = float(fv.values.min()), float(fv.values.max())
    if fv.estimated and fv.lipschitz_bound is not None:
        r = tune_resolution_inferred(fv.modulus(delta), V, g, fmin, fmax, dm.n, variant)
        provenance += "+inferred_filter"
    else:
        r = tune_resolution(V, g, fmin, fmax, dm.n, variant)
    return MapperParams(delta, r, g, variant, provenance, V)


def cover_for(fv: FilterValues, params: MapperParams) -> IntervalCover:
    return build_cover(float(fv.values.min()), float(fv.values.max()), params.r, params.g)


@dataclass
class HypothesisReport:
    V: float
    threshold: float
    variation_ok: bool
    n_crossing_edges: int
    hausdorff_proxy: float
    sampling_ok: bool
    reach_condition: str = "unverifiable"

    def lines(self) -> list[str]:
        return [
            f"V_n(delta) = {self.V:.12g}",
            f"variation threshold = {self.threshold:.12g}",
            f"variation_below_threshold = {self.variation_ok}",
            f"intersection_crossing_edges = {self.n_crossing_edges}",
            f"hausdorff_proxy = {self.hausdorff_proxy:.12g}",
            f"four_hausdorff_below_delta = {self.sampling_ok}",
            f"reach_condition = {self.reach_condition}",
        ]


def estimate_sample_hausdorff(dm: DistanceMatrix, beta: float = DEFAULT_BETA, N: int = DEFAULT_SUBSAMPLES,
                              rng=None) -> float:
    """Extrapolated estimate of the distance from the cloud to its support.

    Measures the Hausdorff distance at two subsampling depths (cloud vs
    ``s_n`` points, ``s_n`` points vs ``s(s_n)`` points) and extends the
    ratio one more step towards the full cloud.
    """
    n = dm.n
    if n < 3:
        return 0.0
    rng = as_rng(rng)
    s1 = subsample_size(n, beta)
    s2 = subsample_size(s1, beta)
    h1 = tune_delta_subsample(dm, beta, N, rng)
    if h1 == 0 or s2 >= s1:
        return 0.0
    h2 = []
    for _ in range(N):
        outer = subsample(n, s1, rng)
        inner = outer[np.sort(rng.choice(s1, size=s2, replace=False))]
        h2.append(float(dm.d[np.ix_(outer, inner)].min(axis=1).max()))
    h2 = float(np.mean(h2))
    return h1 if h2 == 0 else h1 * min(1.0, h1 / h2)


def check_hypotheses(dm: DistanceMatrix, fv: FilterValues, params: MapperParams,
                     cover: IntervalCover | None = None, rng=None, N: int = DEFAULT_SUBSAMPLES,
                     beta: float = DEFAULT_BETA) -> HypothesisReport:
    """Check the variation and sampling conditions under which Mapper tracks the Reeb graph.

    The reach / convexity-radius condition cannot be assessed from data and is
    reported as unverifiable.
    """
    cover = cover if cover is not None else cover_for(fv, params)
    V = modulus_V(dm, fv, params.delta)
    threshold = params.r if params.variant == "edge_multinerve" else params.g * params.r
    crossing = intersection_crossing_edges(rips_graph(dm, params.delta), fv, cover)
    proxy = estimate_sample_hausdorff(dm, beta, N, rng)
    return HypothesisReport(V, threshold, V < threshold, len(crossing), proxy, 4 * proxy <= params.delta)
