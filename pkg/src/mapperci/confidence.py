"""Confidence regions for Mapper diagram points.

Three routes give a half-width ``eta`` for l-infinity squares around each
point: the bottleneck bootstrap, the subsampling bound built from the
Hausdorff tail functions ``L_n`` and ``F_n``, and the closed-form bound for
a known (a, b)-standard model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bottleneck import bottleneck
from .errors import InputError
from .filters import FilterValues
from .geometry import DistanceMatrix, as_rng, subsample
from .mapper import build_cover
from .persistence import DiagramPoint, ExtendedDiagram
from .pipeline import compute_mapper
from .tuning import DEFAULT_BETA, MapperParams, subsample_size

__all__ = [
    "ConfidenceRegion",
    "FlaggedPoint",
    "bootstrap_distances",
    "bootstrap_eta",
    "quantile_at_level",
    "subsample_tail_L",
    "subsample_tail_F",
    "SubsampleTails",
    "subsampling_radius",
    "conf_bound_subsampling",
    "conf_eta_for_alpha",
    "conf_bound_known_model",
    "known_model_eta",
    "significant_features",
]

DEFAULT_MC = 1000


@dataclass(frozen=True)
class FlaggedPoint:
    point: DiagramPoint
    significant: bool


@dataclass(frozen=True)
class ConfidenceRegion:
    eta: float
    alpha: float
    method: str
    per_point: tuple[FlaggedPoint, ...]

    def significant_points(self) -> list[DiagramPoint]:
        return [fp.point for fp in self.per_point if fp.significant]


# --- bootstrap ------------------------------------------------------------

def _child_rngs(rng, count: int) -> list[np.random.Generator]:
    return [np.random.default_rng(s) for s in as_rng(rng).bit_generator.seed_seq.spawn(count)]


def bootstrap_distances(dm: DistanceMatrix, fv: FilterValues, params: MapperParams, B: int = 100,
                        rng=None, reference: ExtendedDiagram | None = None,
                        reuse_cover: bool = False) -> np.ndarray:
    """Bottleneck distances between resampled Mappers and the Mapper of the data.

    Each replicate draws ``n`` indices with replacement (points travel with
    their filter values) and rebuilds the Mapper with the same ``delta``,
    ``r`` and ``g``. Replicate ``b`` uses its own generator spawned from
    ``rng``, so results do not depend on evaluation order.
    """
    if B < 1:
        raise InputError(f"need at least one bootstrap replicate, got {B}")
    if reference is None:
        reference = compute_mapper(dm, fv, params).diagram
    base_cover = build_cover(float(fv.values.min()), float(fv.values.max()), params.r, params.g)
    out = np.empty(B)
    for b, child in enumerate(_child_rngs(rng, B)):
        draw = child.integers(0, dm.n, size=dm.n)
        # duplicates sit at distance 0 with equal filter values: they never
        # change clusters or the nerve, so the diagram only needs unique points
        idx = np.unique(draw)
        sub_fv = fv.take(idx)
        cover = base_cover if reuse_cover else None
        out[b] = bottleneck(compute_mapper(dm.take(idx), sub_fv, params, cover).diagram, reference)
    return out


def quantile_at_level(values: np.ndarray, alpha: float) -> float:
    """Order statistic of rank ``ceil((1 - alpha) B)`` (1-based, at least 1)."""
    if not 0 < alpha < 1:
        raise InputError(f"alpha must lie in (0, 1), got {alpha}")
    vals = np.sort(np.asarray(values, dtype=float))
    rank = max(1, math.ceil((1 - alpha) * len(vals) - 1e-12))
    return float(vals[rank - 1])


def bootstrap_eta(dm: DistanceMatrix, fv: FilterValues, params: MapperParams, B: int = 100,
                  alpha: float = 0.15, rng=None, reuse_cover: bool = False) -> float:
    return quantile_at_level(bootstrap_distances(dm, fv, params, B, rng, reuse_cover=reuse_cover), alpha)


# --- subsampling ----------------------------------------------------------

def _check_sizes(n: int, *sizes: int) -> None:
    prev = n
    for s in sizes:
        if not 1 <= s <= prev:
            raise InputError(f"subsample sizes must satisfy 1 <= s2 <= s <= n={n}, got {sizes}")
        prev = s


@dataclass(frozen=True)
class SubsampleTails:
    """Monte Carlo samples behind ``L_n`` and ``F_n``; tails are step functions of ``t``.

    ``L`` holds ``d_H(X^k_s, X_n)`` for random size-``s`` subsets; ``F`` holds
    ``d_H(X^k_{s2}, X_s)`` for random size-``s2`` subsets of the full cloud,
    measured against one fixed size-``s`` subset ``X_s``.
    """

    L: np.ndarray
    F: np.ndarray
    s: int
    s2: int
    n: int

    @classmethod
    def draw(cls, dm: DistanceMatrix, s: int, s2: int, N1: int = DEFAULT_MC, N2: int = DEFAULT_MC,
             rng=None) -> "SubsampleTails":
        _check_sizes(dm.n, s, s2)
        if N1 < 1 or N2 < 1:
            raise InputError("Monte Carlo sizes must be positive")
        rng = as_rng(rng)
        L = np.array([_hd(dm, subsample(dm.n, s, rng), None) for _ in range(N1)])
        anchor = subsample(dm.n, s, rng)
        F = np.array([_hd(dm, subsample(dm.n, s2, rng), anchor) for _ in range(N2)])
        return cls(np.sort(L), np.sort(F), s, s2, dm.n)

    @classmethod
    def for_beta(cls, dm: DistanceMatrix, beta: float = DEFAULT_BETA, N: int = DEFAULT_MC,
                 rng=None) -> "SubsampleTails":
        s = subsample_size(dm.n, beta)
        return cls.draw(dm, s, subsample_size(s, beta), N, N, rng)

    def tail_L(self, t: float) -> float:
        return float(np.mean(self.L > t))

    def tail_F(self, t: float) -> float:
        return float(np.mean(self.F > t))


def _hd(dm: DistanceMatrix, a: np.ndarray, b: np.ndarray | None) -> float:
    if b is None:
        return float(dm.d[:, a].min(axis=1).max())
    block = dm.d[np.ix_(a, b)]
    return float(max(block.min(axis=1).max(), block.min(axis=0).max()))


def subsample_tail_L(dm: DistanceMatrix, t: float, N1: int = DEFAULT_MC, s: int | None = None,
                     rng=None) -> float:
    """Fraction of random size-``s`` subsets farther than ``t`` (Hausdorff) from the cloud."""
    s = subsample_size(dm.n, DEFAULT_BETA) if s is None else s
    _check_sizes(dm.n, s)
    rng = as_rng(rng)
    return float(np.mean([_hd(dm, subsample(dm.n, s, rng), None) > t for _ in range(N1)]))


def subsample_tail_F(dm: DistanceMatrix, t: float, N2: int = DEFAULT_MC, s: int | None = None,
                     s2: int | None = None, rng=None) -> float:
    """Same tail one level down: size-``s2`` subsets against one fixed size-``s`` subset."""
    s = subsample_size(dm.n, DEFAULT_BETA) if s is None else s
    s2 = subsample_size(s, DEFAULT_BETA) if s2 is None else s2
    _check_sizes(dm.n, s, s2)
    rng = as_rng(rng)
    anchor = subsample(dm.n, s, rng)
    return float(np.mean([_hd(dm, subsample(dm.n, s2, rng), anchor) > t for _ in range(N2)]))


def subsampling_radius(eta: float, g: float, c_lipschitz: float | None) -> float:
    """Sampling radius ``(1/4) w^{-1}(g eta / (1 + 2g))`` for ``w(x) = c x``."""
    if c_lipschitz is None:
        raise InputError("the subsampling bound needs a declared modulus of continuity")
    if not c_lipschitz > 0:
        raise InputError("Lipschitz constant must be positive")
    return 0.25 * (g * eta / (1 + 2 * g)) / c_lipschitz


def conf_bound_subsampling(dm: DistanceMatrix | SubsampleTails, eta: float, g: float,
                           c_lipschitz: float | None, beta: float = DEFAULT_BETA, N: int = DEFAULT_MC,
                           rng=None) -> float:
    """Upper bound on P(d(Reeb, Mapper) >= eta) from the subsampling tails.

    The ``o((s_n/n)^(1/4))`` remainder is not added; see
    :func:`subsampling_remainder_scale` for its order of magnitude.
    Pass a :class:`SubsampleTails` to reuse one set of Monte Carlo draws.
    """
    q = subsampling_radius(eta, g, c_lipschitz)
    tails = dm if isinstance(dm, SubsampleTails) else SubsampleTails.for_beta(dm, beta, N, rng)
    return min(1.0, max(0.0, tails.tail_F(q) + tails.tail_L(q)))


def subsampling_remainder_scale(n: int, beta: float = DEFAULT_BETA) -> float:
    """``(s_n / n)^(1/4)``, the scale of the neglected remainder term."""
    return (subsample_size(n, beta) / n) ** 0.25


def conf_eta_for_alpha(dm: DistanceMatrix | SubsampleTails, alpha: float, g: float, c_lipschitz: float | None,
                       beta: float = DEFAULT_BETA, N: int = DEFAULT_MC, rng=None,
                       upper: float | None = None, rtol: float = 1e-6) -> float:
    """Smallest ``eta`` whose subsampling bound is at most ``alpha``.

    Searches ``[0, upper]`` (``upper`` defaults to the cloud diameter scaled to
    filter units by ``c``); returns ``inf`` when even ``upper`` fails.
    """
    if not 0 < alpha <= 1:
        raise InputError(f"alpha must lie in (0, 1], got {alpha}")
    tails = dm if isinstance(dm, SubsampleTails) else SubsampleTails.for_beta(dm, beta, N, rng)
    bound = lambda e: conf_bound_subsampling(tails, e, g, c_lipschitz)
    if bound(0.0) <= alpha:
        return 0.0
    if upper is None:
        tmax = max(tails.L.max(initial=0.0), tails.F.max(initial=0.0))
        upper = 4 * (1 + 2 * g) / g * c_lipschitz * tmax * (1 + 1e-9) if tmax > 0 else 0.0
    if upper <= 0 or bound(upper) > alpha:
        return math.inf
    lo, hi = 0.0, float(upper)
    while hi - lo > rtol * hi:
        mid = (lo + hi) / 2
        if bound(mid) <= alpha:
            hi = mid
        else:
            lo = mid
    return hi


# --- known model ----------------------------------------------------------

def _check_ab(a: float, b: float) -> None:
    if not a > 0 or not b >= 1:
        raise InputError(f"need a > 0 and b >= 1, got a={a}, b={b}")


def conf_bound_known_model(n: int, a: float, b: float, delta_n: float, g: float, eta: float,
                           c_lipschitz: float) -> float:
    """``1{c delta_n >= g eta / (1 + 2g)} + min(1, 2^b / (2 n log n))``, clamped to [0, 1]."""
    _check_ab(a, b)
    if n < 2:
        raise InputError("need n >= 2")
    indicator = 1.0 if c_lipschitz * delta_n >= g / (1 + 2 * g) * eta else 0.0
    tail = min(1.0, 2.0 ** b / (2 * math.log(n) * n))
    return min(1.0, max(0.0, indicator + tail))


def known_model_eta(n: int, a: float, b: float, delta_n: float, g: float, alpha: float,
                    c_lipschitz: float) -> float:
    """Smallest ``eta`` (up to the strict inequality) with known-model bound ``<= alpha``."""
    _check_ab(a, b)
    if alpha >= 1:
        return 0.0
    if min(1.0, 2.0 ** b / (2 * math.log(n) * n)) > alpha:
        return math.inf
    threshold = c_lipschitz * delta_n * (1 + 2 * g) / g
    return math.nextafter(threshold, math.inf)


# --- flags ----------------------------------------------------------------

def significant_features(d: ExtendedDiagram, eta: float, alpha: float = float("nan"),
                         method: str = "bootstrap") -> ConfidenceRegion:
    """A point is significant when its square of half-width ``eta`` misses the diagonal."""
    if not eta >= 0:
        raise InputError(f"eta must be nonnegative, got {eta}")
    flagged = tuple(FlaggedPoint(p, abs(p.birth - p.death) > 2 * eta) for p in d.points)
    return ConfidenceRegion(float(eta), alpha, method, flagged)
