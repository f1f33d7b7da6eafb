"""Filter functions on point clouds and the empirical modulus of variation."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateDataError, InputError
from .geometry import DistanceMatrix, PointCloud, pairwise_distances

__all__ = [
    "FilterValues",
    "coordinate_filter",
    "eccentricity_filter",
    "pca_filter",
    "dtm",
    "modulus_V",
    "filter_from_spec",
]


@dataclass(frozen=True)
class FilterValues:
    """One filter value per point.

    ``lipschitz_bound`` is the constant ``c`` of a declared modulus of
    continuity ``w(x) = c * x``. ``estimated`` marks filters computed from
    the sample itself (PCA, eccentricity, DTM) rather than known exactly.
    """

    values: np.ndarray
    name: str
    lipschitz_bound: Optional[float] = None
    estimated: bool = False

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64).reshape(-1)
        if v.size == 0 or not np.all(np.isfinite(v)):
            raise InputError(f"filter {self.name!r} must have finite values")
        if self.lipschitz_bound is not None and not self.lipschitz_bound > 0:
            raise InputError("lipschitz_bound must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.size

    def modulus(self, x: float) -> float:
        if self.lipschitz_bound is None:
            raise InputError(f"filter {self.name!r} has no declared modulus of continuity")
        return self.lipschitz_bound * float(x)

    def take(self, idx) -> "FilterValues":
        return FilterValues(self.values[np.asarray(idx, dtype=np.intp)], self.name,
                            self.lipschitz_bound, self.estimated)


def coordinate_filter(pc: PointCloud, axis: int) -> FilterValues:
    if not 0 <= axis < pc.dim:
        raise InputError(f"axis {axis} out of range for {pc.dim}-dimensional points")
    return FilterValues(pc.points[:, axis].copy(), f"coord:{axis}", 1.0, False)


def eccentricity_filter(dm: DistanceMatrix) -> FilterValues:
    return FilterValues(dm.d.max(axis=1), "ecc", 1.0, True)


def _fix_sign(v: np.ndarray) -> np.ndarray:
    # argmax returns the first index among ties
    k = int(np.argmax(np.abs(v)))
    return -v if v[k] < 0 else v


def pca_filter(pc: PointCloud, component: int = 1) -> FilterValues:
    """Projection on the ``component``-th principal axis (1 = largest variance).

    The eigenvector sign is fixed so that its largest-magnitude coordinate is
    positive, the lowest index winning ties.
    """
    if not 1 <= component <= pc.dim:
        raise InputError(f"component must lie in [1, {pc.dim}], got {component}")
    if pc.n < 2:
        raise InputError("PCA needs at least two points")
    centered = pc.points - pc.points.mean(axis=0)
    cov = centered.T @ centered / pc.n
    if not np.any(cov):
        raise DegenerateDataError("all points are identical: covariance is zero")
    w, vecs = np.linalg.eigh(cov)
    order = np.argsort(-w, kind="stable")
    v = _fix_sign(vecs[:, order[component - 1]])
    return FilterValues(centered @ v, f"pca:{component}", 1.0, True)


def dtm(dm: DistanceMatrix, k: int) -> FilterValues:
    """Empirical distance to measure: RMS distance to the ``k`` nearest other points.

    The query point itself is excluded, so this equals the mass-parameter
    DTM with ``m = k / n`` computed on the remaining points.
    """
    n = dm.n
    if not 1 <= k <= n - 1:
        raise InputError(f"DTM neighbor count must lie in [1, {n - 1}], got {k}")
    d2 = np.array(dm.d, dtype=np.float64) ** 2
    np.fill_diagonal(d2, np.inf)
    nearest = np.partition(d2, k - 1, axis=1)[:, :k]
    return FilterValues(np.sqrt(nearest.mean(axis=1)), f"dtm:{k}", 1.0, True)


def modulus_V(dm: DistanceMatrix, fv: FilterValues, delta: float) -> float:
    """max |f(X_i) - f(X_j)| over pairs at distance ``<= delta``."""
    if delta < 0:
        raise InputError(f"delta must be nonnegative, got {delta}")
    f = fv.values
    best = 0.0
    # row blocks keep the temporary n x block matrix small
    block = max(1, 4_000_000 // max(dm.n, 1))
    for start in range(0, dm.n, block):
        stop = min(dm.n, start + block)
        close = dm.d[start:stop] <= delta
        diff = np.abs(f[start:stop, None] - f[None, :])
        diff[~close] = 0.0
        best = max(best, float(diff.max(initial=0.0)))
    return best


def filter_from_spec(spec: str, pc: PointCloud, dm: DistanceMatrix | None = None) -> FilterValues:
    """Build a filter from ``coord:<axis>``, ``ecc``, ``pca:<k>`` or ``dtm:<k>``."""
    name, _, arg = spec.strip().partition(":")
    try:
        if name == "coord":
            return coordinate_filter(pc, int(arg))
        if name == "pca":
            return pca_filter(pc, int(arg) if arg else 1)
        if name == "ecc" and not arg:
            return eccentricity_filter(dm if dm is not None else pairwise_distances(pc))
        if name == "dtm":
            return dtm(dm if dm is not None else pairwise_distances(pc), int(arg))
    except ValueError as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad filter spec {spec!r}: {exc}") from None
    raise InputError(f"unknown filter spec {spec!r} (expected coord:<axis>, ecc, pca:<k> or dtm:<k>)")
