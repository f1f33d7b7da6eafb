"""Synthetic point clouds with documented parametrizations.

* ``circle``: unit circle, angle uniform (``stratified`` gives equal angles).
* ``figure_eight``: two unit circles centred at ``(+-1, 0)``, tangent at the origin.
* ``torus``: ring radius ``R=2``, tube radius ``r=1`` in R^3, area-uniform.
* ``klein4``: Klein bottle in R^4,
  ``((R + r cos v) cos u, (R + r cos v) sin u, r sin v cos(u/2), r sin v sin(u/2))``
  with ``R=2, r=1``, area-uniform by rejection.
* ``crater``: annulus ``0.8 <= |x| <= 1.2`` in the plane plus a fraction of
  points uniform on ``[-1.6, 1.6]^2``.
"""
from __future__ import annotations

import numpy as np

from .errors import InputError
from .geometry import PointCloud, as_rng

__all__ = ["SHAPES", "synth_shape", "implicit_residual"]

TORUS_R, TORUS_r = 2.0, 1.0
KLEIN_R, KLEIN_r = 2.0, 1.0
CRATER_INNER, CRATER_OUTER, CRATER_BOX = 0.8, 1.2, 1.6


def _circle(n, rng, stratified=False):
    t = 2 * np.pi * np.arange(n) / n if stratified else rng.uniform(0, 2 * np.pi, n)
    return np.column_stack([np.cos(t), np.sin(t)])


def _figure_eight(n, rng, stratified=False):
    if stratified:
        t = 2 * np.pi * np.arange(n) / n
        side = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    else:
        t = rng.uniform(0, 2 * np.pi, n)
        side = rng.choice([-1.0, 1.0], n)
    # both circles pass through the origin at t = pi
    return np.column_stack([side * (1 + np.cos(t)), np.sin(t)])


def _rejection(n, rng, weight, wmax):
    out_u, out_v = [], []
    got = 0
    while got < n:
        m = 2 * (n - got) + 16
        u = rng.uniform(0, 2 * np.pi, m)
        v = rng.uniform(0, 2 * np.pi, m)
        keep = rng.uniform(0, wmax, m) < weight(u, v)
        out_u.append(u[keep])
        out_v.append(v[keep])
        got += int(keep.sum())
    return np.concatenate(out_u)[:n], np.concatenate(out_v)[:n]


def _torus(n, rng, stratified=False):
    R, r = TORUS_R, TORUS_r
    u, v = _rejection(n, rng, lambda u, v: R + r * np.cos(v), R + r)
    rho = R + r * np.cos(v)
    return np.column_stack([rho * np.cos(u), rho * np.sin(u), r * np.sin(v)])


def _klein4(n, rng, stratified=False):
    R, r = KLEIN_R, KLEIN_r
    area = lambda u, v: np.sqrt((R + r * np.cos(v)) ** 2 + (r * np.sin(v)) ** 2 / 4)
    u, v = _rejection(n, rng, area, np.sqrt((R + r) ** 2 + r * r / 4))
    rho = R + r * np.cos(v)
    return np.column_stack([rho * np.cos(u), rho * np.sin(u),
                            r * np.sin(v) * np.cos(u / 2), r * np.sin(v) * np.sin(u / 2)])


def _crater(n, rng, stratified=False, background=0.1):
    n_bg = int(round(background * n))
    n_ring = n - n_bg
    t = rng.uniform(0, 2 * np.pi, n_ring)
    rad = np.sqrt(rng.uniform(CRATER_INNER ** 2, CRATER_OUTER ** 2, n_ring))
    ring = np.column_stack([rad * np.cos(t), rad * np.sin(t)])
    bg = rng.uniform(-CRATER_BOX, CRATER_BOX, (n_bg, 2))
    return np.vstack([ring, bg])


SHAPES = {
    "circle": _circle,
    "figure_eight": _figure_eight,
    "torus": _torus,
    "klein4": _klein4,
    "crater": _crater,
}


def synth_shape(name: str, n: int, noise_sd: float = 0.0, rng=None, stratified: bool = False,
                **kwargs) -> PointCloud:
    """Sample ``n`` points on a named shape, plus isotropic Gaussian jitter."""
    if name not in SHAPES:
        raise InputError(f"unknown shape {name!r}; expected one of {sorted(SHAPES)}")
    if n < 1:
        raise InputError(f"need n >= 1, got {n}")
    if noise_sd < 0:
        raise InputError(f"noise_sd must be nonnegative, got {noise_sd}")
    rng = as_rng(rng)
    pts = SHAPES[name](n, rng, stratified, **kwargs)
    if noise_sd > 0:
        pts = pts + rng.normal(scale=noise_sd, size=pts.shape)
    return PointCloud(pts)


def implicit_residual(name: str, points: np.ndarray) -> np.ndarray:
    """Residual of the shape's defining equation (zero on the shape).

    For ``crater`` this is the distance of the radius to the annulus, so
    background points usually have a positive residual.
    """
    p = np.asarray(points, dtype=float)
    if name == "circle":
        return p[:, 0] ** 2 + p[:, 1] ** 2 - 1
    if name == "figure_eight":
        left = (p[:, 0] + 1) ** 2 + p[:, 1] ** 2 - 1
        right = (p[:, 0] - 1) ** 2 + p[:, 1] ** 2 - 1
        return np.where(np.abs(left) < np.abs(right), left, right)
    if name == "torus":
        return (np.hypot(p[:, 0], p[:, 1]) - TORUS_R) ** 2 + p[:, 2] ** 2 - TORUS_r ** 2
    if name == "klein4":
        return (np.hypot(p[:, 0], p[:, 1]) - KLEIN_R) ** 2 + p[:, 2] ** 2 + p[:, 3] ** 2 - KLEIN_r ** 2
    if name == "crater":
        rad = np.hypot(p[:, 0], p[:, 1])
        return np.maximum(0.0, np.maximum(CRATER_INNER - rad, rad - CRATER_OUTER))
    raise InputError(f"unknown shape {name!r}")
